#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "fairdg/reputation_chain.hpp"
#include "fairdg/strategy_dynamics.hpp"

namespace fairdg {

/// Fixed fair-action probability assumed for silent discriminators, whose
/// population never learns anyone's reputation.
inline constexpr double silent_discriminator_fairness = 0.1;

namespace detail {
inline bool unconditional(Strategy x) noexcept { return x.fair_to_good() == x.fair_to_bad(); }
inline bool silent_discriminator(Strategy x) noexcept { return !unconditional(x) && !x.reports(); }
} // namespace detail

/// Probability of a fair division in a monomorphic population of `x` with i
/// good players.
inline double p_fair(int i, Strategy x, RoleAssignment role, const Params& params)
{
    const int zi = params.population();
    if (i < 0 || i > zi) {
        throw std::out_of_range("good count outside [0, Z]");
    }
    const double eps = params.epsilon();
    if (detail::unconditional(x)) {
        return x.fair_to_good() ? 1.0 - eps : 0.0;
    }
    if (!x.reports()) {
        return silent_discriminator_fairness;
    }
    const double z = zi;
    const double ig = x.fair_good_indicator();
    const double ib = x.fair_bad_indicator();
    if (role == RoleAssignment::Random) {
        return (1.0 - eps) * ig * i / z + (1.0 - eps) * ib * (z - i) / z;
    }
    const double both_good = static_cast<double>(i) * (i - 1) / (z * (z - 1));
    const double other = (z * z - z - static_cast<double>(i) * i + i) / (z * (z - 1));
    return (1.0 - eps) * (both_good * ig + other * ib);
}

/// Long-run fairness of a monomorphic population of `x`.
inline double f_fair(Strategy x, const SocialNorm& norm, RoleAssignment role, const Params& params,
                     const StationaryOptions& opt = {})
{
    if (detail::unconditional(x) || detail::silent_discriminator(x)) {
        return p_fair(0, x, role, params);
    }
    const auto chain = monomorphic_chain(x, norm, role, params, opt);
    const auto v = chain.distribution.x_marginal();
    double f = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        f += v[i] * p_fair(static_cast<int>(i), x, role, params);
    }
    return f;
}

using StrategyVector = std::array<double, Strategy::count>;

inline StrategyVector fairness_levels(const SocialNorm& norm, RoleAssignment role, const Params& params,
                                      const StationaryOptions& opt = {})
{
    StrategyVector out{};
    for (const Strategy x : all_strategies()) {
        out[x.index()] = f_fair(x, norm, role, params, opt);
    }
    return out;
}

struct FairnessReport {
    SocialNorm norm;
    RoleAssignment role = RoleAssignment::Random;
    Params params;
    StrategyVector phi{};
    StrategyVector fairness{};
    double total = 0.0;
};

inline FairnessReport make_report(const SocialNorm& norm, RoleAssignment role, const Params& params,
                                  const EmbeddedChain& chain, const StrategyVector& levels)
{
    FairnessReport r{norm, role, params, chain.phi, levels, 0.0};
    for (std::size_t k = 0; k < Strategy::count; ++k) {
        r.total += r.phi[k] * r.fairness[k];
    }
    return r;
}

/// Reuses a landscape (which fixes Z, epsilon and c_R) for another beta or mu.
inline FairnessReport total_fairness(const PayoffLandscape& land, const StrategyVector& levels, double beta,
                                     double mu)
{
    const auto chain = embedded_chain(land, beta, mu);
    return make_report(land.norm(), land.role(), land.params().with_beta(beta).with_mu(mu), chain, levels);
}

inline FairnessReport total_fairness(const SocialNorm& norm, RoleAssignment role, const Params& params,
                                     unsigned jobs = detail::default_jobs())
{
    const PayoffLandscape land(norm, role, params, jobs);
    return total_fairness(land, fairness_levels(norm, role, params), params.beta(), params.mu());
}

} // namespace fairdg

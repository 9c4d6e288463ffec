#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "fairdg/payoffs.hpp"
#include "fairdg/reputation_chain.hpp"

namespace fairdg {

/// Fermi rule: probability that the focal player copies the model.
inline double imitation_prob(double g_focal, double g_model, double beta) noexcept
{
    return 1.0 / (1.0 + std::exp(-beta * (g_model - g_focal)));
}

struct StepProbs {
    double plus = 0.0;   // X-count grows by one
    double minus = 0.0;  // X-count shrinks by one
};

/// Gain/loss probabilities of X with m X-players and payoffs `g`.
inline StepProbs step_probs(const PayoffPair& g, int m, int population, double beta)
{
    if (m < 1 || m > population - 1) {
        throw std::out_of_range("step probabilities need 1 <= m <= Z-1");
    }
    const double z = population;
    const double meet = (z - m) / z * (m / (z - 1.0));
    return {meet * imitation_prob(g.y, g.x, beta), meet * imitation_prob(g.x, g.y, beta)};
}

/// Solves the reputation chain of the setting and returns its T+ and T-.
inline StepProbs step_probs(const PairwiseSetting& s, const StationaryOptions& opt = {})
{
    if (s.m < 1 || s.m > s.population() - 1) {
        throw std::out_of_range("step probabilities need 1 <= m <= Z-1");
    }
    const auto chain = solve_chain(s, opt);
    return step_probs(expected_payoffs(s, chain.distribution), s.m, s.population(), s.params.beta());
}

/// g_X(m), g_Y(m) for m = 1..Z-1 with X the mutant. These do not depend on
/// beta or mu, so one gradient serves a whole selection-intensity sweep.
struct PayoffGradient {
    Strategy mutant;
    Strategy resident;
    std::vector<PayoffPair> by_count;  // element m-1

    int population() const noexcept { return static_cast<int>(by_count.size()) + 1; }
    const PayoffPair& at(int m) const { return by_count.at(static_cast<std::size_t>(m - 1)); }

    /// Same data seen from the resident's side.
    PayoffGradient reversed() const
    {
        PayoffGradient r{resident, mutant, std::vector<PayoffPair>(by_count.size())};
        const std::size_t n = by_count.size();
        for (std::size_t k = 0; k < n; ++k) {
            r.by_count[k] = {by_count[n - 1 - k].y, by_count[n - 1 - k].x};
        }
        return r;
    }
};

inline PayoffGradient payoff_gradient(Strategy mutant, Strategy resident, const SocialNorm& norm,
                                      RoleAssignment role, const Params& params,
                                      const StationaryOptions& opt = {})
{
    const int z = params.population();
    PayoffGradient out{mutant, resident, std::vector<PayoffPair>(static_cast<std::size_t>(z - 1))};
    for (int m = 1; m < z; ++m) {
        const PairwiseSetting s{mutant, resident, m, norm, role, params};
        const auto chain = solve_chain(s, opt);
        out.by_count[static_cast<std::size_t>(m - 1)] = expected_payoffs(s, chain.distribution);
    }
    return out;
}

/// Fixation probability of a single mutant from its payoff gradient.
inline double fixation_from_gradient(const PayoffGradient& g, double beta)
{
    // T-/T+ at m equals exp(-beta (g_X - g_Y)); accumulate the products as
    // running log sums.
    std::vector<double> logs;
    logs.reserve(g.by_count.size());
    double acc = 0.0;
    double peak = 0.0;
    for (const auto& p : g.by_count) {
        acc += -beta * (p.x - p.y);
        logs.push_back(acc);
        peak = std::max(peak, acc);
    }
    if (peak < 600.0) {
        double sum = 0.0;
        for (double l : logs) sum += std::exp(l);
        return 1.0 / (1.0 + sum);
    }
    double scaled = std::exp(-peak);
    for (double l : logs) scaled += std::exp(l - peak);
    return std::exp(-(peak + std::log(scaled)));
}

/// Probability that one `mutant` takes over a population of `resident`.
inline double fixation_prob(Strategy mutant, Strategy resident, const SocialNorm& norm,
                            RoleAssignment role, const Params& params, const StationaryOptions& opt = {})
{
    return fixation_from_gradient(payoff_gradient(mutant, resident, norm, role, params, opt), params.beta());
}

// ---------------------------------------------------------------------------

namespace detail {

/// Runs fn(k) for k in [0, n) on up to `jobs` threads. Results must be
/// written to per-index slots; the first exception by index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn)
{
    std::vector<std::exception_ptr> errors(n);
    if (jobs <= 1 || n <= 1) {
        for (std::size_t k = 0; k < n; ++k) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n; k = next++) {
                    try {
                        fn(k);
                    } catch (...) {
                        errors[k] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

inline unsigned default_jobs() noexcept
{
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1U : hc;
}

} // namespace detail

/// Payoff gradients for all 28 strategy pairs under one norm and role rule.
/// Everything downstream of the reputation chains (fixation probabilities,
/// the embedded chain) can be re-evaluated for any beta or mu from this.
class PayoffLandscape {
public:
    PayoffLandscape(const SocialNorm& norm, RoleAssignment role, const Params& params,
                    unsigned jobs = detail::default_jobs(), const StationaryOptions& opt = {})
        : norm_(norm), role_(role), params_(params)
    {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t a = 0; a < Strategy::count; ++a) {
            for (std::size_t b = a + 1; b < Strategy::count; ++b) pairs.emplace_back(a, b);
        }
        std::vector<PayoffGradient> slots(pairs.size());
        detail::parallel_for(pairs.size(), jobs, [&](std::size_t k) {
            slots[k] = payoff_gradient(Strategy::from_index(pairs[k].first), Strategy::from_index(pairs[k].second),
                                       norm_, role_, params_, opt);
        });
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto [a, b] = pairs[k];
            gradients_[b][a] = slots[k].reversed();
            gradients_[a][b] = std::move(slots[k]);
        }
    }

    const SocialNorm& norm() const noexcept { return norm_; }
    RoleAssignment role() const noexcept { return role_; }
    const Params& params() const noexcept { return params_; }

    const PayoffGradient& gradient(Strategy mutant, Strategy resident) const
    {
        if (mutant == resident) {
            throw std::invalid_argument("no gradient for identical strategies");
        }
        return gradients_[mutant.index()][resident.index()];
    }

    double rho(Strategy mutant, Strategy resident, double beta) const
    {
        if (mutant == resident) return 1.0 / params_.population();
        return fixation_from_gradient(gradient(mutant, resident), beta);
    }

private:
    SocialNorm norm_;
    RoleAssignment role_;
    Params params_;
    std::array<std::array<PayoffGradient, Strategy::count>, Strategy::count> gradients_{};
};

/// Small-mutation chain over the eight monomorphic populations. Row X is the
/// current resident; a[X][Y] = (mu/8) rho(Y into X) off the diagonal.
struct EmbeddedChain {
    using Matrix = std::array<std::array<double, Strategy::count>, Strategy::count>;
    Matrix a{};
    std::array<double, Strategy::count> phi{};

    double residual() const
    {
        double worst = 0.0;
        for (std::size_t c = 0; c < Strategy::count; ++c) {
            double v = 0.0;
            for (std::size_t r = 0; r < Strategy::count; ++r) v += phi[r] * a[r][c];
            worst = std::max(worst, std::abs(v - phi[c]));
        }
        return worst;
    }
};

inline EmbeddedChain embedded_chain(const PayoffLandscape& land, double beta, double mu)
{
    constexpr std::size_t n = Strategy::count;
    EmbeddedChain out;
    // Generator with the diagonal formed from the off-diagonal sums directly,
    // so the solve sees no 1 - (1 - x) cancellation.
    Eigen::Matrix<double, n, n> q = Eigen::Matrix<double, n, n>::Zero();
    for (std::size_t x = 0; x < n; ++x) {
        double off = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            const double v = mu / 8.0 * land.rho(Strategy::from_index(y), Strategy::from_index(x), beta);
            out.a[x][y] = v;
            q(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = v;
            off += v;
        }
        out.a[x][x] = 1.0 - off;
        q(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = -off;
    }
    Eigen::Matrix<double, n, n> sys = q.transpose();
    sys.row(0).setOnes();
    Eigen::Matrix<double, n, 1> rhs = Eigen::Matrix<double, n, 1>::Zero();
    rhs(0) = 1.0;
    const Eigen::Matrix<double, n, 1> phi = sys.fullPivLu().solve(rhs);
    for (std::size_t k = 0; k < n; ++k) out.phi[k] = phi(static_cast<Eigen::Index>(k));
    return out;
}

inline EmbeddedChain embedded_chain(const SocialNorm& norm, RoleAssignment role, const Params& params,
                                    unsigned jobs = detail::default_jobs())
{
    const PayoffLandscape land(norm, role, params, jobs);
    return embedded_chain(land, params.beta(), params.mu());
}

} // namespace fairdg

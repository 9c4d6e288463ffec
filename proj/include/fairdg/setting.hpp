#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fairdg/norms.hpp"

namespace fairdg {

enum class RoleAssignment { Random, ReputationBased };

inline std::string_view to_string(RoleAssignment role) noexcept
{
    return role == RoleAssignment::Random ? "random" : "reputation";
}

inline RoleAssignment parse_role(std::string_view text)
{
    if (text == "random") return RoleAssignment::Random;
    if (text == "reputation" || text == "reputation_based" || text == "reputation-based") {
        return RoleAssignment::ReputationBased;
    }
    throw std::invalid_argument("unknown role assignment '" + std::string(text) + "'");
}

/// Population and evolutionary parameters. Ranges are checked on construction.
class Params {
public:
    Params() = default;
    Params(int population, double epsilon, double report_cost, double mu, double beta)
        : population_(population), epsilon_(epsilon), report_cost_(report_cost), mu_(mu), beta_(beta)
    {
        if (population < 3) {
            throw std::invalid_argument("population size must be at least 3");
        }
        if (!(epsilon >= 0.0 && epsilon < 1.0)) {
            throw std::invalid_argument("epsilon must lie in [0, 1)");
        }
        if (!(report_cost >= 0.0) || !std::isfinite(report_cost)) {
            throw std::invalid_argument("report cost must be finite and non-negative");
        }
        if (!(mu > 0.0 && mu <= 1.0)) {
            throw std::invalid_argument("mu must lie in (0, 1]");
        }
        if (!(beta >= 0.0) || !std::isfinite(beta)) {
            throw std::invalid_argument("beta must be finite and non-negative");
        }
    }

    int population() const noexcept { return population_; }
    double epsilon() const noexcept { return epsilon_; }
    double report_cost() const noexcept { return report_cost_; }
    double mu() const noexcept { return mu_; }
    double beta() const noexcept { return beta_; }

    Params with_beta(double beta) const { return {population_, epsilon_, report_cost_, mu_, beta}; }
    Params with_mu(double mu) const { return {population_, epsilon_, report_cost_, mu, beta_}; }
    Params with_report_cost(double c) const { return {population_, epsilon_, c, mu_, beta_}; }
    Params with_epsilon(double e) const { return {population_, e, report_cost_, mu_, beta_}; }
    Params with_population(int z) const { return {z, epsilon_, report_cost_, mu_, beta_}; }

    friend bool operator==(const Params&, const Params&) = default;

private:
    int population_ = 50;
    double epsilon_ = 0.01;
    double report_cost_ = 0.01;
    double mu_ = 0.01;
    double beta_ = 0.0;
};

/// m players use strategy X, Z - m use strategy Y.
struct PairwiseSetting {
    Strategy x;
    Strategy y;
    int m = 0;
    SocialNorm norm;
    RoleAssignment role = RoleAssignment::Random;
    Params params;

    int population() const noexcept { return params.population(); }
    int y_count() const noexcept { return params.population() - m; }

    void validate() const
    {
        if (m < 0 || m > params.population()) {
            throw std::invalid_argument("mutant count m=" + std::to_string(m) + " outside [0, Z]");
        }
    }

    /// Same population with the X and Y labels exchanged.
    PairwiseSetting swapped() const { return {y, x, params.population() - m, norm, role, params}; }
};

inline PairwiseSetting monomorphic_setting(Strategy s, const SocialNorm& norm, RoleAssignment role,
                                           const Params& params)
{
    return {s, s, params.population(), norm, role, params};
}

} // namespace fairdg

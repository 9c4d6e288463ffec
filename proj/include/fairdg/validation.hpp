#pragma once

// Cross-checks of the analytic solver against the brute-force oracles. Used
// by the `validate` command and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fairdg/abm.hpp"
#include "fairdg/fairness.hpp"
#include "fairdg/oracles.hpp"
#include "fairdg/strategy_dynamics.hpp"

namespace fairdg {

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;      // largest observed deviation (or scaled deviation)
    double tolerance = 0.0;
    std::size_t cases = 0;
    std::string detail;
};

namespace detail {

inline std::string fmt_g(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Draws a pair of distinct strategies.
inline std::pair<Strategy, Strategy> draw_pair(std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, Strategy::count - 1);
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    while (b == a) b = pick(rng);
    return {Strategy::from_index(a), Strategy::from_index(b)};
}

} // namespace detail

// ---------------------------------------------------------------------------
// One-step Monte Carlo vs analytic transition rows

struct OneStepOptions {
    std::vector<int> populations{3, 4, 5};
    int pairs_per_population = 6;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 20240601;
    double epsilon = 0.01;
    /// Added to epsilon for the analytic rows only; a nonzero value must make
    /// the check fail.
    double analytic_epsilon_shift = 0.0;
    double sigma_multiple = 3.0;
    double absolute_floor = 5e-3;
    unsigned jobs = detail::default_jobs();
};

/// Every row of the analytic matrix for random (Z, pair, m) draws, both roles
/// and the four named norms, against a simulated round. An entry passes when
/// |p_mc - p| <= max(k sigma, floor) with sigma = sqrt(p (1 - p) / N).
inline CheckResult check_one_step(const OneStepOptions& opt = {})
{
    struct Case {
        PairwiseSetting setting;
        PairwiseSetting analytic;
        std::uint64_t seed;
    };
    std::vector<Case> cases;
    std::mt19937_64 rng(splitmix64(opt.seed));
    for (int z : opt.populations) {
        const Params p(z, opt.epsilon, 0.01, 0.01, 0.0);
        const Params shifted(z, opt.epsilon + opt.analytic_epsilon_shift, 0.01, 0.01, 0.0);
        for (int k = 0; k < opt.pairs_per_population; ++k) {
            const auto [x, y] = detail::draw_pair(rng);
            const int m = std::uniform_int_distribution<int>(1, z - 1)(rng);
            for (RoleAssignment role : {RoleAssignment::Random, RoleAssignment::ReputationBased}) {
                for (const auto& nn : named_norms) {
                    cases.push_back({{x, y, m, nn.norm, role, p}, {x, y, m, nn.norm, role, shifted}, rng()});
                }
            }
        }
    }

    struct Worst {
        double ratio = 0.0;
        std::string where;
        std::size_t rows = 0;
    };
    std::vector<Worst> worst(cases.size());
    detail::parallel_for(cases.size(), opt.jobs, [&](std::size_t c) {
        const auto& cs = cases[c];
        const auto matrix = transition_matrix(cs.analytic);
        const StateGrid& grid = matrix.grid();
        for (std::size_t from = 0; from < grid.size(); ++from) {
            const auto sim = oracle::simulate_one_step(cs.setting, grid.state(from), opt.samples,
                                                       cs.seed ^ splitmix64(from));
            for (std::size_t to = 0; to < grid.size(); ++to) {
                const double p = matrix(from, to);
                const double q = static_cast<double>(sim.hits[to]) / static_cast<double>(sim.samples);
                const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(sim.samples));
                const double tol = std::max(opt.sigma_multiple * sigma, opt.absolute_floor);
                const double r = std::abs(q - p) / tol;
                if (r > worst[c].ratio) {
                    const RepState a = grid.state(from), b = grid.state(to);
                    worst[c].ratio = r;
                    worst[c].where = "Z=" + std::to_string(cs.setting.population()) + " " + cs.setting.x.name() +
                                     "/" + cs.setting.y.name() + " m=" + std::to_string(cs.setting.m) + " " +
                                     std::string(to_string(cs.setting.role)) + " " + norm_label(cs.setting.norm) +
                                     " (" + std::to_string(a.i) + "," + std::to_string(a.j) + ")->(" +
                                     std::to_string(b.i) + "," + std::to_string(b.j) + ") analytic " +
                                     detail::fmt_g(p) + " simulated " + detail::fmt_g(q);
                }
            }
            ++worst[c].rows;
        }
    });

    CheckResult out{"one-step", true, 0.0, 1.0, 0, ""};
    for (const auto& w : worst) {
        out.cases += w.rows;
        if (w.ratio > out.worst) {
            out.worst = w.ratio;
            out.detail = w.where;
        }
    }
    out.passed = out.worst <= out.tolerance;
    out.detail = std::to_string(out.cases) + " rows; worst scaled deviation at " + out.detail;
    return out;
}

// ---------------------------------------------------------------------------
// Closed-form fixation probability vs first-step equations

struct FixationOptions {
    int settings = 10;
    int max_population = 6;
    std::uint64_t seed = 7;
    double tolerance = 1e-10;
};

inline CheckResult check_fixation(const FixationOptions& opt = {})
{
    std::mt19937_64 rng(splitmix64(opt.seed));
    const std::array<double, 4> betas{0.3, 1.0, 2.5, 10.0};
    CheckResult out{"fixation", true, 0.0, opt.tolerance, 0, ""};
    for (int k = 0; k < opt.settings; ++k) {
        const int z = std::uniform_int_distribution<int>(3, opt.max_population)(rng);
        const auto [x, y] = detail::draw_pair(rng);
        const auto& nn = named_norms[std::uniform_int_distribution<std::size_t>(0, 3)(rng)];
        const RoleAssignment role = k % 2 == 0 ? RoleAssignment::Random : RoleAssignment::ReputationBased;
        const double beta = betas[std::uniform_int_distribution<std::size_t>(0, betas.size() - 1)(rng)];
        const Params p(z, 0.01, 0.01, 0.01, beta);

        const auto g = payoff_gradient(x, y, nn.norm, role, p);
        std::vector<double> tp, tm;
        for (int m = 1; m < z; ++m) {
            const auto t = step_probs(g.at(m), m, z, beta);
            tp.push_back(t.plus);
            tm.push_back(t.minus);
        }
        const double closed = fixation_from_gradient(g, beta);
        const double direct = oracle::absorption_from_one(tp, tm);
        const double d = std::abs(closed - direct);
        ++out.cases;
        if (d >= out.worst) {
            out.worst = d;
            out.detail = "Z=" + std::to_string(z) + " " + x.name() + " into " + y.name() + " " +
                         std::string(to_string(role)) + " " + std::string(nn.abbreviation) + " beta=" +
                         detail::fmt_g(beta) + ": closed form " + detail::fmt_g(closed) + ", first-step " +
                         detail::fmt_g(direct);
        }
    }
    out.passed = out.worst <= out.tolerance;
    return out;
}

// ---------------------------------------------------------------------------
// Invariance of the embedded-chain stationary vector under mu

struct MuInvarianceOptions {
    Params params{50, 0.01, 0.01, 0.01, 0.6};
    SocialNorm norm = stern_judging;
    std::vector<double> mus{0.001, 0.01, 0.1};
    double tolerance = 1e-12;
    unsigned jobs = detail::default_jobs();
};

inline CheckResult check_mu_invariance(const MuInvarianceOptions& opt = {})
{
    CheckResult out{"mu-invariance", true, 0.0, opt.tolerance, 0, ""};
    for (RoleAssignment role : {RoleAssignment::Random, RoleAssignment::ReputationBased}) {
        const PayoffLandscape land(opt.norm, role, opt.params, opt.jobs);
        const auto ref = embedded_chain(land, opt.params.beta(), opt.mus.front());
        for (double mu : opt.mus) {
            const auto c = embedded_chain(land, opt.params.beta(), mu);
            ++out.cases;
            for (std::size_t k = 0; k < Strategy::count; ++k) {
                const double d = std::abs(c.phi[k] - ref.phi[k]);
                if (d >= out.worst) {
                    out.worst = d;
                    out.detail = std::string(to_string(role)) + " mu=" + detail::fmt_g(mu) + " phi_" +
                                 Strategy::from_index(k).name();
                }
            }
        }
    }
    out.passed = out.worst <= out.tolerance;
    return out;
}

} // namespace fairdg

#pragma once

// Brute-force reference computations for cross-checking the solver. None of
// these call into the code paths they are used to check.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fairdg/norms.hpp"
#include "fairdg/reputation_chain.hpp"
#include "fairdg/setting.hpp"

namespace fairdg::oracle {

// ---------------------------------------------------------------------------
// Literal transcription of the conditional transition probabilities, one
// expression per (move, observer event, role rule).

struct Conditional {
    double up_x, down_x, up_y, down_y;
};

inline Conditional closed_form(const PairwiseSetting& s, RepState st, Group observer)
{
    const double Z = s.population();
    const double m = s.m;
    const double i = st.i;
    const double j = st.j;
    const double e = s.params.epsilon();
    const auto& SG = s.norm.if_good;
    const auto& SB = s.norm.if_bad;
    auto F_G = [](const NormVector& v) { return double(v.bit(Action::Fair, Reputation::Good)); };
    auto F_B = [](const NormVector& v) { return double(v.bit(Action::Fair, Reputation::Bad)); };
    auto N_G = [](const NormVector& v) { return double(v.bit(Action::Unfair, Reputation::Good)); };
    auto N_B = [](const NormVector& v) { return double(v.bit(Action::Unfair, Reputation::Bad)); };
    const double IGX = s.x.fair_good_indicator(), IBX = s.x.fair_bad_indicator();
    const double IGY = s.y.fair_good_indicator(), IBY = s.y.fair_bad_indicator();

    // bad -> good against a good / bad recipient under S^B
    const double upGX = IGX * (1 - e) * F_G(SB) + (IGX * e + 1 - IGX) * N_G(SB);
    const double upBX = IBX * (1 - e) * F_B(SB) + (IBX * e + 1 - IBX) * N_B(SB);
    const double upGY = IGY * (1 - e) * F_G(SB) + (IGY * e + 1 - IGY) * N_G(SB);
    const double upBY = IBY * (1 - e) * F_B(SB) + (IBY * e + 1 - IBY) * N_B(SB);
    // good -> bad under S^G
    const double dnGX = IGX * (1 - e) * (1 - F_G(SG)) + (IGX * e + 1 - IGX) * (1 - N_G(SG));
    const double dnBX = IBX * (1 - e) * (1 - F_B(SG)) + (IBX * e + 1 - IBX) * (1 - N_B(SG));
    const double dnGY = IGY * (1 - e) * (1 - F_G(SG)) + (IGY * e + 1 - IGY) * (1 - N_G(SG));
    const double dnBY = IBY * (1 - e) * (1 - F_B(SG)) + (IBY * e + 1 - IBY) * (1 - N_B(SG));

    const bool XB = observer == Group::XBad, YB = observer == Group::YBad;
    const bool XG = observer == Group::XGood, YG = observer == Group::YGood;
    Conditional c{};
    if (s.role == RoleAssignment::Random) {
        if (XB) c.up_x = (m - i - 1) / (Z - 1) * ((i + j) / (Z - 2) * upGX + (Z - 2 - i - j) / (Z - 2) * upBX);
        if (YB) c.up_x = (m - i) / (Z - 1) * ((i + j) / (Z - 2) * upGX + (Z - 2 - i - j) / (Z - 2) * upBX);
        if (XG || YG) c.up_x = (m - i) / (Z - 1) * ((i + j - 1) / (Z - 2) * upGX + (Z - 1 - i - j) / (Z - 2) * upBX);

        if (XB || YB) c.down_x = i / (Z - 1) * ((i + j - 1) / (Z - 2) * dnGX + (Z - 1 - i - j) / (Z - 2) * dnBX);
        if (XG) c.down_x = (i - 1) / (Z - 1) * ((i + j - 2) / (Z - 2) * dnGX + (Z - i - j) / (Z - 2) * dnBX);
        if (YG) c.down_x = i / (Z - 1) * ((i + j - 2) / (Z - 2) * dnGX + (Z - i - j) / (Z - 2) * dnBX);

        if (XB) c.up_y = (Z - m - j) / (Z - 1) * ((i + j) / (Z - 2) * upGY + (Z - 2 - i - j) / (Z - 2) * upBY);
        if (YB) c.up_y = (Z - m - j - 1) / (Z - 1) * ((i + j) / (Z - 2) * upGY + (Z - 2 - i - j) / (Z - 2) * upBY);
        if (XG || YG) c.up_y = (Z - m - j) / (Z - 1) * ((i + j - 1) / (Z - 2) * upGY + (Z - 1 - i - j) / (Z - 2) * upBY);

        if (XB || YB) c.down_y = j / (Z - 1) * ((i + j - 1) / (Z - 2) * dnGY + (Z - 1 - i - j) / (Z - 2) * dnBY);
        if (XG) c.down_y = j / (Z - 1) * ((i + j - 2) / (Z - 2) * dnGY + (Z - i - j) / (Z - 2) * dnBY);
        if (YG) c.down_y = (j - 1) / (Z - 1) * ((i + j - 2) / (Z - 2) * dnGY + (Z - i - j) / (Z - 2) * dnBY);
    } else {
        if (XB) c.up_x = (m - i - 1) / (Z - 1) * (Z - i - j - 2) / (Z - 2) * upBX;
        if (YB) c.up_x = (m - i) / (Z - 1) * (Z - i - j - 2) / (Z - 2) * upBX;
        if (XG || YG) c.up_x = (m - i) / (Z - 1) * (Z - i - j - 1) / (Z - 2) * upBX;

        if (XB || YB) c.down_x = i / (Z - 1) * ((i + j - 1) / (Z - 2) * dnGX + 2 * (Z - 1 - i - j) / (Z - 2) * dnBX);
        if (XG) c.down_x = (i - 1) / (Z - 1) * ((i + j - 2) / (Z - 2) * dnGX + 2 * (Z - i - j) / (Z - 2) * dnBX);
        if (YG) c.down_x = i / (Z - 1) * ((i + j - 2) / (Z - 2) * dnGX + 2 * (Z - i - j) / (Z - 2) * dnBX);

        if (XB) c.up_y = (Z - m - j) / (Z - 1) * (Z - i - j - 2) / (Z - 2) * upBY;
        if (YB) c.up_y = (Z - m - j - 1) / (Z - 1) * (Z - i - j - 2) / (Z - 2) * upBY;
        if (XG || YG) c.up_y = (Z - m - j) / (Z - 1) * (Z - i - j - 1) / (Z - 2) * upBY;

        if (XB || YB) c.down_y = j / (Z - 1) * ((i + j - 1) / (Z - 2) * dnGY + 2 * (Z - 1 - i - j) / (Z - 2) * dnBY);
        if (XG) c.down_y = j / (Z - 1) * ((i + j - 2) / (Z - 2) * dnGY + 2 * (Z - i - j) / (Z - 2) * dnBY);
        if (YG) c.down_y = (j - 1) / (Z - 1) * ((i + j - 2) / (Z - 2) * dnGY + 2 * (Z - i - j) / (Z - 2) * dnBY);
    }
    return c;
}

// ---------------------------------------------------------------------------
// One-step Monte Carlo: simulate a single round on an explicit population.

struct OneStepCounts {
    std::vector<std::uint64_t> hits;  // indexed by destination state
    std::uint64_t samples = 0;
};

inline OneStepCounts simulate_one_step(const PairwiseSetting& s, RepState from, std::uint64_t samples,
                                       std::uint64_t seed)
{
    const int z = s.population();
    std::vector<Strategy> strat(static_cast<std::size_t>(z));
    std::vector<bool> good(static_cast<std::size_t>(z));
    std::vector<bool> is_x(static_cast<std::size_t>(z));
    for (int k = 0; k < z; ++k) {
        const bool x = k < s.m;
        is_x[k] = x;
        strat[k] = x ? s.x : s.y;
        good[k] = x ? k < from.i : (k - s.m) < from.j;
    }
    const StateGrid grid(s);
    OneStepCounts out{std::vector<std::uint64_t>(grid.size(), 0), samples};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, z - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (std::uint64_t n = 0; n < samples; ++n) {
        RepState to = from;
        const int obs = pick(rng);
        if (strat[obs].reports()) {
            int a, b;
            do { a = pick(rng); } while (a == obs);
            do { b = pick(rng); } while (b == obs || b == a);
            int dict = a, rec = b;
            bool coin = unit(rng) < 0.5;
            if (s.role == RoleAssignment::ReputationBased && good[a] != good[b]) {
                coin = good[a];
            }
            if (!coin) std::swap(dict, rec);
            const Reputation rrep = good[rec] ? Reputation::Good : Reputation::Bad;
            const bool intend = strat[dict].intends_fair(rrep);
            const bool fair = intend && unit(rng) >= s.params.epsilon();
            const Reputation before = good[dict] ? Reputation::Good : Reputation::Bad;
            const Reputation after = assess(s.norm, before, fair ? Action::Fair : Action::Unfair, rrep);
            if (after != before) {
                const int d = is_good(after) ? 1 : -1;
                if (is_x[dict]) to.i += d; else to.j += d;
            }
        }
        ++out.hits[grid.index(to)];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Birth-death absorption: probability of reaching Z from 1 by solving the
// first-step equations directly.

inline double absorption_from_one(const std::vector<double>& t_plus, const std::vector<double>& t_minus)
{
    // Unknowns x_1..x_{Z-1}; x_0 = 0, x_Z = 1.
    const std::size_t n = t_plus.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        a[r][r] = t_plus[r] + t_minus[r];
        if (r + 1 < n) a[r][r + 1] = -t_plus[r];
        else a[r][n] = t_plus[r];
        if (r > 0) a[r][r - 1] = -t_minus[r];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return a[0][n] / a[0][0];
}

// ---------------------------------------------------------------------------
// Brute-force per-interaction payoff for a focal player of species X, by
// enumerating the focal's reputation, the partner and the role. Matches the
// closed forms for random roles and for monomorphic populations.

inline double enumerated_payoff(const PairwiseSetting& s, RepState st)
{
    const int z = s.population();
    const double eps = s.params.epsilon();
    struct Cls { Strategy strat; Reputation rep; int count; };
    std::vector<Cls> classes{{s.x, Reputation::Good, st.i}, {s.x, Reputation::Bad, s.m - st.i},
                             {s.y, Reputation::Good, st.j}, {s.y, Reputation::Bad, s.y_count() - st.j}};
    double total = 0.0;
    for (int focal_cls = 0; focal_cls < 2; ++focal_cls) {
        const auto& f = classes[focal_cls];
        if (f.count == 0) continue;
        const double p_focal = double(f.count) / s.m;
        for (std::size_t k = 0; k < classes.size(); ++k) {
            const int n = classes[k].count - (static_cast<int>(k) == focal_cls ? 1 : 0);
            if (n <= 0) continue;
            const auto& partner = classes[k];
            const double p_partner = double(n) / (z - 1);
            double p_dict = 0.5;
            if (s.role == RoleAssignment::ReputationBased && f.rep != partner.rep) {
                p_dict = is_good(f.rep) ? 1.0 : 0.0;
            }
            const double fair_as_dict = f.strat.intends_fair(partner.rep) ? 1.0 - eps : 0.0;
            const double fair_as_rec = partner.strat.intends_fair(f.rep) ? 1.0 - eps : 0.0;
            const double as_dict = fair_as_dict * 0.5 + (1.0 - fair_as_dict) * 1.0;
            const double as_rec = fair_as_rec * 0.5;
            total += p_focal * p_partner * (p_dict * as_dict + (1.0 - p_dict) * as_rec);
        }
    }
    return total - s.params.report_cost() * s.x.report_indicator();
}

} // namespace fairdg::oracle

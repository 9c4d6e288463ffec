#pragma once

#include <stdexcept>

#include "fairdg/reputation_chain.hpp"
#include "fairdg/setting.hpp"

namespace fairdg {

enum class Species { X, Y };

/// Per-round expected payoffs of the two strategies.
struct PayoffPair {
    double x = 0.0;
    double y = 0.0;
};

namespace detail {

/// num/den, with 0 for an empty denominator. Every such term in the payoff
/// expressions carries a zero prefactor, so its value never matters.
constexpr double ratio(double num, double den) noexcept { return den == 0.0 ? 0.0 : num / den; }

/// Expected payoff of a member of the focal species: `n` players of
/// strategy `self` of whom `good` are good, against Z - n players of
/// strategy `other` of whom `other_good` are good.
inline double focal_payoff(Strategy self, Strategy other, int n, int good, int other_good,
                           RoleAssignment role, const Params& params) noexcept
{
    if (n == 0) return 0.0;
    const double z = params.population();
    const double eps = params.epsilon();
    const double n_other = z - n;
    const double i = good;
    const double j = other_good;
    const double g = i + j;

    const double a = i / n;             // focal player is good
    const double b = (n - i) / n;       // focal player is bad
    const double fg = self.fair_good_indicator();
    const double fb = self.fair_bad_indicator();
    const double og = other.fair_good_indicator();
    const double ob = other.fair_bad_indicator();
    const double unfair_g = 1.0 - fg + eps * fg;  // realised unfair toward good
    const double unfair_b = 1.0 - fb + eps * fb;
    const double half_kept = 0.5 * (1.0 - eps);

    double dictator_fair = 0.0;
    double dictator_unfair = 0.0;
    double recipient = 0.0;

    if (role == RoleAssignment::Random) {
        dictator_fair = half_kept * (a * (0.5 * fg * (g - 1) / (z - 1) + 0.5 * fb * (z - g) / (z - 1)) +
                                     b * (0.5 * fg * g / (z - 1) + 0.5 * fb * (z - 1 - g) / (z - 1)));
        dictator_unfair = a * 0.5 * unfair_g * (g - 1) / (z - 1) + a * 0.5 * unfair_b * (z - g) / (z - 1) +
                          b * 0.5 * unfair_g * g / (z - 1) + b * 0.5 * unfair_b * (z - 1 - g) / (z - 1);
        recipient = half_kept * (a * 0.5 * (fg * (n - 1) / (z - 1) + og * n_other / (z - 1)) +
                                 b * 0.5 * (fb * (n - 1) / (z - 1) + ob * n_other / (z - 1)));
    } else {
        // A good player always dictates against a bad one.
        dictator_fair = half_kept * (a * (0.5 * fg * (g - 1) / (z - 1) + fb * (z - g) / (z - 1)) +
                                     b * 0.5 * fb * (z - 1 - g) / (z - 1));
        dictator_unfair = a * 0.5 * unfair_g * (g - 1) / (z - 1) + a * unfair_b * (z - g) / (z - 1) +
                          b * 0.5 * unfair_b * (z - 1 - g) / (z - 1);
        recipient = half_kept * (a * 0.5 * (fg * ratio(i - 1, n - 1) + og * ratio(j, n_other)) +
                                 b * 0.5 * (fb * ratio(n - i - 1, n - 1) + ob * ratio(n_other - j, n_other)) +
                                 b * (fb * ratio(i, n - 1) + ob * ratio(j, n_other)));
    }
    return dictator_fair + dictator_unfair + recipient - params.report_cost() * self.report_indicator();
}

} // namespace detail

/// Expected per-round payoff of an X- or Y-player in reputation state `st`.
inline double pi(const PairwiseSetting& s, RepState st, Species species)
{
    s.validate();
    if (!StateGrid(s).contains(st)) {
        throw std::out_of_range("reputation state outside grid for this setting");
    }
    if (species == Species::X) {
        return detail::focal_payoff(s.x, s.y, s.m, st.i, st.j, s.role, s.params);
    }
    return detail::focal_payoff(s.y, s.x, s.y_count(), st.j, st.i, s.role, s.params);
}

/// Payoffs averaged over the reputation distribution `v`.
inline PayoffPair expected_payoffs(const PairwiseSetting& s, const StationaryDist& v)
{
    const StateGrid grid(s);
    if (!(v.grid == grid) || v.probabilities.size() != grid.size()) {
        throw std::invalid_argument("distribution grid does not match setting");
    }
    PayoffPair g;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double w = v.probabilities[k];
        if (w == 0.0) continue;
        const RepState st = grid.state(k);
        g.x += w * detail::focal_payoff(s.x, s.y, s.m, st.i, st.j, s.role, s.params);
        g.y += w * detail::focal_payoff(s.y, s.x, s.y_count(), st.j, st.i, s.role, s.params);
    }
    return g;
}

} // namespace fairdg

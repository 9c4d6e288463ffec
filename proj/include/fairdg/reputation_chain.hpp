#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "fairdg/norms.hpp"
#include "fairdg/setting.hpp"

namespace fairdg {

/// i good players among the m X-players, j good among the Z - m Y-players.
struct RepState {
    int i = 0;
    int j = 0;
    friend bool operator==(const RepState&, const RepState&) = default;
};

/// Rectangular grid of reputation states, row-major in i.
class StateGrid {
public:
    StateGrid() = default;
    StateGrid(int x_count, int y_count) : x_count_(x_count), y_count_(y_count)
    {
        if (x_count < 0 || y_count < 0) {
            throw std::invalid_argument("negative species count");
        }
    }
    explicit StateGrid(const PairwiseSetting& s) : StateGrid(s.m, s.y_count()) {}

    int x_count() const noexcept { return x_count_; }
    int y_count() const noexcept { return y_count_; }
    std::size_t size() const noexcept
    {
        return static_cast<std::size_t>(x_count_ + 1) * static_cast<std::size_t>(y_count_ + 1);
    }
    bool contains(RepState s) const noexcept
    {
        return s.i >= 0 && s.i <= x_count_ && s.j >= 0 && s.j <= y_count_;
    }
    std::size_t index(RepState s) const
    {
        if (!contains(s)) {
            throw std::out_of_range("reputation state outside grid");
        }
        return static_cast<std::size_t>(s.i) * static_cast<std::size_t>(y_count_ + 1) +
               static_cast<std::size_t>(s.j);
    }
    RepState state(std::size_t idx) const noexcept
    {
        const auto w = static_cast<std::size_t>(y_count_ + 1);
        return {static_cast<int>(idx / w), static_cast<int>(idx % w)};
    }

    friend bool operator==(const StateGrid&, const StateGrid&) = default;

private:
    int x_count_ = 0;
    int y_count_ = 0;
};

// ---------------------------------------------------------------------------
// One round of the reputation dynamics

/// Player classes by species and current reputation.
enum class Group : std::size_t { XGood = 0, XBad = 1, YGood = 2, YBad = 3 };
inline constexpr std::array<Group, 4> all_groups{Group::XGood, Group::XBad, Group::YGood, Group::YBad};

constexpr bool group_is_x(Group g) noexcept { return g == Group::XGood || g == Group::XBad; }
constexpr Reputation group_reputation(Group g) noexcept
{
    return reputation_from(g == Group::XGood || g == Group::YGood);
}

/// Probability that the observer is a reporting player of each class.
struct ObserverEvents {
    double x_good = 0.0;
    double x_bad = 0.0;
    double y_good = 0.0;
    double y_bad = 0.0;

    double operator[](Group g) const noexcept
    {
        switch (g) {
        case Group::XGood: return x_good;
        case Group::XBad: return x_bad;
        case Group::YGood: return y_good;
        case Group::YBad: return y_bad;
        }
        return 0.0;
    }
    double total() const noexcept { return x_good + x_bad + y_good + y_bad; }
};

/// Probability mass of the five possible moves out of a state.
struct StepMoves {
    double x_up = 0.0;
    double x_down = 0.0;
    double y_up = 0.0;
    double y_down = 0.0;
    double stay = 1.0;
};

namespace detail {

inline std::array<int, 4> group_counts(const PairwiseSetting& s, RepState st) noexcept
{
    return {st.i, s.m - st.i, st.j, s.y_count() - st.j};
}

inline void check_state(const PairwiseSetting& s, RepState st)
{
    s.validate();
    if (!StateGrid(s).contains(st)) {
        throw std::out_of_range("reputation state outside grid for this setting");
    }
}

/// Chance that the first player of a sampled pair is the dictator.
inline double dictator_weight(RoleAssignment role, Reputation first, Reputation second) noexcept
{
    if (role == RoleAssignment::Random || first == second) {
        return 0.5;
    }
    return is_good(first) ? 1.0 : 0.0;
}

/// Probability that a dictator with the given strategy and prior reputation
/// ends the round judged good.
inline double good_after(const SocialNorm& norm, Strategy dictator, Reputation prior,
                         Reputation recipient, double epsilon) noexcept
{
    const double p_fair = dictator.intends_fair(recipient) ? 1.0 - epsilon : 0.0;
    const auto& v = norm.for_prior(prior);
    return p_fair * v.bit(Action::Fair, recipient) + (1.0 - p_fair) * v.bit(Action::Unfair, recipient);
}

} // namespace detail

inline ObserverEvents observer_event_probs(const PairwiseSetting& s, RepState st)
{
    detail::check_state(s, st);
    const double z = s.population();
    const double ex = s.x.report_indicator();
    const double ey = s.y.report_indicator();
    return {st.i / z * ex, (s.m - st.i) / z * ex, st.j / z * ey, (s.y_count() - st.j) / z * ey};
}

/// Move probabilities given that the observer belongs to `observer` and
/// reports. The observer is drawn first, then the interacting pair from the
/// remaining Z - 1 players.
inline StepMoves conditional_moves(const PairwiseSetting& s, RepState st, Group observer)
{
    detail::check_state(s, st);
    auto remaining = detail::group_counts(s, st);
    if (remaining[static_cast<std::size_t>(observer)] == 0) {
        return {};
    }
    --remaining[static_cast<std::size_t>(observer)];

    const double z = s.population();
    const double pairs = (z - 1.0) * (z - 2.0);
    const double eps = s.params.epsilon();

    StepMoves mv;
    for (Group d : all_groups) {
        const int nd = remaining[static_cast<std::size_t>(d)];
        if (nd == 0) continue;
        const Reputation dr = group_reputation(d);
        const Strategy ds = group_is_x(d) ? s.x : s.y;
        for (Group r : all_groups) {
            const int nr = remaining[static_cast<std::size_t>(r)] - (r == d ? 1 : 0);
            if (nr <= 0) continue;
            const Reputation rr = group_reputation(r);
            // Unordered pair {d, r} has probability 2 nd nr / ((Z-1)(Z-2)).
            const double p_role = 2.0 * nd * nr / pairs * detail::dictator_weight(s.role, dr, rr);
            if (p_role == 0.0) continue;
            const double good = detail::good_after(s.norm, ds, dr, rr, eps);
            const double flip = is_good(dr) ? 1.0 - good : good;
            const double p = p_role * flip;
            if (group_is_x(d)) {
                (is_good(dr) ? mv.x_down : mv.x_up) += p;
            } else {
                (is_good(dr) ? mv.y_down : mv.y_up) += p;
            }
        }
    }
    mv.stay = 1.0 - mv.x_up - mv.x_down - mv.y_up - mv.y_down;
    return mv;
}

/// Unconditional move probabilities: observer events combined by total
/// probability, with the no-report residual on `stay`.
inline StepMoves step_moves(const PairwiseSetting& s, RepState st)
{
    const ObserverEvents ob = observer_event_probs(s, st);
    StepMoves total{0.0, 0.0, 0.0, 0.0, 0.0};
    for (Group g : all_groups) {
        const double p = ob[g];
        if (p == 0.0) continue;
        const StepMoves c = conditional_moves(s, st, g);
        total.x_up += p * c.x_up;
        total.x_down += p * c.x_down;
        total.y_up += p * c.y_up;
        total.y_down += p * c.y_down;
    }
    total.stay = 1.0 - total.x_up - total.x_down - total.y_up - total.y_down;
    return total;
}

// ---------------------------------------------------------------------------
// Transition matrix

class TransitionMatrix {
public:
    using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    TransitionMatrix() = default;
    TransitionMatrix(StateGrid grid, Storage p) : grid_(grid), p_(std::move(p))
    {
        if (p_.rows() != static_cast<Eigen::Index>(grid_.size()) || p_.cols() != p_.rows()) {
            throw std::invalid_argument("transition matrix shape does not match grid");
        }
    }

    const StateGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }
    const Storage& storage() const noexcept { return p_; }

    double operator()(std::size_t from, std::size_t to) const
    {
        return p_.coeff(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to));
    }

    double row_sum(std::size_t row) const
    {
        double acc = 0.0;
        for (Storage::InnerIterator it(p_, static_cast<Eigen::Index>(row)); it; ++it) {
            acc += it.value();
        }
        return acc;
    }

    /// Largest |row sum - 1| over all rows.
    double max_row_error() const
    {
        double worst = 0.0;
        for (std::size_t r = 0; r < size(); ++r) {
            worst = std::max(worst, std::abs(row_sum(r) - 1.0));
        }
        return worst;
    }

    /// Row vector times matrix.
    std::vector<double> apply_left(std::span<const double> v) const
    {
        if (v.size() != size()) {
            throw std::invalid_argument("vector length does not match chain size");
        }
        std::vector<double> out(size(), 0.0);
        for (Eigen::Index r = 0; r < p_.outerSize(); ++r) {
            const double w = v[static_cast<std::size_t>(r)];
            if (w == 0.0) continue;
            for (Storage::InnerIterator it(p_, r); it; ++it) {
                out[static_cast<std::size_t>(it.col())] += w * it.value();
            }
        }
        return out;
    }

    /// max_s |(vP)_s - v_s|
    double stationarity_residual(std::span<const double> v) const
    {
        const auto vp = apply_left(v);
        double worst = 0.0;
        for (std::size_t k = 0; k < vp.size(); ++k) {
            worst = std::max(worst, std::abs(vp[k] - v[k]));
        }
        return worst;
    }

    bool is_identity() const
    {
        for (Eigen::Index r = 0; r < p_.outerSize(); ++r) {
            for (Storage::InnerIterator it(p_, r); it; ++it) {
                if (it.value() != (it.col() == r ? 1.0 : 0.0)) return false;
            }
        }
        return true;
    }

private:
    StateGrid grid_;
    Storage p_;
};

inline TransitionMatrix transition_matrix(const PairwiseSetting& s)
{
    s.validate();
    const StateGrid grid(s);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(grid.size() * 5);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const RepState st = grid.state(k);
        const StepMoves mv = step_moves(s, st);
        const auto row = static_cast<Eigen::Index>(k);
        auto put = [&](RepState to, double p) {
            if (p != 0.0) {
                entries.emplace_back(row, static_cast<Eigen::Index>(grid.index(to)), p);
            }
        };
        put({st.i + 1, st.j}, mv.x_up);
        put({st.i - 1, st.j}, mv.x_down);
        put({st.i, st.j + 1}, mv.y_up);
        put({st.i, st.j - 1}, mv.y_down);
        put(st, mv.stay);
    }
    TransitionMatrix::Storage p(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(grid.size()));
    p.setFromTriplets(entries.begin(), entries.end());
    p.makeCompressed();
    return {grid, std::move(p)};
}

// ---------------------------------------------------------------------------
// Stationary distributions

enum class SolveMethod { Direct, PowerIteration };

struct StationaryDist {
    StateGrid grid;
    std::vector<double> probabilities;
    /// Number of closed communicating classes of the chain. With exactly one
    /// the distribution does not depend on the starting point.
    std::size_t closed_classes = 1;
    SolveMethod method = SolveMethod::Direct;
    double residual = 0.0;

    bool unique() const noexcept { return closed_classes == 1; }
    double operator[](RepState s) const { return probabilities[grid.index(s)]; }

    /// Marginal over i.
    std::vector<double> x_marginal() const
    {
        std::vector<double> out(static_cast<std::size_t>(grid.x_count() + 1), 0.0);
        for (std::size_t k = 0; k < probabilities.size(); ++k) {
            out[static_cast<std::size_t>(grid.state(k).i)] += probabilities[k];
        }
        return out;
    }
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual)
    {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

struct StationaryOptions {
    double residual_tolerance = 1e-10;
    double power_tolerance = 1e-12;
    std::size_t power_iteration_cap = 1'000'000;
};

inline std::vector<double> binomial_pmf(int n)
{
    std::vector<double> out(static_cast<std::size_t>(n + 1));
    const double log_half = std::log(0.5);
    for (int k = 0; k <= n; ++k) {
        const double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        out[static_cast<std::size_t>(k)] = std::exp(log_c + n * log_half);
    }
    return out;
}

/// Every player independently good with probability 1/2.
inline StationaryDist default_initial(const StateGrid& grid)
{
    const auto bx = binomial_pmf(grid.x_count());
    const auto by = binomial_pmf(grid.y_count());
    StationaryDist d;
    d.grid = grid;
    d.probabilities.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const RepState s = grid.state(k);
        d.probabilities[k] = bx[static_cast<std::size_t>(s.i)] * by[static_cast<std::size_t>(s.j)];
    }
    return d;
}

namespace detail {

/// Strongly connected components of the nonzero pattern (iterative Tarjan).
/// Returns the component id per state and the number of components.
inline std::pair<std::vector<std::size_t>, std::size_t> strong_components(const TransitionMatrix& p)
{
    using It = TransitionMatrix::Storage::InnerIterator;
    const auto& a = p.storage();
    const std::size_t n = p.size();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0, n_comp = 0;

    struct Frame {
        std::size_t v;
        It it;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        std::vector<Frame> call;
        auto open = [&](std::size_t v) {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            on_stack[v] = true;
            call.push_back({v, It(a, static_cast<Eigen::Index>(v))});
        };
        open(root);
        while (!call.empty()) {
            Frame& f = call.back();
            bool descended = false;
            for (; f.it; ++f.it) {
                if (f.it.value() <= 0.0) continue;
                const auto w = static_cast<std::size_t>(f.it.col());
                if (index[w] == unset) {
                    ++f.it;
                    open(w);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[f.v] = std::min(low[f.v], index[w]);
            }
            if (descended) continue;
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) {
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = n_comp;
                } while (w != v);
                ++n_comp;
            }
        }
    }
    return {std::move(comp), n_comp};
}

inline bool solve_sparse(Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b, Eigen::VectorXd& x)
{
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) return false;
    x = lu.solve(b);
    return lu.info() == Eigen::Success && x.allFinite();
}

/// Stationary vector of the chain restricted to the closed class `members`.
inline bool class_stationary(const TransitionMatrix& p, const std::vector<std::size_t>& members,
                             const std::vector<std::size_t>& local, std::vector<double>& out)
{
    const std::size_t n = members.size();
    out.assign(n, 0.0);
    if (n == 1) {
        out[0] = 1.0;
        return true;
    }
    // (P_CC^T - I) x = 0 with the first equation replaced by sum(x) = 1.
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(n * 6);
    for (std::size_t a = 0; a < n; ++a) {
        const auto row = static_cast<Eigen::Index>(members[a]);
        for (TransitionMatrix::Storage::InnerIterator it(p.storage(), row); it; ++it) {
            const std::size_t b = local[static_cast<std::size_t>(it.col())];
            if (b != 0) t.emplace_back(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a), it.value());
        }
        if (a != 0) t.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a), -1.0);
        t.emplace_back(0, static_cast<Eigen::Index>(a), 1.0);
    }
    Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(t.begin(), t.end());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    rhs[0] = 1.0;
    Eigen::VectorXd x;
    if (!solve_sparse(m, rhs, x)) return false;
    for (std::size_t a = 0; a < n; ++a) out[a] = std::max(0.0, x[static_cast<Eigen::Index>(a)]);
    double total = 0.0;
    for (double v : out) total += v;
    if (!(total > 0.0)) return false;
    for (double& v : out) v /= total;
    return true;
}

inline std::vector<double> power_iterate(const TransitionMatrix& p, std::vector<double> v,
                                         const StationaryOptions& opt, double& change)
{
    change = 0.0;
    for (std::size_t step = 0; step < opt.power_iteration_cap; ++step) {
        auto next = p.apply_left(v);
        change = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) change = std::max(change, std::abs(next[k] - v[k]));
        v = std::move(next);
        if (change < opt.power_tolerance) break;
    }
    return v;
}

} // namespace detail

/// Long-run distribution of the chain started from `initial`. With a single
/// closed class this is the unique stationary distribution; otherwise the
/// initial mass is routed into each closed class by its absorption
/// probabilities. Throws ConvergenceError when no solution meets the residual
/// tolerance.
inline StationaryDist stationary(const TransitionMatrix& p, const StationaryDist& initial,
                                 const StationaryOptions& opt = {})
{
    const std::size_t n = p.size();
    if (initial.probabilities.size() != n) {
        throw std::invalid_argument("initial distribution does not match chain size");
    }

    auto [comp, n_comp] = detail::strong_components(p);
    std::vector<bool> closed(n_comp, true);
    for (Eigen::Index r = 0; r < p.storage().outerSize(); ++r) {
        for (TransitionMatrix::Storage::InnerIterator it(p.storage(), r); it; ++it) {
            if (it.value() > 0.0 && comp[static_cast<std::size_t>(r)] != comp[static_cast<std::size_t>(it.col())]) {
                closed[comp[static_cast<std::size_t>(r)]] = false;
            }
        }
    }
    std::vector<std::vector<std::size_t>> members(n_comp);
    std::vector<std::size_t> local(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        local[s] = members[comp[s]].size();
        members[comp[s]].push_back(s);
    }
    std::vector<std::size_t> closed_ids, transient;
    for (std::size_t c = 0; c < n_comp; ++c) {
        if (closed[c]) closed_ids.push_back(c);
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!closed[comp[s]]) transient.push_back(s);
    }

    StationaryDist out;
    out.grid = p.grid();
    out.closed_classes = closed_ids.size();
    out.probabilities.assign(n, 0.0);
    bool ok = true;

    // Mass landing in each closed class.
    std::vector<double> weight(n_comp, 0.0);
    if (closed_ids.size() == 1) {
        weight[closed_ids[0]] = 1.0;
    } else {
        for (std::size_t s = 0; s < n; ++s) {
            if (closed[comp[s]]) weight[comp[s]] += initial.probabilities[s];
        }
        if (!transient.empty()) {
            // w (I - P_TT) = initial_T, then mass into C is w P_{T,C} 1.
            const std::size_t nt = transient.size();
            std::vector<std::size_t> tpos(n, static_cast<std::size_t>(-1));
            for (std::size_t a = 0; a < nt; ++a) tpos[transient[a]] = a;
            std::vector<Eigen::Triplet<double>> t;
            for (std::size_t a = 0; a < nt; ++a) {
                t.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a), 1.0);
                for (TransitionMatrix::Storage::InnerIterator it(p.storage(), static_cast<Eigen::Index>(transient[a])); it; ++it) {
                    const std::size_t b = tpos[static_cast<std::size_t>(it.col())];
                    if (b != static_cast<std::size_t>(-1)) {
                        t.emplace_back(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a), -it.value());
                    }
                }
            }
            Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nt));
            m.setFromTriplets(t.begin(), t.end());
            Eigen::VectorXd rhs(static_cast<Eigen::Index>(nt));
            for (std::size_t a = 0; a < nt; ++a) rhs[static_cast<Eigen::Index>(a)] = initial.probabilities[transient[a]];
            Eigen::VectorXd w;
            ok = detail::solve_sparse(m, rhs, w);
            if (ok) {
                for (std::size_t a = 0; a < nt; ++a) {
                    for (TransitionMatrix::Storage::InnerIterator it(p.storage(), static_cast<Eigen::Index>(transient[a])); it; ++it) {
                        const std::size_t c = comp[static_cast<std::size_t>(it.col())];
                        if (closed[c]) weight[c] += w[static_cast<Eigen::Index>(a)] * it.value();
                    }
                }
            }
        }
    }

    for (std::size_t c : closed_ids) {
        if (!ok) break;
        if (weight[c] == 0.0) continue;
        std::vector<double> pc;
        ok = detail::class_stationary(p, members[c], local, pc);
        for (std::size_t a = 0; ok && a < pc.size(); ++a) {
            out.probabilities[members[c][a]] = weight[c] * pc[a];
        }
    }

    if (ok) {
        double total = 0.0;
        for (double v : out.probabilities) total += v;
        for (double& v : out.probabilities) v /= total;
        out.residual = p.stationarity_residual(out.probabilities);
        if (out.residual < opt.residual_tolerance) return out;
    }

    double change = 0.0;
    out.probabilities = detail::power_iterate(p, initial.probabilities, opt, change);
    out.method = SolveMethod::PowerIteration;
    out.residual = p.stationarity_residual(out.probabilities);
    if (change >= opt.power_tolerance || out.residual >= opt.residual_tolerance) {
        throw ConvergenceError("stationary distribution did not converge", out.residual);
    }
    return out;
}

inline StationaryDist stationary(const TransitionMatrix& p, const StationaryOptions& opt = {})
{
    return stationary(p, default_initial(p.grid()), opt);
}

struct SolvedChain {
    TransitionMatrix transitions;
    StationaryDist distribution;
};

inline SolvedChain solve_chain(const PairwiseSetting& s, const StationaryOptions& opt = {})
{
    auto p = transition_matrix(s);
    auto v = stationary(p, opt);
    return {std::move(p), std::move(v)};
}

/// Chain over i in 0..Z for a population where everyone plays `x`.
inline SolvedChain monomorphic_chain(Strategy x, const SocialNorm& norm, RoleAssignment role,
                                     const Params& params, const StationaryOptions& opt = {})
{
    return solve_chain(monomorphic_setting(x, norm, role, params), opt);
}

} // namespace fairdg

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "fairdg/fairness.hpp"
#include "fairdg/norms.hpp"
#include "fairdg/setting.hpp"

namespace fairdg {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for replica `replica` of a run seeded with `seed`.
inline constexpr std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) noexcept
{
    return splitmix64(seed ^ splitmix64(replica));
}

/// How a generation's payoffs feed the imitation step.
enum class PayoffAggregation {
    PerInteraction,  // accumulated payoff divided by interaction count
    Accumulated,     // raw sum over the generation
};

struct AbmConfig {
    Params params;
    SocialNorm norm = stern_judging;
    RoleAssignment role = RoleAssignment::Random;
    std::uint64_t generations = 100'000;
    std::uint64_t burn_in = 10'000;
    std::uint64_t seed = 1;
    int rounds_per_player = 5;                 // a generation is this many times Z rounds
    std::optional<Strategy> initial_strategy;  // uniform random strategies when empty
    PayoffAggregation aggregation = PayoffAggregation::Accumulated;
    bool check_accounting = false;

    void validate() const
    {
        if (!(generations > burn_in)) {
            throw std::invalid_argument("generations must exceed burn-in");
        }
        if (rounds_per_player < 1) {
            throw std::invalid_argument("rounds per player must be positive");
        }
    }
};

struct AbmResult {
    double mean_fair_fraction = 0.0;
    double fair_fraction_se = 0.0;
    StrategyVector frequencies{};
    StrategyVector frequency_se{};
    /// Fair fraction among rounds whose dictator played each strategy; NaN
    /// when a strategy never dictated.
    StrategyVector fair_by_strategy{};
    std::uint64_t measured_generations = 0;
    std::size_t replicas = 1;
};

/// What happened in one round of the dictator game.
struct RoundRecord {
    std::size_t observer = 0;
    std::size_t dictator = 0;
    std::size_t recipient = 0;
    bool fair = false;
    bool reported = false;
    double dictator_payoff = 0.0;
    double recipient_payoff = 0.0;
};

/// Population state for the agent-based model: strategies, public
/// reputations and the payoffs accumulated in the current generation.
class AbmPopulation {
public:
    using Rng = std::mt19937_64;

    AbmPopulation(const AbmConfig& config, Rng& rng) : config_(config)
    {
        config_.validate();
        const auto z = static_cast<std::size_t>(config_.params.population());
        strategies_.resize(z);
        reputations_.assign(z, Reputation::Bad);
        payoff_.assign(z, 0.0);
        interactions_.assign(z, 0);
        std::uniform_int_distribution<std::size_t> pick(0, Strategy::count - 1);
        for (auto& s : strategies_) {
            s = config_.initial_strategy ? *config_.initial_strategy : Strategy::from_index(pick(rng));
        }
    }

    std::size_t size() const noexcept { return strategies_.size(); }
    const std::vector<Strategy>& strategies() const noexcept { return strategies_; }
    const std::vector<Reputation>& reputations() const noexcept { return reputations_; }
    void set_reputation(std::size_t k, Reputation r) { reputations_.at(k) = r; }
    void set_strategy(std::size_t k, Strategy s) { strategies_.at(k) = s; }

    /// Payoff used for imitation. Per-interaction mode gives 0 to a player
    /// without interactions.
    double normalized_payoff(std::size_t k) const
    {
        if (config_.aggregation == PayoffAggregation::Accumulated) return payoff_[k];
        return interactions_[k] == 0 ? 0.0 : payoff_[k] / static_cast<double>(interactions_[k]);
    }

    /// Fresh random reputations and cleared payoff accumulators.
    void start_generation(Rng& rng)
    {
        std::bernoulli_distribution coin(0.5);
        for (auto& r : reputations_) r = reputation_from(coin(rng));
        std::fill(payoff_.begin(), payoff_.end(), 0.0);
        std::fill(interactions_.begin(), interactions_.end(), 0);
    }

    RoundRecord play_round(Rng& rng)
    {
        const std::size_t z = size();
        std::uniform_int_distribution<std::size_t> any(0, z - 1);
        std::uniform_int_distribution<std::size_t> rest1(0, z - 2);
        std::uniform_int_distribution<std::size_t> rest2(0, z - 3);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        RoundRecord rec;
        rec.observer = any(rng);
        // Ordered draw of two distinct players other than the observer.
        std::size_t a = rest1(rng);
        if (a >= rec.observer) ++a;
        std::size_t b = rest2(rng);
        const std::size_t lo = std::min(a, rec.observer), hi = std::max(a, rec.observer);
        if (b >= lo) ++b;
        if (b >= hi) ++b;

        // The draw order is already uniformly random, so `a` dictates unless
        // the role rule hands the role to the good one of a mixed pair.
        if (config_.role == RoleAssignment::ReputationBased && reputations_[a] != reputations_[b] &&
            !is_good(reputations_[a])) {
            std::swap(a, b);
        }
        rec.dictator = a;
        rec.recipient = b;

        const Reputation recipient_rep = reputations_[b];
        const bool intends = strategies_[a].intends_fair(recipient_rep);
        rec.fair = intends && unit(rng) >= config_.params.epsilon();
        rec.dictator_payoff = rec.fair ? 0.5 : 1.0;
        rec.recipient_payoff = rec.fair ? 0.5 : 0.0;
        if (config_.check_accounting && rec.dictator_payoff + rec.recipient_payoff != 1.0) {
            throw std::logic_error("round payoffs do not split one unit");
        }
        payoff_[a] += rec.dictator_payoff;
        payoff_[b] += rec.recipient_payoff;
        ++interactions_[a];
        ++interactions_[b];

        if (strategies_[rec.observer].reports()) {
            rec.reported = true;
            payoff_[rec.observer] -= config_.params.report_cost();
            reputations_[a] =
                assess(config_.norm, reputations_[a], rec.fair ? Action::Fair : Action::Unfair, recipient_rep);
        }
        return rec;
    }

    /// One strategy update: mutation with probability mu, else Fermi
    /// imitation of a random model player.
    void update_strategy(Rng& rng)
    {
        const std::size_t z = size();
        std::uniform_int_distribution<std::size_t> any(0, z - 1);
        std::uniform_int_distribution<std::size_t> rest(0, z - 2);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::size_t focal = any(rng);
        std::size_t model = rest(rng);
        if (model >= focal) ++model;
        if (unit(rng) < config_.params.mu()) {
            std::uniform_int_distribution<std::size_t> pick(0, Strategy::count - 1);
            strategies_[focal] = Strategy::from_index(pick(rng));
            return;
        }
        const double p = imitation_prob(normalized_payoff(focal), normalized_payoff(model), config_.params.beta());
        if (unit(rng) < p) {
            strategies_[focal] = strategies_[model];
        }
    }

private:
    AbmConfig config_;
    std::vector<Strategy> strategies_;
    std::vector<Reputation> reputations_;
    std::vector<double> payoff_;
    std::vector<std::uint64_t> interactions_;
};

namespace detail {

/// Batch-means standard error of the mean of a correlated series.
inline double batch_standard_error(const std::vector<double>& series, std::size_t batches = 20)
{
    const std::size_t n = series.size();
    if (n < 2 * batches) batches = n / 2;
    if (batches < 2) return 0.0;
    const std::size_t len = n / batches;
    std::vector<double> means(batches, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
        for (std::size_t k = b * len; k < (b + 1) * len; ++k) means[b] += series[k];
        means[b] /= static_cast<double>(len);
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(batches);
    double ss = 0.0;
    for (double m : means) ss += (m - mean) * (m - mean);
    return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
}

} // namespace detail

inline AbmResult run(const AbmConfig& config)
{
    config.validate();
    AbmPopulation::Rng rng(splitmix64(config.seed));
    AbmPopulation pop(config, rng);

    const std::size_t z = pop.size();
    const std::uint64_t rounds = static_cast<std::uint64_t>(config.rounds_per_player) * z;
    const std::uint64_t measured = config.generations - config.burn_in;

    std::vector<double> fair_series;
    std::array<std::vector<double>, Strategy::count> freq_series;
    fair_series.reserve(measured);
    for (auto& s : freq_series) s.reserve(measured);
    std::array<std::uint64_t, Strategy::count> dictated{}, dictated_fair{};

    for (std::uint64_t gen = 0; gen < config.generations; ++gen) {
        const bool record = gen >= config.burn_in;
        pop.start_generation(rng);
        std::uint64_t fair = 0;
        for (std::uint64_t r = 0; r < rounds; ++r) {
            const RoundRecord rec = pop.play_round(rng);
            if (record) {
                const std::size_t s = pop.strategies()[rec.dictator].index();
                ++dictated[s];
                if (rec.fair) {
                    ++fair;
                    ++dictated_fair[s];
                }
            }
        }
        if (record) {
            fair_series.push_back(static_cast<double>(fair) / static_cast<double>(rounds));
            std::array<std::size_t, Strategy::count> counts{};
            for (const Strategy s : pop.strategies()) ++counts[s.index()];
            for (std::size_t k = 0; k < Strategy::count; ++k) {
                freq_series[k].push_back(static_cast<double>(counts[k]) / static_cast<double>(z));
            }
        }
        pop.update_strategy(rng);
    }

    AbmResult out;
    out.measured_generations = measured;
    auto mean_of = [](const std::vector<double>& v) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc / static_cast<double>(v.size());
    };
    out.mean_fair_fraction = mean_of(fair_series);
    out.fair_fraction_se = detail::batch_standard_error(fair_series);
    for (std::size_t k = 0; k < Strategy::count; ++k) {
        out.frequencies[k] = mean_of(freq_series[k]);
        out.frequency_se[k] = detail::batch_standard_error(freq_series[k]);
        out.fair_by_strategy[k] = dictated[k] == 0 ? std::numeric_limits<double>::quiet_NaN()
                                                   : static_cast<double>(dictated_fair[k]) /
                                                         static_cast<double>(dictated[k]);
    }
    return out;
}

/// Independent replicas seeded by replica_seed(config.seed, r), combined in
/// replica order. Standard errors come from the spread across replicas.
inline AbmResult run_replicas(const AbmConfig& config, std::size_t replicas,
                              unsigned jobs = detail::default_jobs())
{
    if (replicas == 0) {
        throw std::invalid_argument("need at least one replica");
    }
    if (replicas == 1) return run(config);
    std::vector<AbmResult> parts(replicas);
    detail::parallel_for(replicas, jobs, [&](std::size_t r) {
        AbmConfig c = config;
        c.seed = replica_seed(config.seed, r);
        parts[r] = run(c);
    });

    auto combine = [&](auto field) {
        double mean = 0.0;
        for (const auto& p : parts) mean += field(p);
        mean /= static_cast<double>(replicas);
        double ss = 0.0;
        for (const auto& p : parts) ss += (field(p) - mean) * (field(p) - mean);
        const double se = std::sqrt(ss / static_cast<double>(replicas - 1) / static_cast<double>(replicas));
        return std::pair{mean, se};
    };

    AbmResult out;
    out.replicas = replicas;
    out.measured_generations = parts.front().measured_generations * replicas;
    std::tie(out.mean_fair_fraction, out.fair_fraction_se) =
        combine([](const AbmResult& p) { return p.mean_fair_fraction; });
    for (std::size_t k = 0; k < Strategy::count; ++k) {
        std::tie(out.frequencies[k], out.frequency_se[k]) =
            combine([k](const AbmResult& p) { return p.frequencies[k]; });
        double num = 0.0;
        std::size_t n = 0;
        for (const auto& p : parts) {
            if (!std::isnan(p.fair_by_strategy[k])) {
                num += p.fair_by_strategy[k];
                ++n;
            }
        }
        out.fair_by_strategy[k] = n == 0 ? std::numeric_limits<double>::quiet_NaN() : num / static_cast<double>(n);
    }
    return out;
}

} // namespace fairdg

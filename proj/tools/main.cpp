#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csv.hpp"
#include "fairdg/abm.hpp"
#include "fairdg/fairness.hpp"
#include "fairdg/validation.hpp"

using namespace fairdg;
using fairdg::cli::CsvWriter;
using fairdg::cli::num;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Shared flags

struct Common {
    int population = 50;
    double epsilon = 0.01;
    double report_cost = 0.01;
    double mu = 0.01;
    std::string out;
    std::string config;
    unsigned jobs = detail::default_jobs();
    bool single_thread = false;
    bool no_timestamp = false;

    Params params(double beta) const { return {population, epsilon, report_cost, mu, beta}; }
    unsigned workers() const { return single_thread ? 1U : std::max(1U, jobs); }
};

struct NormChoice {
    std::vector<std::string> specs;
    std::string catalog;
    std::vector<std::string> roles;
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config, "Flat key = value file; command-line flags take precedence");
    app->add_option("-Z,--population", c.population, "Population size")->capture_default_str();
    app->add_option("--epsilon", c.epsilon, "Implementation error")->capture_default_str();
    app->add_option("--report-cost", c.report_cost, "Cost of reporting, c_R")->capture_default_str();
    app->add_option("--mu", c.mu, "Mutation probability")->capture_default_str();
    app->add_option("-o,--out", c.out, "Output file (default: $FAIRDG_OUTPUT_DIR/<command>.csv)");
    app->add_option("-j,--jobs", c.jobs, "Worker threads")->capture_default_str();
    app->add_flag("--single-thread", c.single_thread, "Run everything on one thread");
    app->add_flag("--no-timestamp", c.no_timestamp, "Omit the generation-time header line");
}

void add_norm_flags(CLI::App* app, NormChoice& n, bool catalogs = true)
{
    auto* norm = app->add_option("-n,--norm", n.specs, "Norm name (SJ, SS, IS, SH or full name) or bitstring gggg[/bbbb]")
                     ->delimiter(',');
    if (catalogs) {
        app->add_option("--catalog", n.catalog, "Norm catalog")
            ->check(CLI::IsMember({"named", "leading-eight", "second-order"}))
            ->excludes(norm);
    }
    app->add_option("-r,--role", n.roles, "Role assignment: random, reputation or both")->delimiter(',');
}

std::vector<SocialNorm> resolve_norms(const NormChoice& n, const std::vector<std::string>& fallback)
{
    std::vector<SocialNorm> out;
    if (n.catalog == "named") {
        for (const auto& nn : named_norms) out.push_back(nn.norm);
    } else if (n.catalog == "leading-eight") {
        out = leading_eight();
    } else if (n.catalog == "second-order") {
        out = all_second_order();
    } else {
        for (const auto& s : n.specs.empty() ? fallback : n.specs) out.push_back(norm_from_spec(s));
    }
    return out;
}

std::vector<RoleAssignment> resolve_roles(const std::vector<std::string>& names)
{
    if (names.empty()) return {RoleAssignment::Random, RoleAssignment::ReputationBased};
    std::vector<RoleAssignment> out;
    for (const auto& r : names) {
        if (r == "both") {
            out.push_back(RoleAssignment::Random);
            out.push_back(RoleAssignment::ReputationBased);
        } else {
            out.push_back(parse_role(r));
        }
    }
    return out;
}

void check_grid(const std::vector<double>& grid, const std::string& name)
{
    if (grid.empty()) throw UsageError(name + " grid is empty");
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1])) throw UsageError(name + " grid must be strictly increasing");
    }
}

std::string output_path(const Common& c, const std::string& fallback)
{
    if (!c.out.empty()) return c.out;
    const char* dir = std::getenv("FAIRDG_OUTPUT_DIR");
    std::filesystem::path base = dir && *dir ? dir : ".";
    std::error_code ec;
    std::filesystem::create_directories(base, ec);
    return (base / fallback).string();
}

/// Fills options that were not given on the command line from a flat
/// `key = value` file. Keys are long option names without the dashes.
void apply_config(CLI::App* app, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    const auto items = CLI::ConfigTOML().from_config(in);
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;
        if (!item.parents.empty()) {
            throw UsageError("config file must be flat, found section '" + item.parents.front() + "'");
        }
        CLI::Option* opt = app->get_option_no_throw("--" + item.name);
        if (opt == nullptr || item.name == "config") {
            throw UsageError("unknown config key '" + item.name + "'");
        }
        if (opt->count() > 0) continue;
        for (const auto& v : item.inputs) opt->add_result(v);
        try {
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config key '" + item.name + "': " + e.what());
        }
    }
}

/// An option given with nothing but empty strings is a usage error rather
/// than a silent fallback to its default.
void reject_empty_values(const CLI::App* app)
{
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->count() == 0 || opt->get_type_size() == 0) continue;
        const auto& res = opt->results();
        if (std::all_of(res.begin(), res.end(), [](const std::string& r) { return r.empty(); })) {
            throw UsageError(opt->get_name() + " needs a value");
        }
    }
}

/// Runs `fn`, turning anything it throws into a usage error.
template <class Fn>
auto as_usage(Fn&& fn)
{
    try {
        return fn();
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

int finish(CsvWriter& w, bool failed)
{
    w.close();
    std::cerr << "wrote " << w.rows() << " rows to " << w.path() << '\n';
    return failed ? exit_failure : exit_ok;
}

// ---------------------------------------------------------------------------
// Fairness rows

std::vector<std::string> setting_columns()
{
    return {"norm", "norm_label", "role", "beta", "Z", "epsilon", "c_r", "mu"};
}

std::vector<std::string> setting_cells(const SocialNorm& norm, RoleAssignment role, const Params& p)
{
    return {to_string(norm), norm_label(norm), std::string(to_string(role)), num(p.beta()),
            std::to_string(p.population()), num(p.epsilon()), num(p.report_cost()), num(p.mu())};
}

std::vector<std::string> fairness_columns()
{
    auto cols = setting_columns();
    for (Strategy s : all_strategies()) cols.push_back("phi_" + s.name());
    for (Strategy s : all_strategies()) cols.push_back("fF_" + s.name());
    cols.push_back("F_total");
    return cols;
}

std::vector<std::string> fairness_cells(const SocialNorm& norm, RoleAssignment role, const Params& p,
                                        const StrategyVector& phi, const StrategyVector& f, double total)
{
    auto cells = setting_cells(norm, role, p);
    for (double v : phi) cells.push_back(num(v));
    for (double v : f) cells.push_back(num(v));
    cells.push_back(num(total));
    return cells;
}

std::vector<std::string> failed_fairness_cells(const SocialNorm& norm, RoleAssignment role, const Params& p)
{
    StrategyVector nan;
    nan.fill(std::numeric_limits<double>::quiet_NaN());
    return fairness_cells(norm, role, p, nan, nan, std::numeric_limits<double>::quiet_NaN());
}

std::string error_status(const std::exception& e)
{
    std::cerr << "error: " << e.what() << '\n';
    return std::string("error: ") + e.what();
}

// ---------------------------------------------------------------------------
// Commands

struct FairnessCurveArgs {
    Common common;
    NormChoice norms;
    std::vector<double> betas{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
};

int cmd_fairness_curve(const FairnessCurveArgs& a)
{
    const auto [norms, roles] = as_usage([&] {
        check_grid(a.betas, "beta");
        for (double b : a.betas) (void)a.common.params(b);
        return std::pair{resolve_norms(a.norms, {"SJ", "SS", "IS", "SH"}), resolve_roles(a.norms.roles)};
    });
    CsvWriter w = as_usage([&] {
        auto cols = fairness_columns();
        cols.push_back("status");
        return CsvWriter(output_path(a.common, "fairness.csv"), "fairdg.fairness/1", cols, !a.common.no_timestamp);
    });

    bool failed = false;
    for (const auto& norm : norms) {
        for (RoleAssignment role : roles) {
            const Params base = a.common.params(0.0);
            try {
                const PayoffLandscape land(norm, role, base, a.common.workers());
                const auto levels = fairness_levels(norm, role, base);
                for (double beta : a.betas) {
                    const auto r = total_fairness(land, levels, beta, base.mu());
                    auto cells = fairness_cells(norm, role, r.params, r.phi, r.fairness, r.total);
                    cells.push_back("ok");
                    w.row(cells);
                }
            } catch (const std::exception& e) {
                failed = true;
                const std::string status = error_status(e);
                for (double beta : a.betas) {
                    auto cells = failed_fairness_cells(norm, role, base.with_beta(beta));
                    cells.push_back(status);
                    w.row(cells);
                }
            }
        }
    }
    return finish(w, failed);
}

struct CostSweepArgs {
    Common common;
    NormChoice norms;
    std::vector<double> costs{0.0, 0.01, 0.02, 0.05};
    double beta = 0.8;
};

int cmd_cost_sweep(const CostSweepArgs& a)
{
    const auto [norms, roles] = as_usage([&] {
        check_grid(a.costs, "cost");
        for (double c : a.costs) (void)a.common.params(a.beta).with_report_cost(c);
        return std::pair{resolve_norms(a.norms, {"SJ"}), resolve_roles(a.norms.roles)};
    });
    CsvWriter w = as_usage([&] {
        auto cols = fairness_columns();
        cols.push_back("status");
        return CsvWriter(output_path(a.common, "cost_sweep.csv"), "fairdg.fairness/1", cols, !a.common.no_timestamp);
    });

    bool failed = false;
    for (const auto& norm : norms) {
        for (RoleAssignment role : roles) {
            for (double c : a.costs) {
                const Params p = a.common.params(a.beta).with_report_cost(c);
                try {
                    const auto r = total_fairness(norm, role, p, a.common.workers());
                    auto cells = fairness_cells(norm, role, p, r.phi, r.fairness, r.total);
                    cells.push_back("ok");
                    w.row(cells);
                } catch (const std::exception& e) {
                    failed = true;
                    auto cells = failed_fairness_cells(norm, role, p);
                    cells.push_back(error_status(e));
                    w.row(cells);
                }
            }
        }
    }
    return finish(w, failed);
}

struct PairwiseArgs {
    Common common;
    NormChoice norms;
    std::vector<std::string> strategies{"FNR", "NNS", "NNR"};
    double beta = 0.6;
};

int cmd_pairwise(const PairwiseArgs& a)
{
    struct Inputs {
        std::vector<SocialNorm> norms;
        std::vector<RoleAssignment> roles;
        std::vector<Strategy> strategies;
        Params params;
    };
    const Inputs in = as_usage([&] {
        Inputs r{resolve_norms(a.norms, {"SJ"}), resolve_roles(a.norms.roles), {}, a.common.params(a.beta)};
        std::set<std::size_t> seen;
        for (const auto& s : a.strategies) {
            const Strategy x = Strategy::parse(s);
            if (!seen.insert(x.index()).second) throw UsageError("strategy " + x.name() + " listed twice");
            r.strategies.push_back(x);
        }
        if (r.strategies.size() < 2) throw UsageError("need at least two strategies");
        return r;
    });
    CsvWriter w = as_usage([&] {
        auto cols = setting_columns();
        for (const char* c : {"mutant", "resident", "rho", "rho_times_Z", "invades", "status"}) cols.emplace_back(c);
        return CsvWriter(output_path(a.common, "pairwise.csv"), "fairdg.pairwise/1", cols, !a.common.no_timestamp);
    });

    std::vector<std::pair<Strategy, Strategy>> pairs;
    for (Strategy x : in.strategies) {
        for (Strategy y : in.strategies) {
            if (x != y) pairs.emplace_back(x, y);
        }
    }
    const double z = in.params.population();
    bool failed = false;
    for (const auto& norm : in.norms) {
        for (RoleAssignment role : in.roles) {
            std::vector<double> rho(pairs.size(), std::numeric_limits<double>::quiet_NaN());
            std::vector<std::string> status(pairs.size(), "ok");
            detail::parallel_for(pairs.size(), a.common.workers(), [&](std::size_t k) {
                try {
                    rho[k] = fixation_prob(pairs[k].first, pairs[k].second, norm, role, in.params);
                } catch (const std::exception& e) {
                    status[k] = std::string("error: ") + e.what();
                }
            });
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                auto cells = setting_cells(norm, role, in.params);
                const bool ok = status[k] == "ok";
                if (!ok) {
                    failed = true;
                    std::cerr << status[k] << '\n';
                }
                cells.push_back(pairs[k].first.name());
                cells.push_back(pairs[k].second.name());
                cells.push_back(num(rho[k]));
                cells.push_back(num(rho[k] * z));
                cells.push_back(ok ? (rho[k] > 1.0 / z ? "true" : "false") : "");
                cells.push_back(status[k]);
                w.row(cells);
            }
        }
    }
    return finish(w, failed);
}

struct ReputationDistArgs {
    Common common;
    NormChoice norms;
    std::vector<std::string> strategies{"FNR"};
    std::string resident;
    int mutant_count = -1;
};

int cmd_reputation_dist(const ReputationDistArgs& a)
{
    struct Inputs {
        std::vector<SocialNorm> norms;
        std::vector<RoleAssignment> roles;
        std::vector<Strategy> strategies;
        std::optional<Strategy> resident;
        Params params;
    };
    const Inputs in = as_usage([&] {
        Inputs r{resolve_norms(a.norms, {"SJ"}), resolve_roles(a.norms.roles), {}, std::nullopt, a.common.params(0.0)};
        for (const auto& s : a.strategies) r.strategies.push_back(Strategy::parse(s));
        if (!a.resident.empty()) {
            r.resident = Strategy::parse(a.resident);
            if (a.mutant_count < 0 || a.mutant_count > r.params.population()) {
                throw UsageError("--mutant-count must lie in [0, Z] when --resident is given");
            }
        } else if (a.mutant_count >= 0) {
            throw UsageError("--mutant-count needs --resident");
        }
        return r;
    });
    CsvWriter w = as_usage([&] {
        std::vector<std::string> cols{"norm", "norm_label", "role",        "strategy", "resident", "Z",
                                      "epsilon", "m",    "i",           "j",        "probability", "status"};
        return CsvWriter(output_path(a.common, "reputation_dist.csv"), "fairdg.reputation-dist/1", cols,
                         !a.common.no_timestamp);
    });

    bool failed = false;
    const int z = in.params.population();
    for (const auto& norm : in.norms) {
        for (RoleAssignment role : in.roles) {
            for (Strategy x : in.strategies) {
                const Strategy y = in.resident.value_or(x);
                const PairwiseSetting s{x, y, in.resident ? a.mutant_count : z, norm, role, in.params};
                const StateGrid grid(s);
                std::vector<double> v(grid.size(), std::numeric_limits<double>::quiet_NaN());
                std::string status = "ok";
                try {
                    v = solve_chain(s).distribution.probabilities;
                } catch (const std::exception& e) {
                    failed = true;
                    status = error_status(e);
                }
                for (std::size_t k = 0; k < grid.size(); ++k) {
                    const RepState st = grid.state(k);
                    w.row({to_string(norm), norm_label(norm), std::string(to_string(role)), x.name(), y.name(),
                           std::to_string(z), num(in.params.epsilon()), std::to_string(s.m), std::to_string(st.i),
                           std::to_string(st.j), num(v[k]), status});
                }
            }
        }
    }
    return finish(w, failed);
}

struct AbmArgs {
    Common common;
    NormChoice norms;
    std::vector<double> betas{0.6};
    std::uint64_t generations = 100'000;
    std::uint64_t burn_in = 10'000;
    std::uint64_t seed = 1;
    std::size_t replicas = 1;
    std::string aggregation = "accumulated";
    bool check_accounting = false;
};

int cmd_abm(const AbmArgs& a)
{
    struct Inputs {
        std::vector<SocialNorm> norms;
        std::vector<RoleAssignment> roles;
    };
    const Inputs in = as_usage([&] {
        check_grid(a.betas, "beta");
        for (double b : a.betas) (void)a.common.params(b);
        if (a.replicas == 0) throw UsageError("need at least one replica");
        AbmConfig probe;
        probe.generations = a.generations;
        probe.burn_in = a.burn_in;
        probe.validate();
        return Inputs{resolve_norms(a.norms, {"SJ"}), resolve_roles(a.norms.roles)};
    });
    CsvWriter w = as_usage([&] {
        auto cols = fairness_columns();
        for (const char* c : {"seed", "generations", "burn_in", "replicas", "F_total_se", "status"}) cols.emplace_back(c);
        return CsvWriter(output_path(a.common, "abm.csv"), "fairdg.abm/1", cols, !a.common.no_timestamp);
    });

    bool failed = false;
    for (const auto& norm : in.norms) {
        for (RoleAssignment role : in.roles) {
            for (double beta : a.betas) {
                AbmConfig c;
                c.params = a.common.params(beta);
                c.norm = norm;
                c.role = role;
                c.generations = a.generations;
                c.burn_in = a.burn_in;
                c.seed = a.seed;
                c.aggregation = a.aggregation == "per-interaction" ? PayoffAggregation::PerInteraction
                                                                   : PayoffAggregation::Accumulated;
                c.check_accounting = a.check_accounting;
                std::vector<std::string> cells;
                std::string se, status = "ok";
                try {
                    const auto r = run_replicas(c, a.replicas, a.common.workers());
                    cells = fairness_cells(norm, role, c.params, r.frequencies, r.fair_by_strategy, r.mean_fair_fraction);
                    se = num(r.fair_fraction_se);
                } catch (const std::exception& e) {
                    failed = true;
                    cells = failed_fairness_cells(norm, role, c.params);
                    se = "nan";
                    status = error_status(e);
                }
                for (const auto& s : {std::to_string(a.seed), std::to_string(a.generations), std::to_string(a.burn_in),
                                      std::to_string(a.replicas), se, status}) {
                    cells.push_back(s);
                }
                w.row(cells);
            }
        }
    }
    return finish(w, failed);
}

struct ValidateArgs {
    Common common;
    std::vector<std::string> checks{"one-step", "fixation", "mu-invariance"};
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 20240601;
    double perturb_epsilon = 0.0;
    double beta = 0.6;
};

int cmd_validate(const ValidateArgs& a)
{
    as_usage([&] {
        if (a.checks.empty()) throw UsageError("empty check list");
        for (const auto& c : a.checks) {
            if (c != "one-step" && c != "fixation" && c != "mu-invariance") {
                throw UsageError("unknown check '" + c + "'");
            }
        }
        (void)a.common.params(a.beta);
        return 0;
    });
    std::ofstream file;
    if (!a.common.out.empty()) {
        file.open(a.common.out, std::ios::trunc);
        if (!file) throw UsageError("cannot write to '" + a.common.out + "'");
    }

    std::vector<CheckResult> results;
    for (const auto& c : a.checks) {
        try {
            if (c == "one-step") {
                OneStepOptions o;
                o.samples = a.samples;
                o.seed = a.seed;
                o.epsilon = a.common.epsilon;
                o.analytic_epsilon_shift = a.perturb_epsilon;
                o.jobs = a.common.workers();
                results.push_back(check_one_step(o));
            } else if (c == "fixation") {
                FixationOptions o;
                o.seed = a.seed;
                results.push_back(check_fixation(o));
            } else {
                MuInvarianceOptions o;
                o.params = a.common.params(a.beta);
                o.jobs = a.common.workers();
                results.push_back(check_mu_invariance(o));
            }
        } catch (const std::exception& e) {
            results.push_back({c, false, std::numeric_limits<double>::quiet_NaN(), 0.0, 0, error_status(e)});
        }
    }

    nlohmann::json report;
    report["schema"] = "fairdg.validate/1";
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << ": worst " << r.worst << " (tolerance "
                  << r.tolerance << ", " << r.cases << " cases) " << r.detail << '\n';
        report["checks"].push_back({{"name", r.name},
                                    {"passed", r.passed},
                                    {"worst", std::isnan(r.worst) ? nlohmann::json(nullptr) : nlohmann::json(r.worst)},
                                    {"tolerance", r.tolerance},
                                    {"cases", r.cases},
                                    {"detail", r.detail}});
    }
    report["passed"] = all;
    (file.is_open() ? static_cast<std::ostream&>(file) : std::cout) << report.dump(2) << '\n';
    return all ? exit_ok : exit_failure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fairness in the dictator game under indirect reciprocity: analytic solver and simulator"};
    app.require_subcommand(1);

    FairnessCurveArgs fc;
    auto* fc_cmd = app.add_subcommand("fairness-curve", "Total fairness across selection intensities");
    add_common(fc_cmd, fc.common);
    add_norm_flags(fc_cmd, fc.norms);
    fc_cmd->add_option("-b,--beta", fc.betas, "Selection intensities")->delimiter(',');

    PairwiseArgs pw;
    auto* pw_cmd = app.add_subcommand("pairwise", "Fixation probabilities for ordered strategy pairs");
    add_common(pw_cmd, pw.common);
    add_norm_flags(pw_cmd, pw.norms);
    pw_cmd->add_option("-s,--strategies", pw.strategies, "Strategies; every ordered pair is evaluated")->delimiter(',');
    pw_cmd->add_option("-b,--beta", pw.beta, "Selection intensity")->capture_default_str();

    ReputationDistArgs rd;
    auto* rd_cmd = app.add_subcommand("reputation-dist", "Stationary reputation distributions");
    add_common(rd_cmd, rd.common);
    add_norm_flags(rd_cmd, rd.norms);
    rd_cmd->add_option("-s,--strategy", rd.strategies, "Strategies (monomorphic populations unless --resident is given)")
        ->delimiter(',');
    rd_cmd->add_option("--resident", rd.resident, "Second strategy for a two-strategy population");
    rd_cmd->add_option("-m,--mutant-count", rd.mutant_count, "Players using --strategy when --resident is given");

    CostSweepArgs cs;
    auto* cs_cmd = app.add_subcommand("cost-sweep", "Total fairness across reporting costs");
    add_common(cs_cmd, cs.common);
    add_norm_flags(cs_cmd, cs.norms);
    cs_cmd->add_option("-c,--costs", cs.costs, "Reporting costs")->delimiter(',');
    cs_cmd->add_option("-b,--beta", cs.beta, "Selection intensity")->capture_default_str();

    AbmArgs ab;
    auto* ab_cmd = app.add_subcommand("abm", "Agent-based simulation");
    add_common(ab_cmd, ab.common);
    add_norm_flags(ab_cmd, ab.norms);
    ab_cmd->add_option("-b,--beta", ab.betas, "Selection intensities")->delimiter(',');
    ab_cmd->add_option("--generations", ab.generations, "Generations per replica")->capture_default_str();
    ab_cmd->add_option("--burn-in", ab.burn_in, "Generations discarded before averaging")->capture_default_str();
    ab_cmd->add_option("--seed", ab.seed, "Random seed")->capture_default_str();
    ab_cmd->add_option("--replicas", ab.replicas, "Independent replicas to average")->capture_default_str();
    ab_cmd->add_option("--aggregation", ab.aggregation, "Payoff used for imitation")
        ->check(CLI::IsMember({"accumulated", "per-interaction"}))
        ->capture_default_str();
    ab_cmd->add_flag("--check-accounting", ab.check_accounting, "Assert that every round splits one unit");

    ValidateArgs va;
    auto* va_cmd = app.add_subcommand("validate", "Cross-check the solver against brute-force oracles");
    add_common(va_cmd, va.common);
    va_cmd->add_option("--checks", va.checks, "one-step, fixation, mu-invariance")->delimiter(',');
    va_cmd->add_option("--samples", va.samples, "Monte Carlo samples per transition row")->capture_default_str();
    va_cmd->add_option("--seed", va.seed, "Random seed")->capture_default_str();
    va_cmd->add_option("--perturb-epsilon", va.perturb_epsilon,
                       "Shift epsilon in the analytic rows only (the one-step check must then fail)");
    va_cmd->add_option("-b,--beta", va.beta, "Selection intensity for the mu check")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    const std::pair<CLI::App*, Common*> commands[] = {{fc_cmd, &fc.common}, {pw_cmd, &pw.common},
                                                      {rd_cmd, &rd.common}, {cs_cmd, &cs.common},
                                                      {ab_cmd, &ab.common}, {va_cmd, &va.common}};
    try {
        for (const auto& [cmd, common] : commands) {
            if (!*cmd) continue;
            reject_empty_values(cmd);
            if (!common->config.empty()) apply_config(cmd, common->config);
        }
        if (ab.aggregation != "accumulated" && ab.aggregation != "per-interaction") {
            throw UsageError("unknown payoff aggregation '" + ab.aggregation + "'");
        }
        if (*fc_cmd) return cmd_fairness_curve(fc);
        if (*pw_cmd) return cmd_pairwise(pw);
        if (*rd_cmd) return cmd_reputation_dist(rd);
        if (*cs_cmd) return cmd_cost_sweep(cs);
        if (*ab_cmd) return cmd_abm(ab);
        if (*va_cmd) return cmd_validate(va);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}

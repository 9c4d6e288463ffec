#include <cmath>

#include <gtest/gtest.h>

#include "fairdg/oracles.hpp"
#include "fairdg/payoffs.hpp"

using namespace fairdg;

namespace {
const Strategy NNR = Strategy::parse("NNR");
const Strategy NNS = Strategy::parse("NNS");
const Strategy FFS = Strategy::parse("FFS");
const Strategy FFR = Strategy::parse("FFR");
constexpr RoleAssignment roles[] = {RoleAssignment::Random, RoleAssignment::ReputationBased};
} // namespace

TEST(Payoff, UnconditionalDefectorsEarnHalfMinusCost)
{
    const PairwiseSetting s{NNR, NNS, 20, stern_judging, RoleAssignment::Random, Params()};
    for (int i = 0; i <= 20; i += 4) {
        for (int j = 0; j <= 30; j += 5) {
            EXPECT_NEAR(pi(s, {i, j}, Species::X), 0.49, 1e-15);
        }
    }
}

TEST(Payoff, MonomorphicFairSilentEarnsHalf)
{
    for (double eps : {0.0, 0.01, 0.3}) {
        const auto s = monomorphic_setting(FFS, image_scoring, RoleAssignment::Random, Params(50, eps, 0.01, 0.01, 0));
        for (int i : {0, 13, 50}) EXPECT_NEAR(pi(s, {i, 0}, Species::X), 0.5, 1e-15);
    }
}

TEST(Payoff, MonomorphicMeanPlusCostIsHalf)
{
    for (RoleAssignment role : roles) {
        for (Strategy x : {NNR, FFR}) {
            const Params p(30, 0.05, 0.02, 0.01, 0);
            const auto s = monomorphic_setting(x, stern_judging, role, p);
            for (int i = 0; i <= 30; ++i) {
                EXPECT_NEAR(pi(s, {i, 0}, Species::X) + p.report_cost(), 0.5, 1e-14) << x.name() << " i=" << i;
            }
        }
    }
}

TEST(Payoff, SingleReputationBasedMutantIsFinite)
{
    for (std::size_t a = 0; a < Strategy::count; ++a) {
        for (std::size_t b = 0; b < Strategy::count; ++b) {
            const PairwiseSetting s{Strategy::from_index(a), Strategy::from_index(b), 1, stern_judging,
                                    RoleAssignment::ReputationBased, Params(6, 0.01, 0.01, 0.01, 0)};
            for (int i = 0; i <= 1; ++i) {
                for (int j = 0; j <= 5; ++j) {
                    EXPECT_TRUE(std::isfinite(pi(s, {i, j}, Species::X)));
                    EXPECT_TRUE(std::isfinite(pi(s, {i, j}, Species::Y)));
                }
            }
        }
    }
}

TEST(Payoff, RandomRolesMatchEnumeration)
{
    for (std::size_t a = 0; a < Strategy::count; ++a) {
        for (std::size_t b = 0; b < Strategy::count; ++b) {
            for (int m : {1, 3, 6}) {
                const PairwiseSetting s{Strategy::from_index(a), Strategy::from_index(b), m, simple_standing,
                                        RoleAssignment::Random, Params(7, 0.02, 0.03, 0.01, 0)};
                for (int i = 0; i <= m; ++i) {
                    for (int j = 0; j <= 7 - m; ++j) {
                        EXPECT_NEAR(pi(s, {i, j}, Species::X), oracle::enumerated_payoff(s, {i, j}), 1e-14);
                    }
                }
            }
        }
    }
}

TEST(Payoff, MonomorphicReputationBasedMatchesEnumeration)
{
    for (Strategy x : all_strategies()) {
        const auto s = monomorphic_setting(x, shunning, RoleAssignment::ReputationBased, Params(9, 0.04, 0.01, 0.01, 0));
        for (int i = 0; i <= 9; ++i) {
            EXPECT_NEAR(pi(s, {i, 0}, Species::X), oracle::enumerated_payoff(s, {i, 0}), 1e-14) << x.name();
        }
    }
}

TEST(Payoff, LabelExchangeSymmetry)
{
    for (RoleAssignment role : roles) {
        const PairwiseSetting s{Strategy::parse("FNR"), Strategy::parse("NFS"), 4, stern_judging, role,
                                Params(10, 0.01, 0.01, 0.01, 0)};
        for (int i = 0; i <= 4; ++i) {
            for (int j = 0; j <= 6; ++j) {
                EXPECT_EQ(pi(s, {i, j}, Species::X), pi(s.swapped(), {j, i}, Species::Y));
                EXPECT_EQ(pi(s, {i, j}, Species::Y), pi(s.swapped(), {j, i}, Species::X));
            }
        }
    }
}

TEST(Payoff, DefectorsDoNotSeeEpsilon)
{
    for (RoleAssignment role : roles) {
        const PairwiseSetting a{NNR, NNS, 3, stern_judging, role, Params(8, 0.0, 0.01, 0.01, 0)};
        const PairwiseSetting b{NNR, NNS, 3, stern_judging, role, Params(8, 0.4, 0.01, 0.01, 0)};
        for (int i = 0; i <= 3; ++i) {
            for (int j = 0; j <= 5; ++j) {
                EXPECT_EQ(pi(a, {i, j}, Species::X), pi(b, {i, j}, Species::X));
                EXPECT_EQ(pi(a, {i, j}, Species::Y), pi(b, {i, j}, Species::Y));
            }
        }
    }
}

TEST(ExpectedPayoffs, PointMassGivesStatePayoff)
{
    const PairwiseSetting s{Strategy::parse("FNR"), NNS, 4, stern_judging, RoleAssignment::ReputationBased,
                            Params(10, 0.01, 0.01, 0.01, 0)};
    StationaryDist v;
    v.grid = StateGrid(s);
    v.probabilities.assign(v.grid.size(), 0.0);
    v.probabilities[v.grid.index({3, 2})] = 1.0;
    const auto g = expected_payoffs(s, v);
    EXPECT_EQ(g.x, pi(s, {3, 2}, Species::X));
    EXPECT_EQ(g.y, pi(s, {3, 2}, Species::Y));
}

TEST(ExpectedPayoffs, StateIndependentPayoffForAnyDistribution)
{
    const PairwiseSetting s{NNR, NNS, 5, stern_judging, RoleAssignment::Random, Params(10, 0.01, 0.01, 0.01, 0)};
    const auto v = default_initial(StateGrid(s));
    EXPECT_NEAR(expected_payoffs(s, v).x, 0.49, 1e-14);
    EXPECT_NEAR(expected_payoffs(s, v).y, 0.5, 1e-14);
}

TEST(ExpectedPayoffs, IndependentOfBeta)
{
    PairwiseSetting s{Strategy::parse("FNR"), NNS, 4, stern_judging, RoleAssignment::Random,
                      Params(10, 0.01, 0.01, 0.01, 0)};
    const auto v = solve_chain(s).distribution;
    const auto g0 = expected_payoffs(s, v);
    s.params = s.params.with_beta(3.0);
    const auto g1 = expected_payoffs(s, v);
    EXPECT_EQ(g0.x, g1.x);
    EXPECT_EQ(g0.y, g1.y);
}

TEST(ExpectedPayoffs, RejectsForeignGrid)
{
    const PairwiseSetting s{NNR, NNS, 5, stern_judging, RoleAssignment::Random, Params(10, 0.01, 0.01, 0.01, 0)};
    EXPECT_THROW(expected_payoffs(s, default_initial(StateGrid(4, 6))), std::invalid_argument);
    EXPECT_THROW(pi(s, {6, 0}, Species::X), std::out_of_range);
}

#include <gtest/gtest.h>

#include "fairdg/fairness.hpp"

using namespace fairdg;

namespace {
const Strategy FNR = Strategy::parse("FNR");
const Params defaults(50, 0.01, 0.01, 0.01, 0.0);
constexpr RoleAssignment roles[] = {RoleAssignment::Random, RoleAssignment::ReputationBased};
} // namespace

TEST(PFair, Constants)
{
    for (RoleAssignment role : roles) {
        for (int i : {0, 17, 50}) {
            EXPECT_EQ(p_fair(i, Strategy::parse("FFR"), role, defaults), 0.99);
            EXPECT_EQ(p_fair(i, Strategy::parse("FFS"), role, defaults), 0.99);
            EXPECT_EQ(p_fair(i, Strategy::parse("NNR"), role, defaults), 0.0);
            EXPECT_EQ(p_fair(i, Strategy::parse("NNS"), role, defaults), 0.0);
            EXPECT_EQ(p_fair(i, Strategy::parse("FNS"), role, defaults), 0.1);
            EXPECT_EQ(p_fair(i, Strategy::parse("NFS"), role, defaults), 0.1);
        }
    }
}

TEST(PFair, DiscriminatorEndpointsAndMidpoint)
{
    const auto rep = RoleAssignment::ReputationBased;
    EXPECT_DOUBLE_EQ(p_fair(50, FNR, rep, defaults), 0.99);
    EXPECT_EQ(p_fair(0, FNR, rep, defaults), 0.0);
    EXPECT_DOUBLE_EQ(p_fair(25, FNR, RoleAssignment::Random, defaults), 0.495);
    EXPECT_THROW(p_fair(51, FNR, rep, defaults), std::out_of_range);
}

TEST(PFair, Bounded)
{
    for (RoleAssignment role : roles) {
        for (Strategy x : all_strategies()) {
            for (int i = 0; i <= 50; ++i) {
                const double v = p_fair(i, x, role, defaults);
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 0.99 + 1e-15);
            }
        }
    }
}

TEST(FFair, Levels)
{
    for (RoleAssignment role : roles) {
        EXPECT_EQ(f_fair(Strategy::parse("NNR"), stern_judging, role, defaults), 0.0);
        EXPECT_LT(f_fair(FNR, image_scoring, role, defaults), 1e-3);
        EXPECT_GT(f_fair(FNR, stern_judging, role, defaults), 0.8);
        // beta only enters through the strategy dynamics
        EXPECT_EQ(f_fair(FNR, stern_judging, role, defaults),
                  f_fair(FNR, stern_judging, role, defaults.with_beta(0.9)));
    }
}

TEST(TotalFairness, NeutralSelectionAveragesLevels)
{
    const Params p = defaults.with_population(20);
    for (RoleAssignment role : roles) {
        const auto r = total_fairness(simple_standing, role, p, 1);
        const auto f = fairness_levels(simple_standing, role, p);
        const double want = (0.99 + 0.99 + 0.1 + 0.1 + f[FNR.index()] + f[Strategy::parse("NFR").index()]) / 8;
        EXPECT_NEAR(r.total, want, 1e-14);
    }
}

TEST(TotalFairness, LandscapeReuseMatchesFreshSolve)
{
    const Params p = defaults.with_population(12).with_beta(0.7);
    const PayoffLandscape land(stern_judging, RoleAssignment::ReputationBased, p.with_beta(0.0), 1);
    const auto levels = fairness_levels(stern_judging, RoleAssignment::ReputationBased, p);
    const auto a = total_fairness(land, levels, 0.7, 0.01);
    const auto b = total_fairness(stern_judging, RoleAssignment::ReputationBased, p, 1);
    EXPECT_NEAR(a.total, b.total, 1e-15);
    EXPECT_EQ(a.params.beta(), 0.7);
}

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "fairdg/norms.hpp"

using namespace fairdg;

namespace {
constexpr auto G = Reputation::Good;
constexpr auto B = Reputation::Bad;
constexpr auto F = Action::Fair;
constexpr auto N = Action::Unfair;
} // namespace

TEST(Assess, SternJudgingRewardsFairnessTowardGood)
{
    EXPECT_EQ(assess(stern_judging, G, F, G), G);
}

TEST(Assess, ShunningCondemnsUnfairnessTowardBad)
{
    EXPECT_EQ(assess(shunning, G, N, B), B);
}

TEST(Assess, ThirdOrderNormUsesPriorVector)
{
    const SocialNorm n{{1, 1, 0, 1}, {1, 0, 0, 1}};
    EXPECT_EQ(assess(n, B, F, B), B);
    EXPECT_EQ(assess(n, G, F, B), G);
}

TEST(Assess, SecondOrderIgnoresPrior)
{
    for (const auto& n : all_second_order()) {
        for (Action a : {F, N}) {
            for (Reputation r : {G, B}) {
                EXPECT_EQ(assess(n, G, a, r), assess(n, B, a, r)) << to_string(n);
            }
        }
    }
}

TEST(NamedNorms, Vectors)
{
    EXPECT_EQ(named_norm("stern_judging"), (SocialNorm{{1, 0, 0, 1}, {1, 0, 0, 1}}));
    EXPECT_EQ(named_norm("image_scoring"), (SocialNorm{{1, 1, 0, 0}, {1, 1, 0, 0}}));
    EXPECT_EQ(named_norm("simple_standing"), (SocialNorm{{1, 1, 0, 1}, {1, 1, 0, 1}}));
    EXPECT_EQ(named_norm("shunning"), (SocialNorm{{1, 0, 0, 0}, {1, 0, 0, 0}}));
    EXPECT_EQ(named_norm("SJ"), stern_judging);
    EXPECT_THROW(named_norm("tit_for_tat"), std::out_of_range);
}

TEST(Catalogs, LeadingEight)
{
    const auto l8 = leading_eight();
    ASSERT_EQ(l8.size(), 8u);
    std::set<std::string> seen;
    for (const auto& n : l8) seen.insert(to_string(n));
    EXPECT_EQ(seen.size(), 8u);
    const SocialNorm crossed{{1, 0, 0, 1}, {1, 1, 0, 1}};
    EXPECT_NE(std::find(l8.begin(), l8.end(), crossed), l8.end());
    EXPECT_NE(std::find(l8.begin(), l8.end(), stern_judging), l8.end());
    EXPECT_NE(std::find(l8.begin(), l8.end(), simple_standing), l8.end());
    // Every member judges fair-toward-good as good and unfair-toward-good as bad.
    for (const auto& n : l8) {
        for (const auto* v : {&n.if_good, &n.if_bad}) {
            EXPECT_TRUE(v->judges_good(F, G));
            EXPECT_FALSE(v->judges_good(N, G));
        }
        EXPECT_TRUE(n.if_good.judges_good(N, B));
    }
}

TEST(Catalogs, SecondOrder)
{
    const auto all = all_second_order();
    ASSERT_EQ(all.size(), 16u);
    EXPECT_TRUE(std::all_of(all.begin(), all.end(), [](const SocialNorm& n) { return n.second_order(); }));
    EXPECT_NE(std::find(all.begin(), all.end(), shunning), all.end());
    std::set<std::string> seen;
    for (const auto& n : all) seen.insert(to_string(n));
    EXPECT_EQ(seen.size(), 16u);
}

TEST(Catalogs, IntersectionIsSternJudgingAndSimpleStanding)
{
    std::vector<SocialNorm> both;
    for (const auto& n : leading_eight()) {
        const auto so = all_second_order();
        if (std::find(so.begin(), so.end(), n) != so.end()) both.push_back(n);
    }
    ASSERT_EQ(both.size(), 2u);
    EXPECT_NE(std::find(both.begin(), both.end(), stern_judging), both.end());
    EXPECT_NE(std::find(both.begin(), both.end(), simple_standing), both.end());
}

TEST(Bitstrings, RoundTripEveryThirdOrderNorm)
{
    for (const auto& g : all_second_order()) {
        for (const auto& b : all_second_order()) {
            const SocialNorm n{g.if_good, b.if_good};
            EXPECT_EQ(parse_norm(to_string(n)), n);
            EXPECT_EQ(norm_from_spec(to_string(n)), n);
        }
    }
}

TEST(Bitstrings, ShortFormIsSecondOrder)
{
    EXPECT_EQ(parse_norm("1001"), stern_judging);
    EXPECT_EQ(to_string(stern_judging), "1001/1001");
    EXPECT_EQ(norm_label(stern_judging), "SJ");
    EXPECT_EQ(norm_label(SocialNorm{{1, 0, 0, 1}, {1, 1, 0, 1}}), "1001/1101");
}

TEST(Bitstrings, RejectsMalformed)
{
    for (const char* bad : {"", "100", "10011", "1021", "1001/", "1001/10", "1001/1001/1001", "abcd"}) {
        EXPECT_THROW(parse_norm(bad), std::invalid_argument) << bad;
    }
}

TEST(Strategies, OrderAndNames)
{
    const char* names[] = {"FFR", "FFS", "FNR", "FNS", "NFR", "NFS", "NNR", "NNS"};
    for (std::size_t k = 0; k < Strategy::count; ++k) {
        EXPECT_EQ(Strategy::from_index(k).name(), names[k]);
        EXPECT_EQ(Strategy::parse(names[k]).index(), k);
    }
    const auto fnr = Strategy::parse("fnr");
    EXPECT_TRUE(fnr.intends_fair(G));
    EXPECT_FALSE(fnr.intends_fair(B));
    EXPECT_TRUE(fnr.reports());
    EXPECT_THROW(Strategy::parse("FXR"), std::invalid_argument);
    EXPECT_THROW(Strategy::parse("FF"), std::invalid_argument);
    EXPECT_THROW(Strategy::from_index(8), std::out_of_range);
}

#include <gtest/gtest.h>

#include "common.hpp"

using namespace railsched;
using model::Variant;

namespace {

std::vector<Occupation> sorted(std::vector<Occupation> v) {
    std::sort(v.begin(), v.end(), [](const Occupation& a, const Occupation& b) {
        return std::tie(a.train, a.entry, a.where) < std::tie(b.train, b.entry, b.where);
    });
    return v;
}

ScheduleSolution solve(const Instance& inst, const DisruptionScenario& sc, const model::ModelConfig& cfg) {
    return solver::solve(model::build(inst, sc, cfg), 120, 1);
}

}  // namespace

TEST(Build, ZeroTrains) {
    auto inst = load_instance(fixture::line(10));
    auto m = model::build(inst, {}, fixture::config(0));
    EXPECT_TRUE(m.columns.empty());
    EXPECT_EQ(m.baseline(), 0);
    auto s = solver::solve(m, 10, 1);
    EXPECT_EQ(s.status, SolveStatus::optimal);
    EXPECT_EQ(s.objective, 0);
}

TEST(Build, OneTrainNoDisruption) {
    auto doc = fixture::line(10);
    doc["trains"].push_back(fixture::train("1", {"A", "B", "C"}, {"AB", "BC"}, 5, 10));
    auto inst = load_instance(doc);
    auto s = solve(inst, {}, fixture::config(10));
    ASSERT_EQ(s.status, SolveStatus::optimal);
    EXPECT_EQ(s.objective, 20);
    EXPECT_EQ(s.total_delay, 0);
    EXPECT_EQ(sorted(s.occupations), sorted(schedule_from_timetable(inst).occupations));
}

TEST(Build, RuleTagsPerVariant) {
    auto inst = fixture::iran();
    auto sc = fixture::scenario(inst, "iran-s46.json");
    auto basic = model::build(inst, sc, fixture::config(480));
    auto adj = model::build(inst, sc, fixture::config(480, Variant::adjusted));
    for (int t = 2; t <= 21; ++t) EXPECT_TRUE(basic.tags().count(t)) << t;
    EXPECT_TRUE(basic.tags().count(23));
    EXPECT_TRUE(basic.tags().count(24));
    EXPECT_FALSE(basic.tags().count(29));
    EXPECT_TRUE(adj.tags().count(29));
    EXPECT_TRUE(adj.tags().count(30));
    EXPECT_FALSE(adj.tags().count(20));
    EXPECT_FALSE(adj.tags().count(21));
    EXPECT_FALSE(adj.tags().count(22));
    EXPECT_LT(adj.columns.size(), basic.columns.size());
}

TEST(Build, RejectsOffGridBeta) {
    auto inst = fixture::testnet();
    EXPECT_THROW(model::build(inst, {}, fixture::config(7)), Error);
}

TEST(IdentifyAffected, TestNetwork) {
    auto inst = fixture::testnet();
    EXPECT_EQ(model::identify_affected(inst, fixture::scenario(inst, "testnet-s1.json"), 15),
              (std::set<std::string>{"4", "8", "10", "14"}));
    EXPECT_EQ(model::identify_affected(inst, fixture::scenario(inst, "testnet-s2.json"), 15),
              (std::set<std::string>{"4", "14"}));
    EXPECT_TRUE(model::identify_affected(inst, {}, 15).empty());
}

TEST(IdentifyAffected, IranClosureHitsTrainsOneAndFive) {
    auto inst = fixture::iran();
    auto r = model::identify_affected(inst, fixture::scenario(inst, "iran-s46.json"), 0);
    EXPECT_TRUE(r.count("1"));
    EXPECT_TRUE(r.count("5"));
}

TEST(MaterializeClosures, IranTehranQom) {
    auto inst = fixture::iran();
    auto cg = model::materialize_closures(fixture::scenario(inst, "iran-s46.json"), inst.grid, inst.network);
    auto b = inst.network.block_at("46");
    EXPECT_EQ(cg.runs(b, [](int v) { return v == 2; }), (std::vector<std::pair<int, int>>{{144, 168}}));
    for (std::size_t o = 0; o < inst.network.blocks().size(); ++o)
        if (o != b) {
            EXPECT_FALSE(cg.any(o));
        }
}

TEST(MaterializeClosures, TestScenarioTwoAndEmpty) {
    auto inst = fixture::testnet();
    auto cg = model::materialize_closures(fixture::scenario(inst, "testnet-s2.json"), inst.grid, inst.network);
    auto b = inst.network.block_at("67");
    EXPECT_EQ(cg.runs(b, [](int v) { return v == 1; }), (std::vector<std::pair<int, int>>{{3, 7}}));
    auto none = model::materialize_closures({}, inst.grid, inst.network);
    for (std::size_t o = 0; o < inst.network.blocks().size(); ++o) EXPECT_FALSE(none.any(o));
}

// Optima on the reconstructed network, also confirmed by an external MILP
// solver on the exported models.
TEST(Optimum, TestNetworkBasic) {
    auto inst = fixture::testnet();
    auto s1 = solve(inst, fixture::scenario(inst, "testnet-s1.json"), fixture::config(15));
    ASSERT_EQ(s1.status, SolveStatus::optimal);
    EXPECT_EQ(s1.objective, 595);
    EXPECT_EQ(s1.total_delay, 55);
    auto s2 = solve(inst, fixture::scenario(inst, "testnet-s2.json"), fixture::config(15));
    ASSERT_EQ(s2.status, SolveStatus::optimal);
    EXPECT_EQ(s2.objective, 555);
}

TEST(Optimum, TestNetworkAdjusted) {
    auto inst = fixture::testnet();
    auto s1 = solve(inst, fixture::scenario(inst, "testnet-s1.json"), fixture::config(15, Variant::adjusted));
    ASSERT_EQ(s1.status, SolveStatus::optimal);
    EXPECT_EQ(s1.objective, 595);
    EXPECT_EQ(s1.affected, (std::set<std::string>{"4", "8", "10", "14"}));
    auto s2 = solve(inst, fixture::scenario(inst, "testnet-s2.json"), fixture::config(15, Variant::adjusted));
    ASSERT_EQ(s2.status, SolveStatus::optimal);
    EXPECT_EQ(s2.objective, 555);
    EXPECT_EQ(s2.total_delay, 15);
}

TEST(Optimum, AdjustedWithNothingAffectedKeepsTheTimetable) {
    auto inst = fixture::testnet();
    auto s = solve(inst, {}, fixture::config(15, Variant::adjusted));
    ASSERT_EQ(s.status, SolveStatus::optimal);
    EXPECT_TRUE(s.affected.empty());
    EXPECT_EQ(s.objective, 540);
    EXPECT_EQ(sorted(s.occupations), sorted(schedule_from_timetable(inst).occupations));
}

TEST(Optimum, ZeroBetaOnlyBindsTheBasicVariant) {
    auto doc = fixture::line(10);
    doc["trains"].push_back(fixture::train("1", {"A", "B"}, {"AB"}, 10, 10));
    auto inst = load_instance(doc);
    DisruptionScenario sc;
    sc.closures.push_back({"AB", 10, 10, 1, std::nullopt});
    auto basic = solve(inst, sc, fixture::config(0));
    EXPECT_EQ(basic.status, SolveStatus::infeasible);
    EXPECT_FALSE(basic.has_schedule);
    // The adjusted variant has no delay cap; beta only sizes the affected set.
    auto adj = solve(inst, sc, fixture::config(0, Variant::adjusted));
    ASSERT_EQ(adj.status, SolveStatus::optimal);
    EXPECT_EQ(adj.total_delay, 10);
    auto relaxed = solve(inst, sc, fixture::config(10));
    ASSERT_EQ(relaxed.status, SolveStatus::optimal);
    EXPECT_EQ(relaxed.total_delay, 10);
}

TEST(Optimum, DelayCapVariantsAgreeWithoutBinding) {
    auto inst = fixture::testnet();
    auto sc = fixture::scenario(inst, "testnet-s2.json");
    auto a = fixture::config(15);
    auto b = a;
    b.delay_cap = model::DelayCap::train_sum;
    EXPECT_EQ(solve(inst, sc, a).objective, solve(inst, sc, b).objective);
}

#include <gtest/gtest.h>

#include <sstream>

#include "common.hpp"
#include "railsched/generate.hpp"

using namespace railsched;
using model::Variant;

namespace {

ScheduleSolution solve(const Instance& inst, const DisruptionScenario& sc, const model::ModelConfig& cfg,
                       int threads = 1) {
    return solver::solve(model::build(inst, sc, cfg), 120, threads);
}

std::set<std::string> mps_columns(const std::string& text) {
    std::set<std::string> cols;
    std::istringstream is(text);
    std::string line;
    bool in = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] != ' ') {
            in = line.rfind("COLUMNS", 0) == 0;
            continue;
        }
        if (!in) continue;
        std::istringstream ls(line);
        std::string name, second;
        ls >> name >> second;
        if (second == "'MARKER'") continue;
        cols.insert(name);
    }
    return cols;
}

}  // namespace

TEST(Solve, NoDisruptionReturnsBaseline) {
    auto inst = fixture::testnet();
    auto s = solve(inst, {}, fixture::config(15));
    ASSERT_EQ(s.status, SolveStatus::optimal);
    EXPECT_EQ(s.objective, 540);
    EXPECT_EQ(s.total_delay, 0);
}

TEST(Solve, AdjustedScenarioTwoUsesTheOppositeTrack) {
    auto inst = fixture::testnet();
    auto sc = fixture::scenario(inst, "testnet-s2.json");
    auto s = solve(inst, sc, fixture::config(15, Variant::adjusted));
    ASSERT_EQ(s.status, SolveStatus::optimal);
    EXPECT_EQ(s.objective, 555);
    const auto& c = sc.closures[0];
    bool opposite = false;
    for (const auto& o : s.of_train("4"))
        if (o.kind == Occupation::Kind::block && o.where == "67" && o.forward == *c.forward_track &&
            o.entry < c.end() && c.start < o.exit)
            opposite = true;
    EXPECT_TRUE(opposite);
    EXPECT_TRUE(validate::check(s, inst, sc, fixture::config(15, Variant::adjusted), s.affected).empty());
}

TEST(Solve, OpposingTrainsOnSingleTrack) {
    // Trains meet head-on on AB; one of them must wait for the other to clear.
    json doc = fixture::line(15, 60);
    doc["trains"].push_back(fixture::train("1", {"A", "B"}, {"AB"}, 5, 15));
    doc["trains"].push_back(fixture::train("2", {"B", "A"}, {"AB"}, 10, 15));
    auto inst = load_instance(doc);
    // The initial plan itself is the conflict. An idle closure on BC at time
    // zero puts every train after the freeze cutoff, so both may move.
    DisruptionScenario sc;
    sc.closures.push_back({"BC", 0, 5, 1, std::nullopt});
    auto cfg = fixture::config(30);
    auto m = model::build(inst, sc, cfg);
    auto s = solver::solve(m, 30, 1);
    auto bf = solver::brute_force(m);
    ASSERT_EQ(s.status, SolveStatus::optimal);
    ASSERT_EQ(bf.status, SolveStatus::optimal);
    EXPECT_EQ(s.objective, bf.objective);
    // Headway separates entries from entries and exits from exits, so train 2
    // may enter the moment train 1 clears at 20: a delay of 10. Letting train 1
    // wait instead would cost 20.
    EXPECT_EQ(s.total_delay, 10);
    EXPECT_EQ(s.objective, 30 + 10);
    auto twos = s.of_train("2");
    ASSERT_EQ(twos.size(), 2u);
    EXPECT_EQ(std::find_if(twos.begin(), twos.end(), [](const Occupation& o) { return o.kind == Occupation::Kind::block; })
                  ->entry,
              20);
}

TEST(Solve, ThreadsAgree) {
    auto inst = fixture::testnet();
    auto sc = fixture::scenario(inst, "testnet-s1.json");
    auto one = solve(inst, sc, fixture::config(15), 1);
    auto four = solve(inst, sc, fixture::config(15), 4);
    ASSERT_EQ(one.status, SolveStatus::optimal);
    ASSERT_EQ(four.status, SolveStatus::optimal);
    EXPECT_EQ(one.objective, four.objective);
}

TEST(Solve, IncumbentCallbackSeesImprovingValues) {
    auto inst = fixture::testnet();
    auto m = model::build(inst, fixture::scenario(inst, "testnet-s1.json"), fixture::config(15));
    std::vector<Minute> seen;
    solver::SolveOptions opt;
    opt.on_incumbent = [&](const ScheduleSolution& s) { seen.push_back(s.objective); };
    auto s = solver::solve(m, opt);
    ASSERT_FALSE(seen.empty());
    for (std::size_t i = 1; i < seen.size(); ++i) EXPECT_LT(seen[i], seen[i - 1]);
    EXPECT_EQ(seen.back(), s.objective);
}

TEST(Solve, InfeasibilityCarriesACertificate) {
    json doc = fixture::line(10);
    doc["trains"].push_back(fixture::train("1", {"A", "B"}, {"AB"}, 10, 10));
    auto inst = load_instance(doc);
    DisruptionScenario sc;
    sc.closures.push_back({"AB", 0, 60, 1, std::nullopt});
    auto s = solve(inst, sc, fixture::config(20));
    EXPECT_EQ(s.status, SolveStatus::infeasible);
    EXPECT_FALSE(s.certificate.empty());
}

TEST(Solve, TimeoutKeepsABoundBelowTheIncumbent) {
    generate::CorridorOptions co;
    co.seed = 3;
    auto inst = generate::corridor(co);
    auto b = generate::busiest_block(inst);
    auto sc = generate::centred_closure(inst, inst.network.blocks()[b].id, generate::busiest_time(inst, b, 90), 120);
    auto s = solver::solve(model::build(inst, sc, fixture::config(200)), 0.2, 1);
    if (s.status == SolveStatus::timeout && s.has_schedule) {
        ASSERT_TRUE(s.bound.has_value());
        EXPECT_LE(*s.bound, s.objective);
        EXPECT_TRUE(s.gap().has_value());
    } else {
        EXPECT_NE(s.status, SolveStatus::infeasible);
    }
}

TEST(BruteForce, AgreesWithSearchOnTinyInstances) {
    int compared = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        auto tc = generate::tiny(seed);
        for (auto v : {Variant::basic, Variant::adjusted}) {
            auto cfg = fixture::config(tc.beta, v);
            auto m = model::build(tc.instance, tc.scenario, cfg);
            auto a = solver::solve(m, 30, 1);
            auto b = solver::brute_force(m);
            ASSERT_EQ(a.status, b.status) << "seed " << seed;
            if (a.status == SolveStatus::optimal) {
                ASSERT_EQ(a.objective, b.objective) << "seed " << seed;
                EXPECT_TRUE(validate::check(a, tc.instance, tc.scenario, cfg, a.affected).empty()) << "seed " << seed;
                EXPECT_TRUE(validate::check(b, tc.instance, tc.scenario, cfg, b.affected).empty()) << "seed " << seed;
            }
            ++compared;
        }
    }
    EXPECT_EQ(compared, 600);
}

TEST(BruteForce, WholeHorizonClosureIsInfeasible) {
    json doc = fixture::line(10, 40);
    doc["trains"].push_back(fixture::train("1", {"A", "B", "C"}, {"AB", "BC"}, 0, 10));
    auto inst = load_instance(doc);
    DisruptionScenario sc;
    sc.closures.push_back({"AB", 0, 40, 1, std::nullopt});
    auto m = model::build(inst, sc, fixture::config(40));
    EXPECT_EQ(solver::brute_force(m).status, SolveStatus::infeasible);
}

TEST(BruteForce, ClosureForcesTwoIntervalWait) {
    json doc = fixture::line(5, 40);
    doc["trains"].push_back(fixture::train("1", {"A", "B"}, {"AB"}, 5, 5));
    auto inst = load_instance(doc);
    DisruptionScenario sc;
    sc.closures.push_back({"AB", 5, 10, 1, std::nullopt});
    auto m = model::build(inst, sc, fixture::config(20));
    auto bf = solver::brute_force(m);
    ASSERT_EQ(bf.status, SolveStatus::optimal);
    EXPECT_EQ(bf.total_delay, 10);
    EXPECT_EQ(solver::solve(m, 10, 1).objective, bf.objective);
}

TEST(BruteForce, RefusesLargeModels) {
    auto inst = fixture::testnet();
    auto m = model::build(inst, {}, fixture::config(15));
    EXPECT_THROW(solver::brute_force(m), Error);
}

TEST(ExportMps, EmptyModel) {
    auto inst = load_instance(fixture::line(10));
    auto doc = solver::export_mps(model::build(inst, {}, fixture::config(0)));
    EXPECT_NE(doc.text.find("ROWS"), std::string::npos);
    EXPECT_NE(doc.text.find("COLUMNS"), std::string::npos);
    EXPECT_NE(doc.text.find("ENDATA"), std::string::npos);
    EXPECT_TRUE(mps_columns(doc.text).empty());
}

TEST(ExportMps, ColumnCountMatchesModel) {
    json j = fixture::line(10);
    j["trains"].push_back(fixture::train("1", {"A", "B", "C"}, {"AB", "BC"}, 5, 10));
    auto inst = load_instance(j);
    auto m = model::build(inst, {}, fixture::config(10));
    auto doc = solver::export_mps(m);
    EXPECT_EQ(mps_columns(doc.text).size(), m.columns.size());
}

TEST(ExportMps, TestNetworkExportsEveryColumn) {
    auto inst = fixture::testnet();
    auto m = model::build(inst, fixture::scenario(inst, "testnet-s1.json"), fixture::config(15));
    auto doc = solver::export_mps(m);
    EXPECT_EQ(mps_columns(doc.text).size(), m.columns.size());
    EXPECT_NE(doc.text.find("BOUNDS"), std::string::npos);
}

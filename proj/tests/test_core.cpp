#include <gtest/gtest.h>

#include "common.hpp"

using namespace railsched;

TEST(TimeGrid, IntervalIndex) {
    TimeGrid g(5, 1440, 0);
    EXPECT_EQ(g.to_interval(720), 144);
    EXPECT_EQ(g.to_interval(0), 0);
    EXPECT_EQ(g.to_interval(15), 3);
    EXPECT_EQ(to_interval(15, TimeGrid(5, 120, 0)), 3);
    EXPECT_EQ(g.to_minute(144), 720);
}

TEST(TimeGrid, OffsetOrigin) {
    TimeGrid g(5, 60, 100);
    EXPECT_EQ(g.to_interval(100), 0);
    EXPECT_EQ(g.to_interval(125), 5);
    EXPECT_THROW(g.to_interval(95), Error);
    EXPECT_THROW(g.to_interval(101), Error);
}

TEST(TimeGrid, RejectsBadShapes) {
    EXPECT_THROW(TimeGrid(0, 60, 0), Error);
    EXPECT_THROW(TimeGrid(5, 62, 0), Error);
    EXPECT_THROW(TimeGrid(5, 0, 0), Error);
}

TEST(LoadInstance, TestNetwork) {
    auto inst = fixture::testnet();
    EXPECT_EQ(inst.trains.size(), 25u);
    EXPECT_EQ(inst.grid, TimeGrid(5, 120, 0));
    EXPECT_EQ(inst.grid.intervals(), 24);
    EXPECT_EQ(inst.network.nodes().size(), 11u);
}

TEST(LoadInstance, EmptyTrainList) {
    auto inst = load_instance(fixture::line(10));
    EXPECT_TRUE(inst.trains.empty());
    EXPECT_EQ(inst.network.blocks().size(), 2u);
    EXPECT_EQ(baseline_objective(inst.trains), 0);
}

TEST(LoadInstance, TravelTimeMismatch) {
    auto doc = fixture::line(10);
    auto t = fixture::train("1", {"A", "B"}, {"AB"}, 0, 10);
    t["stops"][1]["arrive"] = 15;
    t["stops"][1]["depart"] = 15;
    doc["trains"].push_back(t);
    try {
        load_instance(doc);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("travel-time mismatch"), std::string::npos) << e.what();
    }
}

TEST(LoadInstance, SchemaErrors) {
    auto doc = fixture::line(10);
    doc.erase("grid");
    EXPECT_THROW(load_instance(doc), Error);

    doc = fixture::line(10);
    doc["blocks"][0]["tracks"] = 3;
    EXPECT_THROW(load_instance(doc), Error);

    doc = fixture::line(10);
    doc["trains"].push_back(fixture::train("1", {"A", "C"}, {"AB"}, 0, 10));
    EXPECT_THROW(load_instance(doc), Error);

    doc = fixture::line(10);
    doc["trains"].push_back(fixture::train("1", {"A", "B"}, {"AB"}, 3, 10));
    EXPECT_THROW(load_instance(doc), Error);
}

TEST(LoadInstance, RoundTrip) {
    auto inst = fixture::testnet();
    auto again = load_instance(to_json(inst));
    EXPECT_EQ(again.network, inst.network);
    EXPECT_EQ(again.trains, inst.trains);
    EXPECT_EQ(again.grid, inst.grid);
}

TEST(Baseline, TestNetworkSumsTripLengths) {
    // Trip lengths of the 25 published services.
    const Minute trips[] = {10, 10, 20, 15, 15, 10, 20, 25, 40, 20, 20, 10, 40,
                            35, 20, 15, 40, 20, 20, 10, 20, 15, 30, 20, 40};
    Minute sum = 0;
    for (auto t : trips) sum += t;
    EXPECT_EQ(sum, 540);
    EXPECT_EQ(baseline_objective(fixture::testnet().trains), 540);
}

TEST(Baseline, EmptyList) { EXPECT_EQ(baseline_objective({}), 0); }

TEST(Baseline, IranAggregated) {
    auto inst = fixture::iran();
    EXPECT_EQ(inst.trains.size(), 14u);
    Minute sum = 0;
    for (const auto& t : inst.trains) sum += t.stops.back().arrive - t.departure;
    EXPECT_EQ(baseline_objective(inst.trains), sum);
}

TEST(Legs, OrientationFollowsTraversal) {
    auto inst = fixture::testnet();
    for (const auto& t : inst.trains) {
        auto legs = legs_of(t, inst.network);
        ASSERT_EQ(legs.size(), t.route.size());
        for (std::size_t i = 0; i < legs.size(); ++i) {
            const auto& b = inst.network.blocks()[legs[i].block];
            EXPECT_EQ(legs[i].exit - legs[i].entry, b.travel_time);
            EXPECT_EQ(legs[i].forward, inst.network.nodes()[legs[i].from].id == b.from);
        }
    }
}

TEST(Scenario, Validation) {
    auto inst = fixture::testnet();
    auto s1 = fixture::scenario(inst, "testnet-s1.json");
    ASSERT_EQ(s1.closures.size(), 1u);
    EXPECT_EQ(s1.closures[0].tracks_closed, 2);
    auto s2 = fixture::scenario(inst, "testnet-s2.json");
    EXPECT_EQ(s2.closures[0].tracks_closed, 1);
    ASSERT_TRUE(s2.closures[0].forward_track.has_value());

    json bad = {{"closures", json::array({{{"block", "67"}, {"start", 13}, {"duration", 20}, {"tracks_closed", 1}}})}};
    EXPECT_THROW(load_scenario(bad, inst), Error);
    bad["closures"][0]["start"] = 15;
    bad["closures"][0]["tracks_closed"] = 3;
    EXPECT_THROW(load_scenario(bad, inst), Error);
    bad["closures"][0]["tracks_closed"] = 1;
    bad["closures"][0]["block"] = "nope";
    EXPECT_THROW(load_scenario(bad, inst), Error);
    bad["closures"][0]["block"] = "67";
    bad["closures"].push_back(bad["closures"][0]);
    EXPECT_THROW(load_scenario(bad, inst), Error);
}

TEST(Scenario, RoundTrip) {
    auto inst = fixture::testnet();
    auto s2 = fixture::scenario(inst, "testnet-s2.json");
    EXPECT_EQ(load_scenario(to_json(s2), inst), s2);
}

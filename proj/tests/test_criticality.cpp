#include <gtest/gtest.h>

#include <chrono>
#include <map>

#include "common.hpp"

using namespace railsched;
using namespace railsched::criticality;

namespace {

struct Row {
    const char* name;
    double demand;
    int degree;
    double d_norm, p_norm, cr;
};

// Printed importance table of the national network.
const Row table[] = {
    {"Tehran", 2556200, 3, 1, 0.738185432, 88.6},       {"Khaf", 44800, 2, 0.5, 0.004115515, 7.3},
    {"Tabas", 44800, 2, 0.5, 0.004115515, 7.3},         {"Mashhad", 3459600, 1, 0.25, 1.002244826, 43.6},
    {"Isfahan", 230400, 2, 0.5, 0.058365486, 21.2},     {"Shiraz", 153600, 1, 0.25, 0.035917222, 11.5},
    {"Tabriz", 499200, 2, 0.5, 0.136934409, 29.8},      {"Urmia", 96000, 1, 0.25, 0.019081024, 8.9},
    {"Ahvaz", 384000, 3, 1, 0.103262013, 40.3},         {"Zanjan", 136200, 2, 0.5, 0.030831287, 16.4},
    {"Ghazvin", 57600, 2, 0.5, 0.007856892, 9.5},       {"Karaj", 172800, 2, 0.5, 0.041529288, 18.5},
    {"Kashan", 96000, 2, 0.5, 0.019081024, 13.5},       {"Qom", 211200, 3, 1, 0.05275342, 30.8},
    {"Arak-Qom", 38400, 2, 0.5, 0.002244826, 5.8},      {"Malayer", 96000, 2, 0.5, 0.019081024, 13.5},
    {"Kermanshah", 96000, 1, 0.25, 0.019081024, 8.9},   {"Yazd", 144900, 2, 0.5, 0.033374255, 16.9},
    {"Bandar Abbas", 38400, 1, 0.25, 0.002244826, 3.8}, {"Kerman", 230400, 2, 0.5, 0.058365486, 21.2},
    {"Sari", 96000, 2, 0.5, 0.019081024, 13.5},         {"Hamedan", 134400, 1, 0.25, 0.030305156, 10.7},
    {"Rasht", 164100, 1, 0.25, 0.038986321, 11.9},      {"Khoramshahr", 76800, 1, 0.25, 0.013468958, 7.8},
    {"Maraghe", 96000, 3, 1, 0.019081024, 20.5},        {"Mianeh", 42000, 3, 1, 0.003297089, 10.2},
};

Instance national() { return load_instance_file(fixture::data("iran-full.json")); }

}  // namespace

TEST(NormalizedDegree, Examples) {
    EXPECT_DOUBLE_EQ(normalized_degree(3, 1, 3), 1.0);
    EXPECT_DOUBLE_EQ(normalized_degree(1, 1, 3), 0.25);
    EXPECT_DOUBLE_EQ(normalized_degree(2, 1, 3), 0.5);
    EXPECT_THROW(normalized_degree(2, 2, 2), Error);
}

TEST(NormalizedDemand, Examples) {
    EXPECT_NEAR(normalized_demand(2556200, 38400, 3459600), 0.738185432, 1e-9);
    EXPECT_NEAR(normalized_demand(3459600, 38400, 3459600), 1.002244826, 1e-9);
    EXPECT_NEAR(normalized_demand(38400, 38400, 3459600), 0.002244826, 1e-9);
    EXPECT_THROW(normalized_demand(5, 5, 5), Error);
}

TEST(CriticalityIndex, Examples) {
    Weights w;
    EXPECT_NEAR(criticality_index(1.0, 0.738185432, w), 88.6, 0.05);
    EXPECT_NEAR(criticality_index(0.25, 1.002244826, w), 43.6, 0.05);
    EXPECT_DOUBLE_EQ(criticality_index(1.0, 1.0, Weights{0.3, 0.7}), 100.0);
    EXPECT_THROW(criticality_index(0.0, 0.5, w), Error);
    EXPECT_THROW(criticality_index(0.5, 0.5, Weights{0.5, 0.6}), Error);
    EXPECT_THROW(criticality_index(0.5, 0.5, Weights{1.0, 0.0}), Error);
}

TEST(CriticalityIndex, IncreasingInEachArgument) {
    Weights w;
    double prev = 0;
    for (double d = 0.1; d <= 1.0; d += 0.1) {
        double v = criticality_index(d, 0.4, w);
        EXPECT_GT(v, prev);
        prev = v;
    }
    prev = 0;
    for (double p = 0.1; p <= 1.0; p += 0.1) {
        double v = criticality_index(0.4, p, w);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(RankNodes, ReproducesPrintedTable) {
    auto start = std::chrono::steady_clock::now();
    auto ranked = rank_nodes(national().network, {});
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(secs, 1.0);
    ASSERT_EQ(ranked.size(), std::size(table));
    std::map<std::string, CriticalityRecord> by_name;
    for (const auto& r : ranked) by_name[r.name] = r;
    for (const auto& row : table) {
        SCOPED_TRACE(row.name);
        ASSERT_TRUE(by_name.count(row.name));
        const auto& r = by_name[row.name];
        EXPECT_EQ(r.degree, row.degree);
        EXPECT_DOUBLE_EQ(r.demand, row.demand);
        EXPECT_NEAR(r.degree_norm, row.d_norm, 1e-9);
        EXPECT_NEAR(r.demand_norm, row.p_norm, 1e-6);
        EXPECT_NEAR(r.index, row.cr, 0.05);
    }
    EXPECT_EQ(ranked[0].name, "Tehran");
    EXPECT_EQ(ranked[1].name, "Mashhad");
}

TEST(RankNodes, TopNine) {
    auto inst = national();
    auto ranked = rank_nodes(inst.network, {});
    std::set<std::string> names;
    for (const auto& id : top_nodes(ranked, 9)) names.insert(inst.network.node(id).name);
    EXPECT_EQ(names, (std::set<std::string>{"Tehran", "Mashhad", "Ahvaz", "Qom", "Tabriz", "Isfahan", "Kerman",
                                            "Maraghe", "Karaj"}));
}

TEST(RankNodes, TwoNodes) {
    RailNetwork net({{"a", "A", 0, 10, false, {}}, {"b", "B", 0, 20, false, {}}, {"c", "C", 0, 0, true, {}}},
                    {{"ab", "a", "b", 1, 5, 0, 1}, {"bc", "b", "c", 1, 5, 0, 1}});
    auto r = rank_nodes(net, {});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].node, "b");
    EXPECT_GT(r[0].index, r[1].index);
}

TEST(RankNodes, OrderInvariantUnderDemandScaling) {
    auto inst = national();
    auto base = rank_nodes(inst.network, {});
    std::vector<Node> nodes = inst.network.nodes();
    for (auto& n : nodes) n.monthly_demand *= 3.7;
    auto scaled = rank_nodes(RailNetwork(nodes, inst.network.blocks()), {});
    ASSERT_EQ(base.size(), scaled.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        EXPECT_EQ(base[i].node, scaled[i].node);
        EXPECT_NEAR(base[i].demand_norm, scaled[i].demand_norm, 1e-12);
    }
}

TEST(Aggregate, ChainContraction) {
    Instance in;
    in.grid = TimeGrid(5, 120, 0);
    in.network = RailNetwork({{"A", "A", 0, 0, false, {}}, {"B", "B", 0, 0, false, {}}, {"C", "C", 0, 0, false, {}}},
                             {{"AB", "A", "B", 1, 30, 5, 2}, {"BC", "B", "C", 1, 30, 5, 2}});
    TrainService t;
    t.id = "1";
    t.origin = "A";
    t.destination = "C";
    t.route = {"AB", "BC"};
    t.stops = {{"A", 0, 0}, {"B", 30, 30}, {"C", 60, 60}};
    in.trains.push_back(t);
    auto res = aggregate(in, {"A", "C"});
    ASSERT_EQ(res.network().blocks().size(), 1u);
    const auto& b = res.network().blocks()[0];
    EXPECT_EQ(b.travel_time, 60);
    EXPECT_EQ(b.tracks, 1);
    EXPECT_TRUE(res.dummy_nodes.empty());
    ASSERT_EQ(res.trains().size(), 1u);
    EXPECT_EQ(res.trains()[0].travel(), 60);
    EXPECT_EQ(res.block_provenance.at(b.id).size(), 2u);
}

TEST(Aggregate, KeepEverythingIsIdentity) {
    auto in = fixture::testnet();
    std::set<std::string> all;
    for (const auto& n : in.network.nodes()) all.insert(n.id);
    auto res = aggregate(in, all);
    EXPECT_EQ(res.network(), in.network);
    EXPECT_EQ(res.trains(), in.trains);
    EXPECT_TRUE(res.dummy_nodes.empty());
    EXPECT_TRUE(res.dropped_trains.empty());
}

TEST(Aggregate, NationalTopNineReinstatesKashanJunction) {
    auto in = national();
    auto keep = top_nodes(rank_nodes(in.network, {}), 9);
    auto res = aggregate(in, keep);
    ASSERT_EQ(res.dummy_nodes.size(), 1u);
    const auto& d = res.network().node(res.dummy_nodes[0]);
    EXPECT_TRUE(d.is_dummy);
    EXPECT_EQ(d.dwell_min, 10);
    EXPECT_NE(d.name.find("Kashan"), std::string::npos);
    // The junction separates the Isfahan and Kerman lines south of Qom.
    auto j = res.network().node_at(d.id);
    std::set<std::string> around;
    for (auto b : res.network().incident(j)) around.insert(res.network().nodes()[res.network().other_end(b, j)].name);
    EXPECT_EQ(around, (std::set<std::string>{"Qom", "Isfahan", "Kerman"}));
    EXPECT_EQ(res.network().nodes().size(), 10u);
    EXPECT_EQ(res.trains().size(), in.trains.size());
    for (const auto& t : res.trains()) EXPECT_NO_THROW(railsched::validate_train(t, res.network(), res.instance.grid));
}

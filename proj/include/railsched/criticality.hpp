#pragma once

// Node importance ranking and network aggregation around important nodes.

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "railsched/core.hpp"

namespace railsched::criticality {

struct Weights {
    double alpha1 = 0.6;  // exponent on the normalized degree
    double alpha2 = 0.4;  // exponent on the normalized demand

    void validate() const {
        if (!(alpha1 > 0.0 && alpha1 < 1.0) || !(alpha2 > 0.0 && alpha2 < 1.0))
            throw Error("importance weights must lie in (0, 1)");
        if (std::abs(alpha1 + alpha2 - 1.0) > 1e-9) throw Error("importance weights must sum to one");
    }
};

struct CriticalityRecord {
    std::string node;
    std::string name;
    int degree = 0;
    double demand = 0.0;
    double degree_norm = 0.0;
    double demand_norm = 0.0;
    double index = 0.0;
};

inline double normalized_degree(int d, int d_min, int d_max) {
    if (d_max == d_min) throw Error("degenerate degree range");
    if (d < d_min || d > d_max) throw Error("degree outside [d_min, d_max]");
    double span = static_cast<double>(d_max - d_min);
    // The minimum-degree node gets half a unit so the product stays positive.
    if (d == d_min) return 0.5 / span;
    return static_cast<double>(d - d_min) / span;
}

inline double normalized_demand(double p, double p_min, double p_max) {
    if (p_max == p_min) throw Error("degenerate demand range");
    if (p < p_min || p > p_max) throw Error("demand outside [p_min, p_max]");
    return (p - 0.8 * p_min) / (p_max - p_min);
}

inline double criticality_index(double degree_norm, double demand_norm, const Weights& w) {
    w.validate();
    if (degree_norm <= 0.0 || demand_norm <= 0.0) throw Error("normalized measures must be positive");
    return std::pow(degree_norm, w.alpha1) * std::pow(demand_norm, w.alpha2) * 100.0;
}

/// One record per non-dummy node, most important first. Ties fall back to
/// higher demand, then ascending node id.
inline std::vector<CriticalityRecord> rank_nodes(const RailNetwork& net, const Weights& w) {
    w.validate();
    std::vector<CriticalityRecord> out;
    int d_min = 0, d_max = 0;
    double p_min = 0.0, p_max = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < net.nodes().size(); ++i) {
        const auto& n = net.nodes()[i];
        if (n.is_dummy) continue;
        int d = net.degree(i);
        if (first) {
            d_min = d_max = d;
            p_min = p_max = n.monthly_demand;
            first = false;
        } else {
            d_min = std::min(d_min, d);
            d_max = std::max(d_max, d);
            p_min = std::min(p_min, n.monthly_demand);
            p_max = std::max(p_max, n.monthly_demand);
        }
        CriticalityRecord r;
        r.node = n.id;
        r.name = n.name;
        r.degree = d;
        r.demand = n.monthly_demand;
        out.push_back(std::move(r));
    }
    for (auto& r : out) {
        r.degree_norm = normalized_degree(r.degree, d_min, d_max);
        r.demand_norm = normalized_demand(r.demand, p_min, p_max);
        r.index = criticality_index(r.degree_norm, r.demand_norm, w);
    }
    std::sort(out.begin(), out.end(), [](const CriticalityRecord& a, const CriticalityRecord& b) {
        if (a.index != b.index) return a.index > b.index;
        if (a.demand != b.demand) return a.demand > b.demand;
        return a.node < b.node;
    });
    return out;
}

inline std::set<std::string> top_nodes(const std::vector<CriticalityRecord>& ranked, std::size_t n) {
    std::set<std::string> keep;
    for (std::size_t i = 0; i < ranked.size() && i < n; ++i) keep.insert(ranked[i].node);
    return keep;
}

// ---------------------------------------------------------------------------
// Aggregation

struct Segment {
    enum class Kind { block, dwell } kind = Kind::block;
    std::string id;  // original block id, or the absorbed node id
    Minute travel_time = 0;
};

struct AggregateOptions {
    Minute dummy_dwell = 10;
    // Capacity of contracted blocks; the minimum over contracted segments when unset.
    std::optional<int> block_capacity;
};

struct AggregationResult {
    Instance instance;
    std::vector<std::string> kept_nodes;
    std::vector<std::string> dummy_nodes;
    std::vector<std::string> dropped_trains;
    std::map<std::string, std::vector<Segment>> block_provenance;

    const RailNetwork& network() const noexcept { return instance.network; }
    const std::vector<TrainService>& trains() const noexcept { return instance.trains; }
};

namespace detail {

struct Path {
    std::size_t a = 0, b = 0;            // anchor endpoints in walk order
    std::vector<std::size_t> blocks;     // original blocks from a to b
    std::vector<std::size_t> interior;   // removed nodes between them
};

}  // namespace detail

/// Contract the network onto `keep`. Removed nodes where kept trains diverge
/// or merge come back as dummy junctions with `opt.dummy_dwell` minutes of dwell.
inline AggregationResult aggregate(const Instance& in, const std::set<std::string>& keep_ids,
                                   const AggregateOptions& opt = {}) {
    const auto& net = in.network;
    const std::size_t n_nodes = net.nodes().size();
    std::vector<bool> kept(n_nodes, false);
    for (const auto& id : keep_ids) kept[net.node_at(id)] = true;

    AggregationResult res;
    std::vector<const TrainService*> retained;
    for (const auto& t : in.trains) {
        if (kept[net.node_at(t.origin)] && kept[net.node_at(t.destination)]) retained.push_back(&t);
        else res.dropped_trains.push_back(t.id);
    }

    // Junctions where retained routes split: three or more incident blocks in use.
    std::vector<std::set<std::size_t>> used(n_nodes);
    for (const auto* t : retained) {
        auto legs = legs_of(*t, net);
        for (std::size_t i = 0; i + 1 < legs.size(); ++i) {
            auto v = legs[i].to;
            used[v].insert(legs[i].block);
            used[v].insert(legs[i + 1].block);
        }
    }
    std::vector<bool> anchor = kept;
    std::vector<bool> dummy(n_nodes, false);
    for (std::size_t v = 0; v < n_nodes; ++v) {
        if (!kept[v] && used[v].size() >= 3) {
            anchor[v] = true;
            dummy[v] = true;
        }
    }

    std::map<std::pair<std::size_t, std::size_t>, detail::Path> paths;
    auto add_path = [&](detail::Path p, bool from_train) {
        auto key = std::minmax(p.a, p.b);
        auto it = paths.find(key);
        if (it == paths.end()) {
            paths.emplace(key, std::move(p));
            return;
        }
        auto same = it->second.blocks;
        if (it->second.a != p.a) std::reverse(same.begin(), same.end());
        if (same != p.blocks && from_train)
            throw Error("route leaves the kept subgraph: two distinct paths join " + net.nodes()[p.a].id + " and " +
                        net.nodes()[p.b].id);
    };

    // Segments of retained routes between consecutive anchors.
    for (const auto* t : retained) {
        auto legs = legs_of(*t, net);
        detail::Path cur;
        cur.a = legs.front().from;
        for (const auto& l : legs) {
            cur.blocks.push_back(l.block);
            if (anchor[l.to]) {
                cur.b = l.to;
                add_path(cur, true);
                cur = {};
                cur.a = l.to;
            } else {
                cur.interior.push_back(l.to);
            }
        }
    }
    // Structural chains through removed degree-2 nodes.
    for (std::size_t a = 0; a < n_nodes; ++a) {
        if (!anchor[a]) continue;
        for (auto b0 : net.incident(a)) {
            detail::Path p;
            p.a = a;
            p.blocks.push_back(b0);
            std::size_t prev_block = b0;
            std::size_t cur = net.other_end(b0, a);
            bool ok = true;
            while (!anchor[cur]) {
                if (net.degree(static_cast<std::size_t>(cur)) != 2) {
                    ok = false;
                    break;
                }
                p.interior.push_back(cur);
                auto& inc = net.incident(cur);
                std::size_t nb = inc[0] == prev_block ? inc[1] : inc[0];
                p.blocks.push_back(nb);
                prev_block = nb;
                cur = net.other_end(nb, cur);
                if (cur == a) {
                    ok = false;
                    break;
                }
            }
            if (!ok || cur == a) continue;
            p.b = cur;
            add_path(std::move(p), false);
        }
    }

    // Emit blocks in the order of their first original block.
    std::vector<const detail::Path*> ordered;
    for (const auto& [key, p] : paths) ordered.push_back(&p);
    std::sort(ordered.begin(), ordered.end(), [](const detail::Path* x, const detail::Path* y) {
        return *std::min_element(x->blocks.begin(), x->blocks.end()) <
               *std::min_element(y->blocks.begin(), y->blocks.end());
    });

    std::vector<Block> blocks;
    std::map<std::pair<std::size_t, std::size_t>, std::string> block_of_pair;
    for (const auto* p : ordered) {
        Block nb;
        std::vector<Segment> prov;
        if (p->blocks.size() == 1) {
            nb = net.blocks()[p->blocks.front()];
            prov.push_back({Segment::Kind::block, nb.id, nb.travel_time});
        } else {
            nb.from = net.nodes()[p->a].id;
            nb.to = net.nodes()[p->b].id;
            nb.tracks = 2;
            nb.travel_time = 0;
            nb.headway = 0;
            int cap = std::numeric_limits<int>::max();
            for (std::size_t i = 0; i < p->blocks.size(); ++i) {
                const auto& ob = net.blocks()[p->blocks[i]];
                nb.id += (i ? "+" : "") + ob.id;
                nb.travel_time += ob.travel_time;
                nb.tracks = std::min(nb.tracks, ob.tracks);
                nb.headway = std::max(nb.headway, ob.headway);
                cap = std::min(cap, ob.capacity);
                prov.push_back({Segment::Kind::block, ob.id, ob.travel_time});
                if (i < p->interior.size()) {
                    const auto& rn = net.nodes()[p->interior[i]];
                    nb.travel_time += rn.dwell_min;
                    if (rn.dwell_min > 0) prov.push_back({Segment::Kind::dwell, rn.id, rn.dwell_min});
                }
            }
            nb.capacity = opt.block_capacity.value_or(cap);
        }
        block_of_pair[std::minmax(p->a, p->b)] = nb.id;
        res.block_provenance[nb.id] = std::move(prov);
        blocks.push_back(std::move(nb));
    }

    std::vector<Node> nodes;
    for (std::size_t v = 0; v < n_nodes; ++v) {
        if (!anchor[v]) continue;
        Node n = net.nodes()[v];
        if (dummy[v]) {
            n.is_dummy = true;
            n.dwell_min = opt.dummy_dwell;
            res.dummy_nodes.push_back(n.id);
        } else {
            res.kept_nodes.push_back(n.id);
        }
        nodes.push_back(std::move(n));
    }

    res.instance.grid = in.grid;
    res.instance.network = RailNetwork(std::move(nodes), std::move(blocks));
    const auto& agg = res.instance.network;

    for (const auto* t : retained) {
        TrainService nt;
        nt.id = t->id;
        nt.direction = t->direction;
        nt.origin = t->origin;
        nt.destination = t->destination;
        nt.departure = t->departure;
        std::size_t last = 0;
        nt.stops.push_back(t->stops.front());
        for (std::size_t j = 1; j < t->stops.size(); ++j) {
            auto v = net.node_at(t->stops[j].node);
            if (!anchor[v]) continue;
            auto u = net.node_at(t->stops[last].node);
            const auto& bid = block_of_pair.at(std::minmax(u, v));
            const auto& blk = agg.block(bid);
            // Slack beyond the contracted travel time becomes extra dwell upstream.
            nt.stops.back().depart = t->stops[j].arrive - blk.travel_time;
            nt.route.push_back(bid);
            nt.stops.push_back(t->stops[j]);
            last = j;
        }
        nt.stops.back().depart = nt.stops.back().arrive;
        for (std::size_t j = 1; j + 1 < nt.stops.size(); ++j) {
            const auto& s = nt.stops[j];
            if (s.depart - s.arrive < agg.node(s.node).dwell_min)
                throw Error("projected stop is shorter than the dwell at " + s.node, nt.id);
        }
        res.instance.trains.push_back(std::move(nt));
    }
    validate_instance(res.instance);
    return res;
}

}  // namespace railsched::criticality

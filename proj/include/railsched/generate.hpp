#pragma once

// Seeded synthetic instances: a congested corridor for sensitivity sweeps
// and tiny random networks sized for the exhaustive solver.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "railsched/core.hpp"
#include "railsched/validate.hpp"

namespace railsched::generate {

struct CorridorOptions {
    std::uint64_t seed = 1;
    int stations = 9;
    int trains = 20;
    Minute delta = 5;
    Minute horizon = 900;
    Minute headway = 5;
    // The initial timetable stays conflict-free up to this headway, so
    // headway sweeps never start from an infeasible plan.
    Minute separation = 20;
    Minute last_departure = 420;
    int capacity = 8;
};

namespace detail {

struct Use {
    std::size_t block;
    bool forward;
    Minute entry, exit;
};

inline bool compatible(const Use& a, const Use& b, const Block& blk, Minute sep) {
    if (a.block != b.block) return true;
    if (a.forward == b.forward) return std::abs(a.entry - b.entry) >= sep && std::abs(a.exit - b.exit) >= sep;
    if (blk.is_double()) return true;
    return a.exit + sep <= b.entry || b.exit + sep <= a.entry;
}

inline TrainService make_train(const std::string& id, const RailNetwork& net, const std::vector<std::size_t>& path,
                               Minute departure) {
    TrainService t;
    t.id = id;
    t.origin = net.nodes()[path.front()].id;
    t.destination = net.nodes()[path.back()].id;
    t.direction = path.front() < path.back() ? Direction::positive : Direction::negative;
    t.departure = departure;
    Minute at = departure;
    for (std::size_t i = 0; i < path.size(); ++i) {
        t.stops.push_back({net.nodes()[path[i]].id, at, at});
        if (i + 1 < path.size()) {
            auto b = *net.block_between(path[i], path[i + 1]);
            t.route.push_back(net.blocks()[b].id);
            at += net.blocks()[b].travel_time;
        }
    }
    return t;
}

inline std::vector<Use> uses_of(const TrainService& t, const RailNetwork& net) {
    std::vector<Use> out;
    for (const auto& l : legs_of(t, net)) out.push_back({l.block, l.forward, l.entry, l.exit});
    return out;
}

}  // namespace detail

/// A line of stations with bidirectional traffic packed as tightly as the
/// separation allows.
inline Instance corridor(const CorridorOptions& opt = {}) {
    if (opt.stations < 3) throw Error("corridor needs at least three stations");
    std::mt19937_64 rng(opt.seed);
    std::vector<Node> nodes;
    for (int i = 1; i <= opt.stations; ++i)
        nodes.push_back({"S" + std::to_string(i), "Station " + std::to_string(i), 0, 0.0, false, std::nullopt});
    std::vector<Block> blocks;
    std::uniform_int_distribution<int> len(2, 4);
    for (int i = 1; i < opt.stations; ++i) {
        Block b;
        b.from = "S" + std::to_string(i);
        b.to = "S" + std::to_string(i + 1);
        b.id = b.from + "-" + b.to;
        b.tracks = i % 3 == 0 ? 1 : 2;
        b.travel_time = opt.delta * len(rng);
        b.headway = opt.headway;
        b.capacity = opt.capacity;
        blocks.push_back(b);
    }
    Instance inst;
    inst.grid = TimeGrid(opt.delta, opt.horizon, 0);
    inst.network = RailNetwork(std::move(nodes), std::move(blocks));
    const auto& net = inst.network;

    std::vector<detail::Use> placed;
    std::uniform_int_distribution<int> station(0, opt.stations - 1);
    std::uniform_int_distribution<int> slot(0, static_cast<int>(opt.last_departure / opt.delta));
    int made = 0, attempts = 0;
    while (made < opt.trains) {
        if (++attempts > opt.trains * 200) throw Error("corridor: cannot place the requested trains");
        int a = station(rng), b = station(rng);
        if (std::abs(a - b) < 3) continue;
        std::vector<std::size_t> path;
        for (int s = a; s != b; s += a < b ? 1 : -1) path.push_back(static_cast<std::size_t>(s));
        path.push_back(static_cast<std::size_t>(b));
        for (Minute dep = slot(rng) * opt.delta; dep <= opt.last_departure; dep += opt.delta) {
            auto t = detail::make_train(std::to_string(made + 1), net, path, dep);
            if (t.stops.back().arrive > opt.horizon) break;
            auto mine = detail::uses_of(t, net);
            bool ok = std::all_of(mine.begin(), mine.end(), [&](const detail::Use& u) {
                return std::all_of(placed.begin(), placed.end(), [&](const detail::Use& v) {
                    return detail::compatible(u, v, net.blocks()[u.block], opt.separation);
                });
            });
            if (!ok) continue;
            placed.insert(placed.end(), mine.begin(), mine.end());
            inst.trains.push_back(std::move(t));
            ++made;
            break;
        }
    }
    std::sort(inst.trains.begin(), inst.trains.end(),
              [](const TrainService& x, const TrainService& y) { return x.departure < y.departure; });
    for (std::size_t i = 0; i < inst.trains.size(); ++i) inst.trains[i].id = std::to_string(i + 1);
    validate_instance(inst);
    return inst;
}

/// Block with the most initial traversals, ties to the lower index.
inline std::size_t busiest_block(const Instance& inst) {
    std::vector<int> count(inst.network.blocks().size(), 0);
    for (const auto& t : inst.trains)
        for (const auto& l : legs_of(t, inst.network)) ++count[l.block];
    return static_cast<std::size_t>(std::max_element(count.begin(), count.end()) - count.begin());
}

/// Grid-aligned minute at which `block` carries the most trains at once,
/// at least `margin` minutes inside the horizon.
inline Minute busiest_time(const Instance& inst, std::size_t block, Minute margin = 0) {
    const auto& g = inst.grid;
    std::vector<int> load(g.intervals(), 0);
    for (const auto& t : inst.trains)
        for (const auto& l : legs_of(t, inst.network))
            if (l.block == block)
                for (int u = g.to_interval(l.entry); u < g.to_interval(l.exit); ++u) ++load[u];
    int lo = static_cast<int>((margin + g.delta() - 1) / g.delta());
    int hi = g.intervals() - lo;
    if (lo >= hi) throw Error("margin leaves no room inside the horizon");
    auto it = std::max_element(load.begin() + lo, load.begin() + hi);
    return g.to_minute(static_cast<int>(it - load.begin()));
}

/// Full closure of `block` for `duration` minutes centred on `center`, clipped to the horizon start.
inline DisruptionScenario centred_closure(const Instance& inst, const std::string& block, Minute center,
                                          Minute duration) {
    const auto& g = inst.grid;
    Minute start = center - duration / 2;
    start -= (start - g.start()) % g.delta();
    start = std::max(start, g.start());
    Closure c;
    c.block = block;
    c.start = start;
    c.duration = duration;
    c.tracks_closed = inst.network.block(block).tracks;
    DisruptionScenario s;
    s.closures.push_back(c);
    validate_scenario(s, inst.network, g);
    return s;
}

struct TinyCase {
    Instance instance;
    DisruptionScenario scenario;
    Minute beta = 0;
};

/// A random instance within the exhaustive solver's caps: at most three
/// trains, five blocks and sixteen intervals.
inline TinyCase tiny(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const Minute delta = 5;
    for (;;) {
        int n_nodes = pick(3, 5);
        std::vector<Node> nodes;
        for (int i = 0; i < n_nodes; ++i)
            nodes.push_back({std::string(1, static_cast<char>('A' + i)), "", pick(0, 2) == 0 ? delta : 0, 0.0, false,
                             std::nullopt});
        std::vector<Block> blocks;
        auto add = [&](int a, int b) {
            Block bl;
            bl.from = nodes[a].id;
            bl.to = nodes[b].id;
            bl.id = bl.from + bl.to;
            bl.tracks = pick(1, 2);
            bl.travel_time = delta * pick(1, 2);
            bl.headway = delta * pick(0, 1);
            bl.capacity = pick(1, 2);
            blocks.push_back(bl);
        };
        for (int i = 1; i < n_nodes; ++i) add(pick(0, i - 1), i);
        if (n_nodes >= 3 && static_cast<int>(blocks.size()) < 5 && pick(0, 1)) {
            int a = pick(0, n_nodes - 1), b = pick(0, n_nodes - 1);
            bool dup = a == b;
            for (const auto& bl : blocks)
                if ((bl.from == nodes[a].id && bl.to == nodes[b].id) || (bl.from == nodes[b].id && bl.to == nodes[a].id))
                    dup = true;
            if (!dup) add(std::min(a, b), std::max(a, b));
        }
        Instance inst;
        inst.grid = TimeGrid(delta, delta * 16, 0);
        for (auto& n : nodes) n.name = "Node " + n.id;
        inst.network = RailNetwork(nodes, blocks);
        const auto& net = inst.network;

        // Simple paths by random walk without revisits.
        int n_trains = pick(1, 3);
        bool ok = true;
        for (int k = 0; k < n_trains && ok; ++k) {
            std::vector<std::size_t> path{static_cast<std::size_t>(pick(0, n_nodes - 1))};
            int hops = pick(1, 3);
            for (int h = 0; h < hops; ++h) {
                std::vector<std::size_t> next;
                for (auto b : net.incident(path.back())) {
                    auto o = net.other_end(b, path.back());
                    if (std::find(path.begin(), path.end(), o) == path.end()) next.push_back(o);
                }
                if (next.empty()) break;
                path.push_back(next[pick(0, static_cast<int>(next.size()) - 1)]);
            }
            if (path.size() < 2) {
                ok = false;
                break;
            }
            TrainService t;
            t.id = std::to_string(k + 1);
            t.origin = net.nodes()[path.front()].id;
            t.destination = net.nodes()[path.back()].id;
            t.direction = path.front() < path.back() ? Direction::positive : Direction::negative;
            t.departure = delta * pick(0, 4);
            Minute at = t.departure;
            for (std::size_t i = 0; i < path.size(); ++i) {
                Minute dwell = (i > 0 && i + 1 < path.size()) ? net.nodes()[path[i]].dwell_min : 0;
                t.stops.push_back({net.nodes()[path[i]].id, at, at + dwell});
                at += dwell;
                if (i + 1 < path.size()) {
                    auto b = *net.block_between(path[i], path[i + 1]);
                    t.route.push_back(net.blocks()[b].id);
                    at += net.blocks()[b].travel_time;
                }
            }
            if (at > inst.grid.horizon() - delta * 4) ok = false;
            inst.trains.push_back(std::move(t));
        }
        if (!ok) continue;
        try {
            validate_instance(inst);
        } catch (const Error&) {
            continue;
        }
        // The initial plan must be conflict-free before any closure.
        model::ModelConfig cfg;
        if (!validate::check(schedule_from_timetable(inst), inst, {}, cfg).empty()) continue;

        TinyCase tc;
        tc.instance = std::move(inst);
        tc.beta = delta * pick(0, 3);
        if (pick(0, 4) > 0) {
            const auto& bl = tc.instance.network.blocks()[pick(0, static_cast<int>(tc.instance.network.blocks().size()) - 1)];
            Closure c;
            c.block = bl.id;
            c.start = delta * pick(0, 6);
            c.duration = delta * pick(1, 4);
            c.tracks_closed = pick(1, bl.tracks);
            if (bl.tracks == 2 && c.tracks_closed == 1 && pick(0, 1)) c.forward_track = pick(0, 1) == 1;
            tc.scenario.closures.push_back(c);
        }
        return tc;
    }
}

}  // namespace railsched::generate

#pragma once

// Domain model, time discretization and instance I/O.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace railsched {

using Minute = std::int64_t;
using json = nlohmann::json;

/// Raised for malformed instances, scenarios and configurations. `entity`
/// names the offending node, block, train or closure.
class Error : public std::runtime_error {
public:
    Error(const std::string& what, std::string entity = {})
        : std::runtime_error(entity.empty() ? what : what + " [" + entity + "]"),
          entity_(std::move(entity)) {}

    const std::string& entity() const noexcept { return entity_; }

private:
    std::string entity_;
};

/// Uniform discretization of the horizon [start, start + horizon].
class TimeGrid {
public:
    TimeGrid() = default;
    TimeGrid(Minute delta, Minute horizon, Minute start) : delta_(delta), horizon_(horizon), start_(start) {
        if (delta <= 0) throw Error("grid delta must be positive");
        if (horizon <= 0) throw Error("grid horizon must be positive");
        if (horizon % delta != 0) throw Error("grid horizon is not a multiple of delta");
    }

    Minute delta() const noexcept { return delta_; }
    Minute horizon() const noexcept { return horizon_; }
    Minute start() const noexcept { return start_; }
    Minute end() const noexcept { return start_ + horizon_; }
    int intervals() const noexcept { return static_cast<int>(horizon_ / delta_); }

    bool aligned(Minute m) const noexcept {
        Minute off = m - start_;
        return ((off % delta_) + delta_) % delta_ == 0;
    }
    bool contains(Minute m) const noexcept { return m >= start_ && m <= end(); }

    int to_interval(Minute m) const {
        if (!contains(m)) throw Error("minute " + std::to_string(m) + " is outside the horizon");
        if (!aligned(m)) throw Error("minute " + std::to_string(m) + " is off the grid");
        return static_cast<int>((m - start_) / delta_);
    }
    Minute to_minute(int interval) const noexcept { return start_ + static_cast<Minute>(interval) * delta_; }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    Minute delta_ = 1;
    Minute horizon_ = 1;
    Minute start_ = 0;
};

struct Node {
    std::string id;
    std::string name;
    Minute dwell_min = 0;
    double monthly_demand = 0.0;
    bool is_dummy = false;
    // Only consulted by the per-node capacity mode.
    std::optional<int> capacity;

    friend bool operator==(const Node&, const Node&) = default;
};

/// Undirected track segment. `from`/`to` only fix an orientation used to
/// name the two traversal directions and the per-direction track.
struct Block {
    std::string id;
    std::string from;
    std::string to;
    int tracks = 1;
    Minute travel_time = 0;
    Minute headway = 0;
    int capacity = 1;

    bool is_double() const noexcept { return tracks == 2; }
    friend bool operator==(const Block&, const Block&) = default;
};

class RailNetwork {
public:
    RailNetwork() = default;
    RailNetwork(std::vector<Node> nodes, std::vector<Block> blocks)
        : nodes_(std::move(nodes)), blocks_(std::move(blocks)) {
        index();
    }

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }

    std::optional<std::size_t> find_node(const std::string& id) const {
        auto it = node_index_.find(id);
        if (it == node_index_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<std::size_t> find_block(const std::string& id) const {
        auto it = block_index_.find(id);
        if (it == block_index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t node_at(const std::string& id) const {
        auto i = find_node(id);
        if (!i) throw Error("unknown node", id);
        return *i;
    }
    std::size_t block_at(const std::string& id) const {
        auto i = find_block(id);
        if (!i) throw Error("unknown block", id);
        return *i;
    }
    const Node& node(const std::string& id) const { return nodes_[node_at(id)]; }
    const Block& block(const std::string& id) const { return blocks_[block_at(id)]; }

    std::optional<std::size_t> block_between(std::size_t a, std::size_t b) const {
        auto it = pair_index_.find(std::minmax(a, b));
        if (it == pair_index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t block_from(std::size_t b) const { return endpoints_[b].first; }
    std::size_t block_to(std::size_t b) const { return endpoints_[b].second; }
    std::size_t other_end(std::size_t b, std::size_t n) const {
        return endpoints_[b].first == n ? endpoints_[b].second : endpoints_[b].first;
    }
    const std::vector<std::size_t>& incident(std::size_t n) const { return incident_[n]; }
    int degree(std::size_t n) const { return static_cast<int>(incident_[n].size()); }

    bool connected() const {
        if (nodes_.empty()) return true;
        std::vector<bool> seen(nodes_.size(), false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t count = 1;
        while (!stack.empty()) {
            auto n = stack.back();
            stack.pop_back();
            for (auto b : incident_[n]) {
                auto m = other_end(b, n);
                if (!seen[m]) {
                    seen[m] = true;
                    ++count;
                    stack.push_back(m);
                }
            }
        }
        return count == nodes_.size();
    }

    friend bool operator==(const RailNetwork& a, const RailNetwork& b) {
        return a.nodes_ == b.nodes_ && a.blocks_ == b.blocks_;
    }

private:
    void index() {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const auto& n = nodes_[i];
            if (n.id.empty()) throw Error("node without id");
            if (!node_index_.emplace(n.id, i).second) throw Error("duplicate node id", n.id);
            if (n.dwell_min < 0) throw Error("negative dwell", n.id);
            if (n.monthly_demand < 0) throw Error("negative demand", n.id);
            if (n.capacity && *n.capacity < 1) throw Error("node capacity must be at least 1", n.id);
        }
        incident_.assign(nodes_.size(), {});
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            const auto& b = blocks_[i];
            if (b.id.empty()) throw Error("block without id");
            if (!block_index_.emplace(b.id, i).second) throw Error("duplicate block id", b.id);
            auto f = find_node(b.from);
            auto t = find_node(b.to);
            if (!f || !t) throw Error("block endpoint is not a network node", b.id);
            if (*f == *t) throw Error("block endpoints must be distinct", b.id);
            if (b.tracks != 1 && b.tracks != 2) throw Error("block tracks must be 1 or 2", b.id);
            if (b.travel_time <= 0) throw Error("block travel time must be positive", b.id);
            if (b.headway < 0) throw Error("block headway must be non-negative", b.id);
            if (b.capacity < 1) throw Error("block capacity must be at least 1", b.id);
            if (!pair_index_.emplace(std::minmax(*f, *t), i).second)
                throw Error("more than one block between the same node pair", b.id);
            endpoints_.emplace_back(*f, *t);
            incident_[*f].push_back(i);
            incident_[*t].push_back(i);
        }
    }

    std::vector<Node> nodes_;
    std::vector<Block> blocks_;
    std::map<std::string, std::size_t> node_index_;
    std::map<std::string, std::size_t> block_index_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_index_;
    std::vector<std::pair<std::size_t, std::size_t>> endpoints_;
    std::vector<std::vector<std::size_t>> incident_;
};

enum class Direction { positive, negative };

struct Stop {
    std::string node;
    Minute arrive = 0;
    Minute depart = 0;
    friend bool operator==(const Stop&, const Stop&) = default;
};

/// One train of the initial timetable. `stops` lists every node of the route
/// in travel order, origin first; `departure` is the pinned origin arrival.
struct TrainService {
    std::string id;
    Direction direction = Direction::positive;
    std::string origin;
    std::string destination;
    std::vector<std::string> route;
    std::vector<Stop> stops;
    Minute departure = 0;

    Minute arrival() const { return stops.empty() ? departure : stops.back().arrive; }
    Minute travel() const { return arrival() - departure; }
    friend bool operator==(const TrainService&, const TrainService&) = default;
};

/// A block traversal of a train, resolved against the network.
struct Leg {
    std::size_t block = 0;
    std::size_t from = 0;
    std::size_t to = 0;
    bool forward = true;  // traverses block.from -> block.to
    Minute entry = 0;
    Minute exit = 0;
};

inline std::vector<Leg> legs_of(const TrainService& t, const RailNetwork& net) {
    std::vector<Leg> legs;
    legs.reserve(t.route.size());
    for (std::size_t i = 0; i < t.route.size(); ++i) {
        Leg l;
        l.block = net.block_at(t.route[i]);
        l.from = net.node_at(t.stops[i].node);
        l.to = net.node_at(t.stops[i + 1].node);
        l.forward = net.block_from(l.block) == l.from;
        l.entry = t.stops[i].depart;
        l.exit = t.stops[i + 1].arrive;
        legs.push_back(l);
    }
    return legs;
}

struct Closure {
    std::string block;
    Minute start = 0;
    Minute duration = 0;
    int tracks_closed = 0;
    // For a partial closure of a double block: which traversal direction's
    // track is out ("forward" = from -> to). Absent means unspecified.
    std::optional<bool> forward_track;

    Minute end() const noexcept { return start + duration; }
    friend bool operator==(const Closure&, const Closure&) = default;
};

struct DisruptionScenario {
    std::vector<Closure> closures;

    bool empty() const noexcept { return closures.empty(); }
    std::optional<Minute> start() const {
        if (closures.empty()) return std::nullopt;
        Minute s = closures.front().start;
        for (const auto& c : closures) s = std::min(s, c.start);
        return s;
    }
    friend bool operator==(const DisruptionScenario&, const DisruptionScenario&) = default;
};

struct Instance {
    TimeGrid grid;
    RailNetwork network;
    std::vector<TrainService> trains;
    std::vector<std::string> warnings;

    const TrainService& train(const std::string& id) const {
        for (const auto& t : trains)
            if (t.id == id) return t;
        throw Error("unknown train", id);
    }
};

inline Minute baseline_objective(const std::vector<TrainService>& trains) {
    Minute total = 0;
    for (const auto& t : trains) total += t.travel();
    return total;
}

inline int to_interval(Minute m, const TimeGrid& grid) { return grid.to_interval(m); }

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline void require_grid(const TimeGrid& g, Minute m, const std::string& entity) {
    if (!g.aligned(m)) throw Error("off-grid time " + std::to_string(m), entity);
    if (!g.contains(m)) throw Error("time " + std::to_string(m) + " outside the horizon", entity);
}

}  // namespace detail

inline void validate_train(const TrainService& t, const RailNetwork& net, const TimeGrid& grid) {
    const auto& id = t.id;
    if (id.empty()) throw Error("train without id");
    auto o = net.find_node(t.origin);
    auto d = net.find_node(t.destination);
    if (!o || !d) throw Error("train origin or destination is not a network node", id);
    if (*o == *d) throw Error("train origin equals destination", id);
    if (t.route.empty()) throw Error("train route is empty", id);
    if (t.stops.size() != t.route.size() + 1) throw Error("stops must list every route node", id);
    if (t.stops.front().node != t.origin || t.stops.back().node != t.destination)
        throw Error("stops must start at the origin and end at the destination", id);

    std::set<std::size_t> visited;
    for (std::size_t i = 0; i < t.route.size(); ++i) {
        auto b = net.find_block(t.route[i]);
        if (!b) throw Error("route references unknown block " + t.route[i], id);
        auto from = net.find_node(t.stops[i].node);
        auto to = net.find_node(t.stops[i + 1].node);
        if (!from || !to) throw Error("stop references unknown node", id);
        if (net.block_between(*from, *to) != b) throw Error("route is not a path: block " + t.route[i], id);
        if (!visited.insert(*from).second) throw Error("route is not a simple path", id);
    }
    if (!visited.insert(*d).second) throw Error("route is not a simple path", id);

    if (t.stops.front().arrive != t.departure) throw Error("origin arrival must equal the departure time", id);
    for (std::size_t i = 0; i < t.stops.size(); ++i) {
        const auto& s = t.stops[i];
        detail::require_grid(grid, s.arrive, id);
        detail::require_grid(grid, s.depart, id);
        if (s.depart < s.arrive) throw Error("departure before arrival at " + s.node, id);
        if (i + 1 == t.stops.size() && s.depart != s.arrive)
            throw Error("destination departure must equal arrival", id);
        if (i > 0 && i + 1 < t.stops.size() && s.depart - s.arrive < net.node(s.node).dwell_min)
            throw Error("dwell below minimum at " + s.node, id);
    }
    for (std::size_t i = 0; i < t.route.size(); ++i) {
        const auto& blk = net.block(t.route[i]);
        if (t.stops[i + 1].arrive - t.stops[i].depart != blk.travel_time)
            throw Error("travel-time mismatch on block " + blk.id, id);
    }
}

inline void validate_instance(Instance& inst) {
    const auto& g = inst.grid;
    for (const auto& b : inst.network.blocks()) {
        if (b.travel_time % g.delta() != 0) throw Error("block travel time is not a multiple of delta", b.id);
        if (b.headway % g.delta() != 0) throw Error("block headway is not a multiple of delta", b.id);
    }
    std::set<std::string> ids;
    for (const auto& t : inst.trains) {
        if (!ids.insert(t.id).second) throw Error("duplicate train id", t.id);
        validate_train(t, inst.network, g);
    }
    if (!inst.network.connected()) inst.warnings.push_back("network is not connected");
}

inline void validate_scenario(const DisruptionScenario& s, const RailNetwork& net, const TimeGrid& grid) {
    std::map<std::string, std::vector<std::pair<Minute, Minute>>> windows;
    for (const auto& c : s.closures) {
        auto b = net.find_block(c.block);
        if (!b) throw Error("closure references unknown block", c.block);
        const auto& blk = net.blocks()[*b];
        if (c.duration <= 0) throw Error("closure duration must be positive", c.block);
        if (c.tracks_closed < 1 || c.tracks_closed > blk.tracks)
            throw Error("tracks_closed exceeds block tracks", c.block);
        if (!grid.aligned(c.start) || !grid.aligned(c.end())) throw Error("closure window is off the grid", c.block);
        if (c.start < grid.start() || c.end() > grid.end()) throw Error("closure window outside the horizon", c.block);
        for (auto [s0, e0] : windows[c.block])
            if (c.start < e0 && s0 < c.end()) throw Error("overlapping closures on one block", c.block);
        windows[c.block].emplace_back(c.start, c.end());
    }
}

// ---------------------------------------------------------------------------
// JSON

inline std::string direction_name(Direction d) { return d == Direction::positive ? "positive" : "negative"; }

inline Direction parse_direction(const std::string& s, const std::string& entity) {
    if (s == "positive" || s == "+") return Direction::positive;
    if (s == "negative" || s == "-") return Direction::negative;
    throw Error("direction must be positive or negative", entity);
}

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    return it->get<T>();
}

inline const json& need(const json& j, const char* key, const std::string& entity) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(std::string("missing key '") + key + "'", entity);
    return *it;
}

inline std::string id_string(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw Error("identifier must be a string or integer");
}

}  // namespace detail

inline Instance load_instance(const json& doc) {
    try {
        if (!doc.is_object()) throw Error("instance document must be an object");
        const auto& gj = detail::need(doc, "grid", "grid");
        Instance inst;
        inst.grid = TimeGrid(detail::need(gj, "delta", "grid").get<Minute>(), detail::need(gj, "horizon", "grid").get<Minute>(),
                             detail::get_or<Minute>(gj, "start", 0));

        std::vector<Node> nodes;
        for (const auto& nj : detail::need(doc, "nodes", "nodes")) {
            Node n;
            n.id = detail::id_string(detail::need(nj, "id", "node"));
            n.name = detail::get_or<std::string>(nj, "name", n.id);
            n.dwell_min = detail::get_or<Minute>(nj, "dwell_min", 0);
            n.monthly_demand = detail::get_or<double>(nj, "monthly_demand", 0.0);
            n.is_dummy = detail::get_or<bool>(nj, "is_dummy", false);
            if (nj.contains("capacity") && !nj["capacity"].is_null()) n.capacity = nj["capacity"].get<int>();
            nodes.push_back(std::move(n));
        }
        std::vector<Block> blocks;
        for (const auto& bj : detail::need(doc, "blocks", "blocks")) {
            Block b;
            b.id = detail::id_string(detail::need(bj, "id", "block"));
            b.from = detail::id_string(detail::need(bj, "from", b.id));
            b.to = detail::id_string(detail::need(bj, "to", b.id));
            b.tracks = detail::get_or<int>(bj, "tracks", 1);
            b.travel_time = detail::need(bj, "travel_time", b.id).get<Minute>();
            b.headway = detail::get_or<Minute>(bj, "headway", 0);
            b.capacity = detail::get_or<int>(bj, "capacity", 1);
            blocks.push_back(std::move(b));
        }
        inst.network = RailNetwork(std::move(nodes), std::move(blocks));

        if (doc.contains("trains")) {
            for (const auto& tj : doc["trains"]) {
                TrainService t;
                t.id = detail::id_string(detail::need(tj, "id", "train"));
                t.direction = parse_direction(detail::get_or<std::string>(tj, "direction", "positive"), t.id);
                t.origin = detail::id_string(detail::need(tj, "origin", t.id));
                t.destination = detail::id_string(detail::need(tj, "destination", t.id));
                for (const auto& r : detail::need(tj, "route", t.id)) t.route.push_back(detail::id_string(r));
                for (const auto& sj : detail::need(tj, "stops", t.id)) {
                    Stop s;
                    s.node = detail::id_string(detail::need(sj, "node", t.id));
                    s.arrive = detail::need(sj, "arrive", t.id).get<Minute>();
                    s.depart = detail::get_or<Minute>(sj, "depart", s.arrive);
                    t.stops.push_back(std::move(s));
                }
                t.departure = detail::need(tj, "departure", t.id).get<Minute>();
                inst.trains.push_back(std::move(t));
            }
        }
        validate_instance(inst);
        return inst;
    } catch (const json::exception& e) {
        throw Error(std::string("schema violation: ") + e.what());
    }
}

inline json to_json(const Instance& inst) {
    json doc;
    doc["grid"] = {{"delta", inst.grid.delta()}, {"horizon", inst.grid.horizon()}, {"start", inst.grid.start()}};
    doc["nodes"] = json::array();
    for (const auto& n : inst.network.nodes()) {
        json nj = {{"id", n.id}, {"name", n.name}, {"dwell_min", n.dwell_min}, {"monthly_demand", n.monthly_demand},
                   {"is_dummy", n.is_dummy}};
        if (n.capacity) nj["capacity"] = *n.capacity;
        doc["nodes"].push_back(std::move(nj));
    }
    doc["blocks"] = json::array();
    for (const auto& b : inst.network.blocks())
        doc["blocks"].push_back({{"id", b.id}, {"from", b.from}, {"to", b.to}, {"tracks", b.tracks},
                                 {"travel_time", b.travel_time}, {"headway", b.headway}, {"capacity", b.capacity}});
    doc["trains"] = json::array();
    for (const auto& t : inst.trains) {
        json stops = json::array();
        for (const auto& s : t.stops) stops.push_back({{"node", s.node}, {"arrive", s.arrive}, {"depart", s.depart}});
        doc["trains"].push_back({{"id", t.id}, {"direction", direction_name(t.direction)}, {"origin", t.origin},
                                 {"destination", t.destination}, {"route", t.route}, {"stops", std::move(stops)},
                                 {"departure", t.departure}});
    }
    return doc;
}

inline DisruptionScenario load_scenario(const json& doc) {
    try {
        DisruptionScenario s;
        if (!doc.is_object()) throw Error("scenario document must be an object");
        if (!doc.contains("closures")) return s;
        for (const auto& cj : doc["closures"]) {
            Closure c;
            c.block = detail::id_string(detail::need(cj, "block", "closure"));
            c.start = detail::need(cj, "start", c.block).get<Minute>();
            c.duration = detail::need(cj, "duration", c.block).get<Minute>();
            c.tracks_closed = detail::need(cj, "tracks_closed", c.block).get<int>();
            if (cj.contains("track") && !cj["track"].is_null()) {
                auto tr = cj["track"].get<std::string>();
                if (tr == "forward") c.forward_track = true;
                else if (tr == "backward") c.forward_track = false;
                else throw Error("closure track must be forward or backward", c.block);
            }
            s.closures.push_back(std::move(c));
        }
        return s;
    } catch (const json::exception& e) {
        throw Error(std::string("schema violation: ") + e.what());
    }
}

inline DisruptionScenario load_scenario(const json& doc, const Instance& inst) {
    auto s = load_scenario(doc);
    validate_scenario(s, inst.network, inst.grid);
    return s;
}

inline json to_json(const DisruptionScenario& s) {
    json doc;
    doc["closures"] = json::array();
    for (const auto& c : s.closures) {
        json cj = {{"block", c.block}, {"start", c.start}, {"duration", c.duration}, {"tracks_closed", c.tracks_closed}};
        if (c.forward_track) cj["track"] = *c.forward_track ? "forward" : "backward";
        doc["closures"].push_back(std::move(cj));
    }
    return doc;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    try {
        return json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw Error("cannot parse " + path + ": " + e.what());
    }
}

inline Instance load_instance_file(const std::string& path) { return load_instance(read_json_file(path)); }

inline DisruptionScenario load_scenario_file(const std::string& path, const Instance& inst) {
    return load_scenario(read_json_file(path), inst);
}

}  // namespace railsched

#pragma once

// Rescheduled plans as minute intervals, independent of any model encoding.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "railsched/core.hpp"

namespace railsched {

struct Occupation {
    enum class Kind { block, wait };
    std::string train;
    Kind kind = Kind::block;
    std::string where;  // block id or node id
    Minute entry = 0, exit = 0;
    bool forward = true;  // block traversal from `from` to `to`

    bool operator==(const Occupation& o) const {
        return train == o.train && kind == o.kind && where == o.where && entry == o.entry && exit == o.exit &&
               forward == o.forward;
    }
};

struct NodeTime {
    std::string train;
    std::string node;
    Minute arrive = 0, depart = 0;
    bool operator==(const NodeTime& o) const = default;
};

/// `first` entered `block` before `second`.
struct Priority {
    std::string first, second, block;
    bool operator==(const Priority& o) const = default;
};

enum class SolveStatus { optimal, infeasible, timeout };

inline std::string status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::timeout: return "timeout";
    }
    return "?";
}

inline SolveStatus parse_status(const std::string& s) {
    if (s == "optimal") return SolveStatus::optimal;
    if (s == "infeasible") return SolveStatus::infeasible;
    if (s == "timeout") return SolveStatus::timeout;
    throw Error("unknown status", s);
}

struct ScheduleSolution {
    SolveStatus status = SolveStatus::infeasible;
    bool has_schedule = false;
    std::vector<Occupation> occupations;
    std::vector<Priority> priorities;
    std::vector<NodeTime> node_times;
    Minute objective = 0;
    Minute total_delay = 0;
    std::optional<Minute> bound;  // proven lower bound when not optimal
    std::set<int> certificate;    // rule tags behind an infeasibility proof
    std::set<std::string> affected;
    std::uint64_t nodes_explored = 0;
    double wall_ms = 0;

    std::vector<Occupation> of_train(const std::string& id) const {
        std::vector<Occupation> out;
        for (const auto& o : occupations)
            if (o.train == id) out.push_back(o);
        return out;
    }

    std::optional<Minute> gap() const {
        if (status != SolveStatus::timeout || !has_schedule || !bound) return std::nullopt;
        return objective - *bound;
    }
};

/// The initial timetable written as a schedule.
inline ScheduleSolution schedule_from_timetable(const Instance& inst) {
    ScheduleSolution s;
    s.status = SolveStatus::optimal;
    s.has_schedule = true;
    for (const auto& t : inst.trains) {
        auto legs = legs_of(t, inst.network);
        for (std::size_t j = 0; j < t.stops.size(); ++j) {
            const auto& st = t.stops[j];
            const auto& nid = st.node;
            s.node_times.push_back({t.id, nid, st.arrive, st.depart});
            if (st.depart > st.arrive) s.occupations.push_back({t.id, Occupation::Kind::wait, nid, st.arrive, st.depart, true});
            if (j + 1 < t.stops.size()) {
                const auto& l = legs[j];
                s.occupations.push_back({t.id, Occupation::Kind::block, inst.network.blocks()[l.block].id, l.entry,
                                         l.exit, l.forward});
            }
        }
    }
    s.objective = baseline_objective(inst.trains);
    return s;
}

inline json to_json(const ScheduleSolution& s) {
    json j;
    j["status"] = status_name(s.status);
    j["objective"] = s.objective;
    j["total_delay"] = s.total_delay;
    if (s.bound) j["bound"] = *s.bound;
    if (auto g = s.gap()) j["gap"] = *g;
    j["certificate"] = s.certificate;
    j["affected"] = s.affected;
    j["nodes_explored"] = s.nodes_explored;
    j["occupations"] = json::array();
    if (s.has_schedule) {
        for (const auto& o : s.occupations)
            j["occupations"].push_back({{"train", o.train},
                                        {"kind", o.kind == Occupation::Kind::block ? "block" : "wait"},
                                        {"where", o.where},
                                        {"entry", o.entry},
                                        {"exit", o.exit},
                                        {"forward", o.forward}});
        j["priorities"] = json::array();
        for (const auto& p : s.priorities)
            j["priorities"].push_back({{"first", p.first}, {"second", p.second}, {"block", p.block}});
        j["node_times"] = json::array();
        for (const auto& n : s.node_times)
            j["node_times"].push_back({{"train", n.train}, {"node", n.node}, {"arrive", n.arrive}, {"depart", n.depart}});
    }
    return j;
}

inline ScheduleSolution load_schedule(const json& j) {
    auto id = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    try {
        ScheduleSolution s;
        s.status = parse_status(j.at("status").get<std::string>());
        s.objective = j.value("objective", Minute{0});
        s.total_delay = j.value("total_delay", Minute{0});
        if (j.contains("bound")) s.bound = j["bound"].get<Minute>();
        if (j.contains("certificate")) s.certificate = j["certificate"].get<std::set<int>>();
        if (j.contains("affected"))
            for (const auto& a : j["affected"]) s.affected.insert(id(a));
        s.has_schedule = j.contains("occupations") && !j["occupations"].empty();
        for (const auto& o : j.value("occupations", json::array())) {
            Occupation oc;
            oc.train = id(o.at("train"));
            auto kind = o.at("kind").get<std::string>();
            if (kind != "block" && kind != "wait") throw Error("occupation kind must be block or wait", kind);
            oc.kind = kind == "block" ? Occupation::Kind::block : Occupation::Kind::wait;
            oc.where = id(o.at("where"));
            oc.entry = o.at("entry").get<Minute>();
            oc.exit = o.at("exit").get<Minute>();
            oc.forward = o.value("forward", true);
            s.occupations.push_back(oc);
        }
        for (const auto& p : j.value("priorities", json::array()))
            s.priorities.push_back({id(p.at("first")), id(p.at("second")), id(p.at("block"))});
        for (const auto& n : j.value("node_times", json::array()))
            s.node_times.push_back({id(n.at("train")), id(n.at("node")), n.at("arrive").get<Minute>(),
                                    n.at("depart").get<Minute>()});
        return s;
    } catch (const json::exception& e) {
        throw Error(std::string("schedule schema violation: ") + e.what());
    }
}

}  // namespace railsched

#pragma once

// Independent feasibility checks on schedules, in minutes.
//
// Nothing here reads model columns or rows: every rule is re-derived from
// the instance, the scenario and the occupation intervals themselves.

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "railsched/core.hpp"
#include "railsched/model.hpp"
#include "railsched/schedule.hpp"

namespace railsched::validate {

using model::ModelConfig;

struct Violation {
    int tag = 0;
    std::vector<std::string> entities;
    Minute window_start = 0, window_end = 0;
    Minute measured = 0, required = 0;
    std::string message;
};

struct ViolationReport {
    std::vector<Violation> violations;

    bool empty() const { return violations.empty(); }
    std::set<int> tags() const {
        std::set<int> t;
        for (const auto& v : violations) t.insert(v.tag);
        return t;
    }
    bool has(int tag) const { return tags().count(tag) > 0; }
};

struct TrainDelay {
    std::string train;
    Minute origin_departure = 0;
    Minute destination_arrival = 0;
    Minute initial_travel = 0;
    Minute travel = 0;
    Minute delay = 0;
};

struct DelayReport {
    std::vector<TrainDelay> trains;
    Minute objective = 0;
    Minute total_delay = 0;
};

namespace detail {

struct Span {
    Minute from, to;
};

inline bool overlaps(Minute a0, Minute a1, Minute b0, Minute b1) { return a0 < b1 && b0 < a1; }

// Affected trains, recomputed from the timetable.
inline std::set<std::string> affected(const Instance& inst, const DisruptionScenario& s, Minute beta) {
    const auto& net = inst.network;
    struct Run {
        std::string train;
        Minute in, out;
        bool forward;
    };
    std::set<std::string> result;
    for (const auto& c : s.closures) {
        const auto& blk = net.block(c.block);
        std::vector<Run> runs;
        for (const auto& t : inst.trains)
            for (std::size_t i = 0; i < t.route.size(); ++i)
                if (t.route[i] == c.block) {
                    bool fwd = net.nodes()[net.block_from(net.block_at(c.block))].id == t.stops[i].node;
                    runs.push_back({t.id, t.stops[i].depart, t.stops[i + 1].arrive, fwd});
                }
        bool partial = c.tracks_closed < blk.tracks && c.forward_track.has_value();
        std::vector<bool> in(runs.size());
        for (std::size_t i = 0; i < runs.size(); ++i)
            in[i] = overlaps(runs[i].in, runs[i].out, c.start, c.end()) &&
                    (!partial || runs[i].forward == *c.forward_track);
        for (bool again = true; again;) {
            again = false;
            for (std::size_t i = 0; i < runs.size(); ++i)
                for (std::size_t j = 0; j < runs.size(); ++j)
                    if (in[i] && !in[j] && runs[j].forward == runs[i].forward && runs[j].in >= runs[i].in &&
                        runs[j].in - runs[i].out < beta && (!partial || runs[j].forward == *c.forward_track))
                        in[j] = again = true;
        }
        for (std::size_t i = 0; i < runs.size(); ++i)
            if (in[i]) result.insert(runs[i].train);
    }
    return result;
}

// Per-train view rebuilt from the occupations.
struct Trajectory {
    bool complete = false;
    std::vector<Minute> arrive, depart;  // per route node
    std::vector<Minute> entry;           // per route block
    std::vector<std::vector<Span>> held; // per route node
};

class Checker {
public:
    Checker(const ScheduleSolution& s, const Instance& inst, const DisruptionScenario& sc, const ModelConfig& cfg,
            std::optional<std::set<std::string>> r_star)
        : s_(s), inst_(inst), sc_(sc), cfg_(cfg) {
        if (cfg.variant == model::Variant::adjusted) r_star_ = r_star ? *r_star : affected(inst, sc, cfg.beta);
    }

    ViolationReport run() {
        const auto& g = inst_.grid;
        std::set<std::string> known;
        for (const auto& t : inst_.trains) known.insert(t.id);
        for (const auto& o : s_.occupations)
            if (!known.count(o.train)) add(3, {o.train}, o.entry, o.exit, 0, 0, "occupation of an unknown train");
        for (const auto& o : s_.occupations)
            if (!g.aligned(o.entry) || !g.aligned(o.exit) || o.entry < g.start() || o.exit > g.end())
                add(4, {o.train, o.where}, o.entry, o.exit, o.exit, g.end(), "occupation outside the horizon grid");

        for (const auto& t : inst_.trains) traj_[t.id] = train(t);
        pairs();
        capacity();
        return std::move(report_);
    }

private:
    void add(int tag, std::vector<std::string> who, Minute a, Minute b, Minute measured, Minute required,
             std::string msg) {
        report_.violations.push_back({tag, std::move(who), a, b, measured, required, std::move(msg)});
    }

    Trajectory train(const TrainService& t) {
        const auto& net = inst_.network;
        const std::size_t n = t.route.size();
        Trajectory tj;
        std::vector<Occupation> mine;
        for (const auto& o : s_.occupations)
            if (o.train == t.id) mine.push_back(o);
        std::sort(mine.begin(), mine.end(), [](const Occupation& a, const Occupation& b) {
            return std::tie(a.entry, a.exit) < std::tie(b.entry, b.exit);
        });

        // One place at a time.
        for (std::size_t i = 1; i < mine.size(); ++i)
            if (mine[i].entry < mine[i - 1].exit)
                add(2, {t.id, mine[i - 1].where, mine[i].where}, mine[i].entry, mine[i - 1].exit, 0, 0,
                    "train occupies two places at once");

        std::vector<int> count(n, 0);
        tj.entry.assign(n, 0);
        tj.held.assign(n + 1, {});
        bool bad_shape = false;
        for (const auto& o : mine) {
            if (o.kind == Occupation::Kind::block) {
                auto pos = std::find(t.route.begin(), t.route.end(), o.where);
                if (pos == t.route.end()) {
                    add(3, {t.id, o.where}, o.entry, o.exit, 0, 0, "block is not on the train's route");
                    bad_shape = true;
                    continue;
                }
                std::size_t i = pos - t.route.begin();
                bool fwd = net.nodes()[net.block_from(net.block_at(o.where))].id == t.stops[i].node;
                if (fwd != o.forward) add(3, {t.id, o.where}, o.entry, o.exit, 0, 0, "block traversed the wrong way");
                Minute travel = net.block(o.where).travel_time;
                if (o.exit - o.entry != travel)
                    add(7, {t.id, o.where}, o.entry, o.exit, o.exit - o.entry, travel, "traversal time differs");
                ++count[i];
                tj.entry[i] = o.entry;
            } else {
                std::size_t j = n + 1;
                for (std::size_t q = 0; q <= n; ++q)
                    if (t.stops[q].node == o.where) j = q;
                if (j > n) {
                    add(3, {t.id, o.where}, o.entry, o.exit, 0, 0, "hold at a node off the route");
                    bad_shape = true;
                    continue;
                }
                if (o.exit <= o.entry) {
                    add(5, {t.id, o.where}, o.entry, o.exit, o.exit - o.entry, 1, "hold of non-positive length");
                    bad_shape = true;
                    continue;
                }
                if (j == n) {
                    add(5, {t.id, o.where}, o.entry, o.exit, 0, 0, "hold after reaching the destination");
                    bad_shape = true;
                    continue;
                }
                tj.held[j].push_back({o.entry, o.exit});
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            if (count[i] != 1) {
                add(5, {t.id, t.route[i]}, 0, 0, count[i], 1, "route block not traversed exactly once");
                bad_shape = true;
            }
        if (bad_shape) return tj;

        // A contiguous trajectory starting at the pinned origin time.
        Minute first = mine.empty() ? t.departure : mine.front().entry;
        if (first != t.departure)
            add(11, {t.id, t.origin}, first, first, first, t.departure, "origin arrival moved");
        tj.arrive.assign(n + 1, 0);
        tj.depart.assign(n + 1, 0);
        Minute at = first;
        for (std::size_t j = 0; j <= n; ++j) {
            tj.arrive[j] = at;
            auto& h = tj.held[j];
            std::sort(h.begin(), h.end(), [](const Span& a, const Span& b) { return a.from < b.from; });
            Minute cur = at;
            for (const auto& sp : h) {
                if (sp.from != cur) {
                    add(5, {t.id, t.stops[j].node}, cur, sp.from, sp.from, cur, "trajectory is not continuous");
                    bad_shape = true;
                }
                cur = sp.to;
            }
            tj.depart[j] = cur;
            if (j < n) {
                if (tj.entry[j] != cur) {
                    add(5, {t.id, t.route[j]}, cur, tj.entry[j], tj.entry[j], cur, "trajectory is not continuous");
                    bad_shape = true;
                }
                at = tj.entry[j] + net.block(t.route[j]).travel_time;
            }
        }
        if (bad_shape) return tj;
        tj.complete = true;

        // Reported node times must match the trajectory.
        for (const auto& nt : s_.node_times) {
            if (nt.train != t.id) continue;
            for (std::size_t j = 0; j <= n; ++j) {
                if (t.stops[j].node != nt.node) continue;
                if (nt.arrive != tj.arrive[j])
                    add(10, {t.id, nt.node}, nt.arrive, nt.arrive, nt.arrive, tj.arrive[j], "reported arrival differs");
                if (nt.depart != tj.depart[j])
                    add(12, {t.id, nt.node}, nt.depart, nt.depart, nt.depart, tj.depart[j], "reported departure differs");
            }
        }

        for (std::size_t j = 1; j < n; ++j) {
            Minute dw = net.node(t.stops[j].node).dwell_min;
            Minute stay = tj.depart[j] - tj.arrive[j];
            if (stay < dw)
                add(18, {t.id, t.stops[j].node}, tj.arrive[j], tj.depart[j], stay, dw, "dwell below minimum");
        }
        for (std::size_t j = 0; j <= n; ++j) {
            const auto& st = t.stops[j];
            if (tj.depart[j] < st.depart)
                add(23, {t.id, st.node}, tj.depart[j], st.depart, tj.depart[j], st.depart, "departs before timetable");
            if (tj.arrive[j] < st.arrive)
                add(24, {t.id, st.node}, tj.arrive[j], st.arrive, tj.arrive[j], st.arrive, "arrives before timetable");
        }

        auto t_dis = sc_.start();
        if (cfg_.variant == model::Variant::basic) {
            if (t_dis) {
                Minute sum = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (t.stops[j].depart < *t_dis) continue;
                    Minute late = tj.depart[j] - t.stops[j].depart;
                    if (cfg_.delay_cap == model::DelayCap::per_node && late > cfg_.beta)
                        add(20, {t.id, t.stops[j].node}, t.stops[j].depart, tj.depart[j], late, cfg_.beta,
                            "departure delay above threshold");
                    sum += late;
                }
                if (cfg_.delay_cap == model::DelayCap::train_sum && sum > cfg_.beta)
                    add(20, {t.id}, *t_dis, *t_dis, sum, cfg_.beta, "train delay above threshold");
            }
            Minute cutoff = t_dis ? *t_dis - cfg_.beta : std::numeric_limits<Minute>::max();
            freeze(t, tj, cutoff, 21, 22);
        } else if (!r_star_.count(t.id)) {
            freeze(t, tj, std::numeric_limits<Minute>::max(), 29, 30);
        }
        return tj;
    }

    // Departures and occupations that end before `cutoff` must follow the timetable.
    void freeze(const TrainService& t, const Trajectory& tj, Minute cutoff, int dep_tag, int occ_tag) {
        const std::size_t n = t.route.size();
        const Minute d = inst_.grid.delta();
        for (std::size_t j = 0; j <= n; ++j)
            if (t.stops[j].depart < cutoff && tj.depart[j] != t.stops[j].depart)
                add(dep_tag, {t.id, t.stops[j].node}, t.stops[j].depart, tj.depart[j], tj.depart[j], t.stops[j].depart,
                    "kept departure changed");
        for (std::size_t i = 0; i < n; ++i) {
            Minute travel = inst_.network.block(t.route[i]).travel_time;
            Minute now = tj.entry[i], was = t.stops[i].depart;
            bool now_counts = now + travel < cutoff, was_counts = was + travel < cutoff;
            if ((now_counts || was_counts) && now != was)
                add(occ_tag, {t.id, t.route[i]}, std::min(now, was), std::max(now, was) + travel, now, was,
                    "kept block occupation changed");
        }
        for (std::size_t j = 0; j < n; ++j) {
            auto held_now = [&](Minute u) { return u >= tj.arrive[j] && u < tj.depart[j]; };
            auto held_was = [&](Minute u) { return u >= t.stops[j].arrive && u < t.stops[j].depart; };
            Minute lo = std::min(tj.arrive[j], t.stops[j].arrive);
            Minute hi = std::max(tj.depart[j], t.stops[j].depart);
            for (Minute u = lo; u < hi && u + d < cutoff; u += d)
                if (held_now(u) != held_was(u)) {
                    add(occ_tag, {t.id, t.stops[j].node}, u, u + d, held_now(u), held_was(u), "kept hold changed");
                    break;
                }
        }
    }

    static std::size_t position(const TrainService& t, const std::string& block) {
        return std::find(t.route.begin(), t.route.end(), block) - t.route.begin();
    }

    void pairs() {
        const auto& net = inst_.network;
        const auto& tt = inst_.trains;
        std::map<std::pair<std::string, std::string>, const Priority*> prio;
        for (const auto& p : s_.priorities) prio[{p.first + "\n" + p.second, p.block}] = &p;

        for (const auto& c : sc_.closures) {
            const auto& blk = net.block(c.block);
            if (c.tracks_closed < blk.tracks) continue;
            for (const auto& t : tt) {
                const auto& tj = traj_[t.id];
                if (!tj.complete) continue;
                auto i = position(t, c.block);
                if (i == t.route.size()) continue;
                Minute a = tj.entry[i], b = a + blk.travel_time;
                if (overlaps(a, b, c.start, c.end()))
                    add(6, {t.id, c.block}, std::max(a, c.start), std::min(b, c.end()), c.tracks_closed, 0,
                        "block used while closed");
            }
        }

        for (std::size_t x = 0; x < tt.size(); ++x) {
            for (std::size_t y = x + 1; y < tt.size(); ++y) {
                const auto& A = tt[x];
                const auto& B = tt[y];
                const auto& ta = traj_[A.id];
                const auto& tb = traj_[B.id];
                if (!ta.complete || !tb.complete) continue;
                for (std::size_t i = 0; i < A.route.size(); ++i) {
                    auto j = position(B, A.route[i]);
                    if (j == B.route.size()) continue;
                    const auto& blk = net.block(A.route[i]);
                    bool same_way = A.stops[i].node == B.stops[j].node;
                    Minute ea = ta.entry[i], eb = tb.entry[j];
                    Minute xa = ea + blk.travel_time, xb = eb + blk.travel_time;
                    std::vector<std::string> who{A.id, B.id, blk.id};

                    bool binds = cfg_.headway_scope == model::HeadwayScope::all_pairs || same_way || blk.tracks == 1;
                    Minute h = binds ? blk.headway : 0;
                    if (std::abs(ea - eb) < h)
                        add(14, who, std::min(ea, eb), std::max(ea, eb), std::abs(ea - eb), h, "entry headway");
                    if (std::abs(xa - xb) < h)
                        add(16, who, std::min(xa, xb), std::max(xa, xb), std::abs(xa - xb), h, "exit headway");
                    if ((ea < eb) != (xa < xb) && ea != eb)
                        add(16, who, std::min(xa, xb), std::max(xa, xb), 0, 0, "trains overtake inside a block");

                    const Priority* pa = nullptr;
                    if (auto it = prio.find({A.id + "\n" + B.id, blk.id}); it != prio.end()) pa = it->second;
                    const Priority* pb = nullptr;
                    if (auto it = prio.find({B.id + "\n" + A.id, blk.id}); it != prio.end()) pb = it->second;
                    if (!s_.priorities.empty()) {
                        if (!pa && !pb) {
                            add(13, who, std::min(ea, eb), std::max(ea, eb), 0, 1, "no priority for a shared block");
                        } else if (pa && pb) {
                            add(13, who, std::min(ea, eb), std::max(ea, eb), 2, 1, "both priorities set");
                        } else {
                            Minute first = pa ? ea : eb, second = pa ? eb : ea;
                            if (first + h > second)
                                add(14, who, second, first, second - first, h, "entry order contradicts priority");
                        }
                    }

                    if (same_way) continue;
                    if (blk.tracks == 1) {
                        if (overlaps(ea, xa, eb, xb))
                            add(6, who, std::max(ea, eb), std::min(xa, xb), 2, 1, "opposing trains on single track");
                        continue;
                    }
                    for (const auto& c : sc_.closures) {
                        if (c.block != blk.id || c.tracks_closed != 1) continue;
                        Minute a = std::max({ea, eb, c.start}), b = std::min({xa, xb, c.end()});
                        if (a < b) add(6, who, a, b, 2, 1, "opposing trains share the open track");
                    }
                }
            }
        }
    }

    void capacity() {
        const auto& net = inst_.network;
        const Minute d = inst_.grid.delta();
        struct Group {
            std::string label;
            std::set<std::string> nodes;
            int cap;
        };
        std::vector<Group> groups;
        std::set<std::string> blocks, nodes;
        for (const auto& t : inst_.trains) {
            blocks.insert(t.route.begin(), t.route.end());
            for (const auto& st : t.stops) nodes.insert(st.node);
        }
        if (cfg_.capacity_mode == model::CapacityMode::per_block) {
            for (const auto& b : blocks) {
                const auto& blk = net.block(b);
                groups.push_back({b, {blk.from, blk.to}, blk.capacity});
            }
        } else {
            for (const auto& n : nodes) {
                const auto& nd = net.node(n);
                int cap = 1;
                if (nd.capacity) {
                    cap = *nd.capacity;
                } else {
                    for (const auto& blk : net.blocks())
                        if (blk.from == n || blk.to == n) cap = std::max(cap, blk.capacity);
                }
                groups.push_back({n, {n}, cap});
            }
        }
        for (const auto& g : groups) {
            std::map<Minute, std::vector<std::string>> load;
            for (const auto& o : s_.occupations) {
                if (o.kind != Occupation::Kind::wait || !g.nodes.count(o.where)) continue;
                for (Minute u = o.entry; u < o.exit; u += d) load[u].push_back(o.train);
            }
            for (const auto& [u, who] : load)
                if (static_cast<int>(who.size()) > g.cap) {
                    auto list = who;
                    list.push_back(g.label);
                    add(19, list, u, u + d, static_cast<Minute>(who.size()), g.cap, "holding capacity exceeded");
                }
        }
    }

    const ScheduleSolution& s_;
    const Instance& inst_;
    const DisruptionScenario& sc_;
    ModelConfig cfg_;
    std::set<std::string> r_star_;
    std::map<std::string, Trajectory> traj_;
    ViolationReport report_;
};

}  // namespace detail

/// Runs every rule. For the adjusted variant, `affected` overrides the set of trains allowed to move.
inline ViolationReport check(const ScheduleSolution& s, const Instance& inst, const DisruptionScenario& scenario,
                             const ModelConfig& config,
                             std::optional<std::set<std::string>> affected = std::nullopt) {
    return detail::Checker(s, inst, scenario, config, std::move(affected)).run();
}

inline DelayReport delays(const ScheduleSolution& s, const Instance& inst) {
    DelayReport r;
    for (const auto& t : inst.trains) {
        TrainDelay d;
        d.train = t.id;
        d.initial_travel = t.travel();
        Minute first = t.departure, last = t.arrival();
        Minute depart = t.stops.front().depart;
        bool seen = false;
        for (const auto& o : s.occupations) {
            if (o.train != t.id) continue;
            if (!seen || o.entry < first) first = o.entry;
            if (!seen || o.exit > last) last = o.exit;
            seen = true;
            if (o.kind == Occupation::Kind::block && o.where == t.route.front()) depart = o.entry;
        }
        d.origin_departure = depart;
        d.destination_arrival = last;
        d.travel = last - first;
        d.delay = last - t.arrival();
        r.objective += d.travel;
        r.total_delay += d.delay;
        r.trains.push_back(d);
    }
    return r;
}

inline json to_json(const ViolationReport& r) {
    json out = json::array();
    for (const auto& v : r.violations)
        out.push_back({{"tag", v.tag},
                       {"entities", v.entities},
                       {"window", {v.window_start, v.window_end}},
                       {"measured", v.measured},
                       {"required", v.required},
                       {"message", v.message}});
    return out;
}

inline json to_json(const DelayReport& r) {
    json out;
    out["objective"] = r.objective;
    out["total_delay"] = r.total_delay;
    out["trains"] = json::array();
    for (const auto& t : r.trains)
        out["trains"].push_back({{"train", t.train},
                                 {"origin_departure", t.origin_departure},
                                 {"destination_arrival", t.destination_arrival},
                                 {"initial_travel", t.initial_travel},
                                 {"travel", t.travel},
                                 {"delay", t.delay}});
    return out;
}

inline std::string format_table(const ViolationReport& r) {
    std::ostringstream os;
    if (r.empty()) {
        os << "no violations\n";
        return os.str();
    }
    os << "rule  window          measured  required  entities / message\n";
    for (const auto& v : r.violations) {
        std::string who;
        for (const auto& e : v.entities) who += (who.empty() ? "" : ",") + e;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-5d %6lld-%-8lld %9lld %9lld  ", v.tag, static_cast<long long>(v.window_start),
                      static_cast<long long>(v.window_end), static_cast<long long>(v.measured),
                      static_cast<long long>(v.required));
        os << buf << who << ": " << v.message << "\n";
    }
    return os.str();
}

inline std::string format_table(const DelayReport& r) {
    std::ostringstream os;
    os << "train      depart   arrive  initial   travel    delay\n";
    for (const auto& t : r.trains) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-8s %8lld %8lld %8lld %8lld %8lld\n", t.train.c_str(),
                      static_cast<long long>(t.origin_departure), static_cast<long long>(t.destination_arrival),
                      static_cast<long long>(t.initial_travel), static_cast<long long>(t.travel),
                      static_cast<long long>(t.delay));
        os << buf;
    }
    os << "objective " << r.objective << ", total delay " << r.total_delay << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Validator self-test by targeted perturbation.

struct MutationResult {
    std::string name;
    int intended = 0;
    bool applicable = false;
    std::string target;
    ViolationReport report;

    bool detected() const { return applicable && report.has(intended); }
};

namespace detail {

class Mutator {
public:
    Mutator(const ScheduleSolution& base, const Instance& inst, const DisruptionScenario& sc, const ModelConfig& cfg,
            std::optional<std::set<std::string>> r_star)
        : base_(base), inst_(inst), sc_(sc), cfg_(cfg), r_star_(std::move(r_star)) {
        base_.node_times.clear();
        d_ = inst.grid.delta();
    }

    template <class Rng>
    std::vector<MutationResult> run(Rng& rng) {
        std::vector<MutationResult> out;
        auto attempt = [&](const char* name, int tag, auto&& apply) {
            MutationResult r;
            r.name = name;
            r.intended = tag;
            ScheduleSolution s = base_;
            auto target = apply(s, rng);
            if (target) {
                r.applicable = true;
                r.target = *target;
                r.report = check(s, inst_, sc_, cfg_, r_star_);
            }
            out.push_back(std::move(r));
        };
        using Opt = std::optional<std::string>;
        const auto& tt = inst_.trains;
        const auto& net = inst_.network;

        attempt("shift-earlier", 24, [&](ScheduleSolution& s, Rng& g) -> Opt {
            const auto& t = tt[pick(tt.size(), g)];
            shift(s, t.id, -d_);
            return t.id;
        });
        attempt("compress-dwell", 18, [&](ScheduleSolution& s, Rng& g) -> Opt {
            std::vector<std::pair<std::size_t, std::size_t>> c;
            for (std::size_t k = 0; k < tt.size(); ++k)
                for (std::size_t j = 1; j + 1 < tt[k].stops.size(); ++j)
                    if (net.node(tt[k].stops[j].node).dwell_min >= d_ && hold(s, tt[k].id, tt[k].stops[j].node))
                        c.emplace_back(k, j);
            if (c.empty()) return std::nullopt;
            auto [k, j] = c[pick(c.size(), g)];
            const auto& t = tt[k];
            auto* h = hold(s, t.id, t.stops[j].node);
            Minute stay = h->exit - h->entry;
            Minute cut = stay - (net.node(t.stops[j].node).dwell_min - d_);
            Minute end = h->exit;
            h->exit -= cut;
            shift(s, t.id, -cut, end);
            drop_empty(s);
            return t.id + "@" + t.stops[j].node;
        });
        attempt("opposing-overlap", 6, [&](ScheduleSolution& s, Rng& g) -> Opt {
            auto c = sharing(s, [&](const Block& b, bool same) { return !same && b.tracks == 1; });
            if (c.empty()) return std::nullopt;
            auto [a, b, blk] = c[pick(c.size(), g)];
            shift(s, b, at(s, a, blk)->entry - at(s, b, blk)->entry);
            return a + "," + b + "@" + blk;
        });
        attempt("into-closure", 6, [&](ScheduleSolution& s, Rng& g) -> Opt {
            std::vector<std::pair<std::string, const Closure*>> c;
            for (const auto& cl : sc_.closures)
                if (cl.tracks_closed == net.block(cl.block).tracks)
                    for (const auto& t : tt)
                        if (at(s, t.id, cl.block)) c.emplace_back(t.id, &cl);
            if (c.empty()) return std::nullopt;
            auto [id, cl] = c[pick(c.size(), g)];
            shift(s, id, cl->start - at(s, id, cl->block)->entry);
            return id + "@" + cl->block;
        });
        attempt("stretch-traversal", 7, [&](ScheduleSolution& s, Rng& g) -> Opt {
            auto c = indices(s, Occupation::Kind::block);
            if (c.empty()) return std::nullopt;
            auto& o = s.occupations[c[pick(c.size(), g)]];
            Minute end = o.exit;
            std::string id = o.train, where = o.where;
            shift(s, id, d_, end);
            at(s, id, where)->exit += d_;
            return id + "@" + where;
        });
        attempt("off-route", 3, [&](ScheduleSolution& s, Rng& g) -> Opt {
            std::vector<std::pair<std::size_t, std::string>> c;
            for (std::size_t i = 0; i < s.occupations.size(); ++i) {
                const auto& o = s.occupations[i];
                if (o.kind != Occupation::Kind::block) continue;
                const auto& route = inst_.train(o.train).route;
                for (const auto& b : net.blocks())
                    if (std::find(route.begin(), route.end(), b.id) == route.end()) {
                        c.emplace_back(i, b.id);
                        break;
                    }
            }
            if (c.empty()) return std::nullopt;
            auto [i, b] = c[pick(c.size(), g)];
            s.occupations[i].where = b;
            return s.occupations[i].train + "@" + b;
        });
        attempt("past-horizon", 4, [&](ScheduleSolution& s, Rng& g) -> Opt {
            if (tt.empty()) return std::nullopt;
            const auto& t = tt[pick(tt.size(), g)];
            Minute last = 0;
            for (const auto& o : s.occupations)
                if (o.train == t.id) last = std::max(last, o.exit);
            shift(s, t.id, inst_.grid.end() - last + d_);
            return t.id;
        });
        attempt("headway", 14, [&](ScheduleSolution& s, Rng& g) -> Opt {
            auto c = sharing(s, [&](const Block& b, bool same) { return same && b.headway > 0; });
            if (c.empty()) return std::nullopt;
            auto [a, b, blk] = c[pick(c.size(), g)];
            shift(s, b, at(s, a, blk)->entry - at(s, b, blk)->entry);
            return a + "," + b + "@" + blk;
        });
        attempt("capacity", 19, [&](ScheduleSolution& s, Rng& g) -> Opt {
            struct Group {
                std::string label;
                std::set<std::string> nodes;
                int cap;
            };
            std::vector<Group> groups;
            if (cfg_.capacity_mode == model::CapacityMode::per_block) {
                for (const auto& b : net.blocks()) groups.push_back({b.id, {b.from, b.to}, b.capacity});
            } else {
                for (const auto& n : net.nodes()) {
                    int cap = 1;
                    if (n.capacity) cap = *n.capacity;
                    else
                        for (const auto& b : net.blocks())
                            if (b.from == n.id || b.to == n.id) cap = std::max(cap, b.capacity);
                    groups.push_back({n.id, {n.id}, cap});
                }
            }
            std::vector<std::pair<const Group*, std::vector<std::size_t>>> c;
            for (const auto& gr : groups) {
                std::vector<std::size_t> first;
                std::set<std::string> seen;
                for (std::size_t i = 0; i < s.occupations.size(); ++i) {
                    const auto& o = s.occupations[i];
                    if (o.kind == Occupation::Kind::wait && gr.nodes.count(o.where) && seen.insert(o.train).second)
                        first.push_back(i);
                }
                if (static_cast<int>(first.size()) > gr.cap) {
                    first.resize(gr.cap + 1);
                    c.emplace_back(&gr, first);
                }
            }
            if (c.empty()) return std::nullopt;
            auto [gr, waits] = c[pick(c.size(), g)];
            Minute start = s.occupations[waits.front()].entry;
            std::vector<std::pair<std::string, Minute>> moves;
            for (auto i : waits) moves.emplace_back(s.occupations[i].train, start - s.occupations[i].entry);
            for (auto& [id, by] : moves) shift(s, id, by);
            return gr->label;
        });
        attempt("delay-cap", 20, [&](ScheduleSolution& s, Rng& g) -> Opt {
            auto t_dis = sc_.start();
            if (cfg_.variant != model::Variant::basic || !t_dis) return std::nullopt;
            std::vector<std::pair<std::size_t, std::size_t>> c;
            for (std::size_t k = 0; k < tt.size(); ++k)
                for (std::size_t j = 0; j + 1 < tt[k].stops.size(); ++j)
                    if (tt[k].stops[j].depart >= *t_dis) c.emplace_back(k, j);
            if (c.empty()) return std::nullopt;
            auto [k, j] = c[pick(c.size(), g)];
            Minute len = (cfg_.beta / d_ + 1) * d_;
            insert_hold(s, tt[k], j, len);
            return tt[k].id + "@" + tt[k].stops[j].node;
        });
        attempt("pre-disruption-change", 21, [&](ScheduleSolution& s, Rng& g) -> Opt {
            if (cfg_.variant != model::Variant::basic) return std::nullopt;
            auto t_dis = sc_.start();
            Minute cutoff = t_dis ? *t_dis - cfg_.beta : std::numeric_limits<Minute>::max();
            std::vector<std::pair<std::size_t, std::size_t>> c;
            for (std::size_t k = 0; k < tt.size(); ++k)
                for (std::size_t j = 0; j + 1 < tt[k].stops.size(); ++j)
                    if (tt[k].stops[j].depart < cutoff) c.emplace_back(k, j);
            if (c.empty()) return std::nullopt;
            auto [k, j] = c[pick(c.size(), g)];
            insert_hold(s, tt[k], j, d_);
            return tt[k].id + "@" + tt[k].stops[j].node;
        });
        attempt("unaffected-change", 29, [&](ScheduleSolution& s, Rng& g) -> Opt {
            if (cfg_.variant != model::Variant::adjusted) return std::nullopt;
            auto rs = r_star_ ? *r_star_ : affected(inst_, sc_, cfg_.beta);
            std::vector<std::size_t> c;
            for (std::size_t k = 0; k < tt.size(); ++k)
                if (!rs.count(tt[k].id)) c.push_back(k);
            if (c.empty()) return std::nullopt;
            const auto& t = tt[c[pick(c.size(), g)]];
            insert_hold(s, t, t.stops.size() - 2, d_);
            return t.id;
        });
        attempt("origin-moved", 11, [&](ScheduleSolution& s, Rng& g) -> Opt {
            if (tt.empty()) return std::nullopt;
            const auto& t = tt[pick(tt.size(), g)];
            shift(s, t.id, d_);
            return t.id;
        });
        attempt("self-overlap", 2, [&](ScheduleSolution& s, Rng& g) -> Opt {
            auto c = indices(s, Occupation::Kind::wait);
            if (c.empty()) c = indices(s, Occupation::Kind::block);
            if (c.empty()) return std::nullopt;
            auto& o = s.occupations[c[pick(c.size(), g)]];
            o.exit += d_;
            return o.train + "@" + o.where;
        });
        attempt("drop-leg", 5, [&](ScheduleSolution& s, Rng& g) -> Opt {
            if (tt.empty()) return std::nullopt;
            const auto& t = tt[pick(tt.size(), g)];
            auto* o = at(s, t.id, t.route.back());
            if (!o) return std::nullopt;
            s.occupations.erase(s.occupations.begin() + (o - s.occupations.data()));
            return t.id;
        });
        attempt("priority-swap", 14, [&](ScheduleSolution& s, Rng& g) -> Opt {
            std::vector<std::size_t> c;
            for (std::size_t i = 0; i < s.priorities.size(); ++i) {
                const auto& p = s.priorities[i];
                auto* a = at(s, p.first, p.block);
                auto* b = at(s, p.second, p.block);
                if (a && b && a->entry < b->entry) c.push_back(i);
            }
            if (c.empty()) return std::nullopt;
            auto& p = s.priorities[c[pick(c.size(), g)]];
            std::swap(p.first, p.second);
            return p.first + "," + p.second + "@" + p.block;
        });
        attempt("priority-missing", 13, [&](ScheduleSolution& s, Rng& g) -> Opt {
            if (s.priorities.empty()) return std::nullopt;
            auto i = pick(s.priorities.size(), g);
            auto p = s.priorities[i];
            s.priorities.erase(s.priorities.begin() + i);
            return p.first + "," + p.second + "@" + p.block;
        });
        return out;
    }

private:
    template <class Rng>
    static std::size_t pick(std::size_t n, Rng& g) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(g);
    }

    // Move every occupation of `id` that starts at or after `from`.
    static void shift(ScheduleSolution& s, const std::string& id, Minute by,
                      Minute from = std::numeric_limits<Minute>::min()) {
        for (auto& o : s.occupations)
            if (o.train == id && o.entry >= from) {
                o.entry += by;
                o.exit += by;
            }
    }

    static Occupation* at(ScheduleSolution& s, const std::string& id, const std::string& block) {
        for (auto& o : s.occupations)
            if (o.train == id && o.kind == Occupation::Kind::block && o.where == block) return &o;
        return nullptr;
    }

    static Occupation* hold(ScheduleSolution& s, const std::string& id, const std::string& node) {
        for (auto& o : s.occupations)
            if (o.train == id && o.kind == Occupation::Kind::wait && o.where == node) return &o;
        return nullptr;
    }

    static void drop_empty(ScheduleSolution& s) {
        s.occupations.erase(std::remove_if(s.occupations.begin(), s.occupations.end(),
                                           [](const Occupation& o) { return o.exit <= o.entry; }),
                            s.occupations.end());
    }

    static std::vector<std::size_t> indices(const ScheduleSolution& s, Occupation::Kind k) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < s.occupations.size(); ++i)
            if (s.occupations[i].kind == k) out.push_back(i);
        return out;
    }

    // Hold train `t` at route node j for `len` more minutes before it leaves.
    void insert_hold(ScheduleSolution& s, const TrainService& t, std::size_t j, Minute len) const {
        auto* leg = at(s, t.id, t.route[j]);
        Minute leave = leg->entry;
        shift(s, t.id, len, leave);
        for (auto& o : s.occupations)
            if (o.train == t.id && o.kind == Occupation::Kind::wait && o.where == t.stops[j].node && o.exit == leave) {
                o.exit += len;
                return;
            }
        s.occupations.push_back({t.id, Occupation::Kind::wait, t.stops[j].node, leave, leave + len, true});
    }

    template <class Pred>
    std::vector<std::tuple<std::string, std::string, std::string>> sharing(ScheduleSolution& s, Pred pred) const {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        const auto& tt = inst_.trains;
        for (std::size_t x = 0; x < tt.size(); ++x)
            for (std::size_t y = x + 1; y < tt.size(); ++y)
                for (std::size_t i = 0; i < tt[x].route.size(); ++i) {
                    const auto& b = tt[x].route[i];
                    auto pos = std::find(tt[y].route.begin(), tt[y].route.end(), b);
                    if (pos == tt[y].route.end()) continue;
                    std::size_t j = pos - tt[y].route.begin();
                    bool same = tt[x].stops[i].node == tt[y].stops[j].node;
                    if (pred(inst_.network.block(b), same) && at(s, tt[x].id, b) && at(s, tt[y].id, b))
                        out.emplace_back(tt[x].id, tt[y].id, b);
                }
        return out;
    }

    ScheduleSolution base_;
    const Instance& inst_;
    const DisruptionScenario& sc_;
    ModelConfig cfg_;
    std::optional<std::set<std::string>> r_star_;
    Minute d_ = 1;
};

}  // namespace detail

/// Applies each targeted perturbation to a copy of a feasible schedule and re-checks it.
/// Perturbations with no suitable target in the instance are reported as not applicable.
inline std::vector<MutationResult> mutate_and_check(const ScheduleSolution& schedule, const Instance& inst,
                                                    const DisruptionScenario& scenario, const ModelConfig& config,
                                                    std::uint64_t seed,
                                                    std::optional<std::set<std::string>> affected = std::nullopt) {
    std::mt19937_64 rng(seed);
    return detail::Mutator(schedule, inst, scenario, config, std::move(affected)).run(rng);
}

}  // namespace railsched::validate

#pragma once

// Time-expanded 0-1 rescheduling program, basic and adjusted variants.
//
// Everything here works in interval units (index 0 is the horizon start).
// Occupations are half-open: a block arc (t, t') holds the block over
// [t, t'), a waiting arc (u, u+1) holds the node over [u, u+1).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "railsched/core.hpp"

namespace railsched::model {

enum class Variant { basic, adjusted };
enum class CapacityMode { per_block, per_node };
// shared_track: headway binds same-direction pairs, and opposing pairs on single track.
enum class HeadwayScope { shared_track, all_pairs };
// train_sum: one budget per train over its post-disruption departures.
enum class DelayCap { train_sum, per_node };

struct ModelConfig {
    Minute beta = 0;
    std::optional<Minute> big_m;  // defaults to horizon + max headway
    CapacityMode capacity_mode = CapacityMode::per_block;
    Variant variant = Variant::basic;
    HeadwayScope headway_scope = HeadwayScope::shared_track;
    DelayCap delay_cap = DelayCap::per_node;
};

inline std::string variant_name(Variant v) { return v == Variant::basic ? "basic" : "adjusted"; }
inline Variant parse_variant(const std::string& s) {
    if (s == "basic") return Variant::basic;
    if (s == "adjusted") return Variant::adjusted;
    throw Error("variant must be basic or adjusted", s);
}

/// Tracks closed per block per interval.
class ClosureGrid {
public:
    ClosureGrid() = default;
    ClosureGrid(std::size_t blocks, int intervals) : closed_(blocks, std::vector<int>(intervals, 0)) {}

    int at(std::size_t block, int u) const {
        if (u < 0 || u >= intervals()) return 0;
        return closed_[block][u];
    }
    void set(std::size_t block, int u, int v) { closed_[block][u] = v; }
    int intervals() const { return closed_.empty() ? 0 : static_cast<int>(closed_.front().size()); }
    std::size_t blocks() const { return closed_.size(); }

    bool any(std::size_t block) const {
        return std::any_of(closed_[block].begin(), closed_[block].end(), [](int v) { return v > 0; });
    }

    // Maximal runs [s, e) where at(block, u) satisfies pred.
    template <class Pred>
    std::vector<std::pair<int, int>> runs(std::size_t block, Pred pred) const {
        std::vector<std::pair<int, int>> out;
        int n = intervals();
        for (int u = 0; u < n;) {
            if (!pred(closed_[block][u])) {
                ++u;
                continue;
            }
            int s = u;
            while (u < n && pred(closed_[block][u])) ++u;
            out.emplace_back(s, u);
        }
        return out;
    }

private:
    std::vector<std::vector<int>> closed_;
};

inline ClosureGrid materialize_closures(const DisruptionScenario& s, const TimeGrid& g, const RailNetwork& net) {
    validate_scenario(s, net, g);
    ClosureGrid cg(net.blocks().size(), g.intervals());
    for (const auto& c : s.closures) {
        auto b = net.block_at(c.block);
        int from = g.to_interval(c.start);
        int to = g.to_interval(c.end());
        for (int u = from; u < to; ++u) cg.set(b, u, c.tracks_closed);
    }
    return cg;
}

/// Trains whose initial run crosses a closed block during its window, plus
/// same-direction followers entering less than `beta` after an affected
/// train left that block. A partial closure with a declared track only
/// affects traffic running on that track.
inline std::set<std::string> identify_affected(const Instance& inst, const DisruptionScenario& s, Minute beta) {
    const auto& net = inst.network;
    std::vector<std::vector<Leg>> legs;
    for (const auto& t : inst.trains) legs.push_back(legs_of(t, net));

    std::set<std::string> out;
    for (const auto& c : s.closures) {
        auto b = net.block_at(c.block);
        bool partial = c.tracks_closed < net.blocks()[b].tracks;
        struct Use {
            std::size_t train;
            Leg leg;
        };
        std::vector<Use> uses;
        for (std::size_t k = 0; k < legs.size(); ++k)
            for (const auto& l : legs[k])
                if (l.block == b && (!partial || !c.forward_track || *c.forward_track == l.forward))
                    uses.push_back({k, l});
        std::sort(uses.begin(), uses.end(), [](const Use& x, const Use& y) {
            return std::tie(x.leg.entry, x.train) < std::tie(y.leg.entry, y.train);
        });
        std::vector<bool> hit(uses.size(), false);
        for (std::size_t i = 0; i < uses.size(); ++i)
            hit[i] = uses[i].leg.entry < c.end() && c.start < uses[i].leg.exit;
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t i = 0; i < uses.size(); ++i) {
                if (!hit[i]) continue;
                for (std::size_t j = 0; j < uses.size(); ++j) {
                    if (hit[j] || uses[j].leg.forward != uses[i].leg.forward) continue;
                    if (uses[j].leg.entry >= uses[i].leg.entry && uses[j].leg.entry < uses[i].leg.exit + beta) {
                        hit[j] = true;
                        grew = true;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < uses.size(); ++i)
            if (hit[i]) out.insert(inst.trains[uses[i].train].id);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structured plan: what any search over entry times needs.

struct LegPlan {
    std::size_t block = 0;
    std::size_t from = 0, to = 0;
    bool forward = true;
    int travel = 0;       // intervals
    int initial = 0;      // initial entry interval
    int lo = 0, hi = 0;   // static entry domain
    int dwell_after = 0;  // minimum hold at `to` before the next leg
};

struct TrainPlan {
    std::string id;
    int origin_arrival = 0;   // pinned origin arrival
    int initial_arrival = 0;  // initial destination arrival
    std::vector<LegPlan> legs;
    // counted[j]: departure from route node j enters the delay cap.
    std::vector<bool> counted;
    bool affected = false;

    std::size_t node_count() const { return legs.size() + 1; }
    std::size_t node(std::size_t pos) const { return pos == 0 ? legs.front().from : legs[pos - 1].to; }
    bool capped() const { return std::find(counted.begin(), counted.end(), true) != counted.end(); }
    int initial_departure(std::size_t pos) const {
        return pos < legs.size() ? legs[pos].initial : initial_arrival;
    }
    int initial_arrival_at(std::size_t pos) const {
        return pos == 0 ? origin_arrival : legs[pos - 1].initial + legs[pos - 1].travel;
    }
};

/// Two trains with a common block.
struct SharedBlock {
    std::size_t k = 0, m = 0;
    std::size_t leg_k = 0, leg_m = 0;
    std::size_t block = 0;
    int headway = 0;  // effective, intervals
    bool opposing = false;
    bool always_exclusive = false;                   // single track
    std::vector<std::pair<int, int>> exclusive_windows;  // partial closure on double track
};

struct CapacityGroup {
    std::string label;
    std::vector<std::size_t> nodes;
    int cap = 0;
};

// ---------------------------------------------------------------------------
// Linear form

enum class Sense { le, ge, eq };

struct Term {
    int col = 0;
    std::int64_t coef = 0;
};

struct Row {
    int tag = 0;  // equation number of the rule it encodes
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::le;
    std::int64_t rhs = 0;
};

enum class ColumnKind { block_arc, wait_arc, priority, arrival, departure, block_entry, block_exit };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::block_arc;
    bool binary = true;
    std::int64_t lb = 0, ub = 1;
    int train = -1;
    int pos = -1;  // leg index (arcs on blocks, block aux) or route node index
    int t = 0, t2 = 0;
};

struct PriorityGroup {
    int col_km = 0, col_mk = 0;
    std::size_t shared = 0;  // index into RescheduleModel::shared
    std::vector<int> rows;
};

struct RescheduleModel {
    Instance instance;
    DisruptionScenario scenario;
    ModelConfig config;
    TimeGrid grid;
    int horizon = 0;  // intervals
    int beta = 0;     // intervals
    int big_m = 0;    // intervals
    std::optional<Minute> disruption_start;
    std::optional<Minute> freeze_cutoff;  // basic: t_dis - beta
    std::set<std::string> affected;

    ClosureGrid closures;
    std::vector<TrainPlan> trains;
    std::vector<SharedBlock> shared;
    std::vector<CapacityGroup> capacity_groups;
    std::vector<std::vector<std::size_t>> groups_of_node;
    std::vector<std::vector<std::pair<int, int>>> blocked;  // full closure runs per block
    std::vector<bool> infeasible_legs;                    // any train with empty static domain

    std::vector<Column> columns;
    std::vector<Row> rows;
    std::vector<Term> objective;
    std::int64_t objective_constant = 0;  // minutes
    std::vector<PriorityGroup> priority_groups;
    std::vector<int> defining_row;  // per aux column, else -1
    std::set<int> structural_tags;  // rules enforced by which columns exist

    // arc lookup: block_arc[k][leg] maps entry -> column, wait_arc[k][pos] maps start -> column
    std::vector<std::vector<std::map<int, int>>> block_arc;
    std::vector<std::vector<std::map<int, int>>> wait_arc;
    std::vector<std::vector<int>> arrival_col, departure_col;

    Minute baseline() const { return baseline_objective(instance.trains); }

    std::set<int> tags() const {
        std::set<int> t = structural_tags;
        for (const auto& r : rows) t.insert(r.tag);
        return t;
    }
};

namespace detail {

inline std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == ':' || c == '%' || c == ' ' || c == '\t') {
            static const char* hex = "0123456789ABCDEF";
            o += '%';
            o += hex[(static_cast<unsigned char>(c) >> 4) & 0xF];
            o += hex[static_cast<unsigned char>(c) & 0xF];
        } else {
            o += c;
        }
    }
    return o;
}

inline std::string unesc(const std::string& s) {
    std::string o;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            o += static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16));
            i += 2;
        } else {
            o += s[i];
        }
    }
    return o;
}

inline bool overlaps(int a0, int a1, int b0, int b1) { return a0 < b1 && b0 < a1; }

}  // namespace detail

/// Decoded column name, e.g. "x:4:67:7:8" -> {"x", {"4", "67", "7", "8"}}.
struct ColumnName {
    std::string kind;
    std::vector<std::string> fields;
};

inline ColumnName decode_column_name(const std::string& name) {
    ColumnName out;
    std::size_t p = 0;
    bool first = true;
    while (p <= name.size()) {
        auto q = name.find(':', p);
        if (q == std::string::npos) q = name.size();
        auto part = detail::unesc(name.substr(p, q - p));
        if (first) out.kind = part;
        else out.fields.push_back(part);
        first = false;
        p = q + 1;
    }
    return out;
}

namespace detail {

class Builder {
public:
    Builder(const Instance& inst, const DisruptionScenario& s, const ModelConfig& cfg) {
        m_.instance = inst;
        m_.scenario = s;
        m_.config = cfg;
        m_.grid = inst.grid;
        m_.horizon = inst.grid.intervals();
        validate_scenario(s, inst.network, inst.grid);
        if (cfg.beta < 0) throw Error("beta must be non-negative");
        if (cfg.beta % inst.grid.delta() != 0) throw Error("beta must be a multiple of the grid step");
        Minute max_h = 0;
        for (const auto& b : inst.network.blocks()) max_h = std::max(max_h, b.headway);
        Minute big_m = cfg.big_m.value_or(inst.grid.horizon() + max_h);
        if (big_m < inst.grid.horizon() + max_h) throw Error("big_m must be at least horizon + max headway");
        const Minute d = inst.grid.delta();
        m_.big_m = static_cast<int>((big_m + d - 1) / d);
        m_.beta = static_cast<int>(cfg.beta / d);
        m_.disruption_start = s.start();
        if (cfg.variant == Variant::basic && m_.disruption_start) m_.freeze_cutoff = *m_.disruption_start - cfg.beta;
        if (cfg.variant == Variant::adjusted) m_.affected = identify_affected(inst, s, cfg.beta);
        m_.closures = materialize_closures(s, inst.grid, inst.network);
    }

    RescheduleModel build() {
        plan_trains();
        plan_pairs();
        plan_capacity();
        make_columns();
        make_rows();
        finish();
        return std::move(m_);
    }

private:
    const RailNetwork& net() const { return m_.instance.network; }
    int iv(Minute minute) const { return m_.grid.to_interval(minute); }
    Minute minute(int u) const { return m_.grid.to_minute(u); }

    bool frozen_before_cutoff(int initial_interval) const {
        if (m_.config.variant != Variant::basic) return false;
        if (!m_.disruption_start) return true;  // nothing disrupted: keep the plan
        return minute(initial_interval) < *m_.freeze_cutoff;
    }

    void plan_trains() {
        const auto& g = m_.grid;
        const Minute d = g.delta();
        const auto& tt = m_.instance.trains;
        m_.blocked.resize(net().blocks().size());
        for (std::size_t b = 0; b < net().blocks().size(); ++b) {
            int tracks = net().blocks()[b].tracks;
            m_.blocked[b] = m_.closures.runs(b, [tracks](int v) { return v >= tracks; });
        }
        for (const auto& t : tt) {
            TrainPlan p;
            p.id = t.id;
            p.origin_arrival = iv(t.departure);
            p.initial_arrival = iv(t.arrival());
            p.affected = m_.affected.count(t.id) > 0;
            auto legs = legs_of(t, net());
            for (std::size_t i = 0; i < legs.size(); ++i) {
                LegPlan lp;
                lp.block = legs[i].block;
                lp.from = legs[i].from;
                lp.to = legs[i].to;
                lp.forward = legs[i].forward;
                lp.travel = static_cast<int>(net().blocks()[lp.block].travel_time / d);
                lp.initial = iv(legs[i].entry);
                if (i + 1 < legs.size()) {
                    Minute dw = net().nodes()[lp.to].dwell_min;
                    lp.dwell_after = static_cast<int>((dw + d - 1) / d);
                }
                p.legs.push_back(lp);
            }
            // Delay-capped departures.
            p.counted.assign(p.legs.size(), false);
            if (m_.config.variant == Variant::basic && m_.disruption_start)
                for (std::size_t j = 0; j < p.legs.size(); ++j)
                    p.counted[j] = minute(p.legs[j].initial) >= *m_.disruption_start;

            bool freeze_all = m_.config.variant == Variant::adjusted && !p.affected;
            int n = static_cast<int>(p.legs.size());
            for (auto& lp : p.legs) {
                lp.lo = lp.initial;
                lp.hi = std::numeric_limits<int>::max() / 4;
            }
            int hi = m_.horizon;
            for (int i = n - 1; i >= 0; --i) {
                auto& lp = p.legs[i];
                hi -= lp.travel;
                lp.hi = hi;
                if (p.counted[i]) lp.hi = std::min(lp.hi, lp.initial + m_.beta);
                if (freeze_all || frozen_before_cutoff(lp.initial)) lp.hi = std::min(lp.hi, lp.initial);
                hi = lp.hi - (i > 0 ? p.legs[i - 1].dwell_after : 0);
            }
            int lo = p.origin_arrival;
            for (int i = 0; i < n; ++i) {
                auto& lp = p.legs[i];
                lp.lo = std::max(lp.initial, lo);
                if (freeze_all || frozen_before_cutoff(lp.initial)) lp.lo = lp.initial;
                lo = lp.lo + lp.travel + lp.dwell_after;
            }
            m_.trains.push_back(std::move(p));
        }
    }

    void plan_pairs() {
        const auto& tr = m_.trains;
        for (std::size_t k = 0; k < tr.size(); ++k) {
            for (std::size_t m = k + 1; m < tr.size(); ++m) {
                for (std::size_t i = 0; i < tr[k].legs.size(); ++i) {
                    for (std::size_t j = 0; j < tr[m].legs.size(); ++j) {
                        if (tr[k].legs[i].block != tr[m].legs[j].block) continue;
                        SharedBlock sb;
                        sb.k = k;
                        sb.m = m;
                        sb.leg_k = i;
                        sb.leg_m = j;
                        sb.block = tr[k].legs[i].block;
                        const auto& blk = net().blocks()[sb.block];
                        sb.opposing = tr[k].legs[i].forward != tr[m].legs[j].forward;
                        bool binds = m_.config.headway_scope == HeadwayScope::all_pairs || !sb.opposing ||
                                     blk.tracks == 1;
                        sb.headway = binds ? static_cast<int>(blk.headway / m_.grid.delta()) : 0;
                        if (sb.opposing) {
                            if (blk.tracks == 1) {
                                sb.always_exclusive = true;
                            } else {
                                sb.exclusive_windows =
                                    m_.closures.runs(sb.block, [](int v) { return v == 1; });
                            }
                        }
                        m_.shared.push_back(std::move(sb));
                    }
                }
            }
        }
    }

    void plan_capacity() {
        const auto& nb = net();
        m_.groups_of_node.assign(nb.nodes().size(), {});
        std::set<std::size_t> route_blocks, route_nodes;
        for (const auto& p : m_.trains)
            for (const auto& l : p.legs) {
                route_blocks.insert(l.block);
                route_nodes.insert(l.from);
                route_nodes.insert(l.to);
            }
        if (m_.config.capacity_mode == CapacityMode::per_block) {
            for (auto b : route_blocks) {
                CapacityGroup g;
                g.label = nb.blocks()[b].id;
                g.nodes = {nb.block_from(b), nb.block_to(b)};
                g.cap = nb.blocks()[b].capacity;
                m_.capacity_groups.push_back(std::move(g));
            }
        } else {
            for (auto n : route_nodes) {
                CapacityGroup g;
                g.label = nb.nodes()[n].id;
                g.nodes = {n};
                if (nb.nodes()[n].capacity) {
                    g.cap = *nb.nodes()[n].capacity;
                } else {
                    g.cap = 1;
                    for (auto b : nb.incident(n)) g.cap = std::max(g.cap, nb.blocks()[b].capacity);
                }
                m_.capacity_groups.push_back(std::move(g));
            }
        }
        for (std::size_t gi = 0; gi < m_.capacity_groups.size(); ++gi)
            for (auto n : m_.capacity_groups[gi].nodes) m_.groups_of_node[n].push_back(gi);
    }

    int add_column(Column c) {
        m_.columns.push_back(std::move(c));
        return static_cast<int>(m_.columns.size()) - 1;
    }

    void make_columns() {
        const auto& tr = m_.trains;
        const std::size_t nt = tr.size();
        m_.block_arc.resize(nt);
        m_.wait_arc.resize(nt);
        m_.arrival_col.resize(nt);
        m_.departure_col.resize(nt);
        block_entry_col_.resize(nt);
        block_exit_col_.resize(nt);
        for (std::size_t k = 0; k < nt; ++k) {
            const auto& p = tr[k];
            const auto tid = esc(p.id);
            const std::size_t n = p.legs.size();
            m_.block_arc[k].resize(n);
            m_.wait_arc[k].resize(n);  // no waiting at the destination
            for (std::size_t i = 0; i < n; ++i) {
                const auto& l = p.legs[i];
                const auto bid = esc(net().blocks()[l.block].id);
                for (int t = l.lo; t <= l.hi; ++t) {
                    Column c;
                    c.name = "x:" + tid + ":" + bid + ":" + std::to_string(t) + ":" + std::to_string(t + l.travel);
                    c.kind = ColumnKind::block_arc;
                    c.train = static_cast<int>(k);
                    c.pos = static_cast<int>(i);
                    c.t = t;
                    c.t2 = t + l.travel;
                    m_.block_arc[k][i][t] = add_column(std::move(c));
                }
            }
            for (std::size_t j = 0; j < n; ++j) {
                // Hold at node j between arrival and departure of leg j.
                int from = j == 0 ? p.origin_arrival : p.legs[j - 1].lo + p.legs[j - 1].travel;
                int to = p.legs[j].hi;
                const auto nid = esc(net().nodes()[p.node(j)].id);
                for (int u = from; u < to; ++u) {
                    Column c;
                    c.name = "w:" + tid + ":" + nid + ":" + std::to_string(u) + ":" + std::to_string(u + 1);
                    c.kind = ColumnKind::wait_arc;
                    c.train = static_cast<int>(k);
                    c.pos = static_cast<int>(j);
                    c.t = u;
                    c.t2 = u + 1;
                    m_.wait_arc[k][j][u] = add_column(std::move(c));
                }
            }
            auto aux = [&](ColumnKind kind, const char* prefix, int pos, const std::string& where) {
                Column c;
                c.name = std::string(prefix) + ":" + tid + ":" + esc(where);
                c.kind = kind;
                c.binary = false;
                c.lb = 0;
                c.ub = m_.horizon;
                c.train = static_cast<int>(k);
                c.pos = pos;
                return add_column(std::move(c));
            };
            for (std::size_t i = 0; i < n; ++i) {
                const auto& bid = net().blocks()[p.legs[i].block].id;
                block_entry_col_[k].push_back(aux(ColumnKind::block_entry, "ae", static_cast<int>(i), bid));
                block_exit_col_[k].push_back(aux(ColumnKind::block_exit, "de", static_cast<int>(i), bid));
            }
            for (std::size_t j = 0; j <= n; ++j)
                m_.arrival_col[k].push_back(
                    aux(ColumnKind::arrival, "a", static_cast<int>(j), net().nodes()[p.node(j)].id));
            for (std::size_t j = 0; j <= n; ++j)
                m_.departure_col[k].push_back(
                    aux(ColumnKind::departure, "d", static_cast<int>(j), net().nodes()[p.node(j)].id));
        }
        for (std::size_t s = 0; s < m_.shared.size(); ++s) {
            const auto& sb = m_.shared[s];
            const auto bid = esc(net().blocks()[sb.block].id);
            const auto ki = esc(tr[sb.k].id), mi = esc(tr[sb.m].id);
            PriorityGroup pg;
            pg.shared = s;
            Column c;
            c.kind = ColumnKind::priority;
            c.name = "p:" + ki + ":" + mi + ":" + bid;
            pg.col_km = add_column(c);
            c.name = "p:" + mi + ":" + ki + ":" + bid;
            pg.col_mk = add_column(c);
            m_.priority_groups.push_back(std::move(pg));
        }
    }

    void row(int tag, std::string name, std::vector<Term> terms, Sense sense, std::int64_t rhs) {
        Row r;
        r.tag = tag;
        r.name = std::move(name);
        r.terms = std::move(terms);
        r.sense = sense;
        r.rhs = rhs;
        m_.rows.push_back(std::move(r));
    }

    // Arcs of train k covering interval u: at most one block arc per leg plus one wait arc per node.
    std::vector<int> covering(std::size_t k, int u) const {
        std::vector<int> out;
        const auto& p = m_.trains[k];
        for (std::size_t i = 0; i < p.legs.size(); ++i) {
            const auto& arcs = m_.block_arc[k][i];
            for (int t = std::max(p.legs[i].lo, u - p.legs[i].travel + 1); t <= std::min(p.legs[i].hi, u); ++t) {
                auto it = arcs.find(t);
                if (it != arcs.end()) out.push_back(it->second);
            }
        }
        for (const auto& w : m_.wait_arc[k]) {
            auto it = w.find(u);
            if (it != w.end()) out.push_back(it->second);
        }
        return out;
    }

    std::vector<int> leg_covering(std::size_t k, std::size_t i, int u) const {
        std::vector<int> out;
        const auto& l = m_.trains[k].legs[i];
        for (int t = std::max(l.lo, u - l.travel + 1); t <= std::min(l.hi, u); ++t) {
            auto it = m_.block_arc[k][i].find(t);
            if (it != m_.block_arc[k][i].end()) out.push_back(it->second);
        }
        return out;
    }

    void make_rows() {
        const auto& tr = m_.trains;
        const Minute delta = m_.grid.delta();
        const int Z = m_.horizon;
        m_.structural_tags = {3, 4};

        for (std::size_t k = 0; k < tr.size(); ++k) {
            const auto& p = tr[k];
            const auto& tid = p.id;
            const std::size_t n = p.legs.size();

            // One arc per interval.
            for (int u = 0; u < Z; ++u) {
                auto cov = covering(k, u);
                if (cov.size() < 2) continue;
                std::vector<Term> terms;
                for (int c : cov) terms.push_back({c, 1});
                row(2, "occupancy:" + tid + ":" + std::to_string(u), std::move(terms), Sense::le, 1);
            }

            // Flow balance on (node, interval); the destination absorbs.
            for (std::size_t j = 0; j < n; ++j) {
                for (int u = 0; u <= Z; ++u) {
                    std::vector<Term> terms;
                    auto put = [&](const std::map<int, int>& arcs, int key, std::int64_t coef) {
                        auto it = arcs.find(key);
                        if (it != arcs.end()) terms.push_back({it->second, coef});
                    };
                    put(m_.block_arc[k][j], u, 1);
                    put(m_.wait_arc[k][j], u, 1);
                    if (j > 0) put(m_.block_arc[k][j - 1], u - p.legs[j - 1].travel, -1);
                    put(m_.wait_arc[k][j], u - 1, -1);
                    std::int64_t rhs = (j == 0 && u == p.origin_arrival) ? 1 : 0;
                    if (terms.empty() && rhs == 0) continue;
                    row(5, "flow:" + tid + ":" + std::to_string(j) + ":" + std::to_string(u), std::move(terms),
                        Sense::eq, rhs);
                }
            }
            {
                std::vector<Term> terms;
                for (auto [t, c] : m_.block_arc[k][n - 1]) terms.push_back({c, 1});
                row(5, "sink:" + tid, std::move(terms), Sense::eq, 1);
            }

            // Closure extension: no arc inside a fully closed window.
            for (std::size_t i = 0; i < n; ++i) {
                const auto& l = p.legs[i];
                for (auto [t, c] : m_.block_arc[k][i])
                    for (auto [s0, s1] : m_.blocked[l.block])
                        if (overlaps(t, t + l.travel, s0, s1)) {
                            row(6, "closed:" + tid + ":" + std::to_string(i) + ":" + std::to_string(t), {{c, 1}},
                                Sense::le, 0);
                            break;
                        }
            }

            // Fixed traversal time.
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<Term> terms;
                for (auto [t, c] : m_.block_arc[k][i]) terms.push_back({c, p.legs[i].travel});
                row(7, "travel:" + tid + ":" + std::to_string(i), std::move(terms), Sense::eq, p.legs[i].travel);
            }

            // Block entry/exit.
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<Term> in{{block_entry_col_[k][i], 1}}, out{{block_exit_col_[k][i], 1}};
                for (auto [t, c] : m_.block_arc[k][i]) {
                    if (t != 0) in.push_back({c, -t});
                    out.push_back({c, -(t + p.legs[i].travel)});
                }
                row(8, "entry:" + tid + ":" + std::to_string(i), std::move(in), Sense::eq, 0);
                row(9, "exit:" + tid + ":" + std::to_string(i), std::move(out), Sense::eq, 0);
            }
            // Node arrival.
            row(11, "origin:" + tid, {{m_.arrival_col[k][0], 1}}, Sense::eq, p.origin_arrival);
            for (std::size_t j = 1; j <= n; ++j) {
                std::vector<Term> terms{{m_.arrival_col[k][j], 1}};
                for (auto [t, c] : m_.block_arc[k][j - 1]) terms.push_back({c, -(t + p.legs[j - 1].travel)});
                row(10, "arrive:" + tid + ":" + std::to_string(j), std::move(terms), Sense::eq, 0);
            }
            // Departure = arrival + time held.
            for (std::size_t j = 0; j <= n; ++j) {
                std::vector<Term> terms{{m_.departure_col[k][j], 1}, {m_.arrival_col[k][j], -1}};
                if (j < n)
                    for (auto [u, c] : m_.wait_arc[k][j]) terms.push_back({c, -1});
                row(12, "depart:" + tid + ":" + std::to_string(j), std::move(terms), Sense::eq, 0);
            }

            // Dwell at intermediate nodes.
            for (std::size_t j = 1; j < n; ++j) {
                int dw = p.legs[j - 1].dwell_after;
                if (dw == 0) continue;
                row(18, "dwell:" + tid + ":" + std::to_string(j),
                    {{m_.departure_col[k][j], 1}, {m_.arrival_col[k][j], -1}}, Sense::ge, dw);
            }

            // Delay cap.
            if (m_.config.variant == Variant::basic && p.capped()) {
                if (m_.config.delay_cap == DelayCap::train_sum) {
                    std::vector<Term> terms;
                    std::int64_t rhs = m_.beta;
                    for (std::size_t j = 0; j < n; ++j)
                        if (p.counted[j]) {
                            terms.push_back({m_.departure_col[k][j], 1});
                            rhs += p.initial_departure(j);
                        }
                    row(20, "delay:" + tid, std::move(terms), Sense::le, rhs);
                } else {
                    for (std::size_t j = 0; j < n; ++j)
                        if (p.counted[j])
                            row(20, "delay:" + tid + ":" + std::to_string(j), {{m_.departure_col[k][j], 1}}, Sense::le,
                                p.initial_departure(j) + m_.beta);
                }
            }

            bool freeze_train = m_.config.variant == Variant::adjusted && !p.affected;
            auto before_cutoff = [&](int u) {
                if (m_.config.variant != Variant::basic) return false;
                if (!m_.freeze_cutoff) return true;
                return minute(u) < *m_.freeze_cutoff;
            };
            // Departures pinned.
            for (std::size_t j = 0; j <= n; ++j) {
                int dbar = p.initial_departure(j);
                if (freeze_train)
                    row(29, "keep-dep:" + tid + ":" + std::to_string(j), {{m_.departure_col[k][j], 1}}, Sense::eq,
                        dbar);
                else if (before_cutoff(dbar))
                    row(21, "keep-dep:" + tid + ":" + std::to_string(j), {{m_.departure_col[k][j], 1}}, Sense::eq,
                        dbar);
            }
            // Arcs pinned to the initial plan.
            auto initially_held = [&](std::size_t j, int u) {
                int a = p.initial_arrival_at(j);
                return u >= a && u < p.initial_departure(j);
            };
            for (std::size_t i = 0; i < n; ++i)
                for (auto [t, c] : m_.block_arc[k][i]) {
                    int xbar = t == p.legs[i].initial ? 1 : 0;
                    if (freeze_train)
                        row(30, "keep-arc:" + m_.columns[c].name, {{c, 1}}, Sense::eq, xbar);
                    else if (before_cutoff(t) && before_cutoff(t + p.legs[i].travel))
                        row(22, "keep-arc:" + m_.columns[c].name, {{c, 1}}, Sense::eq, xbar);
                }
            for (std::size_t j = 0; j < n; ++j)
                for (auto [u, c] : m_.wait_arc[k][j]) {
                    int xbar = initially_held(j, u) ? 1 : 0;
                    if (freeze_train)
                        row(30, "keep-arc:" + m_.columns[c].name, {{c, 1}}, Sense::eq, xbar);
                    else if (before_cutoff(u) && before_cutoff(u + 1))
                        row(22, "keep-arc:" + m_.columns[c].name, {{c, 1}}, Sense::eq, xbar);
                }

            // No early running.
            for (std::size_t j = 0; j <= n; ++j) {
                row(23, "not-early-dep:" + tid + ":" + std::to_string(j), {{m_.departure_col[k][j], 1}}, Sense::ge,
                    p.initial_departure(j));
                row(24, "not-early-arr:" + tid + ":" + std::to_string(j), {{m_.arrival_col[k][j], 1}}, Sense::ge,
                    p.initial_arrival_at(j));
            }

            m_.objective.push_back({m_.arrival_col[k][n], delta});
            m_.objective_constant -= delta * p.origin_arrival;
        }

        // Opposing occupation.
        for (const auto& sb : m_.shared) {
            if (!sb.opposing) continue;
            const auto& blk = net().blocks()[sb.block];
            std::vector<std::pair<int, int>> spans;
            if (sb.always_exclusive) spans.emplace_back(0, Z);
            else spans = sb.exclusive_windows;
            for (auto [s0, s1] : spans) {
                for (int u = s0; u < s1; ++u) {
                    auto a = leg_covering(sb.k, sb.leg_k, u);
                    auto b = leg_covering(sb.m, sb.leg_m, u);
                    if (a.empty() || b.empty()) continue;
                    std::int64_t rhs = 1 + (blk.tracks - 1) - m_.closures.at(sb.block, u);
                    std::vector<Term> terms;
                    for (int c : a) terms.push_back({c, 1});
                    for (int c : b) terms.push_back({c, 1});
                    row(6,
                        "opposing:" + tr[sb.k].id + ":" + tr[sb.m].id + ":" + blk.id + ":" + std::to_string(u),
                        std::move(terms), Sense::le, rhs);
                }
            }
        }

        // Priority and headway.
        const std::int64_t M = m_.big_m;
        for (auto& pg : m_.priority_groups) {
            const auto& sb = m_.shared[pg.shared];
            const std::string nm = tr[sb.k].id + ":" + tr[sb.m].id + ":" + net().blocks()[sb.block].id;
            int ak = block_entry_col_[sb.k][sb.leg_k], am = block_entry_col_[sb.m][sb.leg_m];
            int dk = block_exit_col_[sb.k][sb.leg_k], dm = block_exit_col_[sb.m][sb.leg_m];
            const std::int64_t h = sb.headway;
            auto mark = [&] { pg.rows.push_back(static_cast<int>(m_.rows.size()) - 1); };
            row(13, "order:" + nm, {{pg.col_km, 1}, {pg.col_mk, 1}}, Sense::eq, 1);
            mark();
            row(14, "headway-in:" + nm, {{ak, 1}, {am, -1}, {pg.col_km, M}}, Sense::le, M - h);
            mark();
            row(15, "headway-in-rev:" + nm, {{am, 1}, {ak, -1}, {pg.col_mk, M}}, Sense::le, M - h);
            mark();
            row(16, "headway-out:" + nm, {{dk, 1}, {dm, -1}, {pg.col_km, M}}, Sense::le, M - h);
            mark();
            row(17, "headway-out-rev:" + nm, {{dm, 1}, {dk, -1}, {pg.col_mk, M}}, Sense::le, M - h);
            mark();
        }

        // Holding capacity.
        for (const auto& g : m_.capacity_groups) {
            for (int u = 0; u < Z; ++u) {
                std::vector<Term> terms;
                for (std::size_t k = 0; k < tr.size(); ++k)
                    for (std::size_t j = 0; j < tr[k].legs.size(); ++j)
                        if (std::find(g.nodes.begin(), g.nodes.end(), tr[k].node(j)) != g.nodes.end()) {
                            auto it = m_.wait_arc[k][j].find(u);
                            if (it != m_.wait_arc[k][j].end()) terms.push_back({it->second, 1});
                        }
                if (terms.empty()) continue;
                row(19, "capacity:" + g.label + ":" + std::to_string(u), std::move(terms), Sense::le, g.cap);
            }
        }
    }

    void finish() {
        // Stable order by tag; priority groups keep pointing at their rows.
        std::vector<int> order(m_.rows.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return m_.rows[a].tag < m_.rows[b].tag; });
        std::vector<int> where(order.size());
        std::vector<Row> sorted;
        sorted.reserve(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            where[order[i]] = static_cast<int>(i);
            sorted.push_back(std::move(m_.rows[order[i]]));
        }
        m_.rows = std::move(sorted);
        for (auto& pg : m_.priority_groups)
            for (auto& r : pg.rows) r = where[r];

        m_.defining_row.assign(m_.columns.size(), -1);
        for (std::size_t r = 0; r < m_.rows.size(); ++r) {
            const auto& row = m_.rows[r];
            if (row.tag < 8 || row.tag > 12 || row.sense != Sense::eq) continue;
            const auto& head = row.terms.front();
            if (!m_.columns[head.col].binary) m_.defining_row[head.col] = static_cast<int>(r);
        }
    }

    RescheduleModel m_;
    std::vector<std::vector<int>> block_entry_col_, block_exit_col_;
};

}  // namespace detail

inline RescheduleModel build(const Instance& inst, const DisruptionScenario& s, const ModelConfig& cfg) {
    return detail::Builder(inst, s, cfg).build();
}

inline RescheduleModel build_basic(const Instance& inst, const DisruptionScenario& s, ModelConfig cfg) {
    cfg.variant = Variant::basic;
    return build(inst, s, cfg);
}

inline RescheduleModel build_adjusted(const Instance& inst, const DisruptionScenario& s, ModelConfig cfg) {
    cfg.variant = Variant::adjusted;
    return build(inst, s, cfg);
}

// ---------------------------------------------------------------------------
// Assignment evaluation against the linear rows.

inline bool row_holds(const Row& r, const std::vector<std::int64_t>& x) {
    std::int64_t lhs = 0;
    for (const auto& t : r.terms) lhs += t.coef * x[t.col];
    switch (r.sense) {
        case Sense::le: return lhs <= r.rhs;
        case Sense::ge: return lhs >= r.rhs;
        case Sense::eq: return lhs == r.rhs;
    }
    return false;
}

/// Fill auxiliary columns from their defining rows (column order respects dependencies).
inline void complete_aux(const RescheduleModel& m, std::vector<std::int64_t>& x) {
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
        int r = m.defining_row[c];
        if (r < 0) continue;
        const auto& row = m.rows[r];
        std::int64_t acc = row.rhs;
        std::int64_t self = 0;
        for (const auto& t : row.terms) {
            if (t.col == static_cast<int>(c)) self = t.coef;
            else acc -= t.coef * x[t.col];
        }
        x[c] = acc / self;
    }
}

inline std::int64_t objective_value(const RescheduleModel& m, const std::vector<std::int64_t>& x) {
    std::int64_t v = m.objective_constant;
    for (const auto& t : m.objective) v += t.coef * x[t.col];
    return v;
}

}  // namespace railsched::model

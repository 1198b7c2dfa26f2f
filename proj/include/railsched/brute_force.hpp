#pragma once

// Exhaustive reference solver over the generated rows of a small model.
// It enumerates column assignments directly and knows nothing about the
// branch-and-bound search.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "railsched/model.hpp"
#include "railsched/schedule.hpp"

namespace railsched::solver {

struct BruteForceLimits {
    std::size_t max_trains = 3;
    std::size_t max_blocks = 5;
    int max_intervals = 16;
};

/// Schedule decoded from a full column assignment.
inline ScheduleSolution assignment_to_schedule(const model::RescheduleModel& m, const std::vector<std::int64_t>& x) {
    const auto& net = m.instance.network;
    const auto& g = m.grid;
    ScheduleSolution out;
    out.has_schedule = true;
    struct Span {
        int from, to;
    };
    for (std::size_t k = 0; k < m.trains.size(); ++k) {
        const auto& p = m.trains[k];
        std::size_t n = p.legs.size();
        for (std::size_t j = 0; j <= n; ++j) {
            const auto& nid = net.nodes()[p.node(j)].id;
            int a = static_cast<int>(x[m.arrival_col[k][j]]);
            int d = static_cast<int>(x[m.departure_col[k][j]]);
            out.node_times.push_back({p.id, nid, g.to_minute(a), g.to_minute(d)});
            if (j < n) {
                std::vector<Span> held;
                for (auto [u, c] : m.wait_arc[k][j])
                    if (x[c]) {
                        if (!held.empty() && held.back().to == u) held.back().to = u + 1;
                        else held.push_back({u, u + 1});
                    }
                for (auto h : held)
                    out.occupations.push_back(
                        {p.id, Occupation::Kind::wait, nid, g.to_minute(h.from), g.to_minute(h.to), true});
                for (auto [t, c] : m.block_arc[k][j])
                    if (x[c])
                        out.occupations.push_back({p.id, Occupation::Kind::block, net.blocks()[p.legs[j].block].id,
                                                   g.to_minute(t), g.to_minute(t + p.legs[j].travel), p.legs[j].forward});
            }
        }
    }
    for (const auto& pg : m.priority_groups) {
        const auto& sb = m.shared[pg.shared];
        const auto& bid = net.blocks()[sb.block].id;
        if (x[pg.col_km]) out.priorities.push_back({m.trains[sb.k].id, m.trains[sb.m].id, bid});
        else out.priorities.push_back({m.trains[sb.m].id, m.trains[sb.k].id, bid});
    }
    out.objective = model::objective_value(m, x);
    out.total_delay = out.objective - m.baseline();
    out.affected = m.affected;
    return out;
}

/// Column assignment encoding a schedule, or nullopt when a traversal has no column.
inline std::optional<std::vector<std::int64_t>> schedule_to_assignment(const model::RescheduleModel& m,
                                                                     const ScheduleSolution& s) {
    const auto& net = m.instance.network;
    std::vector<std::int64_t> x(m.columns.size(), 0);
    for (std::size_t k = 0; k < m.trains.size(); ++k) {
        const auto& p = m.trains[k];
        std::vector<int> entries;
        for (const auto& o : s.of_train(p.id))
            if (o.kind == Occupation::Kind::block) entries.push_back(m.grid.to_interval(o.entry));
        std::sort(entries.begin(), entries.end());
        if (entries.size() != p.legs.size()) return std::nullopt;
        int at = p.origin_arrival;
        for (std::size_t j = 0; j < p.legs.size(); ++j) {
            for (int u = at; u < entries[j]; ++u) {
                auto it = m.wait_arc[k][j].find(u);
                if (it == m.wait_arc[k][j].end()) return std::nullopt;
                x[it->second] = 1;
            }
            auto it = m.block_arc[k][j].find(entries[j]);
            if (it == m.block_arc[k][j].end()) return std::nullopt;
            x[it->second] = 1;
            at = entries[j] + p.legs[j].travel;
        }
    }
    for (const auto& pg : m.priority_groups) {
        const auto& sb = m.shared[pg.shared];
        const auto& bid = net.blocks()[sb.block].id;
        bool km = std::any_of(s.priorities.begin(), s.priorities.end(), [&](const Priority& q) {
            return q.block == bid && q.first == m.trains[sb.k].id && q.second == m.trains[sb.m].id;
        });
        x[pg.col_km] = km ? 1 : 0;
        x[pg.col_mk] = km ? 0 : 1;
    }
    model::complete_aux(m, x);
    return x;
}

namespace detail {

class Exhaustive {
public:
    explicit Exhaustive(const model::RescheduleModel& m) : m_(m), x_(m.columns.size(), 0) {
        const std::size_t nt = m.trains.size();
        // Rows are checked once every train they touch is assigned.
        std::vector<std::set<int>> row_trains(m.rows.size());
        std::vector<bool> in_group(m.rows.size(), false);
        for (const auto& pg : m.priority_groups)
            for (int r : pg.rows) in_group[r] = true;
        own_.resize(nt);
        joint_.resize(nt);
        for (std::size_t r = 0; r < m.rows.size(); ++r) {
            int top = -1;
            for (const auto& t : m.rows[r].terms) {
                int tr = m.columns[t.col].train;
                if (tr >= 0) {
                    row_trains[r].insert(tr);
                    top = std::max(top, tr);
                }
            }
            if (in_group[r]) continue;
            if (top < 0) {
                constant_.push_back(static_cast<int>(r));
            } else if (row_trains[r].size() == 1) {
                own_[top].push_back(static_cast<int>(r));
            } else {
                joint_[top].push_back(static_cast<int>(r));
            }
        }
        groups_.resize(nt);
        for (std::size_t i = 0; i < m.priority_groups.size(); ++i) {
            const auto& sb = m.shared[m.priority_groups[i].shared];
            groups_[std::max(sb.k, sb.m)].push_back(i);
        }
        trajectories_.resize(nt);
        for (std::size_t k = 0; k < nt; ++k) enumerate(k);
    }

    std::optional<std::pair<std::int64_t, std::vector<std::int64_t>>> run() {
        for (int r : constant_)
            if (!model::row_holds(m_.rows[r], x_)) return std::nullopt;
        descend(0);
        if (!best_) return std::nullopt;
        return std::make_pair(*best_, best_x_);
    }

private:
    // Each trajectory lists (column, value) for every column of one train.
    using Trajectory = std::vector<std::pair<int, std::int64_t>>;

    void enumerate(std::size_t k) {
        const auto& p = m_.trains[k];
        const std::size_t n = p.legs.size();
        std::vector<int> cols;
        for (std::size_t c = 0; c < m_.columns.size(); ++c)
            if (m_.columns[c].train == static_cast<int>(k)) cols.push_back(static_cast<int>(c));
        std::vector<int> pick(n);
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int earliest) {
            if (i == n) {
                for (int c : cols) x_[c] = 0;
                int at = p.origin_arrival;
                for (std::size_t j = 0; j < n; ++j) {
                    for (int u = at; u < pick[j]; ++u) {
                        auto it = m_.wait_arc[k][j].find(u);
                        if (it == m_.wait_arc[k][j].end()) return;
                        x_[it->second] = 1;
                    }
                    x_[m_.block_arc[k][j].at(pick[j])] = 1;
                    at = pick[j] + p.legs[j].travel;
                }
                model::complete_aux(m_, x_);
                for (int r : own_[k])
                    if (!model::row_holds(m_.rows[r], x_)) return;
                Trajectory tj;
                for (int c : cols) tj.emplace_back(c, x_[c]);
                trajectories_[k].push_back(std::move(tj));
                return;
            }
            for (auto [t, c] : m_.block_arc[k][i]) {
                if (t < earliest) continue;
                pick[i] = t;
                rec(i + 1, t + p.legs[i].travel);
            }
        };
        rec(0, p.origin_arrival);
        for (int c : cols) x_[c] = 0;
    }

    bool groups_hold(std::size_t k) {
        for (auto gi : groups_[k]) {
            const auto& pg = m_.priority_groups[gi];
            bool ok = false;
            for (int option = 0; option < 2 && !ok; ++option) {
                x_[pg.col_km] = option == 0 ? 1 : 0;
                x_[pg.col_mk] = option == 0 ? 0 : 1;
                ok = std::all_of(pg.rows.begin(), pg.rows.end(),
                                 [&](int r) { return model::row_holds(m_.rows[r], x_); });
            }
            if (!ok) return false;
        }
        return true;
    }

    void descend(std::size_t k) {
        if (k == m_.trains.size()) {
            auto v = model::objective_value(m_, x_);
            if (!best_ || v < *best_) {
                best_ = v;
                best_x_ = x_;
            }
            return;
        }
        for (const auto& tj : trajectories_[k]) {
            for (auto [c, v] : tj) x_[c] = v;
            if (!groups_hold(k)) continue;
            bool ok = std::all_of(joint_[k].begin(), joint_[k].end(),
                                  [&](int r) { return model::row_holds(m_.rows[r], x_); });
            if (ok) descend(k + 1);
        }
    }

    const model::RescheduleModel& m_;
    std::vector<std::int64_t> x_;
    std::vector<int> constant_;
    std::vector<std::vector<int>> own_, joint_;
    std::vector<std::vector<std::size_t>> groups_;
    std::vector<std::vector<Trajectory>> trajectories_;
    std::optional<std::int64_t> best_;
    std::vector<std::int64_t> best_x_;
};

}  // namespace detail

inline ScheduleSolution brute_force(const model::RescheduleModel& m, const BruteForceLimits& lim = {}) {
    std::set<std::size_t> blocks;
    for (const auto& p : m.trains)
        for (const auto& l : p.legs) blocks.insert(l.block);
    if (m.trains.size() > lim.max_trains) throw Error("brute force: too many trains");
    if (blocks.size() > lim.max_blocks) throw Error("brute force: too many blocks");
    if (m.horizon > lim.max_intervals) throw Error("brute force: too many intervals");
    auto r = detail::Exhaustive(m).run();
    ScheduleSolution out;
    if (!r) {
        out.status = SolveStatus::infeasible;
        out.affected = m.affected;
        return out;
    }
    out = assignment_to_schedule(m, r->second);
    out.status = SolveStatus::optimal;
    return out;
}

}  // namespace railsched::solver

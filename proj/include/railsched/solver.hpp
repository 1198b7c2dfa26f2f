#pragma once

// Exact branch-and-bound over block entry times.
//
// A search node fixes, per train, a prefix of its legs. Branching is
// chronological: the train whose next leg can start earliest is either
// sent at that time (left) or forbidden from it (right). The bound is the
// sum of earliest destination arrivals given everything fixed so far.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "railsched/model.hpp"
#include "railsched/schedule.hpp"

namespace railsched::solver {

using model::RescheduleModel;

struct SolveOptions {
    double budget_seconds = 300;
    int threads = 1;
    std::function<void(const ScheduleSolution&)> on_incumbent;
    std::function<void(const std::string&)> log;
};

namespace detail {

struct LegInfo {
    int train = 0, index = 0;
    std::size_t block = 0;
    int travel = 0, lo = 0, hi = 0, dwell_after = 0, initial = 0;
    bool counted = false;
    int hi_tag = 4;
};

struct Link {
    int other = 0;  // global leg index
    int headway = 0;
    bool always_exclusive = false;
    const std::vector<std::pair<int, int>>* windows = nullptr;
};

struct State {
    std::vector<int> entry;  // per global leg, -1 when open
    std::vector<int> floor;  // per global leg, lowest admissible entry
    std::vector<int> next;   // per train, first open leg
    std::vector<int> spent;  // per train, delay budget used (intervals)
};

class Search {
public:
    Search(const RescheduleModel& m, const SolveOptions& opt) : m_(m), opt_(opt) {
        const auto& tr = m.trains;
        nt_ = static_cast<int>(tr.size());
        for (int k = 0; k < nt_; ++k) {
            offset_.push_back(static_cast<int>(legs_.size()));
            for (std::size_t i = 0; i < tr[k].legs.size(); ++i) {
                const auto& l = tr[k].legs[i];
                LegInfo li;
                li.train = k;
                li.index = static_cast<int>(i);
                li.block = l.block;
                li.travel = l.travel;
                li.lo = l.lo;
                li.hi = l.hi;
                li.dwell_after = l.dwell_after;
                li.initial = l.initial;
                li.counted = tr[k].counted[i];
                if (m.config.variant == model::Variant::adjusted && !tr[k].affected) li.hi_tag = 29;
                else if (l.hi == l.initial && m.config.variant == model::Variant::basic &&
                         (!m.freeze_cutoff || m.grid.to_minute(l.initial) < *m.freeze_cutoff))
                    li.hi_tag = 21;
                else if (li.counted && l.hi == l.initial + m.beta) li.hi_tag = 20;
                legs_.push_back(li);
            }
        }
        offset_.push_back(static_cast<int>(legs_.size()));
        rest_.assign(legs_.size(), 0);
        for (int k = 0; k < nt_; ++k)
            for (int g = offset_[k + 1] - 1, acc = 0; g >= offset_[k]; --g) {
                acc += legs_[g].travel + (g + 1 < offset_[k + 1] ? legs_[g].dwell_after : 0);
                rest_[g] = acc;
            }
        {
            std::map<std::pair<std::size_t, int>, std::vector<int>> by_track;
            for (int k = 0; k < nt_; ++k)
                for (std::size_t i = 0; i < tr[k].legs.size(); ++i) {
                    const auto& l = tr[k].legs[i];
                    bool single = m.instance.network.blocks()[l.block].tracks == 1;
                    by_track[{l.block, single ? 2 : (l.forward ? 1 : 0)}].push_back(offset_[k] + static_cast<int>(i));
                }
            for (auto& [key, v] : by_track) tracks_.push_back(std::move(v));
        }
        links_.resize(legs_.size());
        for (const auto& sb : m.shared) {
            int a = offset_[sb.k] + static_cast<int>(sb.leg_k);
            int b = offset_[sb.m] + static_cast<int>(sb.leg_m);
            Link l;
            l.headway = sb.headway;
            l.always_exclusive = sb.always_exclusive;
            l.windows = sb.exclusive_windows.empty() ? nullptr : &sb.exclusive_windows;
            l.other = b;
            links_[a].push_back(l);
            l.other = a;
            links_[b].push_back(l);
        }
        // Per capacity group, the (train, node position) pairs that hold there.
        holders_.resize(m.capacity_groups.size());
        for (std::size_t g = 0; g < m.capacity_groups.size(); ++g) {
            const auto& nodes = m.capacity_groups[g].nodes;
            for (int k = 0; k < nt_; ++k)
                for (std::size_t j = 0; j < tr[k].legs.size(); ++j)
                    if (std::find(nodes.begin(), nodes.end(), tr[k].node(j)) != nodes.end())
                        holders_[g].emplace_back(k, static_cast<int>(j));
        }
        best_key_.store(std::numeric_limits<std::int64_t>::max());
    }

    ScheduleSolution run() {
        auto t0 = std::chrono::steady_clock::now();
        deadline_ = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(opt_.budget_seconds));
        State root;
        root.entry.assign(legs_.size(), -1);
        root.floor.resize(legs_.size());
        for (std::size_t g = 0; g < legs_.size(); ++g) root.floor[g] = legs_[g].lo;
        root.next.assign(nt_, 0);
        root.spent.assign(nt_, 0);

        std::set<int> cert;
        auto root_lb = lower_bound(root, cert);
        if (root_lb) log("root bound " + std::to_string(to_minutes(*root_lb)));

        if (root_lb) {
            int threads = std::max(1, opt_.threads);
            if (threads == 1) {
                explore(root, 0, cert);
            } else {
                int depth = 1;
                while ((1 << depth) < threads * 16 && depth < 12) ++depth;
                std::vector<State> tasks;
                std::set<int> gen_cert;
                split(root, depth, tasks, gen_cert);
                cert.insert(gen_cert.begin(), gen_cert.end());
                std::atomic<std::size_t> cursor{0};
                std::mutex cert_mu;
                std::vector<std::thread> pool;
                for (int w = 0; w < threads; ++w) {
                    pool.emplace_back([&] {
                        std::set<int> local;
                        for (;;) {
                            std::size_t t = cursor.fetch_add(1);
                            if (t >= tasks.size() || stop_.load()) break;
                            explore(tasks[t], static_cast<int>(t), local);
                        }
                        std::lock_guard<std::mutex> lk(cert_mu);
                        cert.insert(local.begin(), local.end());
                    });
                }
                for (auto& th : pool) th.join();
            }
        }

        ScheduleSolution out;
        if (have_best_) {
            out = to_solution(best_state_);
            out.status = stop_.load() ? SolveStatus::timeout : SolveStatus::optimal;
            if (stop_.load() && root_lb) out.bound = to_minutes(*root_lb);
        } else {
            out.status = stop_.load() ? SolveStatus::timeout : SolveStatus::infeasible;
            if (out.status == SolveStatus::infeasible) out.certificate = cert;
            if (stop_.load() && root_lb) out.bound = to_minutes(*root_lb);
        }
        out.affected = m_.affected;
        out.nodes_explored = nodes_.load();
        out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        log("finished: " + status_name(out.status) + " after " + std::to_string(out.nodes_explored) + " nodes");
        return out;
    }

private:
    static constexpr int task_bits = 20;

    void log(const std::string& s) const {
        if (opt_.log) opt_.log(s);
    }

    // Objective in minutes from interval arrivals.
    Minute to_minutes(std::int64_t arrival_sum) const { return m_.grid.delta() * arrival_sum; }

    int leg(int k, int i) const { return offset_[k] + i; }
    int legs_of(int k) const { return offset_[k + 1] - offset_[k]; }

    int arrival_at(const State& s, int k, int j) const {
        if (j == 0) return m_.trains[k].origin_arrival;
        int g = leg(k, j - 1);
        return s.entry[g] + legs_[g].travel;
    }

    int ready(const State& s, int k) const {
        int i = s.next[k];
        if (i == 0) return m_.trains[k].origin_arrival;
        int g = leg(k, i - 1);
        return s.entry[g] + legs_[g].travel + legs_[g].dwell_after;
    }

    static bool overlap(int a0, int a1, int b0, int b1) { return a0 < b1 && b0 < a1; }

    // Conflict of leg g entering at v with legs already fixed, or with closures.
    bool blocked(const State& s, int g, int v, std::set<int>* why) const {
        const auto& L = legs_[g];
        for (auto [c0, c1] : m_.blocked[L.block])
            if (overlap(v, v + L.travel, c0, c1)) {
                if (why) why->insert(6);
                return true;
            }
        for (const auto& lk : links_[g]) {
            int e = s.entry[lk.other];
            if (e < 0) continue;
            if (std::abs(v - e) < lk.headway) {
                if (why) why->insert(14);
                return true;
            }
            int t = legs_[lk.other].travel;
            if (lk.always_exclusive && overlap(v, v + L.travel, e, e + t)) {
                if (why) why->insert(6);
                return true;
            }
            if (lk.windows) {
                int a = std::max(v, e), b = std::min(v + L.travel, e + t);
                if (a < b)
                    for (auto [w0, w1] : *lk.windows)
                        if (overlap(a, b, w0, w1)) {
                            if (why) why->insert(6);
                            return true;
                        }
            }
        }
        return false;
    }

    // Holding [from, to) at node position j of train k stays within every capacity group.
    bool capacity_ok(const State& s, int k, int j, int from, int to) const {
        if (to <= from) return true;
        std::size_t node = m_.trains[k].node(j);
        for (auto gi : m_.groups_of_node[node]) {
            std::vector<int> load(to - from, 1);
            for (auto [mk, mj] : holders_[gi]) {
                if (mk == k) continue;
                if (mj > s.next[mk]) continue;
                int a = arrival_at(s, mk, mj);
                int d;
                if (mj < s.next[mk]) {
                    d = s.entry[leg(mk, mj)];
                } else {
                    int g = leg(mk, mj);
                    d = std::max({ready(s, mk), s.floor[g], legs_[g].lo});
                }
                for (int u = std::max(a, from); u < std::min(d, to); ++u) ++load[u - from];
            }
            int cap = m_.capacity_groups[gi].cap;
            for (int c : load)
                if (c > cap) return false;
        }
        return true;
    }

    // Earliest admissible entry for train k's next leg, or nullopt if none exists in this subtree.
    std::optional<int> earliest(const State& s, int k, std::set<int>& why) const {
        int i = s.next[k];
        int g = leg(k, i);
        const auto& L = legs_[g];
        int arr = arrival_at(s, k, i);
        int v = std::max({ready(s, k), L.lo, s.floor[g]});
        if (v > ready(s, k) && L.lo > ready(s, k)) why.insert(23);
        else if (i > 0 && L.dwell_after > 0) why.insert(18);
        for (; v <= L.hi; ++v) {
            if (blocked(s, g, v, &why)) continue;
            if (L.counted && m_.config.delay_cap == model::DelayCap::train_sum &&
                s.spent[k] + (v - L.initial) > m_.beta) {
                why.insert(20);
                return std::nullopt;
            }
            if (!capacity_ok(s, k, i, arr, v)) {
                why.insert(19);
                return std::nullopt;
            }
            return v;
        }
        why.insert(L.hi_tag);
        why.insert(5);
        return std::nullopt;
    }

    // Sum of earliest destination arrivals (intervals, relative to origins),
    // plus the unavoidable delay of pairwise conflicts between open legs.
    std::optional<std::int64_t> lower_bound(const State& s, std::set<int>& why) const {
        std::int64_t total = 0;
        std::vector<int> early(legs_.size(), -1);
        std::vector<int> arrive(nt_, 0);
        for (int k = 0; k < nt_; ++k) {
            int n = legs_of(k);
            int i = s.next[k];
            int t = 0;
            if (i == n) {
                t = arrival_at(s, k, n);
            } else {
                int r = ready(s, k);
                int spent = s.spent[k];
                for (; i < n; ++i) {
                    int g = leg(k, i);
                    const auto& L = legs_[g];
                    int v = std::max({r, L.lo, s.floor[g]});
                    while (v <= L.hi && blocked(s, g, v, &why)) ++v;
                    if (v > L.hi) {
                        why.insert(L.hi_tag);
                        why.insert(5);
                        return std::nullopt;
                    }
                    early[g] = v;
                    if (L.counted) spent += v - L.initial;
                    r = v + L.travel + L.dwell_after;
                    t = v + L.travel;
                }
                if (spent > m_.beta && m_.config.delay_cap == model::DelayCap::train_sum) {
                    why.insert(20);
                    return std::nullopt;
                }
            }
            arrive[k] = t;
            total += t - m_.trains[k].origin_arrival;
        }
        return total + conflict_delay(early, arrive);
    }

    // Delay of train k's arrival when leg g enters `shift` intervals after its earliest time.
    int pushed(const std::vector<int>& early, const std::vector<int>& arrive, int g, int shift) const {
        if (shift <= 0) return 0;
        int slack = arrive[legs_[g].train] - (early[g] + rest_[g]);
        return std::max(0, shift - slack);
    }

    int separation(int a, const Link& lk) const {
        return std::max(lk.headway, lk.always_exclusive ? legs_[a].travel : 0);
    }

    const Link* link(int a, int b) const {
        for (const auto& lk : links_[a])
            if (lk.other == b) return &lk;
        return nullptr;
    }

    // Lower bound on the summed arrival increase of trains queueing for one
    // track: any order of entries is no earlier, slot by slot, than the
    // release-date order, and sorted slots against sorted slack deadlines
    // minimise the total overrun.
    std::int64_t queue_delay(const std::vector<int>& run, const std::vector<int>& early,
                             const std::vector<int>& arrive, int sep) const {
        std::vector<int> slots, due;
        for (int g : run) {
            slots.push_back(early[g]);
            due.push_back(arrive[legs_[g].train] - rest_[g]);
        }
        std::sort(slots.begin(), slots.end());
        std::sort(due.begin(), due.end());
        std::int64_t w = 0;
        for (std::size_t j = 0; j < slots.size(); ++j) {
            if (j) slots[j] = std::max(slots[j], slots[j - 1] + sep);
            w += std::max(0, slots[j] - due[j]);
        }
        return w;
    }

    // Greedy packing of conflict groups over disjoint trains.
    std::int64_t conflict_delay(const std::vector<int>& early, const std::vector<int>& arrive) const {
        struct Group {
            std::int64_t weight;
            std::vector<int> trains;
        };
        std::vector<Group> groups;
        for (std::size_t a = 0; a < legs_.size(); ++a) {
            if (early[a] < 0) continue;
            for (const auto& lk : links_[a]) {
                int b = lk.other;
                if (b <= static_cast<int>(a) || early[b] < 0) continue;
                int ea = early[a], eb = early[b];
                int w = std::min(pushed(early, arrive, b, ea + separation(a, lk) - eb),
                                 pushed(early, arrive, a, eb + separation(b, lk) - ea));
                if (w > 0) groups.push_back({w, {legs_[a].train, legs_[b].train}});
            }
        }
        for (const auto& track : tracks_) {
            std::vector<int> open;
            for (int g : track)
                if (early[g] >= 0) open.push_back(g);
            if (open.size() < 3) continue;
            std::sort(open.begin(), open.end(), [&](int x, int y) { return early[x] < early[y]; });
            // Runs of mutually linked legs in order of earliest entry.
            std::vector<int> run;
            int sep = 0;
            auto flush = [&] {
                if (run.size() >= 3 && sep > 0) {
                    auto w = queue_delay(run, early, arrive, sep);
                    if (w > 0) {
                        Group gr{w, {}};
                        for (int g : run) gr.trains.push_back(legs_[g].train);
                        groups.push_back(std::move(gr));
                    }
                }
                run.clear();
                sep = 0;
            };
            for (int g : open) {
                int s2 = std::numeric_limits<int>::max();
                bool ok = true;
                for (int r : run) {
                    const Link* l = link(g, r);
                    if (!l) {
                        ok = false;
                        break;
                    }
                    s2 = std::min({s2, separation(g, *l), separation(r, *l)});
                }
                if (!ok) flush();
                else if (!run.empty()) sep = run.size() == 1 ? s2 : std::min(sep, s2);
                run.push_back(g);
            }
            flush();
        }
        if (groups.empty()) return 0;
        std::sort(groups.begin(), groups.end(), [](const Group& x, const Group& y) { return x.weight > y.weight; });
        std::vector<char> used(nt_, 0);
        std::int64_t extra = 0;
        for (const auto& gr : groups) {
            bool clash = false;
            for (std::size_t i = 0; i < gr.trains.size() && !clash; ++i) {
                clash = used[gr.trains[i]];
                for (std::size_t j = 0; j < i; ++j) clash = clash || gr.trains[j] == gr.trains[i];
            }
            if (clash) continue;
            for (int t : gr.trains) used[t] = 1;
            extra += gr.weight;
        }
        return extra;
    }

    static std::int64_t key(std::int64_t obj, int task) { return (obj << task_bits) | task; }

    bool timed_out() {
        if (stop_.load(std::memory_order_relaxed)) return true;
        if ((nodes_.fetch_add(1, std::memory_order_relaxed) & 255) == 0 &&
            std::chrono::steady_clock::now() > deadline_) {
            stop_.store(true);
            return true;
        }
        return false;
    }

    void fix(State& s, int k, int v) const {
        int g = leg(k, s.next[k]);
        s.entry[g] = v;
        if (legs_[g].counted) s.spent[k] += v - legs_[g].initial;
        ++s.next[k];
    }

    // One more interval of holding at the node after leg i, just before x + travel, fits every capacity group.
    bool downstream_slack(const State& s, int k, int i, int x) const {
        if (i + 1 == legs_of(k)) return true;
        const auto& L = legs_[leg(k, i)];
        int u = x - 1 + L.travel;
        std::size_t node = m_.trains[k].node(i + 1);
        for (auto gi : m_.groups_of_node[node]) {
            int others = 0;
            for (auto [mk, mj] : holders_[gi]) {
                if (mk == k) continue;
                int lo, hi;
                if (mj <= s.next[mk]) {
                    lo = arrival_at(s, mk, mj);
                } else {
                    int g = leg(mk, mj - 1);
                    lo = std::max(s.floor[g], legs_[g].lo) + legs_[g].travel;
                }
                hi = mj < s.next[mk] ? s.entry[leg(mk, mj)] : legs_[leg(mk, mj)].hi;
                if (lo <= u && u < hi) ++others;
            }
            if (others + 1 > m_.capacity_groups[gi].cap) return false;
        }
        return true;
    }

    // Smallest start from `v` that cannot slide one interval earlier.
    std::optional<int> candidate(const State& s, int k, int v) const {
        int i = s.next[k];
        int g = leg(k, i);
        const auto& L = legs_[g];
        int start = std::max(ready(s, k), L.lo);
        int arr = arrival_at(s, k, i);
        for (int x = v; x <= L.hi; ++x) {
            if (blocked(s, g, x, nullptr)) continue;
            if (L.counted && m_.config.delay_cap == model::DelayCap::train_sum &&
                s.spent[k] + (x - L.initial) > m_.beta)
                return std::nullopt;
            if (!capacity_ok(s, k, i, arr, x)) return std::nullopt;
            if (x - 1 < start || blocked(s, g, x - 1, nullptr) || !downstream_slack(s, k, i, x)) return x;
        }
        return std::nullopt;
    }

    struct Choice {
        int train = -1, value = 0;
        bool dead = false;
    };

    // Chronological choice over non-dominated starts. A train whose every
    // admissible start could slide earlier waits for another train to move.
    Choice choose(const State& s, std::set<int>& why) const {
        Choice c;
        bool open = false;
        for (int k = 0; k < nt_; ++k) {
            if (s.next[k] == legs_of(k)) continue;
            open = true;
            auto v = earliest(s, k, why);
            if (!v) {
                c.dead = true;
                return c;
            }
            auto x = candidate(s, k, *v);
            if (!x) continue;
            if (c.train < 0 || *x < c.value) {
                c.train = k;
                c.value = *x;
            }
        }
        if (open && c.train < 0) c.dead = true;
        return c;
    }

    void record(const State& s, std::int64_t obj, int task) {
        std::int64_t k = key(obj, task);
        std::int64_t cur = best_key_.load();
        while (k < cur && !best_key_.compare_exchange_weak(cur, k)) {
        }
        if (k >= cur) return;
        std::lock_guard<std::mutex> lk(best_mu_);
        if (have_best_ && k >= best_stored_) return;
        best_stored_ = k;
        best_state_ = s;
        have_best_ = true;
        log("incumbent " + std::to_string(to_minutes(obj)));
        if (opt_.on_incumbent) {
            auto sol = to_solution(s);
            sol.status = SolveStatus::timeout;
            opt_.on_incumbent(sol);
        }
    }

    void explore(State s, int task, std::set<int>& why) {
        for (;;) {
            if (timed_out()) return;
            auto lb = lower_bound(s, why);
            if (!lb) return;
            if (key(*lb, task) >= best_key_.load()) return;
            auto c = choose(s, why);
            if (c.dead) return;
            if (c.train < 0) {
                record(s, *lb, task);
                return;
            }
            State child = s;
            fix(child, c.train, c.value);
            explore(std::move(child), task, why);
            s.floor[leg(c.train, s.next[c.train])] = c.value + 1;
        }
    }

    // Binary-split the top of the tree into independent subtrees, in search order.
    void split(const State& s, int depth, std::vector<State>& out, std::set<int>& why) const {
        if (depth == 0) {
            out.push_back(s);
            return;
        }
        if (!lower_bound(s, why)) return;
        auto c = choose(s, why);
        if (c.dead) return;
        if (c.train < 0) {
            out.push_back(s);
            return;
        }
        State left = s;
        fix(left, c.train, c.value);
        split(left, depth - 1, out, why);
        State right = s;
        right.floor[leg(c.train, s.next[c.train])] = c.value + 1;
        split(right, depth - 1, out, why);
    }

    ScheduleSolution to_solution(const State& s) const {
        const auto& net = m_.instance.network;
        const auto& g = m_.grid;
        ScheduleSolution out;
        out.has_schedule = true;
        std::int64_t sum = 0;
        for (int k = 0; k < nt_; ++k) {
            const auto& p = m_.trains[k];
            int n = legs_of(k);
            for (int j = 0; j <= n; ++j) {
                int a = arrival_at(s, k, j);
                int d = j < n ? s.entry[leg(k, j)] : a;
                const auto& nid = net.nodes()[p.node(j)].id;
                out.node_times.push_back({p.id, nid, g.to_minute(a), g.to_minute(d)});
                if (d > a)
                    out.occupations.push_back({p.id, Occupation::Kind::wait, nid, g.to_minute(a), g.to_minute(d), true});
                if (j < n) {
                    const auto& L = p.legs[j];
                    out.occupations.push_back({p.id, Occupation::Kind::block, net.blocks()[L.block].id,
                                               g.to_minute(d), g.to_minute(d + L.travel), L.forward});
                }
            }
            sum += arrival_at(s, k, n) - p.origin_arrival;
        }
        for (const auto& sb : m_.shared) {
            int ek = s.entry[leg(static_cast<int>(sb.k), static_cast<int>(sb.leg_k))];
            int em = s.entry[leg(static_cast<int>(sb.m), static_cast<int>(sb.leg_m))];
            const auto& a = m_.trains[sb.k].id;
            const auto& b = m_.trains[sb.m].id;
            const auto& bid = net.blocks()[sb.block].id;
            if (ek <= em) out.priorities.push_back({a, b, bid});
            else out.priorities.push_back({b, a, bid});
        }
        out.objective = to_minutes(sum);
        out.total_delay = out.objective - m_.baseline();
        out.affected = m_.affected;
        return out;
    }

    const RescheduleModel& m_;
    SolveOptions opt_;
    int nt_ = 0;
    std::vector<int> offset_;
    std::vector<LegInfo> legs_;
    std::vector<std::vector<Link>> links_;
    std::vector<std::vector<std::pair<int, int>>> holders_;
    std::vector<int> rest_;  // minimum intervals from a leg's entry to its train's arrival
    std::vector<std::vector<int>> tracks_;  // legs per block direction, both directions on single track

    std::chrono::steady_clock::time_point deadline_;
    std::atomic<bool> stop_{false};
    std::atomic<std::uint64_t> nodes_{0};
    std::atomic<std::int64_t> best_key_;
    std::mutex best_mu_;
    bool have_best_ = false;
    std::int64_t best_stored_ = 0;
    State best_state_;
};

}  // namespace detail

inline ScheduleSolution solve(const RescheduleModel& m, const SolveOptions& opt = {}) {
    return detail::Search(m, opt).run();
}

inline ScheduleSolution solve(const RescheduleModel& m, double budget_seconds, int threads) {
    SolveOptions opt;
    opt.budget_seconds = budget_seconds;
    opt.threads = threads;
    return solve(m, opt);
}

}  // namespace railsched::solver

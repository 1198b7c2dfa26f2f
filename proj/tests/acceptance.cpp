// Acceptance report: one line per criterion, exit status reflects gated criteria only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "railsched/cli.hpp"
#include "railsched/generate.hpp"
#include "railsched/railsched.hpp"

using namespace railsched;
using model::Variant;

namespace {

// Tolerances.
constexpr double kNormTol = 1e-6;
constexpr double kIndexTol = 0.05;
constexpr double kRankSeconds = 1.0;
constexpr double kOracleSeconds = 60.0;
constexpr int kOracleSeeds = 100;
constexpr double kSpeedup = 3.0;
constexpr int kTimingRepeats = 5;
constexpr std::size_t kMinMutations = 12;
constexpr double kBudget = 300;

std::string data(const std::string& name) { return std::string(RAILSCHED_DATA_DIR) + "/" + name; }

model::ModelConfig config(Minute beta, Variant v) {
    model::ModelConfig c;
    c.beta = beta;
    c.variant = v;
    return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Occupation> sorted(std::vector<Occupation> v) {
    std::sort(v.begin(), v.end(), [](const Occupation& a, const Occupation& b) {
        return std::tie(a.train, a.entry, a.where) < std::tie(b.train, b.entry, b.where);
    });
    return v;
}

ScheduleSolution solve(const Instance& inst, const DisruptionScenario& sc, const model::ModelConfig& cfg) {
    return solver::solve(model::build(inst, sc, cfg), kBudget, 1);
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

struct Criterion {
    int id;
    std::string title;
    bool gated;
    std::function<Outcome()> run;
};

struct Reference {
    const char* name;
    double d_norm, p_norm, cr;
};

const Reference table[] = {
    {"Tehran", 1, 0.738185432, 88.6},        {"Khaf", 0.5, 0.004115515, 7.3},      {"Tabas", 0.5, 0.004115515, 7.3},
    {"Mashhad", 0.25, 1.002244826, 43.6},    {"Isfahan", 0.5, 0.058365486, 21.2},  {"Shiraz", 0.25, 0.035917222, 11.5},
    {"Tabriz", 0.5, 0.136934409, 29.8},      {"Urmia", 0.25, 0.019081024, 8.9},    {"Ahvaz", 1, 0.103262013, 40.3},
    {"Zanjan", 0.5, 0.030831287, 16.4},      {"Ghazvin", 0.5, 0.007856892, 9.5},   {"Karaj", 0.5, 0.041529288, 18.5},
    {"Kashan", 0.5, 0.019081024, 13.5},      {"Qom", 1, 0.05275342, 30.8},         {"Arak-Qom", 0.5, 0.002244826, 5.8},
    {"Malayer", 0.5, 0.019081024, 13.5},     {"Kermanshah", 0.25, 0.019081024, 8.9}, {"Yazd", 0.5, 0.033374255, 16.9},
    {"Bandar Abbas", 0.25, 0.002244826, 3.8}, {"Kerman", 0.5, 0.058365486, 21.2},  {"Sari", 0.5, 0.019081024, 13.5},
    {"Hamedan", 0.25, 0.030305156, 10.7},    {"Rasht", 0.25, 0.038986321, 11.9},   {"Khoramshahr", 0.25, 0.013468958, 7.8},
    {"Maraghe", 1, 0.019081024, 20.5},       {"Mianeh", 1, 0.003297089, 10.2},
};

Outcome criticality_table() {
    Outcome o;
    auto inst = load_instance_file(data("iran-full.json"));
    auto t0 = std::chrono::steady_clock::now();
    auto ranked = criticality::rank_nodes(inst.network, criticality::Weights{});
    double secs = seconds_since(t0);
    std::map<std::string, criticality::CriticalityRecord> by;
    for (const auto& r : ranked) by[r.name] = r;
    double worst_d = 0, worst_p = 0, worst_cr = 0;
    for (const auto& row : table) {
        auto it = by.find(row.name);
        o.require(it != by.end(), std::string("node ") + row.name + " present");
        if (it == by.end()) continue;
        worst_d = std::max(worst_d, std::abs(it->second.degree_norm - row.d_norm));
        worst_p = std::max(worst_p, std::abs(it->second.demand_norm - row.p_norm));
        worst_cr = std::max(worst_cr, std::abs(it->second.index - row.cr));
    }
    o.require(worst_d <= kNormTol, "degree_norm within 1e-6");
    o.require(worst_p <= kNormTol, "demand_norm within 1e-6");
    o.require(worst_cr <= kIndexTol, "index within 0.05");
    std::set<std::string> top;
    for (std::size_t i = 0; i < 9 && i < ranked.size(); ++i) top.insert(ranked[i].name);
    std::set<std::string> want{"Tehran", "Mashhad", "Ahvaz", "Qom", "Tabriz", "Isfahan", "Kerman", "Maraghe", "Karaj"};
    o.require(top == want, "top nine set");
    o.require(secs < kRankSeconds, "ranking under 1 s");
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu nodes, max |err| degree %.1e demand %.1e index %.3f, %.2f ms", ranked.size(),
                  worst_d, worst_p, worst_cr, secs * 1e3);
    o.note(buf);
    return o;
}

struct Case {
    std::string instance, scenario;
    Minute beta;
};

const std::vector<Case> cases = {
    {"testnet.json", "testnet-s1.json", 15},         {"testnet.json", "testnet-s2.json", 15},
    {"testnet.json", "empty-scenario.json", 15},     {"iran-aggregated.json", "iran-s46.json", 480},
    {"iran-aggregated.json", "iran-s46-tq.json", 480}, {"iran-aggregated.json", "iran-s45.json", 480},
    {"iran-aggregated.json", "iran-s45-mt.json", 480}, {"iran-aggregated.json", "iran-s34.json", 480},
    {"iran-aggregated.json", "iran-s12.json", 480},  {"iran-aggregated.json", "iran-s23.json", 480},
    {"iran-aggregated.json", "empty-scenario.json", 480},
};

Outcome delay_identity() {
    Outcome o;
    int solved = 0;
    std::map<std::string, Minute> delay;
    for (const auto& c : cases) {
        auto inst = load_instance_file(data(c.instance));
        auto sc = load_scenario_file(data(c.scenario), inst);
        Minute base = baseline_objective(inst.trains);
        for (auto v : {Variant::basic, Variant::adjusted}) {
            auto s = solve(inst, sc, config(c.beta, v));
            std::string tag = c.scenario + "/" + model::variant_name(v);
            if (!s.has_schedule) {
                o.require(s.status == SolveStatus::infeasible, tag + " infeasible or solved");
                continue;
            }
            auto d = validate::delays(s, inst);
            o.require(d.objective == s.objective, tag + " recomputed objective");
            o.require(d.objective - base == d.total_delay, tag + " objective minus baseline");
            o.require(s.total_delay == d.total_delay, tag + " reported delay");
            Minute sum = 0;
            for (const auto& t : d.trains) sum += t.delay;
            o.require(sum == d.total_delay, tag + " per-train sum");
            delay[tag] = d.total_delay;
            ++solved;
        }
    }
    o.require(delay["iran-s46.json/basic"] == 155, "iran s46 delay 155");
    o.note(std::to_string(solved) + " schedules; iran s46 delay " + std::to_string(delay["iran-s46.json/basic"]) +
           " (reference 13530-13375=155); testnet s1 delay " + std::to_string(delay["testnet-s1.json/basic"]) +
           " (reference 615-540=75, objective gap reported under 7)");
    return o;
}

Outcome exhaustive_oracle() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    int agree = 0, optimal = 0;
    for (int seed = 1; seed <= kOracleSeeds; ++seed) {
        auto tc = generate::tiny(static_cast<std::uint64_t>(seed));
        for (auto v : {Variant::basic, Variant::adjusted}) {
            auto m = model::build(tc.instance, tc.scenario, config(tc.beta, v));
            auto a = solver::solve(m, 30, 1);
            auto b = solver::brute_force(m);
            bool same = a.status == b.status && (a.status != SolveStatus::optimal || a.objective == b.objective);
            o.require(same, "seed " + std::to_string(seed) + " " + model::variant_name(v));
            agree += same;
            optimal += a.status == SolveStatus::optimal;
        }
    }
    double secs = seconds_since(t0);
    o.require(secs < kOracleSeconds, "total under 60 s");
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%d agree (%d optimal), %.1f s", agree, 2 * kOracleSeeds, optimal, secs);
    o.note(buf);
    return o;
}

Outcome fixed_point(bool reference_objectives) {
    Outcome o;
    struct Want {
        const char* instance;
        Minute beta, reference;
    };
    for (auto w : {Want{"testnet.json", 15, 540}, Want{"iran-aggregated.json", 480, 13375}}) {
        auto inst = load_instance_file(data(w.instance));
        auto sc = load_scenario_file(data("empty-scenario.json"), inst);
        auto plan = sorted(schedule_from_timetable(inst).occupations);
        for (auto v : {Variant::basic, Variant::adjusted}) {
            auto s = solve(inst, sc, config(w.beta, v));
            std::string tag = std::string(w.instance) + "/" + model::variant_name(v);
            o.require(s.status == SolveStatus::optimal, tag + " optimal");
            o.require(s.total_delay == 0, tag + " zero delay");
            o.require(sorted(s.occupations) == plan, tag + " timetable returned");
            if (reference_objectives)
                o.require(s.objective == w.reference,
                          tag + " objective " + std::to_string(s.objective) + " vs " + std::to_string(w.reference));
            else if (v == Variant::basic)
                o.note(std::string(w.instance) + " objective " + std::to_string(s.objective));
        }
    }
    if (reference_objectives)
        o.note("iran trip lengths sum to 11940 min plus 30 min dummy dwell; 13375 is not reachable from the timetable");
    return o;
}

Outcome monotone_sweeps() {
    Outcome o;
    generate::CorridorOptions opt;
    opt.seed = 5;
    auto inst = generate::corridor(opt);
    auto b = generate::busiest_block(inst);
    auto centre = generate::busiest_time(inst, b, 90);
    auto base = generate::centred_closure(inst, inst.network.blocks()[b].id, centre, 120);
    int shared = 0;
    for (std::size_t i = 0; i < inst.network.blocks().size(); ++i) {
        std::set<std::string> users;
        for (const auto& t : inst.trains)
            for (const auto& l : legs_of(t, inst.network))
                if (l.block == i) users.insert(t.id);
        shared += users.size() >= 2;
    }
    o.require(inst.trains.size() >= 20, "at least 20 trains");
    o.note(std::to_string(inst.trains.size()) + " trains, " + std::to_string(shared) + " shared blocks, closure " +
           base.closures[0].block);
    cli::RunOptions ro;
    ro.config = config(200, Variant::basic);
    ro.budget_seconds = kBudget;
    for (auto [param, values] : {std::pair{cli::SweepParameter::headway, std::vector<Minute>{5, 10, 20}},
                                 std::pair{cli::SweepParameter::duration, std::vector<Minute>{60, 120, 180}}}) {
        auto res = cli::sweep(inst, cli::SweepSpec{param, values, base}, ro);
        std::string name = param == cli::SweepParameter::headway ? "headway" : "duration";
        std::string seq;
        Minute prev = 0;
        for (const auto& p : res.points) {
            o.require(p.solution.status == SolveStatus::optimal, name + " " + std::to_string(p.value) + " optimal");
            o.require(p.solution.objective >= prev, name + " " + std::to_string(p.value) + " non-decreasing");
            prev = p.solution.objective;
            seq += (seq.empty() ? "" : ",") + std::to_string(p.solution.objective);
        }
        o.require(res.violations.empty(), name + " no engine violations");
        o.note(name + " " + seq);
    }
    return o;
}

double median_ms(const Instance& inst, const DisruptionScenario& sc, const model::ModelConfig& cfg) {
    std::vector<double> ms;
    for (int i = 0; i < kTimingRepeats; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        auto s = solve(inst, sc, cfg);
        ms.push_back(seconds_since(t0) * 1e3);
        if (s.status != SolveStatus::optimal) return -1;
    }
    std::sort(ms.begin(), ms.end());
    return ms[ms.size() / 2];
}

Outcome adjusted_model() {
    Outcome o;
    auto inst = load_instance_file(data("testnet.json"));
    auto plan = schedule_from_timetable(inst);
    struct Want {
        const char* scenario;
        std::set<std::string> r_star;
    };
    for (const auto& w : {Want{"testnet-s1.json", {"4", "8", "10", "14"}}, Want{"testnet-s2.json", {"4", "14"}}}) {
        auto sc = load_scenario_file(data(w.scenario), inst);
        auto r = model::identify_affected(inst, sc, 15);
        o.require(r == w.r_star, std::string(w.scenario) + " R*");
        auto s = solve(inst, sc, config(15, Variant::adjusted));
        o.require(s.status == SolveStatus::optimal, std::string(w.scenario) + " optimal");
        for (const auto& t : inst.trains) {
            if (r.count(t.id)) continue;
            o.require(sorted(s.of_train(t.id)) == sorted(plan.of_train(t.id)),
                      std::string(w.scenario) + " train " + t.id + " unchanged");
        }
    }
    auto sc = load_scenario_file(data("testnet-s1.json"), inst);
    double basic = median_ms(inst, sc, config(15, Variant::basic));
    double adjusted = median_ms(inst, sc, config(15, Variant::adjusted));
    o.require(basic > 0 && adjusted > 0, "timing runs optimal");
    o.require(adjusted * kSpeedup <= basic, "adjusted at most a third of basic");
    char buf[120];
    std::snprintf(buf, sizeof buf, "s1 median wall basic %.2f ms, adjusted %.2f ms (ratio %.1f)", basic, adjusted,
                  adjusted > 0 ? basic / adjusted : 0.0);
    o.note(buf);
    return o;
}

Outcome reference_testnet() {
    Outcome o;
    auto inst = load_instance_file(data("testnet.json"));
    struct Want {
        const char* scenario;
        Variant v;
        Minute reference;
    };
    for (auto w : {Want{"testnet-s1.json", Variant::basic, 615}, Want{"testnet-s2.json", Variant::basic, 565},
                   Want{"testnet-s1.json", Variant::adjusted, 605}, Want{"testnet-s2.json", Variant::adjusted, 570}}) {
        auto s = solve(inst, load_scenario_file(data(w.scenario), inst), config(15, w.v));
        std::string tag = std::string(w.scenario) + "/" + model::variant_name(w.v);
        o.require(s.status == SolveStatus::optimal && s.objective == w.reference,
                  tag + " " + std::to_string(s.objective) + " vs " + std::to_string(w.reference));
    }
    o.note("reconstructed network; the figure is not fully recoverable");
    return o;
}

Outcome mutation_suite() {
    Outcome o;
    std::set<std::string> applicable;
    int runs = 0;
    auto exercise = [&](const char* instance, const char* scenario, Minute beta) {
        auto inst = load_instance_file(data(instance));
        auto sc = load_scenario_file(data(scenario), inst);
        for (auto v : {Variant::basic, Variant::adjusted}) {
            auto cfg = config(beta, v);
            auto s = solve(inst, sc, cfg);
            o.require(s.status == SolveStatus::optimal, std::string(scenario) + " optimal");
            o.require(validate::check(s, inst, sc, cfg, s.affected).empty(), std::string(scenario) + " clean");
            for (std::uint64_t seed : {1, 2, 3})
                for (const auto& r : validate::mutate_and_check(s, inst, sc, cfg, seed, s.affected)) {
                    if (!r.applicable) continue;
                    applicable.insert(r.name);
                    ++runs;
                    o.require(r.detected(), r.name + " on " + r.target + " rule " + std::to_string(r.intended));
                }
        }
    };
    exercise("iran-aggregated.json", "iran-s46.json", 480);
    exercise("testnet.json", "testnet-s1.json", 15);
    o.require(applicable.size() >= kMinMutations, "at least 12 distinct mutations");
    o.note(std::to_string(applicable.size()) + " distinct mutations, " + std::to_string(runs) + " applied");
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "node criticality table", true, criticality_table},
        {2, "delay identity", true, delay_identity},
        {3, "exhaustive oracle agreement", true, exhaustive_oracle},
        {4, "zero-disruption fixed point", true, [] { return fixed_point(false); }},
        {4, "zero-disruption reference objectives", false, [] { return fixed_point(true); }},
        {5, "sensitivity monotonicity", true, monotone_sweeps},
        {6, "adjusted model locality and speed", true, adjusted_model},
        {7, "reference test-network objectives", false, reference_testnet},
        {8, "validator mutation suite", true, mutation_suite},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.note(std::string("exception: ") + e.what());
        }
        if (!o.pass && c.gated) ++failed;
        std::cout << "[" << c.id << "] " << (o.pass ? "PASS" : "FAIL") << (c.gated ? "" : " (not gated)") << "  "
                  << c.title << '\n';
        for (const auto& n : o.notes) std::cout << "      " << n << '\n';
        std::cout.flush();
    }
    std::cout << (failed ? std::to_string(failed) + " gated criteria failed" : "all gated criteria passed") << '\n';
    return failed ? 1 : 0;
}

#pragma once

// Command-line front end. Everything lives here so tests can drive the
// subcommands in-process; tools/railsched.cpp only forwards argv.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "railsched/railsched.hpp"
#include "railsched/generate.hpp"
#include "railsched/render.hpp"

namespace railsched::cli {

enum Exit { ok = 0, failure = 1, infeasible = 2, timeout = 3, engine_bug = 4 };

// ---------------------------------------------------------------------------
// Logging

enum class Level { quiet, error, warn, info, debug };

inline Level log_level() {
    const char* v = std::getenv("RAILSCHED_LOG");
    if (!v) return Level::warn;
    std::string s(v);
    if (s == "quiet" || s == "0") return Level::quiet;
    if (s == "error") return Level::error;
    if (s == "info") return Level::info;
    if (s == "debug" || s == "trace") return Level::debug;
    return Level::warn;
}

class Log {
public:
    explicit Log(std::ostream& err) : err_(err), level_(log_level()) {}
    void error(const std::string& m) const { put(Level::error, "error", m); }
    void warn(const std::string& m) const { put(Level::warn, "warn", m); }
    void info(const std::string& m) const { put(Level::info, "info", m); }
    void debug(const std::string& m) const { put(Level::debug, "debug", m); }
    bool enabled(Level l) const { return level_ >= l; }

private:
    void put(Level l, const char* tag, const std::string& m) const {
        if (level_ >= l) err_ << "railsched [" << tag << "] " << m << "\n";
    }
    std::ostream& err_;
    Level level_;
};

// ---------------------------------------------------------------------------
// Result rows

inline const char* const csv_header = "block,window_start,window_end,variant,r_star,objective,total_delay,status,wall_ms";

struct ResultRow {
    std::string block;
    std::optional<Minute> window_start, window_end;
    model::Variant variant = model::Variant::basic;
    std::vector<std::string> r_star;
    std::optional<Minute> objective, total_delay;
    SolveStatus status = SolveStatus::infeasible;
    double wall_ms = 0;

    std::string csv() const {
        auto opt = [](const std::optional<Minute>& v) { return v ? std::to_string(*v) : std::string(); };
        std::string rs;
        for (const auto& id : r_star) rs += (rs.empty() ? "" : ";") + id;
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.1f", wall_ms);
        return block + "," + opt(window_start) + "," + opt(window_end) + "," + model::variant_name(variant) + "," + rs +
               "," + opt(objective) + "," + opt(total_delay) + "," + status_name(status) + "," + ms;
    }
};

/// Objective and delay are recomputed from the schedule, never copied from the solver.
inline ResultRow make_row(const Instance& inst, const DisruptionScenario& sc, model::Variant variant,
                          const ScheduleSolution& sol) {
    ResultRow r;
    r.variant = variant;
    r.status = sol.status;
    r.wall_ms = sol.wall_ms;
    std::vector<std::string> blocks;
    for (const auto& c : sc.closures) {
        if (std::find(blocks.begin(), blocks.end(), c.block) == blocks.end()) {
            blocks.push_back(c.block);
            r.block += (r.block.empty() ? "" : "+") + c.block;
        }
        r.window_start = r.window_start ? std::min(*r.window_start, c.start) : c.start;
        r.window_end = r.window_end ? std::max(*r.window_end, c.end()) : c.end();
    }
    if (variant == model::Variant::adjusted)
        for (const auto& t : inst.trains)
            if (sol.affected.count(t.id)) r.r_star.push_back(t.id);
    if (sol.has_schedule) {
        auto d = validate::delays(sol, inst);
        if (d.objective - baseline_objective(inst.trains) != d.total_delay)
            throw Error("delay identity broken: objective " + std::to_string(d.objective) + ", total delay " +
                        std::to_string(d.total_delay));
        if (d.objective != sol.objective)
            throw Error("solver objective " + std::to_string(sol.objective) + " disagrees with its schedule (" +
                        std::to_string(d.objective) + ")");
        r.objective = d.objective;
        r.total_delay = d.total_delay;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Runs

inline void require_aligned(Minute v, const TimeGrid& g, const std::string& what) {
    if (v < 0) throw Error(what + " must be non-negative");
    if (!g.aligned(g.start() + v)) throw Error(what + " must be a multiple of the grid step " + std::to_string(g.delta()));
}

/// Same instance with every block headway replaced.
inline Instance with_headway(const Instance& in, Minute h) {
    require_aligned(h, in.grid, "headway");
    std::vector<Block> blocks = in.network.blocks();
    for (auto& b : blocks) b.headway = h;
    Instance out = in;
    out.network = RailNetwork(in.network.nodes(), std::move(blocks));
    return out;
}

struct RunOptions {
    model::ModelConfig config;
    double budget_seconds = 300;
    int threads = 1;
};

inline ScheduleSolution run(const Instance& inst, const DisruptionScenario& sc, const RunOptions& opt,
                            const Log* log = nullptr) {
    require_aligned(opt.config.beta, inst.grid, "beta");
    auto m = model::build(inst, sc, opt.config);
    if (log)
        log->info("model " + model::variant_name(opt.config.variant) + ": " + std::to_string(m.columns.size()) +
                  " columns, " + std::to_string(m.rows.size()) + " rows");
    solver::SolveOptions so;
    so.budget_seconds = opt.budget_seconds;
    so.threads = opt.threads;
    if (log && log->enabled(Level::debug)) so.log = [log](const std::string& s) { log->debug(s); };
    if (log && log->enabled(Level::info))
        so.on_incumbent = [log](const ScheduleSolution& s) { log->info("incumbent " + std::to_string(s.objective)); };
    return solver::solve(m, so);
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepParameter { headway, duration, beta };

inline SweepParameter parse_parameter(const std::string& s) {
    if (s == "headway") return SweepParameter::headway;
    if (s == "duration" || s == "closure-duration") return SweepParameter::duration;
    if (s == "beta") return SweepParameter::beta;
    throw Error("sweep parameter must be headway, duration or beta", s);
}

struct SweepSpec {
    SweepParameter parameter = SweepParameter::headway;
    std::vector<Minute> values;
    DisruptionScenario base;
};

struct SweepPoint {
    Minute value = 0;
    DisruptionScenario scenario;
    ScheduleSolution solution;
    ResultRow row;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<std::string> violations;  // engine bugs
    std::vector<std::string> notes;
};

/// The base closure resized to `duration`, keeping its centre. Windows for
/// growing durations are nested.
inline DisruptionScenario resized(const DisruptionScenario& base, const Instance& inst, Minute duration) {
    if (base.closures.size() != 1) throw Error("a duration sweep needs a base scenario with exactly one closure");
    const auto& g = inst.grid;
    require_aligned(duration, g, "closure duration");
    if (duration <= 0) throw Error("closure duration must be positive");
    Closure c = base.closures.front();
    Minute center = c.start + c.duration / 2;
    Minute start = center - duration / 2;
    start -= (start - g.start()) % g.delta();
    if (duration > g.horizon()) throw Error("closure duration exceeds the horizon");
    start = std::clamp(start, g.start(), g.end() - duration);
    c.start = start;
    c.duration = duration;
    DisruptionScenario s;
    s.closures.push_back(c);
    validate_scenario(s, inst.network, g);
    return s;
}

inline SweepResult sweep(const Instance& inst, const SweepSpec& spec, const RunOptions& opt, const Log* log = nullptr) {
    if (spec.values.empty()) throw Error("sweep needs at least one value");
    SweepResult res;
    for (auto v : spec.values) {
        SweepPoint p;
        p.value = v;
        Instance in = inst;
        RunOptions o = opt;
        p.scenario = spec.base;
        switch (spec.parameter) {
            case SweepParameter::headway: in = with_headway(inst, v); break;
            case SweepParameter::duration: p.scenario = resized(spec.base, inst, v); break;
            case SweepParameter::beta: o.config.beta = v; break;
        }
        if (log) log->info("sweep value " + std::to_string(v));
        p.solution = run(in, p.scenario, o, log);
        p.row = make_row(in, p.scenario, o.config.variant, p.solution);
        res.points.push_back(std::move(p));
    }

    // Expected direction: headway and duration never help, beta never hurts.
    // The adjusted variant frees a different train set when the window or beta
    // changes, so only its headway sweep has a guaranteed direction.
    const bool rising = spec.parameter != SweepParameter::beta;
    const bool guaranteed = opt.config.variant == model::Variant::basic || spec.parameter == SweepParameter::headway;
    std::vector<Minute> order = spec.values;
    bool sorted = std::is_sorted(order.begin(), order.end());
    if (!sorted) res.notes.push_back("values are not ascending; monotonicity is not checked");
    const Minute inf = std::numeric_limits<Minute>::max();
    auto key = [&](const SweepPoint& p) -> std::optional<Minute> {
        if (p.solution.status == SolveStatus::optimal) return p.row.objective;
        if (p.solution.status == SolveStatus::infeasible) return inf;
        return std::nullopt;
    };
    for (std::size_t i = 1; sorted && i < res.points.size(); ++i) {
        auto a = key(res.points[i - 1]), b = key(res.points[i]);
        if (!a || !b) {
            res.notes.push_back("values " + std::to_string(res.points[i - 1].value) + " and " +
                                std::to_string(res.points[i].value) + " not compared: a run timed out");
            continue;
        }
        bool bad = rising ? *b < *a : *b > *a;
        if (!bad) continue;
        auto show = [&](Minute k) { return k == inf ? std::string("infeasible") : std::to_string(k); };
        std::string msg = "objective moves the wrong way from value " + std::to_string(res.points[i - 1].value) + " (" +
                          show(*a) + ") to " + std::to_string(res.points[i].value) + " (" + show(*b) + ")";
        if (guaranteed) res.violations.push_back(msg);
        else res.notes.push_back(msg);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Subcommands

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw Error("cannot write " + path);
    o << text;
    if (!o) throw Error("failed writing " + path);
}

inline int exit_for(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return ok;
        case SolveStatus::infeasible: return infeasible;
        case SolveStatus::timeout: return timeout;
    }
    return failure;
}

struct ModelFlags {
    std::string instance, scenario;
    std::string variant = "basic";
    Minute beta = 0;
    std::optional<Minute> headway;
    std::string capacity_mode = "per_block";
    std::string delay_cap = "per_node";
    std::string headway_scope = "shared_track";

    void add(CLI::App* c, bool need_scenario = true) {
        c->add_option("--instance,-i", instance, "instance JSON")->required()->check(CLI::ExistingFile);
        auto s = c->add_option("--scenario,-s", scenario, "disruption scenario JSON")->check(CLI::ExistingFile);
        if (need_scenario) s->required();
        c->add_option("--variant", variant, "basic or adjusted")->check(CLI::IsMember({"basic", "adjusted"}));
        c->add_option("--beta,-b", beta, "maximum delay per train and node, minutes");
        c->add_option("--headway", headway, "override every block headway, minutes");
        c->add_option("--capacity-mode", capacity_mode, "per_block or per_node")
            ->check(CLI::IsMember({"per_block", "per_node"}));
        c->add_option("--delay-cap", delay_cap, "per_node or train_sum")->check(CLI::IsMember({"per_node", "train_sum"}));
        c->add_option("--headway-scope", headway_scope, "shared_track or all_pairs")
            ->check(CLI::IsMember({"shared_track", "all_pairs"}));
    }

    model::ModelConfig config() const {
        model::ModelConfig cfg;
        cfg.beta = beta;
        cfg.variant = model::parse_variant(variant);
        cfg.capacity_mode = capacity_mode == "per_node" ? model::CapacityMode::per_node : model::CapacityMode::per_block;
        cfg.delay_cap = delay_cap == "train_sum" ? model::DelayCap::train_sum : model::DelayCap::per_node;
        cfg.headway_scope =
            headway_scope == "all_pairs" ? model::HeadwayScope::all_pairs : model::HeadwayScope::shared_track;
        return cfg;
    }

    Instance load() const {
        auto inst = load_instance_file(instance);
        if (headway) inst = with_headway(inst, *headway);
        return inst;
    }

    DisruptionScenario load_scenario(const Instance& inst) const {
        if (scenario.empty()) return {};
        return load_scenario_file(scenario, inst);
    }
};

}  // namespace detail

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    Log log(err);
    CLI::App app{"railsched: exact train rescheduling under block closures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "railsched 1.0.0");
    std::uint64_t seed = 1;
    double budget = 300;
    int threads = 1;
    app.add_option("--seed", seed, "seed for generated instances and mutations")->capture_default_str();
    app.add_option("--budget", budget, "wall-time budget per solve, seconds")->capture_default_str()->check(
        CLI::PositiveNumber);
    app.add_option("--threads", threads, "solver threads")->capture_default_str()->check(CLI::Range(1, 256));

    int code = ok;

    // analyze-nodes
    auto* an = app.add_subcommand("analyze-nodes", "rank nodes by criticality index");
    std::string an_instance, an_format = "table";
    std::size_t an_top = 9;
    double alpha1 = 0.6, alpha2 = 0.4;
    an->add_option("--instance,-i", an_instance)->required()->check(CLI::ExistingFile);
    an->add_option("--top", an_top, "how many nodes to select")->capture_default_str();
    an->add_option("--alpha1", alpha1)->capture_default_str();
    an->add_option("--alpha2", alpha2)->capture_default_str();
    an->add_option("--format", an_format)->check(CLI::IsMember({"table", "csv", "json"}));
    an->callback([&] {
        auto inst = load_instance_file(an_instance);
        criticality::Weights w{alpha1, alpha2};
        auto ranked = criticality::rank_nodes(inst.network, w);
        auto keep = criticality::top_nodes(ranked, an_top);
        if (an_format == "json") {
            json j = json::array();
            for (const auto& r : ranked)
                j.push_back({{"node", r.node}, {"name", r.name}, {"degree", r.degree}, {"demand", r.demand},
                             {"degree_norm", r.degree_norm}, {"demand_norm", r.demand_norm}, {"index", r.index},
                             {"selected", keep.count(r.node) > 0}});
            out << j.dump(1) << "\n";
            return;
        }
        char buf[256];
        if (an_format == "csv") out << "rank,node,name,degree,demand,degree_norm,demand_norm,index,selected\n";
        else
            out << "rank  node  name                 deg  demand        D_norm       P_norm       Cr     sel\n";
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            const auto& r = ranked[i];
            if (an_format == "csv")
                std::snprintf(buf, sizeof buf, "%zu,%s,%s,%d,%.0f,%.9f,%.9f,%.4f,%d\n", i + 1, r.node.c_str(),
                              r.name.c_str(), r.degree, r.demand, r.degree_norm, r.demand_norm, r.index,
                              keep.count(r.node) ? 1 : 0);
            else
                std::snprintf(buf, sizeof buf, "%-5zu %-5s %-20s %3d  %-12.0f  %.9f  %.9f  %6.1f  %s\n", i + 1,
                              r.node.c_str(), r.name.substr(0, 20).c_str(), r.degree, r.demand, r.degree_norm,
                              r.demand_norm, r.index, keep.count(r.node) ? "*" : "");
            out << buf;
        }
    });

    // aggregate
    auto* ag = app.add_subcommand("aggregate", "contract the network onto the most critical nodes");
    std::string ag_instance, ag_out, ag_keep;
    std::size_t ag_top = 9;
    Minute ag_dwell = 10;
    std::optional<int> ag_cap;
    ag->add_option("--instance,-i", ag_instance)->required()->check(CLI::ExistingFile);
    ag->add_option("--top", ag_top, "keep this many nodes by criticality")->capture_default_str();
    ag->add_option("--keep", ag_keep, "comma-separated node ids to keep instead of --top");
    ag->add_option("--dummy-dwell", ag_dwell, "dwell at dummy junctions, minutes")->capture_default_str();
    ag->add_option("--block-capacity", ag_cap, "capacity of contracted blocks");
    ag->add_option("--out,-o", ag_out, "aggregated instance JSON")->required();
    ag->callback([&] {
        auto inst = load_instance_file(ag_instance);
        std::set<std::string> keep;
        if (!ag_keep.empty())
            for (const auto& id : detail::split(ag_keep)) keep.insert(id);
        else
            keep = criticality::top_nodes(criticality::rank_nodes(inst.network, {}), ag_top);
        criticality::AggregateOptions opt;
        opt.dummy_dwell = ag_dwell;
        opt.block_capacity = ag_cap;
        auto res = criticality::aggregate(inst, keep, opt);
        json doc = to_json(res.instance);
        json prov = json::object();
        for (const auto& [b, segs] : res.block_provenance) {
            json a = json::array();
            for (const auto& s : segs)
                a.push_back({{"kind", s.kind == criticality::Segment::Kind::block ? "block" : "dwell"}, {"id", s.id},
                             {"minutes", s.travel_time}});
            prov[b] = a;
        }
        doc["provenance"] = prov;
        detail::write_file(ag_out, doc.dump(1) + "\n");
        out << "kept " << res.kept_nodes.size() << " nodes, " << res.dummy_nodes.size() << " dummy junctions, "
            << res.network().blocks().size() << " blocks, " << res.trains().size() << " trains";
        if (!res.dropped_trains.empty()) {
            out << "; dropped trains";
            for (const auto& t : res.dropped_trains) out << " " << t;
        }
        out << "\n";
        for (const auto& w : res.instance.warnings) log.warn(w);
    });

    // build
    auto* bu = app.add_subcommand("build", "build the integer program and optionally export it");
    detail::ModelFlags bu_f;
    std::string bu_mps;
    bu_f.add(bu);
    bu->add_option("--emit-mps", bu_mps, "write the model in MPS format");
    bu->callback([&] {
        auto inst = bu_f.load();
        auto sc = bu_f.load_scenario(inst);
        auto cfg = bu_f.config();
        require_aligned(cfg.beta, inst.grid, "beta");
        auto m = model::build(inst, sc, cfg);
        std::size_t binaries = 0;
        for (const auto& c : m.columns) binaries += c.binary;
        out << "variant " << model::variant_name(cfg.variant) << ": " << m.columns.size() << " columns (" << binaries
            << " binary), " << m.rows.size() << " rows, baseline " << m.baseline() << "\n";
        if (cfg.variant == model::Variant::adjusted) {
            out << "affected:";
            for (const auto& t : inst.trains)
                if (m.affected.count(t.id)) out << " " << t.id;
            out << "\n";
        }
        if (!bu_mps.empty()) {
            auto doc = solver::export_mps(m);
            for (const auto& w : doc.warnings) log.warn(w);
            detail::write_file(bu_mps, doc.text);
            out << "wrote " << bu_mps << (doc.free_format ? " (free format)" : "") << "\n";
        }
    });

    // solve
    auto* so = app.add_subcommand("solve", "solve one scenario and print a result row");
    detail::ModelFlags so_f;
    std::string so_out, so_report, so_diagram, so_mps, so_format = "svg";
    bool relax = false, no_header = false;
    so_f.add(so);
    so->add_option("--out,-o", so_out, "write the schedule JSON");
    so->add_option("--report", so_report, "write the per-train delay table");
    so->add_option("--diagram", so_diagram, "write a space-time diagram");
    so->add_option("--format", so_format, "diagram format: svg or text")->check(CLI::IsMember({"svg", "text"}));
    so->add_option("--emit-mps", so_mps, "also write the model in MPS format");
    so->add_flag("--relax-beta", relax, "on infeasibility, retry with beta doubled until feasible");
    so->add_flag("--no-header", no_header, "omit the CSV header");
    so->callback([&] {
        auto inst = so_f.load();
        auto sc = so_f.load_scenario(inst);
        RunOptions ro{so_f.config(), budget, threads};
        if (!so_mps.empty()) detail::write_file(so_mps, solver::export_mps(model::build(inst, sc, ro.config)).text);
        if (!no_header) out << csv_header << "\n";
        auto sol = run(inst, sc, ro, &log);
        out << make_row(inst, sc, ro.config.variant, sol).csv() << "\n";
        while (sol.status == SolveStatus::infeasible) {
            std::string why;
            for (int t : sol.certificate) why += " " + std::to_string(t);
            Minute next = std::max(ro.config.beta * 2, inst.grid.delta());
            if (!relax) {
                log.warn("infeasible at beta " + std::to_string(ro.config.beta) + " (rules" + why +
                         "); rerun with --relax-beta or --beta " + std::to_string(next));
                break;
            }
            if (ro.config.beta >= inst.grid.horizon()) break;
            ro.config.beta = std::min(next, inst.grid.horizon());
            log.warn("infeasible; retrying with beta " + std::to_string(ro.config.beta));
            sol = run(inst, sc, ro, &log);
            out << make_row(inst, sc, ro.config.variant, sol).csv() << "\n";
        }
        if (sol.status == SolveStatus::timeout && sol.bound)
            log.warn("budget exhausted; best bound " + std::to_string(*sol.bound));
        if (!so_out.empty()) detail::write_file(so_out, to_json(sol).dump(1) + "\n");
        if (!so_report.empty() && sol.has_schedule)
            detail::write_file(so_report, validate::format_table(validate::delays(sol, inst)));
        if (!so_diagram.empty() && sol.has_schedule) {
            render::Options o;
            o.format = render::parse_format(so_format);
            detail::write_file(so_diagram, render::diagram(sol, inst, sc, o));
        }
        code = detail::exit_for(sol.status);
    });

    // validate
    auto* va = app.add_subcommand("validate", "check a schedule against every rule");
    detail::ModelFlags va_f;
    std::string va_schedule;
    bool va_mutate = false, va_json = false;
    va_f.add(va, false);
    va->add_option("--schedule", va_schedule, "schedule JSON written by solve")->required()->check(CLI::ExistingFile);
    va->add_flag("--mutate", va_mutate, "also run the targeted mutation self-test");
    va->add_flag("--json", va_json, "print the report as JSON");
    va->callback([&] {
        auto inst = va_f.load();
        auto sc = va_f.load_scenario(inst);
        auto cfg = va_f.config();
        auto sol = load_schedule(read_json_file(va_schedule));
        if (!sol.has_schedule) throw Error("schedule has no occupations (status " + status_name(sol.status) + ")");
        std::optional<std::set<std::string>> aff;
        if (cfg.variant == model::Variant::adjusted && !sol.affected.empty()) aff = sol.affected;
        auto rep = validate::check(sol, inst, sc, cfg, aff);
        out << (va_json ? validate::to_json(rep).dump(1) + "\n" : validate::format_table(rep));
        code = rep.empty() ? ok : infeasible;
        if (va_mutate) {
            auto res = validate::mutate_and_check(sol, inst, sc, cfg, seed, aff);
            int missed = 0;
            for (const auto& r : res) {
                out << (r.applicable ? (r.detected() ? "caught " : "MISSED ") : "n/a    ") << r.name << " (rule "
                    << r.intended << ")" << (r.target.empty() ? "" : " on " + r.target) << "\n";
                missed += r.applicable && !r.detected();
            }
            if (missed) code = engine_bug;
        }
    });

    // sweep
    auto* sw = app.add_subcommand("sweep", "re-solve a scenario over a list of parameter values");
    detail::ModelFlags sw_f;
    std::string sw_param = "headway", sw_values;
    sw_f.add(sw);
    sw->add_option("--parameter,-p", sw_param, "headway, duration or beta")
        ->check(CLI::IsMember({"headway", "duration", "closure-duration", "beta"}));
    sw->add_option("--values", sw_values, "comma-separated minutes")->required();
    sw->callback([&] {
        auto inst = sw_f.load();
        SweepSpec spec;
        spec.parameter = parse_parameter(sw_param);
        for (const auto& v : detail::split(sw_values)) spec.values.push_back(std::stoll(v));
        spec.base = sw_f.load_scenario(inst);
        RunOptions ro{sw_f.config(), budget, threads};
        auto res = sweep(inst, spec, ro, &log);
        out << csv_header << "\n";
        for (const auto& p : res.points) out << p.row.csv() << "\n";
        for (const auto& n : res.notes) log.warn(n);
        for (const auto& v : res.violations) log.error("engine bug: " + v);
        code = res.violations.empty() ? ok : engine_bug;
    });

    // render
    auto* re = app.add_subcommand("render", "draw a space-time diagram");
    std::string re_instance, re_scenario, re_schedule, re_out, re_format = "svg", re_corridor;
    int re_columns = 120;
    re->add_option("--instance,-i", re_instance)->required()->check(CLI::ExistingFile);
    re->add_option("--scenario,-s", re_scenario, "closures to hatch")->check(CLI::ExistingFile);
    re->add_option("--schedule", re_schedule, "schedule JSON; the initial timetable when absent")
        ->check(CLI::ExistingFile);
    re->add_option("--format", re_format)->check(CLI::IsMember({"svg", "text"}));
    re->add_option("--corridor", re_corridor, "comma-separated station ids, top to bottom");
    re->add_option("--columns", re_columns, "text width")->check(CLI::Range(40, 1000));
    re->add_option("--out,-o", re_out, "output file; standard output when absent");
    re->callback([&] {
        auto inst = load_instance_file(re_instance);
        DisruptionScenario sc;
        if (!re_scenario.empty()) sc = load_scenario_file(re_scenario, inst);
        ScheduleSolution sol = schedule_from_timetable(inst);
        if (!re_schedule.empty()) sol = load_schedule(read_json_file(re_schedule));
        if (!sol.has_schedule && sol.status != SolveStatus::optimal)
            throw Error("nothing to draw: the schedule is " + status_name(sol.status));
        render::Options o;
        o.format = render::parse_format(re_format);
        o.corridor = detail::split(re_corridor);
        o.columns = re_columns;
        auto doc = render::diagram(sol, inst, sc, o);
        if (re_out.empty()) out << doc;
        else detail::write_file(re_out, doc);
    });

    // generate
    auto* ge = app.add_subcommand("generate", "write a seeded synthetic corridor instance");
    generate::CorridorOptions co;
    std::string ge_out, ge_scenario;
    Minute ge_duration = 120;
    ge->add_option("--trains", co.trains)->capture_default_str();
    ge->add_option("--stations", co.stations)->capture_default_str();
    ge->add_option("--capacity", co.capacity, "station capacity")->capture_default_str();
    ge->add_option("--out,-o", ge_out, "instance JSON")->required();
    ge->add_option("--scenario-out", ge_scenario, "also write a full closure of the busiest block at its busiest time");
    ge->add_option("--duration", ge_duration, "closure minutes for --scenario-out")->capture_default_str();
    ge->callback([&] {
        co.seed = seed;
        auto inst = generate::corridor(co);
        detail::write_file(ge_out, to_json(inst).dump(1) + "\n");
        out << "wrote " << inst.trains.size() << " trains on " << inst.network.blocks().size() << " blocks, baseline "
            << baseline_objective(inst.trains) << "\n";
        if (!ge_scenario.empty()) {
            auto b = generate::busiest_block(inst);
            auto c = generate::busiest_time(inst, b, 90);
            auto sc = generate::centred_closure(inst, inst.network.blocks()[b].id, c, ge_duration);
            detail::write_file(ge_scenario, to_json(sc).dump(1) + "\n");
            out << "closure " << sc.closures[0].block << " at " << sc.closures[0].start << " for " << ge_duration
                << " min\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        int r = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return r == 0 ? ok : failure;
    } catch (const Error& e) {
        log.error(e.what());
        return failure;
    } catch (const json::exception& e) {
        log.error(std::string("schema: ") + e.what());
        return failure;
    } catch (const std::exception& e) {
        log.error(e.what());
        return failure;
    }
    return code;
}

}  // namespace railsched::cli

#pragma once

// Space-time trajectory diagrams: stations on the vertical axis, time on the
// horizontal one, one line per train.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "railsched/core.hpp"
#include "railsched/schedule.hpp"

namespace railsched::render {

enum class Format { svg, text };

inline Format parse_format(const std::string& s) {
    if (s == "svg") return Format::svg;
    if (s == "text") return Format::text;
    throw Error("format must be svg or text", s);
}

struct Options {
    Format format = Format::svg;
    // Station ids from top to bottom. Empty means every node, walked depth first.
    std::vector<std::string> corridor;
    int columns = 120;  // text only
};

namespace detail {

struct Axis {
    std::vector<std::size_t> nodes;
    std::vector<double> offset;  // cumulative travel time from the first station
    std::map<std::size_t, std::size_t> row;
    bool strict = false;
};

inline Axis every_node(const RailNetwork& net) {
    Axis a;
    const auto n = net.nodes().size();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return net.degree(x) < net.degree(y); });
    for (auto root : order) {
        if (seen[root]) continue;
        std::vector<std::size_t> stack{root};
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            if (seen[v]) continue;
            seen[v] = true;
            a.nodes.push_back(v);
            auto inc = net.incident(v);
            for (auto it = inc.rbegin(); it != inc.rend(); ++it) {
                auto w = net.other_end(*it, v);
                if (!seen[w]) stack.push_back(w);
            }
        }
    }
    return a;
}

inline Axis make_axis(const Instance& inst, const std::vector<std::string>& corridor) {
    const auto& net = inst.network;
    Axis a;
    if (corridor.empty()) {
        a = every_node(net);
    } else {
        a.strict = true;
        std::set<std::size_t> dup;
        for (const auto& id : corridor) {
            auto v = net.node_at(id);
            if (!dup.insert(v).second) throw Error("corridor visits a station twice", id);
            a.nodes.push_back(v);
        }
        for (std::size_t i = 0; i + 1 < a.nodes.size(); ++i)
            if (!net.block_between(a.nodes[i], a.nodes[i + 1]))
                throw Error("corridor stations " + corridor[i] + " and " + corridor[i + 1] + " are not joined by a block");
    }
    double at = 0;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        if (i > 0) {
            auto b = net.block_between(a.nodes[i - 1], a.nodes[i]);
            at += b ? static_cast<double>(net.blocks()[*b].travel_time) : 0.0;
            if (!b) at += 1.0;
        }
        a.offset.push_back(at);
        a.row[a.nodes[i]] = i;
    }
    if (!a.nodes.empty() && a.offset.back() <= 0) {
        for (std::size_t i = 0; i < a.offset.size(); ++i) a.offset[i] = static_cast<double>(i);
    }
    return a;
}

struct Segment {
    Minute t0, t1;
    std::size_t r0, r1;
    bool opposite = false;
};

inline bool on_opposite_track(const Occupation& o, const Instance& inst, const DisruptionScenario& sc) {
    const auto& blk = inst.network.block(o.where);
    for (const auto& c : sc.closures)
        if (c.block == o.where && c.tracks_closed < blk.tracks && c.forward_track && *c.forward_track == o.forward &&
            o.entry < c.end() && c.start < o.exit)
            return true;
    return false;
}

/// Corridor segments per train, in instance order, with waits as level segments.
inline std::vector<std::pair<std::string, std::vector<Segment>>> segments(const ScheduleSolution& s,
                                                                          const Instance& inst,
                                                                          const DisruptionScenario& sc,
                                                                          const Axis& axis) {
    const auto& net = inst.network;
    std::vector<std::pair<std::string, std::vector<Segment>>> out;
    std::vector<std::string> offending;
    for (const auto& t : inst.trains) {
        std::vector<Occupation> legs;
        for (const auto& o : s.occupations)
            if (o.train == t.id && o.kind == Occupation::Kind::block) legs.push_back(o);
        std::sort(legs.begin(), legs.end(), [](const Occupation& x, const Occupation& y) { return x.entry < y.entry; });
        std::vector<Segment> segs;
        bool bad = false;
        for (const auto& o : legs) {
            auto b = net.block_at(o.where);
            auto from = o.forward ? net.block_from(b) : net.block_to(b);
            auto to = o.forward ? net.block_to(b) : net.block_from(b);
            auto rf = axis.row.find(from), rt = axis.row.find(to);
            if (rf == axis.row.end() || rt == axis.row.end()) continue;
            auto gap = rf->second > rt->second ? rf->second - rt->second : rt->second - rf->second;
            if (axis.strict && gap != 1) bad = true;
            if (!segs.empty() && segs.back().r1 == rf->second && segs.back().t1 < o.entry)
                segs.push_back({segs.back().t1, o.entry, rf->second, rf->second, false});
            segs.push_back({o.entry, o.exit, rf->second, rt->second, on_opposite_track(o, inst, sc)});
        }
        if (bad) offending.push_back(t.id);
        if (!segs.empty()) out.emplace_back(t.id, std::move(segs));
    }
    if (!offending.empty()) {
        std::string ids;
        for (const auto& id : offending) ids += (ids.empty() ? "" : ", ") + id;
        throw Error("corridor is not a common path for train(s) " + ids);
    }
    return out;
}

inline std::string xml(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '&': o += "&amp;"; break;
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

inline std::string clock(Minute m) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld:%02lld", static_cast<long long>(m / 60), static_cast<long long>(m % 60));
    return buf;
}

inline std::string label(const Node& n) { return n.name.empty() ? n.id : n.name; }

inline std::string svg(const ScheduleSolution& s, const Instance& inst, const DisruptionScenario& sc, const Axis& axis) {
    const auto& g = inst.grid;
    const auto& net = inst.network;
    const double left = 140, top = 30, width = 1100, height = std::max(200.0, 40.0 * axis.nodes.size());
    const double span = static_cast<double>(g.horizon());
    const double depth = axis.offset.empty() ? 1.0 : std::max(1.0, axis.offset.back());
    auto X = [&](Minute m) { return left + width * static_cast<double>(m - g.start()) / span; };
    auto Y = [&](std::size_t r) { return top + height * axis.offset[r] / depth; };
    auto trains = segments(s, inst, sc, axis);

    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + width + 40 << "\" height=\""
       << top + height + 60 << "\">\n"
       << "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
          "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"orange\" "
          "stroke-width=\"3\"/></pattern></defs>\n";

    os << "<g class=\"axes\" stroke=\"#999\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (std::size_t r = 0; r < axis.nodes.size(); ++r) {
        os << "<line x1=\"" << left << "\" y1=\"" << Y(r) << "\" x2=\"" << left + width << "\" y2=\"" << Y(r)
           << "\" stroke-width=\"0.5\"/>\n"
           << "<text x=\"" << left - 6 << "\" y=\"" << Y(r) + 4 << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#000\">"
           << xml(label(net.nodes()[axis.nodes[r]])) << "</text>\n";
    }
    const int ticks = g.intervals();
    int every = 0;
    for (bool divides : {true, false}) {
        for (Minute step : {5, 10, 15, 30, 60, 120, 180, 240, 360, 720, 1440}) {
            if (step % g.delta() != 0 || (divides && (g.horizon()) % step != 0)) continue;
            if (ticks / static_cast<int>(step / g.delta()) <= 24) {
                every = static_cast<int>(step / g.delta());
                break;
            }
        }
        if (every) break;
    }
    if (!every) every = std::max(1, ticks / 24);
    for (int u = 0; u <= ticks; ++u) {
        double x = X(g.to_minute(u));
        bool major = u % every == 0;
        os << "<line x1=\"" << x << "\" y1=\"" << top + height << "\" x2=\"" << x << "\" y2=\""
           << top + height + (major ? 6 : 3) << "\"/>\n";
        if (major)
            os << "<text x=\"" << x << "\" y=\"" << top + height + 18 << "\" text-anchor=\"middle\" stroke=\"none\" "
               << "fill=\"#000\">" << clock(g.to_minute(u)) << "</text>\n";
    }
    os << "</g>\n";

    for (const auto& c : sc.closures) {
        auto b = net.block_at(c.block);
        auto ra = axis.row.find(net.block_from(b)), rb = axis.row.find(net.block_to(b));
        if (ra == axis.row.end() || rb == axis.row.end()) continue;
        double y0 = std::min(Y(ra->second), Y(rb->second)), y1 = std::max(Y(ra->second), Y(rb->second));
        os << "<rect class=\"closure\" data-block=\"" << xml(c.block) << "\" x=\"" << X(c.start) << "\" y=\"" << y0
           << "\" width=\"" << X(c.end()) - X(c.start) << "\" height=\"" << std::max(2.0, y1 - y0)
           << "\" fill=\"url(#hatch)\" stroke=\"orange\"/>\n";
    }

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#ff7f0e"};
    for (std::size_t i = 0; i < trains.size(); ++i) {
        const auto& [id, segs] = trains[i];
        const char* colour = palette[i % 10];
        os << "<g class=\"train\" data-train=\"" << xml(id) << "\" stroke=\"" << colour
           << "\" fill=\"none\" stroke-width=\"1.5\">\n";
        std::size_t j = 0;
        while (j < segs.size()) {
            bool dash = segs[j].opposite;
            os << "<polyline" << (dash ? " class=\"opposite\" stroke-dasharray=\"4 3\"" : "") << " points=\"" << X(segs[j].t0)
               << "," << Y(segs[j].r0);
            std::size_t k = j;
            for (; k < segs.size() && segs[k].opposite == dash; ++k) {
                if (k > j && (segs[k].t0 != segs[k - 1].t1 || segs[k].r0 != segs[k - 1].r1))
                    break;
                os << " " << X(segs[k].t1) << "," << Y(segs[k].r1);
            }
            os << "\"/>\n";
            j = k;
        }
        os << "<text x=\"" << X(segs.front().t0) << "\" y=\"" << Y(segs.front().r0) - 3
           << "\" font-size=\"9\" stroke=\"none\" fill=\"" << colour << "\">" << xml(id) << "</text>\n</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline char symbol(std::size_t i) {
    static const std::string s = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    return i < s.size() ? s[i] : '#';
}

inline std::string text(const ScheduleSolution& s, const Instance& inst, const DisruptionScenario& sc, const Axis& axis,
                        int columns) {
    const auto& g = inst.grid;
    const auto& net = inst.network;
    auto trains = segments(s, inst, sc, axis);
    std::size_t lw = 4;
    for (auto v : axis.nodes) lw = std::max(lw, std::min<std::size_t>(14, label(net.nodes()[v]).size()));
    const int avail = std::max(10, columns - static_cast<int>(lw) - 2);
    const int per = std::max(1, (g.intervals() + avail - 1) / avail);
    const int cols = (g.intervals() + per - 1) / per;
    auto cell_span = [&](int c) { return std::pair{g.to_minute(c * per), g.to_minute(std::min(g.intervals(), (c + 1) * per))}; };

    // Rows alternate station, gap, station, ...
    const std::size_t nrows = axis.nodes.empty() ? 0 : 2 * axis.nodes.size() - 1;
    std::vector<std::string> grid(nrows, std::string(static_cast<std::size_t>(cols), ' '));
    auto put = [&](std::size_t row, int c, char ch) {
        char& cur = grid[row][static_cast<std::size_t>(c)];
        if (cur == ' ' || cur == '/' || cur == '.') cur = ch;
        else if (cur != ch) cur = '*';
    };
    for (std::size_t r = 0; r < nrows; r += 2) std::fill(grid[r].begin(), grid[r].end(), '.');
    for (const auto& cl : sc.closures) {
        auto b = net.block_at(cl.block);
        auto ra = axis.row.find(net.block_from(b)), rb = axis.row.find(net.block_to(b));
        if (ra == axis.row.end() || rb == axis.row.end()) continue;
        auto lo = std::min(ra->second, rb->second), hi = std::max(ra->second, rb->second);
        for (int c = 0; c < cols; ++c) {
            auto [a, e] = cell_span(c);
            if (a < cl.end() && cl.start < e)
                for (auto r = 2 * lo + 1; r < 2 * hi; ++r) grid[r][static_cast<std::size_t>(c)] = '/';
        }
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < inst.trains.size(); ++i) index[inst.trains[i].id] = i;
    for (const auto& [id, segs] : trains) {
        char ch = symbol(index[id]);
        for (const auto& sg : segs) {
            for (int c = 0; c < cols; ++c) {
                auto [a, e] = cell_span(c);
                bool hit = sg.t0 == sg.t1 ? (a <= sg.t0 && sg.t0 < e) : (a < sg.t1 && sg.t0 < e);
                if (!hit) continue;
                if (sg.r0 == sg.r1) {
                    put(2 * sg.r0, c, ch);
                    continue;
                }
                // Gap row r is drawn while the line sits within one row of it.
                double y0 = 2.0 * sg.r0, y1 = 2.0 * sg.r1, len = static_cast<double>(sg.t1 - sg.t0);
                double ya = y0 + (y1 - y0) * static_cast<double>(std::max(a, sg.t0) - sg.t0) / len;
                double yb = y0 + (y1 - y0) * static_cast<double>(std::min(e, sg.t1) - sg.t0) / len;
                double lo = std::min(ya, yb), hi = std::max(ya, yb);
                for (auto r = 2 * std::min(sg.r0, sg.r1) + 1; r < 2 * std::max(sg.r0, sg.r1); r += 2)
                    if (lo < r + 1.0 && r - 1.0 < hi) put(r, c, sg.opposite ? '=' : ch);
            }
        }
    }

    std::ostringstream os;
    auto pad = [&](std::string s) {
        if (s.size() > lw) s.resize(lw);
        return s + std::string(lw - s.size(), ' ') + " |";
    };
    std::string ruler(static_cast<std::size_t>(cols), ' ');
    for (int c = 0; c < cols; c += 10) {
        auto lab = clock(cell_span(c).first);
        for (std::size_t i = 0; i < lab.size() && c + static_cast<int>(i) < cols; ++i) ruler[c + i] = lab[i];
    }
    os << pad("time") << ruler << "\n";
    for (std::size_t r = 0; r < nrows; ++r)
        os << pad(r % 2 == 0 ? label(net.nodes()[axis.nodes[r / 2]]) : "") << grid[r] << "\n";
    std::string legend = "one column = " + std::to_string(per * g.delta()) + " min; '/' closed, '=' opposite track, '*' shared;";
    std::string line;
    for (const auto& [id, segs] : trains) {
        std::string item = std::string(" ") + symbol(index[id]) + "=" + id;
        if (line.size() + item.size() > static_cast<std::size_t>(columns)) {
            legend += "\n" + line;
            line.clear();
        }
        line += item;
    }
    os << legend << "\n";
    if (!line.empty()) os << line << "\n";
    return os.str();
}

}  // namespace detail

inline std::string diagram(const ScheduleSolution& s, const Instance& inst, const DisruptionScenario& sc,
                           const Options& opt = {}) {
    auto axis = detail::make_axis(inst, opt.corridor);
    return opt.format == Format::svg ? detail::svg(s, inst, sc, axis) : detail::text(s, inst, sc, axis, opt.columns);
}

}  // namespace railsched::render

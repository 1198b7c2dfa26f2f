#pragma once

// MPS writer for the linear form of a model.

#include <sstream>
#include <string>
#include <vector>

#include "railsched/model.hpp"

namespace railsched::solver {

struct MpsDocument {
    std::string text;
    bool free_format = false;
    std::vector<std::string> warnings;
};

inline MpsDocument export_mps(const model::RescheduleModel& m) {
    using model::Sense;
    MpsDocument doc;
    std::vector<std::string> row_names;
    for (std::size_t r = 0; r < m.rows.size(); ++r)
        row_names.push_back("R" + std::to_string(r) + "_" + std::to_string(m.rows[r].tag));
    for (const auto& c : m.columns)
        if (c.name.size() > 8) doc.free_format = true;
    for (const auto& r : row_names)
        if (r.size() > 8) doc.free_format = true;
    if (doc.free_format) doc.warnings.push_back("names exceed 8 characters; writing free-format MPS");

    const bool fixed = !doc.free_format;
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    // Field layout of fixed MPS: columns 2-3, 5-12, 15-22, 25-36, 40-47, 50-61.
    auto line = [&](const std::string& f1, const std::string& f2, const std::string& f3, const std::string& f4) {
        if (!fixed) {
            std::string s = " " + f1;
            for (const auto* f : {&f2, &f3, &f4})
                if (!f->empty()) s += " " + *f;
            return s + "\n";
        }
        std::string s = " " + pad(f1, 2) + " " + pad(f2, 8) + "  " + pad(f3, 8) + "  " + f4;
        while (!s.empty() && s.back() == ' ') s.pop_back();
        return s + "\n";
    };

    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> by_col(m.columns.size());
    for (std::size_t r = 0; r < m.rows.size(); ++r)
        for (const auto& t : m.rows[r].terms) by_col[t.col].emplace_back(r, t.coef);
    std::vector<std::int64_t> obj(m.columns.size(), 0);
    for (const auto& t : m.objective) obj[t.col] += t.coef;

    std::ostringstream os;
    os << "NAME          RAILSCHED\n";
    os << "OBJSENSE\n    MIN\n";
    os << "ROWS\n";
    os << line("N", "COST", "", "");
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        const char* s = m.rows[r].sense == Sense::le ? "L" : m.rows[r].sense == Sense::ge ? "G" : "E";
        os << line(s, row_names[r], "", "");
    }
    os << "COLUMNS\n";
    bool in_int = false;
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
        const auto& col = m.columns[c];
        if (col.binary != in_int) {
            os << (fixed ? "    MARKER                 'MARKER'                 " : " MARKER 'MARKER' ")
               << (col.binary ? "'INTORG'" : "'INTEND'") << "\n";
            in_int = col.binary;
        }
        if (obj[c]) os << line("", col.name, "COST", std::to_string(obj[c]));
        for (auto [r, v] : by_col[c]) os << line("", col.name, row_names[r], std::to_string(v));
        if (!obj[c] && by_col[c].empty()) os << line("", col.name, "COST", "0");
    }
    if (in_int) os << (fixed ? "    MARKER                 'MARKER'                 " : " MARKER 'MARKER' ") << "'INTEND'\n";
    os << "RHS\n";
    if (m.objective_constant) os << line("", "RHS", "COST", std::to_string(-m.objective_constant));
    for (std::size_t r = 0; r < m.rows.size(); ++r)
        if (m.rows[r].rhs) os << line("", "RHS", row_names[r], std::to_string(m.rows[r].rhs));
    os << "BOUNDS\n";
    for (const auto& col : m.columns) {
        if (col.binary) {
            os << line("BV", "BND", col.name, "");
        } else {
            os << line("LO", "BND", col.name, std::to_string(col.lb));
            os << line("UP", "BND", col.name, std::to_string(col.ub));
        }
    }
    os << "ENDATA\n";
    doc.text = os.str();
    return doc;
}

}  // namespace railsched::solver

#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ffo/config.hpp"
#include "ffo/errors.hpp"
#include "ffo/numerics.hpp"

namespace ffo {

/// One pass/fail item. Upper-bound checks pass when value <= limit,
/// lower-bound checks (witnesses) when value >= limit.
struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool lower_bound = false;

    bool passed() const { return lower_bound ? value >= limit : value <= limit; }
};

/// Columns of doubles, one row per grid time.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunReport {
    std::string mode;
    TimeGrid grid;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<Check> checks;
    std::optional<double> wall_time_s;

    void metric(std::string name, double v) { metrics.emplace_back(std::move(name), v); }

    void check_max(std::string name, double value, double limit) {
        metric(name, value);
        checks.push_back({std::move(name), value, limit, false});
    }

    void check_min(std::string name, double value, double limit) {
        metric(name, value);
        checks.push_back({std::move(name), value, limit, true});
    }

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed()) return false;
        return true;
    }

    /// Appends another report's metrics and checks under "prefix." names.
    void absorb(const RunReport& other, const std::string& prefix) {
        for (const auto& [k, v] : other.metrics) metrics.emplace_back(prefix + "." + k, v);
        for (auto c : other.checks) {
            c.name = prefix + "." + c.name;
            checks.push_back(std::move(c));
        }
    }
};

struct RunResult {
    RunReport report;
    /// Named trajectory tables; the single-mode runs produce one.
    std::vector<std::pair<std::string, Table>> tables;
};

inline constexpr int kReportSchema = 1;

inline ordered_json report_to_json(const RunReport& r) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["mode"] = r.mode;
    j["grid"] = {{"t_final", r.grid.t_final()}, {"dt", r.grid.dt}, {"steps", r.grid.steps}};
    ordered_json metrics = ordered_json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = v;
    j["metrics"] = metrics;
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"limit", c.limit},
                          {"kind", c.lower_bound ? "min" : "max"},
                          {"pass", c.passed()}});
    j["checks"] = checks;
    j["passed"] = r.passed();
    if (r.wall_time_s) j["wall_time_s"] = *r.wall_time_s;
    return j;
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

/// Writes the selected columns; an empty selector means all of them.
inline void emit_csv(std::ostream& os, const Table& table, const std::vector<std::string>& selector = {}) {
    std::vector<std::size_t> idx;
    if (selector.empty()) {
        for (std::size_t k = 0; k < table.columns.size(); ++k) idx.push_back(k);
    } else {
        for (std::size_t s = 0; s < selector.size(); ++s) {
            std::size_t k = 0;
            while (k < table.columns.size() && table.columns[k] != selector[s]) ++k;
            if (k == table.columns.size())
                throw ConfigError("output.fields[" + std::to_string(s) + "]", "no column named '" + selector[s] + "'");
            idx.push_back(k);
        }
    }
    for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << table.columns[idx[k]];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << format_double(row[idx[k]]);
        os << '\n';
    }
}

inline void emit_json(std::ostream& os, const RunReport& report) { os << report_to_json(report).dump(2) << '\n'; }

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
template <class Writer>
void write_atomically(const std::filesystem::path& path, const Writer& writer) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmp.string() + " for writing");
        writer(os);
        os.flush();
        if (!os) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace ffo

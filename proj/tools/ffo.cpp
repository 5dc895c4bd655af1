// ffo: scenario runner for the forced fermion oscillator toolkit.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ffo/scenario.hpp"
#include "ffo/sweep.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct Options {
    std::string mode;
    std::string config_path;
    std::optional<double> dt;
    std::optional<double> t_final;
    std::optional<double> tol;
    std::optional<std::size_t> sweep;
    std::uint64_t seed = 0;
    std::string family = "general";
    std::optional<std::string> out;
    std::optional<std::string> format;
    bool timing = false;
};

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ffo::Error("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

ffo::ScenarioConfig load_config(const Options& opt) {
    ffo::ScenarioConfig cfg = opt.config_path.empty() ? ffo::ScenarioConfig{} : ffo::parse_config(read_file(opt.config_path));
    const auto mode = ffo::parse_mode(opt.mode);
    if (!mode) throw ffo::ConfigError("mode", "unknown mode '" + opt.mode + "'");
    cfg.run.mode = *mode;
    if (opt.dt) cfg.run.dt = *opt.dt;
    if (opt.t_final) cfg.run.t_final = *opt.t_final;
    if (opt.tol) cfg.run.tolerances.dynamical = *opt.tol;
    if (opt.out) cfg.output.path = *opt.out;
    if (opt.format) cfg.output.format = *opt.format == "csv" ? ffo::OutputFormat::csv : ffo::OutputFormat::json;
    ffo::validate(cfg);
    return cfg;
}

fs::path table_path(const fs::path& base, const std::string& table, bool several) {
    if (!several) return base;
    fs::path p = base;
    p.replace_filename(base.stem().string() + "." + table + base.extension().string());
    return p;
}

/// Writes CSV tables and/or the JSON report for one scenario. Returns the
/// report text when it was not written to a file.
std::optional<std::string> emit(const ffo::ScenarioConfig& cfg, const ffo::RunResult& res) {
    const auto& o = cfg.output;
    const std::string report = ffo::report_to_json(res.report).dump(2) + "\n";
    if (o.format == ffo::OutputFormat::csv) {
        if (o.path.empty()) {
            for (const auto& [name, table] : res.tables) ffo::emit_csv(std::cout, table, o.fields);
            return std::nullopt;
        }
        const bool several = res.tables.size() > 1;
        for (const auto& [name, table] : res.tables)
            ffo::write_atomically(table_path(o.path, name, several),
                                  [&](std::ostream& os) { ffo::emit_csv(os, table, several ? std::vector<std::string>{} : o.fields); });
        return report;
    }
    if (o.path.empty()) return report;
    ffo::write_atomically(o.path, [&](std::ostream& os) { os << report; });
    return std::nullopt;
}

ffo::RunResult timed_run(const ffo::ScenarioConfig& cfg, bool timing) {
    const auto start = std::chrono::steady_clock::now();
    ffo::RunResult res = ffo::run(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (timing) res.report.wall_time_s = secs;
    return res;
}

int run_single(const Options& opt) {
    const ffo::ScenarioConfig cfg = load_config(opt);
    const ffo::RunResult res = timed_run(cfg, opt.timing);
    if (auto text = emit(cfg, res)) std::cout << *text;
    return res.report.passed() ? kExitPass : kExitFail;
}

ffo::SweepFamily parse_family(const std::string& s) {
    if (s == "general") return ffo::SweepFamily::general;
    if (s == "unforced") return ffo::SweepFamily::unforced;
    if (s == "forced") return ffo::SweepFamily::forced_nonvanishing;
    throw ffo::ConfigError("--family", "expected general, unforced or forced");
}

struct SweepOutcome {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool passed = false;
    std::string error;
    std::vector<std::string> failed;
};

SweepOutcome run_scenario(const ffo::ScenarioConfig& base, std::size_t index, std::uint64_t seed, ffo::SweepFamily family,
                          const std::optional<fs::path>& dir, bool timing) {
    SweepOutcome out{index, seed, false, {}, {}};
    try {
        ffo::ScenarioConfig cfg = base;
        ffo::SpecSampler sampler(seed);
        cfg.hamiltonian = sampler.draw(family);
        cfg.output.path.clear();
        ffo::RunResult res = timed_run(cfg, timing);
        out.passed = res.report.passed();
        for (const auto& c : res.report.checks)
            if (!c.passed()) out.failed.push_back(c.name);
        if (dir) {
            const std::string stem = "scenario_" + std::to_string(index);
            ffo::ordered_json doc = ffo::report_to_json(res.report);
            doc["seed"] = seed;
            doc["config"] = ffo::to_json(cfg);
            ffo::write_atomically(*dir / (stem + ".json"), [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
            if (cfg.output.format == ffo::OutputFormat::csv)
                for (const auto& [name, table] : res.tables)
                    ffo::write_atomically(*dir / (stem + "." + name + ".csv"),
                                          [&](std::ostream& os) { ffo::emit_csv(os, table); });
        }
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

int run_sweep(const Options& opt) {
    const ffo::ScenarioConfig base = load_config(opt);
    const ffo::SweepFamily family = parse_family(opt.family);
    const std::size_t n = *opt.sweep;
    std::optional<fs::path> dir;
    if (opt.out) {
        dir = fs::path(*opt.out);
        fs::create_directories(*dir);
    }
    std::vector<std::uint64_t> seeds(n);
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32)};
    std::vector<std::uint32_t> words(2 * n);
    seq.generate(words.begin(), words.end());
    for (std::size_t i = 0; i < n; ++i) seeds[i] = (std::uint64_t{words[2 * i]} << 32) | words[2 * i + 1];

    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<SweepOutcome> outcomes;
    outcomes.reserve(n);
    for (std::size_t start = 0; start < n; start += workers) {
        std::vector<std::future<SweepOutcome>> batch;
        for (std::size_t i = start; i < std::min(n, start + workers); ++i)
            batch.push_back(std::async(std::launch::async, run_scenario, std::cref(base), i, seeds[i], family, std::cref(dir),
                                       opt.timing));
        for (auto& f : batch) outcomes.push_back(f.get());
    }

    ffo::ordered_json summary;
    summary["schema"] = ffo::kReportSchema;
    summary["mode"] = "sweep";
    summary["base_mode"] = ffo::mode_name(base.run.mode);
    summary["family"] = opt.family;
    summary["seed"] = opt.seed;
    summary["scenarios"] = n;
    std::size_t passed = 0, errors = 0;
    ffo::ordered_json list = ffo::ordered_json::array();
    for (const auto& o : outcomes) {
        passed += o.passed;
        errors += !o.error.empty();
        ffo::ordered_json item{{"index", o.index}, {"seed", o.seed}, {"passed", o.passed}};
        if (!o.failed.empty()) item["failed_checks"] = o.failed;
        if (!o.error.empty()) item["error"] = o.error;
        list.push_back(item);
    }
    summary["passed_count"] = passed;
    summary["error_count"] = errors;
    summary["results"] = list;
    summary["passed"] = passed == n;
    std::cout << summary.dump(2) << '\n';
    if (errors) return kExitError;
    return passed == n ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forced fermion oscillator: invariants, states and phases"};
    Options opt;
    app.add_option("mode", opt.mode, "evolve | invariants | reduce | coherence | phases | grassmann-selftest | all")
        ->required();
    app.add_option("--config", opt.config_path, "scenario JSON document");
    app.add_option("--dt", opt.dt, "grid step (overrides run.dt)");
    app.add_option("--t-final", opt.t_final, "final time (overrides run.t_final)");
    app.add_option("--tol", opt.tol, "dynamical tolerance (overrides run.tolerances.dynamical)");
    auto* sweep = app.add_option("--sweep", opt.sweep, "run N random scenarios");
    app.add_option("--seed", opt.seed, "seed for --sweep")->needs(sweep);
    app.add_option("--family", opt.family, "general | unforced | forced (for --sweep)")->needs(sweep);
    app.add_option("--out", opt.out, "output file (a directory with --sweep)");
    app.add_option("--format", opt.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--timing", opt.timing, "add wall_time_s to the report");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }
    try {
        return opt.sweep ? run_sweep(opt) : run_single(opt);
    } catch (const std::exception& e) {
        std::cerr << "ffo: " << e.what() << '\n';
        return kExitError;
    }
}

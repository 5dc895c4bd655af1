#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ffo/errors.hpp"
#include "ffo/hamiltonian.hpp"
#include "ffo/invariants.hpp"
#include "ffo/propagator.hpp"
#include "ffo/reduction.hpp"
#include "ffo/time_signal.hpp"
#include "ffo/tolerances.hpp"

namespace ffo {

using ordered_json = nlohmann::ordered_json;

enum class Mode { evolve, invariants, reduce, coherence, phases, grassmann_selftest, all };

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::evolve: return "evolve";
        case Mode::invariants: return "invariants";
        case Mode::reduce: return "reduce";
        case Mode::coherence: return "coherence";
        case Mode::phases: return "phases";
        case Mode::grassmann_selftest: return "grassmann-selftest";
        case Mode::all: return "all";
    }
    return "?";
}

inline std::optional<Mode> parse_mode(const std::string& s) {
    for (Mode m : {Mode::evolve, Mode::invariants, Mode::reduce, Mode::coherence, Mode::phases,
                   Mode::grassmann_selftest, Mode::all})
        if (s == mode_name(m)) return m;
    return std::nullopt;
}

enum class OutputFormat { json, csv };

struct RunSettings {
    Mode mode = Mode::all;
    double t_final = 10.0;
    double dt = 1e-3;
    StepMethod method = StepMethod::midpoint_exponential;
    /// Propagator steps per grid interval.
    std::size_t substeps = 4;
    std::size_t unitarity_renorm_every = 100;
    ToleranceConfig tolerances;

    PropagatorConfig propagator() const { return {dt, method, unitarity_renorm_every, substeps}; }
};

struct InitialData {
    NuVector nu0 = kCanonicalNu;
    EpsilonState epsilon0{1.0, 0.0};
    StateVec2 state = kVacuum;
};

struct OutputSettings {
    OutputFormat format = OutputFormat::json;
    std::string path;
    /// Empty means every column.
    std::vector<std::string> fields;
};

struct ScenarioConfig {
    HamiltonianSpec hamiltonian{TimeSignal::constant(0.0), TimeSignal::constant(0.0), TimeSignal::constant(0.0),
                                TimeSignal::constant(0.0)};
    RunSettings run;
    InitialData initial;
    OutputSettings output;
};

namespace detail {

/// Walks a JSON object, remembers the keys it consumed and rejects the rest.
class ObjectReader {
public:
    ObjectReader(const ordered_json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const { return j_.contains(key); }

    const ordered_json& at(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError(child(key), "missing required number");
        }
        return as_number(at(key), child(key));
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        if (!has(key)) return fallback;
        const auto& v = at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ConfigError(child(key), "expected a non-negative integer");
        return static_cast<std::size_t>(v.get<long long>());
    }

    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError(child(key), "missing required string");
        }
        const auto& v = at(key);
        if (!v.is_string()) throw ConfigError(child(key), "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        if (!has(key)) throw ConfigError(child(key), "missing required array");
        const auto& v = at(key);
        if (!v.is_array()) throw ConfigError(child(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(as_number(v[i], child(key) + "[" + std::to_string(i) + "]"));
        return out;
    }

    Complex complex(const std::string& key, Complex fallback) {
        if (!has(key)) return fallback;
        const auto& v = at(key);
        const std::string p = child(key);
        if (!v.is_array() || v.size() != 2) throw ConfigError(p, "expected [re, im]");
        return {as_number(v[0], p + "[0]"), as_number(v[1], p + "[1]")};
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(child(it.key()), "unknown key");
    }

    static double as_number(const ordered_json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError(path, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
        return x;
    }

private:
    const ordered_json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline TimeSignal parse_signal(const ordered_json& j, const std::string& path) {
    if (j.is_number()) return TimeSignal::constant(ObjectReader::as_number(j, path));
    ObjectReader r(j, path);
    const std::string type = r.string("type");
    TimeSignal out = TimeSignal::constant(0.0);
    if (type == "constant") {
        out = TimeSignal::constant(r.number("value"));
    } else if (type == "sinusoid") {
        const double a = r.number("amplitude"), w = r.number("frequency");
        out = TimeSignal::sinusoid(a, w, r.number("phase", 0.0), r.number("offset", 0.0));
    } else if (type == "polynomial") {
        auto c = r.numbers("coeffs");
        if (c.empty()) throw ConfigError(r.child("coeffs"), "needs at least one coefficient");
        out = TimeSignal::polynomial(std::move(c));
    } else if (type == "exponential") {
        const double a = r.number("amplitude"), k = r.number("rate");
        out = TimeSignal::exponential(a, k, r.number("offset", 0.0));
    } else if (type == "tabulated") {
        auto t = r.numbers("times");
        auto v = r.numbers("values");
        try {
            out = TimeSignal::tabulated(std::move(t), std::move(v));
        } catch (const Error& e) {
            throw ConfigError(r.child("times"), e.what());
        }
    } else {
        throw ConfigError(r.child("type"), "unknown signal type '" + type + "'");
    }
    r.finish();
    return out;
}

inline ordered_json signal_to_json(const TimeSignal& s) {
    struct Visitor {
        ordered_json operator()(const signal::Constant& c) const { return {{"type", "constant"}, {"value", c.value}}; }
        ordered_json operator()(const signal::Sinusoid& x) const {
            return {{"type", "sinusoid"}, {"amplitude", x.amplitude}, {"frequency", x.frequency},
                    {"phase", x.phase},   {"offset", x.offset}};
        }
        ordered_json operator()(const signal::Polynomial& p) const { return {{"type", "polynomial"}, {"coeffs", p.coeffs}}; }
        ordered_json operator()(const signal::Exponential& e) const {
            return {{"type", "exponential"}, {"amplitude", e.amplitude}, {"rate", e.rate}, {"offset", e.offset}};
        }
        ordered_json operator()(const signal::Tabulated& t) const {
            return {{"type", "tabulated"}, {"times", t.times()}, {"values", t.values()}};
        }
    };
    return std::visit(Visitor{}, s.variant());
}

inline ordered_json complex_to_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

inline const char* method_name(StepMethod m) { return m == StepMethod::rk4 ? "rk4" : "midpoint_exponential"; }

}  // namespace detail

/// Checks that do not depend on the document layout; also run after CLI overrides.
inline void validate(const ScenarioConfig& cfg) {
    const RunSettings& r = cfg.run;
    if (!(r.dt > 0.0)) throw ConfigError("run.dt", "must be positive");
    if (!(r.t_final >= r.dt)) throw ConfigError("run.t_final", "must be at least run.dt");
    if (r.substeps == 0) throw ConfigError("run.substeps", "must be at least 1");
    const ToleranceConfig& t = r.tolerances;
    for (const auto& [name, v] : {std::pair{"algebraic", t.algebraic}, {"dynamical", t.dynamical}, {"f_min", t.f_min},
                                  {"nu_min", t.nu_min}, {"vacuum_nu_min", t.vacuum_nu_min}, {"unitarity", t.unitarity}})
        if (!(v > 0.0)) throw ConfigError(std::string("run.tolerances.") + name, "must be positive");
    if (!cfg.initial.nu0.finite()) throw ConfigError("initial.nu0", "must be finite");
}

/// Strict parse of a scenario document. Every error names the offending field.
inline ScenarioConfig parse_config(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("<document>", e.what());
    }
    ScenarioConfig cfg;
    detail::ObjectReader top(root, "");
    if (top.has("hamiltonian")) {
        detail::ObjectReader h(top.at("hamiltonian"), "hamiltonian");
        const auto sig = [&h](const char* key) {
            return h.has(key) ? detail::parse_signal(h.at(key), h.child(key)) : TimeSignal::constant(0.0);
        };
        TimeSignal omega = sig("omega");
        TimeSignal f_re = sig("f_re");
        TimeSignal f_im = sig("f_im");
        TimeSignal g = sig("g");
        h.finish();
        cfg.hamiltonian = HamiltonianSpec(std::move(omega), std::move(f_re), std::move(f_im), std::move(g));
    }
    if (top.has("run")) {
        detail::ObjectReader r(top.at("run"), "run");
        RunSettings& s = cfg.run;
        const std::string mode = r.string("mode", std::string(mode_name(s.mode)));
        const auto m = parse_mode(mode);
        if (!m) throw ConfigError("run.mode", "unknown mode '" + mode + "'");
        s.mode = *m;
        s.t_final = r.number("t_final", s.t_final);
        s.dt = r.number("dt", s.dt);
        const std::string method = r.string("method", std::string(detail::method_name(s.method)));
        if (method == "midpoint_exponential")
            s.method = StepMethod::midpoint_exponential;
        else if (method == "rk4")
            s.method = StepMethod::rk4;
        else
            throw ConfigError("run.method", "unknown method '" + method + "'");
        s.substeps = r.count("substeps", s.substeps);
        s.unitarity_renorm_every = r.count("unitarity_renorm_every", s.unitarity_renorm_every);
        if (r.has("tolerances")) {
            detail::ObjectReader t(r.at("tolerances"), "run.tolerances");
            ToleranceConfig& tol = s.tolerances;
            tol.algebraic = t.number("algebraic", tol.algebraic);
            tol.dynamical = t.number("dynamical", tol.dynamical);
            tol.f_min = t.number("f_min", tol.f_min);
            tol.nu_min = t.number("nu_min", tol.nu_min);
            tol.vacuum_nu_min = t.number("vacuum_nu_min", tol.vacuum_nu_min);
            tol.unitarity = t.number("unitarity", tol.unitarity);
            t.finish();
        }
        r.finish();
    }
    if (top.has("initial")) {
        detail::ObjectReader i(top.at("initial"), "initial");
        InitialData& d = cfg.initial;
        if (i.has("nu0")) {
            detail::ObjectReader n(i.at("nu0"), "initial.nu0");
            d.nu0 = {n.complex("minus", 0.0), n.complex("plus", 0.0), n.complex("three", 0.0)};
            n.finish();
        }
        if (i.has("epsilon0")) {
            detail::ObjectReader e(i.at("epsilon0"), "initial.epsilon0");
            d.epsilon0 = {e.complex("eps", 1.0), e.complex("eps_dot", 0.0)};
            e.finish();
        }
        if (i.has("state")) {
            detail::ObjectReader st(i.at("state"), "initial.state");
            d.state = {st.complex("amp0", 1.0), st.complex("amp1", 0.0)};
            st.finish();
        }
        i.finish();
    }
    if (top.has("output")) {
        detail::ObjectReader o(top.at("output"), "output");
        const std::string fmt = o.string("format", "json");
        if (fmt == "json")
            cfg.output.format = OutputFormat::json;
        else if (fmt == "csv")
            cfg.output.format = OutputFormat::csv;
        else
            throw ConfigError("output.format", "expected 'csv' or 'json'");
        cfg.output.path = o.string("path", "");
        if (o.has("fields")) {
            const auto& f = o.at("fields");
            if (!f.is_array()) throw ConfigError("output.fields", "expected an array of column names");
            for (std::size_t k = 0; k < f.size(); ++k) {
                if (!f[k].is_string()) throw ConfigError("output.fields[" + std::to_string(k) + "]", "expected a string");
                cfg.output.fields.push_back(f[k].get<std::string>());
            }
        }
        o.finish();
    }
    top.finish();
    validate(cfg);
    return cfg;
}

inline ordered_json to_json(const ScenarioConfig& cfg) {
    const HamiltonianSpec& h = cfg.hamiltonian;
    const RunSettings& r = cfg.run;
    const ToleranceConfig& t = r.tolerances;
    const InitialData& i = cfg.initial;
    ordered_json out;
    out["hamiltonian"] = {{"omega", detail::signal_to_json(h.omega_signal())},
                          {"f_re", detail::signal_to_json(h.f_re_signal())},
                          {"f_im", detail::signal_to_json(h.f_im_signal())},
                          {"g", detail::signal_to_json(h.g_signal())}};
    out["run"] = {{"mode", mode_name(r.mode)},
                  {"t_final", r.t_final},
                  {"dt", r.dt},
                  {"method", detail::method_name(r.method)},
                  {"substeps", r.substeps},
                  {"unitarity_renorm_every", r.unitarity_renorm_every},
                  {"tolerances",
                   {{"algebraic", t.algebraic},
                    {"dynamical", t.dynamical},
                    {"f_min", t.f_min},
                    {"nu_min", t.nu_min},
                    {"vacuum_nu_min", t.vacuum_nu_min},
                    {"unitarity", t.unitarity}}}};
    out["initial"] = {
        {"nu0",
         {{"minus", detail::complex_to_json(i.nu0.minus)},
          {"plus", detail::complex_to_json(i.nu0.plus)},
          {"three", detail::complex_to_json(i.nu0.three)}}},
        {"epsilon0", {{"eps", detail::complex_to_json(i.epsilon0.eps)}, {"eps_dot", detail::complex_to_json(i.epsilon0.eps_dot)}}},
        {"state", {{"amp0", detail::complex_to_json(i.state.amp0)}, {"amp1", detail::complex_to_json(i.state.amp1)}}}};
    out["output"] = {{"format", cfg.output.format == OutputFormat::csv ? "csv" : "json"},
                     {"path", cfg.output.path},
                     {"fields", cfg.output.fields}};
    return out;
}

}  // namespace ffo

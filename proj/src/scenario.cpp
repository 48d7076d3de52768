#include "adiabat/scenario.hpp"

#include "adiabat/errors.hpp"
#include "adiabat/models.hpp"
#include "adiabat/propagate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace adiabat::lab {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what)
{
    throw Error(ErrorKind::InvalidParams, "config " + where + ": " + what);
}

void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            invalid(where, "unknown key '" + key + "'");
        }
    }
}

const Json& require_object(const Json& j, const std::string& where)
{
    if (!j.is_object()) {
        invalid(where, "expected an object");
    }
    return j;
}

double as_number(const Json& j, const std::string& where)
{
    if (!j.is_number()) {
        invalid(where, "expected a number, got " + j.dump());
    }
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
        invalid(where, "must be finite");
    }
    return x;
}

double positive_number(const Json& j, const std::string& where)
{
    const double x = as_number(j, where);
    if (!(x > 0.0)) {
        invalid(where, "must be > 0, got " + report::format_double(x));
    }
    return x;
}

std::int64_t as_integer(const Json& j, const std::string& where)
{
    if (!j.is_number_integer()) {
        invalid(where, "expected an integer, got " + j.dump());
    }
    return j.get<std::int64_t>();
}

std::size_t count(const Json& j, const std::string& where, std::int64_t minimum)
{
    const std::int64_t v = as_integer(j, where);
    if (v < minimum) {
        invalid(where, "must be >= " + std::to_string(minimum) + ", got " + std::to_string(v));
    }
    return static_cast<std::size_t>(v);
}

Complex as_complex(const Json& j, const std::string& where)
{
    if (j.is_number()) {
        return {as_number(j, where), 0.0};
    }
    if (j.is_array() && j.size() == 2) {
        return {as_number(j[0], where), as_number(j[1], where)};
    }
    invalid(where, "expected a number or [re, im], got " + j.dump());
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

num::ComplexMatrix matrix_from_json(const Json& j, const std::string& where)
{
    if (!j.is_array() || j.empty()) {
        invalid(where, "expected a non-empty array of rows");
    }
    const std::size_t dim = j.size();
    num::ComplexMatrix out(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        if (!j[r].is_array() || j[r].size() != dim) {
            invalid(where, "row " + std::to_string(r) + " must have " + std::to_string(dim) + " entries");
        }
        for (std::size_t c = 0; c < dim; ++c) {
            out(r, c) = as_complex(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
    }
    return out;
}

Json matrix_to_json(const num::ComplexMatrix& m)
{
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) {
            row.push_back(complex_to_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Normalizes parameters (defaults filled, numbers typed) so that
// parse -> serialize -> parse is the identity.
ModelSpec parse_model(const Json& j, const std::string& where, bool allow_dual)
{
    require_object(j, where);
    reject_unknown(j, where, {"name", "params"});
    if (!j.contains("name") || !j["name"].is_string()) {
        invalid(where + ".name", "required string");
    }
    ModelSpec spec;
    spec.name = j["name"].get<std::string>();
    const Json params = j.contains("params") ? require_object(j["params"], where + ".params") : Json::object();
    const std::string p = where + ".params";
    auto number_or = [&](const char* key, double fallback) {
        return params.contains(key) ? as_number(params[key], p + "." + key) : fallback;
    };

    if (spec.name == "driven_two_level") {
        reject_unknown(params, p, {"eps", "V", "omega0"});
        spec.params = {{"eps", number_or("eps", 1.0)}, {"V", number_or("V", 0.02)}, {"omega0", number_or("omega0", 1.0)}};
    } else if (spec.name == "rotating_field") {
        reject_unknown(params, p, {"eps", "turns"});
        spec.params = {{"eps", number_or("eps", 1.0)},
                       {"turns", params.contains("turns") ? count(params["turns"], p + ".turns", 1) : 1}};
    } else if (spec.name == "linear_interpolation") {
        reject_unknown(params, p, {"h0", "h1"});
        for (const char* key : {"h0", "h1"}) {
            if (!params.contains(key)) {
                invalid(p + "." + key, "required Hermitian matrix");
            }
        }
        const auto h0 = matrix_from_json(params["h0"], p + ".h0");
        const auto h1 = matrix_from_json(params["h1"], p + ".h1");
        spec.params = {{"h0", matrix_to_json(h0)}, {"h1", matrix_to_json(h1)}};
    } else if (spec.name == "grover_adiabatic") {
        reject_unknown(params, p, {"n_qubits", "marked"});
        if (!params.contains("n_qubits")) {
            invalid(p + ".n_qubits", "required integer in 1-6");
        }
        spec.params = {{"n_qubits", count(params["n_qubits"], p + ".n_qubits", 1)},
                       {"marked", params.contains("marked") ? count(params["marked"], p + ".marked", 0) : 0}};
    } else if (spec.name == "dual_of" && allow_dual) {
        reject_unknown(params, p, {"base", "grid_points"});
        if (!params.contains("base")) {
            invalid(p + ".base", "dual_of requires a wrapped base model");
        }
        spec.params["base"] = to_json_model(parse_model(params["base"], p + ".base", false));
        if (params.contains("grid_points")) {
            spec.params["grid_points"] = count(params["grid_points"], p + ".grid_points", 2);
        }
    } else if (spec.name == "dual_of") {
        invalid(where, "dual_of must wrap one of the four base models, not another dual_of");
    } else {
        invalid(where + ".name", "unknown model '" + spec.name + "' (see list-models)");
    }
    return spec;
}

} // namespace

Json to_json_model(const ModelSpec& spec) { return Json{{"name", spec.name}, {"params", spec.params}}; }

ScenarioConfig parse_config(const Json& doc)
{
    require_object(doc, "root");
    reject_unknown(doc, "root",
                   {"name", "model", "total_time", "steps", "initial_state", "pairs", "diagnostics", "sweep",
                    "output_dir", "tolerances", "min_time", "timeseries"});
    ScenarioConfig cfg;
    if (doc.contains("name")) {
        if (!doc["name"].is_string() || doc["name"].get<std::string>().empty()) {
            invalid("name", "expected a non-empty string");
        }
        cfg.name = doc["name"].get<std::string>();
        if (cfg.name.find_first_of("/\\") != std::string::npos) {
            invalid("name", "must not contain path separators");
        }
    }
    if (!doc.contains("model")) {
        invalid("model", "required");
    }
    cfg.model = parse_model(doc["model"], "model", true);
    if (!doc.contains("total_time")) {
        invalid("total_time", "required");
    }
    cfg.total_time = positive_number(doc["total_time"], "total_time");
    if (!doc.contains("steps")) {
        invalid("steps", "required");
    }
    cfg.steps = count(doc["steps"], "steps", 1);

    if (doc.contains("initial_state")) {
        const Json& init = doc["initial_state"];
        if (init.is_number_integer()) {
            cfg.initial_level = count(init, "initial_state", 0);
        } else {
            require_object(init, "initial_state");
            reject_unknown(init, "initial_state", {"level", "amplitudes"});
            if (init.contains("level") == init.contains("amplitudes")) {
                invalid("initial_state", "give exactly one of 'level' or 'amplitudes'");
            }
            if (init.contains("level")) {
                cfg.initial_level = count(init["level"], "initial_state.level", 0);
            } else {
                if (!init["amplitudes"].is_array() || init["amplitudes"].empty()) {
                    invalid("initial_state.amplitudes", "expected a non-empty array");
                }
                cfg.initial_level.reset();
                for (std::size_t i = 0; i < init["amplitudes"].size(); ++i) {
                    cfg.initial_amplitudes.push_back(
                        as_complex(init["amplitudes"][i], "initial_state.amplitudes[" + std::to_string(i) + "]"));
                }
            }
        }
    }

    if (doc.contains("pairs")) {
        if (!doc["pairs"].is_array()) {
            invalid("pairs", "expected an array of [n, m]");
        }
        for (std::size_t i = 0; i < doc["pairs"].size(); ++i) {
            const Json& pr = doc["pairs"][i];
            const std::string where = "pairs[" + std::to_string(i) + "]";
            if (!pr.is_array() || pr.size() != 2) {
                invalid(where, "expected [n, m]");
            }
            const std::size_t n = count(pr[0], where, 0);
            const std::size_t m = count(pr[1], where, 0);
            if (n == m) {
                invalid(where, "levels must differ");
            }
            cfg.pairs.emplace_back(n, m);
        }
    }

    if (doc.contains("diagnostics")) {
        if (!doc["diagnostics"].is_array()) {
            invalid("diagnostics", "expected an array of section names");
        }
        for (const auto& d : doc["diagnostics"]) {
            if (!d.is_string()) {
                invalid("diagnostics", "expected strings");
            }
            const std::string name = d.get<std::string>();
            const bool known = name == "timeseries" || std::find(report::kSections.begin(), report::kSections.end(),
                                                                 name) != report::kSections.end();
            if (!known) {
                invalid("diagnostics", "unknown section '" + name + "'");
            }
            cfg.diagnostics.push_back(name);
        }
    }

    if (doc.contains("sweep")) {
        if (!doc["sweep"].is_array() || doc["sweep"].empty()) {
            invalid("sweep", "expected a non-empty array of total times");
        }
        for (std::size_t i = 0; i < doc["sweep"].size(); ++i) {
            const double t = positive_number(doc["sweep"][i], "sweep[" + std::to_string(i) + "]");
            if (!cfg.sweep.empty() && t <= cfg.sweep.back()) {
                invalid("sweep", "values must be strictly ascending");
            }
            cfg.sweep.push_back(t);
        }
    }

    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) {
            invalid("output_dir", "expected a string");
        }
        cfg.output_dir = doc["output_dir"].get<std::string>();
    }

    if (doc.contains("tolerances")) {
        const Json& tol = require_object(doc["tolerances"], "tolerances");
        reject_unknown(tol, "tolerances", {"gap", "phase_guard", "max_step_phase", "cutoff_fraction"});
        if (tol.contains("gap")) cfg.tolerances.gap = positive_number(tol["gap"], "tolerances.gap");
        if (tol.contains("phase_guard")) cfg.tolerances.phase_guard = positive_number(tol["phase_guard"], "tolerances.phase_guard");
        if (tol.contains("max_step_phase")) cfg.tolerances.max_step_phase = positive_number(tol["max_step_phase"], "tolerances.max_step_phase");
        if (tol.contains("cutoff_fraction")) cfg.tolerances.cutoff_fraction = positive_number(tol["cutoff_fraction"], "tolerances.cutoff_fraction");
    }

    if (doc.contains("min_time")) {
        const Json& mt = require_object(doc["min_time"], "min_time");
        reject_unknown(mt, "min_time", {"s_steps", "multiplier"});
        if (mt.contains("s_steps")) cfg.min_time_s_steps = count(mt["s_steps"], "min_time.s_steps", 1);
        if (mt.contains("multiplier")) cfg.min_time_multiplier = positive_number(mt["multiplier"], "min_time.multiplier");
    }

    if (doc.contains("timeseries")) {
        const Json& ts = require_object(doc["timeseries"], "timeseries");
        reject_unknown(ts, "timeseries", {"stride"});
        if (ts.contains("stride")) cfg.timeseries_stride = count(ts["stride"], "timeseries.stride", 0);
    }
    return cfg;
}

ScenarioConfig load_config(const fs::path& file)
{
    std::ifstream in(file);
    if (!in) {
        throw Error(ErrorKind::InvalidParams, "cannot open config file '" + file.string() + "'");
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::InvalidParams, "config '" + file.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

Json to_json(const ScenarioConfig& cfg)
{
    Json doc;
    doc["name"] = cfg.name;
    doc["model"] = to_json_model(cfg.model);
    doc["total_time"] = cfg.total_time;
    doc["steps"] = cfg.steps;
    if (cfg.initial_level) {
        doc["initial_state"] = {{"level", *cfg.initial_level}};
    } else {
        Json amps = Json::array();
        for (const auto& a : cfg.initial_amplitudes) {
            amps.push_back(complex_to_json(a));
        }
        doc["initial_state"] = {{"amplitudes", amps}};
    }
    if (!cfg.pairs.empty()) {
        Json pairs = Json::array();
        for (const auto& [n, m] : cfg.pairs) {
            pairs.push_back({n, m});
        }
        doc["pairs"] = pairs;
    }
    if (!cfg.diagnostics.empty()) {
        doc["diagnostics"] = cfg.diagnostics;
    }
    if (!cfg.sweep.empty()) {
        doc["sweep"] = cfg.sweep;
    }
    doc["output_dir"] = cfg.output_dir;
    doc["tolerances"] = {{"gap", cfg.tolerances.gap},
                         {"phase_guard", cfg.tolerances.phase_guard},
                         {"max_step_phase", cfg.tolerances.max_step_phase},
                         {"cutoff_fraction", cfg.tolerances.cutoff_fraction}};
    doc["min_time"] = {{"s_steps", cfg.min_time_s_steps}, {"multiplier", cfg.min_time_multiplier}};
    doc["timeseries"] = {{"stride", cfg.timeseries_stride}};
    return doc;
}

ModelPtr build_model(const ModelSpec& spec, double total_time, std::size_t steps)
{
    const Json& p = spec.params;
    if (spec.name == "driven_two_level") {
        return models::driven_two_level({p["eps"].get<double>(), p["V"].get<double>(), p["omega0"].get<double>()},
                                        total_time);
    }
    if (spec.name == "rotating_field") {
        return models::rotating_field(p["eps"].get<double>(), total_time, p["turns"].get<int>());
    }
    if (spec.name == "linear_interpolation") {
        return models::linear_interpolation(matrix_from_json(p["h0"], "h0"), matrix_from_json(p["h1"], "h1"),
                                            total_time);
    }
    if (spec.name == "grover_adiabatic") {
        return models::grover_adiabatic(p["n_qubits"].get<int>(), p["marked"].get<std::size_t>(), total_time);
    }
    if (spec.name == "dual_of") {
        const ModelSpec base{p["base"]["name"].get<std::string>(), p["base"]["params"]};
        const std::size_t grid = p.contains("grid_points") ? p["grid_points"].get<std::size_t>() : steps + 1;
        return models::dual_of(build_model(base, total_time, steps), grid);
    }
    throw Error(ErrorKind::InvalidParams, "unknown model '" + spec.name + "'");
}

namespace {

std::mutex g_write_mutex;

void write_file(const fs::path& file, const std::string& text)
{
    const std::lock_guard<std::mutex> lock(g_write_mutex);
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + file.string() + "'");
    }
    out << text;
}

report::Options options_for(const ScenarioConfig& cfg, std::size_t tracked)
{
    report::Options opts;
    opts.pairs = cfg.pairs;
    opts.tracked_level = tracked;
    for (const auto& d : cfg.diagnostics) {
        if (d != "timeseries") {
            opts.sections.insert(d);
        }
    }
    // Only "timeseries" requested: keep the report minimal but valid.
    if (opts.sections.empty() && !cfg.diagnostics.empty()) {
        opts.sections.insert("probabilities");
    }
    opts.phase_guard = cfg.tolerances.phase_guard;
    opts.cutoff_fraction = cfg.tolerances.cutoff_fraction;
    opts.gap_tolerance = cfg.tolerances.gap;
    opts.min_time_s_steps = cfg.min_time_s_steps;
    opts.min_time_multiplier = cfg.min_time_multiplier;
    return opts;
}

struct Evolved {
    diag::SpectrumPath path;
    propagate::EvolutionTrace trace;
    std::size_t tracked = 0;
};

Evolved evolve_model(const HamiltonianModel& model, const ScenarioConfig& cfg, std::size_t steps)
{
    const std::size_t dim = model.dim();
    if (cfg.initial_level && *cfg.initial_level >= dim) {
        throw Error(ErrorKind::InvalidParams, "initial level " + std::to_string(*cfg.initial_level) +
                                                  " out of range for dim " + std::to_string(dim));
    }
    if (!cfg.initial_level && cfg.initial_amplitudes.size() != dim) {
        throw Error(ErrorKind::DimMismatch, "initial amplitudes have " + std::to_string(cfg.initial_amplitudes.size()) +
                                                " entries, model dim is " + std::to_string(dim));
    }
    for (const auto& [n, m] : cfg.pairs) {
        if (n >= dim || m >= dim) {
            throw Error(ErrorKind::InvalidParams, "pair (" + std::to_string(n) + ", " + std::to_string(m) +
                                                      ") out of range for dim " + std::to_string(dim));
        }
    }
    propagate::check_step_budget(model, steps, cfg.tolerances.max_step_phase);

    Evolved out;
    out.path = diag::spectrum_path(model, steps, cfg.tolerances.gap);
    num::StateVector psi0;
    if (cfg.initial_level) {
        out.tracked = *cfg.initial_level;
        psi0 = out.path.vectors[0][out.tracked];
    } else {
        psi0 = num::StateVector(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            psi0[i] = cfg.initial_amplitudes[i];
        }
        double best = -1.0;
        for (std::size_t n = 0; n < dim; ++n) {
            const double p = std::norm(num::inner(out.path.vectors[0][n], psi0));
            if (p > best + 1e-12) {
                best = p;
                out.tracked = n;
            }
        }
    }
    out.trace = propagate::evolve(model, psi0, steps, false, cfg.tolerances.max_step_phase);
    return out;
}

bool wants_timeseries(const ScenarioConfig& cfg)
{
    return cfg.diagnostics.empty() ||
           std::find(cfg.diagnostics.begin(), cfg.diagnostics.end(), "timeseries") != cfg.diagnostics.end();
}

void log_if(const Logger& log, const std::string& msg)
{
    if (log) {
        log(msg);
    }
}

Json run_one(const HamiltonianModel& model, const ScenarioConfig& cfg, const std::string& role,
             const fs::path& stem, RunOutcome& outcome, const Logger& log)
{
    const auto start = std::chrono::steady_clock::now();
    log_if(log, "evolving " + model.label() + " over " + std::to_string(cfg.steps) + " steps");
    const Evolved ev = evolve_model(model, cfg, cfg.steps);
    const report::Options opts = options_for(cfg, ev.tracked);
    const report::Inputs in{model, ev.path, ev.trace};

    Json doc = report::assemble(in, opts);
    doc["config"] = to_json(cfg);
    doc["role"] = role;

    const fs::path report_file = fs::path(stem.string() + ".json");
    write_file(report_file, report::dump(doc));
    outcome.files.push_back(report_file);

    if (wants_timeseries(cfg)) {
        const std::size_t stride =
            cfg.timeseries_stride > 0 ? cfg.timeseries_stride : std::max<std::size_t>(1, cfg.steps / 10000);
        std::ostringstream ts;
        const auto pairs = opts.pairs.empty() ? report::default_pairs(model.dim(), ev.tracked) : opts.pairs;
        report::write_timeseries(ts, in, pairs, stride);
        const fs::path ts_file = fs::path(stem.string() + ".tsv");
        write_file(ts_file, ts.str());
        outcome.files.push_back(ts_file);
    }

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const fs::path timing = fs::path(stem.string() + "_timing.json");
    write_file(timing, report::dump(Json{{"wall_clock_seconds", seconds}}));
    outcome.files.push_back(timing);
    log_if(log, "wrote " + report_file.string());
    return doc;
}

void prepare_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
}

report::Pair sweep_pair(const ScenarioConfig& cfg)
{
    if (!cfg.pairs.empty()) {
        return cfg.pairs.front();
    }
    const std::size_t level = cfg.initial_level.value_or(0);
    return {level, level == 0 ? 1 : 0};
}

} // namespace

RunOutcome run(const ScenarioConfig& cfg, const fs::path& output_dir, const Logger& log)
{
    prepare_dir(output_dir);
    RunOutcome outcome;
    if (cfg.model.name == "dual_of") {
        const ModelSpec base_spec{cfg.model.params["base"]["name"].get<std::string>(),
                                  cfg.model.params["base"]["params"]};
        const ModelPtr base = build_model(base_spec, cfg.total_time, cfg.steps);
        propagate::check_step_budget(*base, cfg.steps, cfg.tolerances.max_step_phase);
        const std::size_t grid = cfg.model.params.contains("grid_points")
                                     ? cfg.model.params["grid_points"].get<std::size_t>()
                                     : cfg.steps + 1;
        const ModelPtr dual = models::dual_of(base, grid);
        outcome.reports.push_back(run_one(*base, cfg, "base", output_dir / (cfg.name + "_base"), outcome, log));
        outcome.reports.push_back(run_one(*dual, cfg, "dual", output_dir / (cfg.name + "_dual"), outcome, log));
    } else {
        const ModelPtr model = build_model(cfg.model, cfg.total_time, cfg.steps);
        outcome.reports.push_back(run_one(*model, cfg, "single", output_dir / cfg.name, outcome, log));
    }
    return outcome;
}

SweepOutcome sweep(const ScenarioConfig& cfg, const fs::path& output_dir, const Logger& log)
{
    if (cfg.sweep.empty()) {
        throw Error(ErrorKind::InvalidParams, "config sweep: list of total times is empty or missing");
    }
    prepare_dir(output_dir);
    const double dt = cfg.total_time / static_cast<double>(cfg.steps);
    const report::Pair pair = sweep_pair(cfg);

    auto one = [&](double big_t) {
        SweepRow row;
        row.total_time = big_t;
        row.steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(big_t / dt)));
        log_if(log, "sweep entry T = " + report::format_double(big_t) + ", steps = " + std::to_string(row.steps));
        const ModelPtr model = build_model(cfg.model, big_t, row.steps);
        const Evolved ev = evolve_model(*model, cfg, row.steps);
        const report::Inputs in{*model, ev.path, ev.trace};
        const auto amp = diag::amplitudes(ev.trace, ev.path);
        row.summary = report::summarize_pair(in, amp, pair.first, pair.second, options_for(cfg, ev.tracked));
        return row;
    };

    // Bounded fan-out; results keep the sweep order.
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    SweepOutcome out;
    for (std::size_t begin = 0; begin < cfg.sweep.size(); begin += width) {
        std::vector<std::future<SweepRow>> batch;
        for (std::size_t i = begin; i < std::min(cfg.sweep.size(), begin + width); ++i) {
            batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, one, cfg.sweep[i]));
        }
        for (auto& f : batch) {
            out.rows.push_back(f.get());
        }
    }

    if (out.rows.size() >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const double n = static_cast<double>(out.rows.size());
        for (const auto& r : out.rows) {
            const double x = std::log(r.total_time);
            const double y = std::log(r.summary.max_a_frozen);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    std::ostringstream tsv;
    const std::string a = std::to_string(pair.first) + "_" + std::to_string(pair.second);
    tsv << "T\tsteps\tmax_A_" << a << "_frozen\tmax_A_" << a << "_live\tabs_eps_" << a << "\tabs_direct_"
        << pair.second << "\tM_re\tM_im\tM_total\tzero_count_bound\tcutoff_omega_tilde\tdominant_path\ttraditional_metric\n";
    for (const auto& r : out.rows) {
        const auto& s = r.summary;
        tsv << report::format_double(r.total_time) << '\t' << r.steps << '\t' << report::format_double(s.max_a_frozen)
            << '\t' << report::format_double(s.max_a_live) << '\t' << report::format_double(std::abs(s.eps)) << '\t'
            << report::format_double(std::abs(s.direct)) << '\t' << s.zeros.re << '\t' << s.zeros.im << '\t'
            << s.zeros.total() << '\t' << report::format_double(s.bound) << '\t'
            << report::format_double(s.cutoff.omega_tilde_c) << '\t' << report::format_double(s.dominant) << '\t'
            << report::format_double(s.metric) << '\n';
    }
    if (out.slope) {
        tsv << "# slope_log_max_A_frozen_vs_log_T\t" << report::format_double(*out.slope) << '\n';
    }
    out.table = output_dir / (cfg.name + "_sweep.tsv");
    write_file(out.table, tsv.str());
    log_if(log, "wrote " + out.table.string());
    return out;
}

std::string list_models()
{
    return R"(driven_two_level      H(t) = -(eps/2) sz - V sin(omega0 t) sx
    eps          number > 0     optional, default 1
    V            number >= 0    optional, default 0.02
    omega0       number > 0     optional, default 1

rotating_field        H(t) = -(eps/2) [cos th sz + sin th sx], th = 2 pi turns t / T
    eps          number > 0     optional, default 1
    turns        integer >= 1   optional, default 1

linear_interpolation  H(t) = (1 - t/T) h0 + (t/T) h1
    h0           Hermitian matrix, required; rows of numbers or [re, im] pairs
    h1           Hermitian matrix, required; same dimension as h0

grover_adiabatic      H(s) = (1 - s)(I - |u><u|) + s (I - |m><m|)
    n_qubits     integer 1-6    required
    marked       integer in [0, 2^n_qubits)   optional, default 0

dual_of               Hbar(t) = -U^dagger(t) H(t) U(t), U the propagator of the wrapped model
    base         required: the wrapped model {"name": ..., "params": {...}}, one of
                 driven_two_level, rotating_field, linear_interpolation, grover_adiabatic
    grid_points  integer >= 2   optional, default steps + 1
)";
}

int exit_code_for(const std::exception& e)
{
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        if (is_numerical_guard(err->kind())) {
            return 3;
        }
        switch (err->kind()) {
        case ErrorKind::InvalidParams:
        case ErrorKind::DimMismatch:
        case ErrorKind::NotNormalized:
        case ErrorKind::NonHermitian:
            return 2;
        default:
            return 1;
        }
    }
    if (dynamic_cast<const Json::exception*>(&e) != nullptr) {
        return 2;
    }
    return 1;
}

} // namespace adiabat::lab

#include "adiabat/report.hpp"

#include "adiabat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace adiabat::report {

namespace {

// Initial populations below this are treated as empty when checking the
// frozen-amplitude bound (it is identically zero there).
constexpr double kPopulatedThreshold = 1e-12;

Json complex_json(Complex z)
{
    return Json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}};
}

Json check(double value, double tolerance, bool pass)
{
    return Json{{"value", value}, {"tolerance", tolerance}, {"pass", pass}};
}

double max_abs(const std::vector<Complex>& xs)
{
    double best = 0.0;
    for (const auto& x : xs) {
        best = std::max(best, std::abs(x));
    }
    return best;
}

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void emit(std::ostringstream& out, const Json& j, int depth)
{
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) { // std::map order: sorted
            if (!first) {
                out << ",\n";
            }
            first = false;
            out << inner << Json(key).dump() << ": ";
            emit(out, value, depth + 1);
        }
        out << '\n' << pad << '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out << "[]";
            return;
        }
        if (std::all_of(j.begin(), j.end(), is_scalar)) {
            out << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) {
                    out << ", ";
                }
                emit(out, j[i], depth + 1);
            }
            out << ']';
            return;
        }
        out << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i > 0) {
                out << ",\n";
            }
            out << inner;
            emit(out, j[i], depth + 1);
        }
        out << '\n' << pad << ']';
        return;
    }
    case Json::value_t::number_float:
        out << format_double(j.get<double>());
        return;
    default:
        out << j.dump();
        return;
    }
}

} // namespace

std::string format_double(double x)
{
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    // Keep doubles recognizably floating point so re-parsing preserves the type.
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string dump(const Json& doc)
{
    std::ostringstream out;
    emit(out, doc, 0);
    out << '\n';
    return out.str();
}

std::vector<Pair> default_pairs(std::size_t dim, std::size_t tracked_level)
{
    std::vector<Pair> out;
    for (std::size_t n = 0; n < dim; ++n) {
        for (std::size_t m = 0; m < dim; ++m) {
            if (n != m && (dim <= 8 || n == tracked_level || m == tracked_level)) {
                out.emplace_back(n, m);
            }
        }
    }
    return out;
}

PairSummary summarize_pair(const Inputs& in, const diag::AmplitudePath& amp, std::size_t n, std::size_t m,
                           const Options& opts)
{
    const diag::CouplingPath a = diag::a_nm_path(amp, in.path, in.model, n, m);
    PairSummary out;
    out.max_a_frozen = max_abs(a.frozen);
    out.max_a_live = max_abs(a.live);
    out.eps = diag::adiabatic_error(a, in.path, opts.phase_guard);
    out.direct = diag::error_direct(amp, m);
    out.zeros = diag::count_derivative_zeros(a.frozen);
    out.bound = diag::zero_count_bound(a.frozen, out.zeros.total());
    const auto transform = diag::fourier_a(a.frozen, in.model.total_time());
    out.cutoff = diag::cutoff_frequency(transform, opts.cutoff_fraction);
    out.dominant = diag::dominant_path_estimate(transform, in.path, n, m);
    out.metric = diag::traditional_metric(in.path, in.model, n, m);
    return out;
}

Json assemble(const Inputs& in, const Options& opts)
{
    const auto& path = in.path;
    const std::size_t dim = path.dim();
    if (opts.tracked_level >= dim) {
        throw Error(ErrorKind::InvalidParams, "tracked level " + std::to_string(opts.tracked_level) +
                                                  " out of range for dim " + std::to_string(dim));
    }
    const std::vector<Pair> pairs = opts.pairs.empty() ? default_pairs(dim, opts.tracked_level) : opts.pairs;
    const diag::AmplitudePath amp = diag::amplitudes(in.trace, path);

    Json doc;
    doc["model"] = {{"label", in.model.label()},
                    {"dim", dim},
                    {"total_time", in.model.total_time()},
                    {"steps", in.trace.step_count},
                    {"dt", path.step()}};
    doc["tracked_level"] = opts.tracked_level;
    doc["gap_tolerance"] = path.gap_tolerance;

    Json invariants = Json::object();

    // Pair diagnostics.
    const bool want_pairs = opts.enabled("traditional_metric") || opts.enabled("errors") ||
                            opts.enabled("zero_counts") || opts.enabled("fourier");
    if (want_pairs) {
        Json rows = Json::array();
        double metric_max = 0.0;
        double worst_bound_slack = -std::numeric_limits<double>::infinity();
        bool bounds_hold = true;
        for (const auto& [n, m] : pairs) {
            Json row{{"n", n}, {"m", m}};
            if (path.is_degenerate(n, m)) {
                for (const auto& f : path.degenerate) {
                    if (f.n == std::min(n, m) && f.m == std::max(n, m)) {
                        row["degenerate"] = {{"time", f.time}, {"gap", f.gap}, {"grid_index", f.grid_index}};
                    }
                }
                rows.push_back(std::move(row));
                continue;
            }
            const PairSummary s = summarize_pair(in, amp, n, m, opts);
            metric_max = std::max(metric_max, s.metric);
            if (opts.enabled("traditional_metric")) {
                row["traditional_metric"] = s.metric;
            }
            if (opts.enabled("errors")) {
                row["eps_nm"] = complex_json(s.eps);
            }
            if (opts.enabled("zero_counts")) {
                row["max_A_frozen"] = s.max_a_frozen;
                row["max_A_live"] = s.max_a_live;
                row["zero_count"] = {{"re", s.zeros.re}, {"im", s.zeros.im}, {"total", s.zeros.total()}};
                row["zero_count_bound"] = s.bound;
                const bool populated = std::norm(amp.a.front()[n]) >= kPopulatedThreshold;
                row["source_populated"] = populated;
                const bool holds = std::abs(s.eps) <= s.bound;
                row["bound_holds"] = holds;
                if (populated) {
                    bounds_hold = bounds_hold && holds;
                    worst_bound_slack = std::max(worst_bound_slack, std::abs(s.eps) - s.bound);
                }
            }
            if (opts.enabled("fourier")) {
                row["cutoff_omega_tilde"] = s.cutoff.omega_tilde_c;
                row["cutoff_all_below"] = s.cutoff.all_below;
                row["dominant_path"] = s.dominant;
            }
            rows.push_back(std::move(row));
        }
        doc["pairs"] = std::move(rows);
        if (opts.enabled("traditional_metric")) {
            doc["traditional_metric_max"] = metric_max;
        }
        if (opts.enabled("zero_counts") && std::isfinite(worst_bound_slack)) {
            invariants["bound_validity"] = {{"max_excess", worst_bound_slack}, {"pass", bounds_hold}};
        }
    }

    // Per-level diagnostics.
    const auto probs = diag::level_probabilities(in.trace, path);
    Json levels = Json::array();
    double worst_consistency = 0.0;
    bool any_consistency = false;
    for (std::size_t level = 0; level < dim; ++level) {
        Json row{{"level", level}};
        if (opts.enabled("errors")) {
            const Complex direct = diag::error_direct(amp, level);
            row["error_direct"] = complex_json(direct);
            bool degenerate = false;
            for (std::size_t n = 0; n < dim; ++n) {
                degenerate = degenerate || (n != level && path.is_degenerate(n, level));
            }
            if (degenerate) {
                row["eps_m_degenerate"] = true;
            } else {
                const auto err = diag::level_error(amp, path, in.model, level, opts.phase_guard);
                row["eps_m"] = complex_json(err.total);
                row["consistency"] = std::abs(err.total - direct);
                worst_consistency = std::max(worst_consistency, std::abs(err.total - direct));
                any_consistency = true;
            }
        }
        if (opts.enabled("probabilities")) {
            double lo = 2.0, hi = -1.0, t_lo = 0.0;
            for (std::size_t k = 0; k < probs.size(); ++k) {
                if (probs[k][level] < lo) {
                    lo = probs[k][level];
                    t_lo = path.times[k];
                }
                hi = std::max(hi, probs[k][level]);
            }
            row["probability"] = {{"initial", probs.front()[level]},
                                  {"final", probs.back()[level]},
                                  {"min", lo},
                                  {"min_time", t_lo},
                                  {"max", hi}};
        }
        if (opts.enabled("drift")) {
            const auto drift = diag::eigenstate_drift(path, level);
            const auto it = std::min_element(drift.begin(), drift.end());
            row["drift"] = {{"final", drift.back()},
                            {"min", *it},
                            {"min_time", path.times[static_cast<std::size_t>(it - drift.begin())]}};
        }
        levels.push_back(std::move(row));
    }
    doc["levels"] = std::move(levels);
    if (any_consistency) {
        invariants["quadrature_consistency"] = check(worst_consistency, 1e-3, worst_consistency <= 1e-3);
    }

    if (opts.enabled("min_time")) {
        const auto mt = diag::min_time(in.model, opts.min_time_s_steps, opts.tracked_level, opts.gap_tolerance);
        const double recommended = opts.min_time_multiplier * mt.value;
        doc["min_time"] = {{"value", mt.value},
                           {"n", mt.n},
                           {"m", mt.m},
                           {"s", mt.s},
                           {"s_steps", opts.min_time_s_steps},
                           {"multiplier", opts.min_time_multiplier},
                           {"recommended_total_time", recommended},
                           {"total_time_satisfies", in.model.total_time() >= recommended}};
    }

    // Numerical hygiene.
    double sum_dev = 0.0, p_max = 0.0, p_min = 1.0;
    for (const auto& row : probs) {
        double sum = 0.0;
        for (double p : row) {
            sum += p;
            p_max = std::max(p_max, p);
            p_min = std::min(p_min, p);
        }
        sum_dev = std::max(sum_dev, std::abs(sum - 1.0));
    }
    double amp_dev = 0.0;
    for (const auto& row : amp.a) {
        double sum = 0.0;
        for (const auto& a : row) {
            sum += std::norm(a);
        }
        amp_dev = std::max(amp_dev, std::abs(sum - 1.0));
    }
    double norm_dev = 0.0;
    for (const auto& psi : in.trace.states) {
        norm_dev = std::max(norm_dev, std::abs(psi.norm() - 1.0));
    }
    double gauge_dev = 0.0;
    for (std::size_t k = 0; k + 1 < path.points(); ++k) {
        for (std::size_t n = 0; n < dim; ++n) {
            gauge_dev = std::max(gauge_dev, std::abs(num::inner(path.vectors[k][n], path.vectors[k + 1][n]).imag()));
        }
    }
    invariants["probability_completeness"] = check(sum_dev, 1e-8, sum_dev <= 1e-8);
    invariants["probability_range"] = {{"min", p_min}, {"max", p_max}, {"pass", p_min >= -1e-12 && p_max <= 1.0 + 1e-9}};
    invariants["amplitude_completeness"] = check(amp_dev, 1e-6, amp_dev <= 1e-6);
    invariants["norm_drift"] = check(norm_dev, 1e-8, norm_dev <= 1e-8);
    invariants["gauge_reality"] = check(gauge_dev, 1e-10, gauge_dev <= 1e-10);

    bool all_pass = true;
    for (const auto& [name, entry] : invariants.items()) {
        all_pass = all_pass && entry.at("pass").get<bool>();
    }
    doc["invariants"] = std::move(invariants);
    doc["invariants_pass"] = all_pass;

    Json flags = Json::array();
    for (const auto& f : path.degenerate) {
        flags.push_back({{"n", f.n}, {"m", f.m}, {"time", f.time}, {"gap", f.gap}, {"grid_index", f.grid_index}});
    }
    doc["degenerate_pairs"] = std::move(flags);
    return doc;
}

void write_timeseries(std::ostream& out, const Inputs& in, const std::vector<Pair>& pairs, std::size_t stride)
{
    const auto& path = in.path;
    const std::size_t dim = path.dim();
    stride = std::max<std::size_t>(stride, 1);
    const diag::AmplitudePath amp = diag::amplitudes(in.trace, path);
    const auto probs = diag::level_probabilities(in.trace, path);

    std::vector<diag::CouplingPath> couplings;
    out << 't';
    for (std::size_t n = 0; n < dim; ++n) {
        out << "\tP_" << n;
    }
    for (std::size_t n = 0; n < dim; ++n) {
        out << "\tabs_a_" << n;
    }
    for (const auto& [n, m] : pairs) {
        if (path.is_degenerate(n, m)) {
            continue;
        }
        couplings.push_back(diag::a_nm_path(amp, path, in.model, n, m));
        out << "\tre_A_" << n << '_' << m << "\tim_A_" << n << '_' << m;
    }
    out << '\n';

    const std::size_t last = path.points() - 1;
    for (std::size_t k = 0; k <= last; ++k) {
        if (k % stride != 0 && k != last) {
            continue;
        }
        out << format_double(path.times[k]);
        for (std::size_t n = 0; n < dim; ++n) {
            out << '\t' << format_double(probs[k][n]);
        }
        for (std::size_t n = 0; n < dim; ++n) {
            out << '\t' << format_double(std::abs(amp.a[k][n]));
        }
        for (const auto& c : couplings) {
            out << '\t' << format_double(c.live[k].real()) << '\t' << format_double(c.live[k].imag());
        }
        out << '\n';
    }
}

} // namespace adiabat::report

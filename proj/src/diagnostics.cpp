#include "adiabat/diagnostics.hpp"

#include "adiabat/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace adiabat::diag {

using num::ComplexMatrix;
using num::StateVector;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void degenerate_gap(double time, std::size_t n, std::size_t m, double gap)
{
    std::ostringstream msg;
    msg << "gap E_" << n << m << " = " << gap << " below tolerance at t = " << time;
    throw Error(ErrorKind::DegenerateGap, msg.str());
}

void require_level(std::size_t level, std::size_t dim)
{
    if (level >= dim) {
        throw Error(ErrorKind::InvalidParams, "level " + std::to_string(level) + " out of range for dim " +
                                                  std::to_string(dim));
    }
}

void require_pair(std::size_t n, std::size_t m, std::size_t dim)
{
    require_level(n, dim);
    require_level(m, dim);
    if (n == m) {
        throw Error(ErrorKind::InvalidParams, "pair needs distinct levels, got n = m = " + std::to_string(n));
    }
}

void require_shared_grid(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) {
        throw Error(ErrorKind::GridMismatch, "grids have " + std::to_string(a.size()) + " and " +
                                                 std::to_string(b.size()) + " points");
    }
    const double scale = a.empty() ? 1.0 : std::max(1.0, std::abs(a.back()));
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a[k] - b[k]) > 1e-9 * scale) {
            std::ostringstream msg;
            msg << "grid point " << k << " differs: " << a[k] << " vs " << b[k];
            throw Error(ErrorKind::GridMismatch, msg.str());
        }
    }
}

} // namespace

// ---------------------------------------------------------------------------
// SpectrumPath
// ---------------------------------------------------------------------------

double SpectrumPath::step() const
{
    return times.size() < 2 ? 0.0 : (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

double SpectrumPath::mean_gap(std::size_t k, std::size_t n, std::size_t m) const
{
    if (k == 0 || times[k] == 0.0) {
        return gap(0, n, m);
    }
    return (dynamical_phases[k][n] - dynamical_phases[k][m]) / times[k];
}

bool SpectrumPath::is_degenerate(std::size_t n, std::size_t m) const
{
    const auto [lo, hi] = std::minmax(n, m);
    return std::any_of(degenerate.begin(), degenerate.end(),
                       [&](const DegenerateFlag& f) { return f.n == lo && f.m == hi; });
}

void SpectrumPath::require_nondegenerate(std::size_t n, std::size_t m) const
{
    const auto [lo, hi] = std::minmax(n, m);
    for (const auto& f : degenerate) {
        if (f.n == lo && f.m == hi) {
            degenerate_gap(f.time, n, m, f.gap);
        }
    }
}

SpectrumPath spectrum_path(const HamiltonianModel& model, std::size_t steps, double gap_tolerance)
{
    if (steps == 0) {
        throw Error(ErrorKind::InvalidParams, "spectrum path needs at least one step");
    }
    const std::size_t dim = model.dim();
    const double dt = model.total_time() / static_cast<double>(steps);

    SpectrumPath path;
    path.gap_tolerance = gap_tolerance;
    path.times.reserve(steps + 1);
    path.values.reserve(steps + 1);
    path.vectors.reserve(steps + 1);
    path.dynamical_phases.reserve(steps + 1);

    std::vector<std::vector<bool>> flagged(dim, std::vector<bool>(dim, false));
    num::EigenSystem previous;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = k == steps ? model.total_time() : static_cast<double>(k) * dt;
        num::EigenSystem current = num::eigh(model.evaluate(t));
        if (k > 0) {
            current = num::align_phases(previous, current, gap_tolerance);
        }
        for (std::size_t n = 0; n < dim; ++n) {
            for (std::size_t m = n + 1; m < dim; ++m) {
                const double gap = current.values[n] - current.values[m];
                if (std::abs(gap) < gap_tolerance && !flagged[n][m]) {
                    flagged[n][m] = true;
                    path.degenerate.push_back({k, t, n, m, gap});
                }
            }
        }

        std::vector<double> phases(dim, 0.0);
        if (k > 0) {
            const double h = t - path.times.back();
            for (std::size_t n = 0; n < dim; ++n) {
                phases[n] = path.dynamical_phases.back()[n] + 0.5 * h * (path.values.back()[n] + current.values[n]);
            }
        }
        path.times.push_back(t);
        path.values.push_back(current.values);
        path.vectors.push_back(current.vectors);
        path.dynamical_phases.push_back(std::move(phases));
        previous = std::move(current);
    }
    return path;
}

// ---------------------------------------------------------------------------
// Couplings and the traditional condition
// ---------------------------------------------------------------------------

Complex coupling_element(const SpectrumPath& path, const HamiltonianModel& model, std::size_t k, std::size_t n,
                         std::size_t m)
{
    require_pair(n, m, path.dim());
    path.require_nondegenerate(n, m);
    const ComplexMatrix hdot = model.derivative(path.times.at(k));
    return num::expectation(path.vectors[k][m], hdot, path.vectors[k][n]) / path.gap(k, n, m);
}

double traditional_metric(const SpectrumPath& path, const HamiltonianModel& model, std::size_t n, std::size_t m)
{
    require_pair(n, m, path.dim());
    path.require_nondegenerate(n, m);
    double worst = 0.0;
    for (std::size_t k = 0; k < path.points(); ++k) {
        const ComplexMatrix hdot = model.derivative(path.times[k]);
        const double gap = path.gap(k, n, m);
        const double value = std::abs(num::expectation(path.vectors[k][m], hdot, path.vectors[k][n])) / (gap * gap);
        worst = std::max(worst, value);
    }
    return worst;
}

std::vector<PairValue> traditional_metric(const SpectrumPath& path, const HamiltonianModel& model)
{
    const std::size_t dim = path.dim();
    for (std::size_t n = 0; n < dim; ++n) {
        for (std::size_t m = n + 1; m < dim; ++m) {
            path.require_nondegenerate(n, m);
        }
    }
    std::vector<std::vector<double>> worst(dim, std::vector<double>(dim, 0.0));
    for (std::size_t k = 0; k < path.points(); ++k) {
        const ComplexMatrix hdot = model.derivative(path.times[k]);
        for (std::size_t n = 0; n < dim; ++n) {
            const StateVector applied = hdot * path.vectors[k][n];
            for (std::size_t m = 0; m < dim; ++m) {
                if (m == n) {
                    continue;
                }
                const double gap = path.gap(k, n, m);
                worst[n][m] = std::max(worst[n][m], std::abs(num::inner(path.vectors[k][m], applied)) / (gap * gap));
            }
        }
    }
    std::vector<PairValue> out;
    for (std::size_t n = 0; n < dim; ++n) {
        for (std::size_t m = 0; m < dim; ++m) {
            if (m != n) {
                out.push_back({n, m, worst[n][m]});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Amplitudes and error integrals
// ---------------------------------------------------------------------------

AmplitudePath amplitudes(const propagate::EvolutionTrace& trace, const SpectrumPath& path)
{
    require_shared_grid(trace.times, path.times);
    if (!trace.states.empty() && trace.states.front().dim() != path.dim()) {
        throw Error(ErrorKind::DimMismatch, "trace and spectrum path dims differ");
    }
    AmplitudePath out;
    out.times = path.times;
    out.a.reserve(path.points());
    for (std::size_t k = 0; k < path.points(); ++k) {
        std::vector<Complex> row(path.dim());
        for (std::size_t n = 0; n < path.dim(); ++n) {
            row[n] = std::polar(1.0, path.dynamical_phases[k][n]) * num::inner(path.vectors[k][n], trace.states[k]);
        }
        out.a.push_back(std::move(row));
    }
    return out;
}

CouplingPath a_nm_path(const AmplitudePath& amp, const SpectrumPath& path, const HamiltonianModel& model,
                       std::size_t n, std::size_t m)
{
    require_shared_grid(amp.times, path.times);
    require_pair(n, m, path.dim());
    path.require_nondegenerate(n, m);

    CouplingPath out;
    out.n = n;
    out.m = m;
    out.times = path.times;
    out.live.reserve(path.points());
    out.frozen.reserve(path.points());
    const Complex initial = amp.a.front()[n];
    for (std::size_t k = 0; k < path.points(); ++k) {
        const ComplexMatrix hdot = model.derivative(path.times[k]);
        const double gap = path.gap(k, n, m);
        // <E_m|dE_n/dt> / E_nm
        const Complex rate = num::expectation(path.vectors[k][m], hdot, path.vectors[k][n]) / (gap * gap);
        out.live.push_back(amp.a[k][n] * rate);
        out.frozen.push_back(initial * rate);
    }
    return out;
}

Complex adiabatic_error(const CouplingPath& a_nm, const SpectrumPath& path, double phase_guard)
{
    require_shared_grid(a_nm.times, path.times);
    const std::size_t n = a_nm.n;
    const std::size_t m = a_nm.m;
    path.require_nondegenerate(n, m);
    const std::size_t points = path.points();
    if (points < 2) {
        return {};
    }

    double worst_phase = 0.0;
    for (std::size_t k = 0; k + 1 < points; ++k) {
        const double h = path.times[k + 1] - path.times[k];
        worst_phase = std::max({worst_phase, std::abs(path.gap(k, n, m)) * h, std::abs(path.gap(k + 1, n, m)) * h});
    }
    if (worst_phase > phase_guard) {
        std::ostringstream msg;
        msg << "max |E_" << n << m << "| dt = " << worst_phase << " exceeds quadrature bound " << phase_guard;
        throw Error(ErrorKind::PhaseUnderResolved, msg.str());
    }

    auto integrand = [&](std::size_t k) {
        const double phase = path.dynamical_phases[k][n] - path.dynamical_phases[k][m];
        return a_nm.live[k] * path.gap(k, n, m) * std::polar(1.0, -phase);
    };
    Complex total{};
    for (std::size_t k = 0; k + 1 < points; ++k) {
        total += 0.5 * (path.times[k + 1] - path.times[k]) * (integrand(k) + integrand(k + 1));
    }
    return total;
}

LevelError level_error(const AmplitudePath& amp, const SpectrumPath& path, const HamiltonianModel& model,
                       std::size_t m, double phase_guard)
{
    require_level(m, path.dim());
    LevelError out;
    out.m = m;
    for (std::size_t n = 0; n < path.dim(); ++n) {
        if (n == m) {
            continue;
        }
        const Complex piece = adiabatic_error(a_nm_path(amp, path, model, n, m), path, phase_guard);
        out.pieces.emplace_back(n, piece);
        out.total -= piece;
    }
    return out;
}

Complex error_direct(const AmplitudePath& amp, std::size_t m)
{
    if (amp.a.empty()) {
        return {};
    }
    require_level(m, amp.a.front().size());
    return amp.a.back()[m] - amp.a.front()[m];
}

// ---------------------------------------------------------------------------
// Frequency content
// ---------------------------------------------------------------------------

double FourierTransform::omega_tilde(std::size_t idx) const { return kTwoPi * static_cast<double>(bins.at(idx)); }

Complex FourierTransform::at_omega(double omega) const
{
    if (bins.empty()) {
        return {};
    }
    const auto j = static_cast<std::int64_t>(std::llround(omega * total_time / kTwoPi));
    const std::int64_t first = bins.front();
    const auto count = static_cast<std::int64_t>(bins.size());
    // Aliased onto the represented band.
    std::int64_t idx = (j - first) % count;
    if (idx < 0) {
        idx += count;
    }
    return values[static_cast<std::size_t>(idx)];
}

FourierTransform fourier_a(const std::vector<Complex>& samples, double total_time)
{
    if (samples.size() < 2) {
        throw Error(ErrorKind::InvalidParams, "transform needs at least two samples");
    }
    const std::size_t n = samples.size() - 1;
    const double dt = total_time / static_cast<double>(n);

    std::vector<Complex> input(samples.begin(), samples.end() - 1);
    std::vector<Complex> output(n);
    {
        // Planner calls are not thread-safe.
        static std::mutex planner;
        fftw_plan plan;
        {
            std::lock_guard lock(planner);
            plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(input.data()),
                                    reinterpret_cast<fftw_complex*>(output.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        std::lock_guard lock(planner);
        fftw_destroy_plan(plan);
    }

    FourierTransform out;
    out.total_time = total_time;
    const auto count = static_cast<std::int64_t>(n);
    const std::int64_t lowest = -((count - 1) / 2);
    out.bins.reserve(n);
    out.values.reserve(n);
    for (std::int64_t j = lowest; j < lowest + count; ++j) {
        const std::int64_t idx = j < 0 ? j + count : j;
        out.bins.push_back(j);
        out.values.push_back(output[static_cast<std::size_t>(idx)] * dt);
    }
    return out;
}

Cutoff cutoff_frequency(const FourierTransform& transform, double threshold_fraction)
{
    double peak = 0.0;
    for (const auto& v : transform.values) {
        peak = std::max(peak, std::abs(v));
    }
    if (peak == 0.0) {
        return {0.0, true};
    }
    const double threshold = threshold_fraction * peak;
    double cutoff = 0.0;
    for (std::size_t idx = 0; idx < transform.values.size(); ++idx) {
        if (std::abs(transform.values[idx]) > threshold) {
            cutoff = std::max(cutoff, std::abs(transform.omega_tilde(idx)));
        }
    }
    return {cutoff, false};
}

double dominant_path_estimate(const FourierTransform& transform, const SpectrumPath& path, std::size_t n,
                              std::size_t m)
{
    require_pair(n, m, path.dim());
    double worst = 0.0;
    for (std::size_t k = 0; k < path.points(); ++k) {
        const Complex at_path = transform.at_omega(path.mean_gap(k, n, m));
        worst = std::max(worst, std::abs(at_path * path.gap(k, n, m)));
    }
    return transform.total_time * worst;
}

// ---------------------------------------------------------------------------
// Integration-by-parts bound
// ---------------------------------------------------------------------------

namespace {

std::int64_t sign_changes(const std::vector<double>& derivative, double floor)
{
    std::int64_t count = 0;
    int last = 0;
    for (const double d : derivative) {
        if (std::abs(d) <= floor) {
            continue;
        }
        const int sign = d > 0.0 ? 1 : -1;
        if (last != 0 && sign != last) {
            ++count;
        }
        last = sign;
    }
    return count;
}

} // namespace

ZeroCount count_derivative_zeros(const std::vector<Complex>& samples)
{
    if (samples.size() < 3) {
        throw Error(ErrorKind::InvalidParams, "zero count needs at least 3 samples");
    }
    std::vector<double> re;
    std::vector<double> im;
    re.reserve(samples.size() - 2);
    im.reserve(samples.size() - 2);
    double scale = 0.0;
    for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
        // Uniform grid: the 1/(2 dt) factor does not change signs.
        const Complex d = samples[k + 1] - samples[k - 1];
        re.push_back(d.real());
        im.push_back(d.imag());
        scale = std::max({scale, std::abs(d.real()), std::abs(d.imag())});
    }
    const double floor = 1e-9 * scale;
    return {sign_changes(re, floor), sign_changes(im, floor)};
}

double zero_count_bound(const std::vector<Complex>& samples, std::int64_t zero_count)
{
    double peak = 0.0;
    for (const auto& v : samples) {
        peak = std::max(peak, std::abs(v));
    }
    return 2.0 * static_cast<double>(zero_count + 1) * peak;
}

// ---------------------------------------------------------------------------
// s-parametrized checks
// ---------------------------------------------------------------------------

namespace {

// Index ranges [first, last) of eigenvalues closer than tol to a neighbour.
std::vector<std::pair<std::size_t, std::size_t>> clusters(const std::vector<double>& sorted_values, double tol)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t first = 0;
    for (std::size_t i = 1; i <= sorted_values.size(); ++i) {
        if (i == sorted_values.size() || sorted_values[i] - sorted_values[i - 1] >= tol) {
            out.emplace_back(first, i);
            first = i;
        }
    }
    return out;
}

double s_of(std::size_t j, std::size_t s_steps) { return static_cast<double>(j) / static_cast<double>(s_steps); }

} // namespace

MinTime min_time(const HamiltonianModel& model, std::size_t s_steps, std::size_t level, double gap_tolerance)
{
    require_level(level, model.dim());
    if (s_steps == 0) {
        throw Error(ErrorKind::InvalidParams, "min_time needs at least one s step");
    }
    MinTime best;
    best.n = level;
    for (std::size_t j = 0; j <= s_steps; ++j) {
        const double s = s_of(j, s_steps);
        const num::EigenSystem eig = num::eigh(model.at_s(s));
        const StateVector applied = model.d_ds(s) * eig.vectors[level];
        for (const auto& [first, last] : clusters(eig.values, gap_tolerance)) {
            if (level >= first && level < last) {
                if (last - first > 1) {
                    const std::size_t other = level == first ? first + 1 : first;
                    degenerate_gap(s * model.total_time(), level, other, eig.values[other] - eig.values[level]);
                }
                continue;
            }
            double weight = 0.0;
            for (std::size_t m = first; m < last; ++m) {
                weight += std::norm(num::inner(eig.vectors[m], applied));
            }
            const double gap = eig.values[level] - eig.values[first];
            const double value = std::sqrt(weight) / (gap * gap);
            if (value > best.value) {
                best.value = value;
                best.m = first;
                best.s = s;
            }
        }
    }
    return best;
}

MinGap min_gap(const HamiltonianModel& model, std::size_t s_steps, std::size_t n, std::size_t m)
{
    require_pair(n, m, model.dim());
    if (s_steps == 0) {
        throw Error(ErrorKind::InvalidParams, "min_gap needs at least one s step");
    }
    MinGap best{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t j = 0; j <= s_steps; ++j) {
        const double s = s_of(j, s_steps);
        const num::EigenSystem eig = num::eigh(model.at_s(s));
        const double gap = eig.values[m] - eig.values[n];
        if (gap < best.gap) {
            best = {gap, s};
        }
    }
    return best;
}

std::vector<std::vector<double>> level_probabilities(const propagate::EvolutionTrace& trace,
                                                     const SpectrumPath& path)
{
    require_shared_grid(trace.times, path.times);
    std::vector<std::vector<double>> out;
    out.reserve(path.points());
    for (std::size_t k = 0; k < path.points(); ++k) {
        std::vector<double> row(path.dim());
        for (std::size_t n = 0; n < path.dim(); ++n) {
            row[n] = std::norm(num::inner(path.vectors[k][n], trace.states[k]));
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<double> eigenstate_drift(const SpectrumPath& path, std::size_t n)
{
    require_level(n, path.dim());
    std::vector<double> out;
    out.reserve(path.points());
    for (std::size_t k = 0; k < path.points(); ++k) {
        out.push_back(std::abs(num::inner(path.vectors[k][n], path.vectors[0][n])));
    }
    return out;
}

Curvature curvature_check(const HamiltonianModel& model, std::size_t n, double s, double h, double gap_tolerance)
{
    require_level(n, model.dim());
    const num::EigenSystem eig = num::eigh(model.at_s(s));
    const StateVector applied = model.d_ds(s) * eig.vectors[n];
    double sum = 0.0;
    for (std::size_t m = 0; m < model.dim(); ++m) {
        if (m == n) {
            continue;
        }
        const double gap = eig.values[n] - eig.values[m];
        if (std::abs(gap) < gap_tolerance) {
            degenerate_gap(s * model.total_time(), n, m, gap);
        }
        sum += std::norm(num::inner(eig.vectors[m], applied)) / gap;
    }
    Curvature out;
    out.analytic = 2.0 * sum + num::expectation(eig.vectors[n], model.d2_ds2(s), eig.vectors[n]).real();

    const double below = num::eigh(model.at_s(s - h)).values[n];
    const double above = num::eigh(model.at_s(s + h)).values[n];
    out.finite_difference = (above - 2.0 * eig.values[n] + below) / (h * h);

    const double scale = std::max(std::abs(out.analytic), std::abs(out.finite_difference));
    out.relative_error = scale > 0.0 ? std::abs(out.analytic - out.finite_difference) / scale : 0.0;
    return out;
}

double grover_selection_rule(const HamiltonianModel& model, const std::vector<double>& s_samples)
{
    if (model.dim() <= 2) {
        return 0.0;
    }
    double worst = 0.0;
    for (const double s : s_samples) {
        const num::EigenSystem eig = num::eigh(model.at_s(s));
        StateVector residual = model.d_ds(s) * eig.vectors[0];
        for (std::size_t level : {std::size_t{0}, std::size_t{1}}) {
            const Complex c = num::inner(eig.vectors[level], residual);
            for (std::size_t i = 0; i < residual.dim(); ++i) {
                residual[i] -= c * eig.vectors[level][i];
            }
        }
        worst = std::max(worst, residual.norm());
    }
    return worst;
}

} // namespace adiabat::diag

#pragma once
// Adiabaticity diagnostics over an evolution trace and the instantaneous
// spectrum sampled on the same uniform grid.
//
// Conventions: levels carry the ascending order of H(0) and are followed by
// maximum-overlap continuity afterwards. Gaps are E_nm = E_n - E_m. The gauge
// is discrete parallel transport: <E_n(t_k)|E_n(t_{k+1})> is real and
// positive. Slow amplitudes are a_n = exp(+i int E_n) <E_n|psi>.

#include "adiabat/hamiltonian.hpp"
#include "adiabat/propagate.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace adiabat::diag {

using num::Complex;

inline constexpr double kDefaultGapTolerance = 1e-8;
inline constexpr double kQuadraturePhaseGuard = 0.3;
inline constexpr double kDefaultCutoffFraction = 0.01;

struct DegenerateFlag {
    std::size_t grid_index = 0;
    double time = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;
    double gap = 0.0;
};

struct SpectrumPath {
    std::vector<double> times;
    std::vector<std::vector<double>> values;                 // [k][n]
    std::vector<std::vector<num::StateVector>> vectors;      // [k][n]
    std::vector<std::vector<double>> dynamical_phases;       // [k][n], int_0^{t_k} E_n
    std::vector<DegenerateFlag> degenerate;                  // first offending point per pair (n < m)
    double gap_tolerance = kDefaultGapTolerance;

    std::size_t dim() const noexcept { return values.empty() ? 0 : values.front().size(); }
    std::size_t points() const noexcept { return times.size(); }
    double step() const;

    double gap(std::size_t k, std::size_t n, std::size_t m) const { return values[k][n] - values[k][m]; }
    // omega_nm(t_k) = (1/t_k) int_0^{t_k} E_nm; E_nm(0) at k = 0
    double mean_gap(std::size_t k, std::size_t n, std::size_t m) const;

    bool is_degenerate(std::size_t n, std::size_t m) const;
    // Throws Error{DegenerateGap} naming the first offending point.
    void require_nondegenerate(std::size_t n, std::size_t m) const;
};

SpectrumPath spectrum_path(const HamiltonianModel& model, std::size_t steps,
                           double gap_tolerance = kDefaultGapTolerance);

// <E_m|dH/dt|E_n> / E_nm at grid index k.
Complex coupling_element(const SpectrumPath& path, const HamiltonianModel& model, std::size_t k, std::size_t n,
                         std::size_t m);

struct PairValue {
    std::size_t n = 0;
    std::size_t m = 0;
    double value = 0.0;
};

// max_t |<E_m|dH/dt|E_n>| / E_nm^2
double traditional_metric(const SpectrumPath& path, const HamiltonianModel& model, std::size_t n, std::size_t m);
// Every ordered pair n != m.
std::vector<PairValue> traditional_metric(const SpectrumPath& path, const HamiltonianModel& model);

struct AmplitudePath {
    std::vector<double> times;
    std::vector<std::vector<Complex>> a; // [k][n]
};

AmplitudePath amplitudes(const propagate::EvolutionTrace& trace, const SpectrumPath& path);

struct CouplingPath {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> times;
    std::vector<Complex> live;   // a_n(t) <E_m|dE_n/dt> / E_nm
    std::vector<Complex> frozen; // a_n(0) <E_m|dE_n/dt> / E_nm
};

CouplingPath a_nm_path(const AmplitudePath& amp, const SpectrumPath& path, const HamiltonianModel& model,
                       std::size_t n, std::size_t m);

// eps_nm = int_0^T A_nm E_nm exp(-i int E_nm) dt by composite trapezoid on the
// live amplitudes. Throws PhaseUnderResolved if max |E_nm| dt > phase_guard.
Complex adiabatic_error(const CouplingPath& a_nm, const SpectrumPath& path,
                        double phase_guard = kQuadraturePhaseGuard);

struct LevelError {
    std::size_t m = 0;
    Complex total;                                   // eps_m = -sum_{n != m} eps_nm
    std::vector<std::pair<std::size_t, Complex>> pieces; // (n, eps_nm)
};

LevelError level_error(const AmplitudePath& amp, const SpectrumPath& path, const HamiltonianModel& model,
                       std::size_t m, double phase_guard = kQuadraturePhaseGuard);

// a_m(T) - a_m(0)
Complex error_direct(const AmplitudePath& amp, std::size_t m);

// A~(omega_j) = sum_{k<N} exp(i omega_j t_k) A(t_k) dt, omega_j = 2 pi j / T.
struct FourierTransform {
    double total_time = 0.0;
    std::vector<std::int64_t> bins; // signed j, ascending
    std::vector<Complex> values;

    double omega_tilde(std::size_t idx) const; // 2 pi j
    // Nearest-bin lookup at angular frequency omega.
    Complex at_omega(double omega) const;
};

// samples holds N + 1 values on the uniform grid over [0, T]; the last one is
// the periodic image of the first and is not summed.
FourierTransform fourier_a(const std::vector<Complex>& samples, double total_time);

struct Cutoff {
    double omega_tilde_c = 0.0;
    bool all_below = false;
};

// Smallest |omega~| beyond which every |A~| <= threshold_fraction * max |A~|.
Cutoff cutoff_frequency(const FourierTransform& transform, double threshold_fraction = kDefaultCutoffFraction);

// T * max_k |A~(omega_nm(t_k)) E_nm(t_k)|, an order-of-magnitude resonance indicator.
double dominant_path_estimate(const FourierTransform& transform, const SpectrumPath& path, std::size_t n,
                              std::size_t m);

struct ZeroCount {
    std::int64_t re = 0;
    std::int64_t im = 0;
    std::int64_t total() const noexcept { return re + im; }
};

// Sign changes of the central-difference derivative between interior samples,
// per component. Derivative magnitudes below 1e-9 * max |dA| count as zero.
ZeroCount count_derivative_zeros(const std::vector<Complex>& samples);

// 2 (M + 1) max_k |A(t_k)|
double zero_count_bound(const std::vector<Complex>& samples, std::int64_t zero_count);

struct MinTime {
    double value = 0.0;
    std::size_t n = 0;
    std::size_t m = 0; // first level of the maximizing eigenvalue cluster
    double s = 0.0;
};

// max_s max_{m != n} |<E_m|dH/ds|E_n>| / E_nm^2 on s_j = j / s_steps. Levels
// degenerate with each other enter as one cluster through the norm of the
// projection of dH/ds |E_n> onto the cluster.
MinTime min_time(const HamiltonianModel& model, std::size_t s_steps, std::size_t level = 0,
                 double gap_tolerance = kDefaultGapTolerance);

struct MinGap {
    double gap = 0.0;
    double s = 0.0;
};

// min_s (E_m - E_n) on s_j = j / s_steps with sorted levels.
MinGap min_gap(const HamiltonianModel& model, std::size_t s_steps, std::size_t n = 0, std::size_t m = 1);

// P_n(t_k) = |<E_n(t_k)|psi(t_k)>|^2, [k][n]
std::vector<std::vector<double>> level_probabilities(const propagate::EvolutionTrace& trace,
                                                     const SpectrumPath& path);

// |<E_n(t_k)|E_n(0)>|
std::vector<double> eigenstate_drift(const SpectrumPath& path, std::size_t n);

struct Curvature {
    double analytic = 0.0;
    double finite_difference = 0.0;
    double relative_error = 0.0;
};

// d^2E_n/ds^2 = 2 sum_{m != n} |<E_m|dH/ds|E_n>|^2 / E_nm + <E_n|d^2H/ds^2|E_n>
// against the central second difference of E_n(s) with step h.
Curvature curvature_check(const HamiltonianModel& model, std::size_t n, double s, double h = 1e-3,
                          double gap_tolerance = kDefaultGapTolerance);

// max_s ||(I - P_01) dH/ds |E_0(s)>||, P_01 the projector on the two lowest levels.
double grover_selection_rule(const HamiltonianModel& model, const std::vector<double>& s_samples);

} // namespace adiabat::diag

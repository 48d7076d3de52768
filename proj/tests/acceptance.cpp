// Acceptance suite S1-S7. One PASS/FAIL line per criterion with the measured
// values; exit status is nonzero if any criterion fails.

#include "adiabat/diagnostics.hpp"
#include "adiabat/models.hpp"
#include "adiabat/propagate.hpp"
#include "adiabat/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace adiabat;
namespace fs = std::filesystem;
using num::Complex;
using num::StateVector;

namespace {

const fs::path kScenarios{ADIABAT_SCENARIO_DIR};

// Worst |sum_n P_n - 1| over every run in the suite, checked by S7.
double g_completeness = 0.0;

struct Check {
    std::ostringstream detail;
    bool pass = true;

    void require(bool ok, const std::string& what)
    {
        pass = pass && ok;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
    }
};

std::string num_str(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct Run {
    ModelPtr model;
    diag::SpectrumPath path;
    propagate::EvolutionTrace trace;
    diag::AmplitudePath amp;
    std::vector<std::vector<double>> probs;
};

Run make_run(ModelPtr model, std::size_t steps, std::size_t level = 0)
{
    Run r;
    r.model = std::move(model);
    r.path = diag::spectrum_path(*r.model, steps);
    r.trace = propagate::evolve(*r.model, r.path.vectors[0][level], steps);
    r.amp = diag::amplitudes(r.trace, r.path);
    r.probs = diag::level_probabilities(r.trace, r.path);
    for (const auto& row : r.probs) {
        double sum = 0.0;
        for (double p : row) {
            sum += p;
        }
        g_completeness = std::max(g_completeness, std::abs(sum - 1.0));
    }
    return r;
}

Run run_config(const lab::ScenarioConfig& cfg, double big_t, std::size_t steps)
{
    return make_run(lab::build_model(cfg.model, big_t, steps), steps, cfg.initial_level.value_or(0));
}

double max_abs(const std::vector<Complex>& xs)
{
    double best = 0.0;
    for (const auto& x : xs) {
        best = std::max(best, std::abs(x));
    }
    return best;
}

double min_prob(const Run& r, std::size_t n)
{
    double lo = 1.0;
    for (const auto& row : r.probs) {
        lo = std::min(lo, row[n]);
    }
    return lo;
}

struct PairStats {
    double max_a = 0.0;
    Complex eps;
    Complex direct;
    std::int64_t zeros = 0;
    double bound = 0.0;
};

PairStats pair_stats(const Run& r, std::size_t n, std::size_t m)
{
    const auto a = diag::a_nm_path(r.amp, r.path, *r.model, n, m);
    PairStats s;
    s.max_a = max_abs(a.frozen);
    s.eps = diag::adiabatic_error(a, r.path);
    s.direct = diag::error_direct(r.amp, m);
    s.zeros = diag::count_derivative_zeros(a.frozen).total();
    s.bound = diag::zero_count_bound(a.frozen, s.zeros);
    return s;
}

void s1(Check& c)
{
    const auto cfg = lab::load_config(kScenarios / "s1_rabi.json");
    const double v = cfg.model.params["V"].get<double>();
    const Run r = run_config(cfg, cfg.total_time, cfg.steps);
    const double metric = diag::traditional_metric(r.path, *r.model, 0, 1);
    const double p1 = r.probs.back()[1];
    double worst = 0.0;
    for (std::size_t k = 0; k < r.probs.size(); ++k) {
        worst = std::max(worst, std::abs(r.probs[k][0] - (std::cos(v * r.path.times[k]) + 1.0) / 2.0));
    }
    c.require(metric <= 0.025, "metric " + num_str(metric) + " <= 0.025");
    c.require(p1 >= 0.95, "final P1 " + num_str(p1) + " >= 0.95");
    c.require(worst <= 0.05, "max|P0 - (cos Vt + 1)/2| " + num_str(worst) + " <= 0.05");
}

void s2(Check& c)
{
    const auto cfg = lab::load_config(kScenarios / "s2_dual.json");
    const fs::path out = fs::temp_directory_path() / "adiabat_acceptance_s2";
    const auto outcome = lab::run(cfg, out);
    const auto& base = outcome.reports.at(0);
    const auto& dual = outcome.reports.at(1);
    const double mb = base["traditional_metric_max"].get<double>();
    const double md = dual["traditional_metric_max"].get<double>();
    const double p0 = base["levels"][0]["probability"]["min"].get<double>();
    const double pbar0 = dual["levels"][0]["probability"]["min"].get<double>();
    const double drift = base["levels"][0]["drift"]["min"].get<double>();
    for (const auto* doc : {&base, &dual}) {
        g_completeness =
            std::max(g_completeness, (*doc)["invariants"]["probability_completeness"]["value"].get<double>());
    }
    c.require(mb <= 0.05, "base metric " + num_str(mb) + " <= 0.05");
    c.require(p0 >= 0.99, "base min P0 " + num_str(p0) + " >= 0.99");
    c.require(md <= 2.0 * mb && md >= 0.5 * mb, "dual metric " + num_str(md) + " within x2 of base");
    c.require(pbar0 <= 0.9, "dual min P0bar " + num_str(pbar0) + " <= 0.9");
    c.require(drift <= 0.01, "base min drift " + num_str(drift) + " <= 0.01");
}

void s3(Check& c)
{
    const auto cfg = lab::load_config(kScenarios / "s3_lz_sweep.json");
    const double dt = cfg.total_time / static_cast<double>(cfg.steps);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double worst_consistency = 0.0;
    for (double big_t : cfg.sweep) {
        const Run r = run_config(cfg, big_t, static_cast<std::size_t>(std::llround(big_t / dt)));
        const PairStats s = pair_stats(r, 0, 1);
        const double x = std::log(big_t), y = std::log(s.max_a);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        monotone = monotone && std::abs(s.eps) < previous;
        previous = std::abs(s.eps);
        worst_consistency = std::max(worst_consistency, std::abs(s.eps + s.direct));
    }
    const double n = static_cast<double>(cfg.sweep.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    c.require(std::abs(slope + 1.0) <= 0.01, "slope " + num_str(slope) + " = -1 +- 0.01");
    c.require(monotone, "|eps_01| decreasing");
    c.require(worst_consistency <= 1e-3, "max|eps_01 + (a_1(T) - a_1(0))| " + num_str(worst_consistency) + " <= 1e-3");
}

void s4(Check& c)
{
    bool bounds = true;
    double worst_ratio = 0.0;
    auto record = [&](const PairStats& s) {
        bounds = bounds && std::abs(s.eps) <= s.bound;
        worst_ratio = std::max(worst_ratio, std::abs(s.eps) / s.bound);
    };

    const auto rabi = lab::load_config(kScenarios / "s4_rabi_sweep.json");
    const double dt = rabi.total_time / static_cast<double>(rabi.steps);
    std::vector<std::int64_t> m_rabi;
    for (double big_t : rabi.sweep) {
        const PairStats s = pair_stats(run_config(rabi, big_t, std::llround(big_t / dt)), 0, 1);
        m_rabi.push_back(s.zeros);
        record(s);
    }
    const double ratio = static_cast<double>(m_rabi.back()) / static_cast<double>(m_rabi.front());

    const auto lz = lab::load_config(kScenarios / "s3_lz_sweep.json");
    const double lz_dt = lz.total_time / static_cast<double>(lz.steps);
    std::vector<std::int64_t> m_lz;
    for (double big_t : lz.sweep) {
        const PairStats s = pair_stats(run_config(lz, big_t, std::llround(big_t / lz_dt)), 0, 1);
        m_lz.push_back(s.zeros);
        record(s);
    }
    const bool lz_constant = std::all_of(m_lz.begin(), m_lz.end(), [&](std::int64_t m) { return m == m_lz.front(); });

    c.require(std::abs(ratio - 2.0) <= 1.0, "resonant M " + std::to_string(m_rabi.front()) + " -> " +
                                                std::to_string(m_rabi.back()) + ", ratio " + num_str(ratio) + " = 2 +- 1");
    c.require(lz_constant, "LZ M = " + std::to_string(m_lz.front()) + " at every T");
    c.require(bounds, "|eps_01| <= 2(M+1)max|A_01| in all runs (worst fraction " + num_str(worst_ratio) + ")");
}

void s5(Check& c)
{
    const auto cfg = lab::load_config(kScenarios / "s5_grover.json");
    std::vector<double> s_samples;
    for (int j = 1; j <= 9; ++j) {
        s_samples.push_back(j / 10.0);
    }
    const auto n3 = lab::build_model(cfg.model, cfg.total_time, cfg.steps);
    const auto n4 = models::grover_adiabatic(4, 11, cfg.total_time);
    const double r3 = diag::grover_selection_rule(*n3, s_samples);
    const double r4 = diag::grover_selection_rule(*n4, s_samples);
    const auto gap = diag::min_gap(*n3, 10000);
    const double err = std::abs(gap.gap - 1.0 / std::sqrt(8.0));
    c.require(r3 <= 1e-8, "n=3 residual " + num_str(r3) + " <= 1e-8");
    c.require(r4 <= 1e-8, "n=4 residual " + num_str(r4) + " <= 1e-8");
    c.require(err <= 1e-6, "n=3 min gap " + num_str(gap.gap) + " at s=" + num_str(gap.s) + ", |gap - 1/sqrt 8| " +
                               num_str(err) + " <= 1e-6");
    (void)make_run(n3, cfg.steps); // completeness bookkeeping for the S5 scenario run
}

double coupling_fd_error(const HamiltonianModel& model, std::size_t steps)
{
    const auto path = diag::spectrum_path(model, steps);
    const double dt = path.step();
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < path.points(); k += 37) {
        for (std::size_t n = 0; n < path.dim(); ++n) {
            for (std::size_t m = 0; m < path.dim(); ++m) {
                if (n == m) {
                    continue;
                }
                const Complex fd = (num::inner(path.vectors[k][m], path.vectors[k + 1][n]) -
                                    num::inner(path.vectors[k][m], path.vectors[k - 1][n])) /
                                   (2.0 * dt);
                worst = std::max(worst, std::abs(fd - diag::coupling_element(path, model, k, n, m)));
            }
        }
    }
    return worst;
}

void s6(Check& c)
{
    const num::ComplexMatrix lz0 = (-0.5) * num::pauli::z() + 0.05 * num::pauli::x();
    const num::ComplexMatrix lz1 = 0.5 * num::pauli::z() + 0.05 * num::pauli::x();
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g(0.0, 0.3);
    num::ComplexMatrix h0(3), h1(3);
    for (auto* h : {&h0, &h1}) {
        for (std::size_t i = 0; i < 3; ++i) {
            (*h)(i, i) = static_cast<double>(i) + g(rng);
            for (std::size_t j = i + 1; j < 3; ++j) {
                (*h)(i, j) = {g(rng), g(rng)};
                (*h)(j, i) = std::conj((*h)(i, j));
            }
        }
    }
    const std::vector<std::pair<std::string, ModelPtr>> zoo{
        {"driven", models::driven_two_level({1.0, 0.3, 1.0}, 20.0)},
        {"rotating", models::rotating_field(1.0, 200.0, 1)},
        {"lz", models::linear_interpolation(lz0, lz1, 100.0)},
        {"three-level", models::linear_interpolation(h0, h1, 50.0)},
    };
    double worst = 0.0;
    for (const auto& [name, model] : zoo) {
        worst = std::max(worst, coupling_fd_error(*model, 20000));
    }
    c.require(worst <= 1e-6, "coupling vs finite difference " + num_str(worst) + " <= 1e-6");

    const auto lz = diag::curvature_check(*models::linear_interpolation(lz0, lz1, 10.0), 0, 0.5);
    const auto grover = diag::curvature_check(*models::grover_adiabatic(2, 1, 5.0), 0, 0.5);
    const auto driven = diag::curvature_check(*models::driven_two_level({1.0, 0.3, 1.0}, 10.0), 0, 0.37);
    c.require(lz.relative_error <= 1e-3, "curvature LZ " + num_str(lz.relative_error));
    c.require(grover.relative_error <= 1e-3, "curvature grover n=2 " + num_str(grover.relative_error));
    c.require(driven.relative_error <= 1e-3, "curvature driven " + num_str(driven.relative_error));
}

double state_distance(const StateVector& a, const StateVector& b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        acc += std::norm(a[i] - b[i]);
    }
    return std::sqrt(acc);
}

void s7(Check& c)
{
    const double v = 0.02;
    const auto model = models::driven_two_level({1.0, v, 1.0}, std::numbers::pi / v);
    const auto us = propagate::accumulate_propagator(*model, 200000);
    const num::ComplexMatrix& u = us.back();
    const double unitarity = num::max_abs_diff(u.adjoint() * u, num::ComplexMatrix::identity(2));
    const auto trace = propagate::evolve(*model, StateVector{1.0, 0.0}, 200000);
    double drift = 0.0;
    for (const auto& psi : trace.states) {
        drift = std::max(drift, std::abs(psi.norm() - 1.0));
    }

    const auto conv_model = models::driven_two_level({1.0, 0.3, 1.0}, 20.0);
    const StateVector psi0{1.0, 0.0};
    const StateVector oracle = propagate::evolve(*conv_model, psi0, 4000).states.back();
    const double e1 = state_distance(propagate::evolve(*conv_model, psi0, 400).states.back(), oracle);
    const double e2 = state_distance(propagate::evolve(*conv_model, psi0, 800).states.back(), oracle);
    const double factor = e1 / e2;

    c.require(unitarity <= 1e-8, "unitarity after 2e5 steps " + num_str(unitarity) + " <= 1e-8");
    c.require(drift <= 1e-8, "norm drift " + num_str(drift) + " <= 1e-8");
    c.require(std::abs(factor - 4.0) <= 0.8, "convergence factor " + num_str(factor) + " = 4 +- 20%");
    c.require(g_completeness <= 1e-8, "max|sum P - 1| over all scenarios " + num_str(g_completeness) + " <= 1e-8");
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"S1 Rabi violation", s1},     {"S2 dual counterexample", s2}, {"S3 1/T scaling", s3},
        {"S4 zero-count dichotomy", s4}, {"S5 Grover selection rule", s5}, {"S6 identities", s6},
        {"S7 numerical hygiene", s7},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Check c;
        try {
            fn(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", name.c_str(), c.detail.str().c_str());
        std::fflush(stdout);
        failures += c.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

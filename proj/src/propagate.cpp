#include "adiabat/propagate.hpp"

#include "adiabat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adiabat::propagate {

using num::ComplexMatrix;
using num::StateVector;

namespace {

constexpr std::size_t kBudgetSamples = 1024;

double step_of(const HamiltonianModel& model, std::size_t steps)
{
    if (steps == 0) {
        throw Error(ErrorKind::InvalidParams, "step count must be >= 1");
    }
    return model.total_time() / static_cast<double>(steps);
}

[[noreturn]] void too_coarse(double t, double norm, double dt, double bound)
{
    std::ostringstream msg;
    msg.precision(6);
    msg << "per-step phase ||H||*dt = " << norm * dt << " at t = " << t << " exceeds bound " << bound
        << " (||H|| = " << norm << ", dt = " << dt << ")";
    throw Error(ErrorKind::GridTooCoarse, msg.str());
}

// One midpoint step's generator, with the phase guard applied to it.
ComplexMatrix midpoint_generator(const HamiltonianModel& model, std::size_t k, double dt, double bound)
{
    const double t_mid = (static_cast<double>(k) + 0.5) * dt;
    ComplexMatrix h = model.evaluate(t_mid);
    const double norm = h.inf_norm();
    if (norm * dt > bound) {
        too_coarse(t_mid, norm, dt, bound);
    }
    return h;
}

} // namespace

void check_step_budget(const HamiltonianModel& model, std::size_t steps, double max_step_phase)
{
    const double dt = step_of(model, steps);
    const std::size_t samples = std::min<std::size_t>(steps + 1, kBudgetSamples);
    for (std::size_t j = 0; j < samples; ++j) {
        // Evenly spread over grid points, always including both endpoints.
        const std::size_t k = samples == 1 ? 0 : (j * steps) / (samples - 1);
        const double t = static_cast<double>(k) * dt;
        const double norm = model.evaluate(t).inf_norm();
        if (norm * dt > max_step_phase) {
            too_coarse(t, norm, dt, max_step_phase);
        }
    }
}

EvolutionTrace evolve(const HamiltonianModel& model, const StateVector& psi0, std::size_t steps,
                      bool keep_propagators, double max_step_phase)
{
    if (psi0.dim() != model.dim()) {
        throw Error(ErrorKind::DimMismatch, "initial state has dim " + std::to_string(psi0.dim()) +
                                                ", model has dim " + std::to_string(model.dim()));
    }
    if (std::abs(psi0.norm() - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << "initial state norm " << psi0.norm() << " differs from 1 by more than " << kNormTolerance;
        throw Error(ErrorKind::NotNormalized, msg.str());
    }
    check_step_budget(model, steps, max_step_phase);
    const double dt = step_of(model, steps);

    EvolutionTrace trace;
    trace.model_label = model.label();
    trace.step_count = steps;
    trace.times.reserve(steps + 1);
    trace.states.reserve(steps + 1);
    trace.times.push_back(0.0);
    trace.states.push_back(psi0);
    if (keep_propagators) {
        trace.propagators.reserve(steps + 1);
        trace.propagators.push_back(ComplexMatrix::identity(model.dim()));
    }

    for (std::size_t k = 0; k < steps; ++k) {
        const ComplexMatrix step = num::expm_minus_iH(midpoint_generator(model, k, dt, max_step_phase), dt);
        trace.states.push_back(step * trace.states.back());
        trace.times.push_back(k + 1 == steps ? model.total_time() : static_cast<double>(k + 1) * dt);
        if (keep_propagators) {
            trace.propagators.push_back(step * trace.propagators.back());
        }
    }
    return trace;
}

std::vector<ComplexMatrix> accumulate_propagator(const HamiltonianModel& model, std::size_t steps,
                                                 double max_step_phase)
{
    check_step_budget(model, steps, max_step_phase);
    const double dt = step_of(model, steps);
    std::vector<ComplexMatrix> out;
    out.reserve(steps + 1);
    out.push_back(ComplexMatrix::identity(model.dim()));
    for (std::size_t k = 0; k < steps; ++k) {
        out.push_back(num::expm_minus_iH(midpoint_generator(model, k, dt, max_step_phase), dt) * out.back());
    }
    return out;
}

} // namespace adiabat::propagate

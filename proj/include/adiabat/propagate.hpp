#pragma once
// Exponential-midpoint integration of i d/dt psi = H(t) psi on a uniform grid.

#include "adiabat/hamiltonian.hpp"

#include <optional>
#include <vector>

namespace adiabat::propagate {

struct EvolutionTrace {
    std::string model_label;
    std::vector<double> times;              // t_0 = 0 ... t_N = T
    std::vector<num::StateVector> states;   // one per grid point
    std::vector<num::ComplexMatrix> propagators; // empty unless requested
    std::size_t step_count = 0;

    bool has_propagators() const noexcept { return !propagators.empty(); }
};

inline constexpr double kNormTolerance = 1e-10;

// Throws GridTooCoarse when ||H||_inf * dt exceeds max_step_phase anywhere on
// the grid (endpoints and step midpoints are sampled).
void check_step_budget(const HamiltonianModel& model, std::size_t steps, double max_step_phase = 0.1);

// psi_{k+1} = exp(-i H(t_k + dt/2) dt) psi_k
EvolutionTrace evolve(const HamiltonianModel& model, const num::StateVector& psi0, std::size_t steps,
                      bool keep_propagators = false, double max_step_phase = 0.1);

// U(t_0) = I, U(t_{k+1}) = exp(-i H(t_k + dt/2) dt) U(t_k); steps + 1 entries.
std::vector<num::ComplexMatrix> accumulate_propagator(const HamiltonianModel& model, std::size_t steps,
                                                      double max_step_phase = 0.1);

} // namespace adiabat::propagate

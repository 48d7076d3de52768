#pragma once
// The Hamiltonian zoo. Every factory validates its parameters and throws
// Error{InvalidParams} or Error{DimMismatch}.

#include "adiabat/hamiltonian.hpp"

#include <vector>

namespace adiabat::models {

struct DrivenTwoLevelParams {
    double eps = 1.0;    // bias
    double V = 0.02;     // drive amplitude
    double omega0 = 1.0; // drive frequency
};

// H(t) = -(eps/2) sz - V sin(omega0 t) sx
ModelPtr driven_two_level(const DrivenTwoLevelParams& p, double total_time);

// H(t) = -(eps/2) [cos th sz + sin th sx], th = 2 pi turns t / T
ModelPtr rotating_field(double eps, double total_time, int turns);

// H(t) = (1 - t/T) H0 + (t/T) H1
ModelPtr linear_interpolation(const num::ComplexMatrix& h0, const num::ComplexMatrix& h1, double total_time);

inline constexpr int kMaxGroverQubits = 6;

// H(s) = (1 - s)(I - |u><u|) + s (I - |m><m|), |u> uniform, |m> the marked basis state.
ModelPtr grover_adiabatic(int n_qubits, std::size_t marked, double total_time);

// Hbar(t) = -U^dagger(t) H(t) U(t) with U the time-ordered propagator of the
// base model, stored on a uniform grid of grid_points samples. Off-grid
// queries compose one extra midpoint exponential from the nearest grid point
// below. Derivatives are central differences with the grid spacing.
class DualModel final : public HamiltonianModel {
public:
    DualModel(ModelPtr base, std::vector<num::ComplexMatrix> propagators);

    const HamiltonianModel& base() const noexcept { return *base_; }
    std::size_t grid_points() const noexcept { return propagators_.size(); }
    double grid_spacing() const noexcept { return spacing_; }
    const num::ComplexMatrix& propagator_at(std::size_t k) const { return propagators_.at(k); }
    num::ComplexMatrix propagator(double t) const;

    num::ComplexMatrix evaluate(double t) const override;
    num::ComplexMatrix derivative(double t) const override;
    num::ComplexMatrix second_derivative(double t) const override;

private:
    ModelPtr base_;
    std::vector<num::ComplexMatrix> propagators_;
    double spacing_;
};

inline constexpr double kMaxStepPhase = 0.1;

std::shared_ptr<const DualModel> dual_of(ModelPtr base, std::size_t grid_points);

} // namespace adiabat::models

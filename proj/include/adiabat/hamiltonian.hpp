#pragma once

#include "adiabat/numkernel.hpp"

#include <memory>
#include <string>

namespace adiabat {

// A time-dependent Hermitian generator on [0, T] with its time derivatives.
// Implementations are immutable and safe to evaluate concurrently.
class HamiltonianModel {
public:
    HamiltonianModel(std::size_t dim, double total_time, std::string label);
    virtual ~HamiltonianModel() = default;

    std::size_t dim() const noexcept { return dim_; }
    double total_time() const noexcept { return total_time_; }
    const std::string& label() const noexcept { return label_; }

    virtual num::ComplexMatrix evaluate(double t) const = 0;
    // dH/dt
    virtual num::ComplexMatrix derivative(double t) const = 0;
    // d^2H/dt^2
    virtual num::ComplexMatrix second_derivative(double t) const = 0;

    // Reparametrized views on s = t/T.
    num::ComplexMatrix at_s(double s) const { return evaluate(s * total_time_); }
    num::ComplexMatrix d_ds(double s) const;
    num::ComplexMatrix d2_ds2(double s) const;

private:
    std::size_t dim_;
    double total_time_;
    std::string label_;
};

using ModelPtr = std::shared_ptr<const HamiltonianModel>;

} // namespace adiabat

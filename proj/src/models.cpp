#include "adiabat/models.hpp"

#include "adiabat/errors.hpp"
#include "adiabat/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace adiabat {

using num::ComplexMatrix;
using num::StateVector;

HamiltonianModel::HamiltonianModel(std::size_t dim, double total_time, std::string label)
    : dim_(dim), total_time_(total_time), label_(std::move(label))
{
    if (dim == 0) {
        throw Error(ErrorKind::InvalidParams, "model dimension must be positive");
    }
    if (!(total_time > 0.0) || !std::isfinite(total_time)) {
        throw Error(ErrorKind::InvalidParams, "total time must be finite and positive");
    }
}

ComplexMatrix HamiltonianModel::d_ds(double s) const { return total_time_ * derivative(s * total_time_); }

ComplexMatrix HamiltonianModel::d2_ds2(double s) const
{
    return (total_time_ * total_time_) * second_derivative(s * total_time_);
}

namespace models {
namespace {

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << name << " must be finite and positive, got " << value;
        throw Error(ErrorKind::InvalidParams, msg.str());
    }
}

std::string format_label(const std::string& name, std::initializer_list<std::pair<const char*, double>> params)
{
    std::ostringstream out;
    out.precision(17);
    out << name << '(';
    bool first = true;
    for (const auto& [key, value] : params) {
        out << (first ? "" : ",") << key << '=' << value;
        first = false;
    }
    out << ')';
    return out.str();
}

class DrivenTwoLevel final : public HamiltonianModel {
public:
    DrivenTwoLevel(const DrivenTwoLevelParams& p, double total_time)
        : HamiltonianModel(2, total_time,
                           format_label("driven_two_level", {{"eps", p.eps}, {"V", p.V}, {"omega0", p.omega0}})),
          p_(p)
    {
    }

    ComplexMatrix evaluate(double t) const override
    {
        return (-0.5 * p_.eps) * num::pauli::z() + (-p_.V * std::sin(p_.omega0 * t)) * num::pauli::x();
    }

    ComplexMatrix derivative(double t) const override
    {
        return (-p_.V * p_.omega0 * std::cos(p_.omega0 * t)) * num::pauli::x();
    }

    ComplexMatrix second_derivative(double t) const override
    {
        return (p_.V * p_.omega0 * p_.omega0 * std::sin(p_.omega0 * t)) * num::pauli::x();
    }

private:
    DrivenTwoLevelParams p_;
};

class RotatingField final : public HamiltonianModel {
public:
    RotatingField(double eps, double total_time, int turns)
        : HamiltonianModel(2, total_time,
                           format_label("rotating_field", {{"eps", eps}, {"T", total_time}, {"turns", turns}})),
          eps_(eps), rate_(2.0 * std::numbers::pi * turns / total_time)
    {
    }

    ComplexMatrix evaluate(double t) const override { return field(rate_ * t, -0.5 * eps_, 0); }
    ComplexMatrix derivative(double t) const override { return field(rate_ * t, -0.5 * eps_ * rate_, 1); }
    ComplexMatrix second_derivative(double t) const override
    {
        return field(rate_ * t, -0.5 * eps_ * rate_ * rate_, 2);
    }

private:
    // scale * d^order/dth^order [cos th sz + sin th sx]
    static ComplexMatrix field(double theta, double scale, int order)
    {
        double cz = std::cos(theta);
        double cx = std::sin(theta);
        if (order == 1) {
            cz = -std::sin(theta);
            cx = std::cos(theta);
        } else if (order == 2) {
            cz = -std::cos(theta);
            cx = -std::sin(theta);
        }
        return (scale * cz) * num::pauli::z() + (scale * cx) * num::pauli::x();
    }

    double eps_;
    double rate_;
};

class LinearInterpolation final : public HamiltonianModel {
public:
    LinearInterpolation(ComplexMatrix h0, ComplexMatrix h1, double total_time)
        : HamiltonianModel(h0.dim(), total_time,
                           format_label("linear_interpolation", {{"dim", static_cast<double>(h0.dim())},
                                                                 {"T", total_time}})),
          h0_(std::move(h0)), h1_(std::move(h1)), slope_((1.0 / total_time) * (h1_ - h0_))
    {
    }

    ComplexMatrix evaluate(double t) const override
    {
        const double s = t / total_time();
        return (1.0 - s) * h0_ + s * h1_;
    }

    ComplexMatrix derivative(double) const override { return slope_; }
    ComplexMatrix second_derivative(double) const override { return ComplexMatrix(dim()); }

private:
    ComplexMatrix h0_;
    ComplexMatrix h1_;
    ComplexMatrix slope_;
};

class GroverAdiabatic final : public HamiltonianModel {
public:
    GroverAdiabatic(int n_qubits, std::size_t marked, double total_time)
        : HamiltonianModel(std::size_t{1} << n_qubits, total_time,
                           format_label("grover_adiabatic", {{"n_qubits", n_qubits},
                                                             {"marked", static_cast<double>(marked)},
                                                             {"T", total_time}}))
    {
        const std::size_t n = dim();
        StateVector uniform(n);
        const double amp = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            uniform[i] = amp;
        }
        const ComplexMatrix identity = ComplexMatrix::identity(n);
        initial_ = identity - ComplexMatrix::projector(uniform);
        final_ = identity - ComplexMatrix::projector(StateVector::basis(n, marked));
        d_ds_ = final_ - initial_;
    }

    ComplexMatrix evaluate(double t) const override
    {
        const double s = t / total_time();
        return (1.0 - s) * initial_ + s * final_;
    }

    ComplexMatrix derivative(double) const override { return (1.0 / total_time()) * d_ds_; }
    ComplexMatrix second_derivative(double) const override { return ComplexMatrix(dim()); }

private:
    ComplexMatrix initial_;
    ComplexMatrix final_;
    ComplexMatrix d_ds_;
};

} // namespace

ModelPtr driven_two_level(const DrivenTwoLevelParams& p, double total_time)
{
    require_positive(p.eps, "eps");
    require_positive(p.V, "V");
    require_positive(p.omega0, "omega0");
    require_positive(total_time, "T");
    return std::make_shared<DrivenTwoLevel>(p, total_time);
}

ModelPtr rotating_field(double eps, double total_time, int turns)
{
    require_positive(eps, "eps");
    require_positive(total_time, "T");
    if (turns < 1) {
        throw Error(ErrorKind::InvalidParams, "turns must be >= 1, got " + std::to_string(turns));
    }
    return std::make_shared<RotatingField>(eps, total_time, turns);
}

ModelPtr linear_interpolation(const ComplexMatrix& h0, const ComplexMatrix& h1, double total_time)
{
    require_positive(total_time, "T");
    if (h0.dim() != h1.dim() || h0.dim() == 0) {
        throw Error(ErrorKind::DimMismatch, "endpoint Hamiltonians have dims " + std::to_string(h0.dim()) + " and " +
                                                std::to_string(h1.dim()));
    }
    for (const ComplexMatrix* h : {&h0, &h1}) {
        if (h->hermiticity_error() > num::kHermitianTolerance) {
            throw Error(ErrorKind::NonHermitian, "linear_interpolation endpoint is not Hermitian");
        }
    }
    return std::make_shared<LinearInterpolation>(h0, h1, total_time);
}

ModelPtr grover_adiabatic(int n_qubits, std::size_t marked, double total_time)
{
    if (n_qubits < 1 || n_qubits > kMaxGroverQubits) {
        throw Error(ErrorKind::InvalidParams, "n_qubits must be in 1.." + std::to_string(kMaxGroverQubits) +
                                                  ", got " + std::to_string(n_qubits));
    }
    if (marked >= (std::size_t{1} << n_qubits)) {
        throw Error(ErrorKind::InvalidParams, "marked index " + std::to_string(marked) + " out of range");
    }
    require_positive(total_time, "T");
    return std::make_shared<GroverAdiabatic>(n_qubits, marked, total_time);
}

// ---------------------------------------------------------------------------
// DualModel
// ---------------------------------------------------------------------------

DualModel::DualModel(ModelPtr base, std::vector<ComplexMatrix> propagators)
    : HamiltonianModel(base->dim(), base->total_time(), "dual_of(" + base->label() + ")"), base_(std::move(base)),
      propagators_(std::move(propagators)),
      spacing_(base_->total_time() / static_cast<double>(propagators_.size() - 1))
{
}

ComplexMatrix DualModel::propagator(double t) const
{
    const std::size_t steps = propagators_.size() - 1;
    const double pos = std::clamp(t / spacing_, 0.0, static_cast<double>(steps));
    auto k = static_cast<std::size_t>(std::floor(pos));
    if (k >= steps) {
        k = steps;
    }
    const double tau = t - static_cast<double>(k) * spacing_;
    if (std::abs(tau) <= 1e-12 * spacing_) {
        return propagators_[k];
    }
    const double t_k = static_cast<double>(k) * spacing_;
    return num::expm_minus_iH(base_->evaluate(t_k + 0.5 * tau), tau) * propagators_[k];
}

ComplexMatrix DualModel::evaluate(double t) const
{
    const ComplexMatrix u = propagator(t);
    const ComplexMatrix raw = u.adjoint() * base_->evaluate(t) * u;
    ComplexMatrix out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        for (std::size_t j = 0; j < dim(); ++j) {
            out(i, j) = -0.5 * (raw(i, j) + std::conj(raw(j, i)));
        }
    }
    return out;
}

ComplexMatrix DualModel::derivative(double t) const
{
    const double h = spacing_;
    const double horizon = total_time();
    if (t - h < 0.0) {
        return (1.0 / (2.0 * h)) * ((-3.0) * evaluate(t) + 4.0 * evaluate(t + h) - evaluate(t + 2.0 * h));
    }
    if (t + h > horizon) {
        return (1.0 / (2.0 * h)) * (3.0 * evaluate(t) - 4.0 * evaluate(t - h) + evaluate(t - 2.0 * h));
    }
    return (1.0 / (2.0 * h)) * (evaluate(t + h) - evaluate(t - h));
}

ComplexMatrix DualModel::second_derivative(double t) const
{
    const double h = spacing_;
    if (t - h < 0.0) {
        return (1.0 / (h * h)) *
               (2.0 * evaluate(t) - 5.0 * evaluate(t + h) + 4.0 * evaluate(t + 2.0 * h) - evaluate(t + 3.0 * h));
    }
    if (t + h > total_time()) {
        return (1.0 / (h * h)) *
               (2.0 * evaluate(t) - 5.0 * evaluate(t - h) + 4.0 * evaluate(t - 2.0 * h) - evaluate(t - 3.0 * h));
    }
    return (1.0 / (h * h)) * (evaluate(t + h) - 2.0 * evaluate(t) + evaluate(t - h));
}

std::shared_ptr<const DualModel> dual_of(ModelPtr base, std::size_t grid_points)
{
    if (!base) {
        throw Error(ErrorKind::InvalidParams, "dual_of requires a base model");
    }
    if (grid_points < 2) {
        throw Error(ErrorKind::InvalidParams, "dual_of needs at least 2 grid points");
    }
    auto propagators = propagate::accumulate_propagator(*base, grid_points - 1, kMaxStepPhase);
    return std::make_shared<DualModel>(std::move(base), std::move(propagators));
}

} // namespace models
} // namespace adiabat

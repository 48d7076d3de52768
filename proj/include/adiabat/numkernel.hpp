#pragma once
// Dense complex linear algebra for small Hermitian problems (dim <= 64):
// Jacobi eigendecomposition, unitary exponentials, eigenvector phase alignment.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace adiabat::num {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::size_t dim) : data_(dim) {}
    StateVector(std::initializer_list<Complex> values) : data_(values) {}
    explicit StateVector(std::vector<Complex> values) : data_(std::move(values)) {}

    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return data_.size(); }
    Complex& operator[](std::size_t i) { return data_[i]; }
    const Complex& operator[](std::size_t i) const { return data_[i]; }

    std::span<Complex> span() noexcept { return data_; }
    std::span<const Complex> span() const noexcept { return data_; }
    Complex* data() noexcept { return data_.data(); }
    const Complex* data() const noexcept { return data_.data(); }

    double norm() const;
    StateVector& operator*=(Complex s);

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    std::vector<Complex> data_;
};

// <a|b>
Complex inner(const StateVector& a, const StateVector& b);
double max_abs_diff(const StateVector& a, const StateVector& b);

// Row-major square matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    // |v><v|
    static ComplexMatrix projector(const StateVector& v);

    std::size_t dim() const noexcept { return dim_; }
    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    std::span<Complex> row(std::size_t r) noexcept { return {data_.data() + r * dim_, dim_}; }
    std::span<const Complex> row(std::size_t r) const noexcept { return {data_.data() + r * dim_, dim_}; }

    ComplexMatrix adjoint() const;
    // max_ij |A_ij|
    double max_abs() const;
    // max_i sum_j |A_ij|; bounds the spectral norm from above
    double inf_norm() const;
    // max_ij |A_ij - conj(A_ji)|
    double hermiticity_error() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex s);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
StateVector operator*(const ComplexMatrix& a, const StateVector& v);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// <a|M|b>
Complex expectation(const StateVector& a, const ComplexMatrix& m, const StateVector& b);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
} // namespace pauli

struct EigenSystem {
    std::vector<double> values;
    std::vector<StateVector> vectors; // vectors[n] pairs with values[n]

    std::size_t dim() const noexcept { return values.size(); }
};

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr int kJacobiSweepBudget = 100;
inline constexpr double kMatchTieTolerance = 1e-9;

// Cyclic complex Jacobi. Values ascending.
EigenSystem eigh(const ComplexMatrix& h);

// exp(-i H dt) = sum_n exp(-i E_n dt) |v_n><v_n|
ComplexMatrix expm_minus_iH(const ComplexMatrix& h, double dt);
ComplexMatrix expm_minus_iH(const EigenSystem& eig, double dt);

// Max-|overlap| assignment cur level -> prev level, greedy on sorted
// overlaps. Result[n] is the index in cur paired with prev level n. A tie
// within kMatchTieTolerance is an error unless every tied cur level lies in
// one cluster of eigenvalues closer than degenerate_tol.
std::vector<std::size_t> match_levels(const EigenSystem& prev, const EigenSystem& cur, double degenerate_tol = 0.0);

// Reorders cur to follow prev's levels and fixes each vector's phase so that
// <prev_n|cur_n> is real and non-negative.
EigenSystem align_phases(const EigenSystem& prev, const EigenSystem& cur, double degenerate_tol = 0.0);

} // namespace adiabat::num

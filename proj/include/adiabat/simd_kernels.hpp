#pragma once
// Complex double inner-loop kernels with a scalar reference and an AVX2/FMA
// variant. The active variant is chosen once at startup from the CPU feature
// bits; ADIABAT_SIMD=scalar in the environment forces the reference path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace adiabat::simd {

using Complex = std::complex<double>;

struct KernelTable {
    // sum_i conj(x_i) * y_i
    Complex (*dotc)(const Complex* x, const Complex* y, std::size_t n);
    // sum_i x_i * y_i
    Complex (*dotu)(const Complex* x, const Complex* y, std::size_t n);
    // y += alpha * x
    void (*axpy)(Complex alpha, const Complex* x, Complex* y, std::size_t n);
    // (x, y) <- (a*x + b*y, c*x + d*y), elementwise
    void (*mix2)(Complex* x, Complex* y, std::size_t n, Complex a, Complex b, Complex c, Complex d);
    // sum_i |x_i|^2
    double (*norm2)(const Complex* x, std::size_t n);
    std::string_view name;
};

const KernelTable& scalar_kernels() noexcept;

// Null when the build or the host lacks AVX2+FMA.
const KernelTable* avx2_kernels() noexcept;

const KernelTable& active() noexcept;

// Test hook: route subsequent calls through the given table.
void set_active(const KernelTable& table) noexcept;

inline Complex dotc(const Complex* x, const Complex* y, std::size_t n) { return active().dotc(x, y, n); }
inline Complex dotu(const Complex* x, const Complex* y, std::size_t n) { return active().dotu(x, y, n); }
inline void axpy(Complex a, const Complex* x, Complex* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void mix2(Complex* x, Complex* y, std::size_t n, Complex a, Complex b, Complex c, Complex d)
{
    active().mix2(x, y, n, a, b, c, d);
}
inline double norm2(const Complex* x, std::size_t n) { return active().norm2(x, n); }

} // namespace adiabat::simd

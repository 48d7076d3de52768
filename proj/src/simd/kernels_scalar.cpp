#include "adiabat/simd_kernels.hpp"

namespace adiabat::simd {
namespace {

Complex dotc_scalar(const Complex* x, const Complex* y, std::size_t n)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

Complex dotu_scalar(const Complex* x, const Complex* y, std::size_t n)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
    }
    return {re, im};
}

void axpy_scalar(Complex alpha, const Complex* x, Complex* y, std::size_t n)
{
    const double ar = alpha.real();
    const double ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real();
        const double xi = x[i].imag();
        y[i] = {y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr)};
    }
}

inline Complex cmul(Complex a, Complex b)
{
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void mix2_scalar(Complex* x, Complex* y, std::size_t n, Complex a, Complex b, Complex c, Complex d)
{
    for (std::size_t i = 0; i < n; ++i) {
        const Complex xi = x[i];
        const Complex yi = y[i];
        x[i] = cmul(a, xi) + cmul(b, yi);
        y[i] = cmul(c, xi) + cmul(d, yi);
    }
}

double norm2_scalar(const Complex* x, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    }
    return acc;
}

} // namespace

const KernelTable& scalar_kernels() noexcept
{
    static const KernelTable table{dotc_scalar, dotu_scalar, axpy_scalar, mix2_scalar, norm2_scalar, "scalar"};
    return table;
}

} // namespace adiabat::simd

// Built with -mavx2 -mfma. Only reached through dispatch after a CPU check.
#include "adiabat/simd_kernels.hpp"

#include <immintrin.h>

namespace adiabat::simd {
namespace {

// Two complex numbers per register: [re0, im0, re1, im1].
inline __m256d load2(const Complex* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(Complex* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0x5); }

// a * (broadcast complex s)
inline __m256d cmul_scalar(__m256d a, __m256d s_re, __m256d s_im)
{
    return _mm256_fmaddsub_pd(a, s_re, _mm256_mul_pd(swap_re_im(a), s_im));
}

inline double hsum_even(__m256d v)
{
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return lanes[0] + lanes[2];
}

inline double hsum_odd(__m256d v)
{
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return lanes[1] + lanes[3];
}

Complex dotc_avx2(const Complex* x, const Complex* y, std::size_t n)
{
    __m256d direct = _mm256_setzero_pd();  // [xr*yr, xi*yi]
    __m256d crossed = _mm256_setzero_pd(); // [xr*yi, xi*yr]
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load2(x + i);
        const __m256d yv = load2(y + i);
        direct = _mm256_fmadd_pd(xv, yv, direct);
        crossed = _mm256_fmadd_pd(xv, swap_re_im(yv), crossed);
    }
    double re = hsum_even(direct) + hsum_odd(direct);
    double im = hsum_even(crossed) - hsum_odd(crossed);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

Complex dotu_avx2(const Complex* x, const Complex* y, std::size_t n)
{
    __m256d direct = _mm256_setzero_pd();
    __m256d crossed = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load2(x + i);
        const __m256d yv = load2(y + i);
        direct = _mm256_fmadd_pd(xv, yv, direct);
        crossed = _mm256_fmadd_pd(xv, swap_re_im(yv), crossed);
    }
    double re = hsum_even(direct) - hsum_odd(direct);
    double im = hsum_even(crossed) + hsum_odd(crossed);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
    }
    return {re, im};
}

void axpy_avx2(Complex alpha, const Complex* x, Complex* y, std::size_t n)
{
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        store2(y + i, _mm256_add_pd(load2(y + i), cmul_scalar(load2(x + i), ar, ai)));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real();
        const double xi = x[i].imag();
        y[i] = {y[i].real() + (alpha.real() * xr - alpha.imag() * xi),
                y[i].imag() + (alpha.real() * xi + alpha.imag() * xr)};
    }
}

void mix2_avx2(Complex* x, Complex* y, std::size_t n, Complex a, Complex b, Complex c, Complex d)
{
    const __m256d a_re = _mm256_set1_pd(a.real()), a_im = _mm256_set1_pd(a.imag());
    const __m256d b_re = _mm256_set1_pd(b.real()), b_im = _mm256_set1_pd(b.imag());
    const __m256d c_re = _mm256_set1_pd(c.real()), c_im = _mm256_set1_pd(c.imag());
    const __m256d d_re = _mm256_set1_pd(d.real()), d_im = _mm256_set1_pd(d.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load2(x + i);
        const __m256d yv = load2(y + i);
        store2(x + i, _mm256_add_pd(cmul_scalar(xv, a_re, a_im), cmul_scalar(yv, b_re, b_im)));
        store2(y + i, _mm256_add_pd(cmul_scalar(xv, c_re, c_im), cmul_scalar(yv, d_re, d_im)));
    }
    for (; i < n; ++i) {
        const Complex xi = x[i];
        const Complex yi = y[i];
        x[i] = a * xi + b * yi;
        y[i] = c * xi + d * yi;
    }
}

double norm2_avx2(const Complex* x, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load2(x + i);
        acc = _mm256_fmadd_pd(xv, xv, acc);
    }
    double total = hsum_even(acc) + hsum_odd(acc);
    for (; i < n; ++i) {
        total += std::norm(x[i]);
    }
    return total;
}

} // namespace

const KernelTable& avx2_table_impl() noexcept
{
    static const KernelTable table{dotc_avx2, dotu_avx2, axpy_avx2, mix2_avx2, norm2_avx2, "avx2"};
    return table;
}

} // namespace adiabat::simd

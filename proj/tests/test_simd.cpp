// Scalar reference vs AVX2 kernels on random data, all lengths 0..33 so every
// remainder path is covered.
#include "adiabat/simd_kernels.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using adiabat::simd::Complex;
using adiabat::simd::KernelTable;

namespace {

std::vector<Complex> random_values(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> out(n);
    for (auto& x : out) {
        x = {u(rng), u(rng)};
    }
    return out;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

} // namespace

TEST_CASE("scalar kernels match naive std::complex arithmetic")
{
    const KernelTable& k = adiabat::simd::scalar_kernels();
    std::mt19937_64 rng(7);
    const auto x = random_values(9, rng);
    const auto y = random_values(9, rng);

    Complex dotc{}, dotu{};
    double norm2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dotc += std::conj(x[i]) * y[i];
        dotu += x[i] * y[i];
        norm2 += std::norm(x[i]);
    }
    CHECK(std::abs(k.dotc(x.data(), y.data(), x.size()) - dotc) < 1e-14);
    CHECK(std::abs(k.dotu(x.data(), y.data(), x.size()) - dotu) < 1e-14);
    CHECK(k.norm2(x.data(), x.size()) == doctest::Approx(norm2).epsilon(1e-14));

    const Complex alpha{0.3, -1.2};
    auto yy = y;
    k.axpy(alpha, x.data(), yy.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(yy[i] - (y[i] + alpha * x[i])) < 1e-14);
    }

    const Complex a{0.6, 0.1}, b{-0.2, 0.7}, c{1.1, -0.4}, d{0.0, 0.9};
    auto xm = x;
    auto ym = y;
    k.mix2(xm.data(), ym.data(), x.size(), a, b, c, d);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(xm[i] - (a * x[i] + b * y[i])) < 1e-14);
        CHECK(std::abs(ym[i] - (c * x[i] + d * y[i])) < 1e-14);
    }
}

TEST_CASE("avx2 kernels are equivalent to the scalar reference")
{
    const KernelTable* wide = adiabat::simd::avx2_kernels();
    if (wide == nullptr) {
        MESSAGE("AVX2 variant unavailable on this host; equivalence not exercised");
        return;
    }
    const KernelTable& ref = adiabat::simd::scalar_kernels();
    std::mt19937_64 rng(2024);
    const Complex alpha{-0.7, 0.25};
    const Complex a{0.6, 0.1}, b{-0.2, 0.7}, c{1.1, -0.4}, d{0.0, 0.9};

    for (std::size_t n = 0; n <= 33; ++n) {
        CAPTURE(n);
        const auto x = random_values(n, rng);
        const auto y = random_values(n, rng);
        const double tol = 1e-14 * static_cast<double>(n + 1);

        CHECK(std::abs(wide->dotc(x.data(), y.data(), n) - ref.dotc(x.data(), y.data(), n)) <= tol);
        CHECK(std::abs(wide->dotu(x.data(), y.data(), n) - ref.dotu(x.data(), y.data(), n)) <= tol);
        CHECK(std::abs(wide->norm2(x.data(), n) - ref.norm2(x.data(), n)) <= tol);

        auto y_ref = y;
        auto y_wide = y;
        ref.axpy(alpha, x.data(), y_ref.data(), n);
        wide->axpy(alpha, x.data(), y_wide.data(), n);
        CHECK(max_diff(y_ref, y_wide) <= 1e-15 * 4);

        auto x_ref = x, x_wide = x;
        auto z_ref = y, z_wide = y;
        ref.mix2(x_ref.data(), z_ref.data(), n, a, b, c, d);
        wide->mix2(x_wide.data(), z_wide.data(), n, a, b, c, d);
        CHECK(max_diff(x_ref, x_wide) <= 1e-15 * 8);
        CHECK(max_diff(z_ref, z_wide) <= 1e-15 * 8);
    }
}

TEST_CASE("dispatch exposes a usable active table and can be switched")
{
    const KernelTable& original = adiabat::simd::active();
    CHECK(!original.name.empty());

    adiabat::simd::set_active(adiabat::simd::scalar_kernels());
    CHECK(adiabat::simd::active().name == "scalar");
    const std::vector<Complex> x{{1.0, 2.0}, {3.0, -1.0}, {0.5, 0.5}};
    CHECK(std::abs(adiabat::simd::dotc(x.data(), x.data(), x.size()) - Complex{15.5, 0.0}) < 1e-15);

    adiabat::simd::set_active(original);
    CHECK(adiabat::simd::active().name == original.name);
}

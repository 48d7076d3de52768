#include "adiabat/numkernel.hpp"

#include "adiabat/errors.hpp"
#include "adiabat/simd_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace adiabat::num {

// ---------------------------------------------------------------------------
// StateVector
// ---------------------------------------------------------------------------

StateVector StateVector::basis(std::size_t dim, std::size_t index)
{
    StateVector v(dim);
    v[index] = 1.0;
    return v;
}

double StateVector::norm() const { return std::sqrt(simd::norm2(data(), dim())); }

StateVector& StateVector::operator*=(Complex s)
{
    for (auto& x : data_) {
        x *= s;
    }
    return *this;
}

Complex inner(const StateVector& a, const StateVector& b)
{
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::DimMismatch, "inner product of vectors with dims " + std::to_string(a.dim()) +
                                                " and " + std::to_string(b.dim()));
    }
    return simd::dotc(a.data(), b.data(), a.dim());
}

double max_abs_diff(const StateVector& a, const StateVector& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()), data_(rows.size() * rows.size())
{
    std::size_t r = 0;
    for (const auto& row_values : rows) {
        if (row_values.size() != dim_) {
            throw Error(ErrorKind::DimMismatch, "matrix literal is not square");
        }
        std::copy(row_values.begin(), row_values.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * dim_));
        ++r;
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim)
{
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::projector(const StateVector& v)
{
    ComplexMatrix m(v.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) {
        for (std::size_t j = 0; j < v.dim(); ++j) {
            m(i, j) = v[i] * std::conj(v[j]);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

double ComplexMatrix::max_abs() const
{
    double worst = 0.0;
    for (const auto& x : data_) {
        worst = std::max(worst, std::abs(x));
    }
    return worst;
}

double ComplexMatrix::inf_norm() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        double sum = 0.0;
        for (const auto& x : row(i)) {
            sum += std::abs(x);
        }
        worst = std::max(worst, sum);
    }
    return worst;
}

double ComplexMatrix::hermiticity_error() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i; j < dim_; ++j) {
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        }
    }
    return worst;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other)
{
    if (other.dim_ != dim_) {
        throw Error(ErrorKind::DimMismatch, "matrix sum with mismatched dims");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += other.data_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other)
{
    if (other.dim_ != dim_) {
        throw Error(ErrorKind::DimMismatch, "matrix difference with mismatched dims");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s)
{
    for (auto& x : data_) {
        x *= s;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::DimMismatch, "matrix product with mismatched dims");
    }
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex* out_row = out.row(i).data();
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik != Complex{}) {
                simd::axpy(aik, b.row(k).data(), out_row, n);
            }
        }
    }
    return out;
}

StateVector operator*(const ComplexMatrix& a, const StateVector& v)
{
    if (a.dim() != v.dim()) {
        throw Error(ErrorKind::DimMismatch, "matrix-vector product with mismatched dims");
    }
    StateVector out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        out[i] = simd::dotu(a.row(i).data(), v.data(), v.dim());
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::DimMismatch, "matrix comparison with mismatched dims");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
        }
    }
    return worst;
}

Complex expectation(const StateVector& a, const ComplexMatrix& m, const StateVector& b) { return inner(a, m * b); }

namespace pauli {
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, -kI}, {kI, 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
} // namespace pauli

// ---------------------------------------------------------------------------
// eigh
// ---------------------------------------------------------------------------

namespace {

void require_hermitian(const ComplexMatrix& h)
{
    for (std::size_t i = 0; i < h.dim(); ++i) {
        for (const auto& x : h.row(i)) {
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
                throw Error(ErrorKind::InvalidParams, "matrix has a non-finite entry");
            }
        }
    }
    const double err = h.hermiticity_error();
    if (err > kHermitianTolerance) {
        std::ostringstream msg;
        msg << "max |H - H^dagger| = " << err << " exceeds " << kHermitianTolerance;
        throw Error(ErrorKind::NonHermitian, msg.str());
    }
}

double off_diagonal_sq(const ComplexMatrix& a)
{
    double off = 0.0;
    for (std::size_t p = 0; p < a.dim(); ++p) {
        for (std::size_t q = p + 1; q < a.dim(); ++q) {
            off += std::norm(a(p, q));
        }
    }
    return off;
}

double frobenius_sq(const ComplexMatrix& a)
{
    double total = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        total += simd::norm2(a.row(i).data(), a.dim());
    }
    return total;
}

// One unitary two-plane rotation zeroing a(p, q). Rows of `vecs` hold the
// eigenvector columns accumulated so far.
void rotate(ComplexMatrix& a, ComplexMatrix& vecs, std::size_t p, std::size_t q)
{
    const Complex b = a(p, q);
    const double mag = std::abs(b);
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const Complex phase = b / mag; // e^{i phi}

    const double theta = (aqq - app) / (2.0 * mag);
    double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0.0) {
        t = -t;
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const std::size_t n = a.dim();

    // Rows p, q of G^dagger A.
    simd::mix2(a.row(p).data(), a.row(q).data(), n, c, -s * phase, s, c * phase);
    for (std::size_t k = 0; k < n; ++k) {
        if (k != p && k != q) {
            a(k, p) = std::conj(a(p, k));
            a(k, q) = std::conj(a(q, k));
        }
    }
    a(p, p) = app - t * mag;
    a(q, q) = aqq + t * mag;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    const Complex conj_phase = std::conj(phase);
    simd::mix2(vecs.row(p).data(), vecs.row(q).data(), n, c, -s * conj_phase, s, c * conj_phase);
}

} // namespace

EigenSystem eigh(const ComplexMatrix& h)
{
    require_hermitian(h);
    const std::size_t n = h.dim();

    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
        }
    }
    ComplexMatrix vecs = ComplexMatrix::identity(n);

    const double fro = std::sqrt(frobenius_sq(a));
    const double target = 0.25 * std::numeric_limits<double>::epsilon() * fro;
    bool converged = false;
    for (int sweep = 0; sweep < kJacobiSweepBudget; ++sweep) {
        const double off = off_diagonal_sq(a);
        if (off == 0.0 || std::sqrt(off) <= target) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0) {
                    continue;
                }
                const double g = 100.0 * mag;
                const double app = std::abs(a(p, p).real());
                const double aqq = std::abs(a(q, q).real());
                if (sweep > 3 && app + g == app && aqq + g == aqq) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                rotate(a, vecs, p, q);
            }
        }
    }
    if (!converged) {
        const double off = off_diagonal_sq(a);
        if (!(off == 0.0 || std::sqrt(off) <= target)) {
            std::ostringstream msg;
            msg << "Jacobi sweep budget " << kJacobiSweepBudget << " exhausted, off-diagonal norm " << std::sqrt(off);
            throw Error(ErrorKind::NoConvergence, msg.str());
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return a(l, l).real() < a(r, r).real(); });

    EigenSystem out;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (const std::size_t idx : order) {
        out.values.push_back(a(idx, idx).real());
        out.vectors.emplace_back(std::vector<Complex>(vecs.row(idx).begin(), vecs.row(idx).end()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// expm_minus_iH
// ---------------------------------------------------------------------------

ComplexMatrix expm_minus_iH(const EigenSystem& eig, double dt)
{
    if (!std::isfinite(dt)) {
        throw Error(ErrorKind::InvalidParams, "non-finite time step");
    }
    const std::size_t n = eig.dim();
    ComplexMatrix out(n);
    StateVector conj_v(n);
    for (std::size_t level = 0; level < n; ++level) {
        const StateVector& v = eig.vectors[level];
        const Complex phase = std::polar(1.0, -eig.values[level] * dt);
        for (std::size_t j = 0; j < n; ++j) {
            conj_v[j] = std::conj(v[j]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            simd::axpy(phase * v[i], conj_v.data(), out.row(i).data(), n);
        }
    }
    return out;
}

ComplexMatrix expm_minus_iH(const ComplexMatrix& h, double dt) { return expm_minus_iH(eigh(h), dt); }

// ---------------------------------------------------------------------------
// level matching and gauge alignment
// ---------------------------------------------------------------------------

std::vector<std::size_t> match_levels(const EigenSystem& prev, const EigenSystem& cur, double degenerate_tol)
{
    const std::size_t n = prev.dim();
    if (cur.dim() != n) {
        throw Error(ErrorKind::DimMismatch, "eigen systems of different dims");
    }

    struct Candidate {
        double overlap;
        std::size_t prev_level;
        std::size_t cur_level;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            candidates.push_back({std::abs(inner(prev.vectors[i], cur.vectors[j])), i, j});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& l, const Candidate& r) { return l.overlap > r.overlap; });

    constexpr std::size_t kFree = static_cast<std::size_t>(-1);
    std::vector<std::size_t> assignment(n, kFree);
    std::vector<bool> cur_taken(n, false);
    std::size_t assigned = 0;

    for (std::size_t idx = 0; idx < candidates.size() && assigned < n; ++idx) {
        const Candidate& pick = candidates[idx];
        if (assignment[pick.prev_level] != kFree || cur_taken[pick.cur_level]) {
            continue;
        }
        for (std::size_t k = idx + 1; k < candidates.size(); ++k) {
            const Candidate& rival = candidates[k];
            if (pick.overlap - rival.overlap > kMatchTieTolerance) {
                break;
            }
            if (assignment[rival.prev_level] != kFree || cur_taken[rival.cur_level]) {
                continue;
            }
            const bool same_prev = rival.prev_level == pick.prev_level;
            const bool same_cur = rival.cur_level == pick.cur_level;
            if (!same_prev && !same_cur) {
                continue;
            }
            const bool cur_cluster =
                same_prev && std::abs(cur.values[rival.cur_level] - cur.values[pick.cur_level]) < degenerate_tol;
            const bool prev_cluster =
                same_cur && std::abs(prev.values[rival.prev_level] - prev.values[pick.prev_level]) < degenerate_tol;
            if (!cur_cluster && !prev_cluster) {
                std::ostringstream msg;
                msg << "overlap tie " << pick.overlap << " vs " << rival.overlap << " between prev level "
                    << pick.prev_level << " and cur level " << pick.cur_level;
                throw Error(ErrorKind::DegenerateMatchAmbiguity, msg.str());
            }
        }
        assignment[pick.prev_level] = pick.cur_level;
        cur_taken[pick.cur_level] = true;
        ++assigned;
    }
    return assignment;
}

EigenSystem align_phases(const EigenSystem& prev, const EigenSystem& cur, double degenerate_tol)
{
    const std::vector<std::size_t> assignment = match_levels(prev, cur, degenerate_tol);
    const std::size_t n = prev.dim();

    EigenSystem out;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t level = 0; level < n; ++level) {
        out.values.push_back(cur.values[assignment[level]]);
        StateVector v = cur.vectors[assignment[level]];
        const Complex overlap = inner(prev.vectors[level], v);
        const double mag = std::abs(overlap);
        // Already real-positive vectors stay bit-identical.
        const bool aligned = overlap.real() > 0.0 && std::abs(overlap.imag()) <= 1e-14 * mag;
        if (mag > 0.0 && !aligned) {
            v *= std::conj(overlap) / mag;
        }
        out.vectors.push_back(std::move(v));
    }
    return out;
}

} // namespace adiabat::num

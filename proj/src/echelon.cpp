#include "qalt/echelon.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace qalt {

namespace {

struct Rref {
    Mat m;
    std::vector<size_t> pivot_cols;
};

// Row-reduced echelon form with pivoting by smallest height among the
// candidate entries of the pivot column; small pivots keep coefficient
// growth in check on the antisymmetrizer-style matrices this library feeds
// through here.
Rref rref(Mat m) {
    const size_t rows = m.rows(), cols = m.cols();
    std::vector<size_t> pivot_cols;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t best = rows;
        size_t best_h = 0;
        for (size_t i = r; i < rows; ++i) {
            if (sgn(m.at(i, c)) == 0) continue;
            size_t h = height_bits(m.at(i, c));
            if (best == rows || h < best_h) {
                best = i;
                best_h = h;
            }
        }
        if (best == rows) continue;
        if (best != r)
            for (size_t j = c; j < cols; ++j) std::swap(m.at(r, j), m.at(best, j));
        Q inv_piv = Q(1) / m.at(r, c);
        if (inv_piv != 1)
            for (size_t j = c; j < cols; ++j)
                if (sgn(m.at(r, j)) != 0) m.at(r, j) *= inv_piv;
        const Q* prow = m.row_ptr(r);
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < (long long)rows; ++i) {
            if ((size_t)i == r) continue;
            Q f = m.at(i, c);
            if (sgn(f) == 0) continue;
            Q* irow = m.row_ptr(i);
            for (size_t j = c; j < cols; ++j)
                if (sgn(prow[j]) != 0) irow[j] -= f * prow[j];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivot_cols)};
}

}  // namespace

bool Subspace::contains(const Vec& v) const {
    if (v.size() != ambient) throw std::invalid_argument("ambient mismatch");
    // Reduce v against the RCEF basis.
    Vec w = v;
    for (size_t j = 0; j < basis.cols(); ++j) {
        size_t p = 0;
        while (p < ambient && sgn(basis.at(p, j)) == 0) ++p;
        if (p == ambient) continue;
        if (sgn(w[p]) == 0) continue;
        Q f = w[p];
        for (size_t i = 0; i < ambient; ++i)
            if (sgn(basis.at(i, j)) != 0) w[i] -= f * basis.at(i, j);
    }
    return vec_is_zero(w);
}

Subspace full_space(size_t n) { return Subspace{n, Mat::identity(n)}; }
Subspace zero_space(size_t n) { return Subspace{n, Mat(n, 0)}; }

Subspace column_space(const Mat& m) {
    ColSpaceBuilder b(m.rows());
    for (size_t j = 0; j < m.cols(); ++j) b.add(m.col(j));
    return Subspace{m.rows(), b.basis()};
}

std::optional<size_t> rank_mod_p(const Mat& m, uint64_t p) {
    const size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<uint64_t>> a(rows, std::vector<uint64_t>(cols));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j)
            if (!mod_p(m.at(i, j), p, a[i][j])) return std::nullopt;
    auto mulmod = [p](uint64_t x, uint64_t y) { return (uint64_t)((__uint128_t)x * y % p); };
    auto powmod = [&](uint64_t b, uint64_t e) {
        uint64_t r = 1;
        while (e) {
            if (e & 1) r = mulmod(r, b);
            b = mulmod(b, b);
            e >>= 1;
        }
        return r;
    };
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = rows;
        for (size_t i = r; i < rows; ++i)
            if (a[i][c] % p != 0) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        uint64_t inv = powmod(a[r][c] % p, p - 2);
        for (size_t j = c; j < cols; ++j) a[r][j] = mulmod(a[r][j] % p, inv);
        for (size_t i = r + 1; i < rows; ++i) {
            uint64_t f = a[i][c] % p;
            if (f == 0) continue;
            for (size_t j = c; j < cols; ++j) {
                uint64_t s = mulmod(f, a[r][j]);
                a[i][j] = (a[i][j] % p + p - s) % p;
            }
        }
        ++r;
    }
    return r;
}

// Fixed 62-bit prime for the fast-path rank certificate.
static constexpr uint64_t kRankPrime = 4611686018427388039ULL;

size_t rank(const Mat& m) {
    const size_t bound = std::min(m.rows(), m.cols());
    if (bound == 0) return 0;
    // Full rank mod p certifies full rank over Q; anything less falls back
    // to the exact computation, which stays authoritative.
    if (auto rp = rank_mod_p(m, kRankPrime); rp && *rp == bound) return bound;
    return rref(m).pivot_cols.size();
}

Subspace kernel(const Mat& m) {
    const size_t cols = m.cols();
    Rref rr = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : rr.pivot_cols) is_pivot[c] = true;
    ColSpaceBuilder b(cols);
    for (size_t c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        Vec v(cols);
        v[c] = 1;
        for (size_t r = 0; r < rr.pivot_cols.size(); ++r) v[rr.pivot_cols[r]] = -rr.m.at(r, c);
        b.add(std::move(v));
    }
    return Subspace{cols, b.basis()};
}

std::optional<Vec> solve(const Mat& m, const Vec& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: dimension mismatch");
    Mat aug = Mat::hcat(m, Mat::col_vector(b));
    Rref rr = rref(aug);
    for (size_t c : rr.pivot_cols)
        if (c == m.cols()) return std::nullopt;  // pivot in the rhs column: inconsistent
    Vec x(m.cols());
    for (size_t r = 0; r < rr.pivot_cols.size(); ++r) x[rr.pivot_cols[r]] = rr.m.at(r, m.cols());
    return x;
}

std::optional<Mat> inverse(const Mat& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    const size_t n = m.rows();
    Mat aug = Mat::hcat(m, Mat::identity(n));
    Rref rr = rref(aug);
    if (rr.pivot_cols.size() != n) return std::nullopt;
    for (size_t r = 0; r < n; ++r)
        if (rr.pivot_cols[r] != r) return std::nullopt;
    return rr.m.col_slice(n, n);
}

Subspace intersect(const Subspace& u, const Subspace& v) {
    if (u.ambient != v.ambient) throw std::invalid_argument("intersect: ambient mismatch");
    if (u.dim() == 0 || v.dim() == 0) return zero_space(u.ambient);
    // x in u cap v  <=>  x = U a = V c for some coefficients (a, -c) in
    // ker[U | V]; read the intersection off the U side.
    Mat stacked = Mat::hcat(u.basis, v.basis);
    Subspace ker = kernel(stacked);
    ColSpaceBuilder b(u.ambient);
    for (size_t j = 0; j < ker.dim(); ++j) {
        Vec coeff = ker.basis.col(j);
        Vec a(coeff.begin(), coeff.begin() + u.dim());
        b.add(u.basis.apply(a));
    }
    return Subspace{u.ambient, b.basis()};
}

bool ColSpaceBuilder::add(Vec v, Vec* track) {
    if (v.size() != ambient_) throw std::invalid_argument("ColSpaceBuilder ambient mismatch");
    Vec t = track ? *track : Vec{};
    for (size_t j = 0; j < cols_.size(); ++j) {
        const size_t p = pivots_[j];
        if (sgn(v[p]) == 0) continue;
        Q f = v[p];
        const Vec& cj = cols_[j];
        for (size_t i = 0; i < ambient_; ++i)
            if (sgn(cj[i]) != 0) v[i] -= f * cj[i];
        if (track) {
            const Vec& tj = tracked_[j];
            for (size_t i = 0; i < t.size(); ++i)
                if (sgn(tj[i]) != 0) t[i] -= f * tj[i];
        }
    }
    size_t p = 0;
    while (p < ambient_ && sgn(v[p]) == 0) ++p;
    if (p == ambient_) return false;
    Q inv_piv = Q(1) / v[p];
    if (inv_piv != 1) {
        for (Q& x : v)
            if (sgn(x) != 0) x *= inv_piv;
        for (Q& x : t)
            if (sgn(x) != 0) x *= inv_piv;
    }
    // Back-eliminate the new pivot row from the existing columns to keep the
    // basis reduced.
    for (size_t j = 0; j < cols_.size(); ++j) {
        Q f = cols_[j][p];
        if (sgn(f) == 0) continue;
        for (size_t i = 0; i < ambient_; ++i)
            if (sgn(v[i]) != 0) cols_[j][i] -= f * v[i];
        if (track)
            for (size_t i = 0; i < t.size(); ++i)
                if (sgn(t[i]) != 0) tracked_[j][i] -= f * t[i];
    }
    // Insert sorted by pivot row so the basis matrix is canonical.
    size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    pivots_.insert(pivots_.begin() + pos, p);
    cols_.insert(cols_.begin() + pos, std::move(v));
    if (track)
        tracked_.insert(tracked_.begin() + pos, std::move(t));
    else if (!tracked_.empty())
        throw std::logic_error("ColSpaceBuilder: inconsistent tracking");
    return true;
}

Mat ColSpaceBuilder::basis() const {
    Mat m(ambient_, cols_.size());
    for (size_t j = 0; j < cols_.size(); ++j) m.set_col(j, cols_[j]);
    return m;
}

Mat ColSpaceBuilder::tracked() const {
    if (tracked_.size() != cols_.size()) throw std::logic_error("ColSpaceBuilder: nothing tracked");
    Mat m(tracked_.empty() ? 0 : tracked_[0].size(), tracked_.size());
    for (size_t j = 0; j < tracked_.size(); ++j) m.set_col(j, tracked_[j]);
    return m;
}

namespace ref {

size_t rank(const Mat& m) {
    Mat a = m;
    const size_t rows = a.rows(), cols = a.cols();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = rows;
        for (size_t i = r; i < rows; ++i)
            if (sgn(a.at(i, c)) != 0) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        if (piv != r)
            for (size_t j = 0; j < cols; ++j) std::swap(a.at(r, j), a.at(piv, j));
        for (size_t i = r + 1; i < rows; ++i) {
            if (sgn(a.at(i, c)) == 0) continue;
            Q f = a.at(i, c) / a.at(r, c);
            for (size_t j = c; j < cols; ++j) a.at(i, j) -= f * a.at(r, j);
        }
        ++r;
    }
    return r;
}

}  // namespace ref

}  // namespace qalt

#pragma once

#include "qalt/matrix.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qalt {

// A linear subspace of Q^ambient, stored as a basis matrix whose columns are
// the basis vectors, kept in reduced column echelon form. Two Subspace values
// are equal as subspaces iff their basis matrices are equal entrywise.
struct Subspace {
    size_t ambient = 0;
    Mat basis;  // ambient x dim, RCEF

    size_t dim() const { return basis.cols(); }
    bool contains(const Vec& v) const;
    bool operator==(const Subspace& o) const { return ambient == o.ambient && basis == o.basis; }
};

Subspace full_space(size_t n);
Subspace zero_space(size_t n);
// Subspace spanned by the columns of m (reduced to RCEF).
Subspace column_space(const Mat& m);

size_t rank(const Mat& m);
// Basis of {x : m x = 0}.
Subspace kernel(const Mat& m);
// Some x with m x = b, or nullopt when the system is inconsistent.
std::optional<Vec> solve(const Mat& m, const Vec& b);
std::optional<Mat> inverse(const Mat& m);
// u cap v; ambients must match.
Subspace intersect(const Subspace& u, const Subspace& v);

// Rank of m over F_p. Always a lower bound on the rational rank; when it
// reaches min(rows, cols) it certifies full rank, which rank() uses as a
// fast path. Returns nullopt when a denominator vanishes mod p.
std::optional<size_t> rank_mod_p(const Mat& m, uint64_t p);

// Incremental column-space accumulator: feeds candidate vectors one at a
// time and keeps a column echelon basis of their span. Cheap when the final
// rank is much smaller than the ambient dimension.
class ColSpaceBuilder {
public:
    explicit ColSpaceBuilder(size_t ambient) : ambient_(ambient) {}

    // Returns true when v enlarged the span. When track is non-null, it is
    // carried along under the same column operations (used to keep s_d
    // preimages aligned with the echelon basis of the image).
    bool add(Vec v, Vec* track = nullptr);

    size_t dim() const { return cols_.size(); }
    size_t ambient() const { return ambient_; }
    // Basis as a matrix (columns), reduced column echelon form.
    Mat basis() const;
    Mat tracked() const;

private:
    size_t ambient_;
    std::vector<size_t> pivots_;
    std::vector<Vec> cols_;
    std::vector<Vec> tracked_;
};

namespace ref {
size_t rank(const Mat& m);
}

}  // namespace qalt

#pragma once

#include "qalt/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace qalt {

// Dense matrix over Q, row-major. All operations are exact; values are
// immutable from the caller's perspective once constructed (operations
// return fresh matrices), so concurrent use is safe.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Mat(size_t rows, size_t cols, std::initializer_list<long> entries);

    static Mat identity(size_t n);
    static Mat col_vector(const Vec& v);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Q& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const Q& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    Q* row_ptr(size_t i) { return data_.data() + i * cols_; }
    const Q* row_ptr(size_t i) const { return data_.data() + i * cols_; }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    bool is_zero() const;
    bool is_identity() const;

    Mat transpose() const;
    Vec col(size_t j) const;
    Vec row(size_t i) const;
    void set_col(size_t j, const Vec& v);

    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat operator*(const Q& s) const;
    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);

    Vec apply(const Vec& v) const;          // this * v
    Vec apply_transposed(const Vec& v) const;  // this^T * v

    // Columns [j0, j0+n) as a new matrix.
    Mat col_slice(size_t j0, size_t n) const;
    // Horizontal concatenation.
    static Mat hcat(const Mat& a, const Mat& b);

    std::string to_string() const;

private:
    size_t rows_, cols_;
    Vec data_;
};

// Kronecker product under the standard basis identification
// (a otimes b)(x otimes y) = ax otimes by: block (i,j) of the result is a(i,j)*b.
Mat kron(const Mat& a, const Mat& b);

// v otimes w as a coordinate vector.
Vec kron_vec(const Vec& v, const Vec& w);

Q dot(const Vec& a, const Vec& b);
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Q& s, const Vec& a);
bool vec_is_zero(const Vec& v);

// Applies F_1 (x) ... (x) F_k to every column of m without forming the
// Kronecker product, one mode at a time; factor i must be square of size
// n_i with prod n_i = m.rows().
Mat kron_apply(const std::vector<const Mat*>& factors, const Mat& m);

// Serial reference implementations of the parallel kernels above. Kept for
// testing (exact equality with the OpenMP paths) and for the benchmark tool.
namespace ref {
Mat mul(const Mat& a, const Mat& b);
Mat kron(const Mat& a, const Mat& b);
}  // namespace ref

}  // namespace qalt

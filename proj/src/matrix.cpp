#include "qalt/matrix.hpp"

#include <omp.h>

#include <sstream>
#include <stdexcept>

namespace qalt {

bool mod_p(const Q& x, uint64_t p, uint64_t& out) {
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_class den_red = x.get_den() % pz;
    if (den_red == 0) return false;
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), den_red.get_mpz_t(), pz.get_mpz_t()) == 0) return false;
    mpz_class num_red = x.get_num() % pz;
    if (num_red < 0) num_red += pz;
    mpz_class r = (num_red * inv) % pz;
    out = mpz_get_ui(r.get_mpz_t());
    return true;
}

Mat::Mat(size_t rows, size_t cols, std::initializer_list<long> entries) : Mat(rows, cols) {
    if (entries.size() != rows * cols) throw std::invalid_argument("matrix literal size mismatch");
    size_t k = 0;
    for (long e : entries) data_[k++] = Q(e);
}

Mat Mat::identity(size_t n) {
    Mat m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Mat Mat::col_vector(const Vec& v) {
    Mat m(v.size(), 1);
    for (size_t i = 0; i < v.size(); ++i) m.at(i, 0) = v[i];
    return m;
}

bool Mat::is_zero() const {
    for (const Q& x : data_)
        if (sgn(x) != 0) return false;
    return true;
}

bool Mat::is_identity() const {
    if (rows_ != cols_) return false;
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            if (at(i, j) != Q(i == j ? 1 : 0)) return false;
    return true;
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Vec Mat::col(size_t j) const {
    Vec v(rows_);
    for (size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
    return v;
}

Vec Mat::row(size_t i) const {
    return Vec(row_ptr(i), row_ptr(i) + cols_);
}

void Mat::set_col(size_t j, const Vec& v) {
    if (v.size() != rows_) throw std::invalid_argument("set_col size mismatch");
    for (size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
}

Mat Mat::operator+(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix add shape mismatch");
    Mat r(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] + o.data_[k];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sub shape mismatch");
    Mat r(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] - o.data_[k];
    return r;
}

Mat& Mat::operator+=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix add shape mismatch");
    for (size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sub shape mismatch");
    for (size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix mul shape mismatch");
    Mat r(rows_, o.cols_);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < (long long)rows_; ++i) {
        Q acc;
        for (size_t k = 0; k < cols_; ++k) {
            const Q& a = at(i, k);
            if (sgn(a) == 0) continue;
            const Q* brow = o.row_ptr(k);
            for (size_t j = 0; j < o.cols_; ++j) {
                if (sgn(brow[j]) == 0) continue;
                acc = a * brow[j];
                r.at(i, j) += acc;
            }
        }
    }
    return r;
}

Mat Mat::operator*(const Q& s) const {
    Mat r(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] * s;
    return r;
}

Vec Mat::apply(const Vec& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix apply size mismatch");
    Vec r(rows_);
    for (size_t i = 0; i < rows_; ++i) {
        const Q* rp = row_ptr(i);
        Q acc(0);
        for (size_t j = 0; j < cols_; ++j)
            if (sgn(rp[j]) != 0 && sgn(v[j]) != 0) acc += rp[j] * v[j];
        r[i] = acc;
    }
    return r;
}

Vec Mat::apply_transposed(const Vec& v) const {
    if (v.size() != rows_) throw std::invalid_argument("matrix apply size mismatch");
    Vec r(cols_);
    for (size_t i = 0; i < rows_; ++i) {
        if (sgn(v[i]) == 0) continue;
        const Q* rp = row_ptr(i);
        for (size_t j = 0; j < cols_; ++j)
            if (sgn(rp[j]) != 0) r[j] += rp[j] * v[i];
    }
    return r;
}

Mat Mat::col_slice(size_t j0, size_t n) const {
    Mat r(rows_, n);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < n; ++j) r.at(i, j) = at(i, j0 + j);
    return r;
}

Mat Mat::hcat(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hcat row mismatch");
    Mat r(a.rows(), a.cols() + b.cols());
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
        for (size_t j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
    }
    return r;
}

std::string Mat::to_string() const {
    std::ostringstream os;
    for (size_t i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).get_str();
        os << (i + 1 == rows_ ? "]" : "\n");
    }
    return os.str();
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (long long ia = 0; ia < (long long)a.rows(); ++ia) {
        for (long long ib = 0; ib < (long long)b.rows(); ++ib) {
            for (size_t ja = 0; ja < a.cols(); ++ja) {
                const Q& s = a.at(ia, ja);
                if (sgn(s) == 0) continue;
                for (size_t jb = 0; jb < b.cols(); ++jb) {
                    if (sgn(b.at(ib, jb)) == 0) continue;
                    r.at(ia * b.rows() + ib, ja * b.cols() + jb) = s * b.at(ib, jb);
                }
            }
        }
    }
    return r;
}

Vec kron_vec(const Vec& v, const Vec& w) {
    Vec r(v.size() * w.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (sgn(v[i]) == 0) continue;
        for (size_t j = 0; j < w.size(); ++j)
            if (sgn(w[j]) != 0) r[i * w.size() + j] = v[i] * w[j];
    }
    return r;
}

Q dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot size mismatch");
    Q r(0);
    for (size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) r += a[i] * b[i];
    return r;
}

Vec vec_add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec add size mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec sub size mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec vec_scale(const Q& s, const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

bool vec_is_zero(const Vec& v) {
    for (const Q& x : v)
        if (sgn(x) != 0) return false;
    return true;
}

Mat kron_apply(const std::vector<const Mat*>& factors, const Mat& m) {
    size_t total = 1;
    for (const Mat* f : factors) {
        if (f->rows() != f->cols()) throw std::invalid_argument("kron_apply factors must be square");
        total *= f->rows();
    }
    if (total != m.rows()) throw std::invalid_argument("kron_apply dimension mismatch");
    Mat cur = m;
    size_t pre = 1;
    for (size_t k = 0; k < factors.size(); ++k) {
        const Mat& f = *factors[k];
        const size_t n = f.rows();
        size_t post = total / (pre * n);
        if (!f.is_identity()) {
            Mat next(m.rows(), m.cols());
#pragma omp parallel for schedule(static) if (pre > 1)
            for (long long a = 0; a < (long long)pre; ++a)
                for (size_t r = 0; r < n; ++r)
                    for (size_t b = 0; b < post; ++b) {
                        size_t out_row = (size_t)a * n * post + r * post + b;
                        for (size_t c = 0; c < n; ++c) {
                            const Q& fv = f.at(r, c);
                            if (sgn(fv) == 0) continue;
                            size_t in_row = (size_t)a * n * post + c * post + b;
                            for (size_t j = 0; j < m.cols(); ++j) {
                                const Q& xv = cur.at(in_row, j);
                                if (sgn(xv) != 0) next.at(out_row, j) += fv * xv;
                            }
                        }
                    }
            cur = std::move(next);
        }
        pre *= n;
    }
    return cur;
}

namespace ref {

Mat mul(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix mul shape mismatch");
    Mat r(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) {
            Q acc(0);
            for (size_t k = 0; k < a.cols(); ++k) acc += a.at(i, k) * b.at(k, j);
            r.at(i, j) = acc;
        }
    return r;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t ia = 0; ia < a.rows(); ++ia)
        for (size_t ja = 0; ja < a.cols(); ++ja)
            for (size_t ib = 0; ib < b.rows(); ++ib)
                for (size_t jb = 0; jb < b.cols(); ++jb)
                    r.at(ia * b.rows() + ib, ja * b.cols() + jb) = a.at(ia, ja) * b.at(ib, jb);
    return r;
}

}  // namespace ref

}  // namespace qalt

#include "qalt/algebra.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace qalt {

SparseVec SparseVec::from_dense(const Vec& v) {
    SparseVec s;
    for (size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0) s.terms.emplace_back(i, v[i]);
    return s;
}

Vec SparseVec::dense(size_t dim) const {
    Vec v(dim);
    for (const auto& [i, c] : terms) v[i] = c;
    return v;
}

Algebra::Algebra(Raw raw)
    : dim_(raw.dim),
      labels_(std::move(raw.labels)),
      mul_(std::move(raw.mul)),
      unit_(std::move(raw.unit)),
      invol_(std::move(raw.invol)),
      kind_(raw.kind),
      description_(std::move(raw.description)),
      quat_a_(raw.quat_a),
      quat_b_(raw.quat_b),
      matrix_n_(raw.matrix_n) {
    finish_construction();
}

void Algebra::finish_construction() {
    degree_ = 0;
    while (degree_ * degree_ < dim_) ++degree_;
    if (degree_ * degree_ != dim_)
        throw std::invalid_argument("algebra dimension " + std::to_string(dim_) +
                                    " is not a perfect square");
    trd_basis_ = Vec(dim_);
    for (size_t i = 0; i < dim_; ++i) {
        // trace of left multiplication by e_i
        Q tr(0);
        for (size_t j = 0; j < dim_; ++j)
            for (const auto& [t, c] : mul_[i][j].terms)
                if (t == j) tr += c;
        trd_basis_[i] = tr / Q((long)degree_);
    }
}

std::shared_ptr<const Algebra> Algebra::rationals() {
    Raw raw;
    raw.dim = 1;
    raw.labels = {"1"};
    raw.mul = {{SparseVec{{{0, Q(1)}}}}};
    raw.unit = {Q(1)};
    raw.invol = Mat::identity(1);
    raw.kind = Kind::Field;
    raw.description = "Q";
    return std::make_shared<Algebra>(std::move(raw));
}

Vec Algebra::basis_vec(size_t i) const {
    Vec v(dim_);
    v[i] = 1;
    return v;
}

Vec Algebra::scalar(const Q& c) const {
    Vec v(dim_);
    for (size_t i = 0; i < dim_; ++i) v[i] = c * unit_[i];
    return v;
}

const Mat& Algebra::involution() const {
    if (!invol_) throw std::logic_error("algebra carries no involution");
    return *invol_;
}

Vec Algebra::apply_involution(const Vec& x) const { return involution().apply(x); }

Vec Algebra::mul(const Vec& x, const Vec& y) const {
    if (x.size() != dim_ || y.size() != dim_) throw std::invalid_argument("algebra element size");
    Vec r(dim_);
    for (size_t i = 0; i < dim_; ++i) {
        if (sgn(x[i]) == 0) continue;
        for (size_t j = 0; j < dim_; ++j) {
            if (sgn(y[j]) == 0) continue;
            Q f = x[i] * y[j];
            for (const auto& [t, c] : mul_[i][j].terms) r[t] += f * c;
        }
    }
    return r;
}

Mat Algebra::left_mult(const Vec& x) const {
    Mat m(dim_, dim_);
    for (size_t j = 0; j < dim_; ++j)
        for (size_t i = 0; i < dim_; ++i) {
            if (sgn(x[i]) == 0) continue;
            for (const auto& [t, c] : mul_[i][j].terms) m.at(t, j) += x[i] * c;
        }
    return m;
}

Mat Algebra::right_mult(const Vec& x) const {
    Mat m(dim_, dim_);
    for (size_t j = 0; j < dim_; ++j)
        for (size_t k = 0; k < dim_; ++k) {
            if (sgn(x[k]) == 0) continue;
            for (const auto& [t, c] : mul_[j][k].terms) m.at(t, j) += x[k] * c;
        }
    return m;
}

std::optional<Vec> Algebra::inverse_of(const Vec& x) const {
    auto y = solve(left_mult(x), unit_);
    if (!y) return std::nullopt;
    if (mul(*y, x) != unit_) return std::nullopt;
    return y;
}

Q Algebra::trd(const Vec& x) const {
    Q r(0);
    for (size_t i = 0; i < dim_; ++i)
        if (sgn(x[i]) != 0) r += x[i] * trd_basis_[i];
    return r;
}

Q Algebra::nrd(const Vec& x) const {
    switch (kind_) {
        case Kind::Field:
            return x[0];
        case Kind::Quaternion:
            return x[0] * x[0] - quat_a_ * x[1] * x[1] - quat_b_ * x[2] * x[2] +
                   quat_a_ * quat_b_ * x[3] * x[3];
        case Kind::Matrix: {
            // determinant over the matrix-unit basis
            Mat m(matrix_n_, matrix_n_);
            for (size_t i = 0; i < matrix_n_; ++i)
                for (size_t j = 0; j < matrix_n_; ++j) m.at(i, j) = x[i * matrix_n_ + j];
            // fraction-free would also do; plain elimination with exact Q
            Q det(1);
            size_t n = matrix_n_;
            for (size_t c = 0, r = 0; c < n; ++c, ++r) {
                size_t piv = n;
                for (size_t i = r; i < n; ++i)
                    if (sgn(m.at(i, c)) != 0) {
                        piv = i;
                        break;
                    }
                if (piv == n) return Q(0);
                if (piv != r) {
                    for (size_t j = 0; j < n; ++j) std::swap(m.at(r, j), m.at(piv, j));
                    det = -det;
                }
                det *= m.at(r, c);
                for (size_t i = r + 1; i < n; ++i) {
                    if (sgn(m.at(i, c)) == 0) continue;
                    Q f = m.at(i, c) / m.at(r, c);
                    for (size_t j = c; j < n; ++j) m.at(i, j) -= f * m.at(r, j);
                }
            }
            return det;
        }
        default:
            return reduced_norm_by_ratio(shared_from_this(), x);
    }
}

bool Algebra::same_as(const Algebra& o) const {
    if (this == &o) return true;
    if (dim_ != o.dim_ || unit_ != o.unit_) return false;
    for (size_t i = 0; i < dim_; ++i)
        for (size_t j = 0; j < dim_; ++j)
            if (mul_[i][j].terms != o.mul_[i][j].terms) return false;
    if (invol_.has_value() != o.invol_.has_value()) return false;
    if (invol_ && !(*invol_ == *o.invol_)) return false;
    return true;
}

void Algebra::validate(bool azumaya) const {
    // unit laws
    for (size_t i = 0; i < dim_; ++i) {
        if (mul(unit_, basis_vec(i)) != basis_vec(i)) throw std::invalid_argument("unit law 1*x failed");
        if (mul(basis_vec(i), unit_) != basis_vec(i)) throw std::invalid_argument("unit law x*1 failed");
    }
    // associativity, exhaustively on basis triples
    Vec lhs(dim_), rhs(dim_);
    for (size_t i = 0; i < dim_; ++i)
        for (size_t j = 0; j < dim_; ++j) {
            const SparseVec& ij = mul_[i][j];
            for (size_t k = 0; k < dim_; ++k) {
                std::fill(lhs.begin(), lhs.end(), Q(0));
                std::fill(rhs.begin(), rhs.end(), Q(0));
                for (const auto& [t, c] : ij.terms)
                    for (const auto& [u, e] : mul_[t][k].terms) lhs[u] += c * e;
                for (const auto& [t, c] : mul_[j][k].terms)
                    for (const auto& [u, e] : mul_[i][t].terms) rhs[u] += c * e;
                if (lhs != rhs)
                    throw std::invalid_argument("associativity failed on basis triple (" +
                                                labels_[i] + "," + labels_[j] + "," + labels_[k] + ")");
            }
        }
    if (invol_) {
        const Mat& s = *invol_;
        if (!(s * s).is_identity()) throw std::invalid_argument("involution is not an involution");
        if (s.apply(unit_) != unit_) throw std::invalid_argument("involution moves the unit");
        for (size_t i = 0; i < dim_; ++i)
            for (size_t j = 0; j < dim_; ++j) {
                Vec a = s.apply(mul(basis_vec(i), basis_vec(j)));
                Vec b = mul(s.apply(basis_vec(j)), s.apply(basis_vec(i)));
                if (a != b)
                    throw std::invalid_argument("involution is not an anti-automorphism at (" +
                                                labels_[i] + "," + labels_[j] + ")");
            }
    }
    if (azumaya) {
        // trace form nondegenerate
        Mat t(dim_, dim_);
        for (size_t i = 0; i < dim_; ++i)
            for (size_t j = 0; j < dim_; ++j)
                t.at(i, j) = trd(mul(basis_vec(i), basis_vec(j)));
        if (rank(t) != dim_)
            throw std::invalid_argument("trace form is degenerate: algebra is not Azumaya");
        // center = K*1
        Mat comm(dim_ * dim_, dim_);
        for (size_t i = 0; i < dim_; ++i) {
            Mat d = left_mult(basis_vec(i)) - right_mult(basis_vec(i));
            for (size_t r = 0; r < dim_; ++r)
                for (size_t c = 0; c < dim_; ++c) comm.at(i * dim_ + r, c) = d.at(r, c);
        }
        if (kernel(comm).dim() != 1)
            throw std::invalid_argument("center is larger than K: algebra is not Azumaya over K");
    }
}

InvolutionType Algebra::involution_type() const {
    const size_t n = degree_;
    size_t sym = symmetric_subspace(+1).dim();
    if (sym == n * (n + 1) / 2) return InvolutionType::Orthogonal;
    if (sym == n * (n - 1) / 2) return InvolutionType::Symplectic;
    throw std::invalid_argument("involution is neither orthogonal nor symplectic");
}

int Algebra::epsilon_sigma() const {
    return involution_type() == InvolutionType::Orthogonal ? 1 : -1;
}

Subspace Algebra::symmetric_subspace(int eps) const {
    if (eps != 1 && eps != -1) throw std::invalid_argument("eps must be +-1");
    Mat m = involution();
    for (size_t i = 0; i < dim_; ++i) m.at(i, i) -= Q(eps);
    return kernel(m);
}

int sigma_signature(const Algebra& A, const Perm& g) {
    if (g.sign() == 1) return 1;
    return A.epsilon_sigma();
}

Q reduced_trace(const Algebra& A, const Vec& x) { return A.trd(x); }
Q reduced_norm(const Algebra& A, const Vec& x) { return A.nrd(x); }

// ---------------------------------------------------------------------------
// constructors

AlgebraPtr make_matrix_algebra(size_t n, const MatrixInvolution& inv, bool validate) {
    if (n == 0) throw std::invalid_argument("matrix algebra of size 0");
    Algebra::Raw raw;
    raw.dim = n * n;
    raw.kind = Algebra::Kind::Matrix;
    raw.matrix_n = n;
    raw.labels.resize(n * n);
    raw.mul.assign(n * n, std::vector<SparseVec>(n * n));
    raw.unit = Vec(n * n);
    auto idx = [n](size_t i, size_t j) { return i * n + j; };
    for (size_t i = 0; i < n; ++i) {
        raw.unit[idx(i, i)] = 1;
        for (size_t j = 0; j < n; ++j) raw.labels[idx(i, j)] = "e" + std::to_string(i + 1) + std::to_string(j + 1);
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k)
                for (size_t l = 0; l < n; ++l)
                    if (j == k) raw.mul[idx(i, j)][idx(k, l)].terms.emplace_back(idx(i, l), Q(1));
    Mat sigma(n * n, n * n);
    if (!inv.u) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) sigma.at(idx(j, i), idx(i, j)) = 1;
        raw.description = "M" + std::to_string(n) + "(Q) with transpose";
    } else {
        const Mat& u = *inv.u;
        if (u.rows() != n || u.cols() != n) throw std::invalid_argument("conjugating matrix has wrong size");
        Mat ut = u.transpose();
        bool plus = (ut == u), minus = (ut == u * Q(-1));
        if (!plus && !minus)
            throw std::invalid_argument("conjugating matrix must be symmetric or antisymmetric");
        auto uinv = inverse(u);
        if (!uinv) throw std::invalid_argument("conjugating matrix is singular");
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                // sigma(e_ij) = u e_ji u^{-1}
                Mat e(n, n);
                e.at(j, i) = 1;
                Mat img = (u * e) * (*uinv);
                for (size_t r = 0; r < n; ++r)
                    for (size_t c = 0; c < n; ++c) sigma.at(idx(r, c), idx(i, j)) = img.at(r, c);
            }
        raw.description = "M" + std::to_string(n) + "(Q) with conjugate involution";
    }
    raw.invol = sigma;
    auto alg = std::make_shared<Algebra>(std::move(raw));
    if (validate) alg->validate();
    return alg;
}

AlgebraPtr make_quaternion(const Q& a, const Q& b, const QuaternionInvolution& inv) {
    if (sgn(a) == 0 || sgn(b) == 0) throw std::invalid_argument("quaternion parameters must be nonzero");
    Algebra::Raw raw;
    raw.dim = 4;
    raw.kind = Algebra::Kind::Quaternion;
    raw.quat_a = a;
    raw.quat_b = b;
    raw.labels = {"1", "i", "j", "k"};
    raw.unit = {Q(1), Q(0), Q(0), Q(0)};
    raw.mul.assign(4, std::vector<SparseVec>(4));
    auto set = [&raw](size_t i, size_t j, std::vector<std::pair<size_t, Q>> t) {
        raw.mul[i][j].terms = std::move(t);
    };
    const Q ab = a * b;
    // basis 1,i,j,k with i^2=a, j^2=b, ij=k=-ji
    for (size_t t = 0; t < 4; ++t) {
        set(0, t, {{t, Q(1)}});
        if (t) set(t, 0, {{t, Q(1)}});
    }
    set(1, 1, {{0, a}});
    set(1, 2, {{3, Q(1)}});
    set(1, 3, {{2, a}});
    set(2, 1, {{3, Q(-1)}});
    set(2, 2, {{0, b}});
    set(2, 3, {{1, -b}});
    set(3, 1, {{2, -a}});
    set(3, 2, {{1, b}});
    set(3, 3, {{0, -ab}});
    // canonical involution gamma(x) = Trd(x) - x
    Mat gamma(4, 4);
    gamma.at(0, 0) = 1;
    for (size_t t = 1; t < 4; ++t) gamma.at(t, t) = -1;
    std::ostringstream desc;
    desc << "(" << a.get_str() << "," << b.get_str() << ")_Q";
    if (!inv.u) {
        raw.invol = gamma;
        desc << " with canonical involution";
    } else {
        const Vec& u = *inv.u;
        if (u.size() != 4) throw std::invalid_argument("quaternion element needs 4 coordinates");
        if (sgn(u[0]) != 0) throw std::invalid_argument("conjugating quaternion must be pure");
        Algebra::Raw probe = raw;
        probe.invol = gamma;
        Algebra tmp(std::move(probe));
        auto uinv = tmp.inverse_of(u);
        if (!uinv) throw std::invalid_argument("conjugating quaternion is not invertible");
        // Int(u) o gamma: x -> u gamma(x) u^{-1}
        Mat sigma = tmp.right_mult(*uinv) * (tmp.left_mult(u) * gamma);
        raw.invol = sigma;
        desc << " with involution Int(u)gamma";
    }
    raw.description = desc.str();
    auto alg = std::make_shared<Algebra>(std::move(raw));
    alg->validate();
    return alg;
}

AlgebraPtr tensor_algebras(const AlgebraPtr& A, const AlgebraPtr& B, bool validate) {
    const size_t da = A->dim(), db = B->dim();
    Algebra::Raw raw;
    raw.dim = da * db;
    raw.kind = Algebra::Kind::Tensor;
    raw.labels.resize(da * db);
    raw.unit = kron_vec(A->unit(), B->unit());
    raw.mul.assign(da * db, std::vector<SparseVec>(da * db));
    for (size_t i = 0; i < da; ++i)
        for (size_t j = 0; j < db; ++j)
            raw.labels[i * db + j] = A->label(i) + "(x)" + B->label(j);
    for (size_t i1 = 0; i1 < da; ++i1)
        for (size_t j1 = 0; j1 < db; ++j1)
            for (size_t i2 = 0; i2 < da; ++i2)
                for (size_t j2 = 0; j2 < db; ++j2) {
                    SparseVec& out = raw.mul[i1 * db + j1][i2 * db + j2];
                    for (const auto& [ta, ca] : A->structure(i1, i2).terms)
                        for (const auto& [tb, cb] : B->structure(j1, j2).terms)
                            out.terms.emplace_back(ta * db + tb, ca * cb);
                }
    if (A->has_involution() && B->has_involution()) raw.invol = kron(A->involution(), B->involution());
    raw.description = A->describe() + " (x) " + B->describe();
    auto alg = std::make_shared<Algebra>(std::move(raw));
    if (validate) alg->validate();
    return alg;
}

AlgebraPtr tensor_power_algebra(const AlgebraPtr& A, size_t d) {
    if (d == 0) return Algebra::rationals();
    AlgebraPtr r = A;
    for (size_t k = 1; k < d; ++k) r = tensor_algebras(r, A, /*validate=*/false);
    return r;
}

// ---------------------------------------------------------------------------
// tensor-power element arithmetic (no materialized big algebra)

// u * v in A^{otimes d}, both dense of length dim^d.
Vec tensor_power_mul(const Algebra& A, size_t d, const Vec& u, const Vec& v) {
    const size_t dim = A.dim();
    size_t n = 1;
    for (size_t k = 0; k < d; ++k) n *= dim;
    if (u.size() != n || v.size() != n) throw std::invalid_argument("tensor element size");
    Vec out(n);
    std::vector<size_t> di(d), dj(d);
    for (size_t i = 0; i < n; ++i) {
        if (sgn(u[i]) == 0) continue;
        {
            size_t x = i;
            for (size_t k = d; k-- > 0;) {
                di[k] = x % dim;
                x /= dim;
            }
        }
        for (size_t j = 0; j < n; ++j) {
            if (sgn(v[j]) == 0) continue;
            size_t x = j;
            for (size_t k = d; k-- > 0;) {
                dj[k] = x % dim;
                x /= dim;
            }
            // product of basis tensors, factorwise
            std::vector<std::pair<size_t, Q>> acc{{0, u[i] * v[j]}};
            for (size_t k = 0; k < d && !acc.empty(); ++k) {
                const SparseVec& st = A.structure(di[k], dj[k]);
                std::vector<std::pair<size_t, Q>> next;
                for (const auto& [base, coef] : acc)
                    for (const auto& [t, c] : st.terms) next.emplace_back(base * dim + t, coef * c);
                acc = std::move(next);
            }
            for (const auto& [t, c] : acc) out[t] += c;
        }
    }
    return out;
}

Q tensor_power_trd(const Algebra& a, size_t d, const Vec& u) {
    Vec t{Q(1)};
    for (size_t k = 0; k < d; ++k) t = kron_vec(t, a.trd_on_basis());
    return dot(t, u);
}

Vec tensor_power_involution(const Algebra& a, size_t d, const Vec& u) {
    std::vector<const Mat*> factors(d, &a.involution());
    return kron_apply(factors, Mat::col_vector(u)).col(0);
}

namespace {

Vec tensor_elem_power(const Algebra& A, size_t d, const Vec& x) {
    Vec r{Q(1)};
    for (size_t k = 0; k < d; ++k) r = kron_vec(r, x);
    return r;
}

// Image of the group-algebra antisymmetrizer s_n inside A^{otimes n} under
// the Goldman morphism.
Vec antisymmetrizer_element(const AlgebraPtr& A, const GoldmanElement& g, size_t n) {
    const size_t dim = A->dim();
    size_t big = 1;
    for (size_t k = 0; k < n; ++k) big *= dim;
    // images of the adjacent transpositions
    std::vector<Vec> gen(n > 0 ? n - 1 : 0, Vec(big));
    for (size_t i = 0; i + 1 < n; ++i) {
        for (const auto& [p, q, c] : g.terms()) {
            // 1^{otimes i} (x) e_p (x) e_q (x) 1^{otimes(n-i-2)}; unit
            // coordinates may be spread over several basis elements
            Vec left{Q(1)};
            for (size_t k = 0; k < i; ++k) left = kron_vec(left, A->unit());
            Vec mid(dim * dim);
            mid[p * dim + q] = c;
            Vec right{Q(1)};
            for (size_t k = i + 2; k < n; ++k) right = kron_vec(right, A->unit());
            Vec term = kron_vec(kron_vec(left, mid), right);
            for (size_t t = 0; t < big; ++t) gen[i][t] += term[t];
        }
    }
    Vec s(big);
    Vec id{Q(1)};
    for (size_t k = 0; k < n; ++k) id = kron_vec(id, A->unit());
    for (const Perm& pi : symmetric_group(n)) {
        Vec cur = id;
        for (size_t t : pi.adjacent_factorization()) cur = tensor_power_mul(*A, n, cur, gen[t]);
        Q sign((long)pi.sign());
        for (size_t t = 0; t < big; ++t)
            if (sgn(cur[t]) != 0) s[t] += sign * cur[t];
    }
    return s;
}

struct RatioCacheEntry {
    GoldmanElement g;
    Vec s_n;
};

}  // namespace

Q reduced_norm_by_ratio(const AlgebraPtr& A, const Vec& x) {
    const size_t n = A->degree();
    const size_t dim = A->dim();
    double big = 1;
    for (size_t k = 0; k < n; ++k) big *= (double)dim;
    if (big > 20000.0)
        throw CapExceeded("reduced norm ratio method would need tensor power dimension " +
                          std::to_string((size_t)big));
    static std::mutex mtx;
    static std::map<const Algebra*, std::shared_ptr<RatioCacheEntry>> cache;
    std::shared_ptr<RatioCacheEntry> entry;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(A.get());
        if (it != cache.end()) entry = it->second;
    }
    if (!entry) {
        GoldmanElement g = goldman_element(A);
        Vec s = antisymmetrizer_element(A, g, n);
        entry = std::make_shared<RatioCacheEntry>(RatioCacheEntry{std::move(g), std::move(s)});
        std::lock_guard<std::mutex> lock(mtx);
        cache.emplace(A.get(), entry);
    }
    const Vec& s = entry->s_n;
    Vec prod = tensor_power_mul(*A, n, s, tensor_elem_power(*A, n, x));
    size_t pivot = s.size();
    for (size_t t = 0; t < s.size(); ++t)
        if (sgn(s[t]) != 0) {
            pivot = t;
            break;
        }
    if (pivot == s.size()) throw std::logic_error("antisymmetrizer element vanished");
    Q c = prod[pivot] / s[pivot];
    for (size_t t = 0; t < s.size(); ++t)
        if (prod[t] != c * s[t])
            throw std::logic_error("s_n x^{otimes n} is not a scalar multiple of s_n");
    return c;
}

// ---------------------------------------------------------------------------
// Goldman elements

GoldmanElement::GoldmanElement(AlgebraPtr alg, std::vector<std::tuple<size_t, size_t, Q>> terms)
    : alg_(std::move(alg)), terms_(std::move(terms)) {}

Mat GoldmanElement::sandwich_matrix() const {
    const size_t dim = alg_->dim();
    Mat m(dim, dim);
    for (const auto& [p, q, c] : terms_) {
        // column j gets c * e_p e_j e_q
        for (size_t j = 0; j < dim; ++j) {
            for (const auto& [t, c1] : alg_->structure(p, j).terms)
                for (const auto& [u, c2] : alg_->structure(t, q).terms) m.at(u, j) += c * c1 * c2;
        }
    }
    return m;
}

Vec GoldmanElement::sandwich(const Vec& x) const { return sandwich_matrix().apply(x); }

Vec GoldmanElement::coords() const {
    const size_t dim = alg_->dim();
    Vec v(dim * dim);
    for (const auto& [p, q, c] : terms_) v[p * dim + q] += c;
    return v;
}

Vec GoldmanElement::square_coords() const {
    const size_t dim = alg_->dim();
    Vec v(dim * dim);
    for (const auto& [p, q, c] : terms_)
        for (const auto& [r, s, e] : terms_) {
            Q f = c * e;
            for (const auto& [t1, c1] : alg_->structure(p, r).terms)
                for (const auto& [t2, c2] : alg_->structure(q, s).terms)
                    v[t1 * dim + t2] += f * c1 * c2;
        }
    return v;
}

Vec GoldmanElement::invol_coords() const {
    const size_t dim = alg_->dim();
    const Mat& s = alg_->involution();
    Vec v(dim * dim);
    for (const auto& [p, q, c] : terms_)
        for (size_t u = 0; u < dim; ++u) {
            if (sgn(s.at(u, p)) == 0) continue;
            for (size_t w = 0; w < dim; ++w)
                if (sgn(s.at(w, q)) != 0) v[u * dim + w] += c * s.at(u, p) * s.at(w, q);
        }
    return v;
}

Mat GoldmanElement::column_space_operator() const {
    if (alg_->kind() != Algebra::Kind::Matrix)
        throw std::invalid_argument("column-space operator needs a matrix algebra");
    const size_t n = alg_->matrix_n();
    Mat op(n * n, n * n);
    for (const auto& [p, q, c] : terms_) {
        // p = e_{p1 p2}, q = e_{q1 q2} acting on K^n (x) K^n
        size_t p1 = p / n, p2 = p % n, q1 = q / n, q2 = q % n;
        op.at(p1 * n + q1, p2 * n + q2) += c;
    }
    return op;
}

GoldmanElement goldman_element(const AlgebraPtr& A) {
    const size_t dim = A->dim();
    Mat sys(dim * dim, dim * dim);
    Vec rhs(dim * dim);
    // unknown g_{pq}; equation block k: sum_pq g_pq e_p e_k e_q = Trd(e_k) 1
    for (size_t k = 0; k < dim; ++k) {
        for (size_t p = 0; p < dim; ++p)
            for (const auto& [t, c1] : A->structure(p, k).terms)
                for (size_t q = 0; q < dim; ++q)
                    for (const auto& [u, c2] : A->structure(t, q).terms)
                        sys.at(k * dim + u, p * dim + q) += c1 * c2;
        Q tr = A->trd(A->basis_vec(k));
        for (size_t u = 0; u < dim; ++u) rhs[k * dim + u] = tr * A->unit()[u];
    }
    auto sol = solve(sys, rhs);
    if (!sol) throw std::invalid_argument("Goldman system is singular: algebra is not Azumaya");
    std::vector<std::tuple<size_t, size_t, Q>> terms;
    for (size_t p = 0; p < dim; ++p)
        for (size_t q = 0; q < dim; ++q)
            if (sgn((*sol)[p * dim + q]) != 0) terms.emplace_back(p, q, (*sol)[p * dim + q]);
    return GoldmanElement(A, std::move(terms));
}

GoldmanElement goldman_of_tensor(const AlgebraPtr& AB, const GoldmanElement& gA,
                                 const GoldmanElement& gB) {
    const size_t db = gB.algebra()->dim();
    std::vector<std::tuple<size_t, size_t, Q>> terms;
    for (const auto& [pa, qa, ca] : gA.terms())
        for (const auto& [pb, qb, cb] : gB.terms())
            terms.emplace_back(pa * db + pb, qa * db + qb, ca * cb);
    return GoldmanElement(AB, std::move(terms));
}

GoldmanElement goldman_matrix_units(const AlgebraPtr& mn) {
    if (mn->kind() != Algebra::Kind::Matrix)
        throw std::invalid_argument("matrix-unit Goldman element needs a matrix algebra");
    const size_t n = mn->matrix_n();
    std::vector<std::tuple<size_t, size_t, Q>> terms;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) terms.emplace_back(i * n + j, j * n + i, Q(1));
    return GoldmanElement(mn, std::move(terms));
}

GoldmanElement goldman_of_tensor(const AlgebraPtr& A, const AlgebraPtr& B) {
    AlgebraPtr AB = tensor_algebras(A, B, /*validate=*/false);
    return goldman_of_tensor(AB, goldman_element(A), goldman_element(B));
}

}  // namespace qalt

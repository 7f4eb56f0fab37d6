#include "qalt/module.hpp"

#include <omp.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace qalt {

PairOp PairOp::from_dense(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("pair operator must be square");
    PairOp op;
    op.n = m.rows();
    op.rows.resize(op.n);
    for (size_t i = 0; i < op.n; ++i)
        for (size_t j = 0; j < op.n; ++j)
            if (sgn(m.at(i, j)) != 0) op.rows[i].emplace_back(j, m.at(i, j));
    return op;
}

Mat PairOp::dense() const {
    Mat m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (const auto& [j, c] : rows[i]) m.at(i, j) = c;
    return m;
}

namespace {

AlgebraPtr strip_involution(const AlgebraPtr& a) {
    Algebra::Raw raw;
    raw.dim = a->dim();
    raw.labels = a->labels();
    raw.mul.assign(raw.dim, std::vector<SparseVec>(raw.dim));
    for (size_t i = 0; i < raw.dim; ++i)
        for (size_t j = 0; j < raw.dim; ++j) raw.mul[i][j] = a->structure(i, j);
    raw.unit = a->unit();
    raw.kind = Algebra::Kind::Endo;
    raw.description = "End(" + a->describe() + ")";
    return std::make_shared<Algebra>(std::move(raw));
}

}  // namespace

struct FreeModule::DerivedOps {
    std::once_flag once;
    AlgebraPtr endo;
    std::vector<Mat> endo_left;
    std::shared_ptr<GoldmanElement> endo_goldman;
    PairOp goldman_pair, right_pair;
};

FreeModule::FreeModule(AlgebraPtr alg, size_t rank)
    : alg_(std::move(alg)), rank_(rank), ops_(std::make_shared<DerivedOps>()) {
    if (rank_ == 0) throw std::invalid_argument("free module of rank 0");
    const size_t da = alg_->dim();
    const size_t n = kdim();
    right_act_.reserve(da);
    for (size_t r = 0; r < da; ++r) {
        Mat m(n, n);
        for (size_t s = 0; s < rank_; ++s)
            for (size_t t = 0; t < da; ++t)
                for (const auto& [u, c] : alg_->structure(t, r).terms) m.at(s * da + u, s * da + t) += c;
        right_act_.push_back(std::move(m));
    }
}

FreeModule::DerivedOps& FreeModule::derived() const {
    DerivedOps& ops = *ops_;
    std::call_once(ops.once, [&] {
        const size_t da = alg_->dim();
        const size_t n = kdim();
        // B = End_A(V) = M_rank(K) (x) A; e_pq (x) a acts by (s, u) -> delta_qs (p, a u)
        GoldmanElement gA = goldman_element(alg_);
        if (rank_ == 1) {
            ops.endo = strip_involution(alg_);
            ops.endo_goldman = std::make_shared<GoldmanElement>(ops.endo, gA.terms());
        } else {
            auto mrank = make_matrix_algebra(rank_, {}, /*validate=*/false);
            ops.endo = strip_involution(tensor_algebras(mrank, alg_, /*validate=*/false));
            GoldmanElement gM = goldman_matrix_units(mrank);
            auto g = goldman_of_tensor(ops.endo, gM, gA);
            ops.endo_goldman = std::make_shared<GoldmanElement>(std::move(g));
        }
        const size_t db = ops.endo->dim();
        ops.endo_left.reserve(db);
        for (size_t b = 0; b < db; ++b) {
            size_t pq = b / da, r = b % da;
            size_t p = pq / rank_, qq = pq % rank_;
            Mat m(n, n);
            for (size_t t = 0; t < da; ++t)
                for (const auto& [u, c] : alg_->structure(r, t).terms) m.at(p * da + u, qq * da + t) += c;
            ops.endo_left.push_back(std::move(m));
        }
        // pair operators assembled entrywise from the Goldman terms
        auto assemble = [n](const std::vector<Mat>& act,
                            const std::vector<std::tuple<size_t, size_t, Q>>& terms) {
            Mat op(n * n, n * n);
            for (const auto& [p, q, c] : terms) {
                const Mat& lp = act[p];
                const Mat& lq = act[q];
                for (size_t i = 0; i < n; ++i)
                    for (size_t ii = 0; ii < n; ++ii) {
                        if (sgn(lp.at(i, ii)) == 0) continue;
                        Q f = c * lp.at(i, ii);
                        for (size_t j = 0; j < n; ++j)
                            for (size_t jj = 0; jj < n; ++jj)
                                if (sgn(lq.at(j, jj)) != 0)
                                    op.at(i * n + j, ii * n + jj) += f * lq.at(j, jj);
                    }
            }
            return PairOp::from_dense(op);
        };
        ops.goldman_pair = assemble(ops.endo_left, ops.endo_goldman->terms());
        ops.right_pair = assemble(right_act_, gA.terms());
    });
    return ops;
}

const AlgebraPtr& FreeModule::endo_algebra() const { return derived().endo; }
const Mat& FreeModule::endo_left_action(size_t basis) const { return derived().endo_left[basis]; }
const GoldmanElement& FreeModule::endo_goldman() const { return *derived().endo_goldman; }
const PairOp& FreeModule::goldman_pair() const { return derived().goldman_pair; }
const PairOp& FreeModule::right_pair() const { return derived().right_pair; }

Mat FreeModule::right_action_of(const Vec& a) const {
    Mat m(kdim(), kdim());
    for (size_t r = 0; r < a.size(); ++r)
        if (sgn(a[r]) != 0) m += right_act_[r] * a[r];
    return m;
}

Mat FreeModule::endo_left_action_of(const Vec& b) const {
    Mat m(kdim(), kdim());
    for (size_t r = 0; r < b.size(); ++r)
        if (sgn(b[r]) != 0) m += endo_left_action(r) * b[r];
    return m;
}

AlgebraPtr endo_algebra(const FreeModule& v) { return v.endo_algebra(); }

TensorPower::TensorPower(FreeModule base, size_t d, size_t cap) : base_(std::move(base)), d_(d) {
    double amb = 1;
    for (size_t k = 0; k < d_; ++k) amb *= (double)base_.kdim();
    if (amb > (double)cap)
        throw CapExceeded("tensor power ambient dimension " + std::to_string((size_t)amb) +
                          " exceeds the cap " + std::to_string(cap));
    ambient_ = 1;
    for (size_t k = 0; k < d_; ++k) ambient_ *= base_.kdim();
}

Vec TensorPower::apply_pair(const PairOp& op, size_t i, const Vec& x) const {
    if (i + 1 >= d_) throw std::invalid_argument("adjacent index out of range");
    const size_t n = base_.kdim();
    size_t post = 1;
    for (size_t k = i + 2; k < d_; ++k) post *= n;
    const size_t mid = n * n;
    const size_t pre = ambient_ / (post * mid);
    Vec out(ambient_);
#pragma omp parallel for schedule(static) if (pre > 1)
    for (long long a = 0; a < (long long)pre; ++a) {
        for (size_t r = 0; r < mid; ++r) {
            const auto& row = op.rows[r];
            if (row.empty()) continue;
            for (size_t b = 0; b < post; ++b) {
                Q acc(0);
                bool any = false;
                for (const auto& [c, v] : row) {
                    const Q& xv = x[(size_t)a * mid * post + c * post + b];
                    if (sgn(xv) == 0) continue;
                    acc += v * xv;
                    any = true;
                }
                if (any) out[(size_t)a * mid * post + r * post + b] = acc;
            }
        }
    }
    return out;
}

Vec TensorPower::apply_adjacent(size_t i, const Vec& x) const {
    return apply_pair(base_.goldman_pair(), i, x);
}

Vec TensorPower::apply_right_adjacent(size_t i, const Vec& x) const {
    return apply_pair(base_.right_pair(), i, x);
}

Vec TensorPower::apply_perm(const Perm& pi, Vec x) const {
    if (pi.size() != d_) throw std::invalid_argument("permutation degree mismatch");
    auto word = pi.adjacent_factorization();
    for (auto it = word.rbegin(); it != word.rend(); ++it) x = apply_adjacent(*it, x);
    return x;
}

Vec TensorPower::apply_right_perm(const Perm& pi, Vec x) const {
    if (pi.size() != d_) throw std::invalid_argument("permutation degree mismatch");
    auto word = pi.adjacent_factorization();
    for (auto it = word.rbegin(); it != word.rend(); ++it) x = apply_right_adjacent(*it, x);
    return x;
}

Mat TensorPower::goldman_action(const Perm& pi) const {
    Mat m(ambient_, ambient_);
    for (size_t j = 0; j < ambient_; ++j) {
        Vec e(ambient_);
        e[j] = 1;
        m.set_col(j, apply_perm(pi, std::move(e)));
    }
    return m;
}

Mat TensorPower::right_translate(const Perm& pi) const {
    Mat m(ambient_, ambient_);
    for (size_t j = 0; j < ambient_; ++j) {
        Vec e(ambient_);
        e[j] = 1;
        m.set_col(j, apply_right_perm(pi, std::move(e)));
    }
    return m;
}

Mat TensorPower::factor_permutation(const Perm& pi) const {
    const size_t n = base_.kdim();
    Perm inv = pi.inverse();
    Mat m(ambient_, ambient_);
    std::vector<size_t> digits(d_);
    for (size_t j = 0; j < ambient_; ++j) {
        size_t x = j;
        for (size_t k = d_; k-- > 0;) {
            digits[k] = x % n;
            x /= n;
        }
        size_t target = 0;
        for (size_t k = 0; k < d_; ++k) target = target * n + digits[inv(k)];
        m.at(target, j) = 1;
    }
    return m;
}

Mat TensorPower::right_algebra_action(const std::vector<size_t>& idx) const {
    if (idx.size() != d_) throw std::invalid_argument("need one algebra index per factor");
    Mat m(1, 1);
    m.at(0, 0) = 1;
    for (size_t k = 0; k < d_; ++k) m = kron(m, base_.right_action(idx[k]));
    return m;
}

Vec TensorPower::apply_antisymmetrizer(const Vec& x) const {
    Vec out(ambient_);
    for (const Perm& pi : symmetric_group(d_)) {
        Vec y = apply_perm(pi, x);
        if (pi.sign() > 0)
            out = vec_add(out, y);
        else
            out = vec_sub(out, y);
    }
    return out;
}

Mat TensorPower::antisymmetrizer() const {
    Mat m(ambient_, ambient_);
    for (size_t j = 0; j < ambient_; ++j) {
        Vec e(ambient_);
        e[j] = 1;
        m.set_col(j, apply_antisymmetrizer(e));
    }
    return m;
}

Vec TensorPower::apply_shuffle(size_t p, const Vec& x) const {
    if (p > d_) throw std::invalid_argument("shuffle split out of range");
    if (p == d_ || p == 0) return x;
    if (p + 1 == d_) {
        // sh_{d-1,1} through the descending chain of adjacent transpositions:
        // the shuffle placing the last factor at slot m is tau_m ... tau_{d-2}
        // with sign (-1)^{d-1-m}
        Vec acc = x;
        Vec cur = x;
        int sign = 1;
        for (size_t m = d_ - 1; m-- > 0;) {
            cur = apply_adjacent(m, cur);
            sign = -sign;
            if (sign > 0)
                acc = vec_add(acc, cur);
            else
                acc = vec_sub(acc, cur);
        }
        return acc;
    }
    Vec out(ambient_);
    for (const Perm& pi : shuffles(p, d_ - p)) {
        Vec y = apply_perm(pi, x);
        if (pi.sign() > 0)
            out = vec_add(out, y);
        else
            out = vec_sub(out, y);
    }
    return out;
}

Mat AltPower::induced_right_action(const TensorPower& t, const std::vector<size_t>& idx) const {
    Mat act = t.right_algebra_action(idx);
    Mat out(subspace.dim(), subspace.dim());
    for (size_t j = 0; j < subspace.dim(); ++j) {
        Vec v = act.apply(subspace.basis.col(j));
        if (!subspace.contains(v)) throw std::logic_error("alternating power is not action-stable");
        for (size_t i = 0; i < subspace.dim(); ++i) {
            size_t piv = 0;
            while (piv < subspace.ambient && sgn(subspace.basis.at(piv, i)) == 0) ++piv;
            out.at(i, j) = v[piv];
        }
    }
    return out;
}

AltPower alt_module(const FreeModule& v, size_t d, size_t cap) {
    AltPower cur;
    cur.d = 0;
    cur.subspace = Subspace{1, Mat::identity(1)};
    cur.preimages = Mat::identity(1);
    cur.rdim = 1;
    if (d == 0) return cur;
    const size_t n = v.kdim();
    for (size_t k = 1; k <= d; ++k) {
        TensorPower t(v, k, cap);
        const size_t prev_dim = cur.subspace.dim();
        // candidates span sh_{k-1,1}(Alt^{k-1} (x) V), which is the whole
        // image of s_k by the shuffle factorization of the antisymmetrizer
        std::vector<Vec> cand((size_t)prev_dim * n), track((size_t)prev_dim * n);
#pragma omp parallel for collapse(2) schedule(dynamic)
        for (long long a = 0; a < (long long)prev_dim; ++a) {
            for (long long j = 0; j < (long long)n; ++j) {
                Vec ej(n);
                ej[j] = 1;
                cand[a * n + j] = t.apply_shuffle(k - 1, kron_vec(cur.subspace.basis.col(a), ej));
                track[a * n + j] = kron_vec(cur.preimages.col(a), ej);
            }
        }
        ColSpaceBuilder builder(t.ambient());
        for (size_t c = 0; c < cand.size(); ++c) builder.add(std::move(cand[c]), &track[c]);
        AltPower next;
        next.d = k;
        next.subspace = Subspace{t.ambient(), builder.basis()};
        next.preimages = builder.tracked();
        size_t degd = 1;
        for (size_t i = 0; i < k; ++i) degd *= v.algebra()->degree();
        if (next.subspace.dim() % degd != 0)
            throw std::logic_error("alternating power dimension is not a multiple of the degree");
        next.rdim = next.subspace.dim() / degd;
        cur = std::move(next);
    }
    return cur;
}

Vec shuffle_product(const FreeModule& v, size_t p, const Vec& x, size_t q, const Vec& y, size_t cap) {
    TensorPower t(v, p + q, cap);
    return t.apply_shuffle(p, kron_vec(x, y));
}

Vec embed_tensor(const FreeModule& u, const FreeModule& sum, bool first, size_t p, const Vec& x) {
    const size_t nu = u.kdim(), nw = sum.kdim();
    const size_t offset = first ? 0 : nw - nu;
    size_t out_dim = 1, in_dim = 1;
    for (size_t k = 0; k < p; ++k) {
        out_dim *= nw;
        in_dim *= nu;
    }
    if (x.size() != in_dim) throw std::invalid_argument("embed_tensor size mismatch");
    Vec out(out_dim);
    std::vector<size_t> digits(p);
    for (size_t i = 0; i < in_dim; ++i) {
        if (sgn(x[i]) == 0) continue;
        size_t t = i;
        for (size_t k = p; k-- > 0;) {
            digits[k] = t % nu;
            t /= nu;
        }
        size_t target = 0;
        for (size_t k = 0; k < p; ++k) target = target * nw + (digits[k] + offset);
        out[target] = x[i];
    }
    return out;
}

SumSplitIso sum_split_iso(const FreeModule& u, const FreeModule& v, size_t d, size_t cap) {
    if (!u.algebra()->same_as(*v.algebra()))
        throw std::invalid_argument("direct sum needs matching coefficient algebras");
    FreeModule w(u.algebra(), u.rank() + v.rank());
    SumSplitIso iso{w, alt_module(w, d, cap), {}, {}, Mat(), Mat()};
    std::vector<Vec> cols;
    for (size_t p = d + 1; p-- > 0;) {
        size_t q = d - p;
        AltPower au = alt_module(u, p, cap);
        AltPower av = alt_module(v, q, cap);
        iso.block_p.push_back(p);
        iso.block_dim.push_back(au.kdim() * av.kdim());
        for (size_t a = 0; a < au.kdim(); ++a)
            for (size_t b = 0; b < av.kdim(); ++b) {
                Vec xu = embed_tensor(u, w, true, p, au.subspace.basis.col(a));
                Vec xv = embed_tensor(v, w, false, q, av.subspace.basis.col(b));
                Vec prod;
                if (p == 0)
                    prod = xv;
                else if (q == 0)
                    prod = xu;
                else
                    prod = shuffle_product(w, p, xu, q, xv, cap);
                cols.push_back(std::move(prod));
            }
    }
    size_t amb = 1;
    for (size_t k = 0; k < d; ++k) amb *= w.kdim();
    iso.columns_ambient = Mat(amb, cols.size());
    for (size_t j = 0; j < cols.size(); ++j) iso.columns_ambient.set_col(j, cols[j]);
    iso.matrix = Mat(iso.target.kdim(), cols.size());
    for (size_t j = 0; j < cols.size(); ++j) {
        if (!iso.target.subspace.contains(cols[j]))
            throw std::logic_error("shuffle image left the alternating power");
        for (size_t i = 0; i < iso.target.kdim(); ++i) {
            size_t piv = 0;
            while (piv < amb && sgn(iso.target.subspace.basis.at(piv, i)) == 0) ++piv;
            iso.matrix.at(i, j) = cols[j][piv];
        }
    }
    return iso;
}

Mat QuotientModule::descend(const Mat& op) const {
    if (projector) {
        // op preserves ker(P) iff projection * op * (1 - P) vanishes
        Mat po = projection * op;
        Mat check = po - (po * *projector);
        if (!check.is_zero()) throw std::logic_error("operator does not descend to the quotient");
    } else {
        for (size_t j = 0; j < relations.dim(); ++j)
            if (!vec_is_zero(projection.apply(op.apply(relations.basis.col(j)))))
                throw std::logic_error("operator does not descend to the quotient");
    }
    Mat m(dim, dim);
    for (size_t j = 0; j < dim; ++j) m.set_col(j, projection.apply(op.apply(section.col(j))));
    return m;
}

QuotientModule tensor_over_algebra(size_t w_dim, const std::vector<Mat>& w_right_b, size_t u_dim,
                                   const std::vector<Mat>& u_left_b) {
    if (w_right_b.size() != u_left_b.size())
        throw std::invalid_argument("mismatched algebra dimension for the tensor relations");
    const size_t big = w_dim * u_dim;
    ColSpaceBuilder rel(big);
    for (size_t r = 0; r < w_right_b.size(); ++r) {
        for (size_t s = 0; s < w_dim; ++s) {
            Vec wb = w_right_b[r].col(s);  // w_s . b_r
            for (size_t t = 0; t < u_dim; ++t) {
                Vec bu = u_left_b[r].col(t);  // b_r . u_t
                Vec col(big);
                for (size_t i = 0; i < w_dim; ++i)
                    if (sgn(wb[i]) != 0) col[i * u_dim + t] += wb[i];
                for (size_t j = 0; j < u_dim; ++j)
                    if (sgn(bu[j]) != 0) col[s * u_dim + j] -= bu[j];
                rel.add(std::move(col));
            }
        }
    }
    QuotientModule q;
    q.big_dim = big;
    q.relations = Subspace{big, rel.basis()};
    const size_t nrel = q.relations.dim();
    q.dim = big - nrel;
    std::vector<size_t> pivot_rows(nrel);
    std::vector<bool> is_pivot(big, false);
    for (size_t j = 0; j < nrel; ++j) {
        size_t piv = 0;
        while (piv < big && sgn(q.relations.basis.at(piv, j)) == 0) ++piv;
        pivot_rows[j] = piv;
        is_pivot[piv] = true;
    }
    std::vector<size_t> free_rows;
    for (size_t i = 0; i < big; ++i)
        if (!is_pivot[i]) free_rows.push_back(i);
    // reducing x modulo the relations zeroes the pivot rows and leaves
    // x[f] - sum_j x[pivot_j] * rel[f][j] on the free rows
    q.projection = Mat(q.dim, big);
    for (size_t f = 0; f < free_rows.size(); ++f) {
        q.projection.at(f, free_rows[f]) = 1;
        for (size_t j = 0; j < nrel; ++j)
            if (sgn(q.relations.basis.at(free_rows[f], j)) != 0)
                q.projection.at(f, pivot_rows[j]) = -q.relations.basis.at(free_rows[f], j);
    }
    q.section = Mat(big, q.dim);
    for (size_t f = 0; f < free_rows.size(); ++f) q.section.at(free_rows[f], f) = 1;
    return q;
}

QuotientModule tensor_over_azumaya(size_t w_dim, const std::vector<Mat>& w_right_b, size_t u_dim,
                                   const std::vector<Mat>& u_left_b, const GoldmanElement& g) {
    if (w_right_b.size() != u_left_b.size())
        throw std::invalid_argument("mismatched algebra dimension for the tensor relations");
    const size_t big = w_dim * u_dim;
    const Q inv_deg = Q(1) / Q((long)g.algebra()->degree());
    Mat p(big, big);
    for (const auto& [a, b, c] : g.terms()) {
        const Mat& wa = w_right_b[a];
        const Mat& ub = u_left_b[b];
        const Q f = c * inv_deg;
        for (size_t i = 0; i < w_dim; ++i)
            for (size_t ii = 0; ii < w_dim; ++ii) {
                if (sgn(wa.at(i, ii)) == 0) continue;
                Q fw = f * wa.at(i, ii);
                for (size_t j = 0; j < u_dim; ++j)
                    for (size_t jj = 0; jj < u_dim; ++jj)
                        if (sgn(ub.at(j, jj)) != 0)
                            p.at(i * u_dim + j, ii * u_dim + jj) += fw * ub.at(j, jj);
            }
    }
    QuotientModule q;
    q.big_dim = big;
    q.projector = p;
    ColSpaceBuilder image(big);
    for (size_t j = 0; j < big; ++j) image.add(p.col(j));
    Subspace im{big, image.basis()};
    q.dim = im.dim();
    q.section = im.basis;
    // quotient coordinates: RCEF coordinates of P x inside the image
    std::vector<size_t> pivots(q.dim);
    for (size_t i = 0; i < q.dim; ++i) {
        size_t piv = 0;
        while (piv < big && sgn(im.basis.at(piv, i)) == 0) ++piv;
        pivots[i] = piv;
    }
    q.projection = Mat(q.dim, big);
    for (size_t i = 0; i < q.dim; ++i)
        for (size_t j = 0; j < big; ++j) q.projection.at(i, j) = p.at(pivots[i], j);
    q.relations = Subspace{big, Mat(big, 0)};
    return q;
}

GoldmanElement goldman_power(const AlgebraPtr& apow, const GoldmanElement& g, size_t n) {
    if (n == 0) throw std::invalid_argument("goldman power needs n >= 1");
    const size_t da = g.algebra()->dim();
    std::vector<std::tuple<size_t, size_t, Q>> terms = g.terms();
    size_t cur_dim = da;
    for (size_t k = 1; k < n; ++k) {
        std::vector<std::tuple<size_t, size_t, Q>> next;
        next.reserve(terms.size() * g.terms().size());
        for (const auto& [p1, q1, c1] : terms)
            for (const auto& [p2, q2, c2] : g.terms())
                next.emplace_back(p1 * da + p2, q1 * da + q2, c1 * c2);
        terms = std::move(next);
        cur_dim *= da;
    }
    (void)cur_dim;
    return GoldmanElement(apow, std::move(terms));
}

}  // namespace qalt

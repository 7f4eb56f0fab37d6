#include "qalt/hermitian.hpp"

#include <algorithm>
#include <sstream>

namespace qalt {

namespace {

void require_same_algebra(const AlgebraPtr& a, const AlgebraPtr& b, const char* what) {
    if (!a->same_as(*b)) throw std::invalid_argument(std::string(what) + ": coefficient algebra mismatch");
}

// coordinate slices H_c of a form: H_c[s][t] = c-coordinate of h(w_s, w_t)
std::vector<Mat> value_slices(const HermForm& h) {
    std::vector<Mat> slices(h.coeff->dim(), Mat(h.kdim, h.kdim));
    for (size_t s = 0; s < h.kdim; ++s)
        for (size_t t = 0; t < h.kdim; ++t)
            for (size_t c = 0; c < h.coeff->dim(); ++c)
                if (sgn(h.values[s][t][c]) != 0) slices[c].at(s, t) = h.values[s][t][c];
    return slices;
}

std::vector<size_t> digits_of(size_t index, size_t base, size_t d) {
    std::vector<size_t> dig(d);
    for (size_t k = d; k-- > 0;) {
        dig[k] = index % base;
        index /= base;
    }
    return dig;
}

// h^{otimes d}(e_I, e_J) in A^{otimes d} coordinates for basis multi-indices
Vec tensor_value(const HermForm& h, const std::vector<size_t>& is, const std::vector<size_t>& js) {
    Vec v{Q(1)};
    for (size_t k = 0; k < is.size(); ++k) v = kron_vec(v, h.values[is[k]][js[k]]);
    return v;
}

// subspace coordinates of v against an RCEF basis (v must lie in the span)
Vec rcef_coords(const Subspace& sub, const Vec& v) {
    Vec out(sub.dim());
    for (size_t i = 0; i < sub.dim(); ++i) {
        size_t piv = 0;
        while (piv < sub.ambient && sgn(sub.basis.at(piv, i)) == 0) ++piv;
        out[i] = v[piv];
    }
    return out;
}

Mat induced_on_subspace(const Subspace& sub, const Mat& big_op) {
    Mat out(sub.dim(), sub.dim());
    for (size_t j = 0; j < sub.dim(); ++j) {
        Vec v = big_op.apply(sub.basis.col(j));
        if (!sub.contains(v)) throw std::logic_error("subspace is not stable under the action");
        Vec c = rcef_coords(sub, v);
        for (size_t i = 0; i < sub.dim(); ++i) out.at(i, j) = c[i];
    }
    return out;
}

}  // namespace

size_t HermForm::rdim() const {
    size_t deg = coeff->degree();
    if (kdim % deg != 0) throw std::logic_error("module dimension not divisible by the degree");
    return kdim / deg;
}

Mat HermForm::trace_gram() const {
    Mat g(kdim, kdim);
    for (size_t s = 0; s < kdim; ++s)
        for (size_t t = 0; t < kdim; ++t) g.at(s, t) = coeff->trd(values[s][t]);
    return g;
}

DiagonalFormQ HermForm::quadratic_diagonal() const {
    if (!over_rationals()) throw std::invalid_argument("not a form over the rationals");
    if (eps != 1) throw std::invalid_argument("antisymmetric forms have no diagonalization");
    Mat g(kdim, kdim);
    for (size_t s = 0; s < kdim; ++s)
        for (size_t t = 0; t < kdim; ++t) g.at(s, t) = values[s][t][0];
    return diagonalize(g);
}

void HermForm::validate() const {
    const size_t da = coeff->dim();
    if (values.size() != kdim) throw std::invalid_argument("value table has wrong shape");
    for (size_t s = 0; s < kdim; ++s)
        for (size_t t = 0; t < kdim; ++t) {
            // eps-symmetry sigma(h(x,y)) = eps h(y,x)
            Vec lhs = coeff->apply_involution(values[s][t]);
            Vec rhs = vec_scale(Q(eps), values[t][s]);
            if (lhs != rhs) throw std::invalid_argument("form is not eps-hermitian");
        }
    for (size_t r = 0; r < da; ++r) {
        Vec sig_er = coeff->apply_involution(coeff->basis_vec(r));
        for (size_t s = 0; s < kdim; ++s) {
            Vec moved = action[r].col(s);  // w_s . e_r
            for (size_t t = 0; t < kdim; ++t) {
                Vec lhs(da);
                for (size_t u = 0; u < kdim; ++u)
                    if (sgn(moved[u]) != 0) lhs = vec_add(lhs, vec_scale(moved[u], values[u][t]));
                Vec rhs = coeff->mul(sig_er, values[s][t]);
                if (lhs != rhs) throw std::invalid_argument("form is not sesquilinear");
            }
        }
    }
    if (rank(trace_gram()) != kdim) throw std::invalid_argument("form is degenerate");
}

HermForm diagonal_form(const AlgebraPtr& a, const std::vector<Vec>& entries) {
    if (entries.empty()) throw std::invalid_argument("diagonal form needs at least one entry");
    const size_t da = a->dim();
    int eps = 0;
    for (const Vec& e : entries) {
        Vec se = a->apply_involution(e);
        int this_eps;
        if (se == e)
            this_eps = 1;
        else if (se == vec_scale(Q(-1), e))
            this_eps = -1;
        else
            throw std::invalid_argument("diagonal entry is not (anti)symmetric for the involution");
        if (eps == 0) eps = this_eps;
        if (eps != this_eps) throw std::invalid_argument("diagonal entries have mixed signs");
        if (!a->inverse_of(e)) throw std::invalid_argument("diagonal entry is not invertible");
    }
    const size_t m = entries.size();
    HermForm h;
    h.coeff = a;
    h.eps = eps;
    h.kdim = m * da;
    h.free_mod = FreeModule(a, m);
    h.diag = entries;
    h.action.reserve(da);
    for (size_t r = 0; r < da; ++r) h.action.push_back(h.free_mod->right_action(r));
    h.values.assign(h.kdim, std::vector<Vec>(h.kdim, Vec(da)));
    for (size_t s = 0; s < m; ++s) {
        for (size_t u = 0; u < da; ++u) {
            Vec left = a->mul(a->apply_involution(a->basis_vec(u)), entries[s]);
            for (size_t v = 0; v < da; ++v)
                h.values[s * da + u][s * da + v] = a->mul(left, a->basis_vec(v));
        }
    }
    return h;
}

HermForm diagonal_form_scalars(const AlgebraPtr& a, const std::vector<Q>& entries) {
    std::vector<Vec> vs;
    vs.reserve(entries.size());
    for (const Q& c : entries) vs.push_back(a->scalar(c));
    return diagonal_form(a, vs);
}

HermForm orthogonal_sum(const HermForm& h, const HermForm& g) {
    require_same_algebra(h.coeff, g.coeff, "orthogonal sum");
    if (h.eps != g.eps) throw std::invalid_argument("orthogonal sum: sign mismatch");
    if (h.diag && g.diag && h.free_mod && g.free_mod) {
        std::vector<Vec> entries = *h.diag;
        entries.insert(entries.end(), g.diag->begin(), g.diag->end());
        return diagonal_form(h.coeff, entries);
    }
    HermForm out;
    out.coeff = h.coeff;
    out.eps = h.eps;
    out.kdim = h.kdim + g.kdim;
    out.action.reserve(h.action.size());
    for (size_t r = 0; r < h.action.size(); ++r) {
        Mat m(out.kdim, out.kdim);
        for (size_t i = 0; i < h.kdim; ++i)
            for (size_t j = 0; j < h.kdim; ++j) m.at(i, j) = h.action[r].at(i, j);
        for (size_t i = 0; i < g.kdim; ++i)
            for (size_t j = 0; j < g.kdim; ++j) m.at(h.kdim + i, h.kdim + j) = g.action[r].at(i, j);
        out.action.push_back(std::move(m));
    }
    out.values.assign(out.kdim, std::vector<Vec>(out.kdim, Vec(h.coeff->dim())));
    for (size_t s = 0; s < h.kdim; ++s)
        for (size_t t = 0; t < h.kdim; ++t) out.values[s][t] = h.values[s][t];
    for (size_t s = 0; s < g.kdim; ++s)
        for (size_t t = 0; t < g.kdim; ++t) out.values[h.kdim + s][h.kdim + t] = g.values[s][t];
    return out;
}

HermForm tensor_form(const HermForm& h, const HermForm& g) {
    if (h.diag && g.diag) {
        AlgebraPtr coeff;
        std::vector<Vec> entries;
        if (h.over_rationals()) {
            coeff = g.coeff;
            for (const Vec& a : *h.diag)
                for (const Vec& b : *g.diag) entries.push_back(vec_scale(a[0], b));
        } else if (g.over_rationals()) {
            coeff = h.coeff;
            for (const Vec& a : *h.diag)
                for (const Vec& b : *g.diag) entries.push_back(vec_scale(b[0], a));
        } else {
            coeff = tensor_algebras(h.coeff, g.coeff, /*validate=*/false);
            for (const Vec& a : *h.diag)
                for (const Vec& b : *g.diag) entries.push_back(kron_vec(a, b));
        }
        return diagonal_form(coeff, entries);
    }
    HermForm out;
    out.eps = h.eps * g.eps;
    out.kdim = h.kdim * g.kdim;
    if (h.over_rationals()) {
        out.coeff = g.coeff;
        for (size_t r = 0; r < g.action.size(); ++r)
            out.action.push_back(kron(Mat::identity(h.kdim), g.action[r]));
    } else if (g.over_rationals()) {
        out.coeff = h.coeff;
        for (size_t r = 0; r < h.action.size(); ++r)
            out.action.push_back(kron(h.action[r], Mat::identity(g.kdim)));
    } else {
        out.coeff = tensor_algebras(h.coeff, g.coeff, /*validate=*/false);
        for (size_t r1 = 0; r1 < h.action.size(); ++r1)
            for (size_t r2 = 0; r2 < g.action.size(); ++r2)
                out.action.push_back(kron(h.action[r1], g.action[r2]));
    }
    out.values.assign(out.kdim, std::vector<Vec>(out.kdim));
    for (size_t s1 = 0; s1 < h.kdim; ++s1)
        for (size_t s2 = 0; s2 < g.kdim; ++s2)
            for (size_t t1 = 0; t1 < h.kdim; ++t1)
                for (size_t t2 = 0; t2 < g.kdim; ++t2) {
                    Vec v;
                    if (h.over_rationals())
                        v = vec_scale(h.values[s1][t1][0], g.values[s2][t2]);
                    else if (g.over_rationals())
                        v = vec_scale(g.values[s2][t2][0], h.values[s1][t1]);
                    else
                        v = kron_vec(h.values[s1][t1], g.values[s2][t2]);
                    out.values[s1 * g.kdim + s2][t1 * g.kdim + t2] = std::move(v);
                }
    return out;
}

HermForm scale_form(const Q& lambda, const HermForm& h) {
    if (sgn(lambda) == 0) throw std::invalid_argument("scaling by zero");
    HermForm out = h;
    for (auto& row : out.values)
        for (auto& v : row) v = vec_scale(lambda, v);
    if (out.diag)
        for (auto& e : *out.diag) e = vec_scale(lambda, e);
    return out;
}

AlgebraPtr adjoint_involution(const HermForm& h) {
    if (!h.free_mod) throw std::invalid_argument("adjoint involution needs a free module");
    if (h.kdim == 0) throw std::invalid_argument("adjoint involution of the zero module");
    const FreeModule& v = *h.free_mod;
    const AlgebraPtr& B = v.endo_algebra();
    const size_t db = B->dim(), da = h.coeff->dim();
    // unknown z = sigma_h(b) in h(b x, y) = h(x, z y); rows indexed by
    // (s, t, coordinate), one shared system matrix for every b
    Mat sys(h.kdim * h.kdim * da, db);
    for (size_t c = 0; c < db; ++c) {
        const Mat& L = v.endo_left_action(c);
        for (size_t s = 0; s < h.kdim; ++s)
            for (size_t t = 0; t < h.kdim; ++t) {
                Vec acc(da);
                for (size_t w = 0; w < h.kdim; ++w)
                    if (sgn(L.at(w, t)) != 0) acc = vec_add(acc, vec_scale(L.at(w, t), h.values[s][w]));
                for (size_t x = 0; x < da; ++x) sys.at((s * h.kdim + t) * da + x, c) = acc[x];
            }
    }
    Mat invol(db, db);
    for (size_t b = 0; b < db; ++b) {
        const Mat& L = v.endo_left_action(b);
        Vec rhs(h.kdim * h.kdim * da);
        for (size_t s = 0; s < h.kdim; ++s)
            for (size_t t = 0; t < h.kdim; ++t) {
                Vec acc(da);
                for (size_t w = 0; w < h.kdim; ++w)
                    if (sgn(L.at(w, s)) != 0) acc = vec_add(acc, vec_scale(L.at(w, s), h.values[w][t]));
                for (size_t x = 0; x < da; ++x) rhs[(s * h.kdim + t) * da + x] = acc[x];
            }
        auto z = solve(sys, rhs);
        if (!z) throw std::invalid_argument("degenerate form: adjoint involution does not exist");
        invol.set_col(b, *z);
    }
    Algebra::Raw raw;
    raw.dim = db;
    raw.labels = B->labels();
    raw.mul.assign(db, std::vector<SparseVec>(db));
    for (size_t i = 0; i < db; ++i)
        for (size_t j = 0; j < db; ++j) raw.mul[i][j] = B->structure(i, j);
    raw.unit = B->unit();
    raw.invol = invol;
    raw.kind = Algebra::Kind::Endo;
    raw.description = "End with adjoint involution";
    auto out = std::make_shared<Algebra>(std::move(raw));
    out->validate();
    return out;
}

namespace {

HermForm alt_form_from(const HermForm& h, const AltPower& ap, size_t d) {
    const size_t da = h.coeff->dim();
    size_t dim_ad = 1;
    for (size_t k = 0; k < d; ++k) dim_ad *= da;
    HermForm out;
    out.coeff = tensor_power_algebra(h.coeff, d);
    out.eps = (d % 2 == 0) ? 1 : h.eps;
    out.kdim = ap.kdim();
    out.values.assign(out.kdim, std::vector<Vec>(out.kdim, Vec(dim_ad)));
    out.action.assign(dim_ad, Mat(out.kdim, out.kdim));
    if (out.kdim == 0) return out;
    std::vector<Mat> slices = value_slices(h);
    Mat ut = ap.subspace.basis.transpose();
    for (size_t cbar = 0; cbar < dim_ad; ++cbar) {
        std::vector<size_t> dig = digits_of(cbar, da, d);
        std::vector<const Mat*> factors(d);
        for (size_t k = 0; k < d; ++k) factors[k] = &slices[dig[k]];
        Mat gram = ut * kron_apply(factors, ap.preimages);
        for (size_t s = 0; s < out.kdim; ++s)
            for (size_t t = 0; t < out.kdim; ++t) out.values[s][t][cbar] = gram.at(s, t);
    }
    const FreeModule& v = *h.free_mod;
    // stability of the subspace is verified on the single-factor generators;
    // the other basis elements are their products, so their actions descend
    // once the generators do
    std::vector<size_t> pivots(out.kdim);
    for (size_t i = 0; i < out.kdim; ++i) {
        size_t piv = 0;
        while (piv < ap.subspace.ambient && sgn(ap.subspace.basis.at(piv, i)) == 0) ++piv;
        pivots[i] = piv;
    }
    for (size_t r = 0; r < dim_ad; ++r) {
        std::vector<size_t> dig = digits_of(r, da, d);
        std::vector<const Mat*> factors(d);
        size_t nontrivial = 0;
        for (size_t k = 0; k < d; ++k) {
            factors[k] = &v.right_action(dig[k]);
            if (dig[k] != 0) ++nontrivial;
        }
        Mat moved = kron_apply(factors, ap.subspace.basis);
        bool check = nontrivial <= 1;
        Mat act(out.kdim, out.kdim);
        for (size_t j = 0; j < out.kdim; ++j) {
            Vec col = moved.col(j);
            if (check && !ap.subspace.contains(col))
                throw std::logic_error("alternating power not stable under the right action");
            for (size_t i = 0; i < out.kdim; ++i) act.at(i, j) = col[pivots[i]];
        }
        out.action[r] = std::move(act);
    }
    return out;
}

}  // namespace

HermForm alt_power_form(const HermForm& h, size_t d, size_t cap) {
    if (d == 0) return diagonal_form_scalars(Algebra::rationals(), {Q(1)});
    if (!h.free_mod) throw std::invalid_argument("alternating powers need a free module");
    AltPower ap = alt_module(*h.free_mod, d, cap);
    return alt_form_from(h, ap, d);
}

HermForm tensor_power_form_restricted(const HermForm& h, size_t d, size_t cap) {
    if (!h.free_mod) throw std::invalid_argument("alternating powers need a free module");
    AltPower ap = alt_module(*h.free_mod, d, cap);
    AltPower same = ap;
    same.preimages = ap.subspace.basis;  // evaluate h^{otimes d} on the basis itself
    return alt_form_from(h, same, d);
}

bool verify_isometry(const Mat& map, const HermForm& h1, const HermForm& h2) {
    if (!h1.coeff->same_as(*h2.coeff) || h1.eps != h2.eps) return false;
    if (map.rows() != h2.kdim || map.cols() != h1.kdim) return false;
    if (h1.kdim != h2.kdim || rank(map) != h1.kdim) return false;
    for (size_t r = 0; r < h1.coeff->dim(); ++r)
        if (!(map * h1.action[r] == h2.action[r] * map)) return false;
    // value transport, one coordinate slice at a time
    Mat mt = map.transpose();
    std::vector<Mat> s1 = value_slices(h1), s2 = value_slices(h2);
    for (size_t c = 0; c < h1.coeff->dim(); ++c)
        if (!(mt * s2[c] * map == s1[c])) return false;
    return true;
}

AdditionIsometry addition_isometry(const HermForm& h, const HermForm& g, size_t d, size_t cap) {
    if (!h.free_mod || !g.free_mod) throw std::invalid_argument("addition isometry needs free modules");
    require_same_algebra(h.coeff, g.coeff, "addition isometry");
    if (h.eps != g.eps) throw std::invalid_argument("addition isometry: sign mismatch");
    SumSplitIso iso = sum_split_iso(*h.free_mod, *g.free_mod, d, cap);
    HermForm sum = orthogonal_sum(h, g);
    AdditionIsometry out{HermForm{}, alt_form_from(sum, iso.target, d), iso.matrix};
    bool have = false;
    size_t block = 0;
    for (size_t p : iso.block_p) {
        size_t q = d - p;
        HermForm piece = tensor_form(alt_power_form(h, p, cap), alt_power_form(g, q, cap));
        if (iso.block_dim[block] != piece.kdim) throw std::logic_error("addition isometry block shape");
        out.source = have ? orthogonal_sum(out.source, piece) : std::move(piece);
        have = true;
        ++block;
    }
    if (!verify_isometry(out.map, out.source, out.target))
        throw std::logic_error("shuffle map failed to transport the Gram tables");
    return out;
}

// ---------------------------------------------------------------------------
// Morita machinery

void Equivalence::validate() const {
    const size_t dc = source->dim(), da = target->dim();
    for (size_t c = 0; c < dc; ++c) {
        const Mat& L = left_action[c];
        Mat Lt(kdim, kdim);
        Vec tc = source->apply_involution(source->basis_vec(c));
        for (size_t r = 0; r < dc; ++r)
            if (sgn(tc[r]) != 0) Lt += left_action[r] * tc[r];
        for (size_t t = 0; t < kdim; ++t)
            for (size_t tp = 0; tp < kdim; ++tp) {
                Vec lhs(da), rhs(da);
                for (size_t w = 0; w < kdim; ++w) {
                    if (sgn(L.at(w, t)) != 0) lhs = vec_add(lhs, vec_scale(L.at(w, t), values[w][tp]));
                    if (sgn(Lt.at(w, tp)) != 0) rhs = vec_add(rhs, vec_scale(Lt.at(w, tp), values[t][w]));
                }
                if (lhs != rhs) throw std::invalid_argument("equivalence form is not adjoint to the involution");
            }
    }
    for (size_t t = 0; t < kdim; ++t)
        for (size_t tp = 0; tp < kdim; ++tp)
            if (target->apply_involution(values[t][tp]) != vec_scale(Q(eps), values[tp][t]))
                throw std::invalid_argument("equivalence form has the wrong sign");
    Mat gram(kdim, kdim);
    for (size_t s = 0; s < kdim; ++s)
        for (size_t t = 0; t < kdim; ++t) gram.at(s, t) = target->trd(values[s][t]);
    if (rank(gram) != kdim) throw std::invalid_argument("equivalence form is degenerate");
}

Equivalence identity_equivalence(const AlgebraPtr& a) {
    Equivalence eq;
    eq.source = a;
    eq.target = a;
    eq.eps = 1;
    eq.kdim = a->dim();
    for (size_t r = 0; r < a->dim(); ++r) {
        eq.left_action.push_back(a->left_mult(a->basis_vec(r)));
        eq.right_action.push_back(a->right_mult(a->basis_vec(r)));
    }
    eq.values.assign(eq.kdim, std::vector<Vec>(eq.kdim));
    for (size_t x = 0; x < eq.kdim; ++x) {
        Vec sx = a->apply_involution(a->basis_vec(x));
        for (size_t y = 0; y < eq.kdim; ++y) eq.values[x][y] = a->mul(sx, a->basis_vec(y));
    }
    eq.source_goldman = goldman_element(a);
    return eq;
}

Equivalence trace_equivalence(const AlgebraPtr& a, size_t d) {
    AlgebraPtr ad = tensor_power_algebra(a, d);
    Equivalence eq;
    eq.source = tensor_algebras(ad, ad, /*validate=*/false);
    eq.target = Algebra::rationals();
    eq.eps = 1;
    eq.kdim = ad->dim();
    const size_t dd = ad->dim();
    eq.left_action.reserve(dd * dd);
    for (size_t i = 0; i < dd; ++i) {
        Mat li = ad->left_mult(ad->basis_vec(i));
        for (size_t j = 0; j < dd; ++j) {
            // twisted action: (a (x) b) . x = a x sigma(b)
            Mat rj = ad->right_mult(ad->apply_involution(ad->basis_vec(j)));
            eq.left_action.push_back(li * rj);
        }
    }
    eq.right_action.push_back(Mat::identity(dd));
    eq.values.assign(dd, std::vector<Vec>(dd, Vec(1)));
    for (size_t x = 0; x < dd; ++x) {
        Vec sx = ad->apply_involution(ad->basis_vec(x));
        for (size_t y = 0; y < dd; ++y) eq.values[x][y][0] = ad->trd(ad->mul(sx, ad->basis_vec(y)));
    }
    GoldmanElement gad = goldman_power(ad, goldman_element(a), d);
    eq.source_goldman = goldman_of_tensor(eq.source, gad, gad);
    return eq;
}

Equivalence matrix_transpose_equivalence(const AlgebraPtr& mn) {
    if (mn->kind() != Algebra::Kind::Matrix)
        throw std::invalid_argument("column-space equivalence needs a matrix algebra");
    const size_t n = mn->matrix_n();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (mn->apply_involution(mn->basis_vec(i * n + j)) != mn->basis_vec(j * n + i))
                throw std::invalid_argument("column-space equivalence needs the transpose involution");
    Equivalence eq;
    eq.source = mn;
    eq.target = Algebra::rationals();
    eq.eps = 1;
    eq.kdim = n;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Mat e(n, n);
            e.at(i, j) = 1;
            eq.left_action.push_back(std::move(e));
        }
    eq.right_action.push_back(Mat::identity(n));
    eq.values.assign(n, std::vector<Vec>(n, Vec(1)));
    for (size_t i = 0; i < n; ++i) eq.values[i][i][0] = 1;
    eq.source_goldman = goldman_matrix_units(mn);
    return eq;
}

Equivalence split_quaternion_equivalence(const AlgebraPtr& h) {
    if (h->kind() != Algebra::Kind::Quaternion || h->quat_a() != Q(1) || h->quat_b() != Q(1))
        throw std::invalid_argument("split equivalence is provided for the (1,1) quaternion algebra");
    Mat gamma(4, 4);
    gamma.at(0, 0) = 1;
    for (size_t t = 1; t < 4; ++t) gamma.at(t, t) = -1;
    if (!(h->involution() == gamma))
        throw std::invalid_argument("split equivalence needs the canonical involution");
    Equivalence eq;
    eq.source = h;
    eq.target = Algebra::rationals();
    eq.eps = -1;
    eq.kdim = 2;
    // 1 -> I, i -> diag(1,-1), j -> [[0,1],[1,0]], k = ij -> [[0,1],[-1,0]]
    eq.left_action = {Mat::identity(2), Mat(2, 2, {1, 0, 0, -1}), Mat(2, 2, {0, 1, 1, 0}),
                      Mat(2, 2, {0, 1, -1, 0})};
    eq.right_action.push_back(Mat::identity(2));
    eq.values.assign(2, std::vector<Vec>(2, Vec(1)));
    eq.values[0][1][0] = 1;
    eq.values[1][0][0] = -1;
    eq.source_goldman = goldman_element(h);
    return eq;
}

Equivalence tensor_power_equivalence(const Equivalence& eq, size_t n) {
    if (n == 0) throw std::invalid_argument("tensor power of an equivalence needs n >= 1");
    if (n == 1) return eq;
    Equivalence out;
    out.source = tensor_power_algebra(eq.source, n);
    out.target = tensor_power_algebra(eq.target, n);
    out.eps = (n % 2 == 0) ? 1 : eq.eps;
    out.kdim = 1;
    for (size_t k = 0; k < n; ++k) out.kdim *= eq.kdim;
    const size_t dc = eq.source->dim(), da = eq.target->dim();
    size_t dcn = out.source->dim(), dan = out.target->dim();
    out.left_action.reserve(dcn);
    for (size_t r = 0; r < dcn; ++r) {
        std::vector<size_t> dig = digits_of(r, dc, n);
        Mat m(1, 1);
        m.at(0, 0) = 1;
        for (size_t k = 0; k < n; ++k) m = kron(m, eq.left_action[dig[k]]);
        out.left_action.push_back(std::move(m));
    }
    out.right_action.reserve(dan);
    for (size_t r = 0; r < dan; ++r) {
        std::vector<size_t> dig = digits_of(r, da, n);
        Mat m(1, 1);
        m.at(0, 0) = 1;
        for (size_t k = 0; k < n; ++k) m = kron(m, eq.right_action[dig[k]]);
        out.right_action.push_back(std::move(m));
    }
    out.values.assign(out.kdim, std::vector<Vec>(out.kdim));
    for (size_t s = 0; s < out.kdim; ++s) {
        std::vector<size_t> sd = digits_of(s, eq.kdim, n);
        for (size_t t = 0; t < out.kdim; ++t) {
            std::vector<size_t> td = digits_of(t, eq.kdim, n);
            Vec v{Q(1)};
            for (size_t k = 0; k < n; ++k) v = kron_vec(v, eq.values[sd[k]][td[k]]);
            out.values[s][t] = std::move(v);
        }
    }
    if (eq.source_goldman) out.source_goldman = goldman_power(out.source, *eq.source_goldman, n);
    return out;
}

namespace {

// core of composing a C-valued pairing on M with an equivalence (U,g) out of
// C: the form f(m (x) u, m' (x) u') = g(u, h(m,m') u') on M (x)_C U
struct ComposedData {
    QuotientModule qm;
    std::vector<std::vector<Vec>> values;
    std::vector<Mat> right_action;
};

ComposedData compose_core(size_t mdim, const std::vector<Mat>& m_right_c,
                          const std::vector<std::vector<Vec>>& m_values, const Equivalence& eq) {
    const size_t dc = eq.source->dim(), da = eq.target->dim();
    ComposedData out;
    out.qm = eq.source_goldman
                 ? tensor_over_azumaya(mdim, m_right_c, eq.kdim, eq.left_action, *eq.source_goldman)
                 : tensor_over_algebra(mdim, m_right_c, eq.kdim, eq.left_action);
    out.right_action.reserve(da);
    for (size_t r = 0; r < da; ++r)
        out.right_action.push_back(out.qm.descend(kron(Mat::identity(mdim), eq.right_action[r])));
    // per source-coordinate tables g(u_t, e_r u_{t'})
    std::vector<std::vector<std::vector<Vec>>> gr(dc);
    for (size_t r = 0; r < dc; ++r) {
        gr[r].assign(eq.kdim, std::vector<Vec>(eq.kdim, Vec(da)));
        const Mat& L = eq.left_action[r];
        for (size_t t = 0; t < eq.kdim; ++t)
            for (size_t tp = 0; tp < eq.kdim; ++tp)
                for (size_t w = 0; w < eq.kdim; ++w)
                    if (sgn(L.at(w, tp)) != 0)
                        gr[r][t][tp] = vec_add(gr[r][t][tp], vec_scale(L.at(w, tp), eq.values[t][w]));
    }
    // assemble the big-space Gram slice per target coordinate and sandwich
    // it between section representatives
    out.values.assign(out.qm.dim, std::vector<Vec>(out.qm.dim, Vec(da)));
    const size_t big = out.qm.big_dim;
    for (size_t c = 0; c < da; ++c) {
        Mat slice(big, big);
        for (size_t r = 0; r < dc; ++r) {
            for (size_t s = 0; s < mdim; ++s)
                for (size_t sp = 0; sp < mdim; ++sp) {
                    const Q& hv = m_values[s][sp][r];
                    if (sgn(hv) == 0) continue;
                    for (size_t t = 0; t < eq.kdim; ++t)
                        for (size_t tp = 0; tp < eq.kdim; ++tp) {
                            const Q& gv = gr[r][t][tp][c];
                            if (sgn(gv) != 0)
                                slice.at(s * eq.kdim + t, sp * eq.kdim + tp) += hv * gv;
                        }
                }
        }
        Mat val = out.qm.section.transpose() * slice * out.qm.section;
        for (size_t i = 0; i < out.qm.dim; ++i)
            for (size_t j = 0; j < out.qm.dim; ++j) out.values[i][j][c] = val.at(i, j);
    }
    return out;
}

}  // namespace

HermForm compose_form(const HermForm& h, const Equivalence& eq) {
    require_same_algebra(h.coeff, eq.source, "compose_form");
    ComposedData data = compose_core(h.kdim, h.action, h.values, eq);
    HermForm out;
    out.coeff = eq.target;
    out.eps = h.eps * eq.eps;
    out.kdim = data.qm.dim;
    out.action = std::move(data.right_action);
    out.values = std::move(data.values);
    // over the base field every module is free on its basis
    if (out.over_rationals() && out.kdim > 0) out.free_mod = FreeModule(out.coeff, out.kdim);
    return out;
}

Equivalence morita_compose(const Equivalence& g, const Equivalence& h) {
    require_same_algebra(g.target, h.source, "morita composition");
    ComposedData data = compose_core(g.kdim, g.right_action, g.values, h);
    Equivalence out;
    out.source = g.source;
    out.target = h.target;
    out.eps = g.eps * h.eps;
    out.kdim = data.qm.dim;
    out.right_action = std::move(data.right_action);
    out.values = std::move(data.values);
    out.left_action.reserve(g.source->dim());
    for (size_t r = 0; r < g.source->dim(); ++r)
        out.left_action.push_back(data.qm.descend(kron(g.left_action[r], Mat::identity(h.kdim))));
    out.source_goldman = g.source_goldman;
    return out;
}

HermForm morita_transfer(const HermForm& phi, const AlgebraPtr& half) {
    Equivalence eq = trace_equivalence(half, 1);
    require_same_algebra(phi.coeff, eq.source, "morita transfer");
    return compose_form(phi, eq);
}

HermForm morita_pushforward(const HermForm& h, const Equivalence& f, size_t n) {
    Equivalence fn = tensor_power_equivalence(f, n);
    return compose_form(h, fn);
}

TraceFormTriple involution_trace_forms(const AlgebraPtr& a) {
    const size_t da = a->dim();
    TraceFormTriple out;
    out.full = Mat(da, da);
    for (size_t s = 0; s < da; ++s) {
        Vec ss = a->apply_involution(a->basis_vec(s));
        for (size_t t = 0; t < da; ++t) out.full.at(s, t) = a->trd(a->mul(ss, a->basis_vec(t)));
    }
    out.sym_plus = a->symmetric_subspace(+1);
    out.sym_minus = a->symmetric_subspace(-1);
    out.plus = out.sym_plus.basis.transpose() * out.full * out.sym_plus.basis;
    out.minus = out.sym_minus.basis.transpose() * out.full * out.sym_minus.basis;
    return out;
}

HermForm trace_form_quadratic(const AlgebraPtr& a) {
    TraceFormTriple t = involution_trace_forms(a);
    HermForm out;
    out.coeff = Algebra::rationals();
    out.eps = 1;
    out.kdim = a->dim();
    out.action.push_back(Mat::identity(out.kdim));
    out.values.assign(out.kdim, std::vector<Vec>(out.kdim, Vec(1)));
    for (size_t s = 0; s < out.kdim; ++s)
        for (size_t t2 = 0; t2 < out.kdim; ++t2) out.values[s][t2][0] = t.full.at(s, t2);
    out.free_mod = FreeModule(Algebra::rationals(), out.kdim);
    return out;
}

// ---------------------------------------------------------------------------
// reduced alternating powers

namespace {

struct ReducedEvenData {
    QuotientModule qm;      // V^{[2d]}
    std::vector<Mat> gens;  // descended Goldman generators of S_{2d}
    Subspace ralt;
    Mat preimages;
};

// Gram of h^{[2d]} on the quotient basis: evaluate
// Trd(sigma^{otimes d}(h^{otimes d}(e_i, e_i')) h^{otimes d}(e_j, e_j')) on
// V^{otimes 2d} basis pairs and sandwich with the section.
Mat reduced_gram(const HermForm& h, size_t d, const QuotientModule& qm) {
    const FreeModule& v = *h.free_mod;
    const AlgebraPtr& a = h.coeff;
    size_t wdim = 1;
    for (size_t k = 0; k < d; ++k) wdim *= v.kdim();
    const size_t big = qm.big_dim;
    Mat gtilde(big, big);
    std::vector<std::vector<size_t>> dig(wdim);
    for (size_t i = 0; i < wdim; ++i) dig[i] = digits_of(i, v.kdim(), d);
    for (size_t i = 0; i < wdim; ++i)
        for (size_t ip = 0; ip < wdim; ++ip) {
            Vec hx = tensor_power_involution(*a, d, tensor_value(h, dig[i], dig[ip]));
            for (size_t j = 0; j < wdim; ++j)
                for (size_t jp = 0; jp < wdim; ++jp) {
                    Vec hy = tensor_value(h, dig[j], dig[jp]);
                    gtilde.at(i * wdim + j, ip * wdim + jp) =
                        tensor_power_trd(*a, d, tensor_power_mul(*a, d, hx, hy));
                }
        }
    return qm.section.transpose() * gtilde * qm.section;
}

ReducedEvenData reduced_even_core(const HermForm& h, size_t d, size_t cap) {
    if (!h.free_mod) throw std::invalid_argument("reduced powers need a free module");
    const FreeModule& v = *h.free_mod;
    const AlgebraPtr& a = h.coeff;
    if (!a->has_involution()) throw std::invalid_argument("coefficient algebra carries no involution");
    const size_t da = a->dim();
    size_t dim_ad = 1;
    for (size_t k = 0; k < d; ++k) dim_ad *= da;
    size_t wdim = 1;
    for (size_t k = 0; k < d; ++k) wdim *= v.kdim();
    if ((double)wdim * (double)wdim > (double)cap)
        throw CapExceeded("reduced tensor power needs ambient dimension " +
                          std::to_string(wdim * wdim) + ", beyond the cap " + std::to_string(cap));

    // right action of A^{otimes d} on V^{otimes d}, and the twisted left
    // action a . y = y sigma^{otimes d}(a)
    std::vector<Mat> right_ad(dim_ad), left_tw(dim_ad);
    for (size_t r = 0; r < dim_ad; ++r) {
        std::vector<size_t> dig = digits_of(r, da, d);
        Mat m(1, 1);
        m.at(0, 0) = 1;
        for (size_t k = 0; k < d; ++k) m = kron(m, v.right_action(dig[k]));
        right_ad[r] = std::move(m);
    }
    for (size_t r = 0; r < dim_ad; ++r) {
        Vec e(dim_ad);
        e[r] = 1;
        Vec sig = tensor_power_involution(*a, d, e);
        Mat m(wdim, wdim);
        for (size_t u = 0; u < dim_ad; ++u)
            if (sgn(sig[u]) != 0) m += right_ad[u] * sig[u];
        left_tw[r] = std::move(m);
    }

    ReducedEvenData out;
    AlgebraPtr ad = tensor_power_algebra(a, d);
    GoldmanElement gad = goldman_power(ad, goldman_element(a), d);
    out.qm = tensor_over_azumaya(wdim, right_ad, wdim, left_tw, gad);

    TensorPower t2(v, 2 * d, cap);
    for (size_t i = 0; i + 1 < 2 * d; ++i) {
        Mat big(t2.ambient(), t2.ambient());
        for (size_t j = 0; j < t2.ambient(); ++j) {
            Vec e(t2.ambient());
            e[j] = 1;
            big.set_col(j, t2.apply_adjacent(i, e));
        }
        out.gens.push_back(out.qm.descend(big));
    }

    Mat sbar(out.qm.dim, out.qm.dim);
    for (const Perm& pi : symmetric_group(2 * d)) {
        Mat img = Mat::identity(out.qm.dim);
        auto word = pi.adjacent_factorization();
        for (auto it = word.rbegin(); it != word.rend(); ++it) img = out.gens[*it] * img;
        if (pi.sign() > 0)
            sbar += img;
        else
            sbar -= img;
    }
    ColSpaceBuilder builder(out.qm.dim);
    for (size_t j = 0; j < out.qm.dim; ++j) {
        Vec track(out.qm.dim);
        track[j] = 1;
        builder.add(sbar.col(j), &track);
    }
    out.ralt = Subspace{out.qm.dim, builder.basis()};
    out.preimages = builder.tracked();
    return out;
}

HermForm quadratic_from_gram(const Mat& gram) {
    HermForm out;
    out.coeff = Algebra::rationals();
    out.eps = 1;
    out.kdim = gram.rows();
    out.action.push_back(Mat::identity(out.kdim));
    out.values.assign(out.kdim, std::vector<Vec>(out.kdim, Vec(1)));
    for (size_t s = 0; s < out.kdim; ++s)
        for (size_t t = 0; t < out.kdim; ++t) out.values[s][t][0] = gram.at(s, t);
    if (out.kdim > 0) out.free_mod = FreeModule(Algebra::rationals(), out.kdim);
    return out;
}

}  // namespace

HermForm reduced_alt_even(const HermForm& h, size_t d, size_t cap) {
    if (d == 0) return diagonal_form_scalars(Algebra::rationals(), {Q(1)});
    ReducedEvenData data = reduced_even_core(h, d, cap);
    if (data.ralt.dim() == 0) return quadratic_from_gram(Mat(0, 0));
    // RAlt^{2d}(h)(s x, s y) = h^{[2d]}(s x, y)
    Mat g2 = reduced_gram(h, d, data.qm);
    Mat gram = data.ralt.basis.transpose() * g2 * data.preimages;
    return quadratic_from_gram(gram);
}

HermForm reduced_tensor_power_form_restricted(const HermForm& h, size_t d, size_t cap) {
    if (d == 0) return diagonal_form_scalars(Algebra::rationals(), {Q(1)});
    ReducedEvenData data = reduced_even_core(h, d, cap);
    if (data.ralt.dim() == 0) return quadratic_from_gram(Mat(0, 0));
    Mat g2 = reduced_gram(h, d, data.qm);
    Mat gram = data.ralt.basis.transpose() * g2 * data.ralt.basis;
    return quadratic_from_gram(gram);
}

HermForm reduced_alt_odd(const HermForm& h, size_t d, size_t cap) {
    if (d == 0) return h;
    if (!h.free_mod) throw std::invalid_argument("reduced powers need a free module");
    const FreeModule& v = *h.free_mod;
    const AlgebraPtr& a = h.coeff;
    const size_t da = a->dim();
    ReducedEvenData even = reduced_even_core(h, d, cap);
    const size_t qdim = even.qm.dim;
    const size_t nv = v.kdim();
    const size_t xdim = qdim * nv;
    size_t wdim = 1;
    for (size_t k = 0; k < d; ++k) wdim *= nv;

    TensorPower tall(v, 2 * d + 1, cap);
    // generator application on X = V^{[2d]} (x) V
    auto apply_gen = [&](size_t i, const Vec& x) -> Vec {
        if (i + 1 < 2 * d) {
            Vec out(xdim);
            const Mat& g = even.gens[i];
            for (size_t r = 0; r < qdim; ++r)
                for (size_t c = 0; c < qdim; ++c) {
                    const Q& f = g.at(r, c);
                    if (sgn(f) == 0) continue;
                    for (size_t t = 0; t < nv; ++t)
                        if (sgn(x[c * nv + t]) != 0) out[r * nv + t] += f * x[c * nv + t];
                }
            return out;
        }
        // transposition (2d-1, 2d): lift through the section, act on the
        // last two tensor factors, project back
        Vec big(wdim * wdim * nv);
        for (size_t jq = 0; jq < qdim; ++jq)
            for (size_t t = 0; t < nv; ++t) {
                const Q& f = x[jq * nv + t];
                if (sgn(f) == 0) continue;
                for (size_t row = 0; row < even.qm.big_dim; ++row)
                    if (sgn(even.qm.section.at(row, jq)) != 0)
                        big[row * nv + t] += f * even.qm.section.at(row, jq);
            }
        Vec moved = tall.apply_adjacent(2 * d - 1, big);
        Vec out(xdim);
        for (size_t row = 0; row < even.qm.big_dim; ++row)
            for (size_t t = 0; t < nv; ++t) {
                const Q& f = moved[row * nv + t];
                if (sgn(f) == 0) continue;
                for (size_t jq = 0; jq < qdim; ++jq)
                    if (sgn(even.qm.projection.at(jq, row)) != 0)
                        out[jq * nv + t] += f * even.qm.projection.at(jq, row);
            }
        return out;
    };

    // candidates sh_{2d,1}(RAlt^{2d} (x) V) span the image of s_{2d+1}
    ColSpaceBuilder builder(xdim);
    for (size_t alpha = 0; alpha < even.ralt.dim(); ++alpha)
        for (size_t t = 0; t < nv; ++t) {
            Vec ev(nv);
            ev[t] = 1;
            Vec base = kron_vec(even.ralt.basis.col(alpha), ev);
            Vec acc = base, cur = base;
            int sign = 1;
            for (size_t m = 2 * d; m-- > 0;) {
                cur = apply_gen(m, cur);
                sign = -sign;
                if (sign > 0)
                    acc = vec_add(acc, cur);
                else
                    acc = vec_sub(acc, cur);
            }
            Vec track = kron_vec(even.preimages.col(alpha), ev);
            builder.add(std::move(acc), &track);
        }
    Subspace ralt{xdim, builder.basis()};
    Mat preim = builder.tracked();

    // h^{[2d+1]} = h^{[2d]} (x) h: Gram slices G2 (x) H_c
    std::vector<Mat> slices = value_slices(h);
    HermForm out;
    out.coeff = a;
    out.eps = h.eps;
    out.kdim = ralt.dim();
    out.values.assign(out.kdim, std::vector<Vec>(out.kdim, Vec(da)));
    out.action.assign(da, Mat(out.kdim, out.kdim));
    if (out.kdim == 0) return out;
    Mat g2 = reduced_gram(h, d, even.qm);
    Mat ut = ralt.basis.transpose();
    for (size_t c = 0; c < da; ++c) {
        std::vector<const Mat*> factors{&g2, &slices[c]};
        Mat gram = ut * kron_apply(factors, preim);
        for (size_t s = 0; s < out.kdim; ++s)
            for (size_t t = 0; t < out.kdim; ++t) out.values[s][t][c] = gram.at(s, t);
    }
    for (size_t r = 0; r < da; ++r) {
        Mat big = kron(Mat::identity(qdim), v.right_action(r));
        out.action[r] = induced_on_subspace(ralt, big);
    }
    return out;
}

HermForm ralt_unit_form(const AlgebraPtr& a, size_t d) {
    if (!a->has_involution()) throw std::invalid_argument("needs an algebra with involution");
    if (d == 0) return diagonal_form_scalars(Algebra::rationals(), {Q(1)});
    const size_t da = a->dim();
    size_t dim_ad = 1;
    for (size_t k = 0; k < d; ++k) dim_ad *= da;
    GoldmanElement g = goldman_element(a);
    const int eps_sigma = a->epsilon_sigma();

    // adjacent transpositions of S_{2d} on A^{otimes d} under the twisted
    // action (a (x) b) . x = a x sigma^{otimes d}(b): slots 0..d-1 multiply
    // on the left factorwise, slots d..2d-1 on the right by sigma at factor
    // slot-d
    auto left_at = [&](size_t factor, size_t basis) {
        Mat l = a->left_mult(a->basis_vec(basis));
        Mat id = Mat::identity(da);
        Mat m(1, 1);
        m.at(0, 0) = 1;
        for (size_t k = 0; k < d; ++k) m = kron(m, k == factor ? l : id);
        return m;
    };
    auto right_sigma_at = [&](size_t factor, size_t basis) {
        Mat r = a->right_mult(a->apply_involution(a->basis_vec(basis)));
        Mat id = Mat::identity(da);
        Mat m(1, 1);
        m.at(0, 0) = 1;
        for (size_t k = 0; k < d; ++k) m = kron(m, k == factor ? r : id);
        return m;
    };
    std::vector<Mat> gens;
    for (size_t i = 0; i + 1 < 2 * d; ++i) {
        Mat op(dim_ad, dim_ad);
        for (const auto& [p, qq, c] : g.terms()) {
            Mat term;
            if (i + 1 < d)
                term = left_at(i, p) * left_at(i + 1, qq);
            else if (i >= d)
                term = right_sigma_at(i - d, p) * right_sigma_at(i + 1 - d, qq);
            else
                term = left_at(d - 1, p) * right_sigma_at(0, qq);
            op += term * c;
        }
        gens.push_back(std::move(op));
    }
    // image of s_{2d} by the shuffle factorization chain, degree by degree:
    // im(s_k) = sh_{k-1,1} im(s_{k-1}), with preimages carried along
    ColSpaceBuilder seed(dim_ad);
    for (size_t j = 0; j < dim_ad; ++j) {
        Vec track(dim_ad);
        track[j] = 1;
        Vec e = track;
        seed.add(std::move(e), &track);
    }
    Subspace sub{dim_ad, seed.basis()};
    Mat preim = seed.tracked();
    for (size_t k = 2; k <= 2 * d; ++k) {
        ColSpaceBuilder builder(dim_ad);
        for (size_t j = 0; j < sub.dim(); ++j) {
            Vec acc = sub.basis.col(j);
            Vec cur = acc;
            int sign = 1;
            for (size_t m = k - 1; m-- > 0;) {
                cur = gens[m].apply(cur);
                sign = -sign;
                if (sign > 0)
                    acc = vec_add(acc, cur);
                else
                    acc = vec_sub(acc, cur);
            }
            Vec track = preim.col(j);
            builder.add(std::move(acc), &track);
        }
        sub = Subspace{dim_ad, builder.basis()};
        preim = builder.tracked();
    }
    Q scale = (d % 2 == 0) ? Q(1) : Q(-eps_sigma);
    Mat gram(sub.dim(), sub.dim());
    for (size_t s = 0; s < sub.dim(); ++s)
        for (size_t t = 0; t < sub.dim(); ++t)
            gram.at(s, t) =
                scale * tensor_power_trd(*a, d, tensor_power_mul(*a, d, sub.basis.col(s), preim.col(t)));
    return quadratic_from_gram(gram);
}

DiagonalFormQ jacobson_transfer(const HermForm& h) {
    if (h.coeff->kind() != Algebra::Kind::Quaternion)
        throw std::invalid_argument("Jacobson transfer needs a quaternion coefficient algebra");
    Mat gamma(4, 4);
    gamma.at(0, 0) = 1;
    for (size_t t = 1; t < 4; ++t) gamma.at(t, t) = -1;
    if (!(h.coeff->involution() == gamma))
        throw std::invalid_argument("Jacobson transfer needs the canonical involution");
    if (h.eps != 1) throw std::invalid_argument("Jacobson transfer needs a hermitian (+1) form");
    return diagonalize(h.trace_gram());
}

}  // namespace qalt

#pragma once

#include "qalt/algebra.hpp"
#include "qalt/echelon.hpp"

#include <memory>
#include <vector>

namespace qalt {

// Sparse square operator, stored by rows; applied to slices of tensor
// coordinates.
struct PairOp {
    size_t n = 0;
    std::vector<std::vector<std::pair<size_t, Q>>> rows;

    static PairOp from_dense(const Mat& m);
    Mat dense() const;
};

// Free right module V = A^rank over an Azumaya algebra with involution,
// with precomputed right-action matrices, the endomorphism algebra
// B = End_A(V) = M_rank(K) (x) A acting on the left, and the Goldman pair
// operators on V (x) V that generate the two commuting S_d-actions on
// tensor powers. K-basis of V: (slot s, algebra basis t) at index
// s*dim(A)+t.
class FreeModule {
public:
    FreeModule(AlgebraPtr alg, size_t rank);

    const AlgebraPtr& algebra() const { return alg_; }
    size_t rank() const { return rank_; }
    size_t kdim() const { return rank_ * alg_->dim(); }
    size_t rdim() const { return rank_ * alg_->degree(); }

    const Mat& right_action(size_t basis) const { return right_act_[basis]; }
    Mat right_action_of(const Vec& a) const;

    // End_A(V) as a structure-constant algebra (no involution attached).
    // The endomorphism data and the Goldman pair operators are computed once
    // on first use and shared between copies.
    const AlgebraPtr& endo_algebra() const;
    const Mat& endo_left_action(size_t basis) const;
    Mat endo_left_action_of(const Vec& b) const;
    const GoldmanElement& endo_goldman() const;

    // Goldman transposition operator on V (x) V (from g_B, left action).
    const PairOp& goldman_pair() const;
    // Right translation operator on V (x) V (from g_A, right action).
    const PairOp& right_pair() const;

    bool same_as(const FreeModule& o) const { return rank_ == o.rank_ && alg_->same_as(*o.alg_); }

private:
    struct DerivedOps;

    AlgebraPtr alg_;
    size_t rank_;
    std::vector<Mat> right_act_;
    std::shared_ptr<DerivedOps> ops_;

    DerivedOps& derived() const;
};

// End_A(V) as a plain algebra.
AlgebraPtr endo_algebra(const FreeModule& v);

// V^{otimes d} with its two commuting K[S_d]-actions: the left Goldman
// action through B^{otimes d} and the right action through A^{otimes d},
// plus the right A^{otimes d}-module structure. Tensor indices are
// big-endian: factor 0 is the most significant digit.
class TensorPower {
public:
    static constexpr size_t kDefaultCap = 4096;

    TensorPower(FreeModule base, size_t d, size_t cap = kDefaultCap);

    const FreeModule& base() const { return base_; }
    size_t degree() const { return d_; }
    size_t ambient() const { return ambient_; }

    // left Goldman action
    Vec apply_adjacent(size_t i, const Vec& x) const;
    Vec apply_perm(const Perm& pi, Vec x) const;
    Mat goldman_action(const Perm& pi) const;
    // right K[S_d] action; apply_right_adjacent multiplies by the Goldman
    // factor 1 (x) .. g_A .. (x) 1 on the right. right_translate(pi) is the
    // matrix of x -> x * image(pi^{-1}), so that right_translate is a group
    // homomorphism and right_translate(pi) * goldman_action(pi) is the plain
    // permutation of tensor factors.
    Vec apply_right_adjacent(size_t i, const Vec& x) const;
    Vec apply_right_perm(const Perm& pi, Vec x) const;
    Mat right_translate(const Perm& pi) const;
    // permutation action on coordinates: e_{x_1..x_d} -> e_{x_{pi^{-1}(1)}..}
    Mat factor_permutation(const Perm& pi) const;

    // right action of the A^{otimes d} basis element with digit indices idx
    Mat right_algebra_action(const std::vector<size_t>& idx) const;

    // s_d = sum over S_d of sign * Goldman action
    Vec apply_antisymmetrizer(const Vec& x) const;
    Mat antisymmetrizer() const;
    // sh_{p,d-p} applied by the adjacent-transposition chain
    Vec apply_shuffle(size_t p, const Vec& x) const;

private:
    FreeModule base_;
    size_t d_;
    size_t ambient_;

    Vec apply_pair(const PairOp& op, size_t i, const Vec& x) const;
};

// Image of the antisymmetrizer, with preimages: s_d(preimage col j) =
// basis col j. rdim is over A^{otimes d}.
struct AltPower {
    size_t d = 0;
    Subspace subspace;
    Mat preimages;
    size_t rdim = 0;

    size_t kdim() const { return subspace.dim(); }
    // induced right action of the A^{otimes d} basis element idx on subspace
    // coordinates
    Mat induced_right_action(const TensorPower& t, const std::vector<size_t>& idx) const;
};

// Alt^d(V) = s_d V^{otimes d}, built degree by degree through the shuffle
// factorization of the antisymmetrizer.
AltPower alt_module(const FreeModule& v, size_t d, size_t cap = TensorPower::kDefaultCap);

// x # y = sh_{p,q}(x otimes y) for x in V^{otimes p}, y in V^{otimes q}.
Vec shuffle_product(const FreeModule& v, size_t p, const Vec& x, size_t q, const Vec& y,
                    size_t cap = TensorPower::kDefaultCap);

// The K-linear isomorphism  sum over p+q=d of Alt^p(U) (x) Alt^q(V) ->
// Alt^d(U + V)  induced by the shuffle product, with bookkeeping.
struct SumSplitIso {
    FreeModule direct_sum;          // U + V
    AltPower target;                // Alt^d(U + V)
    std::vector<size_t> block_p;    // p value per source block
    std::vector<size_t> block_dim;  // K-dimension per source block (alt_p(U) x alt_q(V))
    Mat columns_ambient;            // images of the source basis in (U+V)^{otimes d}
    Mat matrix;                     // the same in Alt^d(U+V) subspace coordinates (square)
};
SumSplitIso sum_split_iso(const FreeModule& u, const FreeModule& v, size_t d,
                          size_t cap = TensorPower::kDefaultCap);

// Embedding of U^{otimes p} into (U + V)^{otimes p} coordinates (U the first
// summand when first = true).
Vec embed_tensor(const FreeModule& u, const FreeModule& sum, bool first, size_t p, const Vec& x);

// W (x)_B U for a right B-module W and a left B-module U (each given by
// action matrices of the B basis), as a quotient of W (x)_K U.
struct QuotientModule {
    size_t big_dim = 0;
    size_t dim = 0;
    Mat projection;     // dim x big_dim
    Mat section;        // big_dim x dim; projection*section = 1
    Subspace relations; // kernel of projection (empty for the projector route)
    std::optional<Mat> projector;  // idempotent with image = a complement of the relations

    // push an operator on the big space down to the quotient; throws when the
    // operator does not preserve the relation subspace
    Mat descend(const Mat& op) const;
    Vec project(const Vec& x) const { return projection.apply(x); }
};

QuotientModule tensor_over_algebra(size_t w_dim, const std::vector<Mat>& w_right_b,
                                   size_t u_dim, const std::vector<Mat>& u_left_b);

// Same quotient computed through the separability projector of an Azumaya
// algebra, P(w (x) u) = (1/deg) sum (w a_i) (x) (b_i u) over the Goldman
// element sum a_i (x) b_i; much faster than enumerating relations.
QuotientModule tensor_over_azumaya(size_t w_dim, const std::vector<Mat>& w_right_b, size_t u_dim,
                                   const std::vector<Mat>& u_left_b, const GoldmanElement& g);

// Goldman element of A^{otimes n} through the iterated middle-swap formula.
GoldmanElement goldman_power(const AlgebraPtr& apow, const GoldmanElement& g, size_t n);

}  // namespace qalt

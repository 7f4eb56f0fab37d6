#pragma once

#include "qalt/echelon.hpp"
#include "qalt/matrix.hpp"
#include "qalt/permutation.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qalt {

// Raised when a construction would exceed a configured dimension cap.
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Sparse coordinate vector; structure constants of all algebras built here
// are monomial or near-monomial, so products stay cheap in this form.
struct SparseVec {
    std::vector<std::pair<size_t, Q>> terms;

    static SparseVec from_dense(const Vec& v);
    Vec dense(size_t dim) const;
};

enum class InvolutionType { Orthogonal, Symplectic };

// Finite-dimensional associative algebra over Q with a distinguished basis,
// given by structure constants, an optional involution (as a K-linear
// matrix), and cached reduced-trace data. Immutable after construction.
class Algebra : public std::enable_shared_from_this<Algebra> {
public:
    // kind tags used for reduced-norm closed forms and CLI reporting
    enum class Kind { Matrix, Quaternion, Tensor, Endo, Field, Other };

    static std::shared_ptr<const Algebra> rationals();

    size_t dim() const { return dim_; }
    size_t degree() const { return degree_; }
    Kind kind() const { return kind_; }
    const std::string& label(size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::string describe() const { return description_; }

    const Vec& unit() const { return unit_; }
    Vec basis_vec(size_t i) const;
    Vec scalar(const Q& c) const;

    bool has_involution() const { return invol_.has_value(); }
    const Mat& involution() const;
    Vec apply_involution(const Vec& x) const;

    // e_i * e_j in coordinates.
    const SparseVec& structure(size_t i, size_t j) const { return mul_[i][j]; }
    Vec mul(const Vec& x, const Vec& y) const;
    Mat left_mult(const Vec& x) const;   // y -> x y
    Mat right_mult(const Vec& x) const;  // y -> y x
    std::optional<Vec> inverse_of(const Vec& x) const;

    // Reduced trace Trd = Tr(left multiplication)/degree.
    Q trd(const Vec& x) const;
    const Vec& trd_on_basis() const { return trd_basis_; }

    // Reduced norm. Closed form for quaternions, determinant for matrix
    // algebras over the matrix-unit basis, and for other kinds the scalar c
    // with s_n x^{otimes n} = c s_n inside the n-th tensor power, n = degree.
    Q nrd(const Vec& x) const;

    bool same_as(const Algebra& o) const;

    // Structural validation; throws std::invalid_argument with a description
    // of the first failed law. `azumaya` additionally checks that the
    // trace form is nondegenerate and the center is K.
    void validate(bool azumaya = true) const;

    InvolutionType involution_type() const;
    int epsilon_sigma() const;  // +1 orthogonal, -1 symplectic
    // +1/-1 symmetric elements of the involution.
    Subspace symmetric_subspace(int eps) const;

    // Quaternion parameters when kind() == Quaternion.
    Q quat_a() const { return quat_a_; }
    Q quat_b() const { return quat_b_; }
    size_t matrix_n() const { return matrix_n_; }

    struct Raw {
        size_t dim = 0;
        std::vector<std::string> labels;
        std::vector<std::vector<SparseVec>> mul;
        Vec unit;
        std::optional<Mat> invol;
        Kind kind = Kind::Other;
        std::string description;
        Q quat_a = 0, quat_b = 0;
        size_t matrix_n = 0;
    };
    explicit Algebra(Raw raw);

private:
    size_t dim_;
    std::vector<std::string> labels_;
    std::vector<std::vector<SparseVec>> mul_;
    Vec unit_;
    std::optional<Mat> invol_;
    Kind kind_;
    std::string description_;
    Q quat_a_, quat_b_;
    size_t matrix_n_;
    size_t degree_;
    Vec trd_basis_;

    void finish_construction();
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

struct MatrixInvolution {
    // transpose when u is absent; X -> u X^T u^{-1} otherwise (u must be
    // invertible with u^T = +-u).
    std::optional<Mat> u;
};

struct QuaternionInvolution {
    // canonical gamma(x) = Trd(x) - x when u is absent; Int(u) o gamma for a
    // pure invertible quaternion u otherwise.
    std::optional<Vec> u;  // coordinates in {1,i,j,k}
};

AlgebraPtr make_matrix_algebra(size_t n, const MatrixInvolution& inv = {}, bool validate = true);
AlgebraPtr make_quaternion(const Q& a, const Q& b, const QuaternionInvolution& inv = {});
// A otimes_K B with involution sigma otimes tau (when both carry one);
// basis e_i otimes f_j at index i*dim(B)+j.
AlgebraPtr tensor_algebras(const AlgebraPtr& A, const AlgebraPtr& B, bool validate = true);
// d-th tensor power; d = 0 gives K.
AlgebraPtr tensor_power_algebra(const AlgebraPtr& A, size_t d);

Q reduced_trace(const Algebra& A, const Vec& x);
Q reduced_norm(const Algebra& A, const Vec& x);
// The scalar c with s_n x^{otimes n} = c s_n computed inside A^{otimes n};
// cross-checks the closed-form reduced norm.
Q reduced_norm_by_ratio(const AlgebraPtr& A, const Vec& x);

// Arithmetic in A^{otimes d} on dense coordinate vectors of length dim^d,
// directly from the structure constants of A.
Vec tensor_power_mul(const Algebra& a, size_t d, const Vec& u, const Vec& v);
Q tensor_power_trd(const Algebra& a, size_t d, const Vec& u);
Vec tensor_power_involution(const Algebra& a, size_t d, const Vec& u);

// sign of the permutation weighted by the involution type: epsilon(sigma)
// for odd permutations, +1 for even ones.
int sigma_signature(const Algebra& A, const Perm& g);

// The Goldman element g of A, the unique element of A otimes A whose
// sandwich action x -> sum a_i x b_i is Trd(x) * 1.
class GoldmanElement {
public:
    GoldmanElement(AlgebraPtr alg, std::vector<std::tuple<size_t, size_t, Q>> terms);

    const AlgebraPtr& algebra() const { return alg_; }
    const std::vector<std::tuple<size_t, size_t, Q>>& terms() const { return terms_; }

    // x -> sum a_i x b_i as a dim x dim matrix.
    Mat sandwich_matrix() const;
    Vec sandwich(const Vec& x) const;
    // Coordinates in A otimes A (dim^2 entries, index i*dim+j).
    Vec coords() const;
    // g * g in A otimes A.
    Vec square_coords() const;
    // (sigma otimes sigma)(g) coordinates.
    Vec invol_coords() const;
    // Operator on U otimes U when A acts on a split module U (matrix algebras
    // on their column space): sum L(a_i) otimes L(b_i).
    Mat column_space_operator() const;

private:
    AlgebraPtr alg_;
    std::vector<std::tuple<size_t, size_t, Q>> terms_;
};

// Direct linear-system solve for the Goldman element.
GoldmanElement goldman_element(const AlgebraPtr& A);
// Closed form sum of e_ij (x) e_ji for a matrix algebra on the matrix-unit
// basis; agrees with the direct solve (tested for small sizes).
GoldmanElement goldman_matrix_units(const AlgebraPtr& mn);
// Product formula: g_{A otimes B} is the middle-swap reindexing of
// g_A otimes g_B. Verified against the direct solve for small dimensions.
GoldmanElement goldman_of_tensor(const AlgebraPtr& A, const AlgebraPtr& B);
GoldmanElement goldman_of_tensor(const AlgebraPtr& AB, const GoldmanElement& gA,
                                 const GoldmanElement& gB);

}  // namespace qalt

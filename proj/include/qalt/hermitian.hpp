#pragma once

#include "qalt/algebra.hpp"
#include "qalt/module.hpp"
#include "qalt/qform.hpp"

#include <optional>
#include <vector>

namespace qalt {

// epsilon-hermitian form h : V x V -> A over an algebra with involution,
// on a module presented by a K-basis: right-action matrices per algebra
// basis element and the value table in algebra coordinates. Forms over
// K (coeff dimension 1) double as quadratic forms.
class HermForm {
public:
    AlgebraPtr coeff;
    int eps = 1;
    size_t kdim = 0;
    std::vector<Mat> action;               // per coeff basis element
    std::vector<std::vector<Vec>> values;  // kdim x kdim, coeff coordinates
    std::optional<FreeModule> free_mod;    // set when the module is A^m in standard coordinates
    std::optional<std::vector<Vec>> diag;  // set for diagonal presentations

    size_t rdim() const;
    bool over_rationals() const { return coeff->dim() == 1; }
    // Gram of (x,y) -> Trd(h(x,y)).
    Mat trace_gram() const;
    // Diagonal quadratic form of a coefficient-K form.
    DiagonalFormQ quadratic_diagonal() const;

    // epsilon-symmetry, sesquilinearity against the stored action, and
    // nondegeneracy of the trace Gram; throws on the first failure.
    void validate() const;
};

// <a_1,...,a_m>_sigma on A^m; entries must be invertible with
// sigma(a) = eps a for one common eps.
HermForm diagonal_form(const AlgebraPtr& a, const std::vector<Vec>& entries);
HermForm diagonal_form_scalars(const AlgebraPtr& a, const std::vector<Q>& entries);

HermForm orthogonal_sum(const HermForm& h, const HermForm& g);
HermForm tensor_form(const HermForm& h, const HermForm& g);
HermForm scale_form(const Q& lambda, const HermForm& h);

// End_A(V) with the adjoint involution sigma_h ( h(u x, y) = h(x, sigma_h(u) y) ).
AlgebraPtr adjoint_involution(const HermForm& h);

// Alt^d(h) over (A^{otimes d}, sigma^{otimes d}); needs a free module.
HermForm alt_power_form(const HermForm& h, size_t d, size_t cap = TensorPower::kDefaultCap);
// h^{otimes d} restricted to Alt^d(V) on the same basis (for the <d!> law).
HermForm tensor_power_form_restricted(const HermForm& h, size_t d,
                                      size_t cap = TensorPower::kDefaultCap);

// map sends module-1 coordinates to module-2 coordinates; true iff it is
// bijective, intertwines the right actions, and transports value tables.
bool verify_isometry(const Mat& map, const HermForm& h1, const HermForm& h2);

// The shuffle isometry  sum over p+q=d  Alt^p(h) (x) Alt^q(h')  ->
// Alt^d(h perp h'). Throws std::logic_error when the Gram transport fails
// (it is a theorem that it cannot).
struct AdditionIsometry {
    HermForm source;
    HermForm target;
    Mat map;
};
AdditionIsometry addition_isometry(const HermForm& h, const HermForm& g, size_t d,
                                   size_t cap = TensorPower::kDefaultCap);

// Hermitian Morita equivalence (U, g) : (C, theta) -> (A, sigma); U a
// C-A-bimodule with g : U x U -> A inducing C = End_A(U).
struct Equivalence {
    AlgebraPtr source;
    AlgebraPtr target;
    int eps = 1;
    size_t kdim = 0;
    std::vector<Mat> left_action;   // per source basis
    std::vector<Mat> right_action;  // per target basis
    std::vector<std::vector<Vec>> values;  // target coordinates
    // Goldman element of the source, when known; compositions then run
    // through the separability projector instead of relation enumeration
    std::optional<GoldmanElement> source_goldman;

    void validate() const;  // adjoint property g(c u, v) = g(u, theta(c) v) and nondegeneracy
};

// (A, <1>_sigma), the identity of (A, sigma).
Equivalence identity_equivalence(const AlgebraPtr& a);
// (|A^{otimes d}|, T_{sigma^{otimes d}}) : (A^{otimes d} (x) A^{otimes d}) -> K
// with the twisted action (a (x) b) . x = a x sigma(b).
Equivalence trace_equivalence(const AlgebraPtr& a, size_t d = 1);
// Column-space equivalence (K^n, <1,...,1>) : (M_n with transpose) -> (K, Id).
Equivalence matrix_transpose_equivalence(const AlgebraPtr& mn);
// (K^2, standard symplectic form) : ((1,1) quaternion, canonical) -> (K, Id).
Equivalence split_quaternion_equivalence(const AlgebraPtr& h);
// (U^{otimes n}, g^{otimes n}) : source^{otimes n} -> target^{otimes n}.
Equivalence tensor_power_equivalence(const Equivalence& eq, size_t n);
// Composition (U (x)_B V, f), f(u (x) v, u' (x) v') = h(v, g(u,u') v').
Equivalence morita_compose(const Equivalence& g, const Equivalence& h);

// h composed with an equivalence out of its coefficient algebra: the form
// f(m (x) u, m' (x) u') = g(u, h(m,m') u') on M (x)_C U.
HermForm compose_form(const HermForm& h, const Equivalence& eq);
// Transfer along the trace equivalence: phi must live over half (x) half.
HermForm morita_transfer(const HermForm& phi, const AlgebraPtr& half);
// Pushforward of a form over B^{otimes n} along (V,g) : (B,tau) -> (A,sigma).
HermForm morita_pushforward(const HermForm& h, const Equivalence& f, size_t n);

struct TraceFormTriple {
    Mat full;      // Gram of T_sigma on the algebra basis
    Subspace sym_plus, sym_minus;
    Mat plus;      // Gram on the Sym^+ basis
    Mat minus;     // Gram on the Sym^- basis
};
TraceFormTriple involution_trace_forms(const AlgebraPtr& a);
HermForm trace_form_quadratic(const AlgebraPtr& a);  // T_sigma as a form over K

// Reduced alternating powers. Even: a quadratic form over K on
// RAlt^{2d}(V) inside V^{[2d]} = V^{otimes d} (x)_{A^{otimes d}} twisted
// V^{otimes d}; its class is lambda^{2d}(h). Odd: an eps-hermitian form
// over (A, sigma) on RAlt^{2d+1}(V) inside V^{[2d]} (x) V.
HermForm reduced_alt_even(const HermForm& h, size_t d, size_t cap = TensorPower::kDefaultCap);
HermForm reduced_alt_odd(const HermForm& h, size_t d, size_t cap = TensorPower::kDefaultCap);
// h^{[2d]} restricted to RAlt^{2d}(V) (for the <(2d)!> law).
HermForm reduced_tensor_power_form_restricted(const HermForm& h, size_t d,
                                              size_t cap = TensorPower::kDefaultCap);
// The trace pairing (-eps(sigma))^d Trd((s_{2d} x) y) on s_{2d} A^{otimes d}
// under the identification x (.) y -> x sigma(y); isometric to
// reduced_alt_even(<1>_sigma, d).
HermForm ralt_unit_form(const AlgebraPtr& a, size_t d);

}  // namespace qalt

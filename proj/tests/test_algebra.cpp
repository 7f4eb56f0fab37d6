#include "doctest.h"

#include "qalt/algebra.hpp"

#include <random>

using namespace qalt;

namespace {

Vec random_element(std::mt19937_64& rng, size_t dim, long range = 5) {
    Vec v(dim);
    for (auto& x : v) x = q((long)(rng() % (2 * range + 1)) - range);
    return v;
}

}  // namespace

TEST_CASE("matrix algebra with transpose") {
    auto A = make_matrix_algebra(2);
    CHECK(A->dim() == 4);
    CHECK(A->degree() == 2);
    // sigma(e12) = e21
    Vec e12 = A->basis_vec(0 * 2 + 1);
    Vec e21 = A->basis_vec(1 * 2 + 0);
    CHECK(A->apply_involution(e12) == e21);
    CHECK(A->involution_type() == InvolutionType::Orthogonal);
    CHECK(A->symmetric_subspace(+1).dim() == 3);
}

TEST_CASE("conjugate involutions on M2") {
    Mat u(2, 2, {1, 0, 0, 3});
    auto A = make_matrix_algebra(2, MatrixInvolution{u});
    CHECK(A->involution_type() == InvolutionType::Orthogonal);
    CHECK(A->symmetric_subspace(+1).dim() == 3);

    Mat w(2, 2, {0, 1, -1, 0});
    auto B = make_matrix_algebra(2, MatrixInvolution{w});
    CHECK(B->involution_type() == InvolutionType::Symplectic);
    CHECK(B->symmetric_subspace(+1).dim() == 1);

    CHECK_THROWS_AS(make_matrix_algebra(2, MatrixInvolution{Mat(2, 2, {1, 1, 0, 0})}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_matrix_algebra(2, MatrixInvolution{Mat(2, 2, {1, 1, 0, 1})}),
                    std::invalid_argument);
}

TEST_CASE("quaternion algebras") {
    auto H = make_quaternion(q(-1), q(-1));
    CHECK(H->degree() == 2);
    Vec i = H->basis_vec(1);
    CHECK(H->apply_involution(i) == vec_scale(q(-1), i));
    CHECK(H->apply_involution(H->unit()) == H->unit());
    CHECK(H->involution_type() == InvolutionType::Symplectic);
    CHECK(H->symmetric_subspace(+1).dim() == 1);
    CHECK(H->symmetric_subspace(-1).dim() == 3);

    // split case (1,1): Azumaya validation passes, Nrd(i) = -1
    auto S = make_quaternion(q(1), q(1));
    CHECK(S->nrd(S->basis_vec(1)) == q(-1));

    CHECK_THROWS_AS(make_quaternion(q(0), q(1), {}), std::invalid_argument);
    // non-pure conjugating quaternion rejected
    CHECK_THROWS_AS(make_quaternion(q(-1), q(-1), QuaternionInvolution{Vec{q(1), q(1), q(0), q(0)}}),
                    std::invalid_argument);

    // Int(i) gamma is orthogonal
    auto O = make_quaternion(q(-1), q(-1), QuaternionInvolution{Vec{q(0), q(1), q(0), q(0)}});
    CHECK(O->involution_type() == InvolutionType::Orthogonal);
    CHECK(O->symmetric_subspace(+1).dim() == 3);
}

namespace {
void build_tampered_quaternion() {
    auto H = make_quaternion(q(-1), q(-1));
    Algebra::Raw raw;
    raw.dim = 4;
    raw.labels = {"1", "i", "j", "k"};
    raw.unit = H->unit();
    raw.mul.assign(4, std::vector<SparseVec>(4));
    for (size_t a = 0; a < 4; ++a)
        for (size_t b = 0; b < 4; ++b) raw.mul[a][b] = H->structure(a, b);
    raw.mul[1][2].terms = {{3, q(-1)}};  // i*j = -k breaks associativity
    Algebra bad(std::move(raw));
    bad.validate();
}
}  // namespace

TEST_CASE("associativity catches bad tables") {
    CHECK_THROWS_AS(build_tampered_quaternion(), std::invalid_argument);
}

TEST_CASE("tensor products of algebras") {
    auto H = make_quaternion(q(-1), q(-1));
    auto K = Algebra::rationals();
    CHECK(tensor_algebras(H, K)->same_as(*H));

    auto HH = tensor_algebras(H, H);
    CHECK(HH->dim() == 16);
    CHECK(HH->degree() == 4);
    HH->validate();  // includes the anti-automorphism check on all 256 pairs
}

TEST_CASE("reduced trace") {
    auto M2 = make_matrix_algebra(2);
    CHECK(M2->trd(M2->basis_vec(0)) == q(1));  // e11

    auto H = make_quaternion(q(-1), q(-1));
    CHECK(H->trd(H->unit()) == q(2));
    for (size_t t = 1; t < 4; ++t) CHECK(H->trd(H->basis_vec(t)) == q(0));

    // Trd(sigma(x)) = Trd(x)
    for (size_t t = 0; t < 4; ++t)
        CHECK(H->trd(H->apply_involution(H->basis_vec(t))) == H->trd(H->basis_vec(t)));

    // Trd_{A(x)B}(x(x)y) = Trd(x)Trd(y)
    auto HH = tensor_algebras(H, H, false);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        Vec x = random_element(rng, 4), y = random_element(rng, 4);
        CHECK(HH->trd(kron_vec(x, y)) == H->trd(x) * H->trd(y));
    }

    // oracle: trace of the left-multiplication matrix divided by the degree
    for (int t = 0; t < 5; ++t) {
        Vec x = random_element(rng, 4);
        Mat L = H->left_mult(x);
        Q tr(0);
        for (size_t d = 0; d < 4; ++d) tr += L.at(d, d);
        CHECK(H->trd(x) == tr / q(2));
    }
}

TEST_CASE("reduced norm closed forms and ratio method") {
    auto H = make_quaternion(q(-1), q(-1));
    CHECK(H->nrd(H->basis_vec(1)) == q(1));

    std::mt19937_64 rng(17);
    auto M2 = make_matrix_algebra(2);
    for (int t = 0; t < 10; ++t) {
        Vec x = random_element(rng, 4);
        // closed form equals the x0^2+x1^2+x2^2+x3^2 oracle over (-1,-1)
        CHECK(H->nrd(x) == x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
        // and the determinant oracle over M2
        Vec y = random_element(rng, 4);
        CHECK(M2->nrd(y) == y[0] * y[3] - y[1] * y[2]);
    }

    // multiplicativity and Nrd(1)=1
    CHECK(H->nrd(H->unit()) == q(1));
    for (int t = 0; t < 20; ++t) {
        Vec x = random_element(rng, 4), y = random_element(rng, 4);
        CHECK(H->nrd(H->mul(x, y)) == H->nrd(x) * H->nrd(y));
    }

    // the s_n ratio method agrees with the closed forms
    for (int t = 0; t < 20; ++t) {
        Vec x = random_element(rng, 4);
        if (sgn(H->nrd(x)) == 0) continue;
        CHECK(reduced_norm_by_ratio(H, x) == H->nrd(x));
        CHECK(reduced_norm_by_ratio(M2, x) == M2->nrd(x));
    }
    auto M3 = make_matrix_algebra(3);
    for (int t = 0; t < 5; ++t) {
        Vec x = random_element(rng, 9, 2);
        CHECK(reduced_norm_by_ratio(M3, x) == M3->nrd(x));
    }
}

TEST_CASE("Goldman element of M2 is the sum of e_ij (x) e_ji") {
    auto M2 = make_matrix_algebra(2);
    GoldmanElement g = goldman_element(M2);
    Vec expected(16);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) {
            size_t p = i * 2 + j, r = j * 2 + i;
            expected[p * 4 + r] = 1;
        }
    CHECK(g.coords() == expected);

    // as an operator on column-space (x) column-space it is the switch
    Mat op = g.column_space_operator();
    Mat sw(4, 4);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) sw.at(j * 2 + i, i * 2 + j) = 1;
    CHECK(op == sw);
}

TEST_CASE("Goldman element properties") {
    for (auto A : {make_quaternion(q(-1), q(-1)), make_quaternion(q(-1), q(-3)),
                   make_quaternion(q(2), q(5))}) {
        GoldmanElement g = goldman_element(A);
        // sandwich(g) = Trd
        Mat s = g.sandwich_matrix();
        for (size_t k = 0; k < A->dim(); ++k) {
            Vec lhs = s.apply(A->basis_vec(k));
            CHECK(lhs == vec_scale(A->trd(A->basis_vec(k)), A->unit()));
        }
        // g^2 = 1 (x) 1
        CHECK(g.square_coords() == kron_vec(A->unit(), A->unit()));
        // (sigma (x) sigma)(g) = g
        CHECK(g.invol_coords() == g.coords());
    }
}

TEST_CASE("matrix-unit closed form agrees with the direct solve") {
    for (size_t n : {2, 3}) {
        auto Mn = make_matrix_algebra(n);
        CHECK(goldman_matrix_units(Mn).coords() == goldman_element(Mn).coords());
    }
}

TEST_CASE("Goldman element of tensor products via the middle swap") {
    auto M2 = make_matrix_algebra(2);
    auto T = tensor_algebras(M2, M2, false);
    GoldmanElement direct = goldman_element(T);
    GoldmanElement fast = goldman_of_tensor(M2, M2);
    CHECK(direct.coords() == fast.coords());

    auto H = make_quaternion(q(-1), q(-1));
    auto K = Algebra::rationals();
    GoldmanElement gHK = goldman_of_tensor(H, K);
    CHECK(gHK.coords() == goldman_element(H).coords());

    auto HH = tensor_algebras(H, H, false);
    GoldmanElement gHH = goldman_of_tensor(H, H);
    Mat sw = gHH.sandwich_matrix();
    for (size_t k = 0; k < 16; ++k) {
        Vec lhs = sw.apply(HH->basis_vec(k));
        CHECK(lhs == vec_scale(HH->trd(HH->basis_vec(k)), HH->unit()));
    }
    CHECK(gHH.coords() == goldman_element(HH).coords());
}

TEST_CASE("sigma signature") {
    auto H = make_quaternion(q(-1), q(-1));          // symplectic
    auto O = make_matrix_algebra(2);                 // orthogonal
    Perm swap = Perm::transposition(2, 0, 1);
    Perm cyc(3);
    cyc.img = {1, 2, 0};
    CHECK(sigma_signature(*O, swap) == 1);
    CHECK(sigma_signature(*O, cyc) == 1);
    CHECK(sigma_signature(*H, swap) == -1);
    CHECK(sigma_signature(*H, cyc) == 1);
}

TEST_CASE("symmetric subspaces split the algebra") {
    for (auto A : {make_quaternion(q(-1), q(-1)), make_quaternion(q(2), q(5)),
                   make_matrix_algebra(3)}) {
        size_t p = A->symmetric_subspace(+1).dim();
        size_t m = A->symmetric_subspace(-1).dim();
        CHECK(p + m == A->dim());
    }
    auto H = make_quaternion(q(-1), q(-1));
    Subspace plus = H->symmetric_subspace(+1);
    CHECK(plus.contains(H->unit()));
    Subspace minus = H->symmetric_subspace(-1);
    for (size_t t = 1; t < 4; ++t) CHECK(minus.contains(H->basis_vec(t)));
}

#include "doctest.h"

#include "qalt/qform.hpp"

#include <random>

using namespace qalt;

namespace {

DiagonalFormQ dform(std::initializer_list<long> entries) {
    DiagonalFormQ f;
    for (long e : entries) f.entries.push_back(q(e));
    return f;
}

Mat gram_of(const DiagonalFormQ& f) {
    Mat g(f.dim(), f.dim());
    for (size_t i = 0; i < f.dim(); ++i) g.at(i, i) = f.entries[i];
    return g;
}

// brute 2-adic solubility of z^2 = a x^2 + b y^2 for odd a, b: a primitive
// solution exists iff one exists mod 8
bool soluble_mod8(long a, long b) {
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y)
            for (int z = 0; z < 8; ++z) {
                if (x % 2 == 0 && y % 2 == 0 && z % 2 == 0) continue;
                if (((z * z - a * x * x - b * y * y) % 8 + 8) % 8 == 0) return true;
            }
    return false;
}

}  // namespace

TEST_CASE("square classes") {
    CHECK(square_class(q(4)) == 1);
    CHECK(square_class(q(-8, 2)) == -1);
    CHECK(square_class(q(18)) == 2);
    CHECK(square_class(q(1, 3)) == 3);
    CHECK(square_class(q(-50, 27)) == -6);
    CHECK_THROWS_AS(square_class(q(0)), std::invalid_argument);
}

TEST_CASE("hilbert symbol examples") {
    CHECK(hilbert_symbol(q(-1), q(-1), 0) == -1);  // no real solution of z^2+x^2+y^2=0
    CHECK(hilbert_symbol(q(1), q(7), 5) == 1);
    CHECK(hilbert_symbol(q(-1), q(-1), 2) == -1);
    CHECK_THROWS_AS(hilbert_symbol(q(3), q(5), 15), std::invalid_argument);
    CHECK_THROWS_AS(hilbert_symbol(q(0), q(5), 3), std::invalid_argument);
}

TEST_CASE("2-adic symbol against mod-8 solubility for odd entries") {
    for (long a : {1, 3, 5, 7, -1, -3, -5, -7})
        for (long b : {1, 3, 5, 7, -1, -3, -5, -7})
            CHECK((hilbert_symbol(q(a), q(b), 2) == 1) == soluble_mod8(a, b));
}

TEST_CASE("symbol is symmetric and bimultiplicative") {
    std::mt19937_64 rng(8);
    std::vector<long> pool{1, -1, 2, 3, 5, -6, 7, 10, -15, 21};
    std::vector<long long> places{0, 2, 3, 5, 7};
    for (int t = 0; t < 40; ++t) {
        Q a = q(pool[rng() % pool.size()]);
        Q b = q(pool[rng() % pool.size()]);
        Q c = q(pool[rng() % pool.size()]);
        long long p = places[rng() % places.size()];
        CHECK(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p));
        CHECK(hilbert_symbol(a * c, b, p) == hilbert_symbol(a, b, p) * hilbert_symbol(c, b, p));
    }
}

TEST_CASE("hilbert reciprocity on random pairs") {
    std::mt19937_64 rng(2718);
    for (int t = 0; t < 50; ++t) {
        Q a = q((long)(rng() % 199) - 99, (long)(rng() % 30) + 1);
        Q b = q((long)(rng() % 199) - 99, (long)(rng() % 30) + 1);
        if (sgn(a) == 0 || sgn(b) == 0) continue;
        // product over the real place, 2, and all odd primes dividing the
        // square-free parts
        std::vector<long long> places{0, 2};
        for (Q v : {a, b}) {
            long long s = square_class(v);
            long long m = s < 0 ? -s : s;
            if (m % 2 == 0) m /= 2;
            for (long long p = 3; p * p <= m; p += 2)
                while (m % p == 0) {
                    places.push_back(p);
                    m /= p;
                }
            if (m > 2) places.push_back(m);
        }
        std::sort(places.begin(), places.end());
        places.erase(std::unique(places.begin(), places.end()), places.end());
        int prod = 1;
        for (long long p : places) prod *= hilbert_symbol(a, b, p);
        CHECK(prod == 1);
    }
}

TEST_CASE("diagonalization") {
    DiagonalFormQ d = dform({1, 2, 3});
    DiagonalFormQ same = diagonalize(gram_of(d));
    CHECK(same.entries == d.entries);

    // hyperbolic plane: [[0,1],[1,0]] ~ <1,-1> up to squares
    DiagonalFormQ h = diagonalize(Mat(2, 2, {0, 1, 1, 0}));
    CHECK(is_isometric(h, dform({1, -1})));

    CHECK_THROWS_AS(diagonalize(Mat(2, 2, {1, 0, 0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(diagonalize(Mat(2, 2, {0, 1, 0, 0})), std::invalid_argument);
}

TEST_CASE("invariants are congruence invariants") {
    std::mt19937_64 rng(77);
    WittInvariants base = invariants(dform({1, 2, 3}));
    Mat g = gram_of(dform({1, 2, 3}));
    for (int t = 0; t < 20; ++t) {
        // random unimodular change of basis
        Mat s = Mat::identity(3);
        for (int k = 0; k < 4; ++k) {
            size_t i = rng() % 3, j = rng() % 3;
            if (i == j) continue;
            Q f = q((long)(rng() % 5) - 2);
            for (size_t c = 0; c < 3; ++c) s.at(i, c) += f * s.at(j, c);
        }
        Mat scr = s.transpose() * g * s;
        CHECK(invariants(diagonalize(scr)) == base);
    }
}

TEST_CASE("witt invariants examples") {
    WittInvariants w = invariants(dform({1, 1, 1, 1}));
    CHECK(w.dim == 4);
    CHECK(w.det == 1);
    CHECK(w.hasse_minus.empty());
    CHECK(w.signature == std::pair<size_t, size_t>{4, 0});

    CHECK(invariants(dform({2, 2, 2, 2})) == w);

    WittInvariants m = invariants(dform({-1, -1}));
    CHECK(m.det == 1);
    CHECK(m.signature == std::pair<size_t, size_t>{0, 2});
    CHECK(m.hasse_minus == std::vector<long long>{-1, 2});
}

TEST_CASE("isometry decisions") {
    CHECK(is_isometric(dform({1, 1}), dform({2, 2})));
    CHECK(!is_isometric(dform({1, 1}), dform({1, -1})));
    CHECK(is_isometric(dform({1, -1}), dform({2, -2})));
    CHECK(is_isometric(dform({1, -1}), dform({3, -27})));
}

TEST_CASE("invariant serialization is canonical") {
    CHECK(invariants(dform({-1, -1})).to_string() == "dim=2 det=1 hasse[inf,2] sig=(0,2)");
}

#pragma once

#include "qalt/rational.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace qalt {

// Permutation of {0,...,n-1} in one-line notation: img[i] is the image of i.
struct Perm {
    std::vector<size_t> img;

    explicit Perm(size_t n = 0);
    static Perm identity(size_t n);
    static Perm transposition(size_t n, size_t i, size_t j);

    size_t size() const { return img.size(); }
    size_t operator()(size_t i) const { return img[i]; }

    // (a * b)(i) = a(b(i)): b acts first.
    Perm operator*(const Perm& o) const;
    Perm inverse() const;
    bool operator==(const Perm& o) const { return img == o.img; }
    bool operator<(const Perm& o) const { return img < o.img; }

    // Sign by inversion count.
    int sign() const;
    bool is_identity() const;

    // Factorization into adjacent transpositions (i, i+1), listed so that the
    // product of transposition(a) over the list, applied left to right as
    // "rightmost acts first", recovers the permutation:
    //   perm = t[0] * t[1] * ... * t[k-1].
    std::vector<size_t> adjacent_factorization() const;
};

// All elements of S_n (n! of them), identity first; deterministic order.
std::vector<Perm> symmetric_group(size_t n);

// The (p,q)-shuffles in S_{p+q}: permutations increasing on {0..p-1} and on
// {p..p+q-1}.
std::vector<Perm> shuffles(size_t p, size_t q);

// Shuffles of a composition d = d_1 + ... + d_r.
std::vector<Perm> shuffles(const std::vector<size_t>& parts);

// Element of the rational group algebra of S_n; used to check the
// antisymmetrizer and shuffle identities at the combinatorial level before
// they are trusted in matrix form.
class SymAlg {
public:
    explicit SymAlg(size_t n) : n_(n) {}
    static SymAlg unit(size_t n);
    static SymAlg of(const Perm& p, const Q& c = Q(1));
    // alt(Y) = sum over Y of sign(g) * g.
    static SymAlg alternating_sum(const std::vector<Perm>& set);
    // s_n = alt(S_n).
    static SymAlg antisymmetrizer(size_t n);
    // sh over a composition of n.
    static SymAlg shuffle_element(const std::vector<size_t>& parts);
    // a otimes b in K[S_{|a|+|b|}] via block embedding.
    static SymAlg block_tensor(const SymAlg& a, const SymAlg& b);

    size_t degree() const { return n_; }
    SymAlg operator*(const SymAlg& o) const;
    SymAlg operator+(const SymAlg& o) const;
    SymAlg scaled(const Q& c) const;
    bool operator==(const SymAlg& o) const;

    const std::map<Perm, Q>& terms() const { return terms_; }

private:
    size_t n_;
    std::map<Perm, Q> terms_;  // zero coefficients pruned
};

}  // namespace qalt

#include "qalt/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qalt {

Perm::Perm(size_t n) : img(n) { std::iota(img.begin(), img.end(), size_t{0}); }

Perm Perm::identity(size_t n) { return Perm(n); }

Perm Perm::transposition(size_t n, size_t i, size_t j) {
    if (i >= n || j >= n) throw std::invalid_argument("transposition out of range");
    Perm p(n);
    std::swap(p.img[i], p.img[j]);
    return p;
}

Perm Perm::operator*(const Perm& o) const {
    if (size() != o.size()) throw std::invalid_argument("permutation size mismatch");
    Perm r(size());
    for (size_t i = 0; i < size(); ++i) r.img[i] = img[o.img[i]];
    return r;
}

Perm Perm::inverse() const {
    Perm r(size());
    for (size_t i = 0; i < size(); ++i) r.img[img[i]] = i;
    return r;
}

int Perm::sign() const {
    int inv = 0;
    for (size_t i = 0; i < size(); ++i)
        for (size_t j = i + 1; j < size(); ++j)
            if (img[i] > img[j]) ++inv;
    return (inv % 2 == 0) ? 1 : -1;
}

bool Perm::is_identity() const {
    for (size_t i = 0; i < size(); ++i)
        if (img[i] != i) return false;
    return true;
}

std::vector<size_t> Perm::adjacent_factorization() const {
    // Bubble-sort the one-line word back to the identity; the recorded swaps,
    // read in reverse, build the permutation from adjacent transpositions.
    std::vector<size_t> word = img;
    std::vector<size_t> swaps;
    bool moved = true;
    while (moved) {
        moved = false;
        for (size_t i = 0; i + 1 < word.size(); ++i) {
            if (word[i] > word[i + 1]) {
                std::swap(word[i], word[i + 1]);
                swaps.push_back(i);
                moved = true;
            }
        }
    }
    std::reverse(swaps.begin(), swaps.end());
    return swaps;
}

std::vector<Perm> symmetric_group(size_t n) {
    std::vector<size_t> base(n);
    std::iota(base.begin(), base.end(), size_t{0});
    std::vector<Perm> out;
    do {
        Perm p(n);
        p.img = base;
        out.push_back(p);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

std::vector<Perm> shuffles(size_t p, size_t q) { return shuffles(std::vector<size_t>{p, q}); }

std::vector<Perm> shuffles(const std::vector<size_t>& parts) {
    size_t n = 0;
    for (size_t d : parts) n += d;
    std::vector<Perm> out;
    for (const Perm& g : symmetric_group(n)) {
        bool ok = true;
        size_t start = 0;
        for (size_t d : parts) {
            for (size_t i = start; i + 1 < start + d && ok; ++i)
                if (g.img[i] > g.img[i + 1]) ok = false;
            start += d;
            if (!ok) break;
        }
        if (ok) out.push_back(g);
    }
    return out;
}

SymAlg SymAlg::unit(size_t n) { return of(Perm::identity(n)); }

SymAlg SymAlg::of(const Perm& p, const Q& c) {
    SymAlg a(p.size());
    if (sgn(c) != 0) a.terms_[p] = c;
    return a;
}

SymAlg SymAlg::alternating_sum(const std::vector<Perm>& set) {
    if (set.empty()) throw std::invalid_argument("alternating_sum of empty set");
    SymAlg a(set[0].size());
    for (const Perm& g : set) a.terms_[g] += Q(g.sign());
    return a;
}

SymAlg SymAlg::antisymmetrizer(size_t n) { return alternating_sum(symmetric_group(n)); }

SymAlg SymAlg::shuffle_element(const std::vector<size_t>& parts) {
    return alternating_sum(shuffles(parts));
}

SymAlg SymAlg::block_tensor(const SymAlg& a, const SymAlg& b) {
    SymAlg r(a.n_ + b.n_);
    for (const auto& [pa, ca] : a.terms_)
        for (const auto& [pb, cb] : b.terms_) {
            Perm p(a.n_ + b.n_);
            for (size_t i = 0; i < a.n_; ++i) p.img[i] = pa.img[i];
            for (size_t i = 0; i < b.n_; ++i) p.img[a.n_ + i] = a.n_ + pb.img[i];
            r.terms_[p] += ca * cb;
        }
    for (auto it = r.terms_.begin(); it != r.terms_.end();)
        it = sgn(it->second) == 0 ? r.terms_.erase(it) : std::next(it);
    return r;
}

SymAlg SymAlg::operator*(const SymAlg& o) const {
    if (n_ != o.n_) throw std::invalid_argument("group algebra degree mismatch");
    SymAlg r(n_);
    for (const auto& [pa, ca] : terms_)
        for (const auto& [pb, cb] : o.terms_) r.terms_[pa * pb] += ca * cb;
    for (auto it = r.terms_.begin(); it != r.terms_.end();)
        it = sgn(it->second) == 0 ? r.terms_.erase(it) : std::next(it);
    return r;
}

SymAlg SymAlg::operator+(const SymAlg& o) const {
    if (n_ != o.n_) throw std::invalid_argument("group algebra degree mismatch");
    SymAlg r = *this;
    for (const auto& [p, c] : o.terms_) {
        r.terms_[p] += c;
        if (sgn(r.terms_[p]) == 0) r.terms_.erase(p);
    }
    return r;
}

SymAlg SymAlg::scaled(const Q& c) const {
    SymAlg r(n_);
    if (sgn(c) == 0) return r;
    for (const auto& [p, x] : terms_) r.terms_[p] = c * x;
    return r;
}

bool SymAlg::operator==(const SymAlg& o) const { return n_ == o.n_ && terms_ == o.terms_; }

}  // namespace qalt

#include "qalt/qform.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qalt {

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Square-free part of a positive integer, by trial division with a
// Miller-Rabin backstop; throws above 2^63.
long long squarefree_part(mpz_class v) {
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > 63)
        throw std::invalid_argument("square-class computation: value exceeds 2^63");
    uint64_t n = mpz_get_ui(v.get_mpz_t());
    long long out = 1;
    for (uint64_t p = 2; p * p <= n && p < 20000000ULL; p = (p == 2) ? 3 : p + 2) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e & 1) out *= (long long)p;
    }
    if (n > 1) {
        uint64_t r = (uint64_t)sqrt((double)n);
        while (r * r > n) --r;
        while ((r + 1) * (r + 1) <= n) ++r;
        if (r * r == n) {
            // leftover square
        } else if (is_prime_u64(n)) {
            out *= (long long)n;
        } else {
            // leftover is a semiprime p*q with large factors; p != q since n
            // is not a square, so both appear with exponent 1
            throw std::invalid_argument("square-class computation: cannot factor residue " +
                                        std::to_string(n));
        }
    }
    return out;
}

int legendre(long long a, long long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    uint64_t r = powmod_u64((uint64_t)a, (uint64_t)((p - 1) / 2), (uint64_t)p);
    return r == 1 ? 1 : -1;
}

// v = p^k u with p not dividing u.
long long split_valuation(long long v, long long p, int& k) {
    k = 0;
    while (v % p == 0) {
        v /= p;
        ++k;
    }
    return v;
}

}  // namespace

long long square_class(const Q& r) {
    if (sgn(r) == 0) throw std::invalid_argument("square class of zero");
    mpz_class v = abs(r.get_num() * r.get_den());
    long long sf = squarefree_part(v);
    return sgn(r) < 0 ? -sf : sf;
}

int hilbert_symbol(const Q& a, const Q& b, long long place) {
    if (sgn(a) == 0 || sgn(b) == 0) throw std::invalid_argument("Hilbert symbol of zero");
    if (place == 0) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
    if (place < 2 || !is_prime_u64((uint64_t)place))
        throw std::invalid_argument("Hilbert symbol place must be a prime or 0 (real place)");
    long long sa = square_class(a), sb = square_class(b);
    if (place == 2) {
        int alpha, beta;
        long long u = split_valuation(sa, 2, alpha);
        long long v = split_valuation(sb, 2, beta);
        auto eps = [](long long x) { return (int)((((x - 1) / 2) % 2 + 2) % 2); };
        auto omega = [](long long x) { return (int)((((x * x - 1) / 8) % 2 + 2) % 2); };
        int e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        return (e % 2 == 0) ? 1 : -1;
    }
    int alpha, beta;
    long long u = split_valuation(sa, place, alpha);
    long long v = split_valuation(sb, place, beta);
    int s = 1;
    if ((alpha % 2) && (beta % 2) && legendre(-1, place) == -1) s = -s;
    if (beta % 2) s *= legendre(u, place);
    if (alpha % 2) s *= legendre(v, place);
    return s;
}

namespace {

// Rescale a diagonal entry by a square: clear the denominator and strip
// square factors with small primes. A congruence (scaling one basis vector),
// so the returned form stays congruent to the input.
Q strip_squares(const Q& x) {
    mpz_class num = x.get_num() * x.get_den();
    mpz_class a = abs(num);
    mpz_class out = sgn(num);
    for (unsigned long p = 2; mpz_class(p) * p <= a && p < 1000000; p = (p == 2) ? 3 : p + 2) {
        int e = 0;
        while (mpz_divisible_ui_p(a.get_mpz_t(), p)) {
            mpz_divexact_ui(a.get_mpz_t(), a.get_mpz_t(), p);
            ++e;
        }
        if (e % 2) out *= (long)p;
    }
    // leftover square detection
    mpz_class root;
    if (mpz_perfect_square_p(a.get_mpz_t()))
        ;  // drop the square
    else
        out *= a;
    return Q(out);
}

}  // namespace

DiagonalFormQ diagonalize(const Mat& gram) {
    const size_t n = gram.rows();
    if (gram.cols() != n) throw std::invalid_argument("Gram matrix must be square");
    if (!(gram.transpose() == gram)) throw std::invalid_argument("Gram matrix must be symmetric");
    Mat g = gram;
    std::vector<bool> done(n, false);
    DiagonalFormQ out;
    for (size_t step = 0; step < n; ++step) {
        // choose an active index with nonzero diagonal, smallest height
        size_t piv = n;
        size_t best_h = 0;
        for (size_t i = 0; i < n; ++i) {
            if (done[i] || sgn(g.at(i, i)) == 0) continue;
            size_t h = height_bits(g.at(i, i));
            if (piv == n || h < best_h) {
                piv = i;
                best_h = h;
            }
        }
        if (piv == n) {
            // all active diagonal entries vanish; bring a cross term in via
            // x -> x + y
            size_t bi = n, bj = n;
            for (size_t i = 0; i < n && bi == n; ++i) {
                if (done[i]) continue;
                for (size_t j = 0; j < n; ++j) {
                    if (done[j] || j == i) continue;
                    if (sgn(g.at(i, j)) != 0) {
                        bi = i;
                        bj = j;
                        break;
                    }
                }
            }
            if (bi == n) throw std::invalid_argument("degenerate Gram matrix");
            for (size_t t = 0; t < n; ++t) g.at(bi, t) += g.at(bj, t);
            for (size_t t = 0; t < n; ++t) g.at(t, bi) += g.at(t, bj);
            piv = bi;
        }
        Q d = g.at(piv, piv);
        out.entries.push_back(d);
        done[piv] = true;
        for (size_t i = 0; i < n; ++i) {
            if (done[i] || sgn(g.at(i, piv)) == 0) continue;
            Q f = g.at(i, piv) / d;
            for (size_t t = 0; t < n; ++t) g.at(i, t) -= f * g.at(piv, t);
            for (size_t t = 0; t < n; ++t) g.at(t, i) -= f * g.at(t, piv);
        }
        // keep the remaining block primitive: rescale each active basis
        // vector by the content of its row (a congruence)
        for (size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            mpz_class num_gcd(0), den_lcm(1);
            for (size_t t = 0; t < n; ++t) {
                if (done[t] || sgn(g.at(i, t)) == 0) continue;
                mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), g.at(i, t).get_num_mpz_t());
                mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), g.at(i, t).get_den_mpz_t());
            }
            if (num_gcd == 0) continue;
            Q c(den_lcm, num_gcd);
            c.canonicalize();
            if (c == 1) continue;
            for (size_t t = 0; t < n; ++t) {
                g.at(i, t) *= c;
                g.at(t, i) *= c;
            }
        }
    }
    for (Q& e : out.entries) e = strip_squares(e);
    return out;
}

WittInvariants invariants(const DiagonalFormQ& f) {
    WittInvariants w;
    w.dim = f.dim();
    long long det_acc = 1;
    std::set<long long> places{2};
    std::vector<long long> sq;
    for (const Q& a : f.entries) {
        if (sgn(a) == 0) throw std::invalid_argument("diagonal entry is zero");
        long long s = square_class(a);
        // reduce the determinant stepwise so the running product stays in
        // square-free range
        det_acc = square_class(Q((long)det_acc) * Q((long)s));
        sq.push_back(s);
        unsigned long long v = (unsigned long long)(s < 0 ? -s : s);
        for (unsigned long long p = 2; p * p <= v; p = (p == 2) ? 3 : p + 2)
            if (v % p == 0) {
                places.insert((long long)p);
                while (v % p == 0) v /= p;
            }
        if (v > 1) places.insert((long long)v);
        if (sgn(a) > 0)
            ++w.signature.first;
        else
            ++w.signature.second;
    }
    w.det = det_acc;
    for (long long p : places) {
        int s = 1;
        for (size_t i = 0; i < sq.size(); ++i)
            for (size_t j = i + 1; j < sq.size(); ++j) s *= hilbert_symbol(Q((long)sq[i]), Q((long)sq[j]), p);
        if (s == -1) w.hasse_minus.push_back(p);
    }
    // real place, encoded as -1; determined by the signature but recorded for
    // the serialized table
    {
        int s = 1;
        for (size_t i = 0; i < sq.size(); ++i)
            for (size_t j = i + 1; j < sq.size(); ++j) s *= hilbert_symbol(Q((long)sq[i]), Q((long)sq[j]), 0);
        if (s == -1) w.hasse_minus.insert(w.hasse_minus.begin(), -1);
    }
    return w;
}

bool is_isometric(const DiagonalFormQ& f, const DiagonalFormQ& g) {
    return invariants(f) == invariants(g);
}

std::string WittInvariants::to_string() const {
    std::ostringstream os;
    os << "dim=" << dim << " det=" << det << " hasse[";
    for (size_t i = 0; i < hasse_minus.size(); ++i) {
        if (i) os << ",";
        if (hasse_minus[i] == -1)
            os << "inf";
        else
            os << hasse_minus[i];
    }
    os << "] sig=(" << signature.first << "," << signature.second << ")";
    return os.str();
}

}  // namespace qalt

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qalt {

// Exact rational scalar. mpq_class keeps values canonical (reduced, positive
// denominator) as long as they are produced by arithmetic; constructors from
// num/den pairs must call canonicalize(), which q() below takes care of.
using Q = mpq_class;
using Vec = std::vector<Q>;

inline Q q(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Q r(num, den);
    r.canonicalize();
    return r;
}

inline Q q(const std::string& s) {
    Q r(s);
    r.canonicalize();
    return r;
}

// Height of a rational: max(|num|, den). Used for pivot selection, where
// small pivots limit coefficient growth during exact elimination.
inline size_t height_bits(const Q& x) {
    return mpz_sizeinbase(x.get_num_mpz_t(), 2) + mpz_sizeinbase(x.get_den_mpz_t(), 2);
}

inline bool is_zero(const Q& x) { return sgn(x) == 0; }

inline std::string to_string(const Q& x) { return x.get_str(); }

inline Q q_pow(const Q& x, unsigned e) {
    Q r(1);
    Q b = x;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Reduction of x modulo a word-sized prime, den must be invertible mod p.
// Returns false when the denominator vanishes mod p (caller picks a new prime).
bool mod_p(const Q& x, uint64_t p, uint64_t& out);

}  // namespace qalt

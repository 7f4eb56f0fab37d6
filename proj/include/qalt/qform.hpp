#pragma once

#include "qalt/algebra.hpp"
#include "qalt/matrix.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qalt {

// Nondegenerate diagonal quadratic form over Q.
struct DiagonalFormQ {
    std::vector<Q> entries;  // all nonzero

    size_t dim() const { return entries.size(); }
};

// Complete isometry invariants of a quadratic form over Q: dimension,
// determinant square class, Hasse symbols (only places with symbol -1 are
// stored), and the real signature. By Hasse-Minkowski these four decide
// isometry.
struct WittInvariants {
    size_t dim = 0;
    long long det = 1;                // square-free representative
    std::vector<long long> hasse_minus;  // sorted finite places with (.,.)=-1; 2 included, -1 encodes the real place
    std::pair<size_t, size_t> signature{0, 0};

    bool operator==(const WittInvariants& o) const {
        return dim == o.dim && det == o.det && hasse_minus == o.hasse_minus && signature == o.signature;
    }
    std::string to_string() const;
};

// Square-free integer representing r modulo nonzero rational squares.
long long square_class(const Q& r);

// Hilbert symbol (a,b)_place; place = 0 encodes the real place, otherwise a
// prime. Computed by the standard unit/parity formulas.
int hilbert_symbol(const Q& a, const Q& b, long long place);

// Congruent diagonal form of a symmetric nondegenerate Gram matrix
// (symmetric Gauss; x -> x+y basis change when the diagonal dies).
DiagonalFormQ diagonalize(const Mat& gram);

WittInvariants invariants(const DiagonalFormQ& f);
bool is_isometric(const DiagonalFormQ& f, const DiagonalFormQ& g);

// Forward declaration; defined in hermitian.hpp.
class HermForm;

// Trace form Trd(h(x,y)) of a hermitian form over a quaternion algebra with
// canonical involution, diagonalized; a complete isometry invariant for such
// forms (Jacobson).
DiagonalFormQ jacobson_transfer(const HermForm& h);

}  // namespace qalt

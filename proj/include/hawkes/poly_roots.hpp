#ifndef HAWKES_POLY_ROOTS_HPP
#define HAWKES_POLY_ROOTS_HPP

#include <vector>

namespace hawkes {

// Real roots of p(t) = sum_i coeffs[i] * t^i inside the open interval
// (lo, hi), sorted ascending and de-duplicated within 1e-9.
//
// Leading coefficients with |a_d| <= 1e-14 * max|a_i| are dropped before
// solving, so near-degenerate inputs collapse to their effective degree.
// Degrees 1 and 2 use closed forms; higher degrees use companion-matrix
// eigenvalues followed by Newton polishing. Eigenvalues whose imaginary
// part is below 1e-8 * max(1, |root|) count as real.
//
// Throws std::invalid_argument when all coefficients vanish and
// NumericalError when a returned root fails the backward-error check
// |p(root)| <= 1e-10 * sum_i |coeffs[i] * root^i|.
std::vector<double> poly_real_roots(const std::vector<double>& coeffs, double lo, double hi);

// Allocation-free variant for degree <= 3: reads coeffs[0..degree], writes
// the roots ascending into out and returns how many there are. Same trim,
// dedup, and residual rules as above, except an identically zero polynomial
// yields zero roots instead of throwing; per-candidate-event callers treat
// that as a constant. Throws std::invalid_argument for degree outside [0, 3].
int poly_real_roots_small(const double* coeffs, int degree, double lo, double hi, double out[3]);

}  // namespace hawkes

#endif

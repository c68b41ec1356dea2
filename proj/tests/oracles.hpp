#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library: only GMP and the standard library.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

// B_1..B_N of (x, y) on y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 by
// repeated point addition (chord and tangent) in exact rationals.
std::vector<mpz_class> eds_by_addition(const std::array<mpz_class, 5>& a, const mpq_class& x, const mpq_class& y,
                                       unsigned long N);

// Delta and c4 of a general Weierstrass equation, from the textbook b/c
// quantities.
std::pair<mpz_class, mpz_class> delta_c4(const std::array<mpz_class, 5>& a);

// B_n stripped of every prime dividing some B_m, m < n (B[i] = B_{i+1}).
mpz_class primitive_part(const std::vector<mpz_class>& B, unsigned long n);

// Primes p < bound dividing x.
std::vector<unsigned long> small_prime_factors(const mpz_class& x, unsigned long bound);

unsigned long vp(const mpz_class& x, unsigned long p);

// Resultant of two integer polynomials (low to high) as the determinant of
// the Sylvester matrix, by fraction-free elimination.
mpz_class sylvester_resultant(const std::vector<mpz_class>& f, const std::vector<mpz_class>& g);

// Minkowski constant in floating point.
long double minkowski(long double disc_abs, unsigned d, unsigned s);

}  // namespace oracle

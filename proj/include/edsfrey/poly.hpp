#pragma once

// Dense univariate polynomials over Z and Q, coefficients stored low to high.

#include "edsfrey/arith.hpp"

#include <utility>
#include <vector>

namespace edsfrey {

using ZPoly = std::vector<Integer>;
using QPoly = std::vector<Rational>;

namespace poly {

template <class P>
void trim(P& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

template <class P>
int degree(const P& p) {
    int d = static_cast<int>(p.size()) - 1;
    while (d >= 0 && p[static_cast<std::size_t>(d)] == 0) --d;
    return d;
}

QPoly to_q(const ZPoly& p);
// Multiplies by the lcm of denominators and removes content; sign of the
// leading coefficient is kept.
ZPoly primitive_part(const QPoly& p);

QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const Rational& c);
QPoly derivative(const QPoly& a);
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
QPoly monic_gcd(QPoly a, QPoly b);
Rational eval(const QPoly& p, const Rational& x);
Integer eval(const ZPoly& p, const Integer& x);

// Resultant via the Sylvester determinant.
Rational resultant(const QPoly& a, const QPoly& b);
// Discriminant of a polynomial of degree n with leading coefficient c:
// (-1)^{n(n-1)/2} Res(p, p') / c.
Rational discriminant(const QPoly& p);

bool is_squarefree(const QPoly& p);

// Number of distinct real roots in (lo, hi]; p must be squarefree.
int sturm_count(const QPoly& p, const Rational& lo, const Rational& hi);
// Total number of distinct real roots; p squarefree.
int real_root_count(const QPoly& p);
// Number of distinct real roots strictly greater than x; p squarefree.
int roots_above(const QPoly& p, const Rational& x);

// Integer roots of an integer polynomial, ascending, without multiplicity.
std::vector<Integer> integer_roots(const ZPoly& p);

// Cauchy bound: every complex root has |z| < bound.
Rational root_bound(const QPoly& p);

}  // namespace poly
}  // namespace edsfrey

#pragma once

// Dense exact linear algebra over Q, sized for field degrees up to a few dozen.

#include "edsfrey/arith.hpp"

#include <vector>

namespace edsfrey {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;  // row-major

QMatrix identity_matrix(std::size_t n);
QVector mat_vec(const QMatrix& a, const QVector& x);
QMatrix mat_mul(const QMatrix& a, const QMatrix& b);

Rational determinant(QMatrix a);
// Solves a x = b; throws precondition on a singular matrix.
QVector solve(QMatrix a, QVector b);
QMatrix inverse(const QMatrix& a);

// Characteristic polynomial det(x I - a), coefficients low to high (monic).
std::vector<Rational> charpoly(const QMatrix& a);

}  // namespace edsfrey

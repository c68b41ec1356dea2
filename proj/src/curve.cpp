#include "edsfrey/curve.hpp"

#include "edsfrey/error.hpp"

namespace edsfrey {

RationalPoint RationalPoint::affine(Rational x, Rational y) {
    RationalPoint p;
    p.infinity_ = false;
    x.canonicalize();
    y.canonicalize();
    p.x_ = std::move(x);
    p.y_ = std::move(y);
    return p;
}

WeierstrassModel::WeierstrassModel(const std::array<Integer, 5>& a)
    : a_(a), inv_(weierstrass_invariants(a[0], a[1], a[2], a[3], a[4])) {}

WeierstrassModel WeierstrassModel::create(const std::array<Integer, 5>& a) {
    WeierstrassModel m(a);
    if (m.inv_.delta == 0) fail(ErrorCode::singular_model, "singular model " + m.to_string());
    return m;
}

bool WeierstrassModel::contains(const RationalPoint& p) const {
    if (p.is_infinity()) return true;
    const Rational& x = p.x();
    const Rational& y = p.y();
    Rational lhs = y * y + a1() * x * y + a3() * y;
    Rational rhs = x * x * x + a2() * x * x + a4() * x + a6();
    return lhs == rhs;
}

std::string WeierstrassModel::to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < 5; ++i) {
        if (i) s += ",";
        s += edsfrey::to_string(a_[i]);
    }
    return s + "]";
}

bool ShortModel::contains(const Rational& x, const Rational& y) const {
    return y * y == x * x * x + a * x * x + b * x + c;
}

RationalPoint negate(const WeierstrassModel& m, const RationalPoint& p) {
    if (p.is_infinity()) return p;
    return RationalPoint::affine(p.x(), -p.y() - m.a1() * p.x() - m.a3());
}

namespace detail {

RationalPoint add_unchecked(const WeierstrassModel& m, const RationalPoint& p, const RationalPoint& q) {
    if (p.is_infinity()) return q;
    if (q.is_infinity()) return p;
    const Rational &x1 = p.x(), &y1 = p.y(), &x2 = q.x(), &y2 = q.y();
    Rational lambda, nu;
    if (x1 == x2) {
        Rational denom = y1 + y2 + m.a1() * x1 + m.a3();
        if (denom == 0) return RationalPoint::infinity();
        // Tangent: here y1 == y2, so denom = 2y1 + a1x1 + a3.
        lambda = (3 * x1 * x1 + 2 * m.a2() * x1 + m.a4() - m.a1() * y1) / denom;
        nu = (-x1 * x1 * x1 + m.a4() * x1 + 2 * m.a6() - m.a3() * y1) / denom;
    } else {
        Rational dx = x2 - x1;
        lambda = (y2 - y1) / dx;
        nu = (y1 * x2 - y2 * x1) / dx;
    }
    Rational x3 = lambda * lambda + m.a1() * lambda - m.a2() - x1 - x2;
    Rational y3 = -(lambda + m.a1()) * x3 - nu - m.a3();
    return RationalPoint::affine(std::move(x3), std::move(y3));
}

}  // namespace detail

RationalPoint add_points(const WeierstrassModel& m, const RationalPoint& p, const RationalPoint& q) {
    if (!m.contains(p) || !m.contains(q)) fail(ErrorCode::not_on_curve, "point not on " + m.to_string());
    return detail::add_unchecked(m, p, q);
}

RationalPoint scalar_multiply(const WeierstrassModel& m, const RationalPoint& p, unsigned long n) {
    if (!m.contains(p)) fail(ErrorCode::not_on_curve, "point not on " + m.to_string());
    if (n == 0) fail(ErrorCode::invalid_input, "multiplier must be positive");
    RationalPoint acc = RationalPoint::infinity();
    RationalPoint base = p;
    // Left-to-right double-and-add.
    int top = 63;
    while (((n >> top) & 1UL) == 0) --top;
    for (int bit = top; bit >= 0; --bit) {
        acc = detail::add_unchecked(m, acc, acc);
        if ((n >> bit) & 1UL) acc = detail::add_unchecked(m, acc, base);
    }
    return acc;
}

PointDecomposition decompose_point(const RationalPoint& q, unsigned long n) {
    if (q.is_infinity())
        fail(ErrorCode::torsion_point, "multiple " + std::to_string(n) + "P is the point at infinity");
    Integer B = isqrt_floor(q.x().get_den());
    if (B * B != q.x().get_den() || B * B * B != q.y().get_den())
        fail(ErrorCode::verification_failed, "denominators of nP are not of the form (B^2, B^3)");
    PointDecomposition d{q.x().get_num(), B, q.y().get_num(), n};
    if (gcd(d.B, d.A * d.C) != 1)
        fail(ErrorCode::verification_failed, "gcd(B, AC) != 1");
    return d;
}

PointDecomposition decompose(const WeierstrassModel& m, const RationalPoint& p, unsigned long n) {
    return decompose_point(scalar_multiply(m, p, n), n);
}

std::pair<ShortModel, RationalPoint> to_short_model(const WeierstrassModel& m, const RationalPoint& p) {
    if (!m.contains(p)) fail(ErrorCode::not_on_curve, "point not on " + m.to_string());
    ShortModel s{4 * m.a2() + m.a1() * m.a1(), 8 * (2 * m.a4() + m.a1() * m.a3()),
                 16 * (m.a3() * m.a3() + 4 * m.a6())};
    if (p.is_infinity()) return {s, p};
    Rational x = 4 * p.x();
    Rational y = 4 * (2 * p.y() + m.a1() * p.x() + m.a3());
    return {s, RationalPoint::affine(x, y)};
}

Integer discriminant(const WeierstrassModel& m) { return m.delta(); }

}  // namespace edsfrey

#pragma once

// Exact arithmetic on elliptic curves over Q given by integral Weierstrass
// models y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.

#include "edsfrey/arith.hpp"
#include "edsfrey/poly.hpp"

#include <array>
#include <string>
#include <utility>

namespace edsfrey {

// Standard invariants, generic over any commutative ring with integer scaling.
template <class T>
struct WeierstrassInvariants {
    T b2, b4, b6, b8, c4, c6, delta;
};

template <class T>
WeierstrassInvariants<T> weierstrass_invariants(const T& a1, const T& a2, const T& a3,
                                                const T& a4, const T& a6) {
    WeierstrassInvariants<T> w;
    w.b2 = a1 * a1 + a2 * 4;
    w.b4 = a4 * 2 + a1 * a3;
    w.b6 = a3 * a3 + a6 * 4;
    w.b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    w.c4 = w.b2 * w.b2 - w.b4 * 24;
    w.c6 = -(w.b2 * w.b2 * w.b2) + w.b2 * w.b4 * 36 - w.b6 * 216;
    w.delta = -(w.b2 * w.b2 * w.b8) - w.b4 * w.b4 * w.b4 * 8 - w.b6 * w.b6 * 27 + w.b2 * w.b4 * w.b6 * 9;
    return w;
}

class RationalPoint {
public:
    static RationalPoint infinity() { return RationalPoint(); }
    static RationalPoint affine(Rational x, Rational y);

    bool is_infinity() const { return infinity_; }
    const Rational& x() const { return x_; }
    const Rational& y() const { return y_; }

    bool operator==(const RationalPoint& o) const {
        return infinity_ == o.infinity_ && (infinity_ || (x_ == o.x_ && y_ == o.y_));
    }

private:
    RationalPoint() = default;
    bool infinity_ = true;
    Rational x_, y_;
};

class WeierstrassModel {
public:
    // Throws singular_model when the discriminant vanishes.
    static WeierstrassModel create(const std::array<Integer, 5>& a);

    const Integer& a1() const { return a_[0]; }
    const Integer& a2() const { return a_[1]; }
    const Integer& a3() const { return a_[2]; }
    const Integer& a4() const { return a_[3]; }
    const Integer& a6() const { return a_[4]; }
    const std::array<Integer, 5>& coefficients() const { return a_; }
    const WeierstrassInvariants<Integer>& invariants() const { return inv_; }
    const Integer& delta() const { return inv_.delta; }

    bool contains(const RationalPoint& p) const;
    // "[a1,a2,a3,a4,a6]"
    std::string to_string() const;

    bool operator==(const WeierstrassModel& o) const { return a_ == o.a_; }

private:
    explicit WeierstrassModel(const std::array<Integer, 5>& a);
    std::array<Integer, 5> a_;
    WeierstrassInvariants<Integer> inv_;
};

struct PointDecomposition {
    Integer A;
    Integer B;  // >= 1
    Integer C;
    unsigned long n = 1;
};

// y'^2 = x'^3 + a x'^2 + b x' + c, obtained by x' = 4x, y' = 4(2y + a1 x + a3).
struct ShortModel {
    Integer a, b, c;

    ZPoly cubic() const { return {c, b, a, Integer(1)}; }
    bool contains(const Rational& x, const Rational& y) const;
};

RationalPoint negate(const WeierstrassModel& m, const RationalPoint& p);
RationalPoint add_points(const WeierstrassModel& m, const RationalPoint& p, const RationalPoint& q);
RationalPoint scalar_multiply(const WeierstrassModel& m, const RationalPoint& p, unsigned long n);
PointDecomposition decompose(const WeierstrassModel& m, const RationalPoint& p, unsigned long n);
// Decomposition of an already computed affine multiple.
PointDecomposition decompose_point(const RationalPoint& q, unsigned long n);
std::pair<ShortModel, RationalPoint> to_short_model(const WeierstrassModel& m, const RationalPoint& p);
Integer discriminant(const WeierstrassModel& m);

namespace detail {
// Group law without the on-curve validation; callers guarantee membership.
RationalPoint add_unchecked(const WeierstrassModel& m, const RationalPoint& p, const RationalPoint& q);
}  // namespace detail

}  // namespace edsfrey

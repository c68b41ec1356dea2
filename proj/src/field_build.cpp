#include "edsfrey/field.hpp"

#include "edsfrey/error.hpp"

#include <algorithm>

namespace edsfrey {

namespace {

Integer coordinate_denominator(const AlgebraicNumber& a) {
    Integer d = 1;
    for (const auto& c : a.coords()) d = lcm(d, Integer(c.get_den()));
    return d;
}

// Returns sqrt(v) in F, or extends F by it. v must be nonzero.
AlgebraicNumber sqrt_or_adjoin(NumberField& F, const AlgebraicNumber& v, const std::string& name, bool& adjoined) {
    AlgebraicNumber w = F.embed(v);
    Integer c = coordinate_denominator(w);
    AlgebraicNumber scaled = w * Rational(c * c);
    if (auto r = sqrt_in_field(scaled)) {
        adjoined = false;
        return *r * make_rational(Integer(1), c);
    }
    F = F.adjoin_sqrt(scaled, name);
    adjoined = true;
    return F.generator(F.levels()) * make_rational(Integer(1), c);
}

}  // namespace

bool totally_real_by_signs(const ShortModel& sm, const Rational& xP) {
    QPoly g = poly::to_q(sm.cubic());
    if (!poly::is_squarefree(g)) fail(ErrorCode::invalid_input, "cubic is not squarefree");
    if (poly::real_root_count(g) != 3) return false;
    return poly::roots_above(g, xP) == 0 && poly::eval(g, xP) != 0;
}

FieldTower build_tower(const ShortModel& sm, const Rational& xP, const Rational& yP) {
    const ZPoly cubic = sm.cubic();
    if (!poly::is_squarefree(poly::to_q(cubic))) fail(ErrorCode::invalid_input, "cubic is not squarefree");
    if (!sm.contains(xP, yP)) fail(ErrorCode::not_on_curve, "point is not on the short model");
    if (yP == 0) fail(ErrorCode::torsion_point, "point of order 2 has no descent image");

    FieldTower t;
    t.short_model = sm;
    t.xP = xP;
    t.yP = yP;
    const Integer& a = sm.a;
    const Integer& b = sm.b;
    NumberField Q = NumberField::rationals();
    NumberField K = Q;
    std::array<AlgebraicNumber, 3> theta;

    auto roots = poly::integer_roots(cubic);
    // Fixed order for rational roots: by absolute value, positive first.
    std::sort(roots.begin(), roots.end(), [](const Integer& x, const Integer& y) {
        if (abs(x) != abs(y)) return abs(x) < abs(y);
        return x > y;
    });
    if (roots.size() == 3) {
        for (int i = 0; i < 3; ++i) theta[i] = Q.from_rational(Rational(roots[i]));
    } else if (roots.size() == 1) {
        const Integer& r = roots[0];
        Integer u = a + r, v = b + a * r + r * r;
        Integer D = u * u - 4 * v;
        K = Q.adjoin_sqrt(Q.from_rational(Rational(D)), "sqrt(" + to_string(D) + ")");
        AlgebraicNumber s = K.generator(1);
        Rational half = make_rational(Integer(1), Integer(2));
        theta = {K.from_rational(Rational(r)), (s - Rational(u)) * half, (-s - Rational(u)) * half};
    } else if (roots.empty()) {
        NumberField K1 = Q.adjoin_root(cubic, "theta1");
        AlgebraicNumber t1 = K1.generator(1);
        AlgebraicNumber u = t1 + Rational(a);
        AlgebraicNumber v = t1 * t1 + t1 * Rational(a) + Rational(b);
        AlgebraicNumber D2 = u * u - v * 4;
        Rational half = make_rational(Integer(1), Integer(2));
        K = K1;
        if (auto s = sqrt_in_field(D2)) {
            theta = {t1, (*s - u) * half, (-*s - u) * half};
        } else {
            K = K1.adjoin_sqrt(D2, "sqrt(disc2)");
            AlgebraicNumber s2 = K.generator(2);
            theta = {K.embed(t1), (s2 - u) * half, (-s2 - u) * half};
        }
    } else {
        fail(ErrorCode::verification_failed, "cubic with exactly two rational roots");
    }
    for (auto& th : theta) th = K.embed(th);
    // Vieta and root checks.
    if (theta[0] + theta[1] + theta[2] != K.from_rational(Rational(-a)) ||
        theta[0] * theta[1] * theta[2] != K.from_rational(Rational(-sm.c)))
        fail(ErrorCode::verification_failed, "roots of the cubic fail Vieta's relations");
    for (const auto& th : theta)
        if (!(th * th * th + th * th * Rational(a) + th * Rational(b) + Rational(sm.c)).is_zero())
            fail(ErrorCode::verification_failed, "theta is not a root of the cubic");
    t.K = K;

    // s^2 (xP - theta_i) is integral once s^2 absorbs the denominator of xP.
    Integer den = xP.get_den();
    t.scale = exact_root(den, 2).value_or(den);
    Rational s2 = Rational(t.scale * t.scale);

    NumberField L = K;
    std::array<AlgebraicNumber, 3> root;
    for (int i = 0; i < 2; ++i) {
        AlgebraicNumber delta = (K.from_rational(xP) - theta[i]) * s2;
        bool adj = false;
        root[i] = sqrt_or_adjoin(L, delta, "sqrt(delta" + std::to_string(i + 1) + ")", adj);
        root[i] = root[i] * make_rational(Integer(1), t.scale);
        t.adjoined[i] = adj;
    }
    for (auto& r : root) r = r.valid() ? L.embed(r) : r;
    root[2] = L.from_rational(yP) / (root[0] * root[1]);
    for (int i = 0; i < 3; ++i) {
        t.theta[i] = L.embed(theta[i]);
        t.root[i] = L.embed(root[i]);
        if (t.root[i] * t.root[i] != L.from_rational(xP) - t.theta[i])
            fail(ErrorCode::verification_failed, "square-root generator does not square to xP - theta");
    }
    t.L = L;
    t.totally_real = L.totally_real();
    return t;
}

}  // namespace edsfrey

#include "doctest.h"

#include "edsfrey/error.hpp"
#include "edsfrey/field.hpp"

#include "fixtures.hpp"

#include <cmath>
#include <random>

using namespace edsfrey;

namespace {

AlgebraicNumber random_element(const NumberField& F, std::mt19937_64& rng, long h = 3) {
    QVector v(F.degree());
    for (auto& c : v) c = Rational(static_cast<long>(rng() % (2 * h + 1)) - h);
    return AlgebraicNumber(F, v);
}

const FieldTower& tower_37a() {
    static const FieldTower t = [] {
        auto c = fixtures::curve("37a");
        auto [sm, P] = to_short_model(c.model(), c.point());
        return build_tower(sm, P.x(), P.y());
    }();
    return t;
}

NumberField sqrt5() {
    NumberField Q = NumberField::rationals();
    return Q.adjoin_sqrt(Q.from_rational(5), "sqrt5");
}

}  // namespace

TEST_SUITE("field") {

TEST_CASE("quadratic norms follow a^2 - 5 b^2") {
    NumberField F = sqrt5();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        long a = static_cast<long>(rng() % 41) - 20, b = static_cast<long>(rng() % 41) - 20;
        AlgebraicNumber x(F, {Rational(a), Rational(b)});
        CHECK(x.norm() == Rational(a * a - 5 * b * b));
        CHECK(x.norm_resultant() == x.norm());
        CHECK(x.trace() == Rational(2 * a));
    }
}

TEST_CASE("ring axioms and multiplicativity of the norm in a degree-24 tower") {
    const NumberField& L = tower_37a().L;
    REQUIRE(L.degree() == 24);
    std::mt19937_64 rng(13);
    for (int i = 0; i < 4; ++i) {
        auto a = random_element(L, rng), b = random_element(L, rng), c = random_element(L, rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        if (!a.is_zero()) CHECK(a * a.inverse() == L.one());
        CHECK((a * b).norm() == a.norm() * b.norm());
    }
    auto a = random_element(L, rng);
    CHECK(a.norm() == a.norm_resultant());
}

TEST_CASE("square roots recover squares and reject non-squares") {
    std::mt19937_64 rng(19);
    for (const NumberField& F : {sqrt5(), tower_37a().K}) {
        for (int i = 0; i < 5; ++i) {
            auto a = random_element(F, rng, 5);
            if (a.is_zero()) continue;
            auto r = sqrt_in_field(a * a);
            REQUIRE(r.has_value());
            CHECK((*r == a || *r == -a));
        }
    }
    NumberField F = sqrt5();
    CHECK_FALSE(sqrt_in_field(F.from_rational(2)).has_value());
    CHECK_FALSE(sqrt_in_field(F.generator(1)).has_value());
    CHECK(sqrt_in_field(F.from_rational(make_rational(9, 4))) == F.from_rational(make_rational(3, 2)));
}

TEST_CASE("adjoining a reducible polynomial fails") {
    NumberField Q = NumberField::rationals();
    CHECK_THROWS_AS(Q.adjoin_root(ZPoly{-6, 11, -6, 1}, "t"), Error);
    CHECK_THROWS_AS(Q.adjoin_sqrt(Q.from_rational(49), "t"), Error);
    CHECK_THROWS_AS(Q.adjoin_root(ZPoly{4, 0, 0, 0, 1}, "t"), Error);   // (x^2+2x+2)(x^2-2x+2)
}

TEST_CASE("prime splitting") {
    NumberField F = sqrt5();
    auto above11 = split_prime(F, 11);
    REQUIRE(above11.size() == 2);
    for (const auto& q : above11) {
        CHECK(q.norm == 11);
        CHECK(q.valuation(F.from_rational(11)) == 1);
        CHECK(q.valuation(F.from_rational(121 * 3)) == 2);
    }
    auto above7 = split_prime(F, 7);
    REQUIRE(above7.size() == 1);
    CHECK(above7[0].norm == 49);
    CHECK(above7[0].label == "49.1");
    CHECK_THROWS_AS(split_prime(F, 2), Error);   // 2 | disc_multiple = 20

    const NumberField& L = tower_37a().L;
    std::mt19937_64 rng(29);
    for (long p : {5L, 7L, 11L, 13L}) {
        auto ideals = split_prime(L, p);
        Integer prod = 1;
        unsigned fsum = 0;
        for (const auto& q : ideals) {
            prod *= q.norm;
            fsum += q.e * q.f;
        }
        CHECK(fsum == L.degree());
        CHECK(prod == ipow(Integer(p), L.degree()));
        auto a = random_element(L, rng), b = random_element(L, rng);
        if (a.is_zero() || b.is_zero()) continue;
        for (const auto& q : ideals) CHECK(q.valuation(a * b) == q.valuation(a) + q.valuation(b));
    }
}

TEST_CASE("Minkowski constant brackets the floating-point value") {
    for (auto [D, d, s] : std::vector<std::tuple<long, unsigned, unsigned>>{{5, 2, 0}, {23, 3, 1}, {1492, 4, 2}, {20, 2, 0}}) {
        auto mb = minkowski_bound(Integer(D), d, s);
        long double M = oracle::minkowski(D, d, s);
        CHECK(mb.m_squared_lower.get_d() <= static_cast<double>(M * M) * (1 + 1e-12));
        CHECK(mb.m_squared_upper.get_d() >= static_cast<double>(M * M) * (1 - 1e-12));
        CHECK(mb.floor_upper == Integer(static_cast<long>(std::floor(M - 1e-12))));
        CHECK(std::abs(mb.approx - static_cast<double>(M)) < 1e-9);
    }
    // The squared Minkowski constant of Q(sqrt 5) is 5/4.
    CHECK(minkowski_bound(Integer(5), 2, 0).m_squared_upper == make_rational(5, 4));
    CHECK(minkowski_bound(Integer(5), 2, 0).floor_upper == 1);
    auto mk = minkowski_T(sqrt5());
    REQUIRE(mk.T.size() == 1);
    CHECK(mk.T[0].label == "2.unsafe");
}

TEST_CASE("towers") {
    auto c = fixtures::curve("25x");
    auto [sm, P] = to_short_model(c.model(), c.point());
    FieldTower t = build_tower(sm, P.x(), P.y());
    CHECK(t.degree() == 1);
    CHECK(t.totally_real);
    CHECK(t.theta[0].rational_value() == 0);
    CHECK(t.theta[1].rational_value() == 20);
    CHECK(t.theta[2].rational_value() == -20);

    const FieldTower& big = tower_37a();
    CHECK(big.K.degree() == 6);
    CHECK_FALSE(big.totally_real);
    CHECK(big.totally_real == totally_real_by_signs(big.short_model, big.xP));
    for (int i = 0; i < 3; ++i) CHECK(big.root[i] * big.root[i] == big.L.from_rational(big.xP) - big.theta[i]);

    auto c37 = fixtures::curve("37a");
    auto [sm37, Q] = to_short_model(c37.model(), RationalPoint::affine(1, 0));
    FieldTower t2 = build_tower(sm37, Q.x(), Q.y());
    CHECK(t2.degree() == 6);
    CHECK(t2.totally_real);
    CHECK(totally_real_by_signs(sm37, Q.x()));
}

}  // TEST_SUITE

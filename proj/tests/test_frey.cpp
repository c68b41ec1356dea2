#include "doctest.h"

#include "edsfrey/error.hpp"
#include "edsfrey/frey.hpp"

#include "fixtures.hpp"

#include <random>

using namespace edsfrey;

namespace {

struct Setup {
    CurveInput input;
    WeierstrassModel model;
    EDSequence seq;
    FieldTower tower;

    explicit Setup(const std::string& name)
        : input(fixtures::curve(name)), model(input.model()), seq(model, input.point()) {
        auto [sm, P] = to_short_model(model, input.point());
        tower = build_tower(sm, P.x(), P.y());
    }
};

std::set<Rational> abs_values(const DescentTriple& t) {
    std::set<Rational> s;
    for (const auto& e : t.eps) s.insert(abs(e.rational_value()));
    return s;
}

}  // namespace

TEST_SUITE("frey") {

TEST_CASE("descent on y^2 = x^3 - 25x") {
    Setup s("25x");
    auto t = descent_triple(s.tower, s.seq, 1);
    CHECK(t.A == 1681);
    CHECK(t.B == 12);
    CHECK(abs_values(t) == std::set<Rational>{82, 62, 98});
    for (unsigned long n = 1; n <= 5; ++n) {
        auto tn = descent_triple(s.tower, s.seq, n);
        for (int i = 0; i < 3; ++i)
            CHECK(tn.eps[i] * tn.eps[i] == s.tower.L.from_rational(Rational(4 * tn.A)) - s.tower.theta[i] * Rational(tn.B * tn.B));
        CHECK(gcd_support_check(s.tower, s.model, tn).passed);
    }
}

TEST_CASE("a tampered triple is rejected") {
    Setup s("25x");
    auto t = descent_triple(s.tower, s.seq, 1);
    t.eps[1] = t.eps[1] + Rational(2);
    CHECK_THROWS_AS(check_descent_identity(s.tower, t), Error);
}

TEST_CASE("support sets for y^2 = x^3 - 25x") {
    Setup s("25x");
    auto sup = build_support(s.tower, s.model, s.seq, 2);
    std::vector<std::string> labels;
    for (const auto& q : sup.S) labels.push_back(q.label);
    CHECK(labels == std::vector<std::string>{"2.1", "5.1"});
    CHECK(sup.T.empty());
    CHECK(sup.T_rational == std::set<Integer>{2, 5});
    CHECK(sup.certificate.p == 11);
    CHECK(sup.frak_p.label == "11.1");
    CHECK_FALSE(sup.in_S(sup.frak_p));
    for (const auto& q : sup.T_rational) CHECK(gcd(q, sup.certificate.p) == 1);
}

TEST_CASE("sign normalization and scaling") {
    Setup s("25x");
    auto t = descent_triple(s.tower, s.seq, 1);
    NumberField Q = NumberField::rationals();
    for (auto [p, want] : std::vector<std::pair<long, std::array<long, 3>>>{{5, {5, -9, 4}}, {3, {9, -10, 1}}}) {
        CAPTURE(p);
        auto ideal = split_prime(Q, p).front();
        auto n = normalize_signs(t, ideal);
        CHECK(ideal.divides(n.eps[0] - n.eps[1]));
        CHECK(ideal.divides(n.eps[1] + n.eps[2]));
        auto sc = scale_integral(n, {});
        for (int i = 0; i < 3; ++i) CHECK(sc.z[i].rational_value() == want[i]);
        CHECK(sc.method == "rational-gcd");
    }
    // 7 divides none of the differences.
    CHECK_THROWS_AS(normalize_signs(t, split_prime(Q, 7).front()), Error);
}

TEST_CASE("Frey invariants against the general formulas") {
    NumberField Q = NumberField::rationals();
    auto F = build_frey(Q.from_rational(1), Q.from_rational(1), Q.from_rational(-2));
    CHECK(F.delta_F.rational_value() == 64);
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        long z1 = static_cast<long>(rng() % 2001) - 1000, z2 = static_cast<long>(rng() % 2001) - 1000;
        if (z1 == 0 || z2 == 0 || z1 + z2 == 0) continue;
        auto f = build_frey(Q.from_rational(z1), Q.from_rational(z2), Q.from_rational(-z1 - z2));
        auto [delta, c4] = oracle::delta_c4({0, -(z1 - z2), 0, -(mpz_class(z1) * z2), 0});
        CHECK(f.delta_F.rational_value() == Rational(delta));
        CHECK(f.c4_F.rational_value() == Rational(c4));
    }
    CHECK_THROWS_AS(build_frey(Q.from_rational(1), Q.from_rational(2), Q.from_rational(3)), Error);
    CHECK_THROWS_AS(build_frey(Q.from_rational(0), Q.from_rational(2), Q.from_rational(-2)), Error);
}

TEST_CASE("synthetic power instance") {
    auto inst = synthetic_instance(3, 7, 1, 1);
    std::vector<std::string> labels;
    for (const auto& q : inst.support.S) labels.push_back(q.label);
    CHECK(labels == std::vector<std::string>{"2.1", "547.1"});
    auto rep = verify_prop_conclusions(inst.frey, inst.support, inst.ell, Integer(10000));
    CHECK(rep.passed());
    CHECK(rep.frak_p_multiplicative);
    CHECK(rep.frak_p_pattern);
    CHECK(rep.norm_certificate);
    CHECK(rep.primes.size() == 1229);
    // Breaking the power structure is detected.
    auto broken = synthetic_instance(3, 7, 5, 1);
    broken.support.S.erase(std::remove_if(broken.support.S.begin(), broken.support.S.end(),
                                          [](const PrimeIdealData& q) { return q.p == 5; }),
                           broken.support.S.end());
    broken.support.T_rational.erase(5);
    CHECK_FALSE(verify_prop_conclusions(broken.frey, broken.support, broken.ell, Integer(100)).passed());
}

TEST_CASE("pipeline on y^2 = x^3 - 25x") {
    Setup s("25x");
    auto r = run_frey_pipeline(s.model, s.seq, 1);
    CHECK(r.passed());
    REQUIRE(r.pattern_prime.has_value());
    CHECK(r.pattern_prime->p == 3);
    CHECK(r.pattern_source == "B_n");
    REQUIRE(r.scaled.has_value());
    CHECK(r.scaled->z[0].rational_value() == 9);
    // 5 lies below S, so it cannot serve as the pattern prime.
    PipelineOptions opt;
    opt.prime = Integer(5);
    auto r5 = run_frey_pipeline(s.model, s.seq, 1, opt);
    CHECK_FALSE(r5.pattern_prime.has_value());
    CHECK_FALSE(r5.scaled.has_value());
    CHECK_FALSE(r5.passed());
    CHECK_FALSE(r5.notes.empty());
}

TEST_CASE("descent in the degree-24 tower of 37a") {
    Setup s("37a");
    REQUIRE(s.tower.degree() == 24);
    for (unsigned long n = 1; n <= 3; ++n) {
        auto t = descent_triple(s.tower, s.seq, n);
        CHECK_NOTHROW(check_descent_identity(s.tower, t));
        CHECK(gcd_support_check(s.tower, s.model, t).passed);
    }
    try {
        build_support(s.tower, s.model, s.seq, 2);
        FAIL("integral generator accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::precondition);
    }
}

}  // TEST_SUITE

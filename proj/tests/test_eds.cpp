#include "doctest.h"

#include "edsfrey/eds_checks.hpp"
#include "edsfrey/error.hpp"

#include "fixtures.hpp"

#include <random>

using namespace edsfrey;

TEST_SUITE("curve") {

TEST_CASE("group law matches the addition oracle on every bundled curve") {
    for (const auto& name : fixtures::bundled()) {
        CAPTURE(name);
        auto c = fixtures::curve(name);
        EDSequence seq(c.model(), c.point());
        auto want = fixtures::oracle_terms(c, 30);
        for (unsigned long n = 1; n <= 30; ++n) CHECK(seq.B(n) == want[n - 1]);
    }
}

TEST_CASE("sparse terms agree with the dense cache") {
    auto c = fixtures::curve("53a_4P");
    EDSequence dense(c.model(), c.point());
    EDSequence sparse(c.model(), c.point());
    dense.ensure(120);
    CHECK(sparse.B(117) == dense.B(117));
    CHECK(sparse.term(117).A == dense.term(117).A);
    CHECK(sparse.term(117).C == dense.term(117).C);
}

TEST_CASE("decomposition identities") {
    auto c = fixtures::curve("25x");
    EDSequence seq(c.model(), c.point());
    for (unsigned long n = 1; n <= 8; ++n) {
        const auto& d = seq.term(n);
        CHECK(d.B > 0);
        CHECK(gcd(d.A, d.B) == 1);
        CHECK(gcd(d.C, d.B) == 1);
        RationalPoint q = scalar_multiply(c.model(), c.point(), n);
        CHECK(q.x() == make_rational(d.A, d.B * d.B));
        CHECK(q.y() == make_rational(d.C, d.B * d.B * d.B));
    }
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(WeierstrassModel::create({0, 0, 0, 0, 0}), Error);
    auto m = WeierstrassModel::create({0, 0, 1, -1, 0});
    CHECK_THROWS_AS(EDSequence(m, RationalPoint::affine(1, 1)), Error);
    // (0, 0) on y^2 = x^3 - x has order 2: accepted, but 2P = O is rejected.
    auto m2 = WeierstrassModel::create({0, 0, 0, -1, 0});
    EDSequence s(m2, RationalPoint::affine(0, 0));
    CHECK(s.B(1) == 1);
    try {
        s.B(2);
        FAIL("2P = O accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::torsion_point);
    }
}

TEST_CASE("Weierstrass invariants against the textbook formulas") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 50; ++i) {
        std::array<Integer, 5> a;
        for (auto& x : a) x = static_cast<long>(rng() % 41) - 20;
        auto [delta, c4] = oracle::delta_c4(a);
        if (delta == 0) continue;
        auto m = WeierstrassModel::create(a);
        CHECK(m.delta() == delta);
        CHECK(m.invariants().c4 == c4);
    }
}

}  // TEST_SUITE

TEST_SUITE("eds") {

TEST_CASE("37a terms") {
    auto c = fixtures::curve("37a");
    EDSequence seq(c.model(), c.point());
    std::vector<long> want{1, 1, 1, 1, 2, 1, 3, 5, 7, 4, 23, 29};
    for (unsigned long n = 1; n <= want.size(); ++n) CHECK(seq.B(n) == want[n - 1]);
}

TEST_CASE("strong divisibility against direct gcds") {
    for (const auto& name : fixtures::bundled()) {
        CAPTURE(name);
        auto c = fixtures::curve(name);
        EDSequence seq(c.model(), c.point());
        auto B = fixtures::oracle_terms(c, 40);
        for (unsigned long m = 1; m <= 40; ++m)
            for (unsigned long n = 1; n <= 40; ++n) CHECK(gcd(B[m - 1], B[n - 1]) == B[std::gcd(m, n) - 1]);
        CHECK(check_strong_divisibility(seq, 40).passed);
    }
}

TEST_CASE("valuation law checked prime by prime") {
    for (const auto& name : fixtures::bundled()) {
        CAPTURE(name);
        auto c = fixtures::curve(name);
        EDSequence seq(c.model(), c.point());
        auto B = fixtures::oracle_terms(c, 60);
        bool a1_even = c.a[0] % 2 == 0;
        for (unsigned long n = 1; n <= 60; ++n) {
            for (unsigned long p : oracle::small_prime_factors(B[n - 1], 2000)) {
                if (p == 2 && !a1_even) continue;
                for (unsigned long m = 1; n * m <= 60; ++m) {
                    CAPTURE(n);
                    CAPTURE(m);
                    CAPTURE(p);
                    CHECK(oracle::vp(B[n * m - 1], p) == oracle::vp(B[n - 1], p) + oracle::vp(mpz_class(m), p));
                    auto r = check_valuation_law(seq, Integer(p), n, m);
                    CHECK(r.passed);
                    CHECK(r.defect == 0);
                }
            }
        }
        auto grid = check_valuation_grid(seq, 60);
        CHECK(grid.passed);
        CHECK(grid.a1_even == a1_even);
        CHECK(grid.empirical_r.has_value() == !a1_even);
    }
}

TEST_CASE("primitive cofactors equal the oracle's primitive parts") {
    for (const auto& name : fixtures::bundled()) {
        CAPTURE(name);
        auto c = fixtures::curve(name);
        EDSequence seq(c.model(), c.point());
        auto B = fixtures::oracle_terms(c, 40);
        for (unsigned long n = 1; n <= 40; ++n) CHECK(primitive_divisor_cofactor(seq, n) == oracle::primitive_part(B, n));
    }
}

TEST_CASE("37a has no primitive divisor at 1, 2, 3, 4, 6, 10") {
    auto c = fixtures::curve("37a");
    EDSequence seq(c.model(), c.point());
    auto rep = check_primitive_divisors(seq, 1, 40);
    CHECK(rep.without_primitive == std::vector<unsigned long>{1, 2, 3, 4, 6, 10});
}

TEST_CASE("perfect-power terms") {
    auto c = fixtures::curve("37a");
    EDSequence seq(c.model(), c.point());
    auto found = find_power_terms(seq, 30, 2);
    for (const auto& p : found) CHECK(ipow(p.u, p.ell) == seq.B(p.n));
    bool has10 = false;
    for (const auto& p : found) has10 |= p.n == 10 && p.u == 2 && p.ell == 2;
    CHECK(has10);
}

TEST_CASE("kappa certificate on y^2 = x^3 - 25x") {
    auto c = fixtures::curve("25x");
    EDSequence seq(c.model(), c.point());
    CHECK(seq.B(2) == Integer(1494696));
    std::set<Integer> T{2, 3};
    auto cert = kappa_certificate(seq, T, 2);
    CHECK(cert.q == 3);
    CHECK(cert.r == 0);
    CHECK(cert.kappa == 2);
    CHECK_FALSE(cert.empirical);
    CHECK(cert.p == 11);
    CHECK(mpz_divisible_p(seq.B(cert.witness_index).get_mpz_t(), cert.p.get_mpz_t()));
    CHECK(verify_certificate(seq, cert, T));
    KappaCertificate forged = cert;
    forged.p = 13;
    CHECK_FALSE(verify_certificate(seq, forged, T));
}

TEST_CASE("kappa certificate needs B_1 > 1") {
    auto c = fixtures::curve("37a");
    EDSequence seq(c.model(), c.point());
    try {
        kappa_certificate(seq, {2}, 2);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::precondition);
    }
}

}  // TEST_SUITE

TEST_SUITE("kernels") {

TEST_CASE("serial and OpenMP kernels produce identical reports") {
    for (const auto& name : fixtures::bundled()) {
        CAPTURE(name);
        auto c = fixtures::curve(name);
        EDSequence seq(c.model(), c.point());
        auto B = seq.denominators(80);
        bool even = c.a[0] % 2 == 0;
        auto s1 = kernels::serial::strong_divisibility(B, 80);
        auto o1 = kernels::omp::strong_divisibility(B, 80);
        CHECK(s1.passed == o1.passed);
        CHECK(s1.pairs_checked == o1.pairs_checked);
        CHECK(s1.first_violation == o1.first_violation);
        auto s2 = kernels::serial::valuation_grid(B, 80, even);
        auto o2 = kernels::omp::valuation_grid(B, 80, even);
        REQUIRE(s2.entries.size() == o2.entries.size());
        for (std::size_t i = 0; i < s2.entries.size(); ++i) {
            CHECK(s2.entries[i].n == o2.entries[i].n);
            CHECK(s2.entries[i].m == o2.entries[i].m);
            CHECK(s2.entries[i].passed == o2.entries[i].passed);
            CHECK(s2.entries[i].defect_at_2 == o2.entries[i].defect_at_2);
        }
        CHECK(s2.empirical_r == o2.empirical_r);
        CHECK(kernels::serial::primitive_cofactors(B, 1, 80) == kernels::omp::primitive_cofactors(B, 1, 80));
    }
}

TEST_CASE("kernels detect a corrupted sequence") {
    auto c = fixtures::curve("37a");
    EDSequence seq(c.model(), c.point());
    auto B = seq.denominators(30);
    B[11] *= 7;   // B_12
    auto s = kernels::serial::strong_divisibility(B, 30);
    auto o = kernels::omp::strong_divisibility(B, 30);
    CHECK_FALSE(s.passed);
    CHECK(s.first_violation == o.first_violation);
}

}  // TEST_SUITE

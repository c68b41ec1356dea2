#include "doctest.h"

#include "edsfrey/error.hpp"
#include "edsfrey/eds.hpp"
#include "edsfrey/poly.hpp"
#include "edsfrey/poly_modp.hpp"

#include "oracles.hpp"

#include <random>

using namespace edsfrey;

TEST_SUITE("arith") {

TEST_CASE("exact parsing and printing") {
    CHECK(parse_rational("1681/144") == make_rational(1681, 144));
    CHECK(to_string(parse_rational("-6/4")) == "-3/2");
    CHECK(to_string(parse_integer("-000123")) == "-123");
    CHECK_THROWS_AS(parse_rational("1.5"), Error);
    CHECK_THROWS_AS(parse_rational("3/0"), Error);
    CHECK_THROWS_AS(parse_integer(""), Error);

    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        Integer n = Integer(static_cast<long>(rng() % 2000001)) - 1000000;
        Integer d = Integer(static_cast<long>(rng() % 1000)) + 1;
        Rational r = make_rational(n * n * n, d);
        CHECK(parse_rational(to_string(r)) == r);
    }
}

TEST_CASE("valuations and roots") {
    CHECK(valuation(Integer(1494696), Integer(2)) == 3);
    CHECK(valuation(make_rational(Integer(9), Integer(8)), Integer(2)) == -3);
    CHECK(exact_root(Integer(1024), 5) == Integer(4));
    CHECK_FALSE(exact_root(Integer(1025), 5).has_value());
    CHECK(isqrt_floor(Integer(99)) == 9);
    CHECK(isqrt_ceil(Integer(99)) == 10);
}

TEST_CASE("factorization against the naive oracle") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        Integer n = Integer(static_cast<unsigned long>(rng() % 100000000ULL)) + 2;
        auto f = factor_trial(n, 100000);
        Integer prod = f.cofactor;
        for (auto& [p, e] : f.primes) prod *= ipow(p, e);
        CHECK(prod == n);
        auto small = oracle::small_prime_factors(n, 1000);
        for (auto p : small) {
            bool found = false;
            for (auto& [q, e] : f.primes)
                if (q == p) found = e == oracle::vp(n, p);
            CHECK(found);
        }
    }
}

TEST_CASE("rational reconstruction") {
    Integer m = ipow(Integer(10007), 4);
    Rational r = make_rational(-123, 457);
    Integer inv;
    mpz_invert(inv.get_mpz_t(), r.get_den().get_mpz_t(), m.get_mpz_t());
    Integer a = (r.get_num() * inv) % m;
    if (a < 0) a += m;
    auto back = rational_reconstruct(a, m);
    REQUIRE(back.has_value());
    CHECK(*back == r);
}

TEST_CASE("perfect power decomposition inverts exponentiation") {
    CHECK(perfect_power_decomposition(Integer(64)) == std::make_pair(Integer(2), 6UL));
    CHECK(perfect_power_decomposition(Integer(1)) == std::make_pair(Integer(1), 0UL));
    CHECK(perfect_power_decomposition(Integer(12)) == std::make_pair(Integer(12), 1UL));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 60; ++i) {
        // u squarefree-ish base that is not itself a power.
        Integer u = Integer(static_cast<unsigned long>(rng() % 500)) * 2 + 3;
        if (perfect_power_decomposition(u).second != 1) continue;
        unsigned long k = rng() % 12 + 1;
        auto [v, e] = perfect_power_decomposition(ipow(u, k));
        CHECK(v == u);
        CHECK(e == k);
    }
}

}  // TEST_SUITE

TEST_SUITE("poly") {

namespace {
QPoly from_ints(std::initializer_list<long> c) {
    QPoly p;
    for (long x : c) p.push_back(Rational(x));
    return p;
}
}  // namespace

TEST_CASE("resultant agrees with the Sylvester determinant") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 80; ++i) {
        std::size_t df = rng() % 5 + 1, dg = rng() % 5 + 1;
        std::vector<mpz_class> f, g;
        QPoly qf, qg;
        for (std::size_t k = 0; k <= df; ++k) f.push_back(static_cast<long>(rng() % 21) - 10);
        for (std::size_t k = 0; k <= dg; ++k) g.push_back(static_cast<long>(rng() % 21) - 10);
        if (f.back() == 0) f.back() = 1;
        if (g.back() == 0) g.back() = -1;
        for (auto& c : f) qf.push_back(Rational(c));
        for (auto& c : g) qg.push_back(Rational(c));
        CHECK(poly::resultant(qf, qg) == Rational(oracle::sylvester_resultant(f, g)));
    }
}

TEST_CASE("Sturm counts and integer roots") {
    QPoly f = from_ints({-6, 11, -6, 1});   // (x-1)(x-2)(x-3)
    CHECK(poly::real_root_count(f) == 3);
    CHECK(poly::sturm_count(f, Rational(1), Rational(3)) == 2);   // (1, 3]
    CHECK(poly::roots_above(f, make_rational(5, 2)) == 1);
    CHECK(poly::real_root_count(from_ints({1, 0, 1})) == 0);
    auto r = poly::integer_roots(ZPoly{0, -25, 0, 1});
    std::sort(r.begin(), r.end());
    CHECK(r == std::vector<Integer>{-5, 0, 5});
    CHECK(poly::discriminant(from_ints({-2, 0, 1})) == 8);
}

TEST_CASE("factorization mod p multiplies back") {
    std::mt19937_64 rng(23);
    for (std::uint64_t p : {3ULL, 5ULL, 101ULL, 10007ULL}) {
        Fp fp(p);
        for (int i = 0; i < 20; ++i) {
            FpPoly f;
            for (int k = 0; k < 8; ++k) f.push_back(rng() % p);
            f.push_back(1);
            FpPoly g = fp.gcd(f, fp.derivative(f));
            if (g.size() > 1) continue;
            auto fac = fp.factor_squarefree(f);
            FpPoly prod{1};
            for (const auto& h : fac) prod = fp.mul(prod, h);
            CHECK(prod == fp.monic(f));
        }
    }
}

TEST_CASE("Hensel lifting preserves the factorization") {
    ZPoly f{-2, 0, 1};   // x^2 - 2 = (x - 3)(x + 3) mod 7
    Fp fp(7);
    zmod::ZmPoly g, h;
    zmod::hensel_lift(f, FpPoly{4, 1}, FpPoly{3, 1}, fp, 6, g, h);
    Integer m = ipow(Integer(7), 6);
    CHECK(zmod::mul(g, h, m) == zmod::reduce(f, m));
}

}  // TEST_SUITE

#pragma once

// Polynomials over F_p (word-size p) and over Z/p^N, with the factorization
// and lifting routines used for prime splitting and p-adic square roots.

#include "edsfrey/arith.hpp"
#include "edsfrey/poly.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace edsfrey {

using FpPoly = std::vector<std::uint64_t>;

class Fp {
public:
    explicit Fp(std::uint64_t p);

    std::uint64_t p() const { return p_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p_; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p_ - b) % p_; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
    }
    std::uint64_t inv(std::uint64_t a) const;
    std::uint64_t reduce(const Integer& x) const;
    // Reduction of a rational whose denominator is prime to p.
    std::uint64_t reduce(const Rational& x) const;

    FpPoly reduce(const ZPoly& f) const;
    FpPoly reduce(const QPoly& f) const;

    void trim(FpPoly& a) const;
    FpPoly add(const FpPoly& a, const FpPoly& b) const;
    FpPoly sub(const FpPoly& a, const FpPoly& b) const;
    FpPoly mul(const FpPoly& a, const FpPoly& b) const;
    FpPoly scale(const FpPoly& a, std::uint64_t c) const;
    FpPoly monic(const FpPoly& a) const;
    void divmod(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r) const;
    FpPoly rem(const FpPoly& a, const FpPoly& b) const;
    FpPoly mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m) const;
    FpPoly powmod(const FpPoly& a, const Integer& e, const FpPoly& m) const;
    FpPoly gcd(FpPoly a, FpPoly b) const;
    // Returns g = gcd(a, b) (monic) and sets s with s*a = g mod b.
    FpPoly xgcd_left(const FpPoly& a, const FpPoly& b, FpPoly& s) const;
    // Full Bezout: s*a + t*b = g (monic).
    FpPoly xgcd(const FpPoly& a, const FpPoly& b, FpPoly& s, FpPoly& t) const;
    // Inverse of a modulo m; a must be a unit.
    FpPoly invmod(const FpPoly& a, const FpPoly& m) const;
    FpPoly derivative(const FpPoly& a) const;

    // Complete factorization of a squarefree polynomial into monic
    // irreducibles, sorted by (degree, coefficients).
    std::vector<FpPoly> factor_squarefree(const FpPoly& f) const;

    // Square root in F_p[x]/(g), g irreducible of degree d; nullopt if the
    // element is a non-square.
    std::optional<FpPoly> sqrt_mod_irreducible(const FpPoly& a, const FpPoly& g) const;

private:
    std::uint64_t p_;
    mutable std::mt19937_64 rng_{0x5eed5eedULL};

    FpPoly random_poly(std::size_t deg) const;
    void equal_degree_split(const FpPoly& g, unsigned d, std::vector<FpPoly>& out) const;
};

// Arithmetic in (Z/mZ)[x]; inputs are expected reduced into [0, m).
namespace zmod {

using ZmPoly = std::vector<Integer>;

ZmPoly reduce(const ZPoly& f, const Integer& m);
ZmPoly from_fp(const FpPoly& f);
void trim(ZmPoly& a);
ZmPoly add(const ZmPoly& a, const ZmPoly& b, const Integer& m);
ZmPoly sub(const ZmPoly& a, const ZmPoly& b, const Integer& m);
ZmPoly mul(const ZmPoly& a, const ZmPoly& b, const Integer& m);
ZmPoly scale(const ZmPoly& a, const Integer& c, const Integer& m);
// Division by a monic polynomial.
void divmod_monic(const ZmPoly& a, const ZmPoly& b, const Integer& m, ZmPoly& q, ZmPoly& r);
ZmPoly rem_monic(const ZmPoly& a, const ZmPoly& b, const Integer& m);
ZmPoly mulmod(const ZmPoly& a, const ZmPoly& b, const ZmPoly& f, const Integer& m);

// Lifts f = g*h (mod p), g, h monic and coprime mod p, to a factorization
// modulo p^precision. f must be monic.
void hensel_lift(const ZPoly& f, FpPoly g0, FpPoly h0, const Fp& fp, unsigned precision,
                 ZmPoly& g, ZmPoly& h);

}  // namespace zmod
}  // namespace edsfrey

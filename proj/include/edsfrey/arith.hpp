#pragma once

// Integer and rational helpers on top of GMP's C++ interface.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace edsfrey {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);

// Parses "123", "-7" or "p/q" exactly; throws invalid_input otherwise.
Integer parse_integer(const std::string& text);
Rational parse_rational(const std::string& text);

std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

// v_p(x) for x != 0; p >= 2.
unsigned valuation(const Integer& x, const Integer& p);
// v_p of a nonzero rational (may be negative).
long valuation(const Rational& x, const Integer& p);

Integer ipow(const Integer& base, unsigned long exp);
Rational rpow(const Rational& base, unsigned long exp);
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

// Exact k-th root if x = r^k for some integer r >= 0, else nullopt. x >= 0.
std::optional<Integer> exact_root(const Integer& x, unsigned long k);
bool is_square(const Integer& x);

// Probabilistic (Miller-Rabin with fixed bases via GMP, 30 reps).
bool is_probable_prime(const Integer& n);
Integer next_prime(const Integer& n);

// Small-prime sieve up to bound inclusive.
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

struct PartialFactorization {
    std::vector<std::pair<Integer, unsigned>> primes;  // proven primes, ascending
    Integer cofactor = 1;       // unfactored part, 1 if complete
    bool cofactor_probable_prime = false;
};

// Trial division up to `bound`; a remaining cofactor is tested for probable
// primality and, if prime, moved into `primes`.
PartialFactorization factor_trial(Integer n, std::uint64_t bound);

// Distinct prime divisors of |n| (requires complete factorization within
// `bound`); nullopt if a composite cofactor survives.
std::optional<std::vector<Integer>> prime_divisors(const Integer& n, std::uint64_t bound);

// Symmetric residue in (-m/2, m/2].
Integer symmetric_mod(const Integer& a, const Integer& m);

// Rational reconstruction of a mod m with |num|, den <= sqrt(m/2).
std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m);

// Floor of sqrt for x >= 0, and ceil.
Integer isqrt_floor(const Integer& x);
Integer isqrt_ceil(const Integer& x);

Integer factorial(unsigned long n);

// Stable 64-bit FNV-1a digest rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace edsfrey

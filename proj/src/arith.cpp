#include "edsfrey/arith.hpp"

#include "edsfrey/error.hpp"

#include <algorithm>
#include <cstdio>

namespace edsfrey {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_input: return "invalid_input";
        case ErrorCode::not_on_curve: return "not_on_curve";
        case ErrorCode::singular_model: return "singular_model";
        case ErrorCode::torsion_point: return "torsion_point";
        case ErrorCode::precondition: return "precondition";
        case ErrorCode::budget_exceeded: return "budget_exceeded";
        case ErrorCode::undecided: return "undecided";
        case ErrorCode::unsafe_prime: return "unsafe_prime";
        case ErrorCode::degenerate: return "degenerate";
        case ErrorCode::verification_failed: return "verification_failed";
        case ErrorCode::cache_corrupt: return "cache_corrupt";
        case ErrorCode::config: return "config";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

int exit_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::verification_failed:
            return 1;
        case ErrorCode::budget_exceeded:
        case ErrorCode::undecided:
            return 3;
        default:
            return 2;
    }
}

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) fail(ErrorCode::invalid_input, "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

namespace {

bool is_decimal(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Integer parse_integer(const std::string& text) {
    if (!is_decimal(text)) fail(ErrorCode::invalid_input, "not a decimal integer: '" + text + "'");
    std::string s = text[0] == '+' ? text.substr(1) : text;
    return Integer(s, 10);
}

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(text));
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    return make_rational(num, den);
}

std::string to_string(const Integer& x) { return x.get_str(10); }

std::string to_string(const Rational& x) { return x.get_str(10); }

unsigned valuation(const Integer& x, const Integer& p) {
    if (x == 0) fail(ErrorCode::precondition, "valuation of zero");
    Integer t = x;
    unsigned k = 0;
    Integer q, r;
    for (;;) {
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        t = q;
        ++k;
    }
    return k;
}

long valuation(const Rational& x, const Integer& p) {
    return static_cast<long>(valuation(x.get_num(), p)) -
           static_cast<long>(valuation(x.get_den(), p));
}

Integer ipow(const Integer& base, unsigned long exp) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

Rational rpow(const Rational& base, unsigned long exp) {
    return make_rational(ipow(base.get_num(), exp), ipow(base.get_den(), exp));
}

Integer gcd(const Integer& a, const Integer& b) {
    Integer r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Integer lcm(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

std::optional<Integer> exact_root(const Integer& x, unsigned long k) {
    if (x < 0 || k == 0) return std::nullopt;
    Integer r;
    if (mpz_root(r.get_mpz_t(), x.get_mpz_t(), k) != 0) return r;
    return std::nullopt;
}

bool is_square(const Integer& x) { return x >= 0 && mpz_perfect_square_p(x.get_mpz_t()) != 0; }

bool is_probable_prime(const Integer& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

Integer next_prime(const Integer& n) {
    Integer r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

PartialFactorization factor_trial(Integer n, std::uint64_t bound) {
    PartialFactorization out;
    if (n < 0) n = -n;
    if (n == 0) fail(ErrorCode::precondition, "cannot factor zero");
    for (std::uint64_t p = 2; p <= bound; p = (p == 2 ? 3 : p + 2)) {
        if (n == 1) break;
        Integer pz(static_cast<unsigned long>(p));
        if (pz * pz > n) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p) == 0) continue;
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        out.primes.emplace_back(pz, e);
    }
    if (n > 1) {
        if (is_probable_prime(n)) {
            // Merge in ascending order (n exceeds every trial prime found).
            out.primes.emplace_back(n, 1u);
        } else {
            out.cofactor = n;
        }
    }
    std::sort(out.primes.begin(), out.primes.end());
    return out;
}

std::optional<std::vector<Integer>> prime_divisors(const Integer& n, std::uint64_t bound) {
    auto f = factor_trial(n, bound);
    if (f.cofactor != 1) return std::nullopt;
    std::vector<Integer> out;
    for (auto& [p, e] : f.primes) out.push_back(p);
    return out;
}

Integer symmetric_mod(const Integer& a, const Integer& m) {
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    if (2 * r > m) r -= m;
    return r;
}

std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m) {
    Integer bound = isqrt_floor(m / 2);
    Integer r0 = m, r1;
    mpz_mod(r1.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    Integer t0 = 0, t1 = 1;
    while (r1 > bound) {
        Integer q = r0 / r1;
        Integer r2 = r0 - q * r1;
        Integer t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    if (gcd(t1, m) != 1) return std::nullopt;
    return make_rational(r1, t1);
}

Integer isqrt_floor(const Integer& x) {
    if (x < 0) fail(ErrorCode::precondition, "sqrt of negative");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

Integer isqrt_ceil(const Integer& x) {
    Integer r = isqrt_floor(x);
    if (r * r < x) r += 1;
    return r;
}

Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace edsfrey

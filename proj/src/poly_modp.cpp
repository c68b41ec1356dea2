#include "edsfrey/poly_modp.hpp"

#include "edsfrey/error.hpp"

#include <algorithm>

namespace edsfrey {

Fp::Fp(std::uint64_t p) : p_(p) {
    if (p < 2 || p >= (1ULL << 62)) fail(ErrorCode::precondition, "unsupported modulus");
}

std::uint64_t Fp::inv(std::uint64_t a) const {
    a %= p_;
    if (a == 0) fail(ErrorCode::precondition, "inverse of zero mod p");
    // Extended Euclid on signed 128-bit values.
    __int128 t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<std::uint64_t>(t);
}

std::uint64_t Fp::reduce(const Integer& x) const {
    return mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(p_));
}

std::uint64_t Fp::reduce(const Rational& x) const {
    std::uint64_t den = reduce(x.get_den());
    if (den == 0) fail(ErrorCode::precondition, "denominator divisible by p");
    return mul(reduce(x.get_num()), inv(den));
}

FpPoly Fp::reduce(const ZPoly& f) const {
    FpPoly r;
    for (const auto& c : f) r.push_back(reduce(c));
    trim(r);
    return r;
}

FpPoly Fp::reduce(const QPoly& f) const {
    FpPoly r;
    for (const auto& c : f) r.push_back(reduce(c));
    trim(r);
    return r;
}

void Fp::trim(FpPoly& a) const {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly Fp::add(const FpPoly& a, const FpPoly& b) const {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = add(r[i], b[i]);
    trim(r);
    return r;
}

FpPoly Fp::sub(const FpPoly& a, const FpPoly& b) const {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = sub(r[i], b[i]);
    trim(r);
    return r;
}

FpPoly Fp::mul(const FpPoly& a, const FpPoly& b) const {
    if (a.empty() || b.empty()) return {};
    std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
            // Keep the accumulator bounded for large p.
            if (acc[i + j] >> 120) acc[i + j] %= p_;
        }
    }
    FpPoly r(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<std::uint64_t>(acc[i] % p_);
    trim(r);
    return r;
}

FpPoly Fp::scale(const FpPoly& a, std::uint64_t c) const {
    FpPoly r;
    r.reserve(a.size());
    for (auto x : a) r.push_back(mul(x, c));
    trim(r);
    return r;
}

FpPoly Fp::monic(const FpPoly& a) const {
    if (a.empty()) return a;
    return scale(a, inv(a.back()));
}

void Fp::divmod(const FpPoly& a, const FpPoly& b, FpPoly& q, FpPoly& r) const {
    if (b.empty()) fail(ErrorCode::precondition, "division by zero polynomial mod p");
    r = a;
    trim(r);
    if (r.size() < b.size()) {
        q.clear();
        return;
    }
    q.assign(r.size() - b.size() + 1, 0);
    std::uint64_t lead_inv = inv(b.back());
    for (std::size_t k = r.size(); k-- >= b.size();) {
        std::uint64_t c = mul(r[k], lead_inv);
        std::size_t shift = k - (b.size() - 1);
        q[shift] = c;
        if (c != 0)
            for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = sub(r[shift + i], mul(c, b[i]));
        if (k == 0) break;
    }
    trim(r);
    trim(q);
}

FpPoly Fp::rem(const FpPoly& a, const FpPoly& b) const {
    FpPoly q, r;
    divmod(a, b, q, r);
    return r;
}

FpPoly Fp::mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m) const { return rem(mul(a, b), m); }

FpPoly Fp::powmod(const FpPoly& a, const Integer& e, const FpPoly& m) const {
    FpPoly result{1};
    result = rem(result, m);
    FpPoly base = rem(a, m);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = mulmod(result, result, m);
        if (mpz_tstbit(e.get_mpz_t(), i)) result = mulmod(result, base, m);
    }
    return result;
}

FpPoly Fp::gcd(FpPoly a, FpPoly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FpPoly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

FpPoly Fp::xgcd(const FpPoly& a, const FpPoly& b, FpPoly& s, FpPoly& t) const {
    FpPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
    trim(r0);
    trim(r1);
    while (!r1.empty()) {
        FpPoly q, r;
        divmod(r0, r1, q, r);
        FpPoly s2 = sub(s0, mul(q, s1));
        FpPoly t2 = sub(t0, mul(q, t1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.empty()) {
        s = s0;
        t = t0;
        return r0;
    }
    std::uint64_t li = inv(r0.back());
    s = scale(s0, li);
    t = scale(t0, li);
    return scale(r0, li);
}

FpPoly Fp::xgcd_left(const FpPoly& a, const FpPoly& b, FpPoly& s) const {
    FpPoly t;
    return xgcd(a, b, s, t);
}

FpPoly Fp::invmod(const FpPoly& a, const FpPoly& m) const {
    FpPoly s;
    FpPoly g = xgcd_left(rem(a, m), m, s);
    if (g.size() != 1) fail(ErrorCode::precondition, "polynomial is not invertible mod p");
    return rem(s, m);
}

FpPoly Fp::derivative(const FpPoly& a) const {
    FpPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(mul(a[i], static_cast<std::uint64_t>(i) % p_));
    trim(r);
    return r;
}

FpPoly Fp::random_poly(std::size_t deg) const {
    std::uniform_int_distribution<std::uint64_t> dist(0, p_ - 1);
    FpPoly r(deg + 1);
    for (auto& c : r) c = dist(rng_);
    trim(r);
    return r;
}

void Fp::equal_degree_split(const FpPoly& g, unsigned d, std::vector<FpPoly>& out) const {
    std::size_t n = g.size() - 1;
    if (n == d) {
        out.push_back(g);
        return;
    }
    Integer q = ipow(Integer(static_cast<unsigned long>(p_)), d);
    for (;;) {
        FpPoly a = random_poly(n - 1);
        if (a.size() < 2) continue;
        FpPoly b;
        if (p_ == 2) {
            // Trace map a + a^2 + ... + a^(2^(d-1)).
            FpPoly term = rem(a, g);
            b = term;
            for (unsigned i = 1; i < d; ++i) {
                term = mulmod(term, term, g);
                b = add(b, term);
            }
        } else {
            b = sub(powmod(a, (q - 1) / 2, g), FpPoly{1});
        }
        FpPoly u = gcd(b, g);
        if (u.size() <= 1 || u.size() == g.size()) continue;
        FpPoly v, r;
        divmod(g, u, v, r);
        equal_degree_split(u, d, out);
        equal_degree_split(monic(v), d, out);
        return;
    }
}

std::vector<FpPoly> Fp::factor_squarefree(const FpPoly& f_in) const {
    std::vector<FpPoly> out;
    FpPoly f = monic(f_in);
    if (f.size() <= 1) return out;
    FpPoly x{0, 1};
    FpPoly h = rem(x, f);
    Integer pz(static_cast<unsigned long>(p_));
    for (unsigned d = 1; f.size() > 1; ++d) {
        if (2 * d > f.size() - 1) {
            out.push_back(f);
            break;
        }
        h = powmod(h, pz, f);
        FpPoly g = gcd(sub(h, x), f);
        if (g.size() > 1) {
            equal_degree_split(g, d, out);
            FpPoly q, r;
            divmod(f, g, q, r);
            f = monic(q);
            h = rem(h, f);
        }
    }
    std::sort(out.begin(), out.end(), [](const FpPoly& a, const FpPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    return out;
}

std::optional<FpPoly> Fp::sqrt_mod_irreducible(const FpPoly& a_in, const FpPoly& g) const {
    FpPoly a = rem(a_in, g);
    if (a.empty()) return FpPoly{};
    std::size_t d = g.size() - 1;
    Integer q = ipow(Integer(static_cast<unsigned long>(p_)), static_cast<unsigned long>(d));
    if (p_ == 2) return powmod(a, q / 2, g);
    FpPoly one{1};
    if (powmod(a, (q - 1) / 2, g) != one) return std::nullopt;
    // Tonelli-Shanks in F_q.
    Integer t = q - 1;
    unsigned long s = 0;
    while (mpz_even_p(t.get_mpz_t())) {
        t /= 2;
        ++s;
    }
    FpPoly z;
    FpPoly minus_one{p_ - 1};
    for (;;) {
        z = random_poly(d - 1);
        if (z.empty()) continue;
        if (powmod(z, (q - 1) / 2, g) == minus_one) break;
    }
    FpPoly c = powmod(z, t, g);
    FpPoly x = powmod(a, (t + 1) / 2, g);
    FpPoly b = powmod(a, t, g);
    unsigned long m = s;
    while (b != one) {
        unsigned long i = 0;
        FpPoly bb = b;
        while (bb != one) {
            bb = mulmod(bb, bb, g);
            ++i;
        }
        FpPoly w = c;
        for (unsigned long k = 0; k + i + 1 < m; ++k) w = mulmod(w, w, g);
        x = mulmod(x, w, g);
        c = mulmod(w, w, g);
        b = mulmod(b, c, g);
        m = i;
    }
    return x;
}

namespace zmod {

ZmPoly reduce(const ZPoly& f, const Integer& m) {
    ZmPoly r;
    for (const auto& c : f) {
        Integer x;
        mpz_mod(x.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
        r.push_back(x);
    }
    trim(r);
    return r;
}

ZmPoly from_fp(const FpPoly& f) {
    ZmPoly r;
    for (auto c : f) r.emplace_back(static_cast<unsigned long>(c));
    return r;
}

void trim(ZmPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

static Integer mod(const Integer& x, const Integer& m) {
    Integer r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

ZmPoly add(const ZmPoly& a, const ZmPoly& b, const Integer& m) {
    ZmPoly r(std::max(a.size(), b.size()), Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = mod(r[i] + b[i], m);
    trim(r);
    return r;
}

ZmPoly sub(const ZmPoly& a, const ZmPoly& b, const Integer& m) {
    ZmPoly r(std::max(a.size(), b.size()), Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = mod(r[i] - b[i], m);
    trim(r);
    return r;
}

ZmPoly mul(const ZmPoly& a, const ZmPoly& b, const Integer& m) {
    if (a.empty() || b.empty()) return {};
    ZmPoly r(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    for (auto& c : r) c = mod(c, m);
    trim(r);
    return r;
}

ZmPoly scale(const ZmPoly& a, const Integer& c, const Integer& m) {
    ZmPoly r;
    for (const auto& x : a) r.push_back(mod(x * c, m));
    trim(r);
    return r;
}

void divmod_monic(const ZmPoly& a, const ZmPoly& b, const Integer& m, ZmPoly& q, ZmPoly& r) {
    if (b.empty() || b.back() != 1) fail(ErrorCode::precondition, "divisor must be monic");
    r = a;
    trim(r);
    if (r.size() < b.size()) {
        q.clear();
        return;
    }
    q.assign(r.size() - b.size() + 1, Integer(0));
    for (std::size_t k = r.size(); k-- >= b.size();) {
        Integer c = mod(r[k], m);
        std::size_t shift = k - (b.size() - 1);
        q[shift] = c;
        if (c != 0)
            for (std::size_t i = 0; i < b.size(); ++i)
                mpz_submul(r[shift + i].get_mpz_t(), c.get_mpz_t(), b[i].get_mpz_t());
        if (k == 0) break;
    }
    for (auto& x : r) x = mod(x, m);
    trim(r);
    trim(q);
}

ZmPoly rem_monic(const ZmPoly& a, const ZmPoly& b, const Integer& m) {
    ZmPoly q, r;
    divmod_monic(a, b, m, q, r);
    return r;
}

ZmPoly mulmod(const ZmPoly& a, const ZmPoly& b, const ZmPoly& f, const Integer& m) {
    return rem_monic(mul(a, b, m), f, m);
}

void hensel_lift(const ZPoly& f, FpPoly g0, FpPoly h0, const Fp& fp, unsigned precision,
                 ZmPoly& g, ZmPoly& h) {
    g0 = fp.monic(g0);
    h0 = fp.monic(h0);
    FpPoly s0, t0;
    FpPoly one = fp.xgcd(g0, h0, s0, t0);
    if (one.size() != 1) fail(ErrorCode::precondition, "Hensel factors not coprime mod p");
    Integer p(static_cast<unsigned long>(fp.p()));
    Integer target = ipow(p, precision);
    g = from_fp(g0);
    h = from_fp(h0);
    ZmPoly s = from_fp(s0), t = from_fp(t0);
    Integer m = p;
    while (m < target) {
        Integer m2 = m * m;
        ZmPoly fm = reduce(f, m2);
        ZmPoly e = sub(fm, mul(g, h, m2), m2);
        ZmPoly q, r;
        divmod_monic(mul(s, e, m2), h, m2, q, r);
        ZmPoly g1 = add(g, add(mul(t, e, m2), mul(q, g, m2), m2), m2);
        ZmPoly h1 = add(h, r, m2);
        ZmPoly b = sub(add(mul(s, g1, m2), mul(t, h1, m2), m2), ZmPoly{Integer(1)}, m2);
        ZmPoly c, d;
        divmod_monic(mul(s, b, m2), h1, m2, c, d);
        s = sub(s, d, m2);
        t = sub(sub(t, mul(t, b, m2), m2), mul(c, g1, m2), m2);
        g = std::move(g1);
        h = std::move(h1);
        m = m2;
    }
    for (auto& c : g) c = mod(c, target);
    for (auto& c : h) c = mod(c, target);
    trim(g);
    trim(h);
}

}  // namespace zmod
}  // namespace edsfrey

#include "field_internal.hpp"

#include "edsfrey/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace edsfrey {

namespace {

// Rational bounds with pi_lo < pi < pi_hi.
const Rational& pi_lo() {
    static const Rational r = make_rational(Integer(3141592653589793ul), Integer(1000000000000000ul));
    return r;
}
const Rational& pi_hi() {
    static const Rational r = make_rational(Integer(3141592653589794ul), Integer(1000000000000000ul));
    return r;
}

Integer ideal_modulus(const Integer& p, unsigned precision) { return ipow(p, precision); }

}  // namespace

std::vector<PrimeIdealData> split_prime(const NumberField& field, const Integer& p) {
    if (p < 2 || !is_probable_prime(p)) fail(ErrorCode::invalid_input, "split_prime needs a prime");
    if (!p.fits_ulong_p() || p > Integer(1ul << 62)) fail(ErrorCode::invalid_input, "prime too large for residue arithmetic");
    if (mpz_divisible_p(field.disc_multiple().get_mpz_t(), p.get_mpz_t()))
        fail(ErrorCode::unsafe_prime, "prime " + to_string(p) + " divides the equation-order discriminant");
    Fp fp(p.get_ui());
    auto facs = fp.factor_squarefree(fp.reduce(field.primitive_poly()));
    std::vector<PrimeIdealData> out;
    std::map<unsigned, unsigned> seen;
    for (auto& g : facs) {
        PrimeIdealData q;
        q.p = p;
        q.e = 1;
        q.f = static_cast<unsigned>(g.size() - 1);
        q.norm = ipow(p, q.f);
        q.label = to_string(q.norm) + "." + std::to_string(++seen[q.f]);
        q.safe = true;
        q.field = field;
        q.residue_poly = g;
        out.push_back(std::move(q));
    }
    return out;
}

PrimeIdealData unsafe_placeholder(const NumberField& field, const Integer& p) {
    PrimeIdealData q;
    q.p = p;
    q.e = 0;
    q.f = 0;
    q.norm = ipow(p, field.degree());
    q.label = to_string(p) + ".unsafe";
    q.safe = false;
    q.field = field;
    return q;
}

long PrimeIdealData::valuation(const AlgebraicNumber& a_in) const {
    if (!safe) fail(ErrorCode::unsafe_prime, "no valuation oracle at unsafe prime " + to_string(p));
    AlgebraicNumber a = field.embed(a_in);
    if (a.is_zero()) fail(ErrorCode::precondition, "valuation of zero");
    QPoly g = field.to_absolute(a);
    long c = 0;
    bool first = true;
    for (const auto& x : g) {
        if (x == 0) continue;
        long v = edsfrey::valuation(x, p);
        if (first || v < c) c = v;
        first = false;
    }
    // g' = g / p^c is p-integral with a unit coefficient.
    Rational scale = c >= 0 ? make_rational(Integer(1), ipow(p, static_cast<unsigned long>(c)))
                            : Rational(ipow(p, static_cast<unsigned long>(-c)));
    for (auto& x : g) x *= scale;
    Fp fp(p.get_ui());
    FpPoly gr = fp.reduce(g);
    if (!fp.rem(gr, residue_poly).empty()) return c;

    const ZPoly& f = field.primitive_poly();
    FpPoly fr = fp.reduce(f);
    FpPoly h0, r0;
    fp.divmod(fr, residue_poly, h0, r0);
    // v_q(g') <= v_p(N(g')) / f bounds the precision needed.
    Rational nrm = field.from_absolute(g).norm();
    long vn = edsfrey::valuation(nrm, p);
    unsigned prec = static_cast<unsigned>(vn / static_cast<long>(this->f)) + 1;
    zmod::ZmPoly G, H;
    zmod::hensel_lift(f, residue_poly, h0, fp, prec, G, H);
    Integer M = ideal_modulus(p, prec);
    zmod::ZmPoly gm(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        Integer inv, den = g[i].get_den();
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), M.get_mpz_t());
        Integer x = g[i].get_num() * inv;
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), M.get_mpz_t());
        gm[i] = x;
    }
    zmod::trim(gm);
    zmod::ZmPoly r = zmod::rem_monic(gm, G, M);
    long best = -1;
    for (const auto& x : r) {
        if (x == 0) continue;
        long v = static_cast<long>(edsfrey::valuation(x, p));
        if (best < 0 || v < best) best = v;
    }
    if (best < 0) fail(ErrorCode::verification_failed, "valuation exceeded its norm bound");
    return c + best;
}

bool PrimeIdealData::divides(const AlgebraicNumber& a) const {
    if (field.embed(a).is_zero()) return true;
    return valuation(a) > 0;
}

// ---------------------------------------------------------------------------

bool MinkowskiBound::norm_may_be_below(const Integer& N) const { return Rational(N * N) < m_squared_upper; }

MinkowskiBound minkowski_bound(const Integer& disc_abs, unsigned d, unsigned s) {
    if (d == 0 || 2 * s > d) fail(ErrorCode::invalid_input, "bad signature for the Minkowski bound");
    MinkowskiBound b;
    b.disc_abs = abs(disc_abs);
    b.d = d;
    b.s = s;
    // M^2 = |disc| (16 / pi^2)^s (d!)^2 / d^(2d)
    Rational common = Rational(b.disc_abs) * Rational(factorial(d) * factorial(d)) /
                      Rational(ipow(Integer(d), 2ul * d)) * rpow(Rational(16), s);
    b.m_squared_upper = common / rpow(pi_lo() * pi_lo(), s);
    b.m_squared_lower = common / rpow(pi_hi() * pi_hi(), s);
    Integer fl = b.m_squared_upper.get_num() / b.m_squared_upper.get_den();
    Integer n = isqrt_floor(fl);
    while (n > 0 && !(Rational(n * n) < b.m_squared_upper)) --n;
    b.floor_upper = n;
    b.approx = std::sqrt(b.m_squared_upper.get_d());
    return b;
}

MinkowskiData minkowski_T(const NumberField& field, const Integer& enumeration_budget) {
    MinkowskiData out;
    out.bound = minkowski_bound(field.disc_multiple(), static_cast<unsigned>(field.degree()), field.complex_pairs());
    if (out.bound.floor_upper > enumeration_budget)
        fail(ErrorCode::budget_exceeded, "Minkowski bound " + to_string(out.bound.floor_upper) +
                                             " exceeds the enumeration budget");
    for (auto p : primes_up_to(out.bound.floor_upper.get_ui())) {
        Integer P(static_cast<unsigned long>(p));
        if (!out.bound.norm_may_be_below(P)) break;
        if (mpz_divisible_p(field.disc_multiple().get_mpz_t(), P.get_mpz_t())) {
            out.T.push_back(unsafe_placeholder(field, P));
            continue;
        }
        for (auto& q : split_prime(field, P))
            if (out.bound.norm_may_be_below(q.norm)) out.T.push_back(std::move(q));
    }
    return out;
}

}  // namespace edsfrey

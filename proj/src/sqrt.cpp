#include "field_internal.hpp"

#include "edsfrey/error.hpp"

#include <cmath>

// Square roots in a tower field. Residues of v at the primes above an odd p
// of good reduction either expose a non-square (a proof) or give square roots
// in each residue field; those are glued by CRT, lifted p-adically by Newton
// iteration on the inverse square root, rationally reconstructed in tower
// coordinates and confirmed by exact squaring.

namespace edsfrey {

namespace {

constexpr unsigned kGoodPrimes = 16;
constexpr unsigned long kFirstPrime = 10007;
constexpr unsigned long kMaxPrecisionBits = 1ul << 16;

struct LocalData {
    std::uint64_t p = 0;
    std::vector<FpPoly> factors;
    std::vector<FpPoly> roots;
};

std::optional<AlgebraicNumber> sqrt_rational(const AlgebraicNumber& v) {
    Rational r = v.rational_value();
    if (r < 0) return std::nullopt;
    auto n = exact_root(r.get_num(), 2);
    auto d = exact_root(r.get_den(), 2);
    if (!n || !d) return std::nullopt;
    return v.field().from_rational(make_rational(*n, *d));
}

zmod::ZmPoly reduce_rational_poly(const QPoly& g, const Integer& m) {
    zmod::ZmPoly out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        Integer inv;
        Integer den = g[i].get_den();
        if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
            fail(ErrorCode::precondition, "denominator not invertible modulo the lifting modulus");
        Integer x = g[i].get_num() * inv;
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        out[i] = x;
    }
    zmod::trim(out);
    return out;
}

// Newton iteration y <- y (3 - v y^2) / 2 from y0 with y0^2 v = 1 mod p.
zmod::ZmPoly lift_inverse_sqrt(const zmod::ZmPoly& vM, const ZPoly& f, const FpPoly& y0,
                               const Integer& p, const Integer& M) {
    zmod::ZmPoly y = zmod::from_fp(y0);
    Integer m = p;
    while (m < M) {
        m = std::min<Integer>(m * m, M);
        zmod::ZmPoly fm = zmod::reduce(f, m);
        zmod::ZmPoly vm = vM;
        for (auto& c : vm) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
        zmod::ZmPoly y2 = zmod::mulmod(y, y, fm, m);
        zmod::ZmPoly vy2 = zmod::mulmod(vm, y2, fm, m);
        zmod::ZmPoly t = zmod::sub(zmod::ZmPoly{Integer(3)}, vy2, m);
        Integer half;
        Integer two(2);
        mpz_invert(half.get_mpz_t(), two.get_mpz_t(), m.get_mpz_t());
        y = zmod::scale(zmod::mulmod(y, t, fm, m), half, m);
    }
    return y;
}

}  // namespace

std::optional<AlgebraicNumber> sqrt_in_field(const AlgebraicNumber& v) {
    if (!v.valid()) fail(ErrorCode::invalid_input, "uninitialised field element");
    if (v.is_zero()) fail(ErrorCode::precondition, "square root of zero requested");
    const NumberField& F = v.field();
    if (F.degree() == 1) return sqrt_rational(v);
    const FieldData& D = F.data();
    const ZPoly& f = D.f;
    const QPoly g = F.to_absolute(v);
    Integer den = 1;
    for (const auto& c : g) den = lcm(den, Integer(c.get_den()));

    // Residue analysis at several good primes.
    std::optional<LocalData> best;
    unsigned good = 0;
    Integer p(kFirstPrime);
    for (unsigned scanned = 0; scanned < 400 && good < kGoodPrimes; ++scanned, p = next_prime(p)) {
        if (mpz_divisible_p(D.disc.get_mpz_t(), p.get_mpz_t()) || mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t()))
            continue;
        Fp fp(p.get_ui());
        FpPoly gr = fp.reduce(g);
        auto facs = fp.factor_squarefree(fp.reduce(f));
        LocalData local{p.get_ui(), facs, {}};
        bool unit = true;
        for (const auto& fac : facs) {
            FpPoly a = fp.rem(gr, fac);
            if (a.empty()) {
                unit = false;
                break;
            }
            auto r = fp.sqrt_mod_irreducible(a, fac);
            if (!r) return std::nullopt;  // non-square residue: v is not a square
            local.roots.push_back(*r);
        }
        if (!unit) continue;
        ++good;
        if (!best || local.factors.size() < best->factors.size()) best = std::move(local);
    }
    if (!best) fail(ErrorCode::undecided, "no prime of good reduction where the radicand is a unit");

    const std::uint64_t pw = best->p;
    const Integer P(static_cast<unsigned long>(pw));
    Fp fp(pw);
    const FpPoly fr = fp.reduce(f);
    const std::size_t k = best->factors.size();
    if (k > 20) fail(ErrorCode::budget_exceeded, "too many local factors for the sign search");

    // CRT idempotents for F_p[x]/(f) = prod F_p[x]/(f_j).
    std::vector<FpPoly> idem(k);
    for (std::size_t j = 0; j < k; ++j) {
        FpPoly cof, rem;
        fp.divmod(fr, best->factors[j], cof, rem);
        FpPoly inv = fp.invmod(fp.rem(cof, best->factors[j]), best->factors[j]);
        idem[j] = fp.rem(fp.mul(cof, inv), fr);
    }

    std::vector<std::vector<Integer>> V(D.degree, std::vector<Integer>(D.degree));
    for (std::size_t i = 0; i < D.degree; ++i)
        for (std::size_t j = 0; j < D.degree; ++j) {
            if (D.V[i][j].get_den() != 1) fail(ErrorCode::precondition, "power basis of the primitive element is not integral");
            V[i][j] = D.V[i][j].get_num();
        }

    const double log2p = std::log2(static_cast<double>(pw));
    for (unsigned long bits = 256; bits <= kMaxPrecisionBits; bits *= 2) {
        unsigned long N = static_cast<unsigned long>(std::ceil(static_cast<double>(bits) / log2p));
        Integer M = ipow(P, N);
        zmod::ZmPoly vM = reduce_rational_poly(g, M);
        zmod::ZmPoly fM = zmod::reduce(f, M);
        for (unsigned long mask = 0; mask < (1ul << (k - 1)); ++mask) {
            FpPoly r;
            for (std::size_t j = 0; j < k; ++j) {
                FpPoly rj = best->roots[j];
                if (j > 0 && ((mask >> (j - 1)) & 1)) rj = fp.scale(rj, pw - 1);
                r = fp.add(r, fp.mulmod(rj, idem[j], fr));
            }
            FpPoly y0 = fp.invmod(r, fr);
            zmod::ZmPoly y = lift_inverse_sqrt(vM, f, y0, P, M);
            zmod::ZmPoly w = zmod::mulmod(vM, y, fM, M);
            w.resize(D.degree, Integer(0));
            QVector coords(D.degree);
            bool ok = true;
            for (std::size_t i = 0; i < D.degree && ok; ++i) {
                Integer acc = 0;
                for (std::size_t j = 0; j < D.degree; ++j)
                    if (V[i][j] != 0 && w[j] != 0) acc += V[i][j] * w[j];
                mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), M.get_mpz_t());
                auto q = rational_reconstruct(acc, M);
                if (!q) ok = false;
                else coords[i] = *q;
            }
            if (!ok) continue;
            AlgebraicNumber cand(F, std::move(coords));
            if (cand * cand == v) return cand;
        }
    }
    fail(ErrorCode::undecided, "square root search exhausted its precision budget");
}

}  // namespace edsfrey

#include "edsfrey/frey.hpp"

#include "edsfrey/error.hpp"

#include <algorithm>

namespace edsfrey {

namespace {

bool same_ideal(const PrimeIdealData& a, const PrimeIdealData& b) { return a.p == b.p && a.label == b.label; }

bool contains_ideal(const std::vector<PrimeIdealData>& v, const PrimeIdealData& q) {
    return std::any_of(v.begin(), v.end(), [&](const PrimeIdealData& x) {
        return same_ideal(x, q) || (!x.safe && x.p == q.p);
    });
}

void add_unique(std::vector<PrimeIdealData>& v, const PrimeIdealData& q) {
    if (!std::any_of(v.begin(), v.end(), [&](const PrimeIdealData& x) { return same_ideal(x, q); })) v.push_back(q);
}

std::vector<Integer> fully_factor(const Integer& n, std::uint64_t bound, const std::string& what) {
    auto pf = prime_divisors(abs(n), bound);
    if (!pf) fail(ErrorCode::budget_exceeded, "could not factor " + what + " within the trial-division bound");
    return *pf;
}

Integer abs_integral_norm(const AlgebraicNumber& a) {
    Rational n = a.norm();
    if (n.get_den() != 1) fail(ErrorCode::verification_failed, "norm of an integral element is not an integer");
    return abs(n.get_num());
}

Integer strip(Integer n, const std::vector<Integer>& primes) {
    for (const auto& p : primes)
        while (n != 0 && mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) n /= p;
    return n;
}

AlgebraicNumber canonical_sign(const AlgebraicNumber& a) {
    for (const auto& c : a.coords()) {
        if (c == 0) continue;
        return c < 0 ? -a : a;
    }
    return a;
}

}  // namespace

bool SupportSets::in_S(const PrimeIdealData& q) const { return contains_ideal(S, q); }
bool SupportSets::in_T(const PrimeIdealData& q) const { return contains_ideal(T, q); }

std::vector<PrimeIdealData> bad_ideals(const NumberField& L, const Integer& delta_E, std::uint64_t trial_bound) {
    std::set<Integer> primes;
    for (const auto& p : fully_factor(2 * delta_E, trial_bound, "2*Delta_E")) primes.insert(p);
    for (const auto& p : fully_factor(L.disc_multiple(), trial_bound, "the equation-order discriminant")) primes.insert(p);
    std::vector<PrimeIdealData> out;
    for (const auto& p : primes) {
        if (mpz_divisible_p(L.disc_multiple().get_mpz_t(), p.get_mpz_t())) {
            out.push_back(unsafe_placeholder(L, p));
        } else {
            for (auto& q : split_prime(L, p)) out.push_back(std::move(q));
        }
    }
    return out;
}

SupportSets build_support(const FieldTower& tower, const WeierstrassModel& model, EDSequence& seq,
                          unsigned long silverman_start, const SupportOptions& opt) {
    if (seq.B(1) <= 1) fail(ErrorCode::precondition, "B_1 = 1: the generator is integral");
    SupportSets sup;
    const NumberField& L = tower.L;
    MinkowskiData mk = minkowski_T(L, opt.minkowski_budget);
    sup.minkowski = mk.bound;
    sup.T = mk.T;
    sup.S = mk.T;
    for (const auto& q : bad_ideals(L, model.delta(), opt.trial_division_bound)) add_unique(sup.S, q);
    std::sort(sup.S.begin(), sup.S.end());
    for (const auto& q : sup.S) sup.T_rational.insert(q.p);
    sup.certificate = kappa_certificate(seq, sup.T_rational, silverman_start, opt.kappa);
    auto above = split_prime(L, sup.certificate.p);
    sup.frak_p = above.front();
    if (sup.in_S(sup.frak_p)) fail(ErrorCode::verification_failed, "the certificate prime lies in S");
    return sup;
}

void check_descent_identity(const FieldTower& tower, const DescentTriple& t) {
    const NumberField& L = tower.L;
    AlgebraicNumber fourA = L.from_rational(Rational(4 * t.A));
    Rational B2(t.B * t.B);
    for (int i = 0; i < 3; ++i) {
        if (!t.eps[i].valid()) fail(ErrorCode::verification_failed, "missing descent element");
        if (t.eps[i] * t.eps[i] + tower.theta[i] * B2 != fourA)
            fail(ErrorCode::verification_failed, "eps_" + std::to_string(i + 1) + "^2 != 4A - theta B^2");
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (t.eps[i] == t.eps[j] || t.eps[i] == -t.eps[j])
                fail(ErrorCode::verification_failed, "eps_i = +-eps_j");
}

DescentTriple descent_triple(const FieldTower& tower, EDSequence& seq, unsigned long n) {
    const PointDecomposition& d = seq.term(n);
    DescentTriple t;
    t.n = n;
    t.A = d.A;
    t.B = d.B;
    const NumberField& L = tower.L;
    AlgebraicNumber fourA = L.from_rational(Rational(4 * d.A));
    Rational B2(d.B * d.B);
    for (int i = 0; i < 3; ++i) {
        AlgebraicNumber v = fourA - tower.theta[i] * B2;
        std::optional<AlgebraicNumber> r;
        // Even multiples are already squares in K.
        if (n % 2 == 0 && tower.K != L) {
            if (auto vk = restrict_to_subfield(v, tower.K)) {
                if (auto rk = sqrt_in_field(*vk)) r = L.embed(*rk);
            }
        }
        if (!r) r = sqrt_in_field(v);
        if (!r) fail(ErrorCode::verification_failed, "4A - theta_" + std::to_string(i + 1) + " B^2 is not a square in L");
        t.eps[i] = canonical_sign(*r);
    }
    check_descent_identity(tower, t);
    return t;
}

GcdSupportReport gcd_support_check(const FieldTower& tower, const WeierstrassModel& model, const DescentTriple& t,
                                   std::uint64_t trial_bound) {
    check_descent_identity(tower, t);
    GcdSupportReport rep;
    const NumberField& L = tower.L;
    auto bad = fully_factor(2 * model.delta(), trial_bound, "2*Delta_E");
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            GcdPairCertificate c;
            c.i = i + 1;
            c.j = j + 1;
            AlgebraicNumber dm = t.eps[i] - t.eps[j], dp = t.eps[i] + t.eps[j];
            c.norm_minus = abs_integral_norm(dm);
            c.norm_plus = abs_integral_norm(dp);
            c.gcd = gcd(c.norm_minus, c.norm_plus);
            c.residual = strip(c.gcd, bad);
            if (c.residual == 1) {
                c.passed = true;
            } else {
                // Some rational prime outside 2*Delta_E divides both norms;
                // check the ideals above it directly.
                auto f = factor_trial(c.residual, trial_bound);
                if (f.cofactor != 1) {
                    c.note = "residual " + to_string(c.residual) + " could not be factored";
                } else {
                    c.passed = true;
                    for (auto& [r, e] : f.primes) {
                        if (mpz_divisible_p(L.disc_multiple().get_mpz_t(), r.get_mpz_t())) {
                            c.passed = false;
                            c.note = "prime " + to_string(r) + " divides the discriminant multiple";
                            break;
                        }
                        for (const auto& q : split_prime(L, r)) {
                            if (q.divides(dm) && q.divides(dp)) {
                                c.passed = false;
                                c.note = "ideal " + q.label + " divides both eps_i - eps_j and eps_i + eps_j";
                            }
                        }
                    }
                    if (c.passed) c.note = "residual primes checked ideal by ideal";
                }
            }
            rep.passed = rep.passed && c.passed;
            rep.pairs.push_back(std::move(c));
        }
    }
    return rep;
}

DescentTriple normalize_signs(const DescentTriple& t, const PrimeIdealData& frak_p) {
    DescentTriple r = t;
    auto& e = r.eps;
    if (!frak_p.divides(e[0] - e[1])) {
        if (!frak_p.divides(e[0] + e[1]))
            fail(ErrorCode::precondition, "prime " + frak_p.label + " divides neither eps1 - eps2 nor eps1 + eps2");
        e[1] = -e[1];
        r.signs[1] = -r.signs[1];
    }
    if (!frak_p.divides(e[1] + e[2])) {
        if (!frak_p.divides(e[1] - e[2]))
            fail(ErrorCode::precondition, "prime " + frak_p.label + " divides neither eps2 + eps3 nor eps2 - eps3");
        e[2] = -e[2];
        r.signs[2] = -r.signs[2];
    }
    if (frak_p.divides(e[1] - e[2]) || frak_p.divides(e[2] - e[0]))
        fail(ErrorCode::verification_failed, "sign pattern at " + frak_p.label + " is not p | w1, p !| w2, p !| w3");
    r.sign_normalized = true;
    return r;
}

bool gcd_ideal_supported_on(const std::array<AlgebraicNumber, 3>& z, const std::vector<PrimeIdealData>& T,
                            std::uint64_t trial_bound) {
    Integer G = 0;
    for (const auto& zi : z) G = gcd(G, abs_integral_norm(zi));
    if (G == 1) return true;
    auto f = factor_trial(G, trial_bound);
    if (f.cofactor != 1) return false;
    const NumberField& L = z[0].field();
    for (auto& [q, e] : f.primes) {
        if (mpz_divisible_p(L.disc_multiple().get_mpz_t(), q.get_mpz_t())) {
            if (!contains_ideal(T, unsafe_placeholder(L, q))) return false;
            continue;
        }
        for (const auto& id : split_prime(L, q)) {
            if (contains_ideal(T, id)) continue;
            if (id.divides(z[0]) && id.divides(z[1]) && id.divides(z[2])) return false;
        }
    }
    return true;
}

ScaledTriple scale_integral(const DescentTriple& t, const std::vector<PrimeIdealData>& T, const ScaleOptions& opt) {
    if (!t.sign_normalized) fail(ErrorCode::precondition, "descent triple is not sign-normalized");
    ScaledTriple s;
    s.w = {t.eps[0] - t.eps[1], t.eps[1] - t.eps[2], t.eps[2] - t.eps[0]};
    const NumberField& L = s.w[0].field();
    auto try_alpha = [&](const AlgebraicNumber& alpha) {
        std::array<AlgebraicNumber, 3> z{s.w[0] * alpha, s.w[1] * alpha, s.w[2] * alpha};
        for (const auto& zi : z)
            if (!zi.is_integral()) return false;
        if (!gcd_ideal_supported_on(z, T, opt.trial_division_bound)) return false;
        s.z = z;
        s.alpha = alpha;
        return true;
    };
    // Rational content first: over Q this is alpha = 1/gcd.
    Integer g = 0;
    for (const auto& w : s.w)
        for (const auto& c : w.coords()) {
            if (c.get_den() != 1) fail(ErrorCode::verification_failed, "w has non-integral coordinates");
            g = gcd(g, c.get_num());
        }
    if (g == 0) fail(ErrorCode::degenerate, "all w_i vanish");
    if (try_alpha(L.from_rational(make_rational(Integer(1), g)))) {
        s.method = "rational-gcd";
        return s;
    }
    // Bounded search for beta | w_i with alpha = 1/beta.
    Integer G = 0;
    for (const auto& w : s.w) G = gcd(G, abs_integral_norm(w));
    const std::size_t d = L.degree();
    const long H = static_cast<long>(opt.height);
    std::vector<long> coeff(d, -H);
    unsigned long tried = 0;
    for (long height = 1; height <= H; ++height) {
        std::fill(coeff.begin(), coeff.end(), -height);
        while (true) {
            long mx = 0;
            for (long c : coeff) mx = std::max(mx, std::labs(c));
            if (mx == height) {
                if (++tried > opt.max_candidates) fail(ErrorCode::budget_exceeded, "alpha search budget exhausted");
                QVector v(d);
                for (std::size_t i = 0; i < d; ++i) v[i] = coeff[i];
                AlgebraicNumber beta(L, v);
                Integer nb = abs_integral_norm(beta);
                if (nb > 1 && mpz_divisible_p(G.get_mpz_t(), nb.get_mpz_t()) && try_alpha(beta.inverse())) {
                    s.method = "bounded-search";
                    return s;
                }
            }
            std::size_t k = 0;
            while (k < d && coeff[k] == height) coeff[k++] = -height;
            if (k == d) break;
            ++coeff[k];
        }
    }
    fail(ErrorCode::budget_exceeded, "no scaling element alpha found within the height bound");
}

const char* to_string(Reduction r) {
    switch (r) {
        case Reduction::good: return "good";
        case Reduction::multiplicative: return "multiplicative";
        case Reduction::additive: return "additive";
        case Reduction::unclassified: return "unclassified";
    }
    return "unclassified";
}

FreyCurve build_frey(const AlgebraicNumber& z1, const AlgebraicNumber& z2, const AlgebraicNumber& z3) {
    if (z1.is_zero() || z2.is_zero() || z3.is_zero()) fail(ErrorCode::degenerate, "some z_i is zero");
    if (!(z1 + z2 + z3).is_zero()) fail(ErrorCode::precondition, "z1 + z2 + z3 != 0");
    for (const auto* z : {&z1, &z2, &z3})
        if (!z->is_integral()) fail(ErrorCode::precondition, "z_i must be integral");
    FreyCurve F;
    NumberField L = z1.field();
    for (const auto* z : {&z2, &z3})
        if (z->field().contains_subfield(L)) L = z->field();
    F.z = {L.embed(z1), L.embed(z2), L.embed(z3)};
    const auto& [a, b, c] = F.z;
    AlgebraicNumber prod = a * b * c;
    F.delta_F = prod * prod * 16;
    F.c4_F = (a * a - b * c) * 16;
    if ((b * b - c * a) * 16 != F.c4_F || (c * c - a * b) * 16 != F.c4_F)
        fail(ErrorCode::verification_failed, "the three c4 expressions disagree");
    AlgebraicNumber zero = L.zero();
    F.a = {zero, -(a - b), zero, -(a * b), zero};
    auto inv = weierstrass_invariants(F.a[0], F.a[1], F.a[2], F.a[3], F.a[4]);
    if (inv.delta != F.delta_F) fail(ErrorCode::verification_failed, "closed-form Delta_F disagrees with the general formula");
    if (inv.c4 != F.c4_F) fail(ErrorCode::verification_failed, "closed-form c4 disagrees with the general formula");
    return F;
}

PropReport verify_prop_conclusions(FreyCurve& frey, const SupportSets& support, unsigned long ell,
                                   const Integer& norm_bound) {
    PropReport rep;
    rep.ell = ell;
    rep.norm_bound = norm_bound;
    const NumberField& L = frey.z[0].field();
    frey.reduction.clear();
    auto divisible = [&](long v) { return ell <= 1 || v % static_cast<long>(ell) == 0; };

    for (auto p64 : primes_up_to(norm_bound.get_ui())) {
        Integer p(static_cast<unsigned long>(p64));
        if (mpz_divisible_p(L.disc_multiple().get_mpz_t(), p.get_mpz_t())) {
            auto ph = unsafe_placeholder(L, p);
            if (!support.in_S(ph)) rep.violations.push_back("unsafe prime " + to_string(p) + " missing from S");
            frey.reduction[ph.label] = Reduction::unclassified;
            continue;
        }
        for (const auto& q : split_prime(L, p)) {
            if (q.norm > norm_bound) continue;
            PrimeCheck pc;
            pc.label = q.label;
            pc.norm = q.norm;
            if (support.in_S(q)) {
                pc.type = Reduction::unclassified;
                frey.reduction[q.label] = pc.type;
                rep.primes.push_back(pc);
                continue;
            }
            pc.v_delta = q.valuation(frey.delta_F);
            if (pc.v_delta == 0) {
                pc.type = Reduction::good;
            } else {
                pc.v_c4 = frey.c4_F.is_zero() ? 1 : q.valuation(frey.c4_F);
                pc.type = pc.v_c4 == 0 ? Reduction::multiplicative : Reduction::additive;
            }
            if (pc.type == Reduction::additive) {
                pc.ok = false;
                rep.violations.push_back("(a) additive reduction at " + q.label + " outside S");
            }
            if (!divisible(pc.v_delta)) {
                pc.ok = false;
                rep.violations.push_back("(a) ell does not divide v(Delta_F) at " + q.label);
            }
            frey.reduction[q.label] = pc.type;
            rep.primes.push_back(pc);
        }
    }

    const PrimeIdealData& P = support.frak_p;
    long v1 = P.valuation(frey.z[0]), v2 = P.valuation(frey.z[1]), v3 = P.valuation(frey.z[2]);
    rep.frak_p_pattern = v1 > 0 && v2 == 0 && v3 == 0;
    if (!rep.frak_p_pattern) rep.violations.push_back("(b) pattern p | z1, p !| z2, p !| z3 fails at " + P.label);
    long vd = P.valuation(frey.delta_F);
    long vc = frey.c4_F.is_zero() ? 1 : P.valuation(frey.c4_F);
    rep.frak_p_multiplicative = vd > 0 && vc == 0;
    if (!rep.frak_p_multiplicative) rep.violations.push_back("(b) reduction at " + P.label + " is not multiplicative");
    if (!divisible(vd)) rep.violations.push_back("(b) ell does not divide v(Delta_F) at " + P.label);
    frey.reduction[P.label] = rep.frak_p_multiplicative ? Reduction::multiplicative : Reduction::additive;

    std::vector<Integer> tr(support.T_rational.begin(), support.T_rational.end());
    rep.norm_certificate = true;
    if (ell > 1) {
        for (const auto& z : frey.z) {
            Integer n = strip(abs_integral_norm(z), tr);
            if (!exact_root(n, ell)) rep.norm_certificate = false;
        }
    }
    if (!rep.norm_certificate) rep.violations.push_back("rational-norm certificate: stripped norms are not ell-th powers");
    return rep;
}

SyntheticInstance synthetic_instance(const Integer& p, unsigned long ell, const Integer& s, const Integer& t) {
    if (!is_probable_prime(p) || ell < 2) fail(ErrorCode::invalid_input, "synthetic instance needs a prime p and ell >= 2");
    if (mpz_divisible_p(s.get_mpz_t(), p.get_mpz_t()) || mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t()))
        fail(ErrorCode::invalid_input, "p must not divide s or t");
    Integer z1 = ipow(p, ell) * s, z2 = t, z3 = -z1 - z2;
    if (gcd(z1, z2) != 1) fail(ErrorCode::invalid_input, "z1 and z2 must be coprime");
    NumberField Q = NumberField::rationals();
    SyntheticInstance inst;
    inst.ell = ell;
    std::set<Integer> bad{Integer(2)};
    for (const auto& z : {z1, z2, z3})
        for (const auto& q : fully_factor(z, 1000000, "a synthetic z_i"))
            if (q != p && valuation(Integer(abs(z)), q) % ell != 0) bad.insert(q);
    for (const auto& q : bad)
        for (auto& id : split_prime(Q, q)) inst.support.S.push_back(id);
    inst.support.T_rational = bad;
    inst.support.minkowski = minkowski_bound(Integer(1), 1, 0);
    inst.support.frak_p = split_prime(Q, p).front();
    if (inst.support.in_S(inst.support.frak_p)) fail(ErrorCode::invalid_input, "p lies in S");
    inst.frey = build_frey(Q.from_rational(Rational(z1)), Q.from_rational(Rational(z2)), Q.from_rational(Rational(z3)));
    return inst;
}

bool PipelineResult::passed() const {
    if (!gcd.passed || !scaled || !prop) return false;
    return prop->passed();
}

PipelineResult run_frey_pipeline(const WeierstrassModel& model, EDSequence& seq, unsigned long n,
                                 const PipelineOptions& opt) {
    if (n == 0) fail(ErrorCode::invalid_input, "n must be positive");
    PipelineResult res;
    res.n = n;
    auto [sm, P] = to_short_model(model, seq.generator());
    res.tower = build_tower(sm, P.x(), P.y());
    res.support = build_support(res.tower, model, seq, opt.silverman_start, opt.support);
    res.triple = descent_triple(res.tower, seq, n);
    res.gcd = gcd_support_check(res.tower, model, res.triple, opt.support.trial_division_bound);
    res.power = perfect_power_decomposition(res.triple.B);
    if (!res.gcd.passed) res.notes.push_back("gcd support check failed");

    // Candidate primes for the sign pattern, in order of preference.
    const NumberField& L = res.tower.L;
    std::vector<std::pair<Integer, std::string>> candidates;
    if (opt.prime) {
        candidates.emplace_back(*opt.prime, "option");
    } else {
        if (mpz_divisible_p(res.triple.B.get_mpz_t(), res.support.certificate.p.get_mpz_t()))
            candidates.emplace_back(res.support.certificate.p, "certificate");
        auto f = factor_trial(res.triple.B, opt.support.trial_division_bound);
        for (auto& [q, e] : f.primes)
            if (!res.support.T_rational.count(q)) candidates.emplace_back(q, "B_n");
    }
    std::optional<DescentTriple> normalized;
    for (const auto& [q, source] : candidates) {
        if (mpz_divisible_p(L.disc_multiple().get_mpz_t(), q.get_mpz_t())) {
            res.notes.push_back("pattern prime " + to_string(q) + " divides disc_multiple");
            continue;
        }
        for (const auto& id : split_prime(L, q)) {
            if (res.support.in_S(id)) continue;
            try {
                normalized = normalize_signs(res.triple, id);
            } catch (const Error&) {
                continue;
            }
            res.pattern_prime = id;
            res.pattern_source = source;
            break;
        }
        if (normalized) break;
    }
    if (!normalized) {
        res.notes.push_back("no prime outside S gives the sign pattern; scaling and Frey steps skipped");
        return res;
    }
    res.triple = *normalized;
    res.scaled = scale_integral(res.triple, res.support.T, opt.scale);
    const auto& z = res.scaled->z;
    res.frey = build_frey(z[0], z[1], z[2]);
    SupportSets at_pattern = res.support;
    at_pattern.frak_p = *res.pattern_prime;
    unsigned long ell = res.power.second >= 2 ? res.power.second : 1;
    res.prop = verify_prop_conclusions(*res.frey, at_pattern, ell, opt.prop_norm_bound);
    if (ell == 1) res.notes.push_back("B_n is not a perfect power; ell-divisibility clauses are vacuous");
    return res;
}

}  // namespace edsfrey

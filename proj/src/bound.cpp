#include "edsfrey/bound.hpp"

#include "edsfrey/error.hpp"

#include <algorithm>

namespace edsfrey {

std::string describe(const IdealDescription& d) {
    std::string s;
    for (const auto& q : d) {
        if (q.exp == 0) continue;
        if (!s.empty()) s += "*";
        s += q.label;
        if (q.exp > 1) s += "^" + std::to_string(q.exp);
    }
    return s.empty() ? "(1)" : s;
}

IdealDescription normalized(IdealDescription d) {
    d.erase(std::remove_if(d.begin(), d.end(), [](const IdealPower& q) { return q.exp == 0; }), d.end());
    std::sort(d.begin(), d.end(), [](const IdealPower& a, const IdealPower& b) { return a.label < b.label; });
    return d;
}

LevelRecipe level_recipe(const IdealDescription& conductor, const std::map<std::string, long>& delta_vals,
                         unsigned long ell) {
    if (ell < 2) fail(ErrorCode::invalid_input, "ell must be at least 2");
    LevelRecipe r;
    r.conductor = normalized(conductor);
    for (const auto& q : r.conductor) {
        if (q.exp < 1) fail(ErrorCode::invalid_input, "conductor exponents must be positive");
        auto it = delta_vals.find(q.label);
        bool removable = q.exp == 1 && it != delta_vals.end() && it->second % static_cast<long>(ell) == 0;
        if (removable) r.M.push_back(q);
        else r.N.push_back(q);
    }
    return r;
}

unsigned conductor_exponent_cap(std::size_t degree) { return static_cast<unsigned>(2 + 6 * degree); }

unsigned conductor_exponent_bound(const NumberField& L, const PrimeIdealData& q) {
    if (!q.safe) return conductor_exponent_cap(L.degree());
    unsigned v3 = q.p == 3 ? q.e : 0;
    unsigned v2 = q.p == 2 ? q.e : 0;
    return std::min(2 + 3 * v3 + 6 * v2, conductor_exponent_cap(L.degree()));
}

Integer level_count(const std::vector<PrimeIdealData>& S, const NumberField& L) {
    Integer n = 1;
    for (const auto& q : S) n *= conductor_exponent_bound(L, q) + 1;
    return n;
}

std::vector<IdealDescription> enumerate_levels(const std::vector<PrimeIdealData>& S, const NumberField& L,
                                               unsigned long max_count) {
    Integer total = level_count(S, L);
    if (total > max_count)
        fail(ErrorCode::budget_exceeded, to_string(total) + " candidate levels exceed the limit " + std::to_string(max_count));
    std::vector<unsigned> bound, e(S.size(), 0);
    for (const auto& q : S) bound.push_back(conductor_exponent_bound(L, q));
    std::vector<IdealDescription> out;
    out.reserve(total.get_ui());
    while (true) {
        IdealDescription d;
        for (std::size_t i = 0; i < S.size(); ++i)
            if (e[i]) d.push_back({S[i].label, S[i].p, S[i].norm, e[i]});
        out.push_back(normalized(std::move(d)));
        std::size_t k = 0;
        while (k < S.size() && e[k] == bound[k]) e[k++] = 0;
        if (k == S.size()) break;
        ++e[k];
    }
    return out;
}

const HeckeEigenvalue* EigenformData::find(const std::string& l) const {
    for (const auto& a : ap)
        if (a.label == l) return &a;
    return nullptr;
}

namespace {

QMatrix companion_power_sum(const ZPoly& h, const QVector& coords) {
    const std::size_t d = h.size() - 1;
    QMatrix C(d, QVector(d, Rational(0)));
    for (std::size_t i = 1; i < d; ++i) C[i][i - 1] = 1;
    for (std::size_t i = 0; i < d; ++i) C[i][d - 1] = -Rational(h[i]);
    QMatrix M(d, QVector(d, Rational(0))), P = identity_matrix(d);
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (coords[k] != 0)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) M[i][j] += coords[k] * P[i][j];
        P = mat_mul(P, C);
    }
    return M;
}

Integer integer_norm(const ZPoly& h, const QPoly& g) {
    Rational r = poly::resultant(poly::to_q(h), g);
    if (r.get_den() != 1) fail(ErrorCode::invalid_input, "eigenvalue is not integral over Z");
    return abs(r.get_num());
}

}  // namespace

bool ramanujan_check(const ZPoly& h, const QVector& coords, const Integer& four_norm) {
    QPoly chi = charpoly(companion_power_sum(h, coords));
    // R(v) = E(v)^2 - v O(v)^2 has the squares of the conjugates as roots.
    QPoly E, O;
    for (std::size_t k = 0; k < chi.size(); ++k) (k % 2 == 0 ? E : O).push_back(chi[k]);
    QPoly R = poly::sub(poly::mul(E, E), poly::mul(QPoly{Rational(0), Rational(1)}, poly::mul(O, O)));
    poly::trim(R);
    QPoly g = poly::monic_gcd(R, poly::derivative(R));
    QPoly sq = poly::divmod(R, g).first;
    int distinct = poly::degree(sq);
    Rational hi(four_norm);
    int inside = poly::sturm_count(sq, Rational(0), hi);
    if (poly::eval(sq, Rational(0)) == 0) ++inside;
    if (poly::eval(sq, hi) == 0) --inside;
    return inside == distinct;
}

CongruenceResult congruence_bound(const Integer& N_p, const EigenformData& form, const std::string& p_label,
                                  std::uint64_t trial_bound) {
    if (form.hecke_poly.size() < 2 || form.hecke_poly.back() != 1)
        fail(ErrorCode::invalid_input, "Hecke polynomial of " + form.label + " must be monic of positive degree");
    const HeckeEigenvalue* a = form.find(p_label);
    if (!a) fail(ErrorCode::invalid_input, "form " + form.label + " has no eigenvalue at " + p_label);
    if (a->norm != N_p) fail(ErrorCode::invalid_input, "norm mismatch for " + p_label + " in " + form.label);
    CongruenceResult r;
    r.ramanujan = ramanujan_check(form.hecke_poly, a->coords, 4 * N_p);
    QPoly ap(a->coords.begin(), a->coords.end());
    QPoly c{Rational(N_p + 1)};
    r.norm_minus = integer_norm(form.hecke_poly, poly::sub(c, ap));
    r.norm_plus = integer_norm(form.hecke_poly, poly::add(c, ap));
    if (r.norm_minus == 0 || r.norm_plus == 0)
        fail(ErrorCode::invalid_input, "zero norm for " + form.label + ": eigenvalue data violates the Ramanujan bound");
    for (const Integer* n : {&r.norm_minus, &r.norm_plus}) {
        auto f = factor_trial(*n, trial_bound);
        for (auto& [p, e] : f.primes) r.primes.insert(p);
        if (f.cofactor != 1) r.residual *= f.cofactor;
    }
    for (const auto& p : r.primes)
        if (!mpz_divisible_p(r.norm_minus.get_mpz_t(), p.get_mpz_t()) &&
            !mpz_divisible_p(r.norm_plus.get_mpz_t(), p.get_mpz_t()))
            fail(ErrorCode::verification_failed, "congruence prime divides neither norm");
    return r;
}

BoundReport assemble_bound(const BoundConfig& config, const NumberField& L, const SupportSets& support,
                           const KappaCertificate& cert, const std::vector<EigenformData>& forms) {
    if (config.C_L < 1) fail(ErrorCode::config, "C_L must be at least 1");
    BoundReport rep;
    rep.disc_multiple = abs(L.disc_multiple());
    rep.C_L = config.C_L;
    rep.norm_p = support.frak_p.norm;
    rep.kappa = cert.kappa;
    if (config.assume_modularity) {
        rep.kappa1 = 0;
    } else if (config.kappa1) {
        rep.kappa1 = *config.kappa1;
    } else {
        fail(ErrorCode::config, "kappa1 must be supplied when modularity is not assumed");
    }
    rep.kappa2 = 0;
    for (const auto& q : support.S) rep.kappa2 = std::max(rep.kappa2, q.norm);
    rep.kappa_prime = std::max({Integer(4), rep.disc_multiple, rep.C_L, rep.norm_p, rep.kappa, rep.kappa1, rep.kappa2});
    rep.final_bound = rep.kappa_prime;

    for (const auto& form : forms) {
        FormContribution fc;
        fc.label = form.label;
        fc.level = describe(normalized(form.level));
        fc.result = congruence_bound(rep.norm_p, form, support.frak_p.label);
        for (const auto& p : fc.result.primes) rep.final_bound = std::max(rep.final_bound, p);
        rep.final_bound = std::max(rep.final_bound, fc.result.residual);
        if (!fc.result.ramanujan) fc.note = "eigenvalue fails the Ramanujan check";
        rep.forms.push_back(std::move(fc));
    }

    rep.level_count = level_count(support.S, L);
    std::set<std::string> covered;
    for (const auto& fc : rep.forms) covered.insert(fc.level);
    for (const auto& lvl : enumerate_levels(support.S, L, config.max_levels)) {
        std::string s = describe(lvl);
        if (!covered.count(s)) rep.gaps.push_back(s);
    }
    return rep;
}

}  // namespace edsfrey

#include "edsfrey/eds.hpp"

#include "edsfrey/eds_checks.hpp"
#include "edsfrey/error.hpp"

#include <algorithm>
#include <mutex>

namespace edsfrey {

namespace {

// Dense extension beyond this many steps past the cached prefix switches to
// double-and-add for the single requested index.
constexpr unsigned long kDenseSlack = 64;

}  // namespace

std::string curve_hash(const WeierstrassModel& m, const RationalPoint& p) {
    std::string key = m.to_string() + ";";
    key += p.is_infinity() ? "O" : to_string(p.x()) + "," + to_string(p.y());
    return fnv1a_hex(key);
}

EDSequence::EDSequence(WeierstrassModel model, RationalPoint generator)
    : model_(std::move(model)), generator_(std::move(generator)) {
    if (generator_.is_infinity()) fail(ErrorCode::torsion_point, "generator is the point at infinity");
    if (!model_.contains(generator_)) fail(ErrorCode::not_on_curve, "generator not on " + model_.to_string());
    hash_ = curve_hash(model_, generator_);
}

unsigned long EDSequence::dense_size() const {
    std::shared_lock lock(mutex_);
    return dense_.size();
}

void EDSequence::extend_locked(unsigned long n) {
    while (dense_.size() < n) {
        unsigned long k = dense_.size() + 1;
        last_ = detail::add_unchecked(model_, last_, generator_);
        dense_.push_back(decompose_point(last_, k));
    }
}

void EDSequence::ensure(unsigned long n) {
    {
        std::shared_lock lock(mutex_);
        if (dense_.size() >= n) return;
    }
    std::unique_lock lock(mutex_);
    extend_locked(n);
}

const PointDecomposition& EDSequence::term(unsigned long n) {
    if (n == 0) fail(ErrorCode::invalid_input, "sequence index must be positive");
    {
        std::shared_lock lock(mutex_);
        if (n <= dense_.size()) return dense_[n - 1];
        auto it = sparse_.find(n);
        if (it != sparse_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (n <= dense_.size() + kDenseSlack) {
        extend_locked(n);
        return dense_[n - 1];
    }
    auto it = sparse_.find(n);
    if (it != sparse_.end()) return it->second;
    auto d = decompose(model_, generator_, n);
    return sparse_.emplace(n, std::move(d)).first->second;
}

std::vector<Integer> EDSequence::denominators(unsigned long n) {
    ensure(n);
    std::shared_lock lock(mutex_);
    std::vector<Integer> out;
    out.reserve(n);
    for (unsigned long i = 0; i < n; ++i) out.push_back(dense_[i].B);
    return out;
}

void EDSequence::preload(const std::vector<PointDecomposition>& terms) {
    std::unique_lock lock(mutex_);
    if (!dense_.empty()) return;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        if (t.n != i + 1) fail(ErrorCode::cache_corrupt, "cache records out of order");
        if (t.B < 1 || gcd(t.B, t.A * t.C) != 1)
            fail(ErrorCode::cache_corrupt, "cache record violates gcd(B, AC) = 1 at n=" + std::to_string(t.n));
        Rational x = make_rational(t.A, t.B * t.B);
        Rational y = make_rational(t.C, t.B * t.B * t.B);
        auto q = RationalPoint::affine(x, y);
        if (!model_.contains(q)) fail(ErrorCode::cache_corrupt, "cache record off the curve at n=" + std::to_string(t.n));
        dense_.push_back(t);
        last_ = q;
    }
    // Spot-check the chain: the last record must equal the previous one plus P.
    if (dense_.size() >= 2) {
        const auto& prev = dense_[dense_.size() - 2];
        auto p_prev = RationalPoint::affine(make_rational(prev.A, prev.B * prev.B),
                                            make_rational(prev.C, prev.B * prev.B * prev.B));
        if (!(detail::add_unchecked(model_, p_prev, generator_) == last_))
            fail(ErrorCode::cache_corrupt, "cache records are not consecutive multiples");
    } else if (dense_.size() == 1 && !(last_ == generator_)) {
        fail(ErrorCode::cache_corrupt, "first cache record is not the generator");
    }
}

std::vector<PointDecomposition> EDSequence::dense_terms() const {
    std::shared_lock lock(mutex_);
    return {dense_.begin(), dense_.end()};
}

unsigned valuation_of_term(EDSequence& seq, const Integer& p, unsigned long n) {
    const Integer& b = seq.B(n);
    if (mpz_divisible_p(b.get_mpz_t(), p.get_mpz_t()) == 0) return 0;
    return valuation(b, p);
}

ValuationLawReport check_valuation_law(EDSequence& seq, const Integer& p, unsigned long n, unsigned long m) {
    ValuationLawReport rep;
    rep.n = n;
    rep.m = m;
    rep.p = p;
    rep.v_n = valuation_of_term(seq, p, n);
    if (rep.v_n == 0) fail(ErrorCode::precondition, "v_p(B_n) must be positive");
    rep.v_nm = valuation_of_term(seq, p, n * m);
    Integer mz(m);
    rep.v_m = mpz_divisible_p(mz.get_mpz_t(), p.get_mpz_t()) ? valuation(mz, p) : 0u;
    rep.defect = static_cast<long>(rep.v_nm) - static_cast<long>(rep.v_n) - static_cast<long>(rep.v_m);
    rep.exact_law_applies = p != 2 || mpz_even_p(seq.model().a1().get_mpz_t());
    rep.passed = !rep.exact_law_applies || rep.defect == 0;
    return rep;
}

StrongDivisibilityReport check_strong_divisibility(EDSequence& seq, unsigned long max_index) {
    if (max_index < 2) fail(ErrorCode::precondition, "max_index must be at least 2");
    auto B = seq.denominators(max_index);
    return kernels::omp::strong_divisibility(B, max_index);
}

ValuationGridReport check_valuation_grid(EDSequence& seq, unsigned long max_product) {
    auto B = seq.denominators(max_product);
    bool a1_even = mpz_even_p(seq.model().a1().get_mpz_t()) != 0;
    return kernels::omp::valuation_grid(B, max_product, a1_even);
}

Integer primitive_divisor_cofactor(EDSequence& seq, unsigned long n) {
    if (n == 0) fail(ErrorCode::invalid_input, "index must be positive");
    auto B = seq.denominators(n);
    return kernels::primitive_cofactor(B, n);
}

PrimitiveDivisorReport check_primitive_divisors(EDSequence& seq, unsigned long from, unsigned long to) {
    PrimitiveDivisorReport rep;
    rep.from = from;
    rep.to = to;
    if (from == 0 || to < from) fail(ErrorCode::invalid_input, "bad primitive divisor range");
    auto B = seq.denominators(to);
    auto cof = kernels::omp::primitive_cofactors(B, from, to);
    for (unsigned long n = from; n <= to; ++n)
        if (cof[n - from] == 1) rep.without_primitive.push_back(n);
    return rep;
}

std::pair<Integer, unsigned long> perfect_power_decomposition(const Integer& N) {
    if (N < 1) fail(ErrorCode::invalid_input, "perfect power decomposition needs N >= 1");
    if (N == 1) return {Integer(1), 0};
    Integer u = N;
    unsigned long k = 1;
    // Peel prime exponents until none applies; the product is maximal.
    bool changed = true;
    while (changed && u > 3) {
        changed = false;
        if (mpz_perfect_power_p(u.get_mpz_t()) == 0) break;
        unsigned long top = mpz_sizeinbase(u.get_mpz_t(), 2);
        for (unsigned long ell = 2; ell <= top; ++ell) {
            if (!is_probable_prime(Integer(ell))) continue;
            if (auto r = exact_root(u, ell)) {
                u = *r;
                k *= ell;
                changed = true;
                break;
            }
        }
    }
    return {u, k};
}

std::vector<PowerInstance> find_power_terms(EDSequence& seq, unsigned long max_index, unsigned long min_exponent) {
    if (max_index < 1) fail(ErrorCode::invalid_input, "max_index must be positive");
    std::vector<PowerInstance> out;
    seq.ensure(max_index);
    for (unsigned long n = 1; n <= max_index; ++n) {
        const Integer& b = seq.B(n);
        if (b <= 1) continue;
        auto [u0, k] = perfect_power_decomposition(b);
        for (unsigned long ell = 2; ell <= k; ++ell) {
            if (k % ell != 0 || ell < min_exponent || !is_probable_prime(Integer(ell))) continue;
            out.push_back({n, ipow(u0, k / ell), ell});
        }
    }
    return out;
}

namespace {

Integer strip_primes(Integer c, const std::set<Integer>& T) {
    for (const auto& t : T)
        while (c > 1 && mpz_divisible_p(c.get_mpz_t(), t.get_mpz_t())) c /= t;
    return c;
}

std::optional<Integer> find_prime_outside(const Integer& value, const std::set<Integer>& T, std::uint64_t bound) {
    Integer c = strip_primes(value, T);
    if (c == 1) return std::nullopt;
    auto f = factor_trial(c, bound);
    for (auto& [p, e] : f.primes)
        if (!T.count(p)) return p;
    return std::nullopt;
}

}  // namespace

KappaCertificate kappa_certificate(EDSequence& seq, const std::set<Integer>& T,
                                   unsigned long silverman_start, const KappaOptions& opt) {
    const Integer B1 = seq.B(1);
    if (B1 <= 1) fail(ErrorCode::precondition, "B_1 = 1: the certificate needs a non-integral generator");
    auto fac = factor_trial(B1, opt.trial_division_bound);
    if (fac.cofactor != 1) fail(ErrorCode::budget_exceeded, "could not factor B_1 within the trial-division bound");

    bool a1_even = mpz_even_p(seq.model().a1().get_mpz_t()) != 0;
    struct Candidate {
        Integer q;
        unsigned vq;
        unsigned r;
        bool empirical;
    };
    std::vector<Candidate> candidates;
    for (auto& [q, e] : fac.primes) {
        if (q != 2) {
            candidates.push_back({q, e, 0, false});
        } else if (a1_even) {
            candidates.push_back({q, e, 0, false});
        }
    }
    if (candidates.empty()) {
        // B_1 is a power of 2 and a1 is odd: r is only known empirically.
        auto grid = check_valuation_grid(seq, opt.empirical_r_bound);
        long r = std::max(0L, grid.empirical_r.value_or(0L));
        candidates.push_back({Integer(2), fac.primes.front().second, static_cast<unsigned>(r), true});
    }
    // Prefer proven r = 0, then odd q, then the smallest q.
    std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.empirical != b.empirical) return !a.empirical;
        bool ao = a.q != 2, bo = b.q != 2;
        if (ao != bo) return ao;
        return a.q < b.q;
    });

    std::string last_reason = "no candidate prime q";
    for (const auto& cand : candidates) {
        unsigned e = 1;
        Integer idx = cand.q;
        while (idx <= silverman_start) {
            idx *= cand.q;
            ++e;
        }
        for (unsigned attempt = 0; attempt <= opt.extra_kappa_attempts; ++attempt, ++e, idx *= cand.q) {
            if (idx > opt.max_witness_index) {
                last_reason = "witness index " + to_string(idx) + " exceeds the budget";
                break;
            }
            unsigned long w = idx.get_ui();
            const Integer Bw = seq.B(w);
            // Primitive part first: smaller numbers, same primes outside earlier terms.
            std::optional<Integer> p = find_prime_outside(primitive_divisor_cofactor(seq, w), T, opt.trial_division_bound);
            if (!p) p = find_prime_outside(Bw, T, opt.trial_division_bound);
            if (!p) {
                last_reason = "no prime of B_" + std::to_string(w) + " outside T found within the factoring budget";
                continue;
            }
            KappaCertificate cert;
            cert.q = cand.q;
            cert.r = cand.r;
            cert.v_q_B1 = cand.vq;
            cert.kappa = cand.vq + cand.r + e;
            cert.p = *p;
            cert.witness_index = w;
            cert.empirical = cand.empirical;
            cert.silverman_start = silverman_start;
            if (!verify_certificate(seq, cert, T))
                fail(ErrorCode::verification_failed, "constructed certificate failed re-verification");
            return cert;
        }
    }
    fail(ErrorCode::budget_exceeded, "kappa certificate: " + last_reason);
}

bool verify_certificate(EDSequence& seq, const KappaCertificate& cert, const std::set<Integer>& T) {
    const Integer& B1 = seq.B(1);
    if (mpz_divisible_p(B1.get_mpz_t(), cert.q.get_mpz_t()) == 0) return false;
    if (valuation(B1, cert.q) != cert.v_q_B1) return false;
    if (cert.kappa <= cert.v_q_B1 + cert.r) return false;
    Integer idx = ipow(cert.q, cert.kappa - cert.v_q_B1 - cert.r);
    if (idx != cert.witness_index) return false;
    if (idx <= cert.silverman_start) return false;
    if (T.count(cert.p) || !is_probable_prime(cert.p)) return false;
    return mpz_divisible_p(seq.B(cert.witness_index).get_mpz_t(), cert.p.get_mpz_t()) != 0;
}

}  // namespace edsfrey

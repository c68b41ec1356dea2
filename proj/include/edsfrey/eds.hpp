#pragma once

// Elliptic divisibility sequences: the denominators B_n of nP on an integral
// model, with the divisibility, valuation and primitive-divisor checks built
// on top of them.

#include "edsfrey/arith.hpp"
#include "edsfrey/curve.hpp"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

namespace edsfrey {

class EDSequence {
public:
    EDSequence(WeierstrassModel model, RationalPoint generator);

    EDSequence(const EDSequence&) = delete;
    EDSequence& operator=(const EDSequence&) = delete;

    const WeierstrassModel& model() const { return model_; }
    const RationalPoint& generator() const { return generator_; }
    // Stable digest of (model, generator); keys the on-disk cache.
    const std::string& hash() const { return hash_; }

    // Cached decomposition of nP; extends the cache as needed.
    const PointDecomposition& term(unsigned long n);
    const Integer& B(unsigned long n) { return term(n).B; }

    // Computes every term with index <= n.
    void ensure(unsigned long n);
    unsigned long dense_size() const;

    // Snapshot of B_1..B_n (after ensure(n)) for the grid kernels.
    std::vector<Integer> denominators(unsigned long n);

    // Bulk import from a persisted cache; records are re-validated.
    void preload(const std::vector<PointDecomposition>& terms);
    std::vector<PointDecomposition> dense_terms() const;

private:
    WeierstrassModel model_;
    RationalPoint generator_;
    std::string hash_;

    mutable std::shared_mutex mutex_;
    std::deque<PointDecomposition> dense_;     // index n-1
    RationalPoint last_ = RationalPoint::infinity();  // dense_.size() * P
    std::map<unsigned long, PointDecomposition> sparse_;

    void extend_locked(unsigned long n);
};

std::string curve_hash(const WeierstrassModel& m, const RationalPoint& p);

struct KappaCertificate {
    Integer q;
    unsigned r = 0;
    unsigned kappa = 0;
    Integer p;
    unsigned long witness_index = 0;
    unsigned v_q_B1 = 0;
    bool empirical = false;  // r estimated rather than proven
    unsigned long silverman_start = 0;
};

struct PowerInstance {
    unsigned long n = 0;
    Integer u;
    unsigned long ell = 0;
};

struct ValuationLawReport {
    unsigned long n = 0, m = 0;
    Integer p;
    unsigned v_n = 0, v_nm = 0, v_m = 0;
    long defect = 0;
    bool exact_law_applies = true;  // p != 2 or a1 even
    bool passed = true;
};

struct StrongDivisibilityReport {
    unsigned long max_index = 0;
    unsigned long pairs_checked = 0;
    bool passed = true;
    std::optional<std::pair<unsigned long, unsigned long>> first_violation;
};

// Factorization-free verification of the exact valuation law for all primes
// dividing B_n at once (see eds_checks.cpp).
struct ValuationGridEntry {
    unsigned long n = 0, m = 0;
    bool passed = true;
    // Observed v_2(B_nm) - v_2(B_n) - v_2(m) when 2 | B_n; reported, not
    // asserted, on the odd-a1 branch.
    std::optional<long> defect_at_2;
};

struct ValuationGridReport {
    unsigned long max_product = 0;
    bool a1_even = true;
    bool passed = true;
    std::vector<ValuationGridEntry> entries;
    std::optional<std::pair<unsigned long, unsigned long>> first_violation;
    std::optional<long> empirical_r;  // max defect at 2 on the odd-a1 branch
};

struct PrimitiveDivisorReport {
    unsigned long from = 0, to = 0;
    std::vector<unsigned long> without_primitive;  // indices with cofactor 1
    bool passed() const { return without_primitive.empty(); }
};

unsigned valuation_of_term(EDSequence& seq, const Integer& p, unsigned long n);
ValuationLawReport check_valuation_law(EDSequence& seq, const Integer& p, unsigned long n, unsigned long m);
StrongDivisibilityReport check_strong_divisibility(EDSequence& seq, unsigned long max_index);
ValuationGridReport check_valuation_grid(EDSequence& seq, unsigned long max_product);
Integer primitive_divisor_cofactor(EDSequence& seq, unsigned long n);
PrimitiveDivisorReport check_primitive_divisors(EDSequence& seq, unsigned long from, unsigned long to);

// N = u^k with k maximal; N = 1 gives the sentinel (1, 0).
std::pair<Integer, unsigned long> perfect_power_decomposition(const Integer& N);
std::vector<PowerInstance> find_power_terms(EDSequence& seq, unsigned long max_index, unsigned long min_exponent);

struct KappaOptions {
    std::uint64_t trial_division_bound = 1000000;
    unsigned long empirical_r_bound = 60;   // nm range for the odd-a1 branch
    unsigned long max_witness_index = 1000;
    unsigned extra_kappa_attempts = 4;
};

KappaCertificate kappa_certificate(EDSequence& seq, const std::set<Integer>& T,
                                   unsigned long silverman_start, const KappaOptions& opt = {});

// Re-checks every stated inequality and p | B_witness by division.
bool verify_certificate(EDSequence& seq, const KappaCertificate& cert, const std::set<Integer>& T);

}  // namespace edsfrey

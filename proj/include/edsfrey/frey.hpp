#pragma once

// Descent and Frey-curve construction: square roots eps_i of 4A_n - theta_i B_n^2,
// the support set S, sign normalization at a prime p, scaling to integral z_i,
// and the curve Y^2 = X(X - z1)(X + z2) with its reduction checks.

#include "edsfrey/eds.hpp"
#include "edsfrey/field.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace edsfrey {

struct SupportOptions {
    Integer minkowski_budget = Integer(10000000);
    std::uint64_t trial_division_bound = 1000000;
    KappaOptions kappa;
};

struct SupportSets {
    std::vector<PrimeIdealData> S;
    std::vector<PrimeIdealData> T;      // Minkowski set, T subset of S
    std::set<Integer> T_rational;       // rational primes below S
    MinkowskiBound minkowski;
    KappaCertificate certificate;
    PrimeIdealData frak_p;

    bool in_S(const PrimeIdealData& q) const;
    bool in_T(const PrimeIdealData& q) const;
};

// Ideals above every prime of 2*Delta_E and of disc_multiple (placeholders
// when unsafe). Fails with budget_exceeded when either cannot be factored.
std::vector<PrimeIdealData> bad_ideals(const NumberField& L, const Integer& delta_E, std::uint64_t trial_bound);

SupportSets build_support(const FieldTower& tower, const WeierstrassModel& model, EDSequence& seq,
                          unsigned long silverman_start, const SupportOptions& opt = {});

struct DescentTriple {
    unsigned long n = 0;
    Integer A, B;
    std::array<AlgebraicNumber, 3> eps;
    std::array<int, 3> signs{1, 1, 1};   // flips applied by normalize_signs
    bool sign_normalized = false;
};

// Checks eps_i^2 = 4A - theta_i B^2 exactly and eps_i != +-eps_j; throws
// verification_failed otherwise.
void check_descent_identity(const FieldTower& tower, const DescentTriple& t);
DescentTriple descent_triple(const FieldTower& tower, EDSequence& seq, unsigned long n);

struct GcdPairCertificate {
    int i = 0, j = 0;
    Integer norm_minus, norm_plus;   // |N(eps_i - eps_j)|, |N(eps_i + eps_j)|
    Integer gcd;
    Integer residual;                // gcd with the primes of 2*Delta_E removed
    bool passed = false;
    std::string note;
};

struct GcdSupportReport {
    std::vector<GcdPairCertificate> pairs;
    bool passed = true;
};

GcdSupportReport gcd_support_check(const FieldTower& tower, const WeierstrassModel& model, const DescentTriple& t,
                                   std::uint64_t trial_bound = 1000000);

// Flips eps_2, eps_3 so that p | eps_1 - eps_2 and p | eps_2 + eps_3, then
// asserts p does not divide eps_2 - eps_3 or eps_3 - eps_1.
DescentTriple normalize_signs(const DescentTriple& t, const PrimeIdealData& frak_p);

struct ScaledTriple {
    std::array<AlgebraicNumber, 3> w;
    std::array<AlgebraicNumber, 3> z;
    AlgebraicNumber alpha;
    std::string method;   // "rational-gcd" or "bounded-search"
};

struct ScaleOptions {
    unsigned height = 2;
    unsigned long max_candidates = 200000;
    std::uint64_t trial_division_bound = 1000000;
};

ScaledTriple scale_integral(const DescentTriple& t, const std::vector<PrimeIdealData>& T,
                            const ScaleOptions& opt = {});

// Support of z1 O + z2 O + z3 O is inside T (certified through norms and
// valuations at every prime dividing the gcd of the norms).
bool gcd_ideal_supported_on(const std::array<AlgebraicNumber, 3>& z, const std::vector<PrimeIdealData>& T,
                            std::uint64_t trial_bound);

enum class Reduction { good, multiplicative, additive, unclassified };
const char* to_string(Reduction r);

struct FreyCurve {
    std::array<AlgebraicNumber, 3> z;
    std::optional<AlgebraicNumber> alpha;
    AlgebraicNumber delta_F;
    AlgebraicNumber c4_F;
    // Weierstrass coefficients of Y^2 = X^3 - (z1 - z2) X^2 - z1 z2 X.
    std::array<AlgebraicNumber, 5> a;
    std::map<std::string, Reduction> reduction;
};

FreyCurve build_frey(const AlgebraicNumber& z1, const AlgebraicNumber& z2, const AlgebraicNumber& z3);

struct PrimeCheck {
    std::string label;
    Integer norm;
    long v_delta = 0;
    long v_c4 = 0;
    Reduction type = Reduction::unclassified;
    bool ok = true;
};

struct PropReport {
    unsigned long ell = 0;
    Integer norm_bound;
    std::vector<PrimeCheck> primes;
    bool frak_p_multiplicative = false;
    bool frak_p_pattern = false;          // p | z1, p does not divide z2, z3
    bool norm_certificate = false;        // T_rational-stripped norms are ell-th powers
    std::vector<std::string> violations;
    bool passed() const { return violations.empty(); }
};

PropReport verify_prop_conclusions(FreyCurve& frey, const SupportSets& support, unsigned long ell,
                                   const Integer& norm_bound = Integer(10000));

// The integer instance z = (p^ell s, t, -p^ell s - t) over Q with S the primes
// of 2 z1 z2 z3 whose valuation is not a multiple of ell (p excluded).
struct SyntheticInstance {
    SupportSets support;
    FreyCurve frey;
    unsigned long ell = 0;
};

SyntheticInstance synthetic_instance(const Integer& p, unsigned long ell, const Integer& s, const Integer& t);

// The whole chain for one index n: tower, support, descent, gcd support,
// sign normalization at a pattern prime, scaling, Frey curve and its checks.
// Steps after a failed normalization are skipped and noted.
struct PipelineOptions {
    unsigned long silverman_start = 2;
    std::optional<Integer> prime;       // pattern prime override
    SupportOptions support;
    ScaleOptions scale;
    Integer prop_norm_bound = Integer(1000);
};

struct PipelineResult {
    unsigned long n = 0;
    FieldTower tower;
    SupportSets support;
    DescentTriple triple;
    GcdSupportReport gcd;
    std::pair<Integer, unsigned long> power{1, 0};   // B_n = u^k
    std::optional<PrimeIdealData> pattern_prime;
    std::string pattern_source;   // "option", "certificate" or "B_n"
    std::optional<ScaledTriple> scaled;
    std::optional<FreyCurve> frey;
    std::optional<PropReport> prop;
    std::vector<std::string> notes;
    bool passed() const;
};

PipelineResult run_frey_pipeline(const WeierstrassModel& model, EDSequence& seq, unsigned long n,
                                 const PipelineOptions& opt = {});

}  // namespace edsfrey

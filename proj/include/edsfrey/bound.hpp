#pragma once

// Exponent bound: level recipe, conductor exponents, candidate levels
// supported on S, the congruence between N(p) + 1 and a_p of an eigenform,
// and the assembled threshold kappa'.

#include "edsfrey/frey.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace edsfrey {

struct IdealPower {
    std::string label;
    Integer p;
    Integer norm;
    unsigned exp = 0;
    bool operator==(const IdealPower& o) const { return label == o.label && exp == o.exp; }
};

// Sorted by label; the empty list is the unit ideal.
using IdealDescription = std::vector<IdealPower>;
std::string describe(const IdealDescription& d);
IdealDescription normalized(IdealDescription d);

struct LevelRecipe {
    IdealDescription conductor;
    IdealDescription M;
    IdealDescription N;
};

// M is the product of the q exactly dividing the conductor with
// ell | v_q(Delta); N = conductor / M.
LevelRecipe level_recipe(const IdealDescription& conductor, const std::map<std::string, long>& delta_vals,
                         unsigned long ell);

// 2 + 3 v_q(3) + 6 v_q(2). Placeholders for unsafe primes get the cap.
unsigned conductor_exponent_bound(const NumberField& L, const PrimeIdealData& q);
unsigned conductor_exponent_cap(std::size_t degree);

std::vector<IdealDescription> enumerate_levels(const std::vector<PrimeIdealData>& S, const NumberField& L,
                                               unsigned long max_count = 1000000);
Integer level_count(const std::vector<PrimeIdealData>& S, const NumberField& L);

struct HeckeEigenvalue {
    std::string label;
    Integer norm;
    QVector coords;   // over the power basis of the Hecke field
};

struct EigenformData {
    std::string label;
    ZPoly hecke_poly;               // monic, integer coefficients
    IdealDescription level;
    std::vector<HeckeEigenvalue> ap;
    const HeckeEigenvalue* find(const std::string& label) const;
};

struct CongruenceResult {
    Integer norm_minus;   // |Norm((N_p + 1) - a_p)|
    Integer norm_plus;    // |Norm((N_p + 1) + a_p)|
    std::set<Integer> primes;
    Integer residual = 1; // product of composite cofactors left unfactored
    bool ramanujan = false;
};

// Every conjugate of a satisfies |a| < bound_sq^(1/2) (all real).
bool ramanujan_check(const ZPoly& hecke_poly, const QVector& coords, const Integer& four_norm);

CongruenceResult congruence_bound(const Integer& N_p, const EigenformData& form, const std::string& p_label,
                                  std::uint64_t trial_bound = 1000000);

struct BoundConfig {
    Integer C_L = 1;
    bool assume_modularity = true;
    std::optional<Integer> kappa1;
    unsigned long max_levels = 1000000;
};

struct FormContribution {
    std::string label;
    std::string level;
    CongruenceResult result;
    std::string note;
};

struct BoundReport {
    Integer disc_multiple;
    Integer C_L;
    Integer norm_p;
    Integer kappa, kappa1, kappa2, kappa_prime;
    std::vector<FormContribution> forms;
    std::vector<std::string> gaps;      // enumerated levels without a form
    Integer level_count;
    Integer final_bound;
};

BoundReport assemble_bound(const BoundConfig& config, const NumberField& L, const SupportSets& support,
                           const KappaCertificate& cert, const std::vector<EigenformData>& forms);

}  // namespace edsfrey

#pragma once

// Number fields as explicit extension towers over Q.
//
// A field of degree d is a chain Q = F_0 < F_1 < ... < F_k, each step
// F_i = F_{i-1}[t_i]/(m_i) with m_i monic and its coefficients integral
// elements of F_{i-1} (integer coordinates). An element of F_k is a vector
// of d rationals; coordinate b*D_{i-1} + j at level i is the coefficient of
// t_i^b times the j-th basis element of F_{i-1}. Elements of F_{i-1} embed
// into F_i as zero-padded prefixes.
//
// Every field also carries a primitive element gamma = sum c_i t_i with its
// characteristic polynomial f in Z[x]; disc(f) is the equation-order
// discriminant and plays the role of a multiple of the field discriminant.

#include "edsfrey/arith.hpp"
#include "edsfrey/curve.hpp"
#include "edsfrey/linalg.hpp"
#include "edsfrey/poly.hpp"
#include "edsfrey/poly_modp.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace edsfrey {

struct FieldData;
class AlgebraicNumber;

class NumberField {
public:
    static NumberField rationals();

    // Adjoins a root of a monic irreducible integer polynomial; only valid
    // on Q. Irreducibility is certified or the call fails.
    NumberField adjoin_root(const ZPoly& f, const std::string& name) const;
    // Adjoins t with t^2 = delta. delta must have integer coordinates and be
    // provably a non-square (fails with undecided otherwise).
    NumberField adjoin_sqrt(const AlgebraicNumber& delta, const std::string& name) const;

    std::size_t degree() const;
    std::size_t levels() const;
    std::vector<std::size_t> step_degrees() const;
    std::vector<std::string> step_names() const;
    // Defining polynomial of each step, coefficients as elements of the
    // field below (low to high, monic).
    std::vector<std::vector<AlgebraicNumber>> step_polynomials() const;
    // The subfield F_i (0 = Q).
    NumberField level(std::size_t i) const;
    // t_i embedded in this field, 1 <= i <= levels().
    AlgebraicNumber generator(std::size_t i) const;

    AlgebraicNumber zero() const;
    AlgebraicNumber one() const;
    AlgebraicNumber from_rational(const Rational& r) const;
    // Embeds an element of a subfield of this tower.
    AlgebraicNumber embed(const AlgebraicNumber& a) const;
    bool contains_subfield(const NumberField& sub) const;

    const ZPoly& primitive_poly() const;
    const std::vector<Integer>& primitive_combination() const;
    AlgebraicNumber primitive_element() const;
    const Integer& disc_multiple() const;
    unsigned real_embeddings() const;
    unsigned complex_pairs() const;
    bool totally_real() const { return complex_pairs() == 0; }

    // Absolute representation: a = g(gamma), deg g < d.
    QPoly to_absolute(const AlgebraicNumber& a) const;
    AlgebraicNumber from_absolute(const QPoly& g) const;

    bool operator==(const NumberField& o) const { return data_ == o.data_; }
    bool operator!=(const NumberField& o) const { return data_ != o.data_; }

    const FieldData& data() const { return *data_; }

private:
    explicit NumberField(std::shared_ptr<const FieldData> d) : data_(std::move(d)) {}
    NumberField extend(std::vector<QVector> poly, std::string name) const;

    std::shared_ptr<const FieldData> data_;
    friend class AlgebraicNumber;
};

class AlgebraicNumber {
public:
    AlgebraicNumber() = default;
    AlgebraicNumber(NumberField field, QVector coords);

    const NumberField& field() const { return field_; }
    const QVector& coords() const { return coords_; }
    bool valid() const { return static_cast<bool>(field_.data_); }

    bool is_zero() const;
    bool is_rational() const;
    Rational rational_value() const;

    AlgebraicNumber operator-() const;
    AlgebraicNumber& operator+=(const AlgebraicNumber& o);
    AlgebraicNumber& operator-=(const AlgebraicNumber& o);
    AlgebraicNumber& operator*=(const AlgebraicNumber& o);
    AlgebraicNumber& operator/=(const AlgebraicNumber& o);

    AlgebraicNumber pow(unsigned long e) const;
    AlgebraicNumber inverse() const;

    QMatrix multiplication_matrix() const;
    // Norm to Q as the determinant of multiplication.
    Rational norm() const;
    // Same value as a resultant Res(f, g) with a = g(gamma).
    Rational norm_resultant() const;
    Rational trace() const;
    QPoly charpoly() const;
    // Root of a monic integer polynomial (charpoly test).
    bool is_integral() const;
    bool has_integral_coordinates() const;

    std::vector<std::string> coord_strings() const;
    std::string to_string() const;

private:
    NumberField field_{nullptr};
    QVector coords_;
};

bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b);
inline bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(a == b); }
AlgebraicNumber operator+(AlgebraicNumber a, const AlgebraicNumber& b);
AlgebraicNumber operator-(AlgebraicNumber a, const AlgebraicNumber& b);
AlgebraicNumber operator*(AlgebraicNumber a, const AlgebraicNumber& b);
AlgebraicNumber operator/(AlgebraicNumber a, const AlgebraicNumber& b);
AlgebraicNumber operator*(const AlgebraicNumber& a, const Rational& r);
AlgebraicNumber operator*(const Rational& r, const AlgebraicNumber& a);
AlgebraicNumber operator*(const AlgebraicNumber& a, long r);
AlgebraicNumber operator*(long r, const AlgebraicNumber& a);
AlgebraicNumber operator+(const AlgebraicNumber& a, const Rational& r);
AlgebraicNumber operator-(const AlgebraicNumber& a, const Rational& r);
AlgebraicNumber operator-(const Rational& r, const AlgebraicNumber& a);

// The same element viewed in a subfield, when its coordinates allow it.
std::optional<AlgebraicNumber> restrict_to_subfield(const AlgebraicNumber& a, const NumberField& sub);

// w with w^2 = v, or nullopt when v is provably a non-square. Throws
// undecided when neither could be established.
std::optional<AlgebraicNumber> sqrt_in_field(const AlgebraicNumber& v);

// ---------------------------------------------------------------------------
// Prime ideals

struct PrimeIdealData {
    Integer p;
    unsigned e = 1;
    unsigned f = 1;
    Integer norm;           // p^f; for unsafe placeholders an upper bound p^d
    std::string label;      // "norm.index", or "p.unsafe"
    bool safe = true;       // false: p divides disc_multiple, not split
    NumberField field = NumberField::rationals();
    FpPoly residue_poly;    // factor of f mod p defining the ideal

    // v_q(a); a must be nonzero. Unsafe placeholders throw unsafe_prime.
    long valuation(const AlgebraicNumber& a) const;
    bool divides(const AlgebraicNumber& a) const;
    bool operator<(const PrimeIdealData& o) const {
        return std::tie(p, f, label) < std::tie(o.p, o.f, o.label);
    }
    bool operator==(const PrimeIdealData& o) const { return p == o.p && label == o.label; }
};

// Ideals above p. Throws unsafe_prime when p | disc_multiple.
std::vector<PrimeIdealData> split_prime(const NumberField& field, const Integer& p);
// Placeholder covering every ideal above an unsafe p.
PrimeIdealData unsafe_placeholder(const NumberField& field, const Integer& p);

// ---------------------------------------------------------------------------
// Minkowski constant

struct MinkowskiBound {
    Integer disc_abs;
    unsigned d = 1, s = 0;
    Rational m_squared_lower;  // computed with pi rounded up
    Rational m_squared_upper;  // computed with pi rounded down
    Integer floor_upper;       // largest integer N with N^2 < m_squared_upper
    double approx = 0.0;
    // True when N < M_L is possible under outward rounding.
    bool norm_may_be_below(const Integer& N) const;
};

MinkowskiBound minkowski_bound(const Integer& disc_abs, unsigned d, unsigned s);

struct MinkowskiData {
    MinkowskiBound bound;
    std::vector<PrimeIdealData> T;
};

MinkowskiData minkowski_T(const NumberField& field, const Integer& enumeration_budget = Integer(10000000));

// ---------------------------------------------------------------------------
// The tower K = Q(theta_1, theta_2, theta_3), L = K(sqrt(x' - theta_i)).

struct FieldTower {
    ShortModel short_model;
    Rational xP, yP;
    Integer scale;                           // s with s^2 (xP - theta_i) integral
    NumberField K = NumberField::rationals();
    NumberField L = NumberField::rationals();
    std::array<AlgebraicNumber, 3> theta;    // in L
    std::array<AlgebraicNumber, 3> root;     // root[i]^2 = xP - theta[i], in L
    std::array<bool, 2> adjoined{};          // whether sqrt steps 1, 2 were needed
    bool totally_real = false;

    std::size_t degree() const { return L.degree(); }
};

FieldTower build_tower(const ShortModel& sm, const Rational& xP, const Rational& yP);

// The sign analysis for total reality: the cubic has three real roots and
// xP exceeds all of them.
bool totally_real_by_signs(const ShortModel& sm, const Rational& xP);

}  // namespace edsfrey

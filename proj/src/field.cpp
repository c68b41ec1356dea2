#include "field_internal.hpp"

#include "edsfrey/error.hpp"

#include <algorithm>
#include <set>

namespace edsfrey {

namespace detail {

namespace {

bool all_zero(std::span<const Rational> a) {
    return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x == 0; });
}

void add_into(std::span<Rational> dst, const QVector& src) {
    for (std::size_t i = 0; i < src.size(); ++i)
        if (src[i] != 0) dst[i] += src[i];
}

}  // namespace

QVector tower_mul(const FieldData& F, std::span<const Rational> a, std::span<const Rational> b) {
    if (F.level == 0) return {a[0] * b[0]};
    const FieldData& P = *F.parent;
    const std::size_t D0 = P.degree, n = F.step_degree;
    QVector c((2 * n - 1) * D0, Rational(0));
    auto block = [&](std::span<const Rational> v, std::size_t i) { return v.subspan(i * D0, D0); };
    std::span<Rational> cs(c);
    for (std::size_t i = 0; i < n; ++i) {
        auto ai = block(a, i);
        if (all_zero(ai)) continue;
        for (std::size_t j = 0; j < n; ++j) {
            auto bj = block(b, j);
            if (all_zero(bj)) continue;
            add_into(cs.subspan((i + j) * D0, D0), tower_mul(P, ai, bj));
        }
    }
    for (std::size_t k = 2 * n - 2; k >= n; --k) {
        QVector top(c.begin() + static_cast<long>(k * D0), c.begin() + static_cast<long>((k + 1) * D0));
        if (all_zero(top)) continue;
        for (std::size_t j = 0; j < n; ++j) {
            const QVector& red = F.reduction[j];
            if (all_zero(red)) continue;
            add_into(cs.subspan((k - n + j) * D0, D0), tower_mul(P, top, red));
        }
    }
    c.resize(n * D0);
    return c;
}

}  // namespace detail

namespace {

QVector unit_vector(std::size_t d, std::size_t i) {
    QVector v(d, Rational(0));
    v[i] = 1;
    return v;
}

QMatrix mult_matrix(const FieldData& F, const QVector& a) {
    const std::size_t d = F.degree;
    QMatrix m(d, QVector(d, Rational(0)));
    for (std::size_t j = 0; j < d; ++j) {
        QVector col = detail::tower_mul(F, a, unit_vector(d, j));
        for (std::size_t i = 0; i < d; ++i) m[i][j] = col[i];
    }
    return m;
}

ZPoly integral_charpoly(const QPoly& cp) {
    ZPoly out;
    for (const auto& c : cp) {
        if (c.get_den() != 1) fail(ErrorCode::verification_failed, "primitive element is not integral");
        out.push_back(c.get_num());
    }
    return out;
}

// Small integer combinations tried in turn for the primitive element.
std::vector<Integer> combination_for(std::size_t levels, unsigned attempt) {
    std::vector<Integer> c(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        long v = 1 + static_cast<long>((attempt * (i + 1) + i * i) % (3 + attempt));
        if ((attempt + i) % 2 == 1 && attempt > 0) v = -v;
        c[i] = v;
    }
    return c;
}

void compute_primitive(FieldData& F) {
    const std::size_t d = F.degree;
    if (F.level == 0) {
        F.gamma = {Rational(0)};
        F.f = {Integer(0), Integer(1)};
        F.disc = 1;
        F.V = identity_matrix(1);
        F.Vinv = identity_matrix(1);
        F.r1 = 1;
        F.s = 0;
        return;
    }
    // Generators t_i embedded at the top level.
    std::vector<QVector> gens;
    {
        std::vector<const FieldData*> chain;
        for (const FieldData* p = &F; p && p->level > 0; p = p->parent.get()) chain.push_back(p);
        std::reverse(chain.begin(), chain.end());
        for (const FieldData* lvl : chain) gens.push_back(unit_vector(d, lvl->parent->degree));
    }
    for (unsigned attempt = 0; attempt < 64; ++attempt) {
        auto comb = combination_for(F.level, attempt);
        QVector g(d, Rational(0));
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (std::size_t k = 0; k < d; ++k) g[k] += gens[i][k] * comb[i];
        QPoly cp = charpoly(mult_matrix(F, g));
        Rational disc = poly::discriminant(cp);
        if (disc == 0) continue;
        F.combination = comb;
        F.gamma = g;
        F.f = integral_charpoly(cp);
        if (disc.get_den() != 1) fail(ErrorCode::verification_failed, "non-integral discriminant");
        F.disc = disc.get_num();
        F.V.assign(d, QVector(d, Rational(0)));
        QVector pw = unit_vector(d, 0);
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t i = 0; i < d; ++i) F.V[i][k] = pw[i];
            pw = detail::tower_mul(F, pw, g);
        }
        F.Vinv = inverse(F.V);
        F.r1 = static_cast<unsigned>(poly::real_root_count(cp));
        F.s = static_cast<unsigned>((d - F.r1) / 2);
        return;
    }
    fail(ErrorCode::budget_exceeded, "no primitive element found among small combinations");
}

// Certifies irreducibility over Q of a monic squarefree integer polynomial
// from factorization degree patterns modulo several primes.
bool certify_irreducible(const ZPoly& f) {
    const int d = poly::degree(f);
    if (d <= 1) return d == 1;
    if (d <= 3) return poly::integer_roots(f).empty();
    Rational disc = poly::discriminant(poly::to_q(f));
    std::set<int> possible;
    for (int k = 1; k < d; ++k) possible.insert(k);
    Integer p = 2;
    for (int tries = 0; tries < 200 && !possible.empty(); ++tries, p = next_prime(p)) {
        if (mpz_divisible_p(disc.get_num_mpz_t(), p.get_mpz_t())) continue;
        Fp fp(p.get_ui());
        auto facs = fp.factor_squarefree(fp.reduce(f));
        std::set<int> sums{0};
        for (const auto& g : facs) {
            std::set<int> next = sums;
            for (int s : sums) next.insert(s + static_cast<int>(g.size()) - 1);
            sums = std::move(next);
        }
        std::set<int> keep;
        for (int k : possible)
            if (sums.count(k)) keep.insert(k);
        possible = std::move(keep);
    }
    return possible.empty();
}

void common_field(const AlgebraicNumber& a, const AlgebraicNumber& b, NumberField& out) {
    if (!a.valid() || !b.valid()) fail(ErrorCode::invalid_input, "uninitialised field element");
    if (a.field() == b.field() || a.field().contains_subfield(b.field())) {
        out = a.field();
    } else if (b.field().contains_subfield(a.field())) {
        out = b.field();
    } else {
        fail(ErrorCode::invalid_input, "elements belong to unrelated fields");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// NumberField

NumberField NumberField::rationals() {
    static const std::shared_ptr<const FieldData> q = [] {
        auto d = std::make_shared<FieldData>();
        d->name = "Q";
        compute_primitive(*d);
        return std::shared_ptr<const FieldData>(d);
    }();
    return NumberField(q);
}

NumberField NumberField::extend(std::vector<QVector> poly, std::string name) const {
    auto d = std::make_shared<FieldData>();
    d->parent = data_;
    d->level = data_->level + 1;
    d->step_degree = poly.size() - 1;
    d->degree = data_->degree * d->step_degree;
    d->name = std::move(name);
    if (d->degree > 64) fail(ErrorCode::budget_exceeded, "tower degree above 64");
    for (std::size_t j = 0; j < d->step_degree; ++j) {
        QVector r = poly[j];
        for (auto& x : r) x = -x;
        d->reduction.push_back(std::move(r));
    }
    d->poly = std::move(poly);
    compute_primitive(*d);
    return NumberField(d);
}

NumberField NumberField::adjoin_root(const ZPoly& f, const std::string& name) const {
    if (data_->level != 0) fail(ErrorCode::precondition, "adjoin_root is only supported over Q");
    if (f.empty() || f.back() != 1) fail(ErrorCode::invalid_input, "defining polynomial must be monic");
    if (!poly::is_squarefree(poly::to_q(f))) fail(ErrorCode::invalid_input, "defining polynomial is not squarefree");
    if (!certify_irreducible(f)) fail(ErrorCode::undecided, "could not certify irreducibility of the defining polynomial");
    std::vector<QVector> p;
    for (const auto& c : f) p.push_back({Rational(c)});
    return extend(std::move(p), name);
}

NumberField NumberField::adjoin_sqrt(const AlgebraicNumber& delta_in, const std::string& name) const {
    AlgebraicNumber delta = embed(delta_in);
    if (delta.is_zero()) fail(ErrorCode::invalid_input, "cannot adjoin the square root of zero");
    if (!delta.has_integral_coordinates()) fail(ErrorCode::precondition, "radicand must have integer coordinates");
    if (sqrt_in_field(delta)) fail(ErrorCode::precondition, "radicand is already a square");
    QVector c0 = delta.coords();
    for (auto& x : c0) x = -x;
    std::vector<QVector> p{c0, QVector(degree(), Rational(0)), unit_vector(degree(), 0)};
    return extend(std::move(p), name);
}

std::size_t NumberField::degree() const { return data_->degree; }
std::size_t NumberField::levels() const { return data_->level; }

std::vector<std::size_t> NumberField::step_degrees() const {
    std::vector<std::size_t> out;
    for (const FieldData* p = data_.get(); p && p->level > 0; p = p->parent.get()) out.push_back(p->step_degree);
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<std::string> NumberField::step_names() const {
    std::vector<std::string> out;
    for (const FieldData* p = data_.get(); p && p->level > 0; p = p->parent.get()) out.push_back(p->name);
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<std::vector<AlgebraicNumber>> NumberField::step_polynomials() const {
    std::vector<std::vector<AlgebraicNumber>> out(levels());
    for (std::size_t i = 1; i <= levels(); ++i) {
        NumberField sub = level(i);
        NumberField below = level(i - 1);
        for (const auto& c : sub.data_->poly) out[i - 1].emplace_back(below, c);
    }
    return out;
}

NumberField NumberField::level(std::size_t i) const {
    if (i > levels()) fail(ErrorCode::invalid_input, "tower level out of range");
    std::shared_ptr<const FieldData> p = data_;
    while (p->level > i) p = p->parent;
    return NumberField(p);
}

AlgebraicNumber NumberField::generator(std::size_t i) const {
    if (i == 0 || i > levels()) fail(ErrorCode::invalid_input, "generator index out of range");
    NumberField sub = level(i);
    return embed(AlgebraicNumber(sub, unit_vector(sub.degree(), sub.data_->parent->degree)));
}

AlgebraicNumber NumberField::zero() const { return AlgebraicNumber(*this, QVector(degree(), Rational(0))); }
AlgebraicNumber NumberField::one() const { return AlgebraicNumber(*this, unit_vector(degree(), 0)); }

AlgebraicNumber NumberField::from_rational(const Rational& r) const {
    QVector v(degree(), Rational(0));
    v[0] = r;
    return AlgebraicNumber(*this, std::move(v));
}

bool NumberField::contains_subfield(const NumberField& sub) const {
    for (const FieldData* p = data_.get(); p; p = p->parent.get())
        if (p == sub.data_.get()) return true;
    return false;
}

AlgebraicNumber NumberField::embed(const AlgebraicNumber& a) const {
    if (a.field() == *this) return a;
    if (!contains_subfield(a.field())) fail(ErrorCode::invalid_input, "element is not in a subfield of this tower");
    QVector v = a.coords();
    v.resize(degree(), Rational(0));
    return AlgebraicNumber(*this, std::move(v));
}

const ZPoly& NumberField::primitive_poly() const { return data_->f; }
const std::vector<Integer>& NumberField::primitive_combination() const { return data_->combination; }
AlgebraicNumber NumberField::primitive_element() const { return AlgebraicNumber(*this, data_->gamma); }
const Integer& NumberField::disc_multiple() const { return data_->disc; }
unsigned NumberField::real_embeddings() const { return data_->r1; }
unsigned NumberField::complex_pairs() const { return data_->s; }

QPoly NumberField::to_absolute(const AlgebraicNumber& a) const {
    QPoly g = mat_vec(data_->Vinv, embed(a).coords());
    return g;
}

AlgebraicNumber NumberField::from_absolute(const QPoly& g_in) const {
    QPoly g = g_in;
    if (static_cast<std::size_t>(poly::degree(g) + 1) > degree()) g = poly::divmod(g, poly::to_q(data_->f)).second;
    g.resize(degree(), Rational(0));
    return AlgebraicNumber(*this, mat_vec(data_->V, g));
}

// ---------------------------------------------------------------------------
// AlgebraicNumber

AlgebraicNumber::AlgebraicNumber(NumberField field, QVector coords) : field_(std::move(field)), coords_(std::move(coords)) {
    if (coords_.size() != field_.degree()) fail(ErrorCode::invalid_input, "coordinate vector has the wrong length");
}

bool AlgebraicNumber::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& x) { return x == 0; });
}

bool AlgebraicNumber::is_rational() const {
    return std::all_of(coords_.begin() + 1, coords_.end(), [](const Rational& x) { return x == 0; });
}

Rational AlgebraicNumber::rational_value() const {
    if (!is_rational()) fail(ErrorCode::precondition, "element is not rational");
    return coords_[0];
}

AlgebraicNumber AlgebraicNumber::operator-() const {
    AlgebraicNumber r = *this;
    for (auto& x : r.coords_) x = -x;
    return r;
}

AlgebraicNumber& AlgebraicNumber::operator+=(const AlgebraicNumber& o) {
    NumberField F = field_;
    common_field(*this, o, F);
    *this = F.embed(*this);
    AlgebraicNumber b = F.embed(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += b.coords_[i];
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator-=(const AlgebraicNumber& o) { return *this += -o; }

AlgebraicNumber& AlgebraicNumber::operator*=(const AlgebraicNumber& o) {
    NumberField F = field_;
    common_field(*this, o, F);
    AlgebraicNumber a = F.embed(*this);
    AlgebraicNumber b = F.embed(o);
    *this = AlgebraicNumber(F, detail::tower_mul(F.data(), a.coords_, b.coords_));
    return *this;
}

AlgebraicNumber& AlgebraicNumber::operator/=(const AlgebraicNumber& o) {
    NumberField F = field_;
    common_field(*this, o, F);
    return *this *= F.embed(o).inverse();
}

AlgebraicNumber AlgebraicNumber::pow(unsigned long e) const {
    AlgebraicNumber result = field_.one(), base = *this;
    while (e) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

AlgebraicNumber AlgebraicNumber::inverse() const {
    if (is_zero()) fail(ErrorCode::invalid_input, "division by zero");
    if (is_rational()) return field_.from_rational(1 / coords_[0]);
    return AlgebraicNumber(field_, solve(multiplication_matrix(), unit_vector(field_.degree(), 0)));
}

QMatrix AlgebraicNumber::multiplication_matrix() const { return mult_matrix(field_.data(), coords_); }

Rational AlgebraicNumber::norm() const {
    if (is_rational()) return rpow(coords_[0], field_.degree());
    return determinant(multiplication_matrix());
}

Rational AlgebraicNumber::norm_resultant() const {
    QPoly g = field_.to_absolute(*this);
    poly::trim(g);
    if (g.empty()) return 0;
    return poly::resultant(poly::to_q(field_.primitive_poly()), g);
}

Rational AlgebraicNumber::trace() const {
    QMatrix m = multiplication_matrix();
    Rational t = 0;
    for (std::size_t i = 0; i < m.size(); ++i) t += m[i][i];
    return t;
}

QPoly AlgebraicNumber::charpoly() const { return edsfrey::charpoly(multiplication_matrix()); }

bool AlgebraicNumber::is_integral() const {
    if (has_integral_coordinates()) return true;
    for (const auto& c : charpoly())
        if (c.get_den() != 1) return false;
    return true;
}

bool AlgebraicNumber::has_integral_coordinates() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& x) { return x.get_den() == 1; });
}

std::vector<std::string> AlgebraicNumber::coord_strings() const {
    std::vector<std::string> out;
    for (const auto& c : coords_) out.push_back(edsfrey::to_string(c));
    return out;
}

std::string AlgebraicNumber::to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) s += ",";
        s += edsfrey::to_string(coords_[i]);
    }
    return s + "]";
}

std::optional<AlgebraicNumber> restrict_to_subfield(const AlgebraicNumber& a, const NumberField& sub) {
    if (!a.field().contains_subfield(sub)) fail(ErrorCode::invalid_input, "not a subfield of the element's field");
    const QVector& c = a.coords();
    for (std::size_t i = sub.degree(); i < c.size(); ++i)
        if (c[i] != 0) return std::nullopt;
    return AlgebraicNumber(sub, QVector(c.begin(), c.begin() + static_cast<long>(sub.degree())));
}

bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    NumberField F = a.field();
    common_field(a, b, F);
    return F.embed(a).coords() == F.embed(b).coords();
}

AlgebraicNumber operator+(AlgebraicNumber a, const AlgebraicNumber& b) { return a += b; }
AlgebraicNumber operator-(AlgebraicNumber a, const AlgebraicNumber& b) { return a -= b; }
AlgebraicNumber operator*(AlgebraicNumber a, const AlgebraicNumber& b) { return a *= b; }
AlgebraicNumber operator/(AlgebraicNumber a, const AlgebraicNumber& b) { return a /= b; }

AlgebraicNumber operator*(const AlgebraicNumber& a, const Rational& r) {
    QVector v = a.coords();
    for (auto& x : v) x *= r;
    return AlgebraicNumber(a.field(), std::move(v));
}
AlgebraicNumber operator*(const Rational& r, const AlgebraicNumber& a) { return a * r; }
AlgebraicNumber operator*(const AlgebraicNumber& a, long r) { return a * Rational(r); }
AlgebraicNumber operator*(long r, const AlgebraicNumber& a) { return a * Rational(r); }
AlgebraicNumber operator+(const AlgebraicNumber& a, const Rational& r) { return a + a.field().from_rational(r); }
AlgebraicNumber operator-(const AlgebraicNumber& a, const Rational& r) { return a - a.field().from_rational(r); }
AlgebraicNumber operator-(const Rational& r, const AlgebraicNumber& a) { return a.field().from_rational(r) - a; }

}  // namespace edsfrey

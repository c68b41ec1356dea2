#include "edsfrey/poly.hpp"

#include "edsfrey/error.hpp"
#include "edsfrey/linalg.hpp"

#include <algorithm>

namespace edsfrey::poly {

QPoly to_q(const ZPoly& p) {
    QPoly q;
    q.reserve(p.size());
    for (const auto& c : p) q.emplace_back(c);
    return q;
}

ZPoly primitive_part(const QPoly& p) {
    Integer den = 1;
    for (const auto& c : p) den = lcm(den, c.get_den());
    ZPoly z;
    z.reserve(p.size());
    Integer content = 0;
    for (const auto& c : p) {
        Integer v = c.get_num() * (den / c.get_den());
        content = gcd(content, v);
        z.push_back(v);
    }
    if (content > 1)
        for (auto& c : z) c /= content;
    trim(z);
    return z;
}

QPoly add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

QPoly sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

QPoly scale(const QPoly& a, const Rational& c) {
    QPoly r = a;
    for (auto& x : r) x *= c;
    trim(r);
    return r;
}

QPoly derivative(const QPoly& a) {
    QPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<unsigned long>(i));
    trim(r);
    return r;
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
    int db = degree(b);
    if (db < 0) fail(ErrorCode::precondition, "polynomial division by zero");
    QPoly r = a;
    trim(r);
    int dr = degree(r);
    if (dr < db) return {{}, r};
    QPoly q(static_cast<std::size_t>(dr - db + 1), Rational(0));
    Rational lead = b[static_cast<std::size_t>(db)];
    while (dr >= db) {
        Rational f = r[static_cast<std::size_t>(dr)] / lead;
        std::size_t shift = static_cast<std::size_t>(dr - db);
        q[shift] = f;
        for (int i = 0; i <= db; ++i) r[shift + static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(i)];
        trim(r);
        dr = degree(r);
    }
    trim(q);
    return {q, r};
}

QPoly monic_gcd(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty()) return a;
    return scale(a, 1 / a.back());
}

Rational eval(const QPoly& p, const Rational& x) {
    Rational r = 0;
    for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

Integer eval(const ZPoly& p, const Integer& x) {
    Integer r = 0;
    for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

Rational resultant(const QPoly& a, const QPoly& b) {
    int m = degree(a), n = degree(b);
    if (m < 0 || n < 0) return 0;
    if (m == 0) return rpow(a[0], static_cast<unsigned>(n));
    if (n == 0) return rpow(b[0], static_cast<unsigned>(m));
    std::size_t size = static_cast<std::size_t>(m + n);
    QMatrix s(size, QVector(size, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j)
            s[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + j)] = a[static_cast<std::size_t>(m - j)];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j)
            s[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i + j)] = b[static_cast<std::size_t>(n - j)];
    return determinant(std::move(s));
}

Rational discriminant(const QPoly& p) {
    int n = degree(p);
    if (n < 1) fail(ErrorCode::precondition, "discriminant of a constant");
    Rational r = resultant(p, derivative(p)) / p[static_cast<std::size_t>(n)];
    if ((static_cast<long>(n) * (n - 1) / 2) % 2 != 0) r = -r;
    return r;
}

bool is_squarefree(const QPoly& p) { return degree(monic_gcd(p, derivative(p))) == 0; }

namespace {

std::vector<QPoly> sturm_chain(const QPoly& p) {
    std::vector<QPoly> chain;
    QPoly a = p, b = derivative(p);
    trim(a);
    auto normalize = [](QPoly& q) {
        if (q.empty()) return;
        Rational s = abs(q.back());
        for (auto& c : q) c /= s;
    };
    normalize(a);
    normalize(b);
    chain.push_back(a);
    while (!b.empty()) {
        chain.push_back(b);
        QPoly r = divmod(a, b).second;
        for (auto& c : r) c = -c;
        normalize(r);
        a = std::move(b);
        b = std::move(r);
    }
    return chain;
}

int sign_changes(const std::vector<int>& signs) {
    int changes = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

int variations_at(const std::vector<QPoly>& chain, const Rational& x) {
    std::vector<int> signs;
    for (const auto& q : chain) signs.push_back(sgn(eval(q, x)));
    return sign_changes(signs);
}

int variations_at_infinity(const std::vector<QPoly>& chain, bool positive) {
    std::vector<int> signs;
    for (const auto& q : chain) {
        int d = degree(q);
        int s = sgn(q[static_cast<std::size_t>(d)]);
        if (!positive && d % 2 == 1) s = -s;
        signs.push_back(s);
    }
    return sign_changes(signs);
}

}  // namespace

int sturm_count(const QPoly& p, const Rational& lo, const Rational& hi) {
    auto chain = sturm_chain(p);
    return variations_at(chain, lo) - variations_at(chain, hi);
}

int real_root_count(const QPoly& p) {
    auto chain = sturm_chain(p);
    return variations_at_infinity(chain, false) - variations_at_infinity(chain, true);
}

int roots_above(const QPoly& p, const Rational& x) {
    auto chain = sturm_chain(p);
    return variations_at(chain, x) - variations_at_infinity(chain, true);
}

Rational root_bound(const QPoly& p) {
    int n = degree(p);
    Rational m = 0;
    for (int i = 0; i < n; ++i) {
        Rational r = abs(p[static_cast<std::size_t>(i)] / p[static_cast<std::size_t>(n)]);
        if (r > m) m = r;
    }
    return m + 1;
}

std::vector<Integer> integer_roots(const ZPoly& p) {
    QPoly q = to_q(p);
    trim(q);
    std::vector<Integer> out;
    if (degree(q) < 1) return out;
    // Zero root first, then work with the squarefree part of the rest.
    while (!q.empty() && q[0] == 0) {
        if (out.empty()) out.push_back(0);
        q.erase(q.begin());
    }
    if (degree(q) >= 1) {
        QPoly sf = divmod(q, monic_gcd(q, derivative(q))).first;
        auto chain = sturm_chain(sf);
        Rational bound = root_bound(sf);
        // Bisection of (-bound, bound] down to intervals of width < 1.
        std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}};
        while (!stack.empty()) {
            auto [lo, hi] = stack.back();
            stack.pop_back();
            int c = variations_at(chain, lo) - variations_at(chain, hi);
            if (c == 0) continue;
            if (hi - lo < 1) {
                // Integer candidates in (lo, hi].
                Integer k;
                mpz_fdiv_q(k.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
                for (; Rational(k) > lo; k -= 1)
                    if (eval(sf, Rational(k)) == 0) out.push_back(k);
                continue;
            }
            Rational mid = (lo + hi) / 2;
            stack.emplace_back(lo, mid);
            stack.emplace_back(mid, hi);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace edsfrey::poly

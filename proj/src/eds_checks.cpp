#include "edsfrey/eds_checks.hpp"

#include "edsfrey/error.hpp"

#include <numeric>

namespace edsfrey::kernels {

namespace {

void require_size(std::span<const Integer> B, unsigned long n) {
    if (B.size() < n) fail(ErrorCode::precondition, "term snapshot shorter than requested range");
}

Integer strip(Integer c, Integer g) {
    g = gcd(c, g);
    while (g > 1) {
        c /= g;
        g = gcd(c, g);
    }
    return c;
}

StrongDivisibilityReport reduce_rows(unsigned long max_index, const std::vector<long>& first_bad_col) {
    StrongDivisibilityReport rep;
    rep.max_index = max_index;
    rep.pairs_checked = max_index * (max_index + 1) / 2;
    for (unsigned long n = 1; n <= max_index; ++n) {
        long m = first_bad_col[n - 1];
        if (m > 0) {
            rep.passed = false;
            rep.first_violation = std::make_pair(static_cast<unsigned long>(m), n);
            break;
        }
    }
    return rep;
}

ValuationGridReport reduce_grid(unsigned long max_product, bool a1_even,
                                std::vector<std::vector<ValuationGridEntry>>& rows) {
    ValuationGridReport rep;
    rep.max_product = max_product;
    rep.a1_even = a1_even;
    for (auto& row : rows)
        for (auto& e : row) {
            if (!e.passed && rep.passed) {
                rep.passed = false;
                rep.first_violation = std::make_pair(e.n, e.m);
            }
            if (!a1_even && e.defect_at_2)
                rep.empirical_r = std::max(rep.empirical_r.value_or(0L), *e.defect_at_2);
            rep.entries.push_back(std::move(e));
        }
    return rep;
}

std::vector<ValuationGridEntry> valuation_row(std::span<const Integer> B, unsigned long n,
                                              unsigned long max_product, bool a1_even) {
    std::vector<ValuationGridEntry> row;
    if (B[n - 1] == 1) return row;
    for (unsigned long m = 1; n * m <= max_product; ++m) row.push_back(valuation_cell(B, n, m, a1_even));
    return row;
}

}  // namespace

bool strong_divisibility_cell(std::span<const Integer> B, unsigned long m, unsigned long n) {
    unsigned long g = std::gcd(m, n);
    return gcd(B[m - 1], B[n - 1]) == B[g - 1];
}

ValuationGridEntry valuation_cell(std::span<const Integer> B, unsigned long n, unsigned long m, bool a1_even) {
    ValuationGridEntry e;
    e.n = n;
    e.m = m;
    const Integer& Bn = B[n - 1];
    const Integer& Bnm = B[n * m - 1];
    if (mpz_divisible_p(Bnm.get_mpz_t(), Bn.get_mpz_t()) == 0) {
        e.passed = false;
        return e;
    }
    Integer Q = Bnm / Bn;
    // Every prime of gcd(Q, B_n) must divide m, with v_p(Q) = v_p(m).
    Integer c = gcd(Q, Bn);
    unsigned long mm = m;
    for (unsigned long p = 2; p <= mm; ++p) {
        if (mm % p != 0) continue;
        unsigned vm = 0;
        while (mm % p == 0) {
            mm /= p;
            ++vm;
        }
        Integer pz(p);
        if (mpz_divisible_ui_p(Bn.get_mpz_t(), p) == 0) continue;
        unsigned vq = mpz_divisible_ui_p(Q.get_mpz_t(), p) ? valuation(Q, pz) : 0u;
        if (p == 2) {
            e.defect_at_2 = static_cast<long>(vq) - static_cast<long>(vm);
            if (!a1_even) {
                c = strip(c, pz);
                continue;
            }
        }
        if (vq != vm) e.passed = false;
        c = strip(c, pz);
    }
    if (mpz_even_p(Bn.get_mpz_t()) && m % 2 == 1) {
        unsigned vq = mpz_even_p(Q.get_mpz_t()) ? valuation(Q, Integer(2)) : 0u;
        e.defect_at_2 = static_cast<long>(vq);
        if (!a1_even) c = strip(c, Integer(2));
    }
    if (c != 1) e.passed = false;
    return e;
}

Integer primitive_cofactor(std::span<const Integer> B, unsigned long n) {
    Integer c = B[n - 1];
    for (unsigned long d = 1; d < n && c > 1; ++d)
        if (n % d == 0) c = strip(c, B[d - 1]);
    return c;
}

namespace serial {

StrongDivisibilityReport strong_divisibility(std::span<const Integer> B, unsigned long max_index) {
    require_size(B, max_index);
    std::vector<long> bad(max_index, 0);
    for (unsigned long n = 1; n <= max_index; ++n)
        for (unsigned long m = 1; m <= n; ++m)
            if (!strong_divisibility_cell(B, m, n)) {
                bad[n - 1] = static_cast<long>(m);
                break;
            }
    return reduce_rows(max_index, bad);
}

ValuationGridReport valuation_grid(std::span<const Integer> B, unsigned long max_product, bool a1_even) {
    require_size(B, max_product);
    std::vector<std::vector<ValuationGridEntry>> rows(max_product);
    for (unsigned long n = 1; n <= max_product; ++n) rows[n - 1] = valuation_row(B, n, max_product, a1_even);
    return reduce_grid(max_product, a1_even, rows);
}

std::vector<Integer> primitive_cofactors(std::span<const Integer> B, unsigned long from, unsigned long to) {
    require_size(B, to);
    std::vector<Integer> out;
    for (unsigned long n = from; n <= to; ++n) out.push_back(primitive_cofactor(B, n));
    return out;
}

}  // namespace serial

namespace omp {

StrongDivisibilityReport strong_divisibility(std::span<const Integer> B, unsigned long max_index) {
    require_size(B, max_index);
    std::vector<long> bad(max_index, 0);
    long count = static_cast<long>(max_index);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        unsigned long n = static_cast<unsigned long>(i) + 1;
        for (unsigned long m = 1; m <= n; ++m)
            if (!strong_divisibility_cell(B, m, n)) {
                bad[static_cast<std::size_t>(i)] = static_cast<long>(m);
                break;
            }
    }
    return reduce_rows(max_index, bad);
}

ValuationGridReport valuation_grid(std::span<const Integer> B, unsigned long max_product, bool a1_even) {
    require_size(B, max_product);
    std::vector<std::vector<ValuationGridEntry>> rows(max_product);
    long count = static_cast<long>(max_product);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        unsigned long n = static_cast<unsigned long>(i) + 1;
        rows[static_cast<std::size_t>(i)] = valuation_row(B, n, max_product, a1_even);
    }
    return reduce_grid(max_product, a1_even, rows);
}

std::vector<Integer> primitive_cofactors(std::span<const Integer> B, unsigned long from, unsigned long to) {
    require_size(B, to);
    if (to < from) return {};
    std::vector<Integer> out(to - from + 1);
    long count = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = primitive_cofactor(B, from + static_cast<unsigned long>(i));
    return out;
}

}  // namespace omp
}  // namespace edsfrey::kernels

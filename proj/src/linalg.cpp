#include "edsfrey/linalg.hpp"

#include "edsfrey/error.hpp"

#include <utility>

namespace edsfrey {

QMatrix identity_matrix(std::size_t n) {
    QMatrix m(n, QVector(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QVector mat_vec(const QMatrix& a, const QVector& x) {
    QVector y(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] != 0 && a[i][j] != 0) y[i] += a[i][j] * x[j];
    return y;
}

QMatrix mat_mul(const QMatrix& a, const QMatrix& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMatrix c(n, QVector(m, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (b[l][j] != 0) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

Rational determinant(QMatrix a) {
    std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            Rational f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c)
                if (a[col][c] != 0) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

QVector solve(QMatrix a, QVector b) {
    std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) fail(ErrorCode::precondition, "singular linear system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        Rational inv = 1 / a[col][col];
        for (std::size_t c = col; c < n; ++c) a[col][c] *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col];
            for (std::size_t c = col; c < n; ++c)
                if (a[col][c] != 0) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    return b;
}

QMatrix inverse(const QMatrix& a) {
    std::size_t n = a.size();
    QMatrix work = a;
    QMatrix inv = identity_matrix(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && work[piv][col] == 0) ++piv;
        if (piv == n) fail(ErrorCode::precondition, "singular matrix");
        std::swap(work[piv], work[col]);
        std::swap(inv[piv], inv[col]);
        Rational s = 1 / work[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            work[col][c] *= s;
            inv[col][c] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || work[r][col] == 0) continue;
            Rational f = work[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                if (work[col][c] != 0) work[r][c] -= f * work[col][c];
                if (inv[col][c] != 0) inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

std::vector<Rational> charpoly(const QMatrix& a) {
    std::size_t n = a.size();
    QMatrix h = a;
    // Similarity reduction to upper Hessenberg form.
    for (std::size_t m = 1; m + 1 < n; ++m) {
        std::size_t i = m;
        while (i < n && h[i][m - 1] == 0) ++i;
        if (i == n) continue;
        if (i != m) {
            std::swap(h[i], h[m]);
            for (std::size_t r = 0; r < n; ++r) std::swap(h[r][i], h[r][m]);
        }
        for (std::size_t r = m + 1; r < n; ++r) {
            if (h[r][m - 1] == 0) continue;
            Rational u = h[r][m - 1] / h[m][m - 1];
            for (std::size_t c = 0; c < n; ++c)
                if (h[m][c] != 0) h[r][c] -= u * h[m][c];
            for (std::size_t c = 0; c < n; ++c)
                if (h[c][r] != 0) h[c][m] += u * h[c][r];
        }
    }
    // p[m] is the charpoly of the leading m x m block, low-to-high coefficients.
    std::vector<std::vector<Rational>> p(n + 1);
    p[0] = {Rational(1)};
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<Rational> cur(m + 1, Rational(0));
        const auto& prev = p[m - 1];
        for (std::size_t k = 0; k < prev.size(); ++k) {
            cur[k + 1] += prev[k];
            cur[k] -= h[m - 1][m - 1] * prev[k];
        }
        Rational t = 1;
        for (std::size_t i = 1; i < m; ++i) {
            t *= h[m - i][m - i - 1];
            if (t == 0) break;
            Rational f = t * h[m - i - 1][m - 1];
            if (f == 0) continue;
            const auto& q = p[m - i - 1];
            for (std::size_t k = 0; k < q.size(); ++k) cur[k] -= f * q[k];
        }
        p[m] = std::move(cur);
    }
    return p[n];
}

}  // namespace edsfrey

#include "polyuniv/zmatrix.hpp"

#include <climits>
#include <sstream>
#include <stdexcept>

namespace polyuniv {

ZMatrix zmatrix(const std::vector<std::vector<i64>>& m) {
    ZMatrix r;
    for (auto& row : m) r.push_back(zvector(row));
    return r;
}

ZVector zvector(const std::vector<i64>& v) {
    ZVector r;
    for (auto x : v) r.emplace_back(static_cast<long>(x));
    return r;
}

i64 to_i64(const Z& z) {
    if (!z.fits_slong_p()) throw OverflowError("integer does not fit in 64 bits");
    return z.get_si();
}

i128 to_i128(const Z& z) {
    if (z.fits_slong_p()) return z.get_si();
    Z lim = Z(1) << 126;
    if (abs(z) >= lim) throw OverflowError("integer does not fit in 128 bits");
    Z a = abs(z);
    Z hi = a >> 64;
    Z lo = a - (hi << 64);
    unsigned __int128 u = (static_cast<unsigned __int128>(hi.get_ui()) << 64) | lo.get_ui();
    i128 r = static_cast<i128>(u);
    return z < 0 ? -r : r;
}

Z from_i128(i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    Z hi = static_cast<unsigned long>(u >> 64);
    Z lo = static_cast<unsigned long>(u & ~0ULL);
    Z r = (hi << 64) + lo;
    return neg ? Z(-r) : r;
}

std::vector<std::vector<i64>> to_i64(const ZMatrix& m) {
    std::vector<std::vector<i64>> r;
    for (auto& row : m) {
        r.emplace_back();
        for (auto& x : row) r.back().push_back(to_i64(x));
    }
    return r;
}

ZMatrix transpose(const ZMatrix& a) {
    if (a.empty()) return {};
    ZMatrix t(a[0].size(), ZVector(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

ZMatrix multiply(const ZMatrix& a, const ZMatrix& b) {
    if (a.empty()) return {};
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    if (a[0].size() != k) throw std::invalid_argument("matrix shape mismatch");
    ZMatrix c(n, ZVector(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

Z det(const ZMatrix& a0) {
    std::size_t n = a0.size();
    if (n == 0) return 1;
    ZMatrix a = a0;
    Z prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]);
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

int rank(const ZMatrix& a0) {
    if (a0.empty()) return 0;
    QMatrix a;
    for (auto& row : a0) {
        a.emplace_back();
        for (auto& x : row) a.back().emplace_back(x);
    }
    std::size_t rows = a.size(), cols = a[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (a[i][c] == 0) continue;
            Q f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return static_cast<int>(r);
}

bool is_symmetric(const ZMatrix& a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != a.size()) return false;
        for (std::size_t j = 0; j < i; ++j)
            if (a[i][j] != a[j][i]) return false;
    }
    return true;
}

ZMatrix gram_of(const ZMatrix& basis, const ZVector& diag) {
    std::size_t r = basis.size();
    ZMatrix g(r, ZVector(r, 0));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) {
            Z s = 0;
            for (std::size_t k = 0; k < diag.size(); ++k) s += basis[i][k] * diag[k] * basis[j][k];
            g[i][j] = g[j][i] = s;
        }
    return g;
}

int vp(const Z& z, long p) {
    if (z == 0) return INT_MAX;
    Z t = abs(z);
    int v = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

int vp(const Q& q, long p) {
    if (q == 0) return INT_MAX;
    return vp(Z(q.get_num()), p) - vp(Z(q.get_den()), p);
}

std::string to_string(const ZMatrix& m) {
    std::ostringstream o;
    o << "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        o << (i ? "," : "") << "[";
        for (std::size_t j = 0; j < m[i].size(); ++j) o << (j ? "," : "") << m[i][j].get_str();
        o << "]";
    }
    o << "]";
    return o.str();
}

}  // namespace polyuniv

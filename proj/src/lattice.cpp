#include "polyuniv/lattice.hpp"

#include <algorithm>
#include <climits>

namespace polyuniv::lattice {

Z DiagonalSpace::Q(const ZVector& x) const { return B(x, x); }

Z DiagonalSpace::B(const ZVector& x, const ZVector& y) const {
    if (x.size() != a.size() || y.size() != a.size()) throw std::invalid_argument("vector length mismatch");
    Z s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += Z(static_cast<long>(a[i])) * x[i] * y[i];
    return s;
}

ZVector DiagonalSpace::form_of(const ZVector& y) const {
    ZVector f(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) f[i] = Z(static_cast<long>(a[i])) * y[i];
    return f;
}

BetaVector BetaVector::make(const std::vector<i64>& a, std::vector<i64> beta, i64 declared) {
    if (beta.size() != a.size()) throw std::invalid_argument("beta length must match the coefficient tuple");
    Z s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += Z(static_cast<long>(a[i])) * static_cast<long>(beta[i]);
    if (s != static_cast<long>(declared))
        throw std::invalid_argument("B(alpha, beta) = " + s.get_str() + ", declared " + std::to_string(declared));
    return BetaVector{std::move(beta), declared};
}

ZMatrix hnf(ZMatrix A) {
    if (A.empty()) return A;
    std::size_t m = A.size(), n = A[0].size(), r = 0;
    auto sub = [&](std::size_t i, std::size_t k, const Z& q) {
        if (q == 0) return;
        for (std::size_t c = 0; c < n; ++c) A[i][c] -= q * A[k][c];
    };
    for (std::size_t c = 0; c < n && r < m; ++c) {
        while (true) {
            std::size_t best = m;
            for (std::size_t i = r; i < m; ++i)
                if (A[i][c] != 0 && (best == m || abs(A[i][c]) < abs(A[best][c]))) best = i;
            if (best == m) break;
            std::swap(A[r], A[best]);
            bool done = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (A[i][c] == 0) continue;
                Z q;
                mpz_fdiv_q(q.get_mpz_t(), A[i][c].get_mpz_t(), A[r][c].get_mpz_t());
                sub(i, r, q);
                if (A[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (A[r][c] == 0) continue;
        if (A[r][c] < 0)
            for (auto& x : A[r]) x = -x;
        for (std::size_t i = 0; i < r; ++i) {
            Z q;
            mpz_fdiv_q(q.get_mpz_t(), A[i][c].get_mpz_t(), A[r][c].get_mpz_t());
            sub(i, r, q);
        }
        ++r;
    }
    A.resize(r);
    return A;
}

ZMatrix integer_kernel(const ZMatrix& forms) {
    if (forms.empty()) throw std::invalid_argument("no forms given; use the identity basis");
    std::size_t k = forms.size(), n = forms[0].size();
    // [forms^T | I]: rows with vanishing left part carry the kernel
    ZMatrix aug(n, ZVector(k + n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) aug[i][j] = forms[j][i];
        aug[i][k + i] = 1;
    }
    ZMatrix h = hnf(aug);
    ZMatrix ker;
    for (auto& row : h) {
        bool zero = true;
        for (std::size_t j = 0; j < k; ++j)
            if (row[j] != 0) zero = false;
        if (zero) ker.emplace_back(row.begin() + static_cast<long>(k), row.end());
    }
    return ker;
}

GramLattice kernel_lattice(const DiagonalSpace& space, const ZMatrix& forms) {
    GramLattice L;
    L.ambient = space.a;
    std::size_t n = space.n();
    for (auto& f : forms)
        if (f.size() != n) throw std::invalid_argument("form length mismatch");
    if (forms.empty()) {
        L.basis.assign(n, ZVector(n, 0));
        for (std::size_t i = 0; i < n; ++i) L.basis[i][i] = 1;
    } else {
        L.basis = integer_kernel(forms);
        L.forms_rank = rank(forms);
    }
    L.dependent_forms = L.forms_rank < static_cast<int>(forms.size());
    ZVector d;
    for (auto v : space.a) d.emplace_back(static_cast<long>(v));
    L.gram = gram_of(L.basis, d);
    if (L.rank() != static_cast<int>(n) - L.forms_rank) throw InvariantError("kernel rank mismatch");
    return L;
}

GramLattice hyperplane_lattice(const std::vector<i64>& a) {
    DiagonalSpace s{a};
    return kernel_lattice(s, {s.form_of(s.alpha())});
}

GramLattice complement(const std::vector<i64>& a, const std::vector<i64>& beta) {
    DiagonalSpace s{a};
    return kernel_lattice(s, {s.form_of(s.alpha()), s.form_of(zvector(beta))});
}

Z discriminant(const GramLattice& L) { return det(L.gram); }

Z pair_discriminant(const std::vector<i64>& a, const std::vector<i64>& beta) {
    DiagonalSpace s{a};
    ZVector al = s.alpha(), b = zvector(beta);
    Z B = s.B(al, b);
    return s.Q(al) * s.Q(b) - B * B;
}

std::optional<std::vector<Q>> coordinates(const ZMatrix& basis, const ZVector& x) {
    std::size_t r = basis.size();
    if (r == 0) {
        for (auto& v : x)
            if (v != 0) return std::nullopt;
        return std::vector<Q>{};
    }
    std::size_t n = x.size();
    // solve c * basis = x: n equations in r unknowns
    QMatrix m(n, std::vector<Q>(r + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) m[i][j] = basis[j][i];
        m[i][r] = x[i];
    }
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    for (std::size_t c = 0; c < r && row < n; ++c) {
        std::size_t p = row;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(m[row], m[p]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || m[i][c] == 0) continue;
            Q f = m[i][c] / m[row][c];
            for (std::size_t j = c; j <= r; ++j) m[i][j] -= f * m[row][j];
        }
        piv.push_back(c);
        ++row;
    }
    for (std::size_t i = row; i < n; ++i)
        if (m[i][r] != 0) return std::nullopt;
    std::vector<Q> c(r, 0);
    for (std::size_t i = 0; i < piv.size(); ++i) c[piv[i]] = m[i][r] / m[i][piv[i]];
    return c;
}

bool in_span_Z(const ZMatrix& basis, const ZVector& x) {
    auto c = coordinates(basis, x);
    if (!c) return false;
    for (auto& q : *c)
        if (q.get_den() != 1) return false;
    return true;
}

long span_completeness(const GramLattice& L, const ZMatrix& forms, int box, int samples, std::mt19937_64& rng) {
    std::size_t n = L.ambient.size();
    // free coordinates are drawn, the remaining ones solved from the forms
    std::vector<std::size_t> pivots;
    {
        QMatrix m;
        for (auto& f : forms) {
            m.emplace_back();
            for (auto& v : f) m.back().emplace_back(v);
        }
        // smallest nonzero pivot per row keeps the solved coordinates integral more often
        for (std::size_t row = 0; row < m.size(); ++row) {
            std::size_t c = n;
            for (std::size_t j = 0; j < n; ++j) {
                if (m[row][j] == 0 || std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
                if (c == n || abs(m[row][j]) < abs(m[row][c])) c = j;
            }
            if (c == n) continue;
            for (std::size_t i = row + 1; i < m.size(); ++i) {
                Q f = m[i][c] / m[row][c];
                for (std::size_t j = 0; j < n; ++j) m[i][j] -= f * m[row][j];
            }
            pivots.push_back(c);
        }
    }
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i)
        if (std::find(pivots.begin(), pivots.end(), i) == pivots.end()) free.push_back(i);
    // sparse draws: dense ones almost never solve back into the box
    std::uniform_int_distribution<int> coord(-box, box), support(1, 3);
    std::uniform_int_distribution<std::size_t> pick(0, free.empty() ? 0 : free.size() - 1);
    long checked = 0;
    for (int s = 0; s < samples; ++s) {
        ZVector x(n, 0);
        if (!free.empty())
            for (int k = support(rng); k > 0; --k) x[free[pick(rng)]] = coord(rng);
        // solve forms restricted to pivot columns
        std::size_t k = pivots.size();
        QMatrix m(forms.size(), std::vector<Q>(k + 1));
        for (std::size_t i = 0; i < forms.size(); ++i) {
            Q rhs = 0;
            for (auto f : free) rhs -= Q(forms[i][f]) * Q(x[f]);
            for (std::size_t j = 0; j < k; ++j) m[i][j] = forms[i][pivots[j]];
            m[i][k] = rhs;
        }
        ZMatrix cols(k, ZVector(forms.size()));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < forms.size(); ++i) cols[j][i] = forms[i][pivots[j]];
        ZVector rhs(forms.size());
        bool integral = true;
        for (std::size_t i = 0; i < forms.size(); ++i) {
            Q r = m[i][k];
            if (r.get_den() != 1) integral = false;
            rhs[i] = r.get_num();
        }
        if (!integral) continue;
        auto sol = coordinates(cols, rhs);
        if (!sol) continue;
        bool ok = true;
        for (std::size_t j = 0; j < k; ++j) {
            if ((*sol)[j].get_den() != 1) ok = false;
            else x[pivots[j]] = (*sol)[j].get_num();
            if (ok && abs(x[pivots[j]]) > box) ok = false;
        }
        if (!ok) continue;
        ++checked;
        if (!in_span_Z(L.basis, x)) return -1;
    }
    return checked;
}

std::vector<std::vector<Q>> zp_kernel(const ZMatrix& forms, long p) {
    if (forms.empty()) return {};
    std::size_t k = forms.size(), n = forms[0].size();
    QMatrix F(k, std::vector<Q>(n));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j) F[i][j] = forms[i][j];
    QMatrix V(n, std::vector<Q>(n, 0));  // columns transform: F V
    for (std::size_t i = 0; i < n; ++i) V[i][i] = 1;
    std::size_t r = 0;
    for (; r < std::min(k, n); ++r) {
        int best = INT_MAX;
        std::size_t bi = k, bj = n;
        for (std::size_t i = r; i < k; ++i)
            for (std::size_t j = r; j < n; ++j)
                if (F[i][j] != 0 && vp(F[i][j], p) < best) {
                    best = vp(F[i][j], p);
                    bi = i;
                    bj = j;
                }
        if (bi == k) break;
        std::swap(F[r], F[bi]);
        for (auto& row : F) std::swap(row[r], row[bj]);
        for (auto& row : V) std::swap(row[r], row[bj]);
        Q piv = F[r][r];
        for (std::size_t i = r + 1; i < k; ++i) {
            if (F[i][r] == 0) continue;
            Q f = F[i][r] / piv;
            for (std::size_t j = r; j < n; ++j) F[i][j] -= f * F[r][j];
        }
        for (std::size_t j = r + 1; j < n; ++j) {
            if (F[r][j] == 0) continue;
            Q f = F[r][j] / piv;  // p-integral by minimality
            for (std::size_t i = 0; i < k; ++i) F[i][j] -= f * F[i][r];
            for (std::size_t i = 0; i < n; ++i) V[i][j] -= f * V[i][r];
        }
    }
    std::vector<std::vector<Q>> ker;
    for (std::size_t j = r; j < n; ++j) {
        std::vector<Q> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = V[i][j];
        ker.push_back(col);
    }
    return ker;
}

namespace {

bool p_integral(const Q& q, long p) { return mpz_divisible_ui_p(q.get_den().get_mpz_t(), static_cast<unsigned long>(p)) == 0; }

bool zp_member(const ZMatrix& basis, const std::vector<Q>& w, long p) {
    // clear the p-unit denominators; membership over Z_p is unchanged
    Z den = 1;
    for (auto& q : w) {
        Z d = q.get_den();
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
    }
    if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p))) return false;
    ZVector x;
    for (auto& q : w) x.push_back(Z(q * den));
    auto c = coordinates(basis, x);
    if (!c) return false;
    for (auto& q : *c)
        if (!p_integral(q, p)) return false;
    return true;
}

}  // namespace

bool localization_check_lemma_p(const std::vector<i64>& a, const ZMatrix& K, long p, int box) {
    DiagonalSpace s{a};
    if (K.empty()) return true;
    ZMatrix forms;
    for (auto& g : K) forms.push_back(s.form_of(g));
    ZMatrix basis = integer_kernel(forms);
    auto ker = zp_kernel(forms, p);
    if (ker.size() != basis.size()) return false;
    for (auto& w : ker) {
        // w must really be orthogonal to K
        for (auto& f : forms) {
            Q dot = 0;
            for (std::size_t i = 0; i < w.size(); ++i) dot += Q(f[i]) * w[i];
            if (dot != 0) return false;
        }
        if (!zp_member(basis, w, p)) return false;
    }
    for (std::size_t i = 0; i < ker.size(); ++i)
        for (std::size_t j = i + 1; j < ker.size(); ++j)
            for (int c1 = -box; c1 <= box; ++c1)
                for (int c2 = -box; c2 <= box; ++c2) {
                    std::vector<Q> w(a.size());
                    for (std::size_t t = 0; t < a.size(); ++t) w[t] = Q(c1) * ker[i][t] + Q(c2) * ker[j][t];
                    if (!zp_member(basis, w, p)) return false;
                }
    return true;
}

}  // namespace polyuniv::lattice

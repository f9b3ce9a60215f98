#include "polyuniv/padic.hpp"

#include <climits>
#include <sstream>
#include <stdexcept>

namespace polyuniv::padic {

std::string to_string(const LocalClass& c) {
    std::ostringstream o;
    o << "(v=" << c.v << ",u=";
    if (c.p == 2) o << c.u;
    else o << (c.u == 1 ? "sq" : "nsq");
    o << ")";
    return o.str();
}

bool is_prime(long p) {
    if (p < 2) return false;
    for (long q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

int legendre(const Z& a, long p) {
    Z pp = p;
    int l = mpz_legendre(a.get_mpz_t(), pp.get_mpz_t());
    if (l == 0) throw std::invalid_argument("legendre symbol of a multiple of p");
    return l;
}

namespace {

void check_prime(long p) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
}

// n / p^v for n != 0
Z unit_part(const Z& n, long p, int v) {
    Z d;
    mpz_ui_pow_ui(d.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(v));
    return n / d;
}

int mod8(const Z& z) { return static_cast<int>(mpz_fdiv_ui(z.get_mpz_t(), 8)); }

}  // namespace

LocalClass local_class(const Z& n, long p) {
    check_prime(p);
    if (n == 0) throw std::invalid_argument("local class of zero");
    LocalClass c{p, vp(n, p), 0};
    Z u = unit_part(n, p, c.v);
    c.u = p == 2 ? mod8(u) : legendre(u, p);
    return c;
}

LocalClass local_class(const Q& q, long p) {
    if (q == 0) throw std::invalid_argument("local class of zero");
    // num/den and num*den share the square class
    LocalClass a = local_class(Z(q.get_num()), p);
    LocalClass b = local_class(Z(q.get_den()), p);
    LocalClass c{p, a.v - b.v, 0};
    c.u = p == 2 ? (a.u * b.u) % 8 : a.u * b.u;
    return c;
}

std::vector<int> unit_classes(long p) {
    if (p == 2) return {1, 3, 5, 7};
    return {1, -1};
}

int hilbert_symbol(const Q& a, const Q& b, long p) {
    check_prime(p);
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert symbol of zero");
    Z A = a.get_num() * a.get_den();
    Z B = b.get_num() * b.get_den();
    int al = vp(A, p), be = vp(B, p);
    Z u = unit_part(A, p, al), w = unit_part(B, p, be);
    if (p == 2) {
        int u8 = mod8(u), w8 = mod8(w);
        int eu = ((u8 - 1) / 2) & 1, ew = ((w8 - 1) / 2) & 1;
        int ou = ((u8 * u8 - 1) / 8) & 1, ow = ((w8 * w8 - 1) / 8) & 1;
        int s = eu * ew + al * ow + be * ou;
        return (s & 1) ? -1 : 1;
    }
    int sign = 1;
    if ((static_cast<long>(al) * be * ((p - 1) / 2)) & 1) sign = -sign;
    if (be & 1) sign *= legendre(u, p);
    if (al & 1) sign *= legendre(w, p);
    return sign;
}

int hasse_invariant(const std::vector<Q>& diag, long p) {
    int h = 1;
    for (std::size_t i = 0; i < diag.size(); ++i)
        for (std::size_t j = i + 1; j < diag.size(); ++j) h *= hilbert_symbol(diag[i], diag[j], p);
    return h;
}

std::vector<Q> rational_diagonal(const ZMatrix& gram) {
    std::size_t n = gram.size();
    QMatrix m(n, std::vector<Q>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = gram[i][j];
    std::vector<Q> d;
    for (std::size_t k = 0; k < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][r] == 0) ++r;
            if (r < n) {
                std::swap(m[k], m[r]);
                for (auto& row : m) std::swap(row[k], row[r]);
            } else {
                r = k + 1;
                while (r < n && m[k][r] == 0) ++r;
                if (r == n) throw std::invalid_argument("degenerate form");
                // e_k <- e_k + e_r makes the pivot 2 m[k][r]
                for (std::size_t j = 0; j < n; ++j) m[k][j] += m[r][j];
                for (std::size_t j = 0; j < n; ++j) m[j][k] += m[j][r];
            }
        }
        Q piv = m[k][k];
        d.push_back(piv);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k] == 0) continue;
            Q f = m[i][k] / piv;
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
            for (std::size_t j = k; j < n; ++j) m[j][i] = m[i][j];
        }
    }
    return d;
}

Splitting split(const ZMatrix& gram, long p) {
    check_prime(p);
    if (!is_symmetric(gram)) throw std::invalid_argument("gram matrix must be symmetric");
    std::size_t n = gram.size();
    QMatrix m(n, std::vector<Q>(n));
    QMatrix b(n, std::vector<Q>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        b[i][i] = 1;
        for (std::size_t j = 0; j < n; ++j) m[i][j] = gram[i][j];
    }
    std::vector<bool> active(n, true);
    Splitting s;
    s.p = p;

    auto add_row = [&](std::size_t k, std::size_t i, const Q& f) {  // e_k += f e_i
        for (std::size_t l = 0; l < n; ++l) m[k][l] += f * m[i][l];
        for (std::size_t l = 0; l < n; ++l) m[l][k] += f * m[l][i];
        for (std::size_t l = 0; l < n; ++l) b[k][l] += f * b[i][l];
    };

    for (std::size_t left = n; left > 0;) {
        int best = INT_MAX;
        std::size_t bi = n, bj = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i; j < n; ++j) {
                if (!active[j] || m[i][j] == 0) continue;
                int v = vp(m[i][j], p);
                // ties favour diagonal entries
                if (v < best || (v == best && i == j && bi != bj)) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == n) throw std::invalid_argument("degenerate form");
        if (bi != bj && p != 2) {
            add_row(bi, bj, 1);
            bj = bi;
        }
        if (bi == bj) {
            Q piv = m[bi][bi];
            for (std::size_t k = 0; k < n; ++k)
                if (active[k] && k != bi && m[k][bi] != 0) add_row(k, bi, -m[k][bi] / piv);
            Block blk;
            blk.g = {{piv}};
            blk.scale = vp(piv, p);
            s.blocks.push_back(blk);
            s.basis.push_back(b[bi]);
            active[bi] = false;
            --left;
            continue;
        }
        Q a = m[bi][bi], c = m[bj][bj], o = m[bi][bj];
        Q det = a * c - o * o;
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            Q x = m[k][bi], y = m[k][bj];
            if (x == 0 && y == 0) continue;
            Q fi = (x * c - y * o) / det, fj = (y * a - x * o) / det;
            add_row(k, bi, -fi);
            add_row(k, bj, -fj);
        }
        Block blk;
        blk.g = {{a, o}, {o, c}};
        blk.scale = best;
        int va = a == 0 ? INT_MAX : vp(a, p), vc = c == 0 ? INT_MAX : vp(c, p);
        blk.hyperbolic = va > best + 1 || vc > best + 1;
        s.blocks.push_back(blk);
        s.basis.push_back(b[bi]);
        s.basis.push_back(b[bj]);
        active[bi] = active[bj] = false;
        left -= 2;
    }
    return s;
}

ZMatrix diagonal_gram(const ZVector& d) {
    ZMatrix g(d.size(), ZVector(d.size(), 0));
    for (std::size_t i = 0; i < d.size(); ++i) g[i][i] = d[i];
    return g;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Represented: return "represented";
        case Verdict::NotRepresented: return "not-represented";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

}  // namespace polyuniv::padic

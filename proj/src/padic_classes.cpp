// Class calculus for represented sets over Z_p.
//
// A Z_p-lattice splits into 1x1 and (p = 2) 2x2 blocks. The set of values of each block is a
// union of square classes p^v * u * (Z_p^x)^2, and so is every orthogonal sum, so the represented
// set is tracked as a class mask. Sums of two classes follow the rules in add_pair().
#include <algorithm>
#include <climits>
#include <functional>
#include <memory>
#include <stdexcept>

#include "polyuniv/padic.hpp"

namespace polyuniv::padic {

namespace {

Z pow_p(long p, int k) {
    Z r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

Z mod(const Z& a, const Z& m) {
    Z r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Z inverse(const Z& a, const Z& m) {
    Z r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t())) throw InvariantError("non-invertible p-adic unit");
    return r;
}

Z reduce(const Q& q, const Z& m) { return mod(Z(q.get_num()) * inverse(Z(q.get_den()), m), m); }

struct Mask {
    long p = 2;
    int w = 0;  // valid for v <= w
    int nu = 4;
    std::vector<char> bits;

    Mask(long p_, int w_) : p(p_), w(w_), nu(p_ == 2 ? 4 : 2), bits((w_ + 1) * nu, 0) {}
    int idx(int u) const { return p == 2 ? (u - 1) / 2 : (u == 1 ? 0 : 1); }
    int uof(int i) const { return p == 2 ? 2 * i + 1 : (i == 0 ? 1 : -1); }
    bool has(int v, int u) const { return v >= 0 && v <= w && bits[v * nu + idx(u)]; }
    bool has(const LocalClass& c) const { return has(c.v, c.u); }
    void set(int v, int u) {
        if (v >= 0 && v <= w) bits[v * nu + idx(u)] = 1;
    }
    void set_all(int v) {
        for (int i = 0; i < nu; ++i) set(v, uof(i));
    }
    std::vector<LocalClass> list() const {
        std::vector<LocalClass> r;
        for (int v = 0; v <= w; ++v)
            for (int i = 0; i < nu; ++i)
                if (bits[v * nu + i]) r.push_back({p, v, uof(i)});
        return r;
    }
};

// Sums over odd p of two unit classes at equal valuation: reachable unit classes and whether
// cancellation (a multiple of p) is reachable.
struct OddTable {
    long p = 3;
    int nonsq = 2;
    bool reach[2][2][2] = {};
    bool zero[2][2] = {};

    explicit OddTable(long p_) : p(p_) {
        std::vector<char> sq(p, 0);
        for (long x = 1; x < p; ++x) sq[(x * x) % p] = 1;
        while (sq[nonsq]) ++nonsq;
        long rep[2] = {1, nonsq};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (long s1 = 1; s1 < p; ++s1) {
                    if (!sq[s1]) continue;
                    for (long s2 = 1; s2 < p; ++s2) {
                        if (!sq[s2]) continue;
                        long r = (rep[a] * s1 + rep[b] * s2) % p;
                        if (r == 0) zero[a][b] = true;
                        else reach[a][b][sq[r] ? 0 : 1] = true;
                    }
                }
    }
};

void add_pair(const LocalClass& x, const LocalClass& y, Mask& out, const OddTable* odd) {
    const LocalClass& c1 = x.v <= y.v ? x : y;
    const LocalClass& c2 = x.v <= y.v ? y : x;
    int a = c1.v, d = c2.v - c1.v;
    if (out.p != 2) {
        if (d > 0) {
            out.set(a, c1.u);
            return;
        }
        int i = out.idx(c1.u), j = out.idx(c2.u);
        for (int k = 0; k < 2; ++k)
            if (odd->reach[i][j][k]) out.set(a, out.uof(k));
        if (odd->zero[i][j])
            for (int v = a + 1; v <= out.w; ++v) out.set_all(v);
        return;
    }
    if (d >= 3) {
        out.set(a, c1.u);
    } else if (d >= 1) {
        out.set(a, (c1.u + (1 << d) * c2.u) % 8);
    } else {
        int r = (c1.u + c2.u) % 8;
        if (r == 2 || r == 6) {
            int h = r / 2;  // 1 or 3 mod 4
            out.set(a + 1, h);
            out.set(a + 1, h + 4);
        } else if (r == 4) {
            out.set_all(a + 2);
        } else {
            for (int v = a + 3; v <= out.w; ++v) out.set_all(v);
        }
    }
}

bool in_pair_sum(const LocalClass& c1, const LocalClass& c2, const LocalClass& z, long p, int w, const OddTable* odd) {
    Mask m(p, w);
    add_pair(c1, c2, m, odd);
    return m.has(z);
}

Mask block_mask(const Block& b, long p, int w) {
    Mask m(p, w);
    if (b.g.size() == 1) {
        LocalClass c = local_class(b.g[0][0], p);
        for (int v = c.v; v <= w; v += 2) m.set(v, c.u);
    } else if (b.hyperbolic) {
        for (int v = b.scale + 1; v <= w; ++v) m.set_all(v);
    } else {
        for (int v = b.scale + 1; v <= w; v += 2) m.set_all(v);
    }
    return m;
}

Mask sum_mask(const Mask& m1, const Mask& m2, const OddTable* odd) {
    Mask out(m1.p, m1.w);
    for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] = m1.bits[i] | m2.bits[i];
    auto l1 = m1.list(), l2 = m2.list();
    for (auto& x : l1)
        for (auto& y : l2) add_pair(x, y, out, odd);
    return out;
}

struct Calculus {
    long p;
    int w;
    Splitting sp;
    std::unique_ptr<OddTable> odd;
    std::vector<Mask> blocks;
    std::vector<Mask> prefix;  // prefix[j]: classes of blocks 0..j-1
    int smax = 0;

    Calculus(const ZMatrix& gram, long p_, int v_need) : p(p_), sp(split(gram, p_)) {
        if (p != 2) odd = std::make_unique<OddTable>(p);
        int nb = static_cast<int>(sp.blocks.size());
        // a class at v is decided by block classes at v+2 or below, one level per block at p = 2
        w = v_need + (p == 2 ? 3 * nb + 3 : 2);
        prefix.emplace_back(p, w);
        for (auto& b : sp.blocks) {
            smax = std::max(smax, b.scale);
            blocks.push_back(block_mask(b, p, w));
            prefix.push_back(sum_mask(prefix.back(), blocks.back(), odd.get()));
        }
    }
    const Mask& total() const { return prefix.back(); }
};

// ---- certificates -----------------------------------------------------------

struct Builder {
    const Calculus& cal;
    long p;
    int K;
    Z PK;
    std::vector<std::vector<Z>> gint;  // block entries mod p^K
    std::vector<std::size_t> offset;   // first basis row of each block
    std::vector<Z> y;                  // block coordinates

    Builder(const Calculus& c, int K_) : cal(c), p(c.p), K(K_), PK(pow_p(c.p, K_)) {
        std::size_t off = 0;
        for (auto& b : cal.sp.blocks) {
            std::vector<Z> e;
            for (auto& row : b.g)
                for (auto& q : row) e.push_back(reduce(q, PK));
            gint.push_back(e);
            offset.push_back(off);
            off += b.g.size();
        }
        y.assign(off, 0);
    }

    // class of z mod p^K; nullopt when z = 0 or precision is too short to tell
    std::optional<LocalClass> cls(const Z& z) const {
        Z r = mod(z, PK);
        if (r == 0) return std::nullopt;
        LocalClass c = local_class(r, p);
        if (c.v + (p == 2 ? 3 : 1) > K) return std::nullopt;
        return c;
    }

    Z rep(const LocalClass& c) const {
        int u = c.u;
        if (p != 2 && u == -1) u = cal.odd->nonsq;
        return mod(pow_p(p, c.v) * u, PK);
    }

    // root of g(t) = a2 t^2 + a1 t + a0 mod p^M with g' a unit along the lift
    std::optional<Z> newton(const Z& a2, const Z& a1, const Z& a0, int M) const {
        if (M <= 0) return Z(0);
        Z PM = pow_p(p, M);
        auto g = [&](const Z& t) { return mod(a2 * t * t + a1 * t + a0, PM); };
        for (long t0 = 0; t0 < p; ++t0) {
            Z t = t0;
            if (mod(g(t), Z(p)) != 0) continue;
            Z dv = mod(2 * a2 * t + a1, Z(p));
            if (dv == 0) continue;
            for (int it = 0; it < 2 * M + 4 && g(t) != 0; ++it) t = mod(t - g(t) * inverse(mod(2 * a2 * t + a1, PM), PM), PM);
            if (g(t) == 0) return t;
        }
        return std::nullopt;
    }

    // unit c: square root mod p^M (M >= 3 at p = 2)
    std::optional<Z> sqrt_unit(const Z& c, int M) const {
        if (M <= 0) return Z(1);
        Z PM = pow_p(p, M);
        if (p != 2) return newton(1, 0, mod(-c, PM), M);
        if (M < 3) return mod(c - 1, PM) == 0 ? std::optional<Z>(Z(1)) : std::nullopt;
        if (mod(c, Z(8)) != 1) return std::nullopt;
        Z t = 1;
        for (int i = 3; i < M; ++i) {
            Z m = pow_p(2, i + 1);
            if (mod(t * t - c, m) != 0) t += pow_p(2, i - 1);
        }
        if (mod(t * t - c, PM) != 0) return std::nullopt;
        return t;
    }

    bool solve_block(std::size_t j, const Z& t) {
        const Block& b = cal.sp.blocks[j];
        std::size_t o = offset[j];
        Z tr = mod(t, PK);
        if (tr == 0) {
            for (std::size_t i = 0; i < b.g.size(); ++i) y[o + i] = 0;
            return true;
        }
        int vt = vp(tr, p);
        if (b.g.size() == 1) {
            const Z& d = gint[j][0];
            int s = b.scale, h = vt - s;
            if (h < 0 || h % 2) return false;
            int M = K - vt;
            Z PM = pow_p(p, std::max(M, 0));
            Z ud = d / pow_p(p, s), ut = tr / pow_p(p, vt);
            Z c = M > 0 ? mod(ut * inverse(mod(ud, PM), PM), PM) : Z(0);
            auto r = sqrt_unit(c, M);
            if (!r) return false;
            y[o] = mod(*r * pow_p(p, h / 2), PK);
            return true;
        }
        int s = b.scale;
        const Z &A = gint[j][0], &Bo = gint[j][1], &C = gint[j][3];
        for (int h = 0; s + 1 + 2 * h <= vt; ++h) {
            int Kr = K - 2 * h;
            Z t2 = tr / pow_p(2, 2 * h);
            Z D = pow_p(2, s + 1);
            int M = Kr - s - 1;
            if (M <= 0) continue;
            Z PM = pow_p(2, M);
            Z a2 = A / D, a1 = mod(Bo / pow_p(2, s), PM);
            // y2 = 1: A t^2 + 2 Bo t + C - t2
            auto r = newton(a2, a1, mod((C - t2) / D, PM), M);
            if (r) {
                y[o] = mod(*r * pow_p(2, h), PK);
                y[o + 1] = pow_p(2, h);
                return true;
            }
            // y1 = 1: C t^2 + 2 Bo t + A - t2
            r = newton(C / D, a1, mod((A - t2) / D, PM), M);
            if (r) {
                y[o] = pow_p(2, h);
                y[o + 1] = mod(*r * pow_p(2, h), PK);
                return true;
            }
        }
        return false;
    }

    void clear_below(int J) {
        for (int j = 0; j < J; ++j)
            for (std::size_t i = 0; i < cal.sp.blocks[j].g.size(); ++i) y[offset[j] + i] = 0;
    }

    bool build(int J, const Z& z) {
        auto cz = cls(z);
        if (mod(z, PK) == 0) {
            clear_below(J);
            return true;
        }
        if (J == 0 || !cz || cz->v > cal.w) return false;
        const Mask& P = cal.prefix[J - 1];
        const Mask& Bm = cal.blocks[J - 1];
        std::size_t j = static_cast<std::size_t>(J - 1);
        if (P.has(*cz)) {
            solve_block(j, 0);
            if (build(J - 1, z)) return true;
        }
        if (Bm.has(*cz) && solve_block(j, z)) {
            clear_below(J - 1);
            return true;
        }
        for (auto& c1 : P.list()) {
            for (auto& c2 : Bm.list()) {
                if (!in_pair_sum(c1, c2, *cz, p, cal.w, cal.odd.get())) continue;
                if (c1.v < c2.v) {
                    Z b = rep(c2);
                    if (!solve_block(j, b)) continue;
                    Z a = z - b;
                    auto ca = cls(a);
                    if (ca && !P.has(*ca)) continue;
                    if (build(J - 1, a)) return true;
                } else if (c1.v > c2.v) {
                    Z a = rep(c1);
                    auto cb = cls(z - a);
                    if (!cb || !Bm.has(*cb) || !solve_block(j, z - a)) continue;
                    if (build(J - 1, a)) return true;
                } else {
                    long lim = p == 2 ? 32 : p;
                    for (long u = 1; u < lim; ++u) {
                        if (u % p == 0) continue;
                        Z a = pow_p(p, c1.v) * u;
                        auto ca = cls(a);
                        if (!ca || *ca != c1) continue;
                        auto cb = cls(z - a);
                        if (!cb || !Bm.has(*cb) || !solve_block(j, z - a)) continue;
                        if (build(J - 1, a)) return true;
                    }
                }
            }
        }
        return false;
    }
};

int gradient_valuation(const ZMatrix& g, const ZVector& x, long p, const Z& PK, int K) {
    int e = K;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Z s = 0;
        for (std::size_t j = 0; j < x.size(); ++j) s += g[i][j] * x[j];
        Z d = mod(2 * s, PK);
        if (d != 0) e = std::min(e, vp(d, p));
    }
    return e;
}

Z evaluate(const ZMatrix& g, const ZVector& x) {
    Z s = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) s += x[i] * g[i][j] * x[j];
    return s;
}

LocalRepCertificate certify(const Calculus& cal, const ZMatrix& gram, const Z& n, int max_precision) {
    LocalRepCertificate c;
    c.p = cal.p;
    c.n = n;
    int vn = vp(n, cal.p);
    int K = std::max(cal.w + 4, 2 * (vn + cal.smax) + 8);
    if (K > max_precision) K = max_precision;
    for (; K <= max_precision; K = K == max_precision ? K + 1 : std::min(max_precision, 2 * K)) {
        Builder b(cal, K);
        if (!b.build(static_cast<int>(cal.sp.blocks.size()), n)) continue;
        std::size_t dim = gram.size();
        ZVector x(dim, 0);
        for (std::size_t r = 0; r < dim; ++r) {
            if (b.y[r] == 0) continue;
            for (std::size_t i = 0; i < dim; ++i) x[i] += b.y[r] * reduce(cal.sp.basis[r][i], b.PK);
        }
        for (auto& xi : x) xi = mod(xi, b.PK);
        if (mod(evaluate(gram, x) - n, b.PK) != 0) throw InvariantError("p-adic certificate does not evaluate to target");
        int e = gradient_valuation(gram, x, cal.p, b.PK, K);
        int k = std::max(2 * e + 1, vn + 1);
        if (k > K) continue;
        Z pk = pow_p(cal.p, k);
        for (auto& xi : x) xi = mod(xi, pk);
        c.k = k;
        c.x = x;
        c.e = e;
        c.verdict = Verdict::Represented;
        return c;
    }
    c.verdict = Verdict::Inconclusive;
    c.note = "no liftable solution within precision cap";
    return c;
}

void check_input(const ZMatrix& gram, long p) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (gram.empty() || !is_symmetric(gram)) throw std::invalid_argument("gram matrix must be square and symmetric");
    if (det(gram) == 0) throw std::invalid_argument("form must be nondegenerate");
}

}  // namespace

LocalRepCertificate local_represents(const ZMatrix& gram, const Z& n, long p, int max_precision) {
    check_input(gram, p);
    if (n == 0) throw std::invalid_argument("target must be nonzero");
    LocalClass cn = local_class(n, p);
    Calculus cal(gram, p, cn.v);
    if (!cal.total().has(cn)) {
        LocalRepCertificate c;
        c.p = p;
        c.n = n;
        // completeness precision: no solution class exists at all, recorded for audit
        c.k = cn.v + 2 * (p == 2 ? 1 : 0) + 2 * cal.smax + 3;
        c.verdict = Verdict::NotRepresented;
        return c;
    }
    return certify(cal, gram, n, max_precision);
}

LocalRepCertificate local_represents_diag(const ZVector& diag, const Z& n, long p, int max_precision) {
    return local_represents(diagonal_gram(diag), n, p, max_precision);
}

bool verify_certificate(const ZMatrix& gram, const LocalRepCertificate& c) {
    if (c.verdict != Verdict::Represented) return false;
    if (c.x.size() != gram.size() || c.k < 2 * c.e + 1 || c.e < 0) return false;
    Z pk = pow_p(c.p, c.k);
    if (mod(evaluate(gram, c.x) - c.n, pk) != 0) return false;
    return gradient_valuation(gram, c.x, c.p, pk, c.k) == c.e;
}

ClassReport represented_classes(const ZMatrix& gram, long p, int v_cap, bool with_certificates, int max_precision) {
    check_input(gram, p);
    if (v_cap < 0) throw std::invalid_argument("v_cap must be nonnegative");
    ClassReport r;
    r.p = p;
    r.v_cap = v_cap;
    r.v_stab = vp(det(gram), p) + 2 + (p == 2 ? 2 : 0);
    Calculus cal(gram, p, std::max(v_cap, r.v_stab + 5));
    const Mask& m = cal.total();
    for (auto& c : m.list())
        if (c.v <= v_cap) r.classes.insert(c);
    r.periodic = true;
    for (int v = r.v_stab; v <= r.v_stab + 3; ++v)
        for (int u : unit_classes(p))
            if (m.has(v, u) != m.has(v + 2, u)) r.periodic = false;
    if (with_certificates) {
        for (auto& c : r.classes) {
            Z n = pow_p(p, c.v) * (p != 2 && c.u == -1 ? Z(cal.odd->nonsq) : Z(c.u));
            r.certificates.push_back(certify(cal, gram, n, max_precision));
        }
    }
    return r;
}

namespace {

UniversalityReport universality(const ZMatrix& gram, long p, int lo, int hi, int precision) {
    check_input(gram, p);
    UniversalityReport r;
    Calculus cal(gram, p, hi + 2);
    const Mask& m = cal.total();
    for (int v = lo; v <= hi; ++v)
        for (int u : unit_classes(p))
            if (!m.has(v, u)) r.missing.push_back({p, v, u});
    bool periodic = true;
    for (int v = lo; v + 2 <= hi + 2; ++v)
        for (int u : unit_classes(p))
            if (m.has(v, u) && !m.has(v + 2, u)) periodic = false;
    if (!periodic) throw InvariantError("represented classes not closed under square scaling");
    if (!r.missing.empty()) return r;
    // scaling by p^2 maps classes at v to v+2, so the two lowest levels carry the claim
    for (int v = lo; v <= lo + 1; ++v)
        for (int u : unit_classes(p)) {
            Z n = pow_p(p, v) * (p != 2 && u == -1 ? Z(cal.odd->nonsq) : Z(u));
            auto c = certify(cal, gram, n, precision);
            if (c.verdict != Verdict::Represented || !verify_certificate(gram, c)) r.inconclusive = true;
            r.certificates.push_back(std::move(c));
        }
    r.verdict = !r.inconclusive;
    return r;
}

}  // namespace

UniversalityReport even_universal_2(const ZMatrix& gram, int precision) {
    int hi = vp(det(gram), 2) + 4;
    return universality(gram, 2, 1, hi, precision);
}

bool is_even_universal_2(const ZMatrix& gram, int precision) { return even_universal_2(gram, precision).verdict; }

UniversalityReport universal_p(const ZMatrix& gram, long p, int precision) {
    if (p == 2) throw std::invalid_argument("universal_p needs an odd prime");
    int hi = vp(det(gram), p) + 2;
    return universality(gram, p, 0, hi, precision);
}

bool is_universal_p(const ZMatrix& gram, long p, int precision) { return universal_p(gram, p, precision).verdict; }

}  // namespace polyuniv::padic

#include <algorithm>
#include <climits>
#include <stdexcept>
#include <unordered_map>

#include <omp.h>

#include "polyuniv/coverage.hpp"
#include "polyuniv/polyform.hpp"

namespace polyuniv::coverage {

std::set<i64> SSet::values() const {
    std::set<i64> v;
    for (auto& [t, x] : members) v.insert(t);
    return v;
}

namespace {

struct State {
    i64 B = 0;
    i64 V = 0;
    std::int32_t parent = -1;
    i64 x = 0;
};

struct PairHash {
    std::size_t operator()(const std::pair<i64, i64>& k) const {
        return std::hash<i64>()(k.first * 1000003 ^ k.second);
    }
};

constexpr std::size_t kStateCap = 20'000'000;

}  // namespace

SSet s_set(const std::vector<i64>& a_prefix, i64 m, i64 r1, i64 s, bool witnesses) {
    if (m < 3) throw std::invalid_argument("m must be at least 3");
    if (s < 1) throw std::invalid_argument("s must be positive");
    for (auto a : a_prefix)
        if (a <= 0) throw std::invalid_argument("coefficients must be positive");
    SSet out{a_prefix, m, r1, s, {}};
    i64 bound = narrow64(mul_ck(s, m - 2));
    std::size_t n = a_prefix.size();
    // largest |sum a_j x_j| still reachable from coordinate i on
    std::vector<i64> reach(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) reach[i] = reach[i + 1] + a_prefix[i] * (s - 1);

    std::vector<std::vector<State>> layers(n + 1);
    layers[0].push_back(State{});
    for (std::size_t i = 0; i < n; ++i) {
        std::unordered_map<std::pair<i64, i64>, std::int32_t, PairHash> index;
        auto& next = layers[i + 1];
        for (std::size_t si = 0; si < layers[i].size(); ++si) {
            const State& st = layers[i][si];
            for (i64 x = -(s - 1); x <= s - 1; ++x) {
                i128 term = mul_ck(a_prefix[i], polyform::polygonal_number(m, x));
                if (term + st.V > bound) continue;
                i64 B = st.B + a_prefix[i] * x;
                if (std::abs(r1 - B) > reach[i + 1]) continue;
                i64 V = st.V + static_cast<i64>(term);
                auto [it, fresh] = index.emplace(std::make_pair(B, V), static_cast<std::int32_t>(next.size()));
                if (fresh) next.push_back(State{B, V, static_cast<std::int32_t>(si), x});
            }
        }
        if (next.size() > kStateCap) throw std::runtime_error("S-set search exceeded its state budget");
    }
    for (std::size_t si = 0; si < layers[n].size(); ++si) {
        const State& st = layers[n][si];
        if (st.B != r1) continue;
        i64 t = (st.V - r1) / (m - 2);
        if ((st.V - r1) % (m - 2) != 0 || t < 0) throw InvariantError("S-set member off the residue lattice");
        if (out.members.count(t)) continue;
        std::vector<i64> x;
        if (witnesses) {
            x.resize(n);
            std::int32_t cur = static_cast<std::int32_t>(si);
            for (std::size_t i = n; i > 0; --i) {
                x[i - 1] = layers[i][cur].x;
                cur = layers[i][cur].parent;
            }
        }
        out.members.emplace(t, std::move(x));
    }
    return out;
}

// ---- residue coverage -------------------------------------------------------------------------

namespace {

i128 delta_value(i64 m, const std::vector<i64>& a, const std::vector<i64>& y) {
    i128 v = 0;
    for (std::size_t i = 0; i < a.size(); ++i) v = add_ck(v, mul_ck(a[i], polyform::polygonal_number(m, y[i])));
    return v;
}

// Size reduction of a basis against its own Gram matrix, applied until nothing changes.
void reduce_basis(std::vector<std::vector<i64>>& b, const std::vector<i64>& a) {
    auto dot = [&](const std::vector<i64>& x, const std::vector<i64>& y) {
        i128 s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s = add_ck(s, mul_ck(mul_ck(a[i], x[i]), y[i]));
        return s;
    };
    for (int round = 0; round < 64; ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (i == j) continue;
                i128 gij = dot(b[i], b[j]), gjj = dot(b[j], b[j]);
                if (gjj == 0 || 2 * (gij < 0 ? -gij : gij) <= gjj) continue;
                i128 num = 2 * gij + gjj, den = 2 * gjj;
                i128 q = num / den - ((num % den != 0 && num < 0) ? 1 : 0);  // round(gij / gjj)
                for (std::size_t k = 0; k < a.size(); ++k) b[i][k] = narrow64(sub_ck(b[i][k], mul_ck(q, b[j][k])));
                changed = true;
            }
        if (!changed) break;
    }
}

struct Best {
    i64 q = LLONG_MAX;
    u64 idx = 0;
    bool set = false;
    bool better(i64 q2, u64 i2) const { return !set || q2 < q || (q2 == q && i2 < idx); }
};

// For each residue of Q(x) mod 2s, the vector of least norm (then least index) in the box.
std::vector<Best> residue_table(const std::vector<std::vector<i64>>& basis, const std::vector<i64>& a, i64 mod,
                                int box, bool parallel) {
    std::size_t d = basis.size();
    u64 side = 2 * box + 1, total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= side;
    std::vector<Best> merged(mod);
    int nthreads = parallel ? omp_get_max_threads() : 1;
    std::vector<std::vector<Best>> local(nthreads, std::vector<Best>(mod));
#pragma omp parallel for schedule(static) num_threads(nthreads) if (parallel)
    for (u64 idx = 0; idx < total; ++idx) {
        auto& tbl = local[omp_get_thread_num()];
        std::vector<i64> x(a.size(), 0);
        u64 rest = idx;
        for (std::size_t j = 0; j < d; ++j) {
            i64 c = static_cast<i64>(rest % side) - box;
            rest /= side;
            if (c)
                for (std::size_t k = 0; k < a.size(); ++k) x[k] += c * basis[j][k];
        }
        i64 q = 0;
        for (std::size_t k = 0; k < a.size(); ++k) q += a[k] * x[k] * x[k];
        i64 r = ((q % mod) + mod) % mod;
        if (tbl[r].better(q, idx)) tbl[r] = Best{q, idx, true};
    }
    for (auto& tbl : local)
        for (i64 r = 0; r < mod; ++r)
            if (tbl[r].set && merged[r].better(tbl[r].q, tbl[r].idx)) merged[r] = tbl[r];
    return merged;
}

std::vector<i64> decode(const std::vector<std::vector<i64>>& basis, std::size_t n, u64 idx, int box) {
    u64 side = 2 * box + 1;
    std::vector<i64> x(n, 0);
    for (auto& row : basis) {
        i64 c = static_cast<i64>(idx % side) - box;
        idx /= side;
        for (std::size_t k = 0; k < n; ++k) x[k] += c * row[k];
    }
    return x;
}

i64 centered(i64 R, i64 mod) {
    i64 r = R % mod;
    if (r > mod / 2) r -= mod;
    return r;
}

}  // namespace

CoverageReport residue_coverage(i64 m, i64 s, const std::vector<i64>& a2, const std::vector<std::vector<i64>>& betas,
                                const CoverageOptions& opt) {
    if (m < 3 || m > 200) throw std::invalid_argument("residue coverage needs 3 <= m <= 200");
    if (s < 1 || s > 60) throw std::invalid_argument("residue coverage needs 1 <= s <= 60");
    if (opt.max_box < 1 || opt.max_box > 4) throw std::invalid_argument("box must be in 1..4");
    CoverageReport rep;
    rep.m = m;
    rep.s = s;
    rep.a2 = a2;
    rep.betas = betas;
    i64 period = s * (m - 2);
    rep.targets = betas.empty() ? 0 : period;
    if (betas.empty()) return rep;

    lattice::DiagonalSpace sp{a2};
    struct Prepared {
        std::vector<std::vector<i64>> basis;
        i64 pairing = 0;
        i64 qbeta = 0;
    };
    std::vector<Prepared> prep;
    for (auto& b : betas) {
        Prepared p;
        p.pairing = sp.B(sp.alpha(), zvector(b)).get_si();
        if (p.pairing <= 0) throw std::invalid_argument("beta needs positive pairing with alpha");
        p.qbeta = sp.Q(zvector(b)).get_si();
        auto L = lattice::complement(a2, b);
        p.basis = to_i64(L.basis);
        reduce_basis(p.basis, a2);
        prep.push_back(std::move(p));
    }

    for (int box = 1; box <= opt.max_box; ++box) {
        rep.box_used = box;
        std::vector<std::vector<Best>> tables;
        for (auto& p : prep) tables.push_back(residue_table(p.basis, a2, 2 * s, box, opt.parallel));
        std::vector<std::optional<ResidueWitness>> slots(period);
#pragma omp parallel for schedule(dynamic, 16) if (opt.parallel)
        for (i64 R = 0; R < period; ++R) {
            i64 r1 = centered(R, m - 2);
            i64 t = (((R - r1) / (m - 2)) % s + s) % s;
            for (std::size_t k = 0; k < prep.size(); ++k) {
                const auto& p = prep[k];
                if (r1 % p.pairing != 0) continue;
                i64 rr = r1 / p.pairing;
                i128 need = static_cast<i128>(2 * t) - static_cast<i128>(rr) * rr * p.qbeta + static_cast<i128>(p.pairing) * rr;
                i64 res = static_cast<i64>(((need % (2 * s)) + 2 * s) % (2 * s));
                const Best& b = tables[k][res];
                if (!b.set) continue;
                auto x = decode(p.basis, a2.size(), b.idx, box);
                for (std::size_t i = 0; i < x.size(); ++i) x[i] += rr * betas[k][i];
                i128 value = delta_value(m, a2, x);
                if (opt.value_cap_multiplier > 0 && value > static_cast<i128>(opt.value_cap_multiplier) * (m - 2)) continue;
                ResidueWitness w;
                w.t = t;
                w.r1 = r1;
                w.beta_index = k;
                w.y = zvector(x);
                w.value = from_i128(value);
                slots[R] = std::move(w);
                break;
            }
        }
        rep.covered.clear();
        Z top = 0;
        for (i64 R = 0; R < period; ++R)
            if (slots[R]) {
                if (slots[R]->value > top) top = slots[R]->value;
                rep.covered.emplace(R, std::move(*slots[R]));
            }
        Z md = m - 2;
        rep.c_bound = (top + md - 1) / md;
        if (rep.complete()) break;
    }
    return rep;
}

bool verify_coverage(const CoverageReport& r) {
    lattice::DiagonalSpace sp{r.a2};
    i64 period = r.s * (r.m - 2);
    Z top = 0;
    for (auto& [R, w] : r.covered) {
        if (R < 0 || R >= period || w.beta_index >= r.betas.size()) return false;
        std::vector<i64> y;
        for (auto& z : w.y) y.push_back(to_i64(z));
        i128 v = delta_value(r.m, r.a2, y);
        if (from_i128(v) != w.value) return false;
        i128 md = v % period;
        if (md != R) return false;
        const auto& b = r.betas[w.beta_index];
        i64 c = sp.B(sp.alpha(), zvector(b)).get_si();
        if (w.r1 % c != 0) return false;
        ZVector x = w.y;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= Z(static_cast<long>(w.r1 / c)) * static_cast<long>(b[i]);
        if (sp.B(sp.alpha(), x) != 0 || sp.B(zvector(b), x) != 0) return false;
        if (w.value > top) top = w.value;
    }
    Z md = r.m - 2;
    return r.covered.empty() || r.c_bound * md >= top;
}

}  // namespace polyuniv::coverage

#include "polyuniv/coverage.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyuniv::coverage {

using padic::LocalClass;

Z CoveragePolynomial::evaluate(const ZVector& x) const {
    lattice::DiagonalSpace sp{a2};
    Z qb = sp.Q(zvector(beta.beta));
    return sp.Q(x) + r * r * qb - Z(static_cast<long>(beta.pairing)) * r;
}

Z CoveragePolynomial::evaluate_squared_variant(const ZVector& x) const {
    lattice::DiagonalSpace sp{a2};
    Z qb = sp.Q(zvector(beta.beta));
    return sp.Q(x) + r * r * qb * qb - Z(static_cast<long>(beta.pairing)) * r;
}

namespace {

void add_prime_factors(i64 n, std::set<long>& out) {
    if (n < 0) n = -n;
    for (i64 q = 2; q * q <= n; ++q)
        while (n % q == 0) {
            out.insert(static_cast<long>(q));
            n /= q;
        }
    if (n > 1) out.insert(static_cast<long>(n));
}

bool power_of_two(i64 c) {
    if (c < 0) c = -c;
    return c > 0 && (c & (c - 1)) == 0;
}

PrimeCheck check_prime(const ZMatrix& g, long p, int precision) {
    PrimeCheck pc;
    pc.p = p;
    auto u = p == 2 ? padic::even_universal_2(g, precision) : padic::universal_p(g, p, precision);
    pc.ok = u.verdict;
    pc.inconclusive = u.inconclusive;
    pc.missing = u.missing;
    return pc;
}

LocalReport leu(const std::vector<i64>& a2, const BetaVector& beta, long skip_p, int precision, bool stop_early) {
    if (!power_of_two(beta.pairing)) throw std::invalid_argument("B(alpha, beta) must be a power of two");
    auto L = lattice::complement(a2, beta.beta);
    if (L.rank() == 0) throw std::invalid_argument("complement is zero");
    LocalReport r;
    r.verdict = true;
    auto primes = relevant_primes(a2, beta.beta);
    // odd primes first: they are cheaper and most obstructions live there
    std::stable_partition(primes.begin(), primes.end(), [](long p) { return p != 2; });
    for (long p : primes) {
        if (p == skip_p) continue;
        auto pc = check_prime(L.gram, p, precision);
        r.verdict = r.verdict && pc.ok;
        r.primes.push_back(std::move(pc));
        if (!r.verdict && stop_early) break;
    }
    std::stable_sort(r.primes.begin(), r.primes.end(), [](const PrimeCheck& x, const PrimeCheck& y) {
        if (x.ok != y.ok) return !x.ok;
        return x.p < y.p;
    });
    return r;
}

}  // namespace

std::vector<long> relevant_primes(const std::vector<i64>& a2, const std::vector<i64>&) {
    // Away from 2 and the a_i, Z_p^n is unimodular, so the complement of the plane spanned by
    // alpha and beta keeps a unimodular part of rank >= n - 4 >= 3: isotropic, hence universal.
    std::set<long> ps{2, 3, 5, 7, 11, 13};
    for (auto x : a2) add_prime_factors(x, ps);
    return {ps.begin(), ps.end()};
}

LocalReport locally_even_universal(const std::vector<i64>& a2, const BetaVector& beta, long skip_p, int precision) {
    return leu(a2, beta, skip_p, precision, false);
}

LocalReport locally_even_universal_fast(const std::vector<i64>& a2, const BetaVector& beta, int precision) {
    return leu(a2, beta, 0, precision, true);
}

// ---- shifted sets -------------------------------------------------------------------------

namespace {

Z pow_z(long p, int k) {
    Z r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

int mod_small(const Z& z, long m) { return static_cast<int>(mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(m))); }

bool has_class(const padic::ClassReport& c, int v, int u) {
    if (v > c.v_cap) {
        if (!c.periodic) throw InvariantError("class set not periodic beyond the computed window");
        v -= 2 * ((v - c.v_cap + 1) / 2);
    }
    return c.classes.count(LocalClass{c.p, v, u}) > 0;
}

bool has_all_from(const padic::ClassReport& c, int k) {
    for (int v = k; v <= k + 1; ++v)
        for (int u : padic::unit_classes(c.p))
            if (!has_class(c, v, u)) return false;
    return true;
}

}  // namespace

bool ShiftedSet::contains(const Z& z) const {
    Z y = z - shift;
    if (y == 0) return true;
    auto c = padic::local_class(y, classes.p);
    return has_class(classes, c.v, c.u);
}

bool ShiftedSet::covers_coset(const Z& z0, int k) const {
    long p = classes.p;
    Z d = z0 - shift;
    int v = d == 0 ? k : std::min(vp(d, p), k);
    if (v >= k) return has_all_from(classes, k);
    Z unit = d / pow_z(p, v);
    int j = k - v;
    if (p != 2) return has_class(classes, v, padic::legendre(unit, p));
    if (j >= 3) return has_class(classes, v, mod_small(unit, 8));
    int base = mod_small(unit, 4);
    for (int u : {1, 3, 5, 7})
        if ((j == 1 || u % 4 == base) && !has_class(classes, v, u)) return false;
    return true;
}

std::vector<ShiftedSet> shifted_sets(const std::vector<i64>& a2, const std::vector<std::vector<i64>>& betas,
                                     long p0, i64 r1) {
    std::vector<ShiftedSet> out;
    lattice::DiagonalSpace sp{a2};
    for (auto& b : betas) {
        ShiftedSet s;
        s.beta = b;
        Z c = sp.B(sp.alpha(), zvector(b));
        if (c == 0) throw std::invalid_argument("beta orthogonal to alpha");
        s.pairing = c.get_si();
        if (r1 % s.pairing != 0) continue;
        s.r = r1 / s.pairing;
        s.shift = s.r * s.r * sp.Q(zvector(b)) - c * s.r;
        auto L = lattice::complement(a2, b);
        int vd = vp(det(L.gram), p0);
        s.classes = padic::represented_classes(L.gram, p0, vd + 2 + (p0 == 2 ? 2 : 0) + 3);
        out.push_back(std::move(s));
    }
    return out;
}

bool union_covers(const std::vector<ShiftedSet>& sets, long p0, const Z& z0, int k, int depth) {
    for (auto& s : sets)
        if (s.covers_coset(z0, k)) return true;
    if (depth <= 0 || sets.empty()) return false;
    Z step = pow_z(p0, k);
    for (long j = 0; j < p0; ++j)
        if (!union_covers(sets, p0, z0 + step * j, k + 1, depth - 1)) return false;
    return true;
}

T2Report check_t2(const std::vector<i64>& a2, const std::vector<std::vector<i64>>& betas, long p0, i64 r1,
                  const std::set<i64>& s_members, int precision) {
    if (!padic::is_prime(p0)) throw std::invalid_argument("p0 must be prime");
    if (precision < 1 || precision > 64) throw std::invalid_argument("precision must be in 1..64");
    T2Report r;
    r.precision = precision;
    auto sets = shifted_sets(a2, betas, p0, r1);
    for (int k = 1; k <= precision; ++k) {
        bool ok = true;
        for (i64 t : s_members) {
            if (!union_covers(sets, p0, Z(static_cast<long>(2 * t)), k, 4)) {
                ok = false;
                if (k == precision) r.uncovered.push_back(t);
                else break;
            }
        }
        r.by_precision.push_back(ok);
    }
    r.verdict = r.by_precision.back();
    r.stabilized_from = precision;
    while (r.stabilized_from > 1 && r.by_precision[r.stabilized_from - 2] == r.verdict) --r.stabilized_from;
    return r;
}

bool check_t2(const std::vector<i64>& a2, const std::vector<std::vector<i64>>& betas, long p0, i64 r1,
              const SSet& S, int precision) {
    return check_t2(a2, betas, p0, r1, S.values(), precision).verdict;
}

// ---- dropout obstruction -------------------------------------------------------------------

std::set<LocalClass> all_but_unit_squares(long p, int v_cap) {
    std::set<LocalClass> s;
    for (int v = 0; v <= v_cap; ++v)
        for (int u : padic::unit_classes(p))
            if (v != 0 || u != 1) s.insert(LocalClass{p, v, u});
    return s;
}

ObstructionReport verify_dropout(const escalate::DropoutFamily& family, const std::vector<i64>& instance,
                                 const DropoutSpec& spec, const PoolSpec& pool) {
    if (instance.size() < 10) throw std::invalid_argument("instance needs at least ten coefficients");
    std::vector<i64> head(instance.begin(), instance.begin() + std::min<std::size_t>(instance.size(), escalate::kMaxDepth));
    auto match = escalate::match_dropout(head);
    if (!match || match->family->id != family.id) throw std::invalid_argument("instance does not match " + family.id);
    ObstructionReport r;
    r.family = family.id;
    r.instance = instance;
    r.p0 = family.obstruction_prime;
    std::vector<i64> a2(instance.begin(), instance.begin() + 10);
    r.search = beta_search(a2, pool);
    r.classes_match = !spec.betas.empty();
    for (auto& b : spec.betas) {
        lattice::DiagonalSpace sp{a2};
        if (sp.B(sp.alpha(), zvector(b)) != 1) continue;
        auto L = lattice::complement(a2, b);
        auto rep = padic::represented_classes(L.gram, r.p0, spec.v_cap);
        r.classes_match = r.classes_match && rep.classes == spec.expected;
        r.sampled_classes.emplace_back(b, rep.classes);
    }
    r.t2_ok = !spec.r1_samples.empty();
    for (i64 r1 : spec.r1_samples) {
        auto S = s_set(instance, spec.m, r1, spec.s, false);
        bool ok = check_t2(a2, spec.betas, r.p0, r1, S);
        r.t2.emplace_back(r1, ok);
        r.t2_ok = r.t2_ok && ok;
    }
    return r;
}

}  // namespace polyuniv::coverage

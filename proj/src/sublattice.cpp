#include <algorithm>
#include <numeric>
#include <sstream>

#include "polyuniv/lattice.hpp"
#include "polyuniv/padic.hpp"

namespace polyuniv::lattice {

NdDiagonal lemma_nd_diagonal(const std::vector<i64>& a2, const std::vector<i64>& beta, long p) {
    if (!padic::is_prime(p) || p == 2) throw std::invalid_argument("lemma nd needs an odd prime");
    DiagonalSpace s{a2};
    ZVector al = s.alpha(), b = zvector(beta);
    if (s.B(al, b) != 1) throw PreconditionError(PreconditionError::Pairing, "B(alpha, beta) must be 1");
    Z D = s.Q(al) * s.Q(b) - 1;
    if (D == 0 || vp(D, p) != 0)
        throw PreconditionError(PreconditionError::NotUnimodular, "Z_p alpha + Z_p beta is not unimodular");
    NdDiagonal r;
    r.p = p;
    for (std::size_t i = 0; i < a2.size() && r.order.size() < 3; ++i)
        if (a2[i] % p != 0) r.order.push_back(i);
    if (r.order.size() < 3) throw PreconditionError(PreconditionError::FewUnits, "fewer than three p-adic units");
    Z num = 1;
    for (auto i : r.order) num *= static_cast<long>(a2[i]);
    Q first(num, D);
    first.canonicalize();
    r.entries.push_back(first);
    for (std::size_t i = 0; i < a2.size(); ++i)
        if (std::find(r.order.begin(), r.order.end(), i) == r.order.end()) {
            r.order.push_back(i);
            r.entries.emplace_back(static_cast<long>(a2[i]));
        }
    Z pz = p, inv;
    Z den = first.get_den(), nm = first.get_num();
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
    Z rep;
    mpz_fdiv_r(rep.get_mpz_t(), Z(nm * inv).get_mpz_t(), pz.get_mpz_t());
    r.first_unit_rep = rep;
    return r;
}

NdCheck verify_lemma_nd(const std::vector<i64>& a2, const std::vector<i64>& beta, long p) {
    NdDiagonal d = lemma_nd_diagonal(a2, beta, p);
    GramLattice L = complement(a2, beta);
    NdCheck c;
    c.rank_ok = L.rank() == static_cast<int>(d.entries.size());
    Q prod = 1;
    for (auto& e : d.entries) prod *= e;
    Z dt = det(L.gram);
    c.det_ok = dt != 0 && padic::local_class(Q(dt), p) == padic::local_class(prod, p);
    if (dt != 0) c.hasse_ok = padic::hasse_invariant(padic::rational_diagonal(L.gram), p) == padic::hasse_invariant(d.entries, p);
    return c;
}

const char* to_string(Odd3Class c) {
    switch (c) {
        case Odd3Class::H: return "H";
        case Odd3Class::A: return "A";
        case Odd3Class::Other: return "other";
    }
    return "?";
}

namespace {

void check_members(const std::vector<i64>& a, const ZMatrix& vs, const std::vector<i64>* beta) {
    DiagonalSpace s{a};
    for (auto& v : vs) {
        if (s.B(s.alpha(), v) != 0) throw InvariantError("constructed vector not orthogonal to alpha");
        if (beta && s.B(zvector(*beta), v) != 0) throw InvariantError("constructed vector not orthogonal to beta");
    }
}

void check_index(const std::vector<i64>& a, std::size_t j) {
    if (j >= a.size()) throw std::invalid_argument("index out of range");
}

}  // namespace

Odd3Result sublattice_odd3(const std::vector<i64>& a, std::size_t j1, std::size_t j2, std::size_t j3,
                           std::optional<std::size_t> j4, const std::vector<i64>* beta) {
    for (auto j : {j1, j2, j3}) {
        check_index(a, j);
        if (a[j] % 2 == 0) throw std::invalid_argument("odd3 needs odd coefficients");
    }
    if (j1 == j2 || j2 == j3 || j1 == j3) throw std::invalid_argument("odd3 indices must be distinct");
    if (beta && ((*beta)[j1] != (*beta)[j2] || (*beta)[j2] != (*beta)[j3]))
        throw std::invalid_argument("odd3 needs equal beta entries");
    std::size_t n = a.size();
    auto A = [&](std::size_t j) { return Z(static_cast<long>(a[j])); };
    ZVector v1(n, 0), v2(n, 0);
    v1[j1] = A(j2);
    v1[j2] = -A(j1);
    if (j4) {
        check_index(a, *j4);
        if (a[*j4] % 4 != 2) throw std::invalid_argument("odd3 case (3) needs a_j4 = 2 mod 4");
        if (beta && (*beta)[*j4] != (*beta)[j1]) throw std::invalid_argument("odd3 needs equal beta entries");
        v2[j2] = A(j3) + A(*j4);
        v2[j3] = -A(j2);
        v2[*j4] = -A(j2);
    } else {
        v2[j2] = A(j3);
        v2[j3] = -A(j2);
    }
    Odd3Result r;
    r.lattice.ambient = a;
    r.lattice.basis = {v1, v2};
    ZVector d;
    for (auto x : a) d.emplace_back(static_cast<long>(x));
    r.lattice.gram = gram_of(r.lattice.basis, d);
    check_members(a, r.lattice.basis, beta);
    auto sp = padic::split(r.lattice.gram, 2);
    if (sp.blocks.size() == 1 && sp.blocks[0].scale == 0)
        r.cls = sp.blocks[0].hyperbolic ? Odd3Class::H : Odd3Class::A;
    r.even_universal = padic::is_even_universal_2(r.lattice.gram);
    return r;
}

DiagonalSublattice sublattice_odd2(const std::vector<i64>& a, const std::vector<std::size_t>& js) {
    std::vector<std::size_t> u = js;
    std::sort(u.begin(), u.end());
    if (std::adjacent_find(u.begin(), u.end()) != u.end()) throw std::invalid_argument("odd2 indices must be distinct");
    for (auto j : js) check_index(a, j);
    std::size_t n = a.size();
    DiagonalSpace s{a};
    DiagonalSublattice r;
    Z partial = static_cast<long>(a[js[0]]);
    for (std::size_t h = 1; h < js.size(); ++h) {
        Z next = static_cast<long>(a[js[h]]);
        ZVector v(n, 0);
        for (std::size_t k = 0; k < h; ++k) v[js[k]] = next;
        v[js[h]] = -partial;
        Z b = next * partial * (partial + next);
        if (s.Q(v) != b) throw InvariantError("odd2 vector norm mismatch");
        r.vectors.push_back(v);
        r.b.push_back(b);
        partial += next;
    }
    for (std::size_t i = 0; i < r.vectors.size(); ++i)
        for (std::size_t j = i + 1; j < r.vectors.size(); ++j)
            if (s.B(r.vectors[i], r.vectors[j]) != 0) throw InvariantError("odd2 vectors not orthogonal");
    check_members(a, r.vectors, nullptr);
    return r;
}

DiagonalSublattice sublattice_12(const std::vector<i64>& a, const std::vector<std::size_t>& js) {
    if (a.size() < 3 || a[0] != 1 || a[1] != 2) throw std::invalid_argument("lemma 12 needs (a1, a2) = (1, 2)");
    for (auto j : js)
        if (j < 2) throw std::invalid_argument("lemma 12 indices must avoid the first two positions");
    if (js.empty()) throw std::invalid_argument("lemma 12 needs at least one index");
    std::vector<i64> beta(a.size(), 0);
    beta[0] = -1;
    beta[1] = 1;
    DiagonalSpace s{a};
    Z sum = 0;
    for (auto j : js) {
        check_index(a, j);
        sum += static_cast<long>(a[j]);
    }
    Z g;
    Z four = 4;
    mpz_gcd(g.get_mpz_t(), four.get_mpz_t(), sum.get_mpz_t());
    ZVector v0(a.size(), 0);
    v0[0] = 2 * sum / g;
    v0[1] = sum / g;
    for (auto j : js) v0[j] = -4 / g;
    Z b0 = (2 * sum / g) * (2 * sum / g) + 2 * (sum / g) * (sum / g) + sum * (4 / g) * (4 / g);
    if (s.Q(v0) != b0) throw InvariantError("lemma 12 vector norm mismatch");
    DiagonalSublattice r;
    r.b.push_back(b0);
    r.vectors.push_back(v0);
    if (js.size() > 1) {
        auto rest = sublattice_odd2(a, js);
        for (std::size_t i = 0; i < rest.b.size(); ++i) {
            r.b.push_back(rest.b[i]);
            r.vectors.push_back(rest.vectors[i]);
        }
    }
    for (std::size_t i = 0; i < r.vectors.size(); ++i)
        for (std::size_t j = i + 1; j < r.vectors.size(); ++j)
            if (s.B(r.vectors[i], r.vectors[j]) != 0) throw InvariantError("lemma 12 vectors not orthogonal");
    check_members(a, r.vectors, &beta);
    return r;
}

const std::vector<std::vector<int>>& delta2_patterns() {
    static const std::vector<std::vector<int>> d = {{1, 1, 1, 1}, {1, 1, 1, 2}, {1, 1, 1, 3}, {1, 1, 2, 2}, {1, 1, 2, 3},
                                                    {1, 1, 2, 4}, {1, 2, 2, 3}, {1, 2, 3, 3}, {1, 2, 3, 4}};
    return d;
}

bool pattern_2equ(std::vector<int> orders) {
    if (orders.size() != 4) throw std::invalid_argument("pattern needs four orders");
    std::sort(orders.begin(), orders.end());
    const auto& d = delta2_patterns();
    return std::find(d.begin(), d.end(), orders) != d.end();
}

std::string lattice_report(const GramLattice& L) {
    std::ostringstream o;
    Z dt = det(L.gram);
    o << "rank " << L.rank() << "\n";
    o << "det " << dt.get_str() << "\n";
    if (dt == 0) return o.str();
    auto diag = padic::rational_diagonal(L.gram);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        auto c = padic::local_class(dt, p);
        o << "p=" << p << " det_class " << padic::to_string(c) << " hasse " << padic::hasse_invariant(diag, p) << "\n";
    }
    return o.str();
}

}  // namespace polyuniv::lattice

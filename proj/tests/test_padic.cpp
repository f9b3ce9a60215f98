#include <random>

#include "doctest.h"
#include "polyuniv/padic.hpp"

using namespace polyuniv;
using namespace polyuniv::padic;

namespace {

ZMatrix G(const std::vector<std::vector<i64>>& m) { return zmatrix(m); }
ZMatrix D(const std::vector<i64>& d) { return diagonal_gram(zvector(d)); }

std::set<LocalClass> classes_where(long p, int v_cap, const std::function<bool(int, int)>& keep) {
    std::set<LocalClass> s;
    for (int v = 0; v <= v_cap; ++v)
        for (int u : unit_classes(p))
            if (keep(v, u)) s.insert({p, v, u});
    return s;
}

// n/a a square in Z_p, decided without the library
bool square_ratio(i64 n, i64 a, long p) {
    int vn = 0, va = 0;
    while (n % p == 0) n /= p, ++vn;
    while (a % p == 0) a /= p, ++va;
    if (vn < va || (vn - va) % 2) return false;
    if (p == 2) {
        i64 r = ((n % 8) + 8) % 8, s = ((a % 8) + 8) % 8;
        return (r * s) % 8 == 1;  // n/a = 1 mod 8 iff n*a = 1 mod 8 for odd n, a
    }
    i64 q = ((n % p) + p) % p * (((a % p) + p) % p) % p;  // same square class as n/a
    i64 e = 1, b = q;
    for (long k = (p - 1) / 2; k; k >>= 1, b = b * b % p)
        if (k & 1) e = e * b % p;
    return e == 1;
}

}  // namespace

TEST_CASE("local classes") {
    CHECK(local_class(Z(18), 3) == LocalClass{3, 2, -1});
    CHECK(local_class(Z(12), 2) == LocalClass{2, 2, 3});
    CHECK(local_class(Z(-1), 7) == LocalClass{7, 0, -1});
    CHECK_THROWS(local_class(Z(0), 5));
}

TEST_CASE("local representation examples") {
    CHECK(local_represents(D({1, 1, 1, 1}), Z(7), 2).verdict == Verdict::Represented);
    CHECK(local_represents(D({1, 1}), Z(3), 2).verdict == Verdict::NotRepresented);
    for (long p : {3, 5, 7, 11, 13})
        for (long u = 1; u < p; ++u) CHECK(local_represents_diag(zvector({1}), Z(p * u), p).verdict == Verdict::NotRepresented);
}

TEST_CASE("represented class sets") {
    // the A'(7) complement shape
    auto r = represented_classes(D({-1, 7, 7, 7}), 7, 3);
    CHECK(r.classes == classes_where(7, 3, [](int v, int u) { return !(v == 0 && u == 1); }));
    for (long p : {3, 5, 7, 11, 13})
        CHECK(represented_classes(D({1, 1, 1, 1, 1}), p, 2).classes == classes_where(p, 2, [](int, int) { return true; }));
    CHECK(represented_classes(D({1}), 3, 2).classes == std::set<LocalClass>{{3, 0, 1}, {3, 2, 1}});
}

TEST_CASE("even universality at 2") {
    CHECK(is_even_universal_2(G({{0, 1}, {1, 0}})));
    CHECK_FALSE(is_even_universal_2(G({{2, 1}, {1, 2}})));
    CHECK(is_even_universal_2(D({2, 2, 2, 4})));
    CHECK_FALSE(is_even_universal_2(D({4, 4, 4, 4})));
}

TEST_CASE("dyadic Gram matrices that are not diagonal") {
    // A = 2(x^2+xy+y^2): the norm form of the unramified quadratic extension, doubled
    auto a = represented_classes(G({{2, 1}, {1, 2}}), 2, 7);
    CHECK(a.classes == classes_where(2, 7, [](int v, int) { return v % 2 == 1; }));
    auto h = represented_classes(G({{0, 1}, {1, 0}}), 2, 7);
    CHECK(h.classes == classes_where(2, 7, [](int v, int) { return v >= 1; }));
    // H + A is still even universal, A + A is as well (rank 4 even unimodular)
    CHECK(is_even_universal_2(G({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 2}})));
    CHECK(is_even_universal_2(G({{2, 1, 0, 0}, {1, 2, 0, 0}, {0, 0, 2, 1}, {0, 0, 1, 2}})));
    // Gram [[2,1],[1,4]]: det 7, 2x^2+2xy+4y^2 = 2(x^2+xy+2y^2) with x^2+xy+2y^2 isotropic over Z_2
    CHECK(is_even_universal_2(G({{2, 1}, {1, 4}})));
}

TEST_CASE("universality at odd p") {
    CHECK(is_universal_p(D({1, 1, 1, 1}), 3));
    CHECK_FALSE(is_universal_p(D({1, 1}), 3));
    CHECK(represented_classes(D({1, 1}), 3, 3).classes == classes_where(3, 3, [](int v, int) { return v % 2 == 0; }));
    // binary unimodular with nonsquare determinant at 3 is isotropic, hence universal
    CHECK(is_universal_p(D({1, 2}), 3));
    for (long p : {3, 5, 7}) CHECK_FALSE(is_universal_p(D({p, p, p}), p));
}

TEST_CASE("hilbert and hasse symbols") {
    for (long p : {2, 3, 5, 7, 11, 13})
        for (long b : {-7, -1, 2, 3, 5, 6, 10, 13}) CHECK(hilbert_symbol(Q(1), Q(b), p) == 1);
    CHECK(hilbert_symbol(Q(3), Q(3), 3) == -1);
    CHECK(hilbert_symbol(Q(-1), Q(-1), 2) == -1);
    CHECK(hilbert_symbol(Q(2), Q(3), 3) == -1);
    for (long p : {2, 3, 5, 7}) CHECK(hasse_invariant({Q(1), Q(1), Q(1), Q(1)}, p) == 1);
}

TEST_CASE("hilbert reciprocity on random rationals") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-60, 60);
    for (int t = 0; t < 300; ++t) {
        long a = d(rng), b = d(rng);
        if (!a || !b) continue;
        int prod = a < 0 && b < 0 ? -1 : 1;  // the real place
        for (long p = 2; p <= 61; ++p)
            if (is_prime(p)) prod *= hilbert_symbol(Q(a), Q(b), p);
        CHECK(prod == 1);
    }
}

TEST_CASE("rank one agrees with square classes") {
    for (long p : {2, 3, 5, 7, 11, 13})
        for (i64 a : {1, 2, 3, 5, 6, 7}) {
            for (i64 n = -500; n <= 500; ++n) {
                if (n == 0) continue;
                auto c = local_represents_diag(zvector({a}), Z(n), p);
                REQUIRE(c.verdict != Verdict::Inconclusive);
                CHECK((c.verdict == Verdict::Represented) == square_ratio(n, a, p));
            }
        }
}

TEST_CASE("certificates re-verify") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<i64> d(-9, 9);
    for (int t = 0; t < 40; ++t) {
        std::vector<std::vector<i64>> g(3, std::vector<i64>(3));
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) g[i][j] = g[j][i] = d(rng);
        auto gram = zmatrix(g);
        if (det(gram) == 0) continue;
        for (long p : {2, 3, 5}) {
            auto r = represented_classes(gram, p, 4, true);
            CHECK(r.certificates.size() == r.classes.size());
            for (auto& c : r.certificates) {
                CHECK(verify_certificate(gram, c));
                CHECK(c.k >= 2 * c.e + 1);
            }
        }
    }
}

TEST_CASE("global values are locally represented") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<i64> d(1, 12);
    for (int t = 0; t < 25; ++t) {
        std::vector<i64> a{d(rng), d(rng), d(rng)};
        for (long p : {2, 3, 5, 7}) {
            auto r = represented_classes(D(a), p, 4);
            for (i64 x = -6; x <= 6; ++x)
                for (i64 y = -6; y <= 6; ++y)
                    for (i64 z = -6; z <= 6; ++z) {
                        i64 n = a[0] * x * x + a[1] * y * y + a[2] * z * z;
                        if (n == 0) continue;
                        auto c = local_class(Z(n), p);
                        if (c.v <= 4) CHECK(r.classes.count(c));
                    }
        }
    }
}

TEST_CASE("scaling equivariance") {
    std::vector<std::vector<i64>> forms{{1, 2}, {1, 3, 5}, {2, 7, 7}, {1, 1, 3, 9}};
    for (auto& f : forms)
        for (long p : {3, 5, 7})
            for (i64 c : {i64{2}, i64{p}, i64{p} * 2}) {
                std::vector<i64> scaled;
                for (i64 x : f) scaled.push_back(x * c);
                auto base = represented_classes(D(f), p, 6).classes;
                auto got = represented_classes(D(scaled), p, 6).classes;
                auto cc = local_class(Z(c), p);
                std::set<LocalClass> want;
                for (auto& k : base)
                    if (k.v + cc.v <= 6) want.insert({p, k.v + cc.v, k.u * cc.u});
                std::set<LocalClass> got_cut;
                for (auto& k : got)
                    if (k.v >= cc.v) got_cut.insert(k);
                CHECK(got_cut == want);
                CHECK(got_cut.size() == got.size());
            }
}

TEST_CASE("class sets stabilise") {
    std::vector<ZMatrix> corpus{D({1, 2}), D({1, 3, 9}), D({-1, 7, 7, 7}), G({{2, 1}, {1, 2}}), D({3, 5, 15})};
    for (auto& g : corpus)
        for (long p : {2, 3, 5, 7}) {
            auto r = represented_classes(g, p, 2);
            CHECK(r.periodic);
        }
}

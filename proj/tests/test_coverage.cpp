#include <random>

#include "doctest.h"
#include "polyuniv/coverage.hpp"
#include "polyuniv/fixture.hpp"
#include "polyuniv/polyform.hpp"

using namespace polyuniv;
using namespace polyuniv::coverage;

namespace {

std::vector<i64> pad(std::vector<i64> b) { return fixture::pad10(std::move(b)); }

BetaVector bv(const std::vector<i64>& a2, std::vector<i64> b) {
    b = pad(std::move(b));
    return BetaVector{b, fixture::pairing(a2, b)};
}

i128 delta(i64 m, const std::vector<i64>& a, const std::vector<i64>& x) {
    i128 v = 0;
    for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * polyform::polygonal_number(m, x[i]);
    return v;
}

// random vector of the complement: small combination of its basis
std::vector<i64> sample_in(const lattice::GramLattice& L, std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> c(-3, 3);
    std::vector<i64> x(L.ambient.size(), 0);
    for (auto& row : L.basis) {
        i64 k = c(rng);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += k * row[i].get_si();
    }
    return x;
}

const std::vector<i64> kA7{1, 2, 4, 7, 14, 21, 28, 7, 7, 7, 35, 42, 49, 56, 63, 70};
const std::vector<i64> kA7a2(kA7.begin(), kA7.begin() + 10);

}  // namespace

TEST_CASE("coverage polynomial and the delta identity") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<i64> coef(1, 30), mdist(3, 120), rdist(-25, 25);
    for (int t = 0; t < 300; ++t) {
        std::vector<i64> a2{1};
        for (int i = 1; i < 10; ++i) a2.push_back(coef(rng));
        i64 c = i64{1} << (t % 3);  // pairing 1, 2, 4
        std::vector<i64> b(10, 0);
        b[1] = 1;
        b[0] = c - a2[1];
        auto beta = BetaVector{b, c};
        auto L = lattice::complement(a2, b);
        i64 m = mdist(rng), r = rdist(rng);
        auto x = sample_in(L, rng);
        CoveragePolynomial poly{a2, Z(static_cast<long>(r)), beta};
        lattice::DiagonalSpace sp{a2};
        CHECK(poly.evaluate(zvector(x)) == sp.Q(zvector(x)) + r * r * sp.Q(zvector(b)) - c * r);
        std::vector<i64> y(10);
        for (int i = 0; i < 10; ++i) y[i] = x[i] + r * b[i];
        Z lhs = from_i128(delta(m, a2, y));
        Z rhs = Z(static_cast<long>(m - 2)) * poly.evaluate(zvector(x)) / 2 + c * r;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("locally even universal examples") {
    std::vector<i64> a2{1, 2, 3, 7, 13, 13, 13, 1, 1, 1};
    CHECK(locally_even_universal(a2, bv(a2, {1})).verdict);
    std::vector<i64> a7{1, 2, 4, 7, 7, 7, 7, 7, 7, 7};
    BoxPool pool(a7, 1, 3, 3);
    int n = 0;
    while (auto b = pool.next()) {
        auto r = locally_even_universal(a7, BetaVector{*b, 1});
        CHECK_FALSE(r.verdict);
        REQUIRE_FALSE(r.primes.empty());
        CHECK(r.primes.front().p == 7);
        if (++n == 40) break;
    }
    CHECK(n == 40);
    // H + H + ... at 2: the all-ones complement
    std::vector<i64> ones(10, 1);
    CHECK(locally_even_universal(ones, bv(ones, {1})).verdict);
}

TEST_CASE("beta search") {
    std::vector<i64> ones(10, 1);
    auto r = beta_search(ones);
    REQUIRE(r.beta);
    CHECK(*r.beta == pad({1}));
    std::vector<i64> iii1{1, 2, 3, 7, 7, 7, 7, 7, 7, 7};
    CHECK(locally_even_universal(iii1, bv(iii1, {-1, -1, -1, -1, -1, 3})).verdict);
    auto s = beta_search(iii1);
    REQUIRE(s.beta);
    CHECK(locally_even_universal(iii1, BetaVector{*s.beta, 1}).verdict);
    PoolSpec small;
    small.max_candidates = 300;
    auto none = beta_search(kA7a2, small);
    CHECK_FALSE(none.beta);
    CHECK(none.named_tried > 0);
    CHECK(none.box_tried == 300);
    CHECK_FALSE(none.pool_exhausted);
}

TEST_CASE("box pool order is canonical and filtered") {
    std::vector<i64> a{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    BoxPool pool(a, 1, 2, 2);
    std::vector<std::vector<i64>> seen;
    while (auto b = pool.next()) {
        CHECK(fixture::pairing(a, *b) == 1);
        seen.push_back(*b);
    }
    CHECK(pool.exhausted());
    REQUIRE(!seen.empty());
    auto key = [](const std::vector<i64>& b) {
        int sup = 0;
        i64 mx = 0;
        for (auto v : b) {
            sup += v != 0;
            mx = std::max(mx, std::abs(v));
        }
        return std::make_pair(sup, mx);
    };
    for (std::size_t i = 1; i < seen.size(); ++i) CHECK(key(seen[i - 1]) <= key(seen[i]));
    std::set<std::vector<i64>> uniq(seen.begin(), seen.end());
    CHECK(uniq.size() == seen.size());
}

TEST_CASE("residue coverage") {
    std::vector<i64> ones(10, 1);
    auto r = residue_coverage(10, 2, ones, {pad({1})});
    CHECK(r.complete());
    CHECK(r.targets == 16);
    CHECK(verify_coverage(r));
    auto empty = residue_coverage(10, 2, ones, {});
    CHECK(empty.covered.empty());
    CHECK(empty.targets == 0);
    // pairing 2 only covers even r1; adding e1 fills the rest
    std::vector<i64> x{1, 2, 2, 5, 8, 16, 24, 32, 32, 32};
    auto two = residue_coverage(10, 4, x, {pad({1, 1, 1, 1, -1})});
    CHECK(verify_coverage(two));
    for (auto& [R, w] : two.covered) CHECK(w.r1 % 2 == 0);
    CHECK(two.covered.size() > 0);
}

TEST_CASE("residue coverage witnesses and monotonicity") {
    std::vector<i64> a2{1, 2, 3, 7, 13, 13, 13, 13, 26, 39};
    std::vector<std::vector<i64>> betas{pad({1}), pad({-1, 1}), pad({-2, 0, 1})};
    CoverageOptions one;
    one.max_box = 1;
    CoverageOptions two;
    two.max_box = 2;
    for (i64 m : {12, 30}) {
        std::set<i64> prev;
        for (std::size_t k = 1; k <= betas.size(); ++k) {
            std::vector<std::vector<i64>> use(betas.begin(), betas.begin() + k);
            auto r = residue_coverage(m, 6, a2, use, two);
            CHECK(verify_coverage(r));
            std::set<i64> cur;
            for (auto& [R, w] : r.covered) {
                cur.insert(R);
                std::vector<i64> y;
                for (auto& z : w.y) y.push_back(z.get_si());
                i64 v = static_cast<i64>(delta(m, a2, y));
                CHECK(((v % (6 * (m - 2))) + 6 * (m - 2)) % (6 * (m - 2)) == R);
                CHECK(r.c_bound * (m - 2) >= w.value);
            }
            CHECK(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
            prev = cur;
        }
        auto small = residue_coverage(m, 6, a2, betas, one), big = residue_coverage(m, 6, a2, betas, two);
        CHECK(small.covered.size() <= big.covered.size());
        for (auto& [R, w] : small.covered) CHECK(big.covered.count(R));
    }
    auto serial = two;
    serial.parallel = false;
    auto p = residue_coverage(20, 6, a2, betas, two), s = residue_coverage(20, 6, a2, betas, serial);
    REQUIRE(p.covered.size() == s.covered.size());
    for (auto& [R, w] : p.covered) CHECK(s.covered.at(R).y == w.y);
}

TEST_CASE("S sets") {
    auto one = s_set({1}, 100, 1, 6);
    CHECK(one.values() == std::set<i64>{0});
    std::vector<i64> pre{1, 1, 3, 3, 3, 6, 9, 9, 12, 15, 18, 21, 24, 27, 30, 33};
    i64 reach = 0;
    for (auto a : pre) reach += a * 5;
    CHECK(s_set(pre, 50, reach + 1, 6).members.empty());
    for (i64 r1 = -8; r1 <= 8; ++r1) {
        auto S = s_set(pre, 50, r1, 6);
        for (auto& [t, x] : S.members) {
            CHECK(t >= 0);
            CHECK(t <= 6 + 1);
            i64 b = 0;
            for (std::size_t i = 0; i < pre.size(); ++i) {
                b += pre[i] * x[i];
                CHECK(std::abs(x[i]) < 6);
            }
            CHECK(b == r1);
            CHECK(delta(50, pre, x) == static_cast<i128>(t) * 48 + r1);
        }
        CHECK(S.values() == s_set(pre, 50, r1, 6, false).values());
    }
}

TEST_CASE("S sets for the A'(3) first row") {
    std::vector<i64> pre{1, 1, 3, 3, 3, 6, 9, 9, 12, 15, 18, 21, 24, 27, 30, 33};
    CHECK(s_set(pre, 50, 0, 6).values() == std::set<i64>{0, 1, 3, 4, 6});
    CHECK(s_set(pre, 50, 1, 6).values() == std::set<i64>{0, 2, 3, 5});
    CHECK(s_set(pre, 50, 2, 6).values() == std::set<i64>{0, 1, 3, 4});
    CHECK(s_set(pre, 50, -1, 6).values() == std::set<i64>{1, 3, 4, 6});
    // r1 = 1 mod 3 avoids the unit squares, otherwise twice the unit squares
    for (i64 r1 = -20; r1 <= 20; ++r1) {
        i64 bad = ((r1 % 3) + 3) % 3 == 1 ? 1 : 2;
        for (i64 t : s_set(pre, 50, r1, 6).values()) CHECK(t % 3 != bad);
    }
}

TEST_CASE("S sets avoid one class mod 4 in the last dyadic family") {
    std::vector<i64> pre{1, 2, 2, 3, 8, 8, 16, 16, 24, 24, 32, 32, 40, 40, 48, 48};
    int nonempty = 0;
    for (i64 r1 = -16; r1 <= 16; r1 += 4) {
        i64 bad = (((1 + r1 / 2) % 4) + 4) % 4;
        auto S = s_set(pre, 50, r1, 6);
        nonempty += !S.members.empty();
        for (i64 t : S.values()) CHECK(t % 4 != bad);
    }
    CHECK(nonempty >= 5);
}

TEST_CASE("check_t2 on the A'(7) dropout") {
    std::vector<std::vector<i64>> betas{pad({1}), pad({-1, 1}), pad({-3, 0, 1})};
    for (i64 r1 : {1, 2, 3, -1, 5, 0, 7, 14, -7, 49}) {
        auto S = s_set(kA7, 50, r1, 6, false);
        CHECK(check_t2(kA7a2, betas, 7, r1, S));
    }
    auto S = s_set(kA7, 50, 1, 6, false);
    REQUIRE_FALSE(S.members.empty());
    CHECK_FALSE(check_t2(kA7a2, {}, 7, 1, S));
    auto rep = check_t2(kA7a2, betas, 7, 7, s_set(kA7, 50, 7, 6, false).values());
    CHECK(rep.verdict);
    CHECK(rep.stabilized_from >= 1);
}

TEST_CASE("A'(7) complement classes at 7") {
    auto want = all_but_unit_squares(7, 3);
    CHECK(want.size() == 7);
    for (auto b : {pad({1}), pad({-1, 1}), pad({-3, 0, 1})}) {
        auto L = lattice::complement(kA7a2, b);
        auto r = padic::represented_classes(L.gram, 7, 3);
        CHECK(r.classes == want);
    }
}

TEST_CASE("fixture regression") {
    auto fx = fixture::load(FIXTURE_DIR "/beta_fixtures.json");
    i64 m = fx.at("m"), s = fx.at("s");
    int counted = 0;
    for (auto& e : fx.at("entries")) {
        auto r = fixture::evaluate(e, m, s);
        CAPTURE(r.family);
        CAPTURE(r.detail);
        if (!r.amended) ++counted;
        if (e.contains("gap")) {
            // a gap in the paper's own list, pinned so a change in either direction is noticed
            CHECK_FALSE(r.ok);
            continue;
        }
        CHECK(r.ok);
    }
    CHECK(counted >= 25);
}

#include <random>
#include <set>

#include "doctest.h"
#include "polyuniv/lattice.hpp"
#include "polyuniv/polyform.hpp"

using namespace polyuniv;
using namespace polyuniv::polyform;

namespace {

// independent enumeration: all sums over |x_i| <= r with value <= cap
std::set<i64> brute_values(i64 m, const std::vector<i64>& a, i64 cap, i64 r) {
    std::set<i64> out{0};
    for (i64 c : a) {
        std::set<i64> next;
        for (i64 v : out)
            for (i64 x = -r; x <= r; ++x) {
                i64 w = v + c * ((m - 2) * x * x - (m - 4) * x) / 2;
                if (w <= cap) next.insert(w);
            }
        out = next;
    }
    return out;
}

}  // namespace

TEST_CASE("polygonal numbers") {
    CHECK(polygonal_number(5, 1) == 1);
    CHECK(polygonal_number(7, -1) == 4);
    CHECK(polygonal_number(5, 3) == 12);
    CHECK(polygonal_number(3, 0) == 0);
    CHECK_THROWS_AS(polygonal_number(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(polygonal_number(4'000'000'000'000'000'000, 10'000'000'000), OverflowError);
}

TEST_CASE("eval_form") {
    CHECK(eval_form(MGonalForm::make(3, {1}), std::vector<i64>{2}) == 3);
    CHECK(eval_form(MGonalForm::make(4, {1, 2}), std::vector<i64>{1, 1}) == 3);
    CHECK(eval_form(MGonalForm::make(6, {1, 1}), std::vector<i64>{-1, 2}) == 9);
    CHECK_THROWS(MGonalForm::make(3, {1, 0}));
}

TEST_CASE("is_represented") {
    CHECK_FALSE(is_represented(MGonalForm::make(3, {1}), 2));
    auto w = is_represented(MGonalForm::make(3, {1, 2, 2, 4}), 8);
    REQUIRE(w);
    CHECK(eval_form(MGonalForm::make(3, {1, 2, 2, 4}), w->x) == 8);
    for (i64 m : {3, 5, 9, 40}) {
        auto z = is_represented(MGonalForm::make(m, {2, 3, 7}), 0);
        REQUIRE(z);
        CHECK(z->x == std::vector<i64>{0, 0, 0});
    }
}

TEST_CASE("truant") {
    CHECK(truant(MGonalForm::make(3, {1}), 100).truant == 2);
    CHECK_FALSE(truant(MGonalForm::make(4, {1, 1, 1, 1}), 100).truant);
    CHECK(truant(MGonalForm::make(7, {1}), 100).truant == 2);
}

TEST_CASE("represented_bitmap small cases") {
    auto as_set = [](const Bitmap& b) {
        std::set<i64> s;
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b.test(i)) s.insert(static_cast<i64>(i));
        return s;
    };
    CHECK(as_set(represented_bitmap(MGonalForm::make(3, {1, 1}), 10)) == std::set<i64>{0, 1, 2, 3, 4, 6, 7, 9, 10});
    CHECK(as_set(represented_bitmap(MGonalForm::make(4, {1}), 10)) == std::set<i64>{0, 1, 4, 9});
    CHECK(as_set(represented_bitmap(MGonalForm::make(10, {1}), 8)) == std::set<i64>{0, 1, 7});
}

TEST_CASE("bitmap agrees with is_represented and brute force") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<i64> mdist(3, 12), cdist(1, 9);
    std::uniform_int_distribution<int> ndist(1, 4);
    for (int trial = 0; trial < 60; ++trial) {
        i64 m = mdist(rng);
        std::vector<i64> a(ndist(rng));
        for (auto& c : a) c = cdist(rng);
        auto f = MGonalForm::make(m, a);
        const i64 cap = 120;
        auto bm = represented_bitmap(f, cap);
        CHECK(bm == represented_bitmap_serial(f, cap));
        auto brute = brute_values(m, f.a, cap, 20);
        for (i64 k = 0; k <= cap; ++k) {
            bool r = is_represented(f, k).has_value();
            CHECK(bm.test(k) == r);
            CHECK(brute.count(k) == static_cast<std::size_t>(r));
        }
    }
}

TEST_CASE("identity (b) on random samples") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<i64> mdist(3, 200), cdist(1, 50), xdist(-40, 40);
    std::uniform_int_distribution<int> ndist(1, 10);
    for (int t = 0; t < 2000; ++t) {
        i64 m = mdist(rng);
        std::vector<i64> a(ndist(rng)), x(a.size());
        for (auto& c : a) c = cdist(rng);
        for (auto& v : x) v = xdist(rng);
        lattice::DiagonalSpace sp{a};
        Z q = sp.Q(zvector(x)), b = sp.B(sp.alpha(), zvector(x));
        i128 lhs = 0;
        for (std::size_t i = 0; i < a.size(); ++i) lhs += a[i] * polygonal_number(m, x[i]);
        Z rhs = Z(static_cast<long>(m - 2)) * (q - b) / 2 + b;
        CHECK(from_i128(lhs) == rhs);
    }
}

TEST_CASE("smallest nonzero values") {
    // P_m(-1) = m - 3 sits below m - 2 itself, so the cut is taken at m - 3
    for (i64 m = 5; m <= 200; ++m) {
        std::set<i64> vals;
        for (i64 x = -m; x <= m; ++x)
            if (auto v = static_cast<i64>(polygonal_number(m, x)); v > 0) vals.insert(v);
        std::set<i64> small(vals.begin(), vals.lower_bound(m - 3));
        CHECK(small == std::set<i64>{1});
        CHECK(polygonal_number(m, -1) == m - 3);
        CHECK(*std::next(vals.begin()) == m - 3);
    }
}

TEST_CASE("hexagonal and triangular values coincide") {
    auto t = represented_bitmap(MGonalForm::make(3, {1}), 10000);
    auto h = represented_bitmap(MGonalForm::make(6, {1}), 10000);
    CHECK(t == h);
}

TEST_CASE("add_coefficient parallel matches serial") {
    auto f = MGonalForm::make(8, {1, 1, 2});
    auto base = represented_bitmap(f, 5000);
    Bitmap a(base.size()), b(base.size());
    add_coefficient(a, base, 8, 3);
    add_coefficient_serial(b, base, 8, 3);
    CHECK(a == b);
    CHECK(a == represented_bitmap(MGonalForm::make(8, {1, 1, 2, 3}), 5000));
}

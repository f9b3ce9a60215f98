#include <functional>

#include "doctest.h"
#include "polyuniv/escalate.hpp"
#include "polyuniv/polyform.hpp"

using namespace polyuniv;
using namespace polyuniv::escalate;

namespace {

// plain recursion over the chain rule, independent of the library's enumerator
void oracle(std::vector<i64>& a, i64 sum, int depth, std::vector<u64>& counts) {
    counts[a.size()]++;
    if (static_cast<int>(a.size()) == depth) return;
    for (i64 c = a.back(); c <= sum + 1; ++c) {
        a.push_back(c);
        oracle(a, sum + c, depth, counts);
        a.pop_back();
    }
}

std::vector<u64> oracle_counts(int depth) {
    std::vector<u64> counts(depth + 1, 0);
    std::vector<i64> a{1};
    oracle(a, 1, depth, counts);
    return counts;
}

std::vector<std::vector<i64>> collect(int depth) {
    std::vector<std::vector<i64>> out;
    enumerate_prefixes(depth, std::nullopt, [&](const std::vector<i64>& a) {
        if (static_cast<int>(a.size()) == depth) out.push_back(a);
        return true;
    });
    return out;
}

}  // namespace

TEST_CASE("prefix enumeration small depths") {
    CHECK(collect(2) == std::vector<std::vector<i64>>{{1, 1}, {1, 2}});
    CHECK(collect(3) == std::vector<std::vector<i64>>{{1, 1, 1}, {1, 1, 2}, {1, 1, 3}, {1, 2, 2}, {1, 2, 3}, {1, 2, 4}});
    CHECK_THROWS(enumerate_prefixes(17, std::nullopt, [](const std::vector<i64>&) { return true; }));
}

TEST_CASE("prefix counts match the recursive oracle") {
    auto counts = oracle_counts(8);
    auto scan = scan_prefixes(8);
    for (int k = 1; k <= 8; ++k) CHECK(scan.count_by_depth[k] == counts[k]);
    // frozen regression value
    CHECK(counts[7] == 47097);
    CHECK(scan_prefixes_serial(8).count_by_depth == scan.count_by_depth);
}

TEST_CASE("enumeration is lexicographic and admissible") {
    auto all = collect(6);
    CHECK(std::is_sorted(all.begin(), all.end()));
    for (auto& a : all) CHECK(is_admissible(a));
    CHECK_FALSE(is_admissible({1, 3}));
    CHECK_FALSE(is_admissible({2}));
}

TEST_CASE("early stop") {
    int seen = 0;
    enumerate_prefixes(9, std::nullopt, [&](const std::vector<i64>&) { return ++seen < 10; });
    CHECK(seen == 10);
}

TEST_CASE("remark r0 and minimum length to depth 9") {
    auto scan = scan_prefixes(9);
    CHECK(scan.bound_violations == 0);
    CHECK(scan.sum_violations == 0);
    // the doubling prefix attains the largest sum 2^k - 1, so reaching m - 4 takes ceil(log2(m-3)) terms
    std::vector<i64> dbl;
    for (int k = 0; k < 9; ++k) dbl.push_back(i64{1} << k);
    CHECK(is_admissible(dbl));
    for (i64 m = 5; m <= 1024; ++m) {
        int k = 0;
        while ((i64{1} << k) - 1 < m - 4) ++k;
        int need = 0;
        while ((i64{1} << need) < m - 3) ++need;
        CHECK(k == need);
    }
}

TEST_CASE("prime profiles") {
    auto p = prime_profile({1, 2, 4, 7, 13, 13, 13}, 13);
    CHECK(p.units == 4);
    CHECK(p.primes == 3);
    p = prime_profile({1, 1, 1, 1, 1, 1, 1}, 3);
    CHECK(p.units == 7);
    CHECK(p.primes == 0);
    p = prime_profile({1, 2, 3, 6, 9, 9, 9}, 3);
    CHECK(p.units == 2);
    CHECK(p.primes == 2);
    CHECK_THROWS(prime_profile({1, 2, 3}, 3));
}

TEST_CASE("obstruction primes") {
    CHECK(obstruction_primes({1, 2, 4, 7, 13, 13, 13}).count(13));
    CHECK(obstruction_primes({1, 1, 1, 1, 1, 1, 1}).empty());
    auto s = obstruction_primes({1, 2, 4, 7, 7, 7, 7});
    CHECK(s.count(7));
    CHECK_FALSE(s.count(13));
    const std::set<i64> allowed{3, 5, 7, 11, 13};
    enumerate_prefixes(7, std::nullopt, [&](const std::vector<i64>& a) {
        if (a.size() == 7)
            for (i64 q : obstruction_primes(a)) REQUIRE(allowed.count(q));
        return true;
    });
}

TEST_CASE("dropout matching") {
    auto m = match_dropout({1, 2, 4, 7, 14, 21, 28});
    REQUIRE(m);
    CHECK(m->family->group == "A'(7)");
    m = match_dropout({1, 1, 3, 5, 10, 15, 20});
    REQUIRE(m);
    CHECK(m->family->group == "A'(5)");
    CHECK_FALSE(match_dropout({1, 2, 3, 7, 13, 26, 39}));
    // idempotent and stable
    enumerate_prefixes(7, std::nullopt, [&](const std::vector<i64>& a) {
        if (a.size() < 7) return true;
        auto x = match_dropout(a), y = match_dropout(a);
        REQUIRE(x.has_value() == y.has_value());
        if (x) CHECK(x->family == y->family);
        return true;
    });
    CHECK(dropout_families().size() == 22);
}

TEST_CASE("escalation trees for m = 3, 4, 6") {
    EscalationOptions opt;
    auto r3 = escalation_tree(3, opt);
    CHECK(r3.max_truant == 8);
    CHECK_FALSE(r3.partial);
    CHECK(escalation_tree(4, opt).max_truant == 15);
    CHECK(escalation_tree(6, opt).max_truant == 8);
    opt.parallel = false;
    auto s3 = escalation_tree(3, opt);
    CHECK(s3.nodes.size() == r3.nodes.size());
    CHECK(s3.truants() == r3.truants());
}

TEST_CASE("escalation nodes represent everything below their truant") {
    auto r = escalation_tree(3, {});
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        auto f = polyform::MGonalForm::make(3, r.prefix_of(i));
        i64 t = r.nodes[i].truant;
        i64 top = t ? t - 1 : 200;
        for (i64 k = 1; k <= top; ++k) CHECK(polyform::is_represented(f, k).has_value());
        if (t) CHECK_FALSE(polyform::is_represented(f, t));
        if (r.nodes[i].parent >= 0) {
            i64 pt = r.nodes[r.nodes[i].parent].truant;
            CHECK(r.nodes[i].coeff <= pt);
            for (i64 k = 1; k <= pt; ++k) CHECK(polyform::is_represented(f, k).has_value());
        }
    }
}

TEST_CASE("node budget marks partial results") {
    EscalationOptions opt;
    opt.node_budget = 5;
    auto r = escalation_tree(4, opt);
    CHECK(r.partial);
    CHECK(r.nodes.size() <= 5);
}

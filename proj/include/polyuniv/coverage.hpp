#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polyuniv/checked.hpp"
#include "polyuniv/escalate.hpp"
#include "polyuniv/lattice.hpp"
#include "polyuniv/padic.hpp"

namespace polyuniv::coverage {

using lattice::BetaVector;

// Q_a(x) + r^2 Q_a(beta) - c r with c = B_a(alpha, beta). For c = 1 this is the shifted form used
// with Delta(x + r beta) = (m-2)/2 * value + c r, for x in L_{a,beta}.
struct CoveragePolynomial {
    std::vector<i64> a2;
    Z r;
    BetaVector beta;

    Z evaluate(const ZVector& x) const;
    // variant with Q(beta) squared, kept only to show the discrepancy in reports
    Z evaluate_squared_variant(const ZVector& x) const;
};

// ---- local even universality ------------------------------------------------------

struct PrimeCheck {
    long p = 0;
    bool ok = false;
    bool inconclusive = false;
    std::vector<padic::LocalClass> missing;
};

struct LocalReport {
    bool verdict = false;
    std::vector<PrimeCheck> primes;  // failing primes first, then ascending
};

// Primes where L_{a2,beta} can fail to be universal: 2 and the divisors of the a_i, plus 3, 5, 7, 11, 13.
std::vector<long> relevant_primes(const std::vector<i64>& a2, const std::vector<i64>& beta);

// B(alpha, beta) must be a power of two (1 for the plain criterion). skip_p: prime left out (0: none).
LocalReport locally_even_universal(const std::vector<i64>& a2, const BetaVector& beta, long skip_p = 0,
                                   int precision = 64);
// stops at the first failing prime
LocalReport locally_even_universal_fast(const std::vector<i64>& a2, const BetaVector& beta, int precision = 64);

// ---- beta pool -------------------------------------------------------------------------

struct PoolSpec {
    i64 pairing = 1;
    int box = 7;
    int max_support = 6;
    u64 max_candidates = 20000;  // box candidates tried after the named list
    bool named = true;
};

// Named vectors from the case analyses, as 10-vectors (zero padded).
const std::vector<std::vector<i64>>& named_betas();

// Box candidates with B(alpha, beta) = pairing in canonical order:
// (support size, max |entry|, support positions lexicographic, entries lexicographic).
class BoxPool {
public:
    BoxPool(std::vector<i64> a2, i64 pairing, int box, int max_support);
    std::optional<std::vector<i64>> next();
    u64 emitted() const { return emitted_; }
    bool exhausted() const { return done_; }

private:
    bool advance_entries();
    bool advance_support();
    bool advance_level();
    bool current_ok(std::vector<i64>& out) const;

    std::vector<i64> a_;
    i64 pairing_;
    int box_, max_support_;
    int k_ = 1, M_ = 1;
    std::vector<std::size_t> support_;
    std::vector<i64> entries_;  // first k-1 entries, each in [-M, M] \ {0}
    bool started_ = false, done_ = false;
    u64 emitted_ = 0;
};

struct BetaSearchResult {
    std::optional<std::vector<i64>> beta;
    std::string source;  // "named" or "box"
    LocalReport report;
    u64 named_tried = 0;
    u64 box_tried = 0;
    bool pool_exhausted = false;  // false: stopped at max_candidates
};

BetaSearchResult beta_search(const std::vector<i64>& a2, const PoolSpec& spec = {});

// ---- S sets -------------------------------------------------------------------------------

struct SSet {
    std::vector<i64> a_prefix;
    i64 m = 0;
    i64 r1 = 0;
    i64 s = 0;
    std::map<i64, std::vector<i64>> members;  // t' -> witness x (empty when witnesses were not requested)

    std::set<i64> values() const;
};

// t' with t'(m-2) + r1 = sum a_i P_m(x_i) <= s(m-2), |x_i| < s and sum a_i x_i = r1.
SSet s_set(const std::vector<i64>& a_prefix, i64 m, i64 r1, i64 s, bool witnesses = true);

// ---- condition (t2) -------------------------------------------------------------------------

// One shifted value set {Q_{a2,r',beta}(x) : x in L_{a2,beta} (x) Z_p0}.
struct ShiftedSet {
    std::vector<i64> beta;
    i64 pairing = 1;
    Z r;      // r' = r1 / pairing
    Z shift;  // r'^2 Q(beta) - pairing * r'
    padic::ClassReport classes;

    bool contains(const Z& z) const;
    // every element of z0 + p^k Z_p
    bool covers_coset(const Z& z0, int k) const;
};

std::vector<ShiftedSet> shifted_sets(const std::vector<i64>& a2, const std::vector<std::vector<i64>>& betas,
                                     long p0, i64 r1);

// Union of the shifted sets covers z0 + p^k Z_p, splitting into p subcosets up to depth extra levels.
bool union_covers(const std::vector<ShiftedSet>& sets, long p0, const Z& z0, int k, int depth);

struct T2Report {
    bool verdict = false;
    int precision = 0;
    std::vector<bool> by_precision;  // index k-1: verdict with target cosets 2t' + p0^k Z_p0
    int stabilized_from = 0;
    std::vector<i64> uncovered;      // t' whose coset fails at the requested precision
};

// Betas whose pairing does not divide r1 are skipped.
T2Report check_t2(const std::vector<i64>& a2, const std::vector<std::vector<i64>>& betas, long p0, i64 r1,
                  const std::set<i64>& s_members, int precision = 8);
bool check_t2(const std::vector<i64>& a2, const std::vector<std::vector<i64>>& betas, long p0, i64 r1,
              const SSet& S, int precision = 8);

// ---- residue coverage -------------------------------------------------------------------------

struct ResidueWitness {
    i64 t = 0;
    i64 r1 = 0;
    std::size_t beta_index = 0;
    ZVector y;   // ambient vector x + r' beta
    Z value;     // Delta_{m,a2}(y)
};

struct CoverageReport {
    i64 m = 0, s = 0;
    std::vector<i64> a2;
    std::vector<std::vector<i64>> betas;
    std::map<i64, ResidueWitness> covered;  // residue in [0, s(m-2)) -> witness
    i64 targets = 0;
    int box_used = 0;
    Z c_bound = 0;  // ceil(max witness value / (m-2))
    bool complete() const { return static_cast<i64>(covered.size()) == targets; }
};

struct CoverageOptions {
    int max_box = 2;           // coefficient box over the complement basis, grown from 1
    i64 value_cap_multiplier = 0;  // 0: no cap; else witnesses need Delta <= cap * (m-2)
    bool parallel = true;
};

CoverageReport residue_coverage(i64 m, i64 s, const std::vector<i64>& a2,
                                const std::vector<std::vector<i64>>& betas, const CoverageOptions& opt = {});

// Re-evaluates every witness; false on any mismatch.
bool verify_coverage(const CoverageReport& r);

// ---- dropout obstruction ---------------------------------------------------------------------

struct ObstructionReport {
    std::string family;
    std::vector<i64> instance;
    long p0 = 0;
    BetaSearchResult search;
    std::vector<std::pair<std::vector<i64>, std::set<padic::LocalClass>>> sampled_classes;
    bool classes_match = false;
    std::vector<std::pair<i64, bool>> t2;  // r1 -> check_t2
    bool t2_ok = false;
    bool confirmed() const { return !search.beta && classes_match && t2_ok; }
};

struct DropoutSpec {
    std::vector<std::vector<i64>> betas;         // prescribed list for (t2)
    std::set<padic::LocalClass> expected;        // stated class set at p0, v <= v_cap
    int v_cap = 3;
    i64 m = 50, s = 6;
    std::vector<i64> r1_samples;
};

ObstructionReport verify_dropout(const escalate::DropoutFamily& family, const std::vector<i64>& instance,
                                 const DropoutSpec& spec, const PoolSpec& pool = {});

// All classes except the unit squares, v <= v_cap.
std::set<padic::LocalClass> all_but_unit_squares(long p, int v_cap);

}  // namespace polyuniv::coverage

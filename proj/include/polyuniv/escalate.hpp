#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polyuniv/checked.hpp"

namespace polyuniv::escalate {

constexpr int kMaxDepth = 16;

struct Prefix {
    std::vector<i64> a;
    i64 sum = 0;

    static Prefix make(std::vector<i64> a);  // validates the chain rule for every i
    std::size_t size() const { return a.size(); }
};

// a_1 = 1, nondecreasing, a_{i+1} <= a_1+...+a_i+1 while the partial sum is below threshold
// (no threshold: rule applied at every step).
bool is_admissible(const std::vector<i64>& a, std::optional<i64> threshold = std::nullopt);

// Lexicographic stream; return false from the callback to stop early.
void enumerate_prefixes(int depth, std::optional<i64> threshold,
                        const std::function<bool(const std::vector<i64>&)>& emit);

struct PrefixScan {
    std::vector<u64> count_by_depth;  // index k: prefixes of length k
    u64 bound_violations = 0;         // prefixes with some a_k > 2^(k-1)
    u64 sum_violations = 0;           // prefixes of length k with sum > 2^k - 1
};

// Counts all admissible prefixes of length 1..depth (unconditional chain rule).
PrefixScan scan_prefixes(int depth);
PrefixScan scan_prefixes_serial(int depth);

// ---- escalation -----------------------------------------------------------

enum class NodeStatus { Escalator, Certified, DepthLimit, Unexpanded };
const char* to_string(NodeStatus s);

struct EscalationNode {
    std::int64_t parent = -1;
    i64 coeff = 0;
    i64 truant = 0;  // 0: none found up to certify_bound
    int depth = 0;
    NodeStatus status = NodeStatus::Unexpanded;
};

struct EscalationOptions {
    i64 certify_bound = 100000;
    u64 node_budget = 5000000;
    int max_depth = 32;
    bool parallel = true;
    std::vector<std::vector<i64>> roots;  // default: {(1)}; used to resume a partial run
};

struct EscalationResult {
    i64 m = 0;
    std::vector<EscalationNode> nodes;
    std::vector<std::vector<i64>> root_prefixes;
    i64 max_truant = 0;
    bool partial = false;  // node budget exhausted
    u64 certified = 0;
    u64 depth_limited = 0;

    std::vector<i64> prefix_of(std::size_t node) const;
    std::vector<i64> truants() const;  // sorted distinct truants
};

// Smallest k in 1..cap missed, 0 if none. Grows the enumeration window geometrically.
i64 find_truant(i64 m, const std::vector<i64>& a, i64 cap);

EscalationResult escalation_tree(i64 m, const EscalationOptions& opt);

// ---- classification ---------------------------------------------------------

struct PrimeProfile {
    i64 p = 0;
    int units = 0;
    int primes = 0;
};

int valuation(i64 n, i64 p);
PrimeProfile prime_profile(const std::vector<i64>& prefix, i64 p);
std::set<i64> obstruction_primes(const std::vector<i64>& prefix);

struct DropoutFamily {
    std::string id;        // e.g. "A'(5).6"
    std::string group;     // A'(7), A'(5), A'(3), A'(2)
    std::string pattern;   // human-readable template
    i64 obstruction_prime; // p_0 of the multi-vector treatment; 2 for the dyadic rows
};

struct DropoutMatch {
    const DropoutFamily* family = nullptr;
    std::vector<std::string> obligations;  // tail constraints not decidable from the prefix
};

const std::vector<DropoutFamily>& dropout_families();
std::optional<DropoutMatch> match_dropout(const std::vector<i64>& prefix);

}  // namespace polyuniv::escalate

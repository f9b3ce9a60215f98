#include "polyuniv/escalate.hpp"

#include <algorithm>
#include <stdexcept>

#include "polyuniv/polyform.hpp"

namespace polyuniv::escalate {

bool is_admissible(const std::vector<i64>& a, std::optional<i64> threshold) {
    if (a.empty() || a[0] != 1) return false;
    i64 sum = 1;
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (a[i] < a[i - 1]) return false;
        bool rule = !threshold || sum < *threshold;
        if (rule && a[i] > sum + 1) return false;
        sum += a[i];
    }
    return true;
}

Prefix Prefix::make(std::vector<i64> a) {
    if (a.size() > static_cast<std::size_t>(kMaxDepth)) throw std::invalid_argument("prefix longer than 16");
    if (!is_admissible(a)) throw std::invalid_argument("not an admissible coefficient prefix");
    Prefix p;
    for (auto v : a) p.sum += v;
    p.a = std::move(a);
    return p;
}

namespace {

// Depth-first walk in lexicographic order over the unconditional or thresholded chain rule.
struct Walker {
    int depth;
    std::optional<i64> threshold;
    const std::function<bool(const std::vector<i64>&)>& emit;
    std::vector<i64> a;

    bool rec(i64 sum) {
        if (static_cast<int>(a.size()) == depth) return emit(a);
        i64 lo = a.back();
        bool rule = !threshold || sum < *threshold;
        // past the threshold larger entries cannot matter below it; cap them there
        i64 hi = rule ? sum + 1 : std::max<i64>(lo, *threshold);
        for (i64 c = lo; c <= hi; ++c) {
            a.push_back(c);
            bool go = rec(sum + c);
            a.pop_back();
            if (!go) return false;
        }
        return true;
    }
};

void scan_rec(std::vector<i64>& a, i64 sum, int depth, PrefixScan& s) {
    int k = static_cast<int>(a.size());
    s.count_by_depth[k]++;
    if (a.back() > (i64(1) << (k - 1))) s.bound_violations++;
    if (sum > (i64(1) << k) - 1) s.sum_violations++;
    if (k == depth) return;
    for (i64 c = a.back(); c <= sum + 1; ++c) {
        a.push_back(c);
        scan_rec(a, sum + c, depth, s);
        a.pop_back();
    }
}

void merge(PrefixScan& into, const PrefixScan& from) {
    for (std::size_t i = 0; i < into.count_by_depth.size(); ++i) into.count_by_depth[i] += from.count_by_depth[i];
    into.bound_violations += from.bound_violations;
    into.sum_violations += from.sum_violations;
}

}  // namespace

void enumerate_prefixes(int depth, std::optional<i64> threshold,
                        const std::function<bool(const std::vector<i64>&)>& emit) {
    if (depth < 1 || depth > kMaxDepth) throw std::invalid_argument("depth must be in 1..16");
    Walker w{depth, threshold, emit, {1}};
    w.rec(1);
}

PrefixScan scan_prefixes_serial(int depth) {
    if (depth < 1 || depth > kMaxDepth) throw std::invalid_argument("depth must be in 1..16");
    PrefixScan s;
    s.count_by_depth.assign(depth + 1, 0);
    std::vector<i64> a{1};
    scan_rec(a, 1, depth, s);
    return s;
}

PrefixScan scan_prefixes(int depth) {
    if (depth < 1 || depth > kMaxDepth) throw std::invalid_argument("depth must be in 1..16");
    int split = std::min(depth, 5);
    // frontier prefixes of length `split`, shallower levels counted serially
    PrefixScan total;
    total.count_by_depth.assign(depth + 1, 0);
    std::vector<std::vector<i64>> frontier;
    {
        PrefixScan head = scan_prefixes_serial(split);
        for (int k = 0; k < split; ++k) total.count_by_depth[k] = head.count_by_depth[k];
        total.bound_violations = head.bound_violations;
        total.sum_violations = head.sum_violations;
        enumerate_prefixes(split, std::nullopt, [&](const std::vector<i64>& a) {
            frontier.push_back(a);
            return true;
        });
        // depth-`split` nodes are recounted below; remove their contribution to violations
        for (auto& a : frontier) {
            i64 sum = 0;
            for (auto v : a) sum += v;
            if (a.back() > (i64(1) << (split - 1))) total.bound_violations--;
            if (sum > (i64(1) << split) - 1) total.sum_violations--;
        }
    }
    long long n = static_cast<long long>(frontier.size());
#pragma omp parallel
    {
        PrefixScan local;
        local.count_by_depth.assign(depth + 1, 0);
#pragma omp for schedule(dynamic, 1)
        for (long long i = 0; i < n; ++i) {
            std::vector<i64> a = frontier[i];
            i64 sum = 0;
            for (auto v : a) sum += v;
            scan_rec(a, sum, depth, local);
        }
#pragma omp critical
        merge(total, local);
    }
    return total;
}

// ---- escalation -------------------------------------------------------------

const char* to_string(NodeStatus s) {
    switch (s) {
        case NodeStatus::Escalator: return "escalator";
        case NodeStatus::Certified: return "certified";
        case NodeStatus::DepthLimit: return "depth_limit";
        case NodeStatus::Unexpanded: return "unexpanded";
    }
    return "?";
}

i64 find_truant(i64 m, const std::vector<i64>& a, i64 cap) {
    polyform::validate_cap(m, cap);
    std::vector<i64> desc(a.rbegin(), a.rend());
    std::sort(desc.begin(), desc.end(), std::greater<>());
    i64 window = std::min<i64>(cap, 512);
    while (true) {
        Bitmap cur(static_cast<std::size_t>(window) + 1), next(static_cast<std::size_t>(window) + 1);
        cur.set(0);
        for (i64 c : desc) {
            polyform::add_coefficient_serial(next, cur, m, c);
            std::swap(cur, next);
        }
        std::size_t z = cur.first_zero(1);
        if (z < cur.size()) return static_cast<i64>(z);
        if (window == cap) return 0;
        window = std::min<i64>(cap, window * 8);
    }
}

std::vector<i64> EscalationResult::prefix_of(std::size_t node) const {
    std::vector<i64> rev;
    std::int64_t i = static_cast<std::int64_t>(node);
    while (nodes[i].parent >= 0) {
        rev.push_back(nodes[i].coeff);
        i = nodes[i].parent;
    }
    // i is a root; its coeff field indexes root_prefixes
    std::vector<i64> a = root_prefixes[static_cast<std::size_t>(nodes[i].coeff)];
    a.insert(a.end(), rev.rbegin(), rev.rend());
    return a;
}

std::vector<i64> EscalationResult::truants() const {
    std::vector<i64> t;
    for (auto& n : nodes)
        if (n.status != NodeStatus::Unexpanded && n.truant > 0) t.push_back(n.truant);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

EscalationResult escalation_tree(i64 m, const EscalationOptions& opt) {
    if (m < 3) throw std::invalid_argument("order m must be >= 3");
    if (opt.certify_bound < 1) throw std::invalid_argument("certify bound must be >= 1");
    EscalationResult res;
    res.m = m;
    res.root_prefixes = opt.roots.empty() ? std::vector<std::vector<i64>>{{1}} : opt.roots;
    for (std::size_t r = 0; r < res.root_prefixes.size(); ++r) {
        auto& rp = res.root_prefixes[r];
        if (rp.empty()) throw std::invalid_argument("empty root prefix");
        if (!std::is_sorted(rp.begin(), rp.end()) || rp.front() < 1)
            throw std::invalid_argument("root prefix must be positive and nondecreasing");
        EscalationNode n;
        n.coeff = static_cast<i64>(r);
        n.depth = static_cast<int>(rp.size());
        res.nodes.push_back(n);
    }
    if (res.nodes.size() > opt.node_budget) {
        res.nodes.resize(opt.node_budget);
        res.partial = true;
    }

    std::size_t level_begin = 0;
    while (level_begin < res.nodes.size()) {
        std::size_t level_end = res.nodes.size();
        long long cnt = static_cast<long long>(level_end - level_begin);
        std::vector<i64> tr(cnt, 0);
        auto eval = [&](long long i) { tr[i] = find_truant(m, res.prefix_of(level_begin + i), opt.certify_bound); };
        if (opt.parallel) {
#pragma omp parallel for schedule(dynamic, 4)
            for (long long i = 0; i < cnt; ++i) eval(i);
        } else {
            for (long long i = 0; i < cnt; ++i) eval(i);
        }
        // children in canonical order; budget truncation is deterministic
        for (long long i = 0; i < cnt; ++i) {
            std::size_t id = level_begin + i;
            EscalationNode& nd = res.nodes[id];
            nd.truant = tr[i];
            if (tr[i] == 0) {
                nd.status = NodeStatus::Certified;
                res.certified++;
                continue;
            }
            res.max_truant = std::max(res.max_truant, tr[i]);
            if (nd.depth >= opt.max_depth) {
                nd.status = NodeStatus::DepthLimit;
                res.depth_limited++;
                continue;
            }
            nd.status = NodeStatus::Escalator;
            i64 last = nd.parent >= 0 ? nd.coeff : res.root_prefixes[static_cast<std::size_t>(nd.coeff)].back();
            int depth = nd.depth;
            for (i64 c = last; c <= tr[i]; ++c) {
                if (res.nodes.size() >= opt.node_budget) {
                    res.partial = true;
                    break;
                }
                EscalationNode ch;
                ch.parent = static_cast<std::int64_t>(id);
                ch.coeff = c;
                ch.depth = depth + 1;
                res.nodes.push_back(ch);
            }
        }
        level_begin = level_end;
    }
    return res;
}

// ---- classification -------------------------------------------------------------

int valuation(i64 n, i64 p) {
    if (n == 0) throw std::invalid_argument("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

PrimeProfile prime_profile(const std::vector<i64>& prefix, i64 p) {
    if (prefix.size() < 7) throw std::invalid_argument("prime profile needs at least 7 coefficients");
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("prime profile needs an odd prime");
    PrimeProfile pr{p, 0, 0};
    for (std::size_t i = 0; i < 7; ++i) {
        int v = valuation(prefix[i], p);
        if (v == 0) pr.units++;
        else if (v == 1) pr.primes++;
    }
    return pr;
}

std::set<i64> obstruction_primes(const std::vector<i64>& prefix) {
    if (prefix.size() < 7) throw std::invalid_argument("obstruction primes need at least 7 coefficients");
    std::set<i64> cand{3, 5, 7, 11, 13};
    for (std::size_t i = 0; i < 7; ++i) {
        i64 n = prefix[i];
        for (i64 q = 2; q * q <= n; ++q)
            while (n % q == 0) {
                if (q > 2) cand.insert(q);
                n /= q;
            }
        if (n > 2) cand.insert(n);
    }
    std::set<i64> out;
    for (i64 p : cand) {
        auto pr = prime_profile(prefix, p);
        bool u6 = pr.units >= 6;
        bool u5p2 = pr.units == 5 && pr.primes == 2;
        if (!u6 && !u5p2) out.insert(p);
    }
    if (is_admissible(prefix))
        for (i64 p : out)
            if (p > 13) throw InvariantError("obstruction prime above 13 for an admissible prefix");
    return out;
}

}  // namespace polyuniv::escalate

#include <set>

#include "polyuniv/coverage.hpp"

namespace polyuniv::coverage {

namespace {

using V = std::vector<i64>;

V vec(std::initializer_list<std::pair<int, i64>> terms) {
    V v(10, 0);
    for (auto [i, c] : terms) v[i - 1] += c;
    return v;
}

V ones_then(int upto, i64 c, std::initializer_list<std::pair<int, i64>> rest) {
    V v(10, 0);
    for (int i = 1; i <= upto; ++i) v[i - 1] = c;
    for (auto [i, x] : rest) v[i - 1] += x;
    return v;
}

std::vector<V> build_named() {
    std::vector<V> raw = {
        vec({{1, 1}}),
        vec({{1, -1}, {2, 1}}),
        vec({{1, 1}, {3, -5}, {4, 1}, {5, 1}}),
        ones_then(5, -1, {{6, 3}}),
        ones_then(4, -1, {{5, 4}, {6, -1}}),
        ones_then(5, -1, {{6, 1}}),
        ones_then(5, -1, {{6, 2}}),
        vec({{1, -1}, {2, -1}, {3, -1}, {4, 6}, {5, -1}, {6, -1}}),
        vec({{1, 26}, {2, -26}, {6, 1}}),
        vec({{1, -1}, {3, 1}}),
        vec({{3, -1}, {4, 1}}),
        vec({{3, -1}, {4, -1}, {5, -1}, {6, 1}}),
        vec({{3, -1}, {4, -1}, {5, -1}, {6, 2}}),
        ones_then(4, -1, {{5, 1}}),
        vec({{2, -1}, {3, 1}}),
        vec({{2, 4}, {4, -1}}),
        vec({{1, -2}, {3, 1}}),
        vec({{3, 2}, {4, -1}}),
        vec({{1, -3}, {3, 1}}),
        vec({{2, -4}, {4, 1}}),
        vec({{1, -5}, {2, -7}, {3, 1}, {4, 1}, {5, 1}}),
        vec({{1, -7}, {2, -5}, {3, 1}, {5, 1}}),
        vec({{2, -1}, {3, -1}, {4, 1}}),
        vec({{1, -28}, {2, 1}, {3, 1}, {7, 1}}),
        vec({{1, -28}, {2, 1}, {3, 1}, {5, 1}, {6, 1}}),
        vec({{3, -3}, {5, 1}}),
        vec({{1, -1}, {2, -1}, {3, 6}, {6, -1}}),
        vec({{1, -34}, {2, 1}, {3, 1}, {4, 1}, {6, 1}}),
        vec({{1, -34}, {2, 1}, {3, 1}, {4, 1}, {7, 1}}),
        ones_then(5, -1, {{6, 4}}),
        ones_then(5, -4, {{6, 5}}),
        vec({{1, -1}, {2, -1}, {3, -1}, {4, 4}, {5, -1}}),
        vec({{1, -4}, {2, -4}, {3, -4}, {4, -4}, {5, 9}, {6, -4}}),
        vec({{1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, -5}, {6, 2}}),
        ones_then(4, -1, {{5, 2}}),
        ones_then(4, -4, {{5, 5}}),
        vec({{2, -1}, {3, 1}, {4, 2}}),
        vec({{2, -1}, {3, -1}, {4, 2}}),
        vec({{1, -3}, {2, 38}, {3, -3}, {6, -3}}),
        vec({{1, 6}, {2, -1}, {3, -1}, {4, -1}}),
        vec({{1, -1}, {2, -1}, {3, -1}, {4, 2}}),
        vec({{1, 1}, {2, 1}, {3, 1}, {4, -1}}),
        vec({{1, -1}, {2, -1}, {3, -1}, {4, 1}}),
        vec({{1, 2}, {2, 2}, {3, 2}, {5, -1}}),
        ones_then(4, 1, {{5, -1}}),
        vec({{2, 1}}),
        vec({{3, 1}}),
        ones_then(5, 1, {{6, -1}}),
        ones_then(5, 3, {{6, -4}}),
        ones_then(5, -3, {{6, 5}}),
    };
    std::vector<V> out;
    std::set<V> seen;
    for (auto& v : raw)
        if (seen.insert(v).second) out.push_back(v);
    return out;
}

i64 pairing_of(const V& a, const V& b) {
    i64 s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

const std::vector<std::vector<i64>>& named_betas() {
    static const std::vector<V> v = build_named();
    return v;
}

BoxPool::BoxPool(std::vector<i64> a2, i64 pairing, int box, int max_support)
    : a_(std::move(a2)), pairing_(pairing), box_(box), max_support_(max_support) {
    if (a_.empty() || box_ < 1 || max_support_ < 1) done_ = true;
    max_support_ = std::min<int>(max_support_, static_cast<int>(a_.size()));
}

bool BoxPool::advance_entries() {
    for (int i = static_cast<int>(entries_.size()) - 1; i >= 0; --i) {
        i64& e = entries_[i];
        e = e == -1 ? 1 : e + 1;
        if (e <= M_) return true;
        e = -M_;
    }
    return false;
}

bool BoxPool::advance_support() {
    int k = k_, n = static_cast<int>(a_.size());
    for (int i = k - 1; i >= 0; --i) {
        if (support_[i] < static_cast<std::size_t>(n - k + i)) {
            ++support_[i];
            for (int j = i + 1; j < k; ++j) support_[j] = support_[j - 1] + 1;
            entries_.assign(k - 1, -M_);
            return true;
        }
    }
    return false;
}

bool BoxPool::advance_level() {
    if (M_ < box_) ++M_;
    else if (k_ < max_support_) {
        ++k_;
        M_ = 1;
    } else {
        return false;
    }
    support_.resize(k_);
    for (int i = 0; i < k_; ++i) support_[i] = i;
    entries_.assign(k_ - 1, -M_);
    return true;
}

bool BoxPool::current_ok(std::vector<i64>& out) const {
    i64 partial = 0, top = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        partial += entries_[i] * a_[support_[i]];
        top = std::max<i64>(top, std::abs(entries_[i]));
    }
    i64 al = a_[support_.back()];
    i64 rest = pairing_ - partial;
    if (rest % al != 0) return false;
    i64 last = rest / al;
    if (last == 0 || std::abs(last) > M_) return false;
    if (std::max<i64>(top, std::abs(last)) != M_) return false;
    out.assign(a_.size(), 0);
    for (std::size_t i = 0; i < entries_.size(); ++i) out[support_[i]] = entries_[i];
    out[support_.back()] = last;
    return true;
}

std::optional<std::vector<i64>> BoxPool::next() {
    while (!done_) {
        if (!started_) {
            started_ = true;
            k_ = 1;
            M_ = 1;
            support_ = {0};
            entries_.clear();
        } else if (!advance_entries() && !advance_support() && !advance_level()) {
            done_ = true;
            break;
        }
        std::vector<i64> out;
        if (current_ok(out)) {
            ++emitted_;
            return out;
        }
    }
    return std::nullopt;
}

BetaSearchResult beta_search(const std::vector<i64>& a2, const PoolSpec& spec) {
    BetaSearchResult r;
    std::set<V> tried;
    auto test = [&](const V& b) {
        if (!tried.insert(b).second) return false;
        auto rep = locally_even_universal_fast(a2, BetaVector{b, spec.pairing});
        if (!rep.verdict) return false;
        r.beta = b;
        r.report = locally_even_universal(a2, BetaVector{b, spec.pairing});
        return true;
    };
    if (spec.named && a2.size() == 10) {
        for (auto& b : named_betas()) {
            if (pairing_of(a2, b) != spec.pairing) continue;
            ++r.named_tried;
            if (test(b)) {
                r.source = "named";
                return r;
            }
        }
    }
    BoxPool pool(a2, spec.pairing, spec.box, spec.max_support);
    while (r.box_tried < spec.max_candidates) {
        auto b = pool.next();
        if (!b) break;
        ++r.box_tried;
        if (test(*b)) {
            r.source = "box";
            return r;
        }
    }
    r.pool_exhausted = pool.exhausted();
    return r;
}

}  // namespace polyuniv::coverage

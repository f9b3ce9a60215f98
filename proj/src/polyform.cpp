#include "polyuniv/polyform.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace polyuniv::polyform {

MGonalForm MGonalForm::make(i64 m, std::vector<i64> a) {
    if (m < 3) throw std::invalid_argument("order m must be >= 3");
    for (auto c : a)
        if (c < 1) throw std::invalid_argument("coefficients must be positive");
    std::sort(a.begin(), a.end());
    return MGonalForm{m, std::move(a)};
}

i128 polygonal_number(i64 m, i64 x) {
    if (m < 3) throw std::invalid_argument("order m must be >= 3");
    i128 X = x;
    i128 num = sub_ck(mul_ck(mul_ck(i128(m - 2), X), X), mul_ck(i128(m - 4), X));
    return num / 2;
}

i128 eval_form(const MGonalForm& f, std::span<const i64> x) {
    if (x.size() != f.a.size()) throw std::invalid_argument("length of x must equal the rank");
    i128 s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s = add_ck(s, mul_ck(f.a[i], polygonal_number(f.m, x[i])));
    return s;
}

i64 coordinate_bound(i64 m, i128 n) {
    if (n < 0) return 0;
    i128 X = isqrt(2 * n / (m - 2));
    auto inside = [&](i128 y) {
        return polygonal_number(m, narrow64(y)) <= n || polygonal_number(m, narrow64(-y)) <= n;
    };
    while (X > 0 && !inside(X)) --X;
    while (inside(X + 1)) ++X;
    return narrow64(X);
}

std::optional<i64> polygonal_root(i64 m, i128 n) {
    if (n < 0) return std::nullopt;
    if (n == 0) return 0;
    i128 mm4 = m - 4;
    i128 D = add_ck(mul_ck(mm4, mm4), mul_ck(mul_ck(8, m - 2), n));
    i128 s = isqrt(D);
    if (s * s != D) return std::nullopt;
    i128 den = 2 * i128(m - 2);
    std::optional<i64> best;
    for (i128 num : {mm4 + s, mm4 - s}) {
        if (num % den != 0) continue;
        i64 x = narrow64(num / den);
        if (polygonal_number(m, x) != n) continue;
        if (!best || std::abs(x) < std::abs(*best) || (std::abs(x) == std::abs(*best) && x > *best)) best = x;
    }
    return best;
}

std::vector<std::pair<i64, i64>> polygonal_values(i64 m, i64 n) {
    std::vector<std::pair<i64, i64>> v;
    if (n < 0) return v;
    i64 X = coordinate_bound(m, n);
    for (i64 y = 0; y <= X; ++y) {
        for (i64 x : {y, -y}) {
            if (y == 0 && x < 0) continue;
            i128 p = polygonal_number(m, x);
            if (p <= n) v.emplace_back(narrow64(p), x);
        }
    }
    // stable: least |x| (positive first) survives for repeated values
    std::stable_sort(v.begin(), v.end(), [](auto& l, auto& r) { return l.first < r.first; });
    v.erase(std::unique(v.begin(), v.end(), [](auto& l, auto& r) { return l.first == r.first; }), v.end());
    return v;
}

namespace {

struct Searcher {
    const MGonalForm& f;
    std::vector<std::vector<std::pair<i64, i64>>> values;  // per coordinate
    std::vector<i64> x;

    bool rec(std::size_t i, i64 rem) {
        // coordinates are fixed from the largest coefficient down; index 0 is solved directly
        if (i == 0) {
            if (rem % f.a[0] != 0) return false;
            auto r = polygonal_root(f.m, rem / f.a[0]);
            if (!r) return false;
            x[0] = *r;
            return true;
        }
        for (auto& [p, xv] : values[i]) {
            i128 used = mul_ck(p, f.a[i]);
            if (used > rem) break;
            x[i] = xv;
            if (rec(i - 1, narrow64(rem - used))) return true;
        }
        x[i] = 0;
        return false;
    }
};

}  // namespace

std::optional<RepresentationWitness> is_represented(const MGonalForm& f, i64 target) {
    if (target < 0) throw std::invalid_argument("target must be nonnegative");
    if (f.a.empty()) {
        if (target == 0) return RepresentationWitness{{}, 0};
        return std::nullopt;
    }
    Searcher s{f, {}, std::vector<i64>(f.a.size(), 0)};
    s.values.resize(f.a.size());
    for (std::size_t i = 1; i < f.a.size(); ++i) s.values[i] = polygonal_values(f.m, target / f.a[i]);
    if (!s.rec(f.a.size() - 1, target)) return std::nullopt;
    RepresentationWitness w{s.x, eval_form(f, s.x)};
    if (w.value != target) throw InvariantError("representation witness does not evaluate to target");
    return w;
}

void validate_cap(i64 m, i64 cap) {
    if (m < 3) throw std::invalid_argument("order m must be >= 3");
    if (cap < 0) throw std::invalid_argument("cap must be nonnegative");
    if (cap > (i64(1) << 34)) throw std::invalid_argument("cap too large for bitmap enumeration");
    i128 prod = i128(m - 2) * cap;
    if (prod > INT64_MAX) throw OverflowError("(m-2)*cap does not fit in 64 bits");
}

static std::vector<i64> shifts_for(i64 m, i64 c, i64 cap) {
    std::vector<i64> sh;
    for (auto& [p, x] : polygonal_values(m, cap / c)) sh.push_back(p * c);
    return sh;
}

void add_coefficient_serial(Bitmap& out, const Bitmap& in, i64 m, i64 c) {
    i64 cap = static_cast<i64>(out.size()) - 1;
    std::fill(out.words().begin(), out.words().end(), 0);
    for (i64 s : shifts_for(m, c, cap)) out.or_shifted(in, static_cast<std::size_t>(s));
}

void add_coefficient(Bitmap& out, const Bitmap& in, i64 m, i64 c) {
    i64 cap = static_cast<i64>(out.size()) - 1;
    std::vector<i64> sh = shifts_for(m, c, cap);
    auto& ow = out.words();
    long long nw = static_cast<long long>(ow.size());
#pragma omp parallel for schedule(static)
    for (long long w = 0; w < nw; ++w) {
        std::uint64_t acc = 0;
        long long hi = w * 64 + 63;
        for (i64 s : sh) {
            if (s > hi) break;
            acc |= window_word(in, w * 64 - s);
        }
        ow[w] = acc;
    }
    out.clear_tail();
}

template <class Step>
static Bitmap enumerate(const MGonalForm& f, i64 cap, Step step) {
    validate_cap(f.m, cap);
    Bitmap cur(static_cast<std::size_t>(cap) + 1);
    cur.set(0);
    Bitmap next(cur.size());
    for (auto it = f.a.rbegin(); it != f.a.rend(); ++it) {
        step(next, cur, f.m, *it);
        std::swap(cur, next);
    }
    return cur;
}

Bitmap represented_bitmap(const MGonalForm& f, i64 cap) {
    return enumerate(f, cap, [](Bitmap& o, const Bitmap& i, i64 m, i64 c) { add_coefficient(o, i, m, c); });
}

Bitmap represented_bitmap_serial(const MGonalForm& f, i64 cap) {
    return enumerate(f, cap, [](Bitmap& o, const Bitmap& i, i64 m, i64 c) { add_coefficient_serial(o, i, m, c); });
}

TruantRecord truant(const MGonalForm& f, i64 cap) {
    if (cap < 1) throw std::invalid_argument("cap must be >= 1");
    Bitmap b = represented_bitmap(f, cap);
    std::size_t z = b.first_zero(1);
    TruantRecord r{f, std::nullopt, cap};
    if (z < b.size()) r.truant = static_cast<i64>(z);
    return r;
}

}  // namespace polyuniv::polyform

#include <sstream>

#include "polyuniv/escalate.hpp"

namespace polyuniv::escalate {

namespace {

// Slot constraint on one coefficient: exact value (fixed > 0) or a multiple of `mult`.
struct Slot {
    i64 fixed = 0;
    i64 mult = 1;
};

struct Template {
    DropoutFamily family;
    std::vector<Slot> slots;  // positions 1..k; position > k inherits `tail`
    Slot tail;
    bool one_residue_mod3 = false;  // the (1,1,a_3,...) row with {a_i mod 3} = {1,0,...,0}
};

Slot F(i64 v) { return Slot{v, 1}; }
Slot M(i64 k) { return Slot{0, k}; }

std::vector<Template> build() {
    std::vector<Template> t;
    auto add = [&](std::string id, std::string group, std::string pat, i64 p0, std::vector<Slot> s, Slot tail,
                   bool mod3 = false) {
        t.push_back(Template{DropoutFamily{id, group, pat, p0}, std::move(s), tail, mod3});
    };
    add("A'(7).1", "A'(7)", "(1,2,4,7a4',...,7a16')", 7, {F(1), F(2), F(4)}, M(7));

    add("A'(5).1", "A'(5)", "(1,1,3,3,6,15,25,3a8',...,3a16')", 3,
        {F(1), F(1), F(3), F(3), F(6), F(15), F(25)}, M(3));
    add("A'(5).2", "A'(5)", "(1,1,3,3,10,15,15a7',3a8',...,3a16')", 3,
        {F(1), F(1), F(3), F(3), F(10), F(15), M(15)}, M(3));
    add("A'(5).3", "A'(5)", "(1,1,3,6,6,15,25,3a8',...,3a16')", 3,
        {F(1), F(1), F(3), F(6), F(6), F(15), F(25)}, M(3));
    add("A'(5).4", "A'(5)", "(1,1,3,6,10,15a6',15a7',3a8',...,3a16')", 3,
        {F(1), F(1), F(3), F(6), F(10), M(15), M(15)}, M(3));
    add("A'(5).5", "A'(5)", "(1,1,3,6,12,15,25,3a8',...,3a16')", 3,
        {F(1), F(1), F(3), F(6), F(12), F(15), F(25)}, M(3));
    add("A'(5).6", "A'(5)", "(1,1,3,5a4',...,5a16')", 5, {F(1), F(1), F(3)}, M(5));
    add("A'(5).7", "A'(5)", "(1,2,2,5a4',...,5a16')", 5, {F(1), F(2), F(2)}, M(5));

    add("A'(3).1", "A'(3)", "(1,1,3a3',...,3a16')", 3, {F(1), F(1)}, M(3));
    add("A'(3).2", "A'(3)", "(1,1,a3,...,a16) with {a3,...,a16 mod 3} = {1,0,...,0}", 3, {F(1), F(1)}, M(1),
        true);
    add("A'(3).3", "A'(3)", "(1,2,3a3',...,3a16')", 3, {F(1), F(2)}, M(3));
    add("A'(3).4", "A'(3)", "(1,2,3,6,8,8a6',24,8a8',...,8a16')", 3,
        {F(1), F(2), F(3), F(6), F(8), M(8), F(24)}, M(8));

    add("A'(2).1", "A'(2)", "(1,2,2,3,8a5',...,8a16')", 2, {F(1), F(2), F(2), F(3)}, M(8));
    add("A'(2).2", "A'(2)", "(1,2,2,5,8a5',...,8a16')", 2, {F(1), F(2), F(2), F(5)}, M(8));
    add("A'(2).3", "A'(2)", "(1,2,2,5,10,16a6',...,16a16')", 2, {F(1), F(2), F(2), F(5), F(10)}, M(16));
    add("A'(2).4", "A'(2)", "(1,2,3,6,8a5',...,8a16')", 2, {F(1), F(2), F(3), F(6)}, M(8));
    add("A'(2).5", "A'(2)", "(1,2,4,4,5,16a6',...,16a16')", 2, {F(1), F(2), F(4), F(4), F(5)}, M(16));
    add("A'(2).6", "A'(2)", "(1,2,4,4,7,16a6',...,16a16')", 2, {F(1), F(2), F(4), F(4), F(7)}, M(16));
    add("A'(2).7", "A'(2)", "(1,2,4,4,9,16a6',...,16a16')", 2, {F(1), F(2), F(4), F(4), F(9)}, M(16));
    add("A'(2).8", "A'(2)", "(1,2,4,4,11,16a6',...,16a16')", 2, {F(1), F(2), F(4), F(4), F(11)}, M(16));
    add("A'(2).9", "A'(2)", "(1,2,4,5,12,16a6',...,16a16')", 2, {F(1), F(2), F(4), F(5), F(12)}, M(16));
    add("A'(2).10", "A'(2)", "(1,2,4,7,12,16a6',...,16a16')", 2, {F(1), F(2), F(4), F(7), F(12)}, M(16));
    return t;
}

const std::vector<Template>& templates() {
    static const std::vector<Template> t = build();
    return t;
}

bool slot_ok(const Slot& s, i64 v) { return s.fixed ? v == s.fixed : v % s.mult == 0; }

std::string describe(const Slot& s, int pos) {
    std::ostringstream o;
    if (s.fixed) o << "a" << pos << " = " << s.fixed;
    else o << s.mult << " | a" << pos;
    return o.str();
}

std::optional<DropoutMatch> try_match(const Template& t, const std::vector<i64>& a) {
    DropoutMatch m{&t.family, {}};
    int n = static_cast<int>(a.size());
    for (int pos = 1; pos <= kMaxDepth; ++pos) {
        const Slot& s = pos <= static_cast<int>(t.slots.size()) ? t.slots[pos - 1] : t.tail;
        if (t.one_residue_mod3 && pos > 2) break;
        if (pos <= n) {
            if (!slot_ok(s, a[pos - 1])) return std::nullopt;
        } else if (s.fixed || s.mult > 1) {
            m.obligations.push_back(describe(s, pos));
        }
    }
    if (t.one_residue_mod3) {
        int ones = 0;
        for (int pos = 3; pos <= n; ++pos) {
            i64 r = a[pos - 1] % 3;
            if (r == 2) return std::nullopt;
            if (r == 1) ones++;
        }
        if (ones > 1) return std::nullopt;
        if (n < kMaxDepth) {
            std::ostringstream o;
            o << (ones == 0 ? "exactly one of" : "none of") << " a" << n + 1 << "..a16 is 1 mod 3, the rest 0 mod 3";
            m.obligations.push_back(o.str());
        } else if (ones == 0) {
            return std::nullopt;
        }
    }
    return m;
}

}  // namespace

const std::vector<DropoutFamily>& dropout_families() {
    static const std::vector<DropoutFamily> f = [] {
        std::vector<DropoutFamily> v;
        for (auto& t : templates()) v.push_back(t.family);
        return v;
    }();
    return f;
}

std::optional<DropoutMatch> match_dropout(const std::vector<i64>& prefix) {
    if (prefix.size() < 7) throw std::invalid_argument("dropout matching needs at least 7 coefficients");
    if (prefix.size() > static_cast<std::size_t>(kMaxDepth)) throw std::invalid_argument("prefix longer than 16");
    const auto& fams = dropout_families();
    const auto& ts = templates();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        auto m = try_match(ts[i], prefix);
        if (m) {
            m->family = &fams[i];
            return m;
        }
    }
    return std::nullopt;
}

}  // namespace polyuniv::escalate

#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyuniv/coverage.hpp"

// Fixture entries: one instance, a beta list and the check it must pass.
namespace polyuniv::fixture {

using nlohmann::json;

struct Outcome {
    std::string family;
    std::string kind;
    bool amended = false;  // list extended beyond the paper's, diagnostic only
    bool ok = false;
    std::string detail;
};

inline std::vector<i64> pad10(std::vector<i64> b) {
    if (b.size() > 10) throw std::invalid_argument("beta has more than ten entries");
    b.resize(10, 0);
    return b;
}

inline i64 pairing(const std::vector<i64>& a2, const std::vector<i64>& b) {
    i64 s = 0;
    for (std::size_t i = 0; i < 10; ++i) s += a2[i] * b[i];
    return s;
}

inline Outcome evaluate(const json& e, i64 m, i64 s) {
    using namespace polyuniv::coverage;
    Outcome out{e.at("family"), e.at("kind"), e.value("amended", false), true, ""};
    auto inst = e.at("instance").get<std::vector<i64>>();
    std::vector<i64> a2(inst.begin(), inst.begin() + 10);
    std::vector<std::vector<i64>> betas;
    for (auto& b : e.at("betas")) betas.push_back(pad10(b.get<std::vector<i64>>()));
    long p0 = e.value("p0", 0L);

    if (out.kind == "leu" || out.kind == "leu-any") {
        bool any = false, all = true;
        for (auto& b : betas) {
            bool v = locally_even_universal(a2, BetaVector{b, pairing(a2, b)}).verdict;
            any = any || v;
            all = all && v;
            if (!v) out.detail += "beta fails; ";
        }
        out.ok = out.kind == "leu" ? all : any;
        return out;
    }
    // (t1): every beta is even universal away from p0
    for (auto& b : betas)
        if (!locally_even_universal(a2, BetaVector{b, pairing(a2, b)}, p0).verdict) {
            out.ok = false;
            out.detail += "(t1) fails; ";
        }
    std::vector<i64> r1s;
    if (e.contains("r1")) r1s = e.at("r1").get<std::vector<i64>>();
    else if (out.kind == "union")
        for (i64 r = -11; r <= 11; r += 2) r1s.push_back(r);
    else
        for (i64 r = -12; r <= 12; ++r) r1s.push_back(r);

    for (i64 r1 : r1s) {
        bool ok;
        if (out.kind == "union") {
            auto sets = shifted_sets(a2, betas, p0, r1);
            ok = union_covers(sets, p0, 0, p0 == 2 ? 1 : 0, 6);
        } else {
            auto S = s_set(inst, m, r1, s, false);
            ok = check_t2(a2, betas, p0, r1, S.values()).verdict;
        }
        if (!ok) {
            out.ok = false;
            out.detail += "r1=" + std::to_string(r1) + " uncovered; ";
        }
    }
    return out;
}

inline json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open fixture file " + path);
    return json::parse(in);
}

}  // namespace polyuniv::fixture

#include "polyuniv/serialize.hpp"

namespace polyuniv::serialize {

json z(const Z& v) {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

json z(i128 v) { return z(from_i128(v)); }

json vec(const ZVector& v) {
    json a = json::array();
    for (auto& x : v) a.push_back(z(x));
    return a;
}

json matrix(const ZMatrix& m) {
    json a = json::array();
    for (auto& row : m) a.push_back(vec(row));
    return a;
}

json to_json(const padic::LocalClass& c) { return json{{"p", c.p}, {"v", c.v}, {"u", c.u}}; }

json to_json(const padic::LocalRepCertificate& c) {
    json j{{"p", c.p}, {"n", z(c.n)}, {"k", c.k}, {"x", vec(c.x)}, {"e", c.e}, {"verdict", padic::to_string(c.verdict)}};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

json to_json(const padic::ClassReport& r) {
    json cls = json::array();
    for (auto& c : r.classes) cls.push_back(to_json(c));
    json j{{"p", r.p}, {"v_cap", r.v_cap}, {"classes", cls}, {"v_stab", r.v_stab}, {"periodic", r.periodic}};
    if (!r.certificates.empty()) {
        json cs = json::array();
        for (auto& c : r.certificates) cs.push_back(to_json(c));
        j["certificates"] = cs;
    }
    return j;
}

json to_json(const padic::UniversalityReport& r) {
    json miss = json::array(), cs = json::array();
    for (auto& c : r.missing) miss.push_back(to_json(c));
    for (auto& c : r.certificates) cs.push_back(to_json(c));
    return json{{"verdict", r.verdict}, {"inconclusive", r.inconclusive}, {"missing", miss}, {"certificates", cs}};
}

json to_json(const lattice::GramLattice& L) {
    return json{{"rank", L.rank()}, {"gram", matrix(L.gram)}, {"basis", matrix(L.basis)}, {"ambient", L.ambient}};
}

json to_json(const lattice::NdDiagonal& d) {
    json e = json::array();
    for (auto& q : d.entries) e.push_back(q.get_str());
    return json{{"p", d.p}, {"entries", e}, {"first_unit_rep", z(d.first_unit_rep)}, {"order", d.order}};
}

json to_json(const polyform::TruantRecord& t) {
    json j{{"m", t.form.m}, {"coeffs", t.form.a}, {"bound", t.bound}};
    j["truant"] = t.truant ? json(*t.truant) : json(nullptr);
    return j;
}

json to_json(const polyform::RepresentationWitness& w) { return json{{"x", w.x}, {"value", z(w.value)}}; }

json classification_record(const std::vector<i64>& prefix) {
    json fams = json::array(), primes = json::array();
    if (prefix.size() >= 7) {
        if (auto m = escalate::match_dropout(prefix)) fams.push_back(m->family->id);
        for (auto p : escalate::obstruction_primes(prefix)) primes.push_back(p);
    }
    return json{{"prefix", prefix}, {"families", fams}, {"primes", primes}};
}

std::vector<json> tree_records(const escalate::EscalationResult& r) {
    std::vector<json> out;
    out.reserve(r.nodes.size());
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        auto prefix = r.prefix_of(i);
        json j = classification_record(prefix.size() > static_cast<std::size_t>(escalate::kMaxDepth)
                                           ? std::vector<i64>(prefix.begin(), prefix.begin() + escalate::kMaxDepth)
                                           : prefix);
        j["prefix"] = prefix;
        j["truant"] = r.nodes[i].truant ? json(r.nodes[i].truant) : json(nullptr);
        j["status"] = escalate::to_string(r.nodes[i].status);
        out.push_back(std::move(j));
    }
    return out;
}

json to_json(const coverage::LocalReport& r) {
    json ps = json::array();
    for (auto& p : r.primes) {
        json miss = json::array();
        for (auto& c : p.missing) miss.push_back(to_json(c));
        ps.push_back(json{{"p", p.p}, {"ok", p.ok}, {"inconclusive", p.inconclusive}, {"missing", miss}});
    }
    return json{{"verdict", r.verdict}, {"primes", ps}};
}

json to_json(const coverage::BetaSearchResult& r) {
    json j{{"found", r.beta.has_value()}, {"named_tried", r.named_tried}, {"box_tried", r.box_tried},
           {"pool_exhausted", r.pool_exhausted}};
    if (r.beta) {
        j["beta"] = *r.beta;
        j["source"] = r.source;
        j["report"] = to_json(r.report);
    }
    return j;
}

json to_json(const coverage::SSet& s) {
    json mem = json::array();
    for (auto& [t, x] : s.members) {
        json e{{"t", t}};
        if (!x.empty()) e["x"] = x;
        mem.push_back(e);
    }
    return json{{"a_prefix", s.a_prefix}, {"m", s.m}, {"r1", s.r1}, {"s", s.s}, {"members", mem}};
}

json to_json(const coverage::T2Report& r) {
    return json{{"verdict", r.verdict},
                {"precision", r.precision},
                {"by_precision", r.by_precision},
                {"stabilized_from", r.stabilized_from},
                {"uncovered", r.uncovered}};
}

json to_json(const coverage::CoverageReport& r) {
    json cov = json::array();
    for (auto& [R, w] : r.covered)
        cov.push_back(json{{"residue", R}, {"t", w.t}, {"r1", w.r1}, {"beta", w.beta_index}, {"y", vec(w.y)},
                           {"value", z(w.value)}});
    return json{{"m", r.m},
                {"s", r.s},
                {"a2", r.a2},
                {"betas", r.betas},
                {"targets", r.targets},
                {"covered_count", r.covered.size()},
                {"complete", r.complete()},
                {"box", r.box_used},
                {"C_bound", z(r.c_bound)},
                {"covered", cov}};
}

json to_json(const coverage::ObstructionReport& r) {
    json sampled = json::array();
    for (auto& [b, cls] : r.sampled_classes) {
        json cs = json::array();
        for (auto& c : cls) cs.push_back(to_json(c));
        sampled.push_back(json{{"beta", b}, {"classes", cs}});
    }
    json t2 = json::array();
    for (auto& [r1, ok] : r.t2) t2.push_back(json{{"r1", r1}, {"ok", ok}});
    return json{{"family", r.family},   {"instance", r.instance},         {"p0", r.p0},
                {"search", to_json(r.search)}, {"sampled_classes", sampled}, {"classes_match", r.classes_match},
                {"t2", t2},             {"t2_ok", r.t2_ok},               {"confirmed", r.confirmed()}};
}

}  // namespace polyuniv::serialize

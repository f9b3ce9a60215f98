#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "polyuniv/coverage.hpp"
#include "polyuniv/escalate.hpp"
#include "polyuniv/fixture.hpp"
#include "polyuniv/lattice.hpp"
#include "polyuniv/padic.hpp"
#include "polyuniv/polyform.hpp"
#include "polyuniv/serialize.hpp"

#ifndef POLYUNIV_FIXTURES
#define POLYUNIV_FIXTURES ""
#endif

using namespace polyuniv;
using serialize::json;

namespace {

constexpr const char* kVersion = "0.3.0";

enum Exit { Ok = 0, Validation = 1, Partial = 2, Invariant = 3 };

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Run {
    int threads = 0;
    u64 seed = 20240611;
    std::string out;
    json config = json::object();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::ofstream file;

    std::ostream& os() { return out.empty() ? std::cout : file; }

    json header() const {
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return json{{"tool_version", kVersion}, {"config", config}, {"wall_time", dt}};
    }
    // single-object commands
    void emit(json body) {
        json h = header();
        body.insert(h.begin(), h.end());
        os() << body.dump() << '\n';
    }
    void line(const json& rec) { os() << rec.dump() << '\n'; }
};

std::vector<i64> parse_list(const std::string& s) {
    std::vector<i64> v;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        long long x = 0;
        try {
            x = std::stoll(tok, &used);
        } catch (const std::exception&) {
            throw ValidationError("not an integer: '" + tok + "'");
        }
        if (used != tok.size()) throw ValidationError("not an integer: '" + tok + "'");
        v.push_back(x);
    }
    return v;
}

// accepts 1e5 style values for budgets and bounds
i64 parse_count(const std::string& s) {
    std::size_t used = 0;
    double d = 0;
    try {
        d = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ValidationError("not a number: '" + s + "'");
    }
    if (used != s.size() || d < 0 || d > 9e18 || d != static_cast<double>(static_cast<i64>(d)))
        throw ValidationError("not a nonnegative integer: '" + s + "'");
    return static_cast<i64>(d);
}

// ---- polyform commands ----------------------------------------------------------------------

struct FormArgs {
    i64 m = 3;
    std::string coeffs;
};

polyform::MGonalForm form_of(const FormArgs& f) {
    auto a = parse_list(f.coeffs);
    if (a.empty()) throw ValidationError("--coeffs is empty");
    return polyform::MGonalForm::make(f.m, a);
}

int cmd_eval(Run& run, const FormArgs& f, const std::string& xs) {
    form_of(f);  // validation only; the form sorts its coefficients
    auto a = parse_list(f.coeffs);
    auto x = parse_list(xs);
    if (x.size() != a.size()) throw ValidationError("--x needs one entry per coefficient");
    i128 v = 0;
    for (std::size_t i = 0; i < a.size(); ++i) v = add_ck(v, mul_ck(a[i], polyform::polygonal_number(f.m, x[i])));
    run.config = {{"command", "eval"}, {"m", f.m}, {"coeffs", a}, {"x", x}};
    run.emit({{"value", serialize::z(v)}});
    return Ok;
}

int cmd_represent(Run& run, const FormArgs& f, i64 target) {
    auto form = form_of(f);
    run.config = {{"command", "represent"}, {"m", f.m}, {"coeffs", form.a}, {"target", target}};
    auto w = polyform::is_represented(form, target);
    json body{{"represented", w.has_value()}};
    if (w) body["witness"] = serialize::to_json(*w);
    run.emit(body);
    return Ok;
}

int cmd_truant(Run& run, const FormArgs& f, const std::string& cap) {
    auto form = form_of(f);
    i64 c = parse_count(cap);
    run.config = {{"command", "truant"}, {"m", f.m}, {"coeffs", form.a}, {"cap", c}};
    auto t = polyform::truant(form, c);
    run.emit({{"truant", t.truant ? json(*t.truant) : json(nullptr)}, {"bound", t.bound}});
    return Ok;
}

// ---- escalation -----------------------------------------------------------------------------

int cmd_escalate(Run& run, i64 m, const std::string& certify, const std::string& budget, int max_depth, bool records) {
    escalate::EscalationOptions opt;
    opt.certify_bound = parse_count(certify);
    opt.max_depth = max_depth;
    if (m == 5 && budget.empty()) throw ValidationError("m = 5 escalation is long running; pass --budget");
    if (!budget.empty()) opt.node_budget = static_cast<u64>(parse_count(budget));
    opt.parallel = run.threads != 1;
    run.config = {{"command", "escalate"}, {"m", m},           {"certify_bound", opt.certify_bound},
                  {"budget", opt.node_budget},  {"max_depth", max_depth}, {"threads", run.threads}};
    auto r = escalate::escalation_tree(m, opt);
    if (records)
        for (auto& rec : serialize::tree_records(r)) run.line(rec);
    run.emit({{"max_truant", r.max_truant},
              {"truants", r.truants()},
              {"nodes", r.nodes.size()},
              {"certified", r.certified},
              {"depth_limited", r.depth_limited},
              {"partial", r.partial}});
    return r.partial ? Partial : Ok;
}

// ---- classification -------------------------------------------------------------------------

int cmd_classify(Run& run, int depth, const std::string& prefix, const std::string& budget, bool records) {
    run.config = {{"command", "classify"}, {"depth", depth}};
    if (!prefix.empty()) {
        auto a = parse_list(prefix);
        run.config["prefix"] = a;
        if (!escalate::is_admissible(a)) throw ValidationError("prefix violates the chain rule");
        json rec = serialize::classification_record(a);
        // short prefixes: the sets some admissible completion to length 7 falls into
        std::set<i64> ps;
        bool two = false;
        u64 completions = 0;
        auto visit = [&](const std::vector<i64>& full) {
            auto q = escalate::obstruction_primes(full);
            ps.insert(q.begin(), q.end());
            two = two || q.empty();
            ++completions;
        };
        if (a.size() >= 7) visit(a);
        else
            escalate::enumerate_prefixes(7, std::nullopt, [&](const std::vector<i64>& full) {
                if (full.size() == 7 && std::equal(a.begin(), a.end(), full.begin())) visit(full);
                return full < a || std::equal(a.begin(), a.end(), full.begin());
            });
        json flags = json::object();
        for (i64 p : {3, 5, 7, 11, 13}) flags["A(" + std::to_string(p) + ")"] = ps.count(p) > 0;
        flags["A(2)"] = two;
        rec["membership"] = flags;
        if (a.size() < 7) rec["completions"] = completions;
        if (auto mt = a.size() >= 7 ? escalate::match_dropout(a) : std::nullopt; mt && !mt->obligations.empty())
            rec["obligations"] = mt->obligations;
        run.emit(rec);
        return Ok;
    }
    if (depth < 1 || depth > escalate::kMaxDepth) throw ValidationError("--depth must be in 1..16");
    if (depth >= 8 && budget.empty()) throw ValidationError("depth >= 8 is long running; pass --budget");
    u64 limit = budget.empty() ? ~u64{0} : static_cast<u64>(parse_count(budget));
    run.config["budget"] = budget.empty() ? json(nullptr) : json(limit);

    u64 total = 0;
    bool partial = false;
    std::map<std::string, u64> by_set, by_family;
    for (i64 p : {3, 5, 7, 11, 13}) by_set["A(" + std::to_string(p) + ")"] = 0;
    by_set["A(2)"] = 0;
    escalate::enumerate_prefixes(depth, std::nullopt, [&](const std::vector<i64>& a) {
        if (total >= limit) {
            partial = true;
            return false;
        }
        ++total;
        if (depth < 7) return true;
        auto ps = escalate::obstruction_primes(a);
        for (i64 p : ps) ++by_set["A(" + std::to_string(p) + ")"];
        if (ps.empty()) ++by_set["A(2)"];
        auto mt = escalate::match_dropout(a);
        if (mt) ++by_family[mt->family->id];
        if (records) run.line(serialize::classification_record(a));
        return true;
    });
    json fam = json::object();
    for (auto& f : escalate::dropout_families()) fam[f.id] = by_family.count(f.id) ? by_family[f.id] : 0;
    run.emit({{"prefixes", total}, {"sets", by_set}, {"dropouts", fam}, {"partial", partial}});
    return partial ? Partial : Ok;
}

// ---- verification -----------------------------------------------------------------------------

json verify_delta2() {
    json rows = json::array();
    int passed = 0;
    for (auto& pat : lattice::delta2_patterns()) {
        int ok = 0, n = 0;
        for (int code = 0; code < 256; ++code) {
            ZVector d;
            for (int i = 0; i < 4; ++i) {
                long u = 2 * ((code >> (2 * i)) & 3) + 1;
                d.push_back(Z(u) << pat[i]);
            }
            ++n;
            ok += padic::is_even_universal_2(padic::diagonal_gram(d), 12);
        }
        passed += ok == n;
        rows.push_back(json{{"orders", pat}, {"forms", n}, {"even_universal", ok}});
    }
    return json{{"check", "delta2"}, {"patterns", rows}, {"passed", passed}, {"total", rows.size()},
                {"ok", passed == static_cast<int>(rows.size())}};
}

// random a2 with a1 = 1 and beta with B(alpha, beta) = 1 built on the last nine slots
std::pair<std::vector<i64>, std::vector<i64>> random_pair(std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> coef(1, 40), ent(-3, 3);
    std::vector<i64> a{1};
    for (int i = 1; i < 10; ++i) a.push_back(coef(rng));
    std::sort(a.begin(), a.end());
    std::vector<i64> b(10, 0);
    i64 s = 0;
    for (int i = 1; i < 10; ++i) {
        b[i] = ent(rng);
        s += a[i] * b[i];
    }
    b[0] = 1 - s;  // a[0] = 1
    return {a, b};
}

json verify_nd(int samples, std::mt19937_64& rng) {
    const long primes[] = {3, 5, 7, 11, 13};
    int ok = 0, tried = 0, skipped = 0;
    json failures = json::array();
    while (tried < samples) {
        auto [a, b] = random_pair(rng);
        long p = primes[rng() % 5];
        try {
            auto c = lattice::verify_lemma_nd(a, b, p);
            ++tried;
            if (c.ok()) ++ok;
            else if (failures.size() < 10)
                failures.push_back(json{{"a2", a}, {"beta", b}, {"p", p}, {"rank", c.rank_ok}, {"det", c.det_ok},
                                        {"hasse", c.hasse_ok}});
        } catch (const lattice::PreconditionError&) {
            ++skipped;
        }
    }
    return json{{"check", "nd"}, {"samples", tried}, {"passed", ok}, {"skipped_preconditions", skipped},
                {"failures", failures}, {"ok", ok == tried}};
}

json verify_p(int samples, std::mt19937_64& rng) {
    const long primes[] = {2, 3, 5, 7, 11, 13};
    std::uniform_int_distribution<i64> coef(1, 30), ent(-4, 4);
    std::uniform_int_distribution<int> len(4, 10), rows(0, 2);
    int ok = 0;
    json failures = json::array();
    for (int t = 0; t < samples; ++t) {
        std::vector<i64> a(len(rng));
        for (auto& x : a) x = coef(rng);
        ZMatrix K;
        int k = rows(rng);
        for (int r = 0; r < k; ++r) {
            ZVector g;
            for (std::size_t i = 0; i < a.size(); ++i) g.push_back(Z(static_cast<long>(ent(rng))));
            K.push_back(g);
        }
        long p = primes[rng() % 6];
        bool pass = lattice::localization_check_lemma_p(a, K, p, 2);
        ok += pass;
        if (!pass && failures.size() < 10) failures.push_back(json{{"a", a}, {"K", serialize::matrix(K)}, {"p", p}});
    }
    return json{{"check", "p"}, {"samples", samples}, {"passed", ok}, {"failures", failures}, {"ok", ok == samples}};
}

json verify_odd3() {
    // Case split of the odd-triple construction: every odd (a1,a2,a3) mod 8 pattern with a4 = 2 mod 4
    json rows = json::array();
    int ok = 0, n = 0;
    for (i64 x : {1, 3, 5, 7})
        for (i64 y : {1, 3, 5, 7})
            for (i64 z : {1, 3, 5, 7}) {
                std::vector<i64> a{x, y, z, 2, 4, 8, 16, 32, 64, 128};
                auto r = lattice::sublattice_odd3(a, 0, 1, 2);
                bool consistent = r.even_universal == padic::is_even_universal_2(r.lattice.gram, 12);
                ++n;
                ok += consistent;
                rows.push_back(json{{"a", {x, y, z}}, {"class", lattice::to_string(r.cls)},
                                    {"even_universal", r.even_universal}, {"consistent", consistent}});
            }
    return json{{"check", "odd3"}, {"cases", rows}, {"passed", ok}, {"total", n}, {"ok", ok == n}};
}

json verify_a7prime(const coverage::PoolSpec& pool) {
    std::vector<i64> inst{1, 2, 4, 7, 14, 21, 28, 7, 7, 7, 35, 42, 49, 56, 63, 70};
    auto mt = escalate::match_dropout(inst);
    if (!mt) throw InvariantError("A'(7) instance does not match its family");
    coverage::DropoutSpec spec;
    spec.betas = {fixture::pad10({1}), fixture::pad10({-1, 1}), fixture::pad10({-3, 0, 1})};
    spec.expected = coverage::all_but_unit_squares(7, 3);
    spec.r1_samples = {-6, -3, -1, 1, 2, 5, 7, 14, 21, -14};
    auto r = coverage::verify_dropout(*mt->family, inst, spec, pool);
    json j = serialize::to_json(r);
    j["check"] = "A7prime";
    j["ok"] = r.confirmed();
    return j;
}

json verify_a5prime(const coverage::PoolSpec& pool) {
    std::vector<i64> inst{1, 1, 3, 5, 5, 5, 5, 5, 5, 5, 10, 10, 15, 15, 20, 20};
    auto mt = escalate::match_dropout(inst);
    if (!mt) throw InvariantError("A'(5) instance does not match its family");
    coverage::DropoutSpec spec;
    spec.betas = {fixture::pad10({0, -4, 0, 1}), fixture::pad10({-5, -7, 1, 1, 1})};
    spec.expected = coverage::all_but_unit_squares(5, 3);
    spec.r1_samples = {-5, -2, -1, 1, 2, 3, 5, 10};
    auto r = coverage::verify_dropout(*mt->family, inst, spec, pool);
    json j = serialize::to_json(r);
    j["check"] = "A5prime";
    j["ok"] = r.confirmed();
    return j;
}

json verify_section(const std::string& section, const std::string& path, i64 m, i64 s) {
    json fx = fixture::load(path);
    json rows = json::array();
    int ok = 0, n = 0;
    for (auto& e : fx.at("entries")) {
        std::string fam = e.at("family");
        if (fam != section && fam.rfind(section + ".", 0) != 0) continue;
        auto r = fixture::evaluate(e, m, s);
        if (!r.amended) {
            ++n;
            ok += r.ok;
        }
        json row{{"family", fam}, {"instance", e.at("instance")}, {"kind", r.kind}, {"betas", e.at("betas")},
                 {"amended", r.amended}, {"pass", r.ok}};
        if (!r.detail.empty()) row["detail"] = r.detail;
        rows.push_back(row);
    }
    if (rows.empty()) throw ValidationError("no fixture entries for section " + section);
    return json{{"check", "section " + section}, {"entries", rows}, {"passed", ok}, {"total", n}, {"ok", ok == n}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polygonal form universality toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Run run;
    if (const char* env = std::getenv("POLYUNIV_THREADS")) {
        try {
            run.threads = std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "POLYUNIV_THREADS is not an integer\n";
            return Validation;
        }
    }
    app.add_option("--threads", run.threads, "worker threads (overrides POLYUNIV_THREADS)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", run.seed, "seed for sampled checks");
    app.add_option("-o,--out", run.out, "write output here instead of stdout");

    FormArgs form;
    std::string xs, cap = "1000", certify = "1e5", budget, prefix, lemma, family, section;
    std::string fixtures = POLYUNIV_FIXTURES;
    i64 target = 0, m = 3, cov_m = 50, cov_s = 6;
    int depth = 7, max_depth = 32, samples = 100;
    bool records = false;
    u64 pool_cap = 20000;

    auto add_form = [&](CLI::App* c) {
        c->add_option("--m", form.m, "polygon order")->required();
        c->add_option("--coeffs", form.coeffs, "comma separated coefficients")->required();
    };
    auto* ev = app.add_subcommand("eval", "evaluate sum a_i P_m(x_i)");
    add_form(ev);
    ev->add_option("--x", xs, "comma separated arguments")->required();
    auto* rep = app.add_subcommand("represent", "find a representation of a target");
    add_form(rep);
    rep->add_option("--target", target)->required();
    auto* tru = app.add_subcommand("truant", "smallest positive integer not represented");
    add_form(tru);
    tru->add_option("--cap", cap, "search bound");
    auto* esc = app.add_subcommand("escalate", "escalation tree and largest truant");
    esc->add_option("--m", m)->required();
    esc->add_option("--certify", certify, "leaf certification bound");
    esc->add_option("--budget", budget, "node budget");
    esc->add_option("--max-depth", max_depth);
    esc->add_flag("--records", records, "stream one JSON line per node before the summary");
    auto* cls = app.add_subcommand("classify", "A(p), A(2) and dropout table over admissible prefixes");
    cls->add_option("--depth", depth);
    cls->add_option("--prefix", prefix, "classify a single prefix");
    cls->add_option("--budget", budget, "maximum number of prefixes");
    cls->add_flag("--records", records, "stream one JSON line per prefix");
    auto* ver = app.add_subcommand("verify", "run a lemma, family or section check");
    auto* g = ver->add_option_group("target");
    g->add_option("--lemma", lemma, "delta2 | nd | p | odd3");
    g->add_option("--family", family, "A7prime | A5prime");
    g->add_option("--section", section, "fixture section, e.g. III or IX.2");
    g->require_option(1);
    ver->add_option("--samples", samples)->check(CLI::PositiveNumber);
    ver->add_option("--fixtures", fixtures, "fixture file for --section");
    ver->add_option("--pool-cap", pool_cap, "box candidates tried by the beta search");
    ver->add_option("--coverage-m", cov_m);
    ver->add_option("--coverage-s", cov_s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Ok : Validation;
    }

    try {
        if (!run.out.empty()) {
            run.file.open(run.out);
            if (!run.file) throw ValidationError("cannot write " + run.out);
        }
        if (run.threads > 0) omp_set_num_threads(run.threads);
        int rc = Ok;
        if (*ev) rc = cmd_eval(run, form, xs);
        else if (*rep) rc = cmd_represent(run, form, target);
        else if (*tru) rc = cmd_truant(run, form, cap);
        else if (*esc) rc = cmd_escalate(run, m, certify, budget, max_depth, records);
        else if (*cls) rc = cmd_classify(run, depth, prefix, budget, records);
        else if (*ver) {
            std::mt19937_64 rng(run.seed);
            coverage::PoolSpec pool;
            pool.max_candidates = pool_cap;
            json r;
            if (lemma == "delta2") r = verify_delta2();
            else if (lemma == "nd") r = verify_nd(samples, rng);
            else if (lemma == "p") r = verify_p(samples, rng);
            else if (lemma == "odd3") r = verify_odd3();
            else if (family == "A7prime") r = verify_a7prime(pool);
            else if (family == "A5prime") r = verify_a5prime(pool);
            else if (!section.empty()) r = verify_section(section, fixtures, cov_m, cov_s);
            else throw ValidationError("unknown check: " + lemma + family);
            run.config = {{"command", "verify"}, {"lemma", lemma},   {"family", family}, {"section", section},
                          {"samples", samples},  {"seed", run.seed}, {"pool_cap", pool_cap}};
            bool ok = r.at("ok");
            run.emit(r);
            rc = ok ? Ok : Invariant;
        }
        return rc;
    } catch (const InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return Invariant;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Validation;
    } catch (const OverflowError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Validation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return Invariant;
    }
}

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "polyuniv/coverage.hpp"
#include "polyuniv/escalate.hpp"
#include "polyuniv/lattice.hpp"
#include "polyuniv/padic.hpp"
#include "polyuniv/polyform.hpp"

namespace polyuniv::serialize {

using json = nlohmann::json;

// Integers that fit in 64 bits are written as numbers, larger ones as decimal strings.
json z(const Z& v);
json z(i128 v);
json vec(const ZVector& v);
json matrix(const ZMatrix& m);

json to_json(const padic::LocalClass& c);
json to_json(const padic::LocalRepCertificate& c);
json to_json(const padic::ClassReport& r);
json to_json(const padic::UniversalityReport& r);

json to_json(const lattice::GramLattice& L);
json to_json(const lattice::NdDiagonal& d);

json to_json(const polyform::TruantRecord& t);
json to_json(const polyform::RepresentationWitness& w);

// One record per node: {prefix, truant, status, families, primes}.
std::vector<json> tree_records(const escalate::EscalationResult& r);
json classification_record(const std::vector<i64>& prefix);

json to_json(const coverage::LocalReport& r);
json to_json(const coverage::BetaSearchResult& r);
json to_json(const coverage::SSet& s);
json to_json(const coverage::T2Report& r);
json to_json(const coverage::CoverageReport& r);
json to_json(const coverage::ObstructionReport& r);

}  // namespace polyuniv::serialize

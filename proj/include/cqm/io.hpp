#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "cqm/contexts.hpp"
#include "cqm/experiments.hpp"
#include "cqm/gns.hpp"
#include "cqm/probability.hpp"
#include "cqm/states.hpp"

namespace cqm::io {

using Json = nlohmann::ordered_json;

/// Deterministic JSON text: insertion-ordered keys, doubles with 17
/// significant digits, non-finite numbers as null.
std::string dump(const Json& value, int indent = 2);

Json parse_file(const std::string& path);

// {"dim": n, "re": [[...]], "im": [[...]]}, row-major. "im" may be omitted.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

// {"re": [...], "im": [...]} or a plain array of reals.
Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j);

Json context_to_json(const Context& ctx);
Context context_from_json(const Json& j);
Json contexts_to_json(const std::vector<Context>& contexts);

// {context_id: outcome_index}
Json physical_state_to_json(const PhysicalState& phi);
PhysicalState physical_state_from_json(const Json& j, Eigen::Index dim);

Json sample_set_to_json(const SampleSet& s);
// Columns: context_id,outcome,count
std::string sample_sets_to_csv(const std::vector<SampleSet>& sets);

// {"dim": n, "tol": optional, "observables": [{"label": ..., "matrix": {...}}]}
ObservableFamily family_from_json(const Json& j);

// {"dim": d, "rays": [[...] | {"re","im"}], "contexts": [[i, j, ...]]}
KSInstance ks_instance_from_json(const Json& j);

Json chsh_report_to_json(const CHSHConfig& cfg, const CHSHReport& report);
// Columns: setting,theta,E_exact,E_hat,stderr,n
std::string chsh_report_to_csv(const CHSHReport& report);

Json classical_report_to_json(const ClassicalReport& report);
std::string classical_report_to_csv(const ClassicalReport& report);

Json ks_result_to_json(const KSResult& result, const KSInstance& instance);
std::string ks_result_to_csv(const KSResult& result);

Json pauli_walkthrough_to_json(const PauliWalkthrough& w);
std::string pauli_walkthrough_to_csv(const PauliWalkthrough& w);

Json gns_to_json(const GnsRepresentation& rep, const RepresentationReport& report);
std::string gns_to_csv(const GnsRepresentation& rep, const RepresentationReport& report);

/// 17-significant-digit rendering used by every writer.
std::string format_double(double x);

}  // namespace cqm::io

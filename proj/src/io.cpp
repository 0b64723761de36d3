#include "cqm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cqm/error.hpp"

namespace cqm::io {

namespace {

void write_string(std::ostream& os, const std::string& s) {
  os << Json(s).dump();
}

void write(std::ostream& os, const Json& v, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool scalar = true;
      for (const auto& e : v) scalar = scalar && !e.is_structured();
      if (scalar) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) os << (indent > 0 ? ", " : ",");
          write(os, v[i], indent, depth + 1);
        }
        os << ']';
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',' << nl;
        os << pad;
        write(os, v[i], indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      os << (std::isfinite(x) ? format_double(x) : "null");
      return;
    }
    default:
      os << v.dump();
  }
}

std::vector<std::vector<double>> rows_of(const Json& j, const char* key) {
  try {
    return j.at(key).get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("matrix field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string dump(const Json& value, int indent) {
  std::ostringstream os;
  write(os, value, indent, 0);
  return os.str();
}

Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "invalid JSON in " + path + ": " + e.what());
  }
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array();
    Json ii = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ii.push_back(m(i, k).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return Json{{"dim", m.rows()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re")) {
    throw Error(ErrorCode::InvalidArgument, "matrix JSON needs 'dim' and 're'");
  }
  if (!j.at("dim").is_number_integer()) throw Error(ErrorCode::InvalidArgument, "matrix dim must be an integer");
  const auto n = j.at("dim").get<long long>();
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "matrix dim must be positive");
  const auto re = rows_of(j, "re");
  const auto im = j.contains("im") ? rows_of(j, "im")
                                   : std::vector<std::vector<double>>(re.size(), std::vector<double>(re.size(), 0.0));
  auto check = [&](const std::vector<std::vector<double>>& rows) {
    if (static_cast<long long>(rows.size()) != n) throw Error(ErrorCode::DimMismatch, "matrix rows differ from dim");
    for (const auto& row : rows) {
      if (static_cast<long long>(row.size()) != n) throw Error(ErrorCode::DimMismatch, "matrix is not square");
    }
  };
  check(re);
  check(im);
  ComplexMatrix m(n, n);
  for (long long r = 0; r < n; ++r) {
    for (long long c = 0; c < n; ++c) m(r, c) = Complex(re[r][c], im[r][c]);
  }
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
  return m;
}

Json vector_to_json(const ComplexVector& v) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return Json{{"re", re}, {"im", im}};
}

ComplexVector vector_from_json(const Json& j) {
  try {
    if (j.is_array()) {
      const auto re = j.get<std::vector<double>>();
      ComplexVector v(static_cast<Eigen::Index>(re.size()));
      for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = re[i];
      return v;
    }
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.contains("im") ? j.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
    if (im.size() != re.size()) throw Error(ErrorCode::DimMismatch, "vector re/im lengths differ");
    ComplexVector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("invalid vector JSON: ") + e.what());
  }
}

Json context_to_json(const Context& ctx) {
  return Json{{"id", ctx.id},
              {"basis", matrix_to_json(ctx.basis)},
              {"sources", ctx.source_observables},
              {"maximal_within_family", ctx.maximal_within_family}};
}

Context context_from_json(const Json& j) {
  Context ctx;
  try {
    ctx.basis = matrix_from_json(j.at("basis"));
    ctx.id = j.at("id").get<std::string>();
    ctx.source_observables = j.value("sources", std::vector<std::string>{});
    ctx.maximal_within_family = j.value("maximal_within_family", true);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("invalid context JSON: ") + e.what());
  }
  if (max_abs_entry(ctx.basis.adjoint() * ctx.basis - ComplexMatrix::Identity(ctx.dim(), ctx.dim())) >
      kBasisUnitaryTol) {
    throw Error(ErrorCode::InvalidArgument, "context basis is not unitary");
  }
  return ctx;
}

Json contexts_to_json(const std::vector<Context>& contexts) {
  Json out = Json::array();
  for (const Context& c : contexts) out.push_back(context_to_json(c));
  return out;
}

Json physical_state_to_json(const PhysicalState& phi) {
  Json out = Json::object();
  for (const auto& [id, k] : phi.assignments()) out[id] = k;
  return out;
}

PhysicalState physical_state_from_json(const Json& j, Eigen::Index dim) {
  std::map<std::string, int> assignments;
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "physical state JSON must be an object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) assignments[it.key()] = it.value().get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("invalid physical state JSON: ") + e.what());
  }
  return PhysicalState(dim, std::move(assignments));
}

Json sample_set_to_json(const SampleSet& s) {
  return Json{{"context_id", s.context_id},
              {"trials", s.trials},
              {"seed", s.seed},
              {"outcome_counts", s.outcome_counts}};
}

std::string sample_sets_to_csv(const std::vector<SampleSet>& sets) {
  std::ostringstream os;
  os << "context_id,outcome,count\n";
  for (const SampleSet& s : sets) {
    for (std::size_t k = 0; k < s.outcome_counts.size(); ++k) {
      os << s.context_id << ',' << k << ',' << s.outcome_counts[k] << '\n';
    }
  }
  return os.str();
}

ObservableFamily family_from_json(const Json& j) {
  ObservableFamily family;
  try {
    const double herm_tol = j.value("hermiticity_tol", kDefaultHermiticityTol);
    for (const auto& entry : j.at("observables")) {
      family.add(entry.at("label").get<std::string>(),
                 Observable::from_matrix(matrix_from_json(entry.at("matrix")), herm_tol));
    }
    if (j.contains("dim") && j.at("dim").get<long long>() != family.dim()) {
      throw Error(ErrorCode::DimMismatch, "family dim does not match its observables");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("invalid family JSON: ") + e.what());
  }
  if (family.size() == 0) throw Error(ErrorCode::InvalidArgument, "family has no observables");
  return family;
}

KSInstance ks_instance_from_json(const Json& j) {
  try {
    const auto dim = j.at("dim").get<Eigen::Index>();
    std::vector<ComplexVector> rays;
    for (const auto& r : j.at("rays")) rays.push_back(vector_from_json(r));
    auto contexts = j.at("contexts").get<std::vector<std::vector<int>>>();
    return KSInstance::make(dim, std::move(rays), std::move(contexts));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInstance, std::string("invalid KS instance JSON: ") + e.what());
  }
}

Json chsh_report_to_json(const CHSHConfig& cfg, const CHSHReport& report) {
  Json settings = Json::array();
  for (const CHSHSetting& s : report.settings) {
    settings.push_back(Json{{"setting", s.label},
                            {"alice", s.alice},
                            {"bob", s.bob},
                            {"theta", s.theta},
                            {"context_id", s.context_id},
                            {"E_exact", s.e_exact},
                            {"E_hat", s.e_hat},
                            {"stderr", s.stderr_},
                            {"n", s.samples.trials},
                            {"outcome_counts", s.samples.outcome_counts}});
  }
  return Json{{"experiment", "chsh"},
              {"angles", Json{{"a", cfg.a}, {"a_prime", cfg.a_prime}, {"b", cfg.b}, {"b_prime", cfg.b_prime}}},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"settings", settings},
              {"I_exact", report.i_exact},
              {"I_hat", report.i_hat},
              {"I_stderr", report.i_stderr}};
}

std::string chsh_report_to_csv(const CHSHReport& report) {
  std::ostringstream os;
  os << "setting,theta,E_exact,E_hat,stderr,n\n";
  for (const CHSHSetting& s : report.settings) {
    os << s.label << ',' << format_double(s.theta) << ',' << format_double(s.e_exact) << ','
       << format_double(s.e_hat) << ',' << format_double(s.stderr_) << ',' << s.samples.trials << '\n';
  }
  return os.str();
}

Json classical_report_to_json(const ClassicalReport& r) {
  return Json{{"experiment", "chsh-classical"},
              {"model", r.model == HiddenVariableModel::SignOfDot ? "sign-of-dot" : "constant"},
              {"trials", r.trials},
              {"seed", r.seed},
              {"E_hat", Json{{"ab", r.e_hat[0]}, {"ab'", r.e_hat[1]}, {"a'b", r.e_hat[2]}, {"a'b'", r.e_hat[3]}}},
              {"I_hat", r.i_hat},
              {"I_stderr", r.i_stderr},
              {"bound", 0.5},
              {"within_bound", r.within_bound},
              {"dichotomy_violations", r.dichotomy_violations}};
}

std::string classical_report_to_csv(const ClassicalReport& r) {
  std::ostringstream os;
  os << "setting,E_hat,n\n";
  const char* labels[] = {"ab", "ab'", "a'b", "a'b'"};
  for (int i = 0; i < 4; ++i) os << labels[i] << ',' << format_double(r.e_hat[static_cast<std::size_t>(i)]) << ',' << r.trials << '\n';
  os << "I," << format_double(r.i_hat) << ',' << r.trials << '\n';
  return os.str();
}

Json ks_result_to_json(const KSResult& result, const KSInstance& instance) {
  Json out{{"experiment", "kochen-specker"},
           {"dim", instance.dim},
           {"rays", instance.rays.size()},
           {"contexts", instance.contexts.size()},
           {"verdict", result.colorable ? "colorable" : "UNSAT"},
           {"nodes", result.nodes},
           {"witness_count", result.witness_count}};
  if (result.colorable) out["witness"] = result.witness;
  return out;
}

std::string ks_result_to_csv(const KSResult& result) {
  std::ostringstream os;
  os << "verdict,nodes,witness_count\n"
     << (result.colorable ? "colorable" : "UNSAT") << ',' << result.nodes << ',' << result.witness_count << '\n';
  return os.str();
}

Json pauli_walkthrough_to_json(const PauliWalkthrough& w) {
  return Json{{"experiment", "pauli-demo"},
              {"A", matrix_to_json(w.a)},
              {"r0", w.r0},
              {"r", w.r},
              {"n", w.n},
              {"reconstruction_error", w.reconstruction_error},
              {"phi_branch_plus", w.phi[0]},
              {"phi_branch_minus", w.phi[1]},
              {"phi_expected_plus", w.phi_expected[0]},
              {"phi_expected_minus", w.phi_expected[1]},
              {"antisymmetric", w.antisymmetric},
              {"time_average", matrix_to_json(w.time_average)},
              {"time_average_error", w.time_average_error},
              {"psi0", w.psi0},
              {"psi0_error", w.psi0_error},
              {"ground_branch_value", w.ground_branch_value},
              {"passed", w.passed}};
}

std::string pauli_walkthrough_to_csv(const PauliWalkthrough& w) {
  std::ostringstream os;
  os << "quantity,value\n"
     << "r0," << format_double(w.r0) << '\n'
     << "r," << format_double(w.r) << '\n'
     << "n1," << format_double(w.n[0]) << '\n'
     << "n2," << format_double(w.n[1]) << '\n'
     << "n3," << format_double(w.n[2]) << '\n'
     << "phi_plus," << format_double(w.phi[0]) << '\n'
     << "phi_minus," << format_double(w.phi[1]) << '\n'
     << "psi0," << format_double(w.psi0) << '\n'
     << "ground_branch_value," << format_double(w.ground_branch_value) << '\n'
     << "passed," << (w.passed ? 1 : 0) << '\n';
  return os.str();
}

Json gns_to_json(const GnsRepresentation& rep, const RepresentationReport& report) {
  Json images = Json::array();
  const Eigen::Index n = rep.algebra_dim();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(n, n);
      unit(i, j) = 1.0;
      images.push_back(Json{{"unit", Json::array({i, j})}, {"rep", matrix_to_json(rep.rep_map(unit))}});
    }
  }
  return Json{{"experiment", "gns"},
              {"algebra_dim", n},
              {"rep_dim", rep.rep_dim()},
              {"weight", matrix_to_json(rep.weight())},
              {"cyclic_vector", vector_to_json(rep.cyclic_vector())},
              {"unit_images", images},
              {"verification", Json{{"trials", report.trials},
                                    {"violations", report.violations},
                                    {"max_homomorphism_residual", report.max_homomorphism_residual},
                                    {"max_adjoint_residual", report.max_adjoint_residual},
                                    {"max_state_residual", report.max_state_residual},
                                    {"max_action_residual", report.max_action_residual},
                                    {"max_inner_product_residual", report.max_inner_product_residual}}}};
}

std::string gns_to_csv(const GnsRepresentation& rep, const RepresentationReport& report) {
  std::ostringstream os;
  os << "algebra_dim,rep_dim,trials,violations\n"
     << rep.algebra_dim() << ',' << rep.rep_dim() << ',' << report.trials << ',' << report.violations << '\n';
  return os.str();
}

}  // namespace cqm::io

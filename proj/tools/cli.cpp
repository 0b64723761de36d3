#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "cqm/dynamics.hpp"
#include "cqm/error.hpp"
#include "cqm/experiments.hpp"
#include "cqm/gns.hpp"
#include "cqm/io.hpp"
#include "cqm/oscillator.hpp"
#include "cqm/rng.hpp"

namespace cqm::cli {

namespace {

using io::Json;

struct Common {
  std::string format = "json";
  std::string output;
  std::string config;
  std::optional<unsigned long long> seed;
};

struct Output {
  Json json;
  std::string csv;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--output", common.output, "Also write the report to this path");
  sub->add_option("--config", common.config, "JSON file of option values; flags override it");
  sub->add_option("--seed", common.seed, "RNG seed (fallback: CQM_SEED, then 42)");
}

unsigned long long resolve_seed(const Common& common) {
  if (common.seed) return *common.seed;
  if (const char* env = std::getenv("CQM_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') throw UsageError("CQM_SEED is not an unsigned integer");
    return value;
  }
  return kDefaultSeed;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
    if (used != item.size()) throw UsageError("not a number: '" + item + "'");
    out.push_back(value);
  }
  return out;
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return io::format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw UsageError("unsupported config value " + v.dump());
}

// Appends config-file values for options not given on the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App& app) {
  if (args.empty()) return args;
  CLI::App* sub = app.get_subcommand_no_throw(args.front());
  if (sub == nullptr) return args;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const Json cfg = io::parse_file(path);
  if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  std::vector<std::string> merged = args;
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string flag = "--" + it.key();
    if (it.key() == "config" || sub->get_option_no_throw(flag) == nullptr) {
      throw UsageError("unknown config key '" + it.key() + "' for subcommand " + args.front());
    }
    const bool given = std::any_of(args.begin() + 1, args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    std::string value;
    if (it.value().is_array()) {
      for (std::size_t i = 0; i < it.value().size(); ++i) value += (i ? "," : "") + scalar_text(it.value()[i]);
    } else {
      value = scalar_text(it.value());
    }
    merged.push_back(flag + "=" + value);
  }
  return merged;
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

// ------------------------------------------------------------ subcommands

struct ChshArgs {
  double a = 0.0;
  double a_prime = std::numbers::pi / 4.0;
  double b = std::numbers::pi / 8.0;
  double b_prime = 3.0 * std::numbers::pi / 8.0;
  unsigned long long trials = 1'000'000;
  std::string model = "sign-of-dot";
};

void add_angles(CLI::App* sub, ChshArgs& args) {
  sub->add_option("--a", args.a, "Alice setting a (radians)");
  sub->add_option("--a-prime", args.a_prime, "Alice setting a' (radians)");
  sub->add_option("--b", args.b, "Bob setting b (radians)");
  sub->add_option("--b-prime", args.b_prime, "Bob setting b' (radians)");
  sub->add_option("--trials", args.trials, "Trials per setting")->check(CLI::PositiveNumber);
}

CHSHConfig chsh_config(const ChshArgs& args, unsigned long long seed) {
  CHSHConfig cfg;
  cfg.a = args.a;
  cfg.a_prime = args.a_prime;
  cfg.b = args.b;
  cfg.b_prime = args.b_prime;
  cfg.trials = args.trials;
  cfg.seed = seed;
  return cfg;
}

Output run_chsh(const ChshArgs& args, unsigned long long seed) {
  const CHSHConfig cfg = chsh_config(args, seed);
  const CHSHReport report = chsh_run(cfg);
  return {io::chsh_report_to_json(cfg, report), io::chsh_report_to_csv(report)};
}

Output run_chsh_classical(const ChshArgs& args, unsigned long long seed) {
  const CHSHConfig cfg = chsh_config(args, seed);
  HiddenVariableModel model = HiddenVariableModel::SignOfDot;
  if (args.model == "constant") model = HiddenVariableModel::Constant;
  const ClassicalReport report = classical_chsh_baseline(cfg, seed, args.trials, model);
  return {io::classical_report_to_json(report), io::classical_report_to_csv(report)};
}

struct KsArgs {
  std::string instance = "18ray";
  unsigned long long witness_cap = 1ULL << 20;
};

Output run_ks(const KsArgs& args) {
  const KSInstance instance =
      args.instance == "18ray" ? builtin_18ray() : io::ks_instance_from_json(io::parse_file(args.instance));
  const KSResult result = ks_check(instance, args.witness_cap);
  Json json = io::ks_result_to_json(result, instance);
  json["instance"] = args.instance;
  return {json, io::ks_result_to_csv(result)};
}

struct PauliArgs {
  double a = 2.0;
  double b_re = 1.0;
  double b_im = 0.0;
  double d = 0.0;
  double e0 = 1.0;
};

Output run_pauli(const PauliArgs& args) {
  ComplexMatrix m(2, 2);
  m << args.a, Complex(args.b_re, args.b_im), Complex(args.b_re, -args.b_im), args.d;
  const PauliWalkthrough w = pauli_walkthrough(m, args.e0);
  return {io::pauli_walkthrough_to_json(w), io::pauli_walkthrough_to_csv(w)};
}

struct OscillatorArgs {
  int levels = 40;
  double nu = 1.0;
  std::string times;
  int order = 4;
  double tol = 1e-10;
};

Output run_oscillator(const OscillatorArgs& args, unsigned long long seed) {
  std::vector<double> times = parse_list(args.times);
  if (args.times.empty()) {
    if (args.order < 0) throw UsageError("--order must be nonnegative");
    const CounterRng rng(seed, 0x6f7363ULL);
    for (int i = 0; i < args.order; ++i) times.push_back((6.0 * rng.uniform(static_cast<std::uint64_t>(i)) - 3.0) / args.nu);
  }
  const GreenRequest req{times, build_truncation(args.levels, args.nu)};
  const Complex wick = green_wick(req);
  const Complex op = green_operator(req, args.tol);
  const double relative_gap = std::abs(wick - op) / std::max(std::abs(op), 1e-300);
  Json json{{"times", times},
            {"wick_value", complex_json(wick)},
            {"operator_value", complex_json(op)},
            {"N", args.levels},
            {"nu", args.nu},
            {"relative_gap", relative_gap}};
  std::ostringstream csv;
  csv << "order,wick_re,wick_im,operator_re,operator_im,N,relative_gap\n"
      << times.size() << ',' << io::format_double(wick.real()) << ',' << io::format_double(wick.imag()) << ','
      << io::format_double(op.real()) << ',' << io::format_double(op.imag()) << ',' << args.levels << ','
      << io::format_double(relative_gap) << '\n';
  return {json, csv.str()};
}

struct GnsArgs {
  std::string weight;
  std::string state = "ground-example";
  int dim = 2;
  int trials = 200;
  double rank_tol = kDefaultRankTol;
};

Output run_gns(const GnsArgs& args, unsigned long long seed) {
  ComplexMatrix weight;
  if (!args.weight.empty()) {
    weight = io::matrix_from_json(io::parse_file(args.weight));
  } else if (args.state == "ground-example") {
    weight = ComplexMatrix::Zero(2, 2);
    weight(1, 1) = 1.0;
  } else if (args.state == "tracial") {
    if (args.dim < 1) throw UsageError("--dim must be positive");
    weight = ComplexMatrix::Identity(args.dim, args.dim) / static_cast<double>(args.dim);
  } else {
    throw UsageError("unknown --state '" + args.state + "' (ground-example | tracial)");
  }
  const GnsRepresentation rep = gns_construct(weight, args.rank_tol);
  const RepresentationReport report = verify_representation(rep, args.trials, seed);
  return {io::gns_to_json(rep, report), io::gns_to_csv(rep, report)};
}

struct FamilyArgs {
  std::string family;
  std::string prep;
  unsigned long long trials = 100'000;
  unsigned threads = 1;
  double tol = kDefaultCommutationTol;
};

Output run_contexts(const FamilyArgs& args) {
  const Json j = io::parse_file(args.family);
  const ObservableFamily family = io::family_from_json(j);
  const std::vector<Context> contexts = maximal_contexts(family, j.value("tol", args.tol));
  std::ostringstream csv;
  csv << "context_id,dim,maximal_within_family,sources\n";
  for (const Context& c : contexts) {
    std::string sources;
    for (std::size_t i = 0; i < c.source_observables.size(); ++i) sources += (i ? ";" : "") + c.source_observables[i];
    csv << c.id << ',' << c.dim() << ',' << (c.maximal_within_family ? 1 : 0) << ',' << sources << '\n';
  }
  return {Json{{"command", "contexts"}, {"count", contexts.size()}, {"contexts", io::contexts_to_json(contexts)}},
          csv.str()};
}

Output run_sample(const FamilyArgs& args, unsigned long long seed) {
  if (args.prep.empty()) throw UsageError("--prep is required");
  const Json j = io::parse_file(args.family);
  const ObservableFamily family = io::family_from_json(j);
  const std::vector<Context> contexts = maximal_contexts(family, j.value("tol", args.tol));
  const QuantumState prep = QuantumState::from_vector("prep", io::vector_from_json(io::parse_file(args.prep)));
  if (prep.dim() != family.dim()) throw Error(ErrorCode::DimMismatch, "prep dimension differs from family");
  Json samples = Json::array();
  std::vector<SampleSet> sets;
  for (const Context& ctx : contexts) {
    const SampleSet s = sample(MeasurementConfig{prep, ctx, args.trials, seed}, args.threads);
    Json entry = io::sample_set_to_json(s);
    entry["born_weights"] = born_weights(prep, ctx);
    entry["sources"] = ctx.source_observables;
    samples.push_back(entry);
    sets.push_back(s);
  }
  return {Json{{"command", "sample"}, {"trials", args.trials}, {"seed", seed}, {"samples", samples}},
          io::sample_sets_to_csv(sets)};
}

void emit_error(std::ostream& err, std::string_view code, const std::string& message) {
  err << io::dump(Json{{"error", std::string(code)}, {"message", message}}, 0) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contextual quantum-mechanics simulator"};
  app.require_subcommand(1);

  Common common;
  ChshArgs chsh;
  ChshArgs classical;
  KsArgs ks;
  PauliArgs pauli;
  OscillatorArgs osc;
  GnsArgs gns;
  FamilyArgs family;

  auto* sub_chsh = app.add_subcommand("chsh", "CHSH experiment with contextual sampling");
  add_angles(sub_chsh, chsh);
  auto* sub_classical = app.add_subcommand("chsh-classical", "Noncontextual hidden-variable CHSH baseline");
  add_angles(sub_classical, classical);
  sub_classical->add_option("--model", classical.model, "Hidden-variable model")
      ->check(CLI::IsMember({"sign-of-dot", "constant"}));
  auto* sub_ks = app.add_subcommand("ks", "Kochen-Specker colorability check");
  sub_ks->add_option("--instance", ks.instance, "Instance file or builtin '18ray'");
  sub_ks->add_option("--witness-cap", ks.witness_cap, "Stop counting colorings after this many");
  auto* sub_pauli = app.add_subcommand("pauli-demo", "Two-level walkthrough with H = E0 tau_3");
  sub_pauli->add_option("--a", pauli.a, "A(0,0)");
  sub_pauli->add_option("--b-re", pauli.b_re, "Re A(0,1)");
  sub_pauli->add_option("--b-im", pauli.b_im, "Im A(0,1)");
  sub_pauli->add_option("--d", pauli.d, "A(1,1)");
  sub_pauli->add_option("--e0", pauli.e0, "Energy scale E0");
  auto* sub_osc = app.add_subcommand("oscillator", "Green functions: Wick pairing vs truncated operators");
  sub_osc->add_option("--N", osc.levels, "Fock truncation levels")->check(CLI::Range(2, 4096));
  sub_osc->add_option("--nu", osc.nu, "Frequency")->check(CLI::PositiveNumber);
  sub_osc->add_option("--times", osc.times, "Comma-separated times (use --times=... for leading minus)");
  sub_osc->add_option("--order", osc.order, "Number of random times when --times is absent");
  sub_osc->add_option("--tol", osc.tol, "Truncation stability tolerance");
  auto* sub_gns = app.add_subcommand("gns", "GNS representation of a state on the matrix algebra");
  sub_gns->add_option("--weight", gns.weight, "Matrix JSON of the density weight");
  sub_gns->add_option("--state", gns.state, "Builtin state when --weight is absent");
  sub_gns->add_option("--dim", gns.dim, "Dimension for the tracial builtin");
  sub_gns->add_option("--trials", gns.trials, "Random verification pairs");
  sub_gns->add_option("--rank-tol", gns.rank_tol, "Relative null-space threshold");
  auto* sub_sample = app.add_subcommand("sample", "Born sampling in every context of a family");
  sub_sample->add_option("--family", family.family, "Observable family JSON")->required();
  sub_sample->add_option("--prep", family.prep, "Preparation vector JSON");
  sub_sample->add_option("--trials", family.trials, "Trials per context")->check(CLI::PositiveNumber);
  sub_sample->add_option("--threads", family.threads, "Worker threads (output is independent of this)");
  sub_sample->add_option("--tol", family.tol, "Commutation tolerance");
  auto* sub_contexts = app.add_subcommand("contexts", "Maximal contexts of an observable family");
  sub_contexts->add_option("--family", family.family, "Observable family JSON")->required();
  sub_contexts->add_option("--tol", family.tol, "Commutation tolerance");
  for (auto* sub : {sub_chsh, sub_classical, sub_ks, sub_pauli, sub_osc, sub_gns, sub_sample, sub_contexts}) {
    add_common(sub, common);
  }

  try {
    std::vector<std::string> reversed = merge_config(args, app);
    std::reverse(reversed.begin(), reversed.end());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "UsageError", e.what());
    return 1;
  } catch (const UsageError& e) {
    emit_error(err, "UsageError", e.what());
    return 1;
  } catch (const Error& e) {
    emit_error(err, to_string(e.code()), e.what());
    return 1;
  }

  try {
    const unsigned long long seed = resolve_seed(common);
    Output result;
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "chsh") result = run_chsh(chsh, seed);
    else if (name == "chsh-classical") result = run_chsh_classical(classical, seed);
    else if (name == "ks") result = run_ks(ks);
    else if (name == "pauli-demo") result = run_pauli(pauli);
    else if (name == "oscillator") result = run_oscillator(osc, seed);
    else if (name == "gns") result = run_gns(gns, seed);
    else if (name == "sample") result = run_sample(family, seed);
    else result = run_contexts(family);

    const std::string text = common.format == "csv" ? result.csv : io::dump(result.json) + "\n";
    out << text;
    if (!common.output.empty()) {
      std::ofstream file(common.output, std::ios::binary);
      if (!file) throw UsageError("cannot write " + common.output);
      file << text;
    }
    return 0;
  } catch (const UsageError& e) {
    emit_error(err, "UsageError", e.what());
    return 1;
  } catch (const Error& e) {
    emit_error(err, to_string(e.code()), e.what());
    return is_numerical_failure(e.code()) ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    emit_error(err, "InvalidArgument", e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error(err, "InternalError", e.what());
    return 2;
  }
}

}  // namespace cqm::cli

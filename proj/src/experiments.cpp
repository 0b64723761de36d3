#include "cqm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cqm/dynamics.hpp"
#include "cqm/error.hpp"
#include "cqm/rng.hpp"

namespace cqm {

// ---------------------------------------------------------------- CHSH

std::array<double, 3> measurement_direction(double setting) {
  return {std::sin(2.0 * setting), 0.0, std::cos(2.0 * setting)};
}

double setting_angle(double a, double b) {
  const auto u = measurement_direction(a);
  const auto v = measurement_direction(b);
  const double c = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return std::acos(std::clamp(c, -1.0, 1.0));
}

ComplexMatrix spin_half_observable(double setting) {
  const auto n = measurement_direction(setting);
  return 0.5 * pauli_direction(n[0], n[1], n[2]);
}

QuantumState singlet_state() {
  const ComplexMatrix xx = kron(pauli(1), pauli(1));
  const ComplexMatrix zz = kron(pauli(3), pauli(3));
  const Observable oxx = Observable::from_matrix(xx);
  const Observable ozz = Observable::from_matrix(zz);
  const Context bell = joint_context({oxx, ozz}, kDefaultCommutationTol, {"XX", "ZZ"});
  const auto vx = restrict_to(oxx, bell);
  const auto vz = restrict_to(ozz, bell);
  for (std::size_t k = 0; k < vx.size(); ++k) {
    if (vx[k] < 0.0 && vz[k] < 0.0) return QuantumState::from_context(bell, static_cast<int>(k));
  }
  throw Error(ErrorCode::ConvergenceFailure, "singlet_state: singlet not found in the Bell context");
}

Context chsh_context(double a, double b) {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const Observable alice = Observable::from_matrix(kron(spin_half_observable(a), id));
  const Observable bob = Observable::from_matrix(kron(id, spin_half_observable(b)));
  return joint_context({alice, bob}, kDefaultCommutationTol, {"A(a)", "B(b)"});
}

namespace {

ComplexMatrix correlation_observable(double a, double b) {
  return kron(spin_half_observable(a), spin_half_observable(b));
}

}  // namespace

double chsh_correlation_exact(double a, double b) {
  static const StateFunctional singlet = StateFunctional::from_state(singlet_state());
  return quantum_average(singlet, correlation_observable(a, b)).real();
}

double chsh_combination(double e_ab, double e_abp, double e_apb, double e_apbp) {
  return std::abs(e_ab - e_abp) + std::abs(e_apb + e_apbp);
}

CHSHReport chsh_run(const CHSHConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidArgument, "chsh_run: trials must be >= 1");
  const QuantumState singlet = singlet_state();
  const std::array<std::pair<double, double>, 4> pairs{{{cfg.a, cfg.b},
                                                        {cfg.a, cfg.b_prime},
                                                        {cfg.a_prime, cfg.b},
                                                        {cfg.a_prime, cfg.b_prime}}};
  const std::array<const char*, 4> labels{"ab", "ab'", "a'b", "a'b'"};

  CHSHReport report;
  double variance = 0.0;
  for (std::size_t s = 0; s < 4; ++s) {
    CHSHSetting& setting = report.settings[s];
    const auto [alice, bob] = pairs[s];
    const Context ctx = chsh_context(alice, bob);
    setting.label = labels[s];
    setting.alice = alice;
    setting.bob = bob;
    setting.theta = setting_angle(alice, bob);
    setting.context_id = ctx.id;
    // Each setting is its own device: fresh, disjoint sample.
    const MeasurementConfig config{singlet, ctx, cfg.trials, CounterRng::mix(cfg.seed + 0x1000 * (s + 1))};
    setting.samples = sample(config);
    const Observable product = Observable::from_matrix(correlation_observable(alice, bob));
    setting.e_hat = empirical_mean(setting.samples, product, ctx);
    setting.e_exact = chsh_correlation_exact(alice, bob);
    // Outcomes of A_a B_b are +-1/4, so E[x^2] = 1/16.
    const double n = static_cast<double>(cfg.trials);
    const double var = std::max(1.0 / 16.0 - setting.e_hat * setting.e_hat, 1.0 / (16.0 * n));
    setting.stderr_ = std::sqrt(var / n);
    variance += setting.stderr_ * setting.stderr_;
  }
  const auto& st = report.settings;
  report.i_hat = chsh_combination(st[0].e_hat, st[1].e_hat, st[2].e_hat, st[3].e_hat);
  report.i_exact = chsh_combination(st[0].e_exact, st[1].e_exact, st[2].e_exact, st[3].e_exact);
  report.i_stderr = std::sqrt(variance);
  return report;
}

bool pointwise_dichotomy(double b, double b_prime) {
  const double minus = std::abs(b - b_prime);
  const double plus = std::abs(b + b_prime);
  return (minus == 0.0 && plus == 1.0) || (minus == 1.0 && plus == 0.0);
}

ClassicalReport classical_chsh_baseline(const CHSHConfig& angles, std::uint64_t seed, std::uint64_t trials,
                                        HiddenVariableModel model) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "classical_chsh_baseline: trials must be >= 1");
  const CounterRng rng(seed, 0x636c6173ULL);
  const std::array<double, 2> alice{angles.a, angles.a_prime};
  const std::array<double, 2> bob{angles.b, angles.b_prime};
  const std::uint64_t fixed = rng.bits(~0ULL);

  auto outcomes = [&](std::uint64_t t, std::array<double, 2>& a, std::array<double, 2>& b) {
    if (model == HiddenVariableModel::Constant) {
      for (int i = 0; i < 2; ++i) {
        a[i] = ((fixed >> i) & 1U) ? 0.5 : -0.5;
        b[i] = ((fixed >> (2 + i)) & 1U) ? 0.5 : -0.5;
      }
      return;
    }
    const double lambda = 2.0 * std::numbers::pi * rng.uniform(t);
    for (int i = 0; i < 2; ++i) {
      a[i] = std::cos(lambda - 2.0 * alice[i]) >= 0.0 ? 0.5 : -0.5;
      b[i] = std::cos(lambda - 2.0 * bob[i]) >= 0.0 ? -0.5 : 0.5;
    }
  };

  ClassicalReport report;
  report.trials = trials;
  report.seed = seed;
  report.model = model;
  // Every setting is evaluated on the same lambda.
  std::array<double, 4> sums{};
  std::array<double, 2> a{};
  std::array<double, 2> b{};
  for (std::uint64_t t = 0; t < trials; ++t) {
    outcomes(t, a, b);
    sums[0] += a[0] * b[0];
    sums[1] += a[0] * b[1];
    sums[2] += a[1] * b[0];
    sums[3] += a[1] * b[1];
    const double combined = 0.5 * (std::abs(b[0] - b[1]) + std::abs(b[0] + b[1]));
    if (!pointwise_dichotomy(b[0], b[1]) || combined != 0.5) ++report.dichotomy_violations;
  }
  const double n = static_cast<double>(trials);
  for (int i = 0; i < 4; ++i) report.e_hat[i] = sums[i] / n;
  // Sums are exact multiples of 1/4, so combining them before dividing keeps I_hat exact.
  const double d1 = sums[0] - sums[1];
  const double d2 = sums[2] + sums[3];
  report.i_hat = (std::abs(d1) + std::abs(d2)) / n;

  // Standard error of I via the per-lambda summand Y = s1 (x1 - x2) + s2 (x3 + x4).
  const double s1 = d1 >= 0.0 ? 1.0 : -1.0;
  const double s2 = d2 >= 0.0 ? 1.0 : -1.0;
  double sum_sq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    outcomes(t, a, b);
    const double y = s1 * (a[0] * b[0] - a[0] * b[1]) + s2 * (a[1] * b[0] + a[1] * b[1]);
    sum_sq += (y - report.i_hat) * (y - report.i_hat);
  }
  report.i_stderr = trials > 1 ? std::sqrt(sum_sq / (n - 1.0) / n) : 0.0;
  report.within_bound = report.i_hat <= 0.5 + 3.0 * report.i_stderr;
  return report;
}

// -------------------------------------------------------- Kochen-Specker

KSInstance KSInstance::make(Eigen::Index dim, std::vector<ComplexVector> rays,
                            std::vector<std::vector<int>> contexts) {
  if (dim < 1) throw Error(ErrorCode::InvalidInstance, "KS instance: dim must be positive");
  for (ComplexVector& ray : rays) {
    if (ray.size() != dim) throw Error(ErrorCode::InvalidInstance, "KS instance: ray has wrong dimension");
    if (!ray.allFinite() || ray.norm() == 0.0) throw Error(ErrorCode::InvalidInstance, "KS instance: invalid ray");
    ray /= ray.norm();
  }
  const int count = static_cast<int>(rays.size());
  for (const auto& ctx : contexts) {
    if (static_cast<Eigen::Index>(ctx.size()) != dim) {
      throw Error(ErrorCode::InvalidInstance, "KS instance: context does not span (size != dim)");
    }
    for (int r : ctx)
      if (r < 0 || r >= count) throw Error(ErrorCode::InvalidInstance, "KS instance: ray index out of range");
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      for (std::size_t j = i + 1; j < ctx.size(); ++j) {
        const double overlap = std::abs(rays[ctx[i]].dot(rays[ctx[j]]));
        if (ctx[i] == ctx[j] || overlap > 1e-10) {
          throw Error(ErrorCode::InvalidInstance, "KS instance: context rays are not mutually orthogonal");
        }
      }
    }
  }
  return KSInstance{dim, std::move(rays), std::move(contexts)};
}

KSInstance builtin_18ray() {
  const std::vector<std::array<double, 4>> raw{
      {0, 0, 0, 1},  {0, 0, 1, 0},  {1, 1, 0, 0},  {1, -1, 0, 0}, {0, 1, 0, 0},  {1, 0, 1, 0},
      {1, 0, -1, 0}, {1, -1, 1, -1}, {1, -1, -1, 1}, {0, 0, 1, 1},  {1, 1, 1, 1},  {0, 1, 0, -1},
      {1, 0, 0, 1},  {1, 0, 0, -1}, {0, 1, -1, 0}, {1, 1, -1, 1}, {1, 1, 1, -1}, {-1, 1, 1, 1}};
  std::vector<ComplexVector> rays;
  for (const auto& r : raw) {
    ComplexVector v(4);
    for (int i = 0; i < 4; ++i) v(i) = r[static_cast<std::size_t>(i)];
    rays.push_back(v);
  }
  std::vector<std::vector<int>> contexts{
      {0, 1, 2, 3},   {0, 4, 5, 6},    {7, 8, 2, 9},     {7, 10, 6, 11},  {1, 4, 12, 13},
      {8, 10, 13, 14}, {15, 16, 3, 9}, {15, 17, 5, 11}, {16, 17, 12, 14}};
  return KSInstance::make(4, std::move(rays), std::move(contexts));
}

namespace {

struct ColoringSearch {
  const KSInstance& instance;
  std::uint64_t cap;
  std::vector<int> value;  // -1 unassigned
  KSResult result;

  void run(std::size_t c) {
    ++result.nodes;
    if (result.witness_count >= cap) return;
    if (c == instance.contexts.size()) {
      if (result.witness_count == 0) {
        result.witness.assign(value.size(), 0);
        for (std::size_t i = 0; i < value.size(); ++i) result.witness[i] = value[i] == 1 ? 1 : 0;
      }
      ++result.witness_count;
      return;
    }
    const auto& ctx = instance.contexts[c];
    int ones = 0;
    std::vector<int> open;
    for (int r : ctx) {
      if (value[r] == 1) ++ones;
      if (value[r] == -1) open.push_back(r);
    }
    if (ones > 1) return;
    if (ones == 1) {
      for (int r : open) value[r] = 0;
      run(c + 1);
      for (int r : open) value[r] = -1;
      return;
    }
    for (int chosen : open) {
      for (int r : open) value[r] = (r == chosen) ? 1 : 0;
      run(c + 1);
    }
    for (int r : open) value[r] = -1;
  }
};

}  // namespace

KSResult ks_check(const KSInstance& instance, std::uint64_t witness_cap) {
  ColoringSearch search{instance, std::max<std::uint64_t>(1, witness_cap),
                        std::vector<int>(instance.rays.size(), -1), {}};
  search.run(0);
  search.result.colorable = search.result.witness_count > 0;
  return search.result;
}

// ------------------------------------------------------ Pauli walkthrough

PauliWalkthrough pauli_walkthrough(const ComplexMatrix& matrix, double e0) {
  const Observable a = Observable::from_matrix(matrix);
  if (a.dim() != 2) throw Error(ErrorCode::DimMismatch, "pauli_walkthrough: expected a 2x2 matrix");
  if (!(e0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "pauli_walkthrough: E0 must be positive");
  PauliWalkthrough w;
  w.a = a.matrix();
  const double av = w.a(0, 0).real();
  const double dv = w.a(1, 1).real();
  const Complex bv = w.a(0, 1);
  w.r0 = (av + dv) / 2.0;
  w.r = std::sqrt((av - dv) * (av - dv) / 4.0 + std::norm(bv));
  w.n = w.r > 0.0 ? std::array<double, 3>{bv.real() / w.r + 0.0, -bv.imag() / w.r + 0.0, (av - dv) / (2.0 * w.r) + 0.0}
                  : std::array<double, 3>{0.0, 0.0, 1.0};
  const ComplexMatrix tau = pauli_direction(w.n[0], w.n[1], w.n[2]);
  w.reconstruction_error = max_abs_entry(w.a - (w.r0 * pauli(0) + w.r * tau));

  const Observable tau_n = Observable::from_matrix(tau);
  const Observable tau_minus = Observable::from_matrix(-tau);
  const Context ctx = joint_context({tau_n}, kDefaultCommutationTol, {"tau(n)"});
  const Context ctx_minus = joint_context({tau_minus}, kDefaultCommutationTol, {"tau(-n)"});
  const auto signs = restrict_to(tau_n, ctx);
  w.antisymmetric = ctx.id == ctx_minus.id;
  double worst = w.reconstruction_error;
  for (int branch = 0; branch < 2; ++branch) {
    const double f = branch == 0 ? 1.0 : -1.0;
    const int k = std::abs(signs[0] - f) < std::abs(signs[1] - f) ? 0 : 1;
    const PhysicalState phi(2, {{ctx.id, k}});
    w.phi[branch] = evaluate(phi, a, ctx);
    w.phi_expected[branch] = w.r0 + w.r * f;
    worst = std::max(worst, std::abs(w.phi[branch] - w.phi_expected[branch]));
    w.antisymmetric = w.antisymmetric && evaluate(phi, tau_minus, ctx) == -evaluate(phi, tau_n, ctx);
  }

  const Hamiltonian h(Observable::from_matrix(e0 * pauli(3)));
  const Observable a_bar = time_average(a, h);
  w.time_average = a_bar.matrix();
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = av;
  expected(1, 1) = dv;
  w.time_average_error = max_abs_entry(a_bar.matrix() - expected);
  w.psi0 = quantum_average(ground_functional(h), w.a).real();
  w.psi0_error = std::abs(w.psi0 - dv);

  // Ground branch f(z) = -1 in the tau_3 context.
  const Observable tau3 = Observable::from_matrix(pauli(3));
  const Context zctx = joint_context({tau3}, kDefaultCommutationTol, {"tau3"});
  const auto zvals = restrict_to(tau3, zctx);
  const PhysicalState ground(2, {{zctx.id, zvals[0] < 0.0 ? 0 : 1}});
  w.ground_branch_value = evaluate(ground, a_bar, zctx);
  const ErgodicityReport erg = ergodicity_check(h, a, ground, zctx, 1e-10);

  worst = std::max({worst, w.time_average_error, w.psi0_error, std::abs(w.ground_branch_value - dv)});
  const double scale = std::max(1.0, cstar_norm(w.a));
  w.passed = worst <= 1e-12 * scale && w.antisymmetric && erg.passed;
  return w;
}

PauliWalkthrough pauli_walkthrough() {
  ComplexMatrix a(2, 2);
  a << 2, 1, 1, 0;
  return pauli_walkthrough(a);
}

}  // namespace cqm

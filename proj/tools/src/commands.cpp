#include "confdirac_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <mutex>
#include <sstream>

#include "confdirac/flatmodel.hpp"
#include "confdirac/functional.hpp"
#include "confdirac/green.hpp"
#include "confdirac/invariant.hpp"
#include "confdirac/parallel.hpp"

namespace confdirac::cli {

namespace {

std::vector<Branch> branches(const RunConfig& c) {
  if (c.branch == "plus") return {Branch::Plus};
  if (c.branch == "minus") return {Branch::Minus};
  return {Branch::Plus, Branch::Minus};
}

std::string prefix(Branch b) { return b == Branch::Plus ? "plus." : "minus."; }

Eigen::VectorXd pole_of(const RunConfig& c) {
  if (c.pole.empty()) return Eigen::VectorXd::Constant(c.n, 0.5);
  return Eigen::Map<const Eigen::VectorXd>(c.pole.data(), c.n);
}

CutoffShape cutoff_of(const RunConfig& c) {
  return c.cutoff == "cos2" ? CutoffShape::CosineSquared : CutoffShape::Smoothstep;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void absorb(ResultRecord& into, const ResultRecord& part, const std::string& tag) {
  for (const auto& [k, v] : part.scalars) into.scalars[tag + "." + k] = v;
  for (const auto& [k, v] : part.text) into.text[tag + "." + k] = v;
  for (const auto& c : part.checks) into.add_check(tag + "." + c.name, c.pass, c.defect, c.tolerance);
}

}  // namespace

ResultRecord cmd_spectrum(const RunConfig& c) {
  ResultRecord r;
  const CliffordRep rep(c.n);
  const SpinStructure delta = SpinStructure::parse(c.delta);
  const auto exact = spectrum_exact(rep, delta, c.modes);
  const auto diag = spectrum_by_diagonalization(rep, delta, c.modes);

  double defect = 0.0;
  r.table.columns = {"index", "exact", "diagonalized", "relative_defect"};
  for (std::size_t i = 0; i < exact.eigenvalues.size(); ++i) {
    const double e = exact.eigenvalues[i], d = diag.eigenvalues.at(i);
    const double rel = std::abs(e - d) / std::max(1.0, std::abs(e));
    defect = std::max(defect, rel);
    r.table.rows.push_back({static_cast<double>(i), e, d, rel});
  }
  r.scalars["eigenvalue_count"] = static_cast<double>(exact.eigenvalues.size());
  r.scalars["kernel_dimension"] = exact.kernel_dimension;
  r.scalars["lambda_1_plus"] = exact.lambda_1_plus;
  r.scalars["lambda_1_minus"] = exact.lambda_1_minus;
  r.scalars["oracle_defect"] = defect;
  r.add_check("mode_oracle", defect < c.tol.spectrum, defect, c.tol.spectrum);
  r.add_check("kernel_agreement", exact.kernel_dimension == diag.kernel_dimension,
              std::abs(exact.kernel_dimension - diag.kernel_dimension), 0.0);

  if (exact.kernel_dimension > 0) {
    r.text["status"] = "near-kernel";
    r.text["note"] = "D has a kernel for this spin structure; grid eigenvalues skipped";
    return r;
  }
  const Grid grid(c.n, c.grid);
  const auto ev = extreme_eigenvalues(ConformalDirac(rep, delta, LogConformalFactor(grid)), c.tol.eigen);
  const double dp = std::abs(ev.plus.value - exact.lambda_1_plus) / exact.lambda_1_plus;
  const double dm = std::abs(ev.minus.value - exact.lambda_1_minus) / std::abs(exact.lambda_1_minus);
  r.scalars["grid.lambda_1_plus"] = ev.plus.value;
  r.scalars["grid.lambda_1_minus"] = ev.minus.value;
  r.scalars["grid.iterations"] = ev.plus.iterations;
  r.add_check("grid_lambda_plus", dp <= c.tol.eigen, dp, c.tol.eigen);
  r.add_check("grid_lambda_minus", dm <= c.tol.eigen, dm, c.tol.eigen);
  r.text["status"] = "ok";
  return r;
}

ResultRecord cmd_sweep(const RunConfig& c) {
  ResultRecord r;
  const CliffordRep rep(c.n);
  const SpinStructure delta = SpinStructure::parse(c.delta);
  const double target = sphere_invariant(c.n);
  r.scalars["target"] = target;
  r.table.columns = {"branch", "epsilon", "rho", "resolution", "J", "excess", "sign"};

  for (Branch b : branches(c)) {
    TestSweepOptions o;
    o.family = c.family == "simple" ? TestFamily::Simple : TestFamily::ThreeZone;
    o.n = c.n;
    o.delta = delta;
    o.sign = b;
    o.epsilons = c.epsilons;
    o.cutoff = cutoff_of(c);
    o.convention = c.convention == "continuous" ? ZoneConvention::Continuous : ZoneConvention::AsDisplayed;
    o.route = c.route == "analytic" ? DiracRoute::Analytic : DiracRoute::Spectral;
    o.points_per_epsilon = c.points_per_epsilon;
    const auto s = test_spinor_sweep(rep, o);

    const std::string p = prefix(b);
    bool signs_ok = true;
    for (const auto& row : s.rows) {
      r.table.rows.push_back({static_cast<double>(sign_of(b)), row.epsilon, row.rho, static_cast<double>(row.resolution),
                              row.J, row.excess, static_cast<double>(row.sign)});
      signs_ok = signs_ok && row.sign == sign_of(b);
    }
    r.scalars[p + "decay_exponent"] = s.decay_exponent;
    r.scalars[p + "extrapolated_limit"] = s.extrapolated_limit;
    r.scalars[p + "monotone"] = s.monotone;
    r.scalars[p + "converged"] = s.converged;
    r.scalars[p + "min_J"] = s.rows.back().J;
    r.add_check(p + "sign_tag", signs_ok, signs_ok ? 0.0 : 1.0, 0.0);
    if (o.family == TestFamily::Simple) {
      r.add_check(p + "monotone", s.monotone, s.monotone ? 0.0 : 1.0, 0.0);
      const double rel = std::abs(s.extrapolated_limit / target - 1.0);
      r.add_check(p + "limit", s.converged && rel <= c.tol.limit, s.converged ? rel : INFINITY, c.tol.limit);
    } else {
      r.add_check(p + "decay_exponent", s.decay_exponent > c.tol.exponent, s.decay_exponent, c.tol.exponent);
      TestSpinorParams tp;
      tp.n = c.n;
      tp.epsilon = *std::min_element(c.epsilons.begin(), c.epsilons.end());
      tp.sign = b;
      tp.psi0 = Spinor::Unit(rep.spinor_dim(), 0);
      const GreenFunction green(rep, delta, Eigen::VectorXd::Constant(c.n, 0.5));
      const auto jumps = measure_zone_jumps(rep, tp, o.cutoff, green, o.convention);
      r.scalars[p + "jump_at_rho"] = jumps.at_rho / jumps.scale;
      r.scalars[p + "jump_at_two_rho"] = jumps.at_two_rho / jumps.scale;
    }
  }
  r.text["family"] = c.family;
  r.text["status"] = "ok";
  return r;
}

ResultRecord cmd_mass(const RunConfig& c) {
  ResultRecord r;
  const CliffordRep rep(c.n);
  std::vector<SpinStructure> structures;
  if (c.delta == "all") {
    for (unsigned mask = 1; mask < (1u << c.n); ++mask) structures.push_back(SpinStructure::from_mask(c.n, mask));
  } else {
    structures.push_back(SpinStructure::parse(c.delta));
  }
  MassOptions mo;
  mo.extrapolation_tol = c.tol.extrapolation;
  mo.hermiticity_tol = c.tol.hermiticity;
  mo.seed = c.seed;
  std::vector<MassEndomorphism> results(structures.size());
  const Eigen::VectorXd pole = pole_of(c);
  parallel_for(structures.size(), [&](std::size_t i) { results[i] = mass_endomorphism(rep, structures[i], pole, mo); });

  r.table.columns = {"structure", "eigen_index", "eigenvalue"};
  for (std::size_t i = 0; i < structures.size(); ++i) {
    const auto& m = results[i];
    const auto sym = symmetry_report(m.alpha, c.n);
    const std::string p = "delta(" + structures[i].to_string() + ").";
    const double nullity = std::max(m.alpha.norm(), m.raw.norm());
    r.scalars[p + "alpha_norm"] = m.alpha.norm();
    r.scalars[p + "raw_norm"] = m.raw.norm();
    r.scalars[p + "hermiticity_defect"] = m.hermiticity_defect;
    r.scalars[p + "extrapolation_error"] = m.extrapolation_error;
    r.scalars[p + "direction_spread"] = m.direction_spread;
    r.scalars[p + "pairing_defect"] = sym.pairing_defect;
    r.add_check(p + "nullity", nullity < c.tol.mass, nullity, c.tol.mass);
    r.add_check(p + "hermiticity", m.hermiticity_defect < c.tol.hermiticity, m.hermiticity_defect, c.tol.hermiticity);
    r.add_check(p + "direction_spread", m.direction_spread < c.tol.spread, m.direction_spread, c.tol.spread);
    if (sym.symmetry_expected)
      r.add_check(p + "symmetric_spectrum", sym.pairing_defect < c.tol.mass, sym.pairing_defect, c.tol.mass);
    for (Eigen::Index k = 0; k < m.eigenvalues.size(); ++k)
      r.table.rows.push_back({static_cast<double>(i), static_cast<double>(k), m.eigenvalues[k]});
  }
  r.text["status"] = "ok";
  return r;
}

ResultRecord cmd_minimize(const RunConfig& c) {
  ResultRecord r;
  const CliffordRep rep(c.n);
  const SpinStructure delta = SpinStructure::parse(c.delta);
  const ConformalSearchSpace space(c.n, c.max_frequency, c.bound);
  InvariantOptions io;
  io.resolution = c.grid;
  io.budget = c.budget;
  io.eigen_tol = c.tol.eigen;
  const double sphere = sphere_invariant(c.n);
  r.scalars["sphere_value"] = sphere;
  r.table.columns = {"branch", "step", "value"};

  for (Branch b : branches(c)) {
    const auto est = minimize(rep, delta, space, b, io);
    const std::string p = prefix(b);
    r.scalars[p + "value"] = est.value;
    r.scalars[p + "flat_value"] = est.flat_value;
    r.scalars[p + "evaluations"] = est.evaluations;
    r.scalars[p + "budget_exhausted"] = est.budget_exhausted;
    for (int j = 0; j < space.size(); ++j) r.scalars[p + "theta." + space.label(j)] = est.theta[j];
    double worst = 0.0, rise = 0.0;
    for (std::size_t k = 0; k < est.history.size(); ++k) {
      r.table.rows.push_back({static_cast<double>(sign_of(b)), static_cast<double>(k), est.history[k]});
      worst = std::max(worst, est.history[k]);
      if (k) rise = std::max(rise, est.history[k] - est.history[k - 1]);
    }
    r.add_check(p + "positive", est.value > 0.0, est.value, 0.0);
    r.add_check(p + "below_sphere", worst <= sphere + c.tol.inequality, worst - sphere, c.tol.inequality);
    r.add_check(p + "below_flat", est.value <= est.flat_value + 100.0 * c.tol.eigen, est.value - est.flat_value,
                100.0 * c.tol.eigen);
    r.add_check(p + "monotone_history", rise <= 0.0, rise, 0.0);
  }
  r.text["status"] = "ok";
  return r;
}

ResultRecord cmd_selfcheck(const RunConfig& c) {
  ResultRecord r;
  RunConfig small = c;
  small.n = 2;
  small.delta = "0.5,0";

  small.command = "spectrum";
  small.modes = 4;
  small.grid = 16;
  absorb(r, cmd_spectrum(small), "spectrum");

  small.command = "mass";
  absorb(r, cmd_mass(small), "mass");

  small.command = "sweep";
  small.family = "simple";
  small.branch = "plus";
  small.epsilons = {0.01, 0.005, 0.0025};
  absorb(r, cmd_sweep(small), "sweep");

  small.command = "minimize";
  small.budget = 20;
  absorb(r, cmd_minimize(small), "minimize");

  // J of a flat eigenspinor equals its eigenvalue
  {
    const CliffordRep rep(2);
    const Grid grid(2, 64);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cplx(0, 1) * rep.generator(0));
    GridSpinorField psi(grid, 2);
    for (Eigen::Index i = 0; i < grid.size(); ++i)
      psi.at(i) = std::exp(cplx(0, std::numbers::pi * grid.point(i)[0])) * es.eigenvectors().col(1);
    const double J = functional_J(psi, LogConformalFactor(grid), rep, SpinStructure({0.5, 0.0})).value;
    const double rel = std::abs(J / std::numbers::pi - 1.0);
    r.scalars["functional.eigenspinor_J"] = J;
    r.add_check("functional.eigenspinor", rel < c.tol.quadrature, rel, c.tol.quadrature);
  }

  r.table.columns = {"check", "pass", "defect", "tolerance"};
  for (std::size_t i = 0; i < r.checks.size(); ++i)
    r.table.rows.push_back({static_cast<double>(i), r.checks[i].pass ? 1.0 : 0.0, r.checks[i].defect,
                            r.checks[i].tolerance});
  r.text["status"] = "ok";
  return r;
}

RunOutcome run(const RunConfig& config) {
  RunOutcome out;
  ResultRecord& r = out.record;
  r.command = config.command;
  r.timestamp = utc_now();
  r.config_hash = config.hash();
  {
    std::istringstream in(config.canonical());
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find(" = ");
      r.config[line.substr(0, eq)] = line.substr(eq + 3);
    }
  }
  auto fail = [&](int code, const char* status, const std::exception& e) {
    r.text["status"] = status;
    r.text["error"] = e.what();
    out.exit_code = code;
  };
  try {
    config.validate();
    ResultRecord body;
    if (config.command == "spectrum") body = cmd_spectrum(config);
    else if (config.command == "sweep") body = cmd_sweep(config);
    else if (config.command == "mass") body = cmd_mass(config);
    else if (config.command == "minimize") body = cmd_minimize(config);
    else body = cmd_selfcheck(config);
    r.scalars = std::move(body.scalars);
    r.text = std::move(body.text);
    r.checks = std::move(body.checks);
    r.table = std::move(body.table);
    if (r.text["status"] == "near-kernel") out.exit_code = kExitNearKernel;
    else out.exit_code = r.passed() ? kExitPass : kExitCheckFailed;
  } catch (const ConfigError& e) {
    fail(kExitConfig, "config-error", e);
  } catch (const ChartSizeError& e) {
    fail(kExitConfig, "config-error", e);
  } catch (const DimensionError& e) {
    fail(kExitConfig, "config-error", e);
  } catch (const NearKernelError& e) {
    fail(kExitNearKernel, "near-kernel", e);
  } catch (const std::exception& e) {
    fail(kExitNumerical, "numerical-error", e);
  }
  return out;
}

}  // namespace confdirac::cli

#include "confdirac/functional.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "confdirac/flatmodel.hpp"
#include "confdirac/parallel.hpp"

namespace confdirac {

namespace {

constexpr double kPi = std::numbers::pi;

// out += (sum_a v_a G_a) psi, without temporaries.
template <class Out>
void add_clifford(const CliffordRep& rep, const double* v, const Spinor& psi, cplx scale, Out&& out) {
  for (int a = 0; a < rep.dimension(); ++a) {
    if (v[a] == 0.0) continue;
    out.noalias() += (scale * v[a]) * (rep.generator(a) * psi);
  }
}

// Chart offset y = x - p - L (nearest image) and the twist exp(2 pi i delta.L).
double chart_offset(const Eigen::VectorXd& x, const Eigen::VectorXd& p, const SpinStructure& delta,
                    Eigen::VectorXd& y) {
  y = x - p;
  double phase = 0.0;
  for (int a = 0; a < y.size(); ++a) {
    const double L = std::round(y[a]);
    y[a] -= L;
    phase += delta[a] * L;
  }
  return std::cos(2.0 * kPi * phase);
}

}  // namespace

FunctionalValue functional_J(const GridSpinorField& psi, const GridSpinorField& dirac_psi,
                             const LogConformalFactor& u, double tol) {
  if (!(psi.grid() == dirac_psi.grid()) || !(psi.grid() == u.grid()))
    throw std::invalid_argument("functional: grids differ");
  if (psi.spinor_dim() != dirac_psi.spinor_dim()) throw std::invalid_argument("functional: spinor sizes differ");
  const Grid& grid = psi.grid();
  const int n = grid.dimension();
  const double p = 2.0 * n / (n + 1.0);
  const double cell = std::pow(static_cast<double>(grid.resolution()), -n);

  double num = 0.0, pairing = 0.0, cs = 0.0, mass = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double w = std::exp(n * u.values()[i]) * cell;
    const auto a = psi.at(i);
    const auto b = dirac_psi.at(i);
    const double nb = b.norm();
    num += w * std::pow(nb, p);
    pairing += w * b.dot(a).real();
    cs += w * nb * a.norm();
    mass += w * a.squaredNorm();
  }
  if (!(mass > 0.0)) throw std::invalid_argument("functional: psi vanishes identically");
  if (std::abs(pairing) <= tol * cs || cs == 0.0)
    throw OrthogonalToDiracError("functional: test spinor is orthogonal to its Dirac image");

  FunctionalValue out;
  out.dirac_norm = num;
  out.pairing = pairing;
  out.sign = pairing > 0 ? 1 : -1;
  out.value = std::pow(num, (n + 1.0) / n) / std::abs(pairing);
  return out;
}

FunctionalValue functional_J(const GridSpinorField& psi, const LogConformalFactor& u, const CliffordRep& rep,
                             const SpinStructure& delta, double tol) {
  ConformalDirac D(rep, delta, u);
  return functional_J(psi, D.apply(psi), u, tol);
}

CutoffProfile::CutoffProfile(CutoffShape shape, double rho) : shape_(shape), rho_(rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("cutoff: rho must be positive");
}

double CutoffProfile::value(double r) const {
  if (r <= rho_) return 1.0;
  if (r >= 2.0 * rho_) return 0.0;
  const double t = (r - rho_) / rho_;
  if (shape_ == CutoffShape::CosineSquared) {
    const double c = std::cos(0.5 * kPi * t);
    return c * c;
  }
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double CutoffProfile::derivative(double r) const {
  if (r <= rho_ || r >= 2.0 * rho_) return 0.0;
  const double t = (r - rho_) / rho_;
  if (shape_ == CutoffShape::CosineSquared) return -0.5 * kPi / rho_ * std::sin(kPi * t);
  return -30.0 * t * t * (1.0 - t) * (1.0 - t) / rho_;
}

double CutoffProfile::max_slope() const {
  return shape_ == CutoffShape::CosineSquared ? 0.5 * kPi / rho_ : 1.875 / rho_;
}

double TestSpinorParams::rho() const { return std::pow(epsilon, 1.0 / (n + 1.0)); }

double TestSpinorParams::epsilon_0() const {
  const double r = rho();
  return std::pow(r, n) / epsilon * std::pow(conformal_factor_radial(r / epsilon), 0.5 * n);
}

void TestSpinorParams::validate(double half_width) const {
  if (n < 2) throw DimensionError("test spinor: n must be >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument("test spinor: epsilon must be positive");
  if (!(2.0 * rho() < half_width)) {
    std::ostringstream msg;
    msg << "test spinor: support radius 2 rho = " << 2.0 * rho() << " does not fit in the chart of half-width "
        << half_width << " (epsilon = " << epsilon << ")";
    throw ChartSizeError(msg.str());
  }
  if (psi0.size() == 0 || std::abs(psi0.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("test spinor: psi0 must be a unit spinor");
}

namespace {

// psi and D psi of the simple family at chart offset y.
void simple_point(const CliffordRep& rep, const TestSpinorParams& params, const CutoffProfile& eta,
                  const Eigen::VectorXd& y, Spinor& psi, Spinor& dpsi) {
  const int n = params.n;
  const double eps = params.epsilon;
  const double s = sign_of(params.sign);
  const double r = y.norm();
  const double f = conformal_factor_radial(r / eps);
  const double amp = std::pow(f, 0.5 * n);
  // phi = f^{n/2} (psi0 - s (y/eps).psi0)
  Spinor phi = amp * params.psi0;
  const Eigen::VectorXd ye = y / eps;
  add_clifford(rep, ye.data(), params.psi0, cplx(-s * amp), phi);
  const double e = eta.value(r);
  psi = e * phi;
  dpsi = (e * s * 0.5 * n / eps * f) * phi;
  if (r > 0.0) {
    const Eigen::VectorXd grad = (eta.derivative(r) / r) * y;
    add_clifford(rep, grad.data(), phi, cplx(1.0), dpsi);
  }
}

void check_simple_inputs(const CliffordRep& rep, const TestSpinorParams& params, int grid_dim,
                         Eigen::Index center_dim, const SpinStructure& delta) {
  params.validate();
  const int n = rep.dimension();
  require_dimension(params.n == n && grid_dim == n && center_dim == n && delta.dimension() == n,
                    "test spinor: dimension mismatch");
  require_dimension(params.psi0.size() == rep.spinor_dim(), "test spinor: psi0 length != N");
}

}  // namespace

TestSpinorSample test_spinor_simple(const CliffordRep& rep, const TestSpinorParams& params, CutoffShape cutoff,
                                    const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& center,
                                    const SpinStructure& delta) {
  check_simple_inputs(rep, params, grid.dimension(), center.size(), delta);
  const CutoffProfile eta(cutoff, params.rho());
  const int N = rep.spinor_dim();
  const Eigen::VectorXd p = center;

  TestSpinorSample out{GridSpinorField(grid, N), GridSpinorField(grid, N)};
  Eigen::VectorXd y;
  Spinor psi, dpsi;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double twist = chart_offset(grid.point(i), p, delta, y);
    if (y.norm() >= 2.0 * eta.rho()) continue;
    simple_point(rep, params, eta, y, psi, dpsi);
    out.psi.at(i) = twist * psi;
    out.dirac.at(i) = twist * dpsi;
  }
  return out;
}

FunctionalValue simple_family_J(const CliffordRep& rep, const TestSpinorParams& params, CutoffShape cutoff, int m,
                                const Eigen::Ref<const Eigen::VectorXd>& center, const SpinStructure& delta,
                                double tol) {
  check_simple_inputs(rep, params, rep.dimension(), center.size(), delta);
  if (m < 2) throw std::invalid_argument("functional: resolution must be >= 2");
  const int n = rep.dimension();
  const CutoffProfile eta(cutoff, params.rho());
  const double reach = 2.0 * eta.rho();
  const double power = 2.0 * n / (n + 1.0);
  const double cell = std::pow(static_cast<double>(m), -n);

  // index window per axis (unwrapped), shorter than m because 2 rho < 1/2
  std::vector<long> lo(n), count(n);
  long total = 1;
  for (int a = 0; a < n; ++a) {
    lo[a] = static_cast<long>(std::floor((center[a] - reach) * m));
    count[a] = static_cast<long>(std::ceil((center[a] + reach) * m)) - lo[a] + 1;
    total *= count[a];
  }

  double num = 0.0, pairing = 0.0, cs = 0.0;
  Eigen::VectorXd x(n), y(n);
  Spinor psi, dpsi;
  for (long t = 0; t < total; ++t) {
    long rest = t;
    for (int a = n - 1; a >= 0; --a) {
      const long j = lo[a] + rest % count[a];
      rest /= count[a];
      const long jw = ((j % m) + m) % m;
      x[a] = static_cast<double>(jw) / m;
    }
    chart_offset(x, center, delta, y);
    if (y.norm() >= reach) continue;
    simple_point(rep, params, eta, y, psi, dpsi);
    // the twist is +-1 and drops out of every integrand
    const double nb = dpsi.norm();
    num += cell * std::pow(nb, power);
    pairing += cell * dpsi.dot(psi).real();
    cs += cell * nb * psi.norm();
  }
  if (std::abs(pairing) <= tol * cs || cs == 0.0)
    throw OrthogonalToDiracError("functional: test spinor is orthogonal to its Dirac image");
  FunctionalValue out;
  out.dirac_norm = num;
  out.pairing = pairing;
  out.sign = pairing > 0 ? 1 : -1;
  out.value = std::pow(num, (n + 1.0) / n) / std::abs(pairing);
  return out;
}

namespace {

// Pointwise evaluation of the three-zone spinor in the chart around the pole.
class ThreeZone {
 public:
  enum class Zone { Inner, Annulus, Outer };

  ThreeZone(const CliffordRep& rep, const TestSpinorParams& params, CutoffShape cutoff, double omega,
            ZoneConvention convention)
      : rep_(rep), params_(params), eta_(cutoff, params.rho()), omega_(omega), convention_(convention) {
    sigma_ = sign_of(params.sign);
    eps0_ = params.epsilon_0();
    edge_amp_ = std::pow(conformal_factor_radial(params.rho() / params.epsilon), 0.5 * params.n);
  }

  Zone zone_of(double r) const {
    if (r <= eta_.rho()) return Zone::Inner;
    if (r < 2.0 * eta_.rho()) return Zone::Annulus;
    return Zone::Outer;
  }

  // psi in the given zone at offset y with regular vector reg = r(y).
  Spinor value(Zone zone, const Eigen::VectorXd& y, const Eigen::VectorXd& reg) const {
    const int n = params_.n;
    const double r = y.norm();
    const Spinor& psi0 = params_.psi0;
    const bool cont = convention_ == ZoneConvention::Continuous;
    Spinor out = Spinor::Zero(psi0.size());
    switch (zone) {
      case Zone::Inner: {
        const double amp = std::pow(conformal_factor_radial(r / params_.epsilon), 0.5 * n);
        out = amp * psi0;
        Eigen::VectorXd ye = y / params_.epsilon;
        add_clifford(rep_, ye.data(), psi0, cplx(-sigma_ * amp), out);
        out += (cont ? sigma_ : -sigma_) * eps0_ * params_.nu * psi0;
        break;
      }
      case Zone::Annulus: {
        const double e = eta_.value(r);
        // G~ - eta (v - nu psi0) with G~ = -y/|y|^n + r(y)
        Eigen::VectorXd vec = (1.0 - e) * reg - y / std::pow(r, n);
        if (!cont) vec /= omega_;
        Spinor g = Spinor::Zero(psi0.size());
        add_clifford(rep_, vec.data(), psi0, cplx(1.0), g);
        g += (cont ? e : 1.0) * params_.nu * psi0;
        out = (cont ? sigma_ : -sigma_) * eps0_ * g + (e * edge_amp_) * psi0;
        break;
      }
      case Zone::Outer: {
        Eigen::VectorXd vec = reg - y / std::pow(r, n);
        if (!cont) vec /= omega_;
        add_clifford(rep_, vec.data(), psi0, cplx(cont ? sigma_ * eps0_ : eps0_), out);
        break;
      }
    }
    return out;
  }

  // D psi in the zone (flat metric, pointwise away from the zone boundaries).
  Spinor dirac(Zone zone, const Eigen::VectorXd& y, const Eigen::VectorXd& reg, const Spinor& psi) const {
    const int n = params_.n;
    const double r = y.norm();
    const Spinor& psi0 = params_.psi0;
    const bool cont = convention_ == ZoneConvention::Continuous;
    Spinor out = Spinor::Zero(psi0.size());
    switch (zone) {
      case Zone::Inner: {
        // the constant nu term is annihilated; the rest is the Killing spinor
        const Spinor phi = psi - (cont ? sigma_ : -sigma_) * eps0_ * params_.nu * psi0;
        out = (sigma_ * 0.5 * n / params_.epsilon * conformal_factor_radial(r / params_.epsilon)) * phi;
        break;
      }
      case Zone::Annulus: {
        Eigen::VectorXd grad = (eta_.derivative(r) / r) * y;
        // grad(eta).(-s eps0 (v - nu psi0) + f^{n/2} psi0), v = r(y).psi0 (or / omega)
        Spinor w = Spinor::Zero(psi0.size());
        Eigen::VectorXd v = cont ? reg : Eigen::VectorXd(reg / omega_);
        add_clifford(rep_, v.data(), psi0, cplx(1.0), w);
        if (cont) w -= params_.nu * psi0;
        const double c = cont ? -sigma_ * eps0_ : sigma_ * eps0_;
        Spinor inner = c * w + edge_amp_ * psi0;
        add_clifford(rep_, grad.data(), inner, cplx(1.0), out);
        break;
      }
      case Zone::Outer:
        break;
    }
    return out;
  }

  double rho() const { return eta_.rho(); }

 private:
  const CliffordRep& rep_;
  const TestSpinorParams& params_;
  CutoffProfile eta_;
  double omega_;
  ZoneConvention convention_;
  double sigma_ = 1.0;
  double eps0_ = 0.0;
  double edge_amp_ = 0.0;
};

}  // namespace

TestSpinorSample test_spinor_three_zone(const CliffordRep& rep, const TestSpinorParams& params, CutoffShape cutoff,
                                        const GreenFunction& green, const Grid& grid, ZoneConvention convention) {
  params.validate();
  const int n = rep.dimension();
  require_dimension(params.n == n && grid.dimension() == n && green.dimension() == n,
                    "test spinor: dimension mismatch");
  require_dimension(params.psi0.size() == rep.spinor_dim(), "test spinor: psi0 length != N");
  const ThreeZone tz(rep, params, cutoff, green.omega(), convention);
  const auto sample = green.sample_regular(grid);
  const int N = rep.spinor_dim();

  TestSpinorSample out{GridSpinorField(grid, N), GridSpinorField(grid, N)};
  Eigen::VectorXd y(n), reg(n);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    y = sample.offsets.col(i);
    reg = sample.regular.col(i);
    const double r = y.norm();
    if (r == 0.0 && tz.zone_of(r) != ThreeZone::Zone::Inner) throw SingularPointError("test spinor: grid hits pole");
    const auto zone = tz.zone_of(r);
    const Spinor psi = tz.value(zone, y, reg);
    const double twist = sample.twist[i];
    out.psi.at(i) = twist * psi;
    out.dirac.at(i) = twist * tz.dirac(zone, y, reg, psi);
  }
  return out;
}

ZoneJumps measure_zone_jumps(const CliffordRep& rep, const TestSpinorParams& params, CutoffShape cutoff,
                             const GreenFunction& green, ZoneConvention convention, int samples) {
  params.validate();
  const int n = rep.dimension();
  const ThreeZone tz(rep, params, cutoff, green.omega(), convention);
  const auto dirs = approach_directions(n, std::max(samples, n + 1));
  ZoneJumps jumps;
  for (const auto& d : dirs) {
    for (int edge = 1; edge <= 2; ++edge) {
      const Eigen::VectorXd y = (edge * tz.rho()) * d;
      const Eigen::VectorXd reg = green.regular_vector(y);
      const auto lo = edge == 1 ? ThreeZone::Zone::Inner : ThreeZone::Zone::Annulus;
      const auto hi = edge == 1 ? ThreeZone::Zone::Annulus : ThreeZone::Zone::Outer;
      const Spinor a = tz.value(lo, y, reg);
      const Spinor b = tz.value(hi, y, reg);
      const double jump = (a - b).norm();
      (edge == 1 ? jumps.at_rho : jumps.at_two_rho) = std::max(edge == 1 ? jumps.at_rho : jumps.at_two_rho, jump);
      jumps.scale = std::max({jumps.scale, a.norm(), b.norm()});
    }
  }
  return jumps;
}

SweepResult epsilon_sweep(const std::vector<double>& epsilons, double target,
                          const std::function<SweepRow(double)>& J_of_eps) {
  if (epsilons.size() < 3) throw std::invalid_argument("sweep: need at least three epsilon values");
  std::vector<double> eps = epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || eps[i] == eps[i - 1]) throw std::invalid_argument("sweep: epsilons must be distinct and positive");
  }
  const double ratio = eps[0] / eps[1];
  for (std::size_t i = 1; i + 1 < eps.size(); ++i) {
    if (std::abs(eps[i] / eps[i + 1] - ratio) > 1e-6 * ratio)
      throw std::invalid_argument("sweep: epsilons must be geometrically spaced");
  }

  SweepResult out;
  out.target = target;
  out.rows.resize(eps.size());
  parallel_for(eps.size(), [&](std::size_t i) {
    SweepRow row = J_of_eps(eps[i]);
    row.epsilon = eps[i];
    row.excess = row.J - target;
    out.rows[i] = row;
  });

  // least-squares slope of log|J - target| against log eps
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(eps.size());
  for (const auto& row : out.rows) {
    const double x = std::log(row.epsilon);
    const double yv = std::log(std::max(std::abs(row.excess), std::numeric_limits<double>::min()));
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
  }
  out.decay_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  out.monotone = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) out.monotone = out.monotone && out.rows[i].J < out.rows[i - 1].J;

  const std::size_t k = out.rows.size();
  const double j1 = out.rows[k - 3].J, j2 = out.rows[k - 2].J, j3 = out.rows[k - 1].J;
  const double d1 = j2 - j1, d2 = j3 - j2;
  const double q = d2 / d1;
  out.converged = d1 != 0.0 && q > 0.0 && q < 1.0;
  out.extrapolated_limit = out.converged ? j3 - d2 * d2 / (d2 - d1) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

int sweep_resolution(const TestSweepOptions& options, double epsilon) {
  const double rho = std::pow(epsilon, 1.0 / (options.n + 1.0));
  const double need = std::max({static_cast<double>(options.min_resolution), 16.0 / rho,
                                options.points_per_epsilon / epsilon});
  int m = static_cast<int>(std::ceil(need));
  if (m % 2) ++m;
  return m;
}

SweepResult test_spinor_sweep(const CliffordRep& rep, const TestSweepOptions& options) {
  const int n = rep.dimension();
  require_dimension(options.n == n && options.delta.dimension() == n, "sweep: dimension mismatch");
  if (options.family == TestFamily::ThreeZone && options.delta.is_trivial())
    throw NearKernelError("sweep: the three-zone family needs an invertible Dirac operator (delta != 0)");
  const double target = sphere_invariant(n);
  const Eigen::VectorXd center = Eigen::VectorXd::Constant(n, 0.5);

  return epsilon_sweep(options.epsilons, target, [&](double eps) {
    TestSpinorParams params;
    params.n = n;
    params.epsilon = eps;
    params.sign = options.sign;
    params.psi0 = Spinor::Unit(rep.spinor_dim(), 0);
    params.nu = options.nu;
    params.validate();
    const int m = sweep_resolution(options, eps);
    SweepRow row;
    row.rho = params.rho();
    row.resolution = m;
    if (options.family == TestFamily::Simple && options.route == DiracRoute::Analytic) {
      const FunctionalValue J = simple_family_J(rep, params, options.cutoff, m, center, options.delta);
      row.J = J.value;
      row.sign = J.sign;
      return row;
    }
    const Grid grid(n, m);

    TestSpinorSample sample = [&] {
      if (options.family == TestFamily::Simple)
        return test_spinor_simple(rep, params, options.cutoff, grid, center, options.delta);
      // Modes are cheap through the FFT, images are not: pick the split so the
      // mode box just fits the grid.
      const double kmax = 0.25 * m;
      GreenOptions go;
      go.split = std::clamp(go.truncation / (4.0 * kPi * kPi * kmax * kmax), 1e-4, 0.02);
      const GreenFunction green(rep, options.delta, center, go);
      return test_spinor_three_zone(rep, params, options.cutoff, green, grid, options.convention);
    }();

    const LogConformalFactor flat(grid);
    const FunctionalValue J = options.route == DiracRoute::Analytic
                                  ? functional_J(sample.psi, sample.dirac, flat)
                                  : functional_J(sample.psi, flat, rep, options.delta);
    row.J = J.value;
    row.sign = J.sign;
    return row;
  });
}

const char* to_string(TestFamily family) { return family == TestFamily::Simple ? "simple" : "three-zone"; }
const char* to_string(ZoneConvention convention) {
  return convention == ZoneConvention::Continuous ? "continuous" : "as-displayed";
}
const char* to_string(CutoffShape shape) { return shape == CutoffShape::CosineSquared ? "cos2" : "smoothstep"; }

}  // namespace confdirac

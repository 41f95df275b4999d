#include "confdirac/green.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "confdirac/flatmodel.hpp"
#include "fft_engine.hpp"

namespace confdirac {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

GreenFunction::GreenFunction(const CliffordRep& rep, SpinStructure delta, Eigen::VectorXd pole,
                             GreenOptions options)
    : rep_(rep), delta_(std::move(delta)), pole_(std::move(pole)), options_(options) {
  const int n = rep_.dimension();
  require_dimension(delta_.dimension() == n && pole_.size() == n, "green: dimension mismatch");
  if (delta_.is_trivial())
    throw NearKernelError("green: D is not invertible for the trivial spin structure");
  if (!(options_.split > 0.0) || !(options_.truncation > 0.0))
    throw std::invalid_argument("green: split and truncation must be positive");
  omega_ = unit_sphere_volume(n - 1);

  const double s = options_.split;
  const double T = options_.truncation;

  const double kmax = std::sqrt(T / (4.0 * kPi * kPi * s));
  const int kbox = static_cast<int>(std::ceil(kmax)) + 1;
  const ModeBox box(n, kbox);
  for (Eigen::Index i = 0; i < box.size(); ++i) {
    const Eigen::VectorXi g = box.mode(i);
    Eigen::VectorXd k(n);
    for (int a = 0; a < n; ++a) k[a] = g[a] + delta_[a];
    const double k2 = k.squaredNorm();
    const double expo = 4.0 * kPi * kPi * k2 * s;
    if (k2 == 0.0 || expo > T) continue;
    const double heat = std::exp(-expo);
    modes_.push_back({k, heat / (kTwoPi * k2), heat});
  }

  image_radius_ = std::sqrt(4.0 * s * T);
  const int lbox = static_cast<int>(std::ceil(image_radius_ + 0.5 * std::sqrt(n))) + 1;
  const ModeBox lat(n, lbox);
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const Eigen::VectorXi L = lat.mode(i);
    const Eigen::VectorXd Ld = L.cast<double>();
    if (Ld.norm() > image_radius_ + std::sqrt(n)) continue;
    double phase = 0.0;
    for (int a = 0; a < n; ++a) phase += delta_[a] * L[a];
    images_.push_back({Ld, std::cos(kTwoPi * phase)});
  }
}

GreenFunction::ChartPoint GreenFunction::chart_point(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  require_dimension(x.size() == pole_.size(), "green: point dimension mismatch");
  ChartPoint cp;
  cp.offset = x - pole_;
  double phase = 0.0;
  for (int a = 0; a < x.size(); ++a) {
    const double L = std::round(cp.offset[a]);
    cp.offset[a] -= L;
    phase += delta_[a] * L;
  }
  cp.twist = std::cos(kTwoPi * phase);
  return cp;
}

double GreenFunction::image_kernel(double r) const {
  const double a = 0.5 * rep_.dimension();
  return boost::math::gamma_q(a, r * r / (4.0 * options_.split)) / std::pow(r, rep_.dimension());
}

Eigen::VectorXd GreenFunction::mode_vector(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(y.size());
  for (const auto& m : modes_) acc -= (m.weight * std::sin(kTwoPi * m.k.dot(y))) * m.k;
  return acc;
}

Eigen::VectorXd GreenFunction::image_vector(const Eigen::Ref<const Eigen::VectorXd>& y,
                                            bool include_origin) const {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(y.size());
  for (const auto& im : images_) {
    const bool origin = im.lattice.squaredNorm() == 0.0;
    if (origin && !include_origin) continue;
    const Eigen::VectorXd z = y - im.lattice;
    const double r = z.norm();
    if (r > image_radius_) continue;
    if (r == 0.0) throw SingularPointError("green: evaluation at the pole");
    acc -= (im.sign * image_kernel(r)) * z;
  }
  return acc;
}

Eigen::VectorXd GreenFunction::kernel_vector(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  require_dimension(y.size() == pole_.size(), "green: offset dimension mismatch");
  if (y.squaredNorm() == 0.0) throw SingularPointError("green: evaluation at the pole");
  return mode_vector(y) + image_vector(y, true) / omega_;
}

Eigen::VectorXd GreenFunction::regular_vector(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  require_dimension(y.size() == pole_.size(), "green: offset dimension mismatch");
  Eigen::VectorXd r = omega_ * mode_vector(y) + image_vector(y, false);
  const double rad = y.norm();
  if (rad > 0.0) {
    // origin image: (1 - Q) y/|y|^n = P(n/2, |y|^2/4s) y/|y|^n, smooth at 0
    const double a = 0.5 * rep_.dimension();
    r += boost::math::gamma_p(a, rad * rad / (4.0 * options_.split)) / std::pow(rad, y.size()) * y;
  }
  return r;
}

Spinor GreenFunction::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x, const Spinor& psi0) const {
  require_dimension(psi0.size() == rep_.spinor_dim(), "green: spinor length != N");
  const ChartPoint cp = chart_point(x);
  return cp.twist * rep_.multiply(kernel_vector(cp.offset), psi0);
}

Spinor GreenFunction::regular_part(const Eigen::Ref<const Eigen::VectorXd>& x, const Spinor& psi0) const {
  require_dimension(psi0.size() == rep_.spinor_dim(), "green: spinor length != N");
  return rep_.multiply(regular_vector(chart_point(x).offset), psi0);
}

GreenFunction::HeatKernelSplit GreenFunction::heat_kernel_split(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  HeatKernelSplit h;
  for (const auto& m : modes_) h.modes += m.heat * std::cos(kTwoPi * m.k.dot(y));
  const double s = options_.split;
  const double norm = std::pow(4.0 * kPi * s, -0.5 * y.size());
  for (const auto& im : images_) {
    const double r2 = (y - im.lattice).squaredNorm();
    if (r2 > image_radius_ * image_radius_) continue;
    h.images += im.sign * norm * std::exp(-r2 / (4.0 * s));
  }
  return h;
}

GreenFunction::GridSample GreenFunction::sample_regular(const Grid& grid) const {
  const int n = rep_.dimension();
  require_dimension(grid.dimension() == n, "green: grid dimension mismatch");
  const int m = grid.resolution();
  GridSample out;
  out.offsets.resize(n, grid.size());
  out.regular.resize(n, grid.size());
  out.twist.resize(grid.size());
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    const ChartPoint cp = chart_point(grid.point(p));
    out.offsets.col(p) = cp.offset;
    out.twist[p] = cp.twist;
  }

  int max_gamma = 0;
  for (const auto& md : modes_)
    for (int a = 0; a < n; ++a) max_gamma = std::max(max_gamma, static_cast<int>(std::abs(std::floor(md.k[a]))) + 1);

  if (2 * max_gamma < m) {
    // a(x) = sum_k i k w e^{-2 pi i k.p} e^{2 pi i k.x}, k = gamma + delta
    Eigen::VectorXcd coef = Eigen::VectorXcd::Zero(grid.size() * n);
    for (const auto& md : modes_) {
      Eigen::Index idx = 0;
      for (int a = 0; a < n; ++a) {
        const int g = static_cast<int>(std::lround(md.k[a] - delta_[a]));
        idx = idx * m + ((g % m) + m) % m;
      }
      const cplx c = cplx(0.0, md.weight) * std::polar(1.0, -kTwoPi * md.k.dot(pole_));
      for (int a = 0; a < n; ++a) coef[idx * n + a] += c * md.k[a];
    }
    FftEngine fft(n, m, n);
    fft.backward(coef.data());
    for (Eigen::Index p = 0; p < grid.size(); ++p) {
      const Eigen::VectorXd x = grid.point(p);
      double phase = 0.0;
      for (int a = 0; a < n; ++a) phase += delta_[a] * x[a];
      const cplx tw = std::polar(1.0, kTwoPi * phase);
      for (int a = 0; a < n; ++a) out.regular(a, p) = omega_ * out.twist[p] * (tw * coef[p * n + a]).real();
    }
  } else {
    for (Eigen::Index p = 0; p < grid.size(); ++p) out.regular.col(p) = omega_ * mode_vector(out.offsets.col(p));
  }

  const double a = 0.5 * n;
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    const Eigen::VectorXd y = out.offsets.col(p);
    out.regular.col(p) += image_vector(y, false);
    const double rad = y.norm();
    if (rad > 0.0)
      out.regular.col(p) += boost::math::gamma_p(a, rad * rad / (4.0 * options_.split)) / std::pow(rad, n) * y;
  }
  return out;
}

Spinor green_evaluate(const CliffordRep& rep, const SpinStructure& delta, const Spinor& psi0,
                      const Eigen::Ref<const Eigen::VectorXd>& pole,
                      const Eigen::Ref<const Eigen::VectorXd>& x, GreenOptions options) {
  return GreenFunction(rep, delta, pole, options).evaluate(x, psi0);
}

// ---------------------------------------------------------------- mass endomorphism

std::vector<Eigen::VectorXd> approach_directions(int n, int count, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> dirs;
  for (int a = 0; a < n && static_cast<int>(dirs.size()) < count; ++a)
    dirs.push_back(Eigen::VectorXd::Unit(n, a));
  if (static_cast<int>(dirs.size()) < count) dirs.push_back(Eigen::VectorXd::Ones(n) / std::sqrt(n));
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  while (static_cast<int>(dirs.size()) < count) {
    Eigen::VectorXd d(n);
    for (int a = 0; a < n; ++a) d[a] = normal(gen);
    dirs.push_back(d / d.norm());
  }
  return dirs;
}

Eigen::VectorXcd polynomial_extrapolate(const std::vector<double>& t,
                                        const std::vector<Eigen::VectorXcd>& values) {
  if (t.empty() || t.size() != values.size())
    throw std::invalid_argument("polynomial_extrapolate: need matching non-empty samples");
  // Neville's scheme evaluated at 0
  std::vector<Eigen::VectorXcd> p = values;
  const std::size_t k = t.size();
  for (std::size_t level = 1; level < k; ++level)
    for (std::size_t i = 0; i + level < k; ++i)
      p[i] = (t[i + level] * p[i] - t[i] * p[i + 1]) / (t[i + level] - t[i]);
  return p[0];
}

MassEndomorphism mass_endomorphism(const CliffordRep& rep, const SpinStructure& delta,
                                   const Eigen::Ref<const Eigen::VectorXd>& pole,
                                   const MassOptions& options) {
  if (options.offsets.size() < 2) throw std::invalid_argument("mass_endomorphism: need >= 2 offsets");
  if (options.directions < 1) throw std::invalid_argument("mass_endomorphism: need >= 1 direction");
  const GreenFunction green(rep, delta, pole, options.green);
  const int N = rep.spinor_dim();
  const auto dirs = approach_directions(rep.dimension(), options.directions, options.seed);

  // coarsest offset dropped for the error estimate
  std::vector<double> fine(options.offsets.begin() + 1, options.offsets.end());

  std::vector<Eigen::MatrixXcd> per_direction;
  MassEndomorphism out;
  for (const auto& d : dirs) {
    Eigen::MatrixXcd col_block(N, N);
    for (int j = 0; j < N; ++j) {
      const Spinor psi0 = Spinor::Unit(N, j);
      std::vector<Eigen::VectorXcd> samples;
      for (double t : options.offsets) samples.push_back(green.regular_part(pole + t * d, psi0));
      const Eigen::VectorXcd full = polynomial_extrapolate(options.offsets, samples);
      const Eigen::VectorXcd coarse =
          polynomial_extrapolate(fine, std::vector<Eigen::VectorXcd>(samples.begin() + 1, samples.end()));
      out.extrapolation_error = std::max(out.extrapolation_error, (full - coarse).norm());
      col_block.col(j) = full;
    }
    per_direction.push_back(col_block);
  }

  out.raw = Eigen::MatrixXcd::Zero(N, N);
  for (const auto& b : per_direction) out.raw += b;
  out.raw /= static_cast<double>(per_direction.size());
  for (const auto& b : per_direction) out.direction_spread = std::max(out.direction_spread, (b - out.raw).norm());

  out.directions = static_cast<int>(dirs.size());
  out.hermiticity_defect = (out.raw - out.raw.adjoint()).norm() / (out.raw.norm() + 1.0);
  out.alpha = 0.5 * (out.raw + out.raw.adjoint());
  out.eigenvalues = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(out.alpha, Eigen::EigenvaluesOnly).eigenvalues();

  if (out.extrapolation_error > options.extrapolation_tol)
    throw ConvergenceError("mass_endomorphism: extrapolation did not converge (error " +
                           std::to_string(out.extrapolation_error) + ")");
  if (out.hermiticity_defect > options.hermiticity_tol)
    throw ConvergenceError("mass_endomorphism: Hermiticity defect " + std::to_string(out.hermiticity_defect));
  return out;
}

SymmetryReport symmetry_report(const Eigen::MatrixXcd& alpha, int n) {
  require_dimension(alpha.rows() == alpha.cols(), "symmetry_report: alpha must be square");
  SymmetryReport r;
  r.self_adjointness_defect = (alpha - alpha.adjoint()).norm();
  const Eigen::MatrixXcd herm = 0.5 * (alpha + alpha.adjoint());
  r.eigenvalues = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly).eigenvalues();
  const Eigen::Index N = r.eigenvalues.size();
  for (Eigen::Index i = 0; i < N; ++i)
    r.pairing_defect = std::max(r.pairing_defect, std::abs(r.eigenvalues[i] + r.eigenvalues[N - 1 - i]));
  r.symmetry_expected = (n % 4) != 3;
  return r;
}

}  // namespace confdirac

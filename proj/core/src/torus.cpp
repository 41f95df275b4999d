#include "confdirac/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "confdirac/lanczos.hpp"
#include "fft_engine.hpp"

namespace confdirac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::Index int_pow(int base, int exp) {
  Eigen::Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void fill_extremes(SpectrumResult& s) {
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  s.lambda_1_plus = 0.0;
  s.lambda_1_minus = 0.0;
  for (double ev : s.eigenvalues) {
    if (ev > 0.0 && (s.lambda_1_plus == 0.0 || ev < s.lambda_1_plus)) s.lambda_1_plus = ev;
    if (ev < 0.0 && (s.lambda_1_minus == 0.0 || ev > s.lambda_1_minus)) s.lambda_1_minus = ev;
  }
}

}  // namespace

// ---------------------------------------------------------------- SpinStructure

SpinStructure::SpinStructure(std::vector<double> delta) : delta_(std::move(delta)) {
  if (delta_.empty()) throw std::invalid_argument("spin structure: empty twist vector");
  for (double d : delta_)
    if (d != 0.0 && d != 0.5)
      throw std::invalid_argument("spin structure: twist entries must be 0 or 1/2");
}

SpinStructure SpinStructure::from_mask(int n, unsigned mask) {
  std::vector<double> d(n, 0.0);
  for (int a = 0; a < n; ++a)
    if (mask & (1u << a)) d[a] = 0.5;
  return SpinStructure(std::move(d));
}

SpinStructure SpinStructure::parse(const std::string& text) {
  std::vector<double> d;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item == "1/2")
      d.push_back(0.5);
    else {
      std::size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument("spin structure: cannot parse '" + item + "'");
      d.push_back(v);
    }
  }
  return SpinStructure(std::move(d));
}

bool SpinStructure::is_trivial() const {
  return std::all_of(delta_.begin(), delta_.end(), [](double d) { return d == 0.0; });
}

std::string SpinStructure::to_string() const {
  std::string s;
  for (std::size_t a = 0; a < delta_.size(); ++a) {
    if (a) s += ',';
    s += delta_[a] == 0.0 ? "0" : "0.5";
  }
  return s;
}

// ---------------------------------------------------------------- modes

ModeBox::ModeBox(int n, int cutoff) : n_(n), cutoff_(cutoff), size_(0) {
  if (n < 1) throw std::invalid_argument("mode box: dimension must be >= 1");
  if (cutoff < 0) throw std::invalid_argument("mode box: cutoff must be >= 0");
  size_ = int_pow(2 * cutoff + 1, n);
}

Eigen::VectorXi ModeBox::mode(Eigen::Index index) const {
  const int side = 2 * cutoff_ + 1;
  Eigen::VectorXi g(n_);
  for (int a = n_ - 1; a >= 0; --a) {
    g[a] = static_cast<int>(index % side) - cutoff_;
    index /= side;
  }
  return g;
}

Eigen::Index ModeBox::index(const Eigen::Ref<const Eigen::VectorXi>& gamma) const {
  const int side = 2 * cutoff_ + 1;
  Eigen::Index idx = 0;
  for (int a = 0; a < n_; ++a) {
    if (std::abs(gamma[a]) > cutoff_) throw std::out_of_range("mode box: mode outside cutoff");
    idx = idx * side + (gamma[a] + cutoff_);
  }
  return idx;
}

FourierSpinorField::FourierSpinorField(int n, int spinor_dim, int cutoff)
    : modes_(n, cutoff),
      spinor_dim_(spinor_dim),
      coefficients_(Eigen::VectorXcd::Zero(modes_.size() * spinor_dim)) {}

Eigen::MatrixXcd mode_symbol(const CliffordRep& rep, const SpinStructure& delta,
                             const Eigen::Ref<const Eigen::VectorXi>& gamma) {
  require_dimension(delta.dimension() == rep.dimension() && gamma.size() == rep.dimension(),
                    "mode_symbol: dimension mismatch");
  Eigen::VectorXcd k(rep.dimension());
  for (int a = 0; a < rep.dimension(); ++a) k[a] = cplx(0.0, kTwoPi * (gamma[a] + delta[a]));
  return rep.clifford_matrix(k);
}

FourierSpinorField dirac_apply(const CliffordRep& rep, const SpinStructure& delta,
                               const FourierSpinorField& psi) {
  require_dimension(psi.modes().dimension() == rep.dimension() &&
                        delta.dimension() == rep.dimension() &&
                        psi.spinor_dim() == rep.spinor_dim(),
                    "dirac_apply: dimension mismatch");
  FourierSpinorField out(rep.dimension(), rep.spinor_dim(), psi.modes().cutoff());
  for (Eigen::Index i = 0; i < psi.modes().size(); ++i)
    out.mode(i) = mode_symbol(rep, delta, psi.modes().mode(i)) * psi.mode(i);
  return out;
}

SpectrumResult spectrum_exact(const CliffordRep& rep, const SpinStructure& delta, int cutoff) {
  require_dimension(delta.dimension() == rep.dimension(), "spectrum_exact: dimension mismatch");
  if (cutoff < 1) throw std::invalid_argument("spectrum_exact: cutoff must be >= 1");
  const ModeBox box(rep.dimension(), cutoff);
  const int half = rep.spinor_dim() / 2;
  SpectrumResult s;
  s.eigenvalues.reserve(box.size() * rep.spinor_dim());
  for (Eigen::Index i = 0; i < box.size(); ++i) {
    const Eigen::VectorXi g = box.mode(i);
    double k2 = 0.0;
    for (int a = 0; a < rep.dimension(); ++a) k2 += (g[a] + delta[a]) * (g[a] + delta[a]);
    if (k2 == 0.0) {
      s.eigenvalues.insert(s.eigenvalues.end(), rep.spinor_dim(), 0.0);
      s.kernel_dimension += rep.spinor_dim();
      continue;
    }
    const double lam = kTwoPi * std::sqrt(k2);
    s.eigenvalues.insert(s.eigenvalues.end(), half, lam);
    s.eigenvalues.insert(s.eigenvalues.end(), half, -lam);
  }
  fill_extremes(s);
  return s;
}

SpectrumResult spectrum_by_diagonalization(const CliffordRep& rep, const SpinStructure& delta,
                                           int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("spectrum_by_diagonalization: cutoff must be >= 1");
  const int N = rep.spinor_dim();
  const ModeBox box(rep.dimension(), cutoff);
  // D is block diagonal over modes, so N probes (every mode set to e_j)
  // recover all N x N blocks at once.
  std::vector<FourierSpinorField> images;
  for (int j = 0; j < N; ++j) {
    FourierSpinorField probe(rep.dimension(), N, cutoff);
    for (Eigen::Index i = 0; i < box.size(); ++i) probe.mode(i)[j] = 1.0;
    images.push_back(dirac_apply(rep, delta, probe));
  }
  SpectrumResult s;
  s.eigenvalues.reserve(box.size() * N);
  Eigen::MatrixXcd block(N, N);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (Eigen::Index i = 0; i < box.size(); ++i) {
    for (int j = 0; j < N; ++j) block.col(j) = images[j].mode(i);
    solver.compute(block, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, block.norm());
    for (int j = 0; j < N; ++j) {
      double ev = solver.eigenvalues()[j];
      if (std::abs(ev) <= 1e-12 * scale) {
        ev = 0.0;
        ++s.kernel_dimension;
      }
      s.eigenvalues.push_back(ev);
    }
  }
  fill_extremes(s);
  return s;
}

// ---------------------------------------------------------------- grids

Grid::Grid(int n, int m) : n_(n), m_(m), size_(0) {
  if (n < 1) throw std::invalid_argument("grid: dimension must be >= 1");
  if (m < 2) throw std::invalid_argument("grid: resolution must be >= 2");
  size_ = int_pow(m, n);
}

Eigen::VectorXi Grid::multi_index(Eigen::Index index) const {
  Eigen::VectorXi j(n_);
  for (int a = n_ - 1; a >= 0; --a) {
    j[a] = static_cast<int>(index % m_);
    index /= m_;
  }
  return j;
}

Eigen::VectorXd Grid::point(Eigen::Index index) const {
  return multi_index(index).cast<double>() / static_cast<double>(m_);
}

GridSpinorField::GridSpinorField(Grid grid, int spinor_dim)
    : grid_(grid), spinor_dim_(spinor_dim), values_(Eigen::VectorXcd::Zero(grid.size() * spinor_dim)) {}

GridSpinorField::GridSpinorField(Grid grid, int spinor_dim, Eigen::VectorXcd values)
    : grid_(grid), spinor_dim_(spinor_dim), values_(std::move(values)) {
  require_dimension(values_.size() == grid_.size() * spinor_dim_, "grid field: value count mismatch");
}

GridSpinorField sample_on_grid(const FourierSpinorField& psi, const SpinStructure& delta,
                               const Grid& grid) {
  require_dimension(psi.modes().dimension() == grid.dimension() &&
                        delta.dimension() == grid.dimension(),
                    "sample_on_grid: dimension mismatch");
  GridSpinorField out(grid, psi.spinor_dim());
  const int n = grid.dimension();
  for (Eigen::Index p = 0; p < grid.size(); ++p) {
    const Eigen::VectorXd x = grid.point(p);
    for (Eigen::Index i = 0; i < psi.modes().size(); ++i) {
      const Eigen::VectorXi g = psi.modes().mode(i);
      double phase = 0.0;
      for (int a = 0; a < n; ++a) phase += (g[a] + delta[a]) * x[a];
      out.at(p) += std::polar(1.0, kTwoPi * phase) * psi.mode(i);
    }
  }
  return out;
}

LogConformalFactor::LogConformalFactor(Grid grid) : grid_(grid), u_(Eigen::VectorXd::Zero(grid.size())) {}

LogConformalFactor::LogConformalFactor(Grid grid, Eigen::VectorXd u) : grid_(grid), u_(std::move(u)) {
  require_dimension(u_.size() == grid_.size(), "log conformal factor: value count mismatch");
  if (!u_.allFinite()) throw std::invalid_argument("log conformal factor: non-finite values");
}

LogConformalFactor LogConformalFactor::constant(Grid grid, double c) {
  return LogConformalFactor(grid, Eigen::VectorXd::Constant(grid.size(), c));
}

double volume(const LogConformalFactor& u) {
  const double n = u.grid().dimension();
  return (n * u.values().array()).exp().mean();
}

// ---------------------------------------------------------------- spectral Dirac

SpectralDirac::SpectralDirac(const CliffordRep& rep, SpinStructure delta, Grid grid)
    : rep_(rep), delta_(std::move(delta)), grid_(grid) {
  require_dimension(delta_.dimension() == rep_.dimension() && grid_.dimension() == rep_.dimension(),
                    "spectral dirac: dimension mismatch");
  fft_ = std::make_unique<FftEngine>(grid_.dimension(), grid_.resolution(), rep_.spinor_dim());
}

SpectralDirac::~SpectralDirac() = default;
SpectralDirac::SpectralDirac(SpectralDirac&&) noexcept = default;
SpectralDirac& SpectralDirac::operator=(SpectralDirac&&) noexcept = default;

bool SpectralDirac::invertible() const { return !delta_.is_trivial(); }

Eigen::VectorXcd SpectralDirac::transform(const Eigen::VectorXcd& values, Mode mode) const {
  const int n = grid_.dimension();
  const int m = grid_.resolution();
  const int N = rep_.spinor_dim();
  require_dimension(values.size() == grid_.size() * N, "spectral dirac: field size mismatch");

  // per-axis twist phases exp(-2 pi i delta_a j / m)
  std::vector<std::vector<cplx>> twist(n, std::vector<cplx>(m));
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j) twist[a][j] = std::polar(1.0, -kTwoPi * delta_[a] * j / m);

  auto point_phase = [&](Eigen::Index p) {
    cplx ph(1.0, 0.0);
    for (int a = n - 1; a >= 0; --a) {
      ph *= twist[a][p % m];
      p /= m;
    }
    return ph;
  };

  Eigen::VectorXcd buf = values;
  for (Eigen::Index p = 0; p < grid_.size(); ++p) buf.segment(p * N, N) *= point_phase(p);
  fft_->forward(buf.data());

  std::vector<std::vector<double>> freq(n, std::vector<double>(m));
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j) freq[a][j] = (j < m / 2 ? j : j - m) + delta_[a];

  Eigen::VectorXd k(n);
  Eigen::VectorXcd v(N), acc(N);
  for (Eigen::Index p = 0; p < grid_.size(); ++p) {
    Eigen::Index q = p;
    double k2 = 0.0;
    for (int a = n - 1; a >= 0; --a) {
      k[a] = freq[a][q % m];
      q /= m;
      k2 += k[a] * k[a];
    }
    v = buf.segment(p * N, N);
    acc.setZero();
    for (int a = 0; a < n; ++a)
      if (k[a] != 0.0) acc.noalias() += k[a] * (rep_.generator(a) * v);
    // symbol S = 2 pi i k.G, and S^{-1} = S / (4 pi^2 |k|^2)
    acc *= cplx(0.0, kTwoPi);
    if (mode == Mode::Inverse) acc /= kTwoPi * kTwoPi * k2;
    buf.segment(p * N, N) = acc;
  }

  fft_->backward(buf.data());
  const double norm = 1.0 / static_cast<double>(grid_.size());
  for (Eigen::Index p = 0; p < grid_.size(); ++p)
    buf.segment(p * N, N) *= norm * std::conj(point_phase(p));
  return buf;
}

Eigen::VectorXcd SpectralDirac::apply(const Eigen::VectorXcd& values) const {
  return transform(values, Mode::Forward);
}

Eigen::VectorXcd SpectralDirac::apply_inverse(const Eigen::VectorXcd& values) const {
  if (!invertible())
    throw NearKernelError("spectral dirac: D has a kernel for delta = " + delta_.to_string());
  return transform(values, Mode::Inverse);
}

GridSpinorField SpectralDirac::apply(const GridSpinorField& psi) const {
  require_dimension(psi.grid() == grid_ && psi.spinor_dim() == rep_.spinor_dim(),
                    "spectral dirac: grid mismatch");
  return GridSpinorField(grid_, rep_.spinor_dim(), apply(psi.values()));
}

// ---------------------------------------------------------------- conformal Dirac

ConformalDirac::ConformalDirac(const CliffordRep& rep, SpinStructure delta, const LogConformalFactor& u)
    : flat_(rep, std::move(delta), u.grid()) {
  const double n = rep.dimension();
  const Eigen::ArrayXd lu = u.values().array();
  pre_ = (0.5 * (n - 1.0) * lu).exp().matrix();
  post_ = (-0.5 * (n + 1.0) * lu).exp().matrix();
  sqrt_f_ = (0.5 * lu).exp().matrix();
  inv_sqrt_f_ = (-0.5 * lu).exp().matrix();
  field_map_ = (-0.5 * n * lu).exp().matrix();
  weights_ = ((n * lu).exp() / static_cast<double>(u.grid().size())).matrix();
}

Eigen::VectorXcd ConformalDirac::scale_points(const Eigen::VectorXcd& values,
                                              const Eigen::VectorXd& factor) const {
  const int N = spinor_dim();
  require_dimension(values.size() == factor.size() * N, "conformal dirac: field size mismatch");
  Eigen::VectorXcd out(values.size());
  for (Eigen::Index p = 0; p < factor.size(); ++p) out.segment(p * N, N) = factor[p] * values.segment(p * N, N);
  return out;
}

Eigen::VectorXcd ConformalDirac::apply(const Eigen::VectorXcd& values) const {
  return scale_points(flat_.apply(scale_points(values, pre_)), post_);
}

GridSpinorField ConformalDirac::apply(const GridSpinorField& psi) const {
  require_dimension(psi.grid() == grid() && psi.spinor_dim() == spinor_dim(),
                    "conformal dirac: grid mismatch");
  return GridSpinorField(grid(), spinor_dim(), apply(psi.values()));
}

cplx ConformalDirac::inner(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& chi) const {
  const int N = spinor_dim();
  require_dimension(psi.size() == size() && chi.size() == size(), "conformal dirac: field size mismatch");
  cplx acc = 0.0;
  for (Eigen::Index p = 0; p < weights_.size(); ++p)
    acc += weights_[p] * chi.segment(p * N, N).dot(psi.segment(p * N, N));
  return acc;
}

Eigen::VectorXcd ConformalDirac::apply_symmetric(const Eigen::VectorXcd& w) const {
  return scale_points(flat_.apply(scale_points(w, inv_sqrt_f_)), inv_sqrt_f_);
}

Eigen::VectorXcd ConformalDirac::apply_symmetric_inverse(const Eigen::VectorXcd& w) const {
  return scale_points(flat_.apply_inverse(scale_points(w, sqrt_f_)), sqrt_f_);
}

Eigen::VectorXcd ConformalDirac::field_from_symmetric(const Eigen::VectorXcd& w) const {
  return scale_points(w, field_map_);
}

// ---------------------------------------------------------------- eigenvalues

ExtremeEigenvalues extreme_eigenvalues(const ConformalDirac& op, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw std::invalid_argument("extreme_eigenvalues: tol must be positive");
  if (!op.flat().invertible())
    throw NearKernelError("D has a kernel for delta = " + op.flat().spin_structure().to_string());

  const LanczosResult lz = lanczos_extremes(
      [&op](const Eigen::VectorXcd& w) { return op.apply_symmetric_inverse(w); },
      lanczos_start_vector(op.size()), tol, max_iterations);
  if (!lz.converged)
    throw ConvergenceError("extreme_eigenvalues: Lanczos did not converge in " +
                           std::to_string(lz.iterations) + " iterations");

  auto resolve = [&](const RitzPair& r, int expected_sign) {
    if (r.value * expected_sign <= 0.0)
      throw ConvergenceError("extreme_eigenvalues: spectrum has no eigenvalue of the requested sign");
    EigenEstimate e;
    e.value = 1.0 / r.value;
    e.residual = r.residual / std::abs(r.value);
    e.iterations = lz.iterations;
    const Eigen::VectorXcd psi = op.field_from_symmetric(r.vector);
    e.rayleigh = op.inner(op.apply(psi), psi).real() / op.inner(psi, psi).real();
    if (std::abs(e.value) <= tol)
      throw NearKernelError("extreme_eigenvalues: eigenvalue within tolerance of zero");
    if (e.rayleigh * expected_sign <= 0.0)
      throw ConvergenceError("extreme_eigenvalues: Rayleigh quotient disagrees with Ritz sign");
    return e;
  };
  ExtremeEigenvalues out;
  out.plus = resolve(lz.largest, +1);
  out.minus = resolve(lz.smallest, -1);
  return out;
}

double smallest_positive_eigenvalue(const ConformalDirac& op, double tol) {
  return extreme_eigenvalues(op, tol).plus.value;
}

double largest_negative_eigenvalue(const ConformalDirac& op, double tol) {
  return extreme_eigenvalues(op, tol).minus.value;
}

}  // namespace confdirac

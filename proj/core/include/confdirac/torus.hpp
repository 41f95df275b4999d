#pragma once

#include <memory>
#include <string>
#include <vector>

#include "confdirac/clifford.hpp"

namespace confdirac {

/// Spin structure on T^n = R^n / Z^n, given by a twist vector delta in {0, 1/2}^n.
/// Sections are expanded in x -> exp(2 pi i (gamma + delta) . x), gamma in Z^n.
class SpinStructure {
 public:
  SpinStructure() = default;
  explicit SpinStructure(std::vector<double> delta);

  /// Bit a of mask set <=> delta_a = 1/2.
  static SpinStructure from_mask(int n, unsigned mask);
  /// Parses "0.5,0" or "1/2,0".
  static SpinStructure parse(const std::string& text);

  int dimension() const { return static_cast<int>(delta_.size()); }
  const std::vector<double>& delta() const { return delta_; }
  double operator[](int a) const { return delta_[a]; }
  /// delta = 0: the untwisted structure, where constant spinors are harmonic.
  bool is_trivial() const;
  std::string to_string() const;

  friend bool operator==(const SpinStructure&, const SpinStructure&) = default;

 private:
  std::vector<double> delta_;
};

/// The lattice box { gamma in Z^n : |gamma|_inf <= K } in row-major order.
class ModeBox {
 public:
  ModeBox(int n, int cutoff);
  int dimension() const { return n_; }
  int cutoff() const { return cutoff_; }
  Eigen::Index size() const { return size_; }
  Eigen::VectorXi mode(Eigen::Index index) const;
  Eigen::Index index(const Eigen::Ref<const Eigen::VectorXi>& gamma) const;

 private:
  int n_;
  int cutoff_;
  Eigen::Index size_;
};

/// Spinor field on the torus stored as twisted Fourier coefficients psi^(gamma).
class FourierSpinorField {
 public:
  FourierSpinorField(int n, int spinor_dim, int cutoff);

  const ModeBox& modes() const { return modes_; }
  int spinor_dim() const { return spinor_dim_; }
  Eigen::VectorXcd& coefficients() { return coefficients_; }
  const Eigen::VectorXcd& coefficients() const { return coefficients_; }

  auto mode(Eigen::Index index) { return coefficients_.segment(index * spinor_dim_, spinor_dim_); }
  auto mode(Eigen::Index index) const { return coefficients_.segment(index * spinor_dim_, spinor_dim_); }

  double l2_norm() const { return coefficients_.norm(); }

 private:
  ModeBox modes_;
  int spinor_dim_;
  Eigen::VectorXcd coefficients_;
};

/// Fourier symbol of D on the mode gamma: 2 pi i sum_k (gamma + delta)_k G_k (Hermitian).
Eigen::MatrixXcd mode_symbol(const CliffordRep& rep, const SpinStructure& delta,
                             const Eigen::Ref<const Eigen::VectorXi>& gamma);

/// Flat Dirac operator, mode by mode.
FourierSpinorField dirac_apply(const CliffordRep& rep, const SpinStructure& delta,
                               const FourierSpinorField& psi);

struct SpectrumResult {
  std::vector<double> eigenvalues;  ///< sorted ascending, with multiplicity
  double lambda_1_plus = 0.0;       ///< smallest strictly positive eigenvalue
  double lambda_1_minus = 0.0;      ///< largest strictly negative eigenvalue
  int kernel_dimension = 0;
};

/// Closed form: +-2 pi |gamma + delta| with multiplicity N/2 per sign and mode.
SpectrumResult spectrum_exact(const CliffordRep& rep, const SpinStructure& delta, int cutoff);

/// Diagonalizes the mode blocks of dirac_apply, probed through dirac_apply itself.
SpectrumResult spectrum_by_diagonalization(const CliffordRep& rep, const SpinStructure& delta,
                                           int cutoff);

/// Uniform grid { j / m : j in {0..m-1}^n } on [0,1)^n, row-major (axis 0 slowest).
class Grid {
 public:
  Grid(int n, int m);
  int dimension() const { return n_; }
  int resolution() const { return m_; }
  Eigen::Index size() const { return size_; }
  double spacing() const { return 1.0 / m_; }
  Eigen::VectorXi multi_index(Eigen::Index index) const;
  Eigen::VectorXd point(Eigen::Index index) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_;
  int m_;
  Eigen::Index size_;
};

/// Spinor field sampled on a Grid; values are point-major: values[point * N + c].
class GridSpinorField {
 public:
  GridSpinorField(Grid grid, int spinor_dim);
  GridSpinorField(Grid grid, int spinor_dim, Eigen::VectorXcd values);

  const Grid& grid() const { return grid_; }
  int spinor_dim() const { return spinor_dim_; }
  Eigen::VectorXcd& values() { return values_; }
  const Eigen::VectorXcd& values() const { return values_; }

  auto at(Eigen::Index point) { return values_.segment(point * spinor_dim_, spinor_dim_); }
  auto at(Eigen::Index point) const { return values_.segment(point * spinor_dim_, spinor_dim_); }

 private:
  Grid grid_;
  int spinor_dim_;
  Eigen::VectorXcd values_;
};

/// Evaluates a Fourier field at the grid points (twisted by delta).
GridSpinorField sample_on_grid(const FourierSpinorField& psi, const SpinStructure& delta,
                               const Grid& grid);

/// log F for the conformal metric g~ = e^{2u} g = F^2 g.
class LogConformalFactor {
 public:
  explicit LogConformalFactor(Grid grid);  // u = 0
  LogConformalFactor(Grid grid, Eigen::VectorXd u);
  static LogConformalFactor constant(Grid grid, double c);

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return u_; }
  Eigen::VectorXd scale() const { return u_.array().exp(); }

 private:
  Grid grid_;
  Eigen::VectorXd u_;
};

/// Vol(T^n, e^{2u} g) by the periodic trapezoid rule.
double volume(const LogConformalFactor& u);

class FftEngine;

/// Flat D on grid fields by FFT to twisted mode space and back.
class SpectralDirac {
 public:
  SpectralDirac(const CliffordRep& rep, SpinStructure delta, Grid grid);
  ~SpectralDirac();
  SpectralDirac(SpectralDirac&&) noexcept;
  SpectralDirac& operator=(SpectralDirac&&) noexcept;

  const CliffordRep& rep() const { return rep_; }
  const SpinStructure& spin_structure() const { return delta_; }
  const Grid& grid() const { return grid_; }

  /// False when some resolved mode has gamma + delta = 0.
  bool invertible() const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& values) const;
  /// D^{-1}; throws NearKernelError when D has a kernel.
  Eigen::VectorXcd apply_inverse(const Eigen::VectorXcd& values) const;

  GridSpinorField apply(const GridSpinorField& psi) const;

 private:
  enum class Mode { Forward, Inverse };
  Eigen::VectorXcd transform(const Eigen::VectorXcd& values, Mode mode) const;

  CliffordRep rep_;
  SpinStructure delta_;
  Grid grid_;
  std::unique_ptr<FftEngine> fft_;
};

/// D_g~ for g~ = F^2 g via conformal covariance:
///   D_g~ psi = F^{-(n+1)/2} D (F^{(n-1)/2} psi),
/// self-adjoint for the weights F^n / m^n.
class ConformalDirac {
 public:
  ConformalDirac(const CliffordRep& rep, SpinStructure delta, const LogConformalFactor& u);

  const SpectralDirac& flat() const { return flat_; }
  const Grid& grid() const { return flat_.grid(); }
  int spinor_dim() const { return flat_.rep().spinor_dim(); }
  Eigen::Index size() const { return grid().size() * spinor_dim(); }

  GridSpinorField apply(const GridSpinorField& psi) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& values) const;

  /// <psi, chi> in L^2(F^n dx), linear in the first slot.
  cplx inner(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& chi) const;

  /// A = F^{-1/2} D F^{-1/2}, Hermitian in the flat inner product and with the
  /// same spectrum as D_g~; its inverse F^{1/2} D^{-1} F^{1/2} is explicit.
  Eigen::VectorXcd apply_symmetric(const Eigen::VectorXcd& w) const;
  Eigen::VectorXcd apply_symmetric_inverse(const Eigen::VectorXcd& w) const;
  /// psi = F^{-n/2} w maps eigenvectors of A to eigenvectors of D_g~.
  Eigen::VectorXcd field_from_symmetric(const Eigen::VectorXcd& w) const;

  const Eigen::VectorXd& weights() const { return weights_; }

 private:
  Eigen::VectorXcd scale_points(const Eigen::VectorXcd& values, const Eigen::VectorXd& factor) const;

  SpectralDirac flat_;
  Eigen::VectorXd pre_;       // F^{(n-1)/2}
  Eigen::VectorXd post_;      // F^{-(n+1)/2}
  Eigen::VectorXd sqrt_f_;    // F^{1/2}
  Eigen::VectorXd inv_sqrt_f_;
  Eigen::VectorXd field_map_; // F^{-n/2}
  Eigen::VectorXd weights_;   // F^n / m^n
};

struct EigenEstimate {
  double value = 0.0;
  double residual = 0.0;   ///< relative Ritz residual
  double rayleigh = 0.0;   ///< <D_g~ psi, psi> / <psi, psi> on the Ritz vector
  int iterations = 0;
};

struct ExtremeEigenvalues {
  EigenEstimate plus;   ///< lambda_1^+
  EigenEstimate minus;  ///< lambda_1^- (negative)
};

/// lambda_1^+ and lambda_1^- of D_g~ by Lanczos on the shift-invert operator
/// A^{-1}; signs come from the Ritz values and are cross-checked by the
/// Rayleigh quotient of D_g~. Throws NearKernelError if D is not invertible or
/// an eigenvalue lies within tol of 0, ConvergenceError on budget exhaustion.
ExtremeEigenvalues extreme_eigenvalues(const ConformalDirac& op, double tol = 1e-10,
                                       int max_iterations = 400);

double smallest_positive_eigenvalue(const ConformalDirac& op, double tol = 1e-10);
double largest_negative_eigenvalue(const ConformalDirac& op, double tol = 1e-10);

}  // namespace confdirac

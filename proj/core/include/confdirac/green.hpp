#pragma once

#include <cstdint>
#include <vector>

#include "confdirac/clifford.hpp"
#include "confdirac/torus.hpp"

namespace confdirac {

struct GreenOptions {
  /// Ewald split time s: modes carry exp(-4 pi^2 |k|^2 s), images the complementary part.
  double split = 0.02;
  /// Terms whose damping exponent exceeds this are dropped (exp(-40) ~ 4e-18).
  double truncation = 40.0;
};

/// Green's function of the flat Dirac operator on (T^n, delta) with pole p,
///
///   G(x) = sum_gamma (2 pi i k.)^{-1} exp(2 pi i k.(x - p)) psi0,  k = gamma + delta,
///
/// with D G(psi0) = psi0 delta_p. Near the pole, in the chart x = p + y,
///
///   omega_{n-1} G(psi0)(p + y) = -y/|y|^n . psi0 + v(y) psi0,
///
/// omega_{n-1} = Vol(S^{n-1}). On a flat torus both G and v act by Clifford
/// multiplication with a real vector field, which is what the *_vector
/// accessors return. The conditionally convergent mode sum is evaluated by an
/// exact Ewald split (Gaussian-damped modes plus incomplete-gamma images), so
/// results do not depend on the split parameter.
class GreenFunction {
 public:
  GreenFunction(const CliffordRep& rep, SpinStructure delta, Eigen::VectorXd pole, GreenOptions options = {});

  const CliffordRep& rep() const { return rep_; }
  const SpinStructure& spin_structure() const { return delta_; }
  const Eigen::VectorXd& pole() const { return pole_; }
  double omega() const { return omega_; }
  int dimension() const { return rep_.dimension(); }

  struct ChartPoint {
    Eigen::VectorXd offset;  ///< y = x - p - L, nearest image
    double twist = 1.0;      ///< G(x) = twist * G(p + y)
  };
  ChartPoint chart_point(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// c(y) with G(psi0)(p + y) = c(y) . psi0. Throws SingularPointError at y = 0.
  Eigen::VectorXd kernel_vector(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  /// r(y) = omega c(y) + y/|y|^n, smooth through y = 0, with v(y) psi0 = r(y) . psi0.
  Eigen::VectorXd regular_vector(const Eigen::Ref<const Eigen::VectorXd>& y) const;

  /// G_D(psi0)(x) at a torus point x.
  Spinor evaluate(const Eigen::Ref<const Eigen::VectorXd>& x, const Spinor& psi0) const;
  /// v(x)(psi0) in the chart around p (x is a torus point near p).
  Spinor regular_part(const Eigen::Ref<const Eigen::VectorXd>& x, const Spinor& psi0) const;

  /// D G = (K_modes - K_images) psi0 away from the pole; both heat-kernel
  /// halves are returned so the harmonicity residual can be read off.
  struct HeatKernelSplit {
    double modes = 0.0;
    double images = 0.0;
  };
  HeatKernelSplit heat_kernel_split(const Eigen::Ref<const Eigen::VectorXd>& y) const;

  struct GridSample {
    Eigen::MatrixXd offsets;  ///< n x points, chart offsets y
    Eigen::MatrixXd regular;  ///< n x points, r(y)
    Eigen::VectorXd twist;    ///< per point
  };
  /// r(y) at every grid point; the mode part goes through one FFT.
  GridSample sample_regular(const Grid& grid) const;

 private:
  struct Mode {
    Eigen::VectorXd k;
    double weight;  // exp(-4 pi^2 |k|^2 s) / (2 pi |k|^2)
    double heat;    // exp(-4 pi^2 |k|^2 s)
  };
  struct Image {
    Eigen::VectorXd lattice;
    double sign;    // exp(2 pi i delta . L)
  };

  Eigen::VectorXd mode_vector(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  Eigen::VectorXd image_vector(const Eigen::Ref<const Eigen::VectorXd>& y, bool include_origin) const;
  double image_kernel(double r) const;  // Q(r) * omega = Gamma(n/2, r^2/4s)/Gamma(n/2) / r^n

  CliffordRep rep_;
  SpinStructure delta_;
  Eigen::VectorXd pole_;
  GreenOptions options_;
  double omega_;
  double image_radius_;
  std::vector<Mode> modes_;
  std::vector<Image> images_;
};

/// G_D(psi0)(x) for a one-off evaluation.
Spinor green_evaluate(const CliffordRep& rep, const SpinStructure& delta, const Spinor& psi0,
                      const Eigen::Ref<const Eigen::VectorXd>& pole,
                      const Eigen::Ref<const Eigen::VectorXd>& x, GreenOptions options = {});

struct MassOptions {
  std::vector<double> offsets{0.04, 0.02, 0.01, 0.005};
  int directions = 6;
  double extrapolation_tol = 1e-4;
  double hermiticity_tol = 1e-6;
  std::uint64_t seed = 20040929;     ///< for the random approach directions
  GreenOptions green;
};

struct MassEndomorphism {
  Eigen::MatrixXcd raw;         ///< direction-averaged extrapolated v(p)
  Eigen::MatrixXcd alpha;       ///< Hermitian part of raw
  Eigen::VectorXd eigenvalues;  ///< of alpha, ascending
  double hermiticity_defect = 0.0;   ///< |raw - raw*|_F / (|raw|_F + 1)
  double extrapolation_error = 0.0;  ///< max change when dropping the coarsest offset
  double direction_spread = 0.0;     ///< max deviation of one direction from the mean
  int directions = 0;
};

/// Unit approach directions: the coordinate axes, the main diagonal, then
/// seeded pseudo-random directions.
std::vector<Eigen::VectorXd> approach_directions(int n, int count, std::uint64_t seed = 20040929);

/// Value at t = 0 of the interpolating polynomial through (t_i, values_i).
Eigen::VectorXcd polynomial_extrapolate(const std::vector<double>& t,
                                        const std::vector<Eigen::VectorXcd>& values);

/// alpha: psi0 -> v(p)(psi0), extrapolated from v along several directions.
/// Throws NearKernelError for delta = 0 and ConvergenceError when the
/// extrapolation or Hermiticity checks exceed their tolerances.
MassEndomorphism mass_endomorphism(const CliffordRep& rep, const SpinStructure& delta,
                                   const Eigen::Ref<const Eigen::VectorXd>& pole,
                                   const MassOptions& options = {});

struct SymmetryReport {
  Eigen::VectorXd eigenvalues;
  double pairing_defect = 0.0;          ///< max |e_i + e_{N-1-i}| over sorted eigenvalues
  double self_adjointness_defect = 0.0; ///< |alpha - alpha*|_F
  bool symmetry_expected = false;       ///< n != 3 mod 4
};

SymmetryReport symmetry_report(const Eigen::MatrixXcd& alpha, int n);

}  // namespace confdirac

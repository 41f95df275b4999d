#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "confdirac/clifford.hpp"
#include "confdirac/green.hpp"
#include "confdirac/torus.hpp"

namespace confdirac {

/// ∫<D psi, psi> vanishes (relative to the Cauchy-Schwarz scale).
class OrthogonalToDiracError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The test spinor does not fit in the chart around its center.
class ChartSizeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct FunctionalValue {
  double value = 0.0;      ///< J(psi)
  int sign = 0;            ///< sign of ∫<D psi, psi>: +1 feeds lambda_min^+, -1 lambda_min^-
  double dirac_norm = 0.0; ///< ∫|D psi|^{2n/(n+1)} dv
  double pairing = 0.0;    ///< ∫<D psi, psi> dv
};

/// J(psi) = (∫|D psi|^{2n/(n+1)})^{(n+1)/n} / |∫<D psi, psi>| in g~ = e^{2u} g,
/// with the midpoint rule (weights e^{nu}/m^n) and D psi supplied by the caller.
FunctionalValue functional_J(const GridSpinorField& psi, const GridSpinorField& dirac_psi,
                             const LogConformalFactor& u, double tol = 1e-12);

/// Same, with D_g~ psi computed spectrally.
FunctionalValue functional_J(const GridSpinorField& psi, const LogConformalFactor& u,
                             const CliffordRep& rep, const SpinStructure& delta, double tol = 1e-12);

enum class CutoffShape { CosineSquared, Smoothstep };

/// eta = 1 on [0, rho], 0 beyond 2 rho, monotone in between with |eta'| <= 2/rho.
class CutoffProfile {
 public:
  CutoffProfile(CutoffShape shape, double rho);
  double rho() const { return rho_; }
  CutoffShape shape() const { return shape_; }
  double value(double r) const;
  double derivative(double r) const;
  /// sup |eta'|: pi/(2 rho) for cos^2, 15/(8 rho) for the quintic smoothstep.
  double max_slope() const;

 private:
  CutoffShape shape_;
  double rho_;
};

struct TestSpinorParams {
  int n = 2;
  double epsilon = 0.01;
  Branch sign = Branch::Plus;
  Spinor psi0;       ///< unit fiber spinor at the center
  double nu = 0.0;   ///< mass-endomorphism eigenvalue belonging to psi0

  double rho() const;        ///< epsilon^{1/(n+1)}
  double epsilon_0() const;  ///< rho^n / epsilon * f(rho/epsilon)^{n/2}
  /// Throws ChartSizeError unless 2 rho < half_width.
  void validate(double half_width = 0.5) const;
};

/// A test spinor on a grid together with its exact Dirac image (flat metric).
struct TestSpinorSample {
  GridSpinorField psi;
  GridSpinorField dirac;
};

/// psi_eps = eta(r) phi(x/eps) around the center p, zero outside B(p, 2 rho).
TestSpinorSample test_spinor_simple(const CliffordRep& rep, const TestSpinorParams& params,
                                    CutoffShape cutoff, const Grid& grid,
                                    const Eigen::Ref<const Eigen::VectorXd>& center,
                                    const SpinStructure& delta);

/// J of the simple family on the m^n grid, visiting only the grid points in the
/// support box of B(p, 2 rho); memory use is independent of m.
FunctionalValue simple_family_J(const CliffordRep& rep, const TestSpinorParams& params, CutoffShape cutoff, int m,
                                const Eigen::Ref<const Eigen::VectorXd>& center, const SpinStructure& delta,
                                double tol = 1e-12);

/// How the three zones are glued.
///  - Continuous: inner f^{n/2}(1 -+ x/eps).psi0 +- eps0 nu psi0,
///                annulus +-eps0 (G~ - eta (v - nu psi0)) + eta f(rho/eps)^{n/2} psi0,
///                outer +-eps0 G~, where G~ = omega_{n-1} G. Continuous at r = rho, 2 rho.
///  - AsDisplayed: the literal historical formula (unnormalized G, -+ on the
///                annulus, unsigned outer zone); kept to measure its jumps.
enum class ZoneConvention { Continuous, AsDisplayed };

TestSpinorSample test_spinor_three_zone(const CliffordRep& rep, const TestSpinorParams& params,
                                        CutoffShape cutoff, const GreenFunction& green, const Grid& grid,
                                        ZoneConvention convention = ZoneConvention::Continuous);

struct ZoneJumps {
  double at_rho = 0.0;       ///< max |psi_inner - psi_annulus| on r = rho
  double at_two_rho = 0.0;   ///< max |psi_annulus - psi_outer| on r = 2 rho
  double scale = 0.0;        ///< max |psi| on the two spheres
};

ZoneJumps measure_zone_jumps(const CliffordRep& rep, const TestSpinorParams& params, CutoffShape cutoff,
                             const GreenFunction& green, ZoneConvention convention, int samples = 64);

struct SweepRow {
  double epsilon = 0.0;
  double rho = 0.0;
  int resolution = 0;
  double J = 0.0;
  double excess = 0.0;  ///< J - target
  int sign = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double target = 0.0;
  double decay_exponent = 0.0;      ///< least-squares slope of log|J - target| vs log eps
  double extrapolated_limit = 0.0;  ///< Aitken limit of the three finest J; NaN if not convergent
  bool monotone = false;            ///< J decreases as eps decreases
  bool converged = false;
};

/// Evaluates J_of_eps on the list (>= 3 values, geometrically spaced) and fits
/// the decay of |J - target|.
SweepResult epsilon_sweep(const std::vector<double>& epsilons, double target,
                          const std::function<SweepRow(double)>& J_of_eps);

enum class TestFamily { Simple, ThreeZone };
enum class DiracRoute { Analytic, Spectral };

struct TestSweepOptions {
  TestFamily family = TestFamily::Simple;
  int n = 2;
  SpinStructure delta = SpinStructure({0.5, 0.0});
  Branch sign = Branch::Plus;
  std::vector<double> epsilons{0.01, 0.005, 0.0025};
  CutoffShape cutoff = CutoffShape::CosineSquared;
  ZoneConvention convention = ZoneConvention::Continuous;
  DiracRoute route = DiracRoute::Analytic;
  double points_per_epsilon = 4.0;  ///< grid resolution m >= points_per_epsilon / eps
  int min_resolution = 64;
  double nu = 0.0;
};

/// Smallest even m with m >= 16/rho, m >= points_per_epsilon/eps and m >= min_resolution.
int sweep_resolution(const TestSweepOptions& options, double epsilon);

SweepResult test_spinor_sweep(const CliffordRep& rep, const TestSweepOptions& options);

const char* to_string(TestFamily family);
const char* to_string(ZoneConvention convention);
const char* to_string(CutoffShape shape);

}  // namespace confdirac

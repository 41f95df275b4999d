#pragma once

#include <string>
#include <vector>

#include "confdirac/clifford.hpp"
#include "confdirac/torus.hpp"

namespace confdirac {

/// Finite-dimensional family of log conformal factors
/// u_theta = theta_0 + sum_a sum_{f <= F} (c_{a,f} cos(2 pi f x_a) + s_{a,f} sin(2 pi f x_a)),
/// each coefficient clamped to [-bound, bound].
class ConformalSearchSpace {
 public:
  ConformalSearchSpace(int n, int max_frequency = 1, double bound = 0.5);
  /// Only the constant mode.
  static ConformalSearchSpace constants_only(int n, double bound = 0.5);

  int dimension() const { return n_; }
  int size() const { return static_cast<int>(labels_.size()); }
  double bound() const { return bound_; }
  const std::string& label(int j) const { return labels_.at(j); }

  LogConformalFactor factor(const Eigen::Ref<const Eigen::VectorXd>& theta, const Grid& grid) const;
  /// theta clamped to the coefficient box.
  Eigen::VectorXd clamp(const Eigen::Ref<const Eigen::VectorXd>& theta) const;

 private:
  struct Basis {
    int axis;       // -1 for the constant
    int frequency;
    bool sine;
  };
  int n_;
  double bound_;
  std::vector<Basis> basis_;
  std::vector<std::string> labels_;
};

/// |lambda_1^{+-}(g~)| Vol(g~)^{1/n} for g~ = e^{2u} g.
double normalized_eigenvalue(const CliffordRep& rep, const SpinStructure& delta, const LogConformalFactor& u,
                             Branch sign, double tol = 1e-10);

struct InvariantOptions {
  int resolution = 32;
  int budget = 200;            ///< objective evaluations
  double initial_step = 0.25;
  double min_step = 1e-3;
  double eigen_tol = 1e-10;
};

struct InvariantEstimate {
  Eigen::VectorXd theta;
  double value = 0.0;          ///< best objective found (upper bound for the invariant)
  double flat_value = 0.0;     ///< objective at theta = 0
  Branch sign = Branch::Plus;
  std::vector<double> history; ///< best value after each accepted step, non-increasing
  int evaluations = 0;
  bool budget_exhausted = false;
};

/// Coordinate descent with shrinking steps from theta = 0.
InvariantEstimate minimize(const CliffordRep& rep, const SpinStructure& delta, const ConformalSearchSpace& space,
                           Branch sign, const InvariantOptions& options = {});

}  // namespace confdirac

#include "confdirac/invariant.hpp"

#include <cmath>
#include <numbers>

namespace confdirac {

ConformalSearchSpace::ConformalSearchSpace(int n, int max_frequency, double bound) : n_(n), bound_(bound) {
  if (n < 2) throw DimensionError("search space: n must be >= 2");
  if (max_frequency < 0) throw std::invalid_argument("search space: max_frequency must be >= 0");
  if (!(bound > 0.0)) throw std::invalid_argument("search space: bound must be positive");
  basis_.push_back({-1, 0, false});
  labels_.push_back("const");
  for (int f = 1; f <= max_frequency; ++f)
    for (int a = 0; a < n; ++a)
      for (bool sine : {false, true}) {
        basis_.push_back({a, f, sine});
        labels_.push_back(std::string(sine ? "sin" : "cos") + "(" + std::to_string(f) + "x" + std::to_string(a + 1) +
                          ")");
      }
}

ConformalSearchSpace ConformalSearchSpace::constants_only(int n, double bound) {
  return ConformalSearchSpace(n, 0, bound);
}

Eigen::VectorXd ConformalSearchSpace::clamp(const Eigen::Ref<const Eigen::VectorXd>& theta) const {
  if (theta.size() != size()) throw std::invalid_argument("search space: coefficient count mismatch");
  return theta.cwiseMax(-bound_).cwiseMin(bound_);
}

LogConformalFactor ConformalSearchSpace::factor(const Eigen::Ref<const Eigen::VectorXd>& theta,
                                                const Grid& grid) const {
  require_dimension(grid.dimension() == n_, "search space: grid dimension mismatch");
  const Eigen::VectorXd t = clamp(theta);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd x = grid.point(i);
    double acc = 0.0;
    for (int j = 0; j < size(); ++j) {
      const Basis& b = basis_[j];
      if (b.axis < 0) {
        acc += t[j];
        continue;
      }
      const double arg = 2.0 * std::numbers::pi * b.frequency * x[b.axis];
      acc += t[j] * (b.sine ? std::sin(arg) : std::cos(arg));
    }
    u[i] = acc;
  }
  return LogConformalFactor(grid, std::move(u));
}

double normalized_eigenvalue(const CliffordRep& rep, const SpinStructure& delta, const LogConformalFactor& u,
                             Branch sign, double tol) {
  ConformalDirac D(rep, delta, u);
  const auto ev = extreme_eigenvalues(D, tol);
  const double lambda = sign == Branch::Plus ? ev.plus.value : ev.minus.value;
  return std::abs(lambda) * std::pow(volume(u), 1.0 / rep.dimension());
}

InvariantEstimate minimize(const CliffordRep& rep, const SpinStructure& delta, const ConformalSearchSpace& space,
                           Branch sign, const InvariantOptions& options) {
  require_dimension(space.dimension() == rep.dimension(), "minimize: dimension mismatch");
  if (options.budget < 1) throw std::invalid_argument("minimize: budget must be >= 1");
  const Grid grid(rep.dimension(), options.resolution);

  InvariantEstimate est;
  est.sign = sign;
  auto objective = [&](const Eigen::VectorXd& theta) {
    ++est.evaluations;
    return normalized_eigenvalue(rep, delta, space.factor(theta, grid), sign, options.eigen_tol);
  };

  est.theta = Eigen::VectorXd::Zero(space.size());
  est.value = est.flat_value = objective(est.theta);
  est.history.push_back(est.value);

  double step = options.initial_step;
  while (step >= options.min_step) {
    bool improved = false;
    for (int j = 0; j < space.size(); ++j) {
      for (double dir : {1.0, -1.0}) {
        if (est.evaluations >= options.budget) {
          est.budget_exhausted = true;
          return est;
        }
        Eigen::VectorXd trial = est.theta;
        trial[j] += dir * step;
        trial = space.clamp(trial);
        if (trial == est.theta) continue;
        const double v = objective(trial);
        // strict decrease beyond round-off so exact symmetries (the constant mode) never drift
        if (v < est.value * (1.0 - 1e-12)) {
          est.theta = trial;
          est.value = v;
          est.history.push_back(v);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return est;
}

}  // namespace confdirac

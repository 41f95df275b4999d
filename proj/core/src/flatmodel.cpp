#include "confdirac/flatmodel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace confdirac {

double unit_sphere_volume(int n) {
  if (n < 0) throw std::invalid_argument("unit_sphere_volume: n must be >= 0");
  // omega_0 = 2, omega_1 = 2 pi, omega_n = 2 pi / (n - 1) * omega_{n-2}
  double omega = (n % 2 == 0) ? 2.0 : 2.0 * std::numbers::pi;
  for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) omega *= 2.0 * std::numbers::pi / (k - 1);
  return omega;
}

SphereConstants sphere_constants(int n) {
  if (n < 2) throw std::invalid_argument("sphere_constants: n must be >= 2, got " + std::to_string(n));
  SphereConstants c;
  c.n = n;
  c.omega_n = unit_sphere_volume(n);
  c.lambda_sphere = 0.5 * n * std::pow(c.omega_n, 1.0 / n);
  return c;
}

double sphere_invariant(int n) { return sphere_constants(n).lambda_sphere; }

double conformal_factor(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return 2.0 / (1.0 + x.squaredNorm());
}

Spinor euclidean_killing_spinor(const CliffordRep& rep, Branch sign, const Spinor& psi0,
                                const Eigen::Ref<const Eigen::VectorXd>& x, double eps) {
  require_dimension(x.size() == rep.dimension(), "euclidean_killing_spinor: point dimension != n");
  require_dimension(psi0.size() == rep.spinor_dim(), "euclidean_killing_spinor: spinor length != N");
  if (!(eps > 0.0)) throw std::invalid_argument("euclidean_killing_spinor: eps must be positive");
  const Eigen::VectorXd y = x / eps;
  const double amp = std::pow(conformal_factor(y), 0.5 * rep.dimension());
  return amp * (psi0 - static_cast<double>(sign_of(sign)) * rep.multiply(y, psi0));
}

double killing_dirac_factor(int n, Branch sign, double r, double eps) {
  return sign_of(sign) * 0.5 * n / eps * conformal_factor_radial(r / eps);
}

}  // namespace confdirac

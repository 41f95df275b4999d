#pragma once

#include "confdirac/clifford.hpp"

namespace confdirac {

/// Volume of the unit round sphere S^n.
double unit_sphere_volume(int n);

struct SphereConstants {
  int n = 0;
  double omega_n = 0.0;        ///< Vol(S^n)
  double lambda_sphere = 0.0;  ///< (n/2) omega_n^(1/n)
};

SphereConstants sphere_constants(int n);

/// lambda_min^+(S^n) = (n/2) * Vol(S^n)^(1/n), the universal comparison value.
double sphere_invariant(int n);

/// f(x) = 2 / (1 + |x|^2); g_{S^n} = f^2 g_eucl under stereographic projection.
double conformal_factor(const Eigen::Ref<const Eigen::VectorXd>& x);
inline double conformal_factor_radial(double r) { return 2.0 / (1.0 + r * r); }

/// phi(x) = f(|x|/eps)^(n/2) (psi0 - s (x/eps).psi0) with s = +1 for Branch::Plus.
///
/// It solves D phi = s (n/2) (1/eps) f(|x|/eps) phi, so the Plus branch is the
/// positive eigen-branch feeding lambda_min^+ and Minus the negative one.
Spinor euclidean_killing_spinor(const CliffordRep& rep, Branch sign, const Spinor& psi0,
                                const Eigen::Ref<const Eigen::VectorXd>& x, double eps);

/// The scalar factor k(x) with D phi = k(x) phi for the spinor above.
double killing_dirac_factor(int n, Branch sign, double r, double eps);

}  // namespace confdirac

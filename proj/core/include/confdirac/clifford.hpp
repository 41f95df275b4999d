#pragma once

#include <vector>

#include "confdirac/common.hpp"

namespace confdirac {

/// Irreducible complex representation of the Clifford algebra of R^n with
/// e_i e_j + e_j e_i = -2 delta_ij.
///
/// The generators are G_i = i * gamma_i where gamma_i are the Hermitian
/// matrices of the recursive doubling construction
///
///   n = 1:      gamma_1 = (1)
///   n -> n+1:   (n odd)  gamma_j (x) sigma_1 for j <= n,  I (x) sigma_2
///   n -> n+1:   (n even) keep gamma_1..gamma_n, append I (x) sigma_3
///
/// so every G_i is skew-Hermitian and unitary, entries lie in {0, +-1, +-i}
/// and the anticommutation relations hold exactly in floating point. For odd
/// n the last generator is the chirality-type element i * (I (x) sigma_3);
/// with this choice G_1 G_2 ... G_n = +I for n = 3.
class CliffordRep {
 public:
  explicit CliffordRep(int n);

  int dimension() const { return n_; }
  int spinor_dim() const { return spinor_dim_; }

  const Eigen::MatrixXcd& generator(int i) const { return generators_.at(i); }
  const std::vector<Eigen::MatrixXcd>& generators() const { return generators_; }

  /// The matrix sum_i v_i G_i of Clifford multiplication by v.
  Eigen::MatrixXcd clifford_matrix(const Eigen::Ref<const Eigen::VectorXd>& v) const;
  /// Same with complex coefficients (used for Fourier symbols).
  Eigen::MatrixXcd clifford_matrix(const Eigen::Ref<const Eigen::VectorXcd>& v) const;

  Spinor multiply(const Eigen::Ref<const Eigen::VectorXd>& v,
                  const Eigen::Ref<const Spinor>& psi) const;

 private:
  int n_;
  int spinor_dim_;
  std::vector<Eigen::MatrixXcd> generators_;
};

CliffordRep build_rep(int n);

/// (sum_i v_i G_i) psi.
Spinor clifford_mul(const CliffordRep& rep, const Eigen::Ref<const Eigen::VectorXd>& v,
                    const Eigen::Ref<const Spinor>& psi);

}  // namespace confdirac

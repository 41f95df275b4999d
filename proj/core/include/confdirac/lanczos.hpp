#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "confdirac/common.hpp"

namespace confdirac {

struct RitzPair {
  double value = 0.0;
  double residual = 0.0;  ///< |A x - value x| for the unit Ritz vector x
  Eigen::VectorXcd vector;
};

struct LanczosResult {
  RitzPair largest;   ///< algebraically largest
  RitzPair smallest;  ///< algebraically smallest
  int iterations = 0;
  bool converged = false;
};

/// Deterministic complex Gaussian start vector.
inline Eigen::VectorXcd lanczos_start_vector(Eigen::Index dim, std::uint64_t seed = 0x5eed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = cplx(normal(gen), normal(gen));
  return v / v.norm();
}

/// Hermitian Lanczos with full reorthogonalization for both ends of the
/// spectrum. Stops when both extreme Ritz values satisfy
/// residual <= tol * |value|, or on an invariant subspace.
inline LanczosResult lanczos_extremes(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
    Eigen::VectorXcd start, double tol, int max_iterations) {
  const Eigen::Index dim = start.size();
  const int max_steps = static_cast<int>(std::min<Eigen::Index>(max_iterations, dim));
  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(max_steps + 1);
  std::vector<double> alpha, beta;

  basis.push_back(start / start.norm());
  LanczosResult out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;

  for (int j = 0; j < max_steps; ++j) {
    Eigen::VectorXcd w = apply(basis[j]);
    alpha.push_back(basis[j].dot(w).real());
    // two passes of classical Gram-Schmidt against the whole basis
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q.dot(w) * q;
    const double b = w.norm();

    const int k = j + 1;
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd sub = k > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), k - 1))
                                : Eigen::VectorXd();
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd& theta = tri.eigenvalues();
    const Eigen::MatrixXd& s = tri.eigenvectors();
    const double res_hi = b * std::abs(s(k - 1, k - 1));
    const double res_lo = b * std::abs(s(k - 1, 0));
    const double scale = std::max(std::abs(theta[0]), std::abs(theta[k - 1]));
    const bool breakdown = b <= 1e-14 * std::max(scale, 1e-300);
    const bool done = breakdown || (k >= 3 && res_hi <= tol * std::abs(theta[k - 1]) &&
                                    res_lo <= tol * std::abs(theta[0]));

    if (done || j + 1 == max_steps) {
      auto ritz = [&](int col, double res) {
        RitzPair p;
        p.value = theta[col];
        p.residual = res;
        p.vector = Eigen::VectorXcd::Zero(dim);
        for (int i = 0; i < k; ++i) p.vector += s(i, col) * basis[i];
        p.vector /= p.vector.norm();
        return p;
      };
      out.largest = ritz(k - 1, res_hi);
      out.smallest = ritz(0, res_lo);
      out.iterations = k;
      out.converged = done;
      return out;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return out;
}

}  // namespace confdirac

#include "confdirac/clifford.hpp"

#include <string>

namespace confdirac {
namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<Eigen::MatrixXcd> hermitian_gammas(int n) {
  const cplx I(0.0, 1.0);
  Eigen::Matrix2cd s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;

  std::vector<Eigen::MatrixXcd> gammas{Eigen::MatrixXcd::Identity(1, 1)};
  for (int k = 1; k < n; ++k) {
    const Eigen::Index dim = gammas.front().rows();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
    if (k % 2 == 1) {
      // odd -> even: double the spinor space
      std::vector<Eigen::MatrixXcd> next;
      next.reserve(k + 1);
      for (const auto& g : gammas) next.push_back(kron(g, s1));
      next.push_back(kron(id, s2));
      gammas = std::move(next);
    } else {
      // even -> odd: same spinor space, append the chirality element
      const Eigen::Index half = dim / 2;
      const Eigen::MatrixXcd id_half = Eigen::MatrixXcd::Identity(half, half);
      gammas.push_back(kron(id_half, s3));
    }
  }
  return gammas;
}

}  // namespace

CliffordRep::CliffordRep(int n) : n_(n), spinor_dim_(0) {
  if (n < 2) throw std::invalid_argument("clifford: dimension must be >= 2, got " + std::to_string(n));
  const cplx I(0.0, 1.0);
  for (auto& g : hermitian_gammas(n)) generators_.push_back(I * g);
  spinor_dim_ = static_cast<int>(generators_.front().rows());
}

Eigen::MatrixXcd CliffordRep::clifford_matrix(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  require_dimension(v.size() == n_, "clifford_matrix: vector length != n");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(spinor_dim_, spinor_dim_);
  for (int i = 0; i < n_; ++i) m += v[i] * generators_[i];
  return m;
}

Eigen::MatrixXcd CliffordRep::clifford_matrix(const Eigen::Ref<const Eigen::VectorXcd>& v) const {
  require_dimension(v.size() == n_, "clifford_matrix: vector length != n");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(spinor_dim_, spinor_dim_);
  for (int i = 0; i < n_; ++i) m += v[i] * generators_[i];
  return m;
}

Spinor CliffordRep::multiply(const Eigen::Ref<const Eigen::VectorXd>& v,
                             const Eigen::Ref<const Spinor>& psi) const {
  require_dimension(v.size() == n_, "clifford_mul: vector length != n");
  require_dimension(psi.size() == spinor_dim_, "clifford_mul: spinor length != N");
  Spinor out = Spinor::Zero(spinor_dim_);
  for (int i = 0; i < n_; ++i)
    if (v[i] != 0.0) out.noalias() += v[i] * (generators_[i] * psi);
  return out;
}

CliffordRep build_rep(int n) { return CliffordRep(n); }

Spinor clifford_mul(const CliffordRep& rep, const Eigen::Ref<const Eigen::VectorXd>& v,
                    const Eigen::Ref<const Spinor>& psi) {
  return rep.multiply(v, psi);
}

}  // namespace confdirac

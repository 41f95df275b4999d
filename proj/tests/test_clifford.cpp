#include "doctest.h"
#include "oracles.hpp"

#include "confdirac/clifford.hpp"

using namespace confdirac;

TEST_CASE("generators satisfy the Clifford relation exactly") {
  for (int n = 2; n <= 7; ++n) {
    const CliffordRep rep(n);
    CHECK(rep.spinor_dim() == (1 << (n / 2)));
    const auto I = Eigen::MatrixXcd::Identity(rep.spinor_dim(), rep.spinor_dim());
    for (int i = 0; i < n; ++i) {
      CHECK((rep.generator(i) + rep.generator(i).adjoint()).norm() == 0.0);
      for (int j = 0; j < n; ++j) {
        const Eigen::MatrixXcd ac =
            rep.generator(i) * rep.generator(j) + rep.generator(j) * rep.generator(i) + (i == j ? 2.0 : 0.0) * I;
        CHECK(ac.norm() == 0.0);
      }
    }
  }
}

TEST_CASE("n = 3 volume element is a scalar of square +1") {
  const CliffordRep rep(3);
  const Eigen::MatrixXcd w = rep.generator(0) * rep.generator(1) * rep.generator(2);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(2, 2);
  const std::complex<double> c = w(0, 0);
  CHECK((w - c * I).norm() == 0.0);
  CHECK(std::abs(c * c - 1.0) == 0.0);
  CHECK(c == std::complex<double>(1.0, 0.0));
}

TEST_CASE("n = 4 generators pairwise anticommute") {
  const CliffordRep rep(4);
  CHECK(rep.spinor_dim() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      CHECK((rep.generator(i) * rep.generator(j) + rep.generator(j) * rep.generator(i)).norm() == 0.0);
}

TEST_CASE("Clifford multiplication by vectors") {
  std::mt19937_64 rng(7);
  for (int n : {2, 3, 4, 5}) {
    const CliffordRep rep = build_rep(n);
    const int N = rep.spinor_dim();
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::VectorXd v = oracle::random_vector(rng, n);
      const Eigen::VectorXcd psi = oracle::random_spinor(rng, N);
      const Eigen::VectorXcd chi = oracle::random_spinor(rng, N);
      const Eigen::VectorXcd vpsi = clifford_mul(rep, v, psi);

      // independent matrix oracle
      Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
      for (int i = 0; i < n; ++i) M += v[i] * rep.generator(i);
      CHECK((vpsi - M * psi).norm() <= 1e-13 * psi.norm() * v.norm());

      CHECK((clifford_mul(rep, v, vpsi) + v.squaredNorm() * psi).norm() <= 1e-12 * v.squaredNorm() * psi.norm());
      CHECK(std::abs(vpsi.dot(psi).real()) <= 1e-12 * v.norm() * psi.squaredNorm());
      CHECK(std::abs(vpsi.squaredNorm() - v.squaredNorm() * psi.squaredNorm()) <=
            1e-12 * v.squaredNorm() * psi.squaredNorm());
      // <v.psi, chi> = -<psi, v.chi>
      CHECK(std::abs(chi.dot(vpsi) + clifford_mul(rep, v, chi).dot(psi)) <= 1e-12 * v.norm() * psi.norm() * chi.norm());
    }
  }
}

TEST_CASE("unit vector squares to minus identity") {
  const CliffordRep rep(2);
  const Eigen::VectorXcd psi = Eigen::VectorXcd::Unit(2, 1);
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2, 0);
  CHECK((clifford_mul(rep, e1, clifford_mul(rep, e1, psi)) + psi).norm() == 0.0);
}

TEST_CASE("invalid dimensions are rejected") {
  CHECK_THROWS_AS(CliffordRep(1), std::invalid_argument);
  CHECK_THROWS_AS(CliffordRep(0), std::invalid_argument);
  const CliffordRep rep(2);
  CHECK_THROWS(clifford_mul(rep, Eigen::VectorXd::Zero(3), Eigen::VectorXcd::Zero(2)));
  CHECK_THROWS(clifford_mul(rep, Eigen::VectorXd::Zero(2), Eigen::VectorXcd::Zero(3)));
}

#include "doctest.h"
#include "oracles.hpp"

#include "confdirac/flatmodel.hpp"
#include "confdirac/functional.hpp"

using namespace confdirac;

namespace {

// Eigenspinor exp(i pi x_1) chi with i G_1 chi = chi: D psi = pi psi, |psi| = 1.
GridSpinorField flat_eigenspinor(const CliffordRep& rep, const Grid& grid, double sign) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cplx(0, 1) * rep.generator(0));
  const Spinor chi = es.eigenvectors().col(sign > 0 ? 1 : 0);
  GridSpinorField psi(grid, rep.spinor_dim());
  for (Eigen::Index i = 0; i < grid.size(); ++i) psi.at(i) = std::exp(cplx(0, M_PI * grid.point(i)[0])) * chi;
  return psi;
}

// J of the simple family on T^2 by 1-D radial quadrature: the cross terms
// <grad eta . phi, phi> are imaginary, so |D psi|^2 = (eta k)^2 |phi|^2 + eta'^2 |phi|^2
// and <D psi, psi> = eta^2 k |phi|^2 with |phi|^2 = f^2 (1 + r^2/eps^2).
double radial_J(double eps) {
  const double rho = std::cbrt(eps);
  auto eta = [&](double r) {
    if (r >= 2 * rho) return 0.0;
    return r <= rho ? 1.0 : std::pow(std::cos(0.5 * M_PI * (r - rho) / rho), 2);
  };
  auto deta = [&](double r) {
    if (r >= 2 * rho) return 0.0;
    return r <= rho ? 0.0 : -0.5 * M_PI / rho * std::sin(M_PI * (r - rho) / rho);
  };
  auto phi2 = [&](double r) {
    const double f = 2.0 / (1.0 + r * r / (eps * eps));
    return f * f * (1.0 + r * r / (eps * eps));
  };
  auto k = [&](double r) { return 1.0 / eps * 2.0 / (1.0 + r * r / (eps * eps)); };
  auto num = [&](double r) {
    const double e = eta(r), d = deta(r);
    return 2 * M_PI * r * std::pow((e * e * k(r) * k(r) + d * d) * phi2(r), 2.0 / 3.0);
  };
  auto den = [&](double r) { return 2 * M_PI * r * eta(r) * eta(r) * k(r) * phi2(r); };
  double a = 0, b = 0;
  // split at the kinks and at the scale eps
  std::vector<double> cuts{0.0, eps, 10 * eps, 30 * eps, rho, 2 * rho};
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i] || cuts[i] >= 2 * rho) continue;
    a += oracle::integrate(num, cuts[i], cuts[i + 1], 1e-13);
    b += oracle::integrate(den, cuts[i], cuts[i + 1], 1e-13);
  }
  return std::pow(a, 1.5) / b;
}

TestSpinorParams params_for(double eps, Branch sign = Branch::Plus) {
  TestSpinorParams p;
  p.n = 2;
  p.epsilon = eps;
  p.sign = sign;
  p.psi0 = Spinor::Unit(2, 0);
  return p;
}

}  // namespace

TEST_CASE("J of a flat eigenspinor is its eigenvalue") {
  const CliffordRep rep(2);
  const SpinStructure delta({0.5, 0.0});
  const Grid grid(2, 64);
  const LogConformalFactor flat(grid);
  for (double s : {1.0, -1.0}) {
    const GridSpinorField psi = flat_eigenspinor(rep, grid, s);
    const FunctionalValue J = functional_J(psi, flat, rep, delta);
    CHECK(J.value == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(J.sign == (s > 0 ? 1 : -1));
    GridSpinorField d = psi;
    d.values() *= s * M_PI;
    CHECK(functional_J(psi, d, flat).value == doctest::Approx(M_PI).epsilon(1e-13));
  }
}

TEST_CASE("J is homogeneous of degree zero") {
  const CliffordRep rep(2);
  const SpinStructure delta({0.5, 0.5});
  const Grid grid(2, 32);
  std::mt19937_64 rng(2);
  Eigen::VectorXd u(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) u[i] = 0.3 * std::sin(2 * M_PI * grid.point(i)[1]);
  const LogConformalFactor uf(grid, u);
  GridSpinorField psi = flat_eigenspinor(rep, grid, 1.0);
  psi.values() += 0.2 * oracle::random_spinor(rng, static_cast<int>(psi.values().size()));
  const double ref = functional_J(psi, uf, rep, delta).value;
  for (cplx c : {cplx(3.0, 0), cplx(-0.01, 2.0), cplx(0, 1e5)}) {
    GridSpinorField scaled = psi;
    scaled.values() *= c;
    CHECK(functional_J(scaled, uf, rep, delta).value == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("J is invariant under a constant conformal change") {
  const CliffordRep rep(3);
  const SpinStructure delta({0.5, 0.0, 0.5});
  const Grid grid(3, 12);
  std::mt19937_64 rng(6);
  GridSpinorField psi(grid, 2, oracle::random_spinor(rng, static_cast<int>(grid.size() * 2)));
  const double ref = functional_J(psi, LogConformalFactor(grid), rep, delta).value;
  for (double c : {0.5, 3.0}) {
    GridSpinorField rescaled = psi;
    rescaled.values() *= std::pow(c, -1.0);  // c^{-(n-1)/2}
    const double J = functional_J(rescaled, LogConformalFactor::constant(grid, std::log(c)), rep, delta).value;
    CHECK(J == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("J rejects degenerate input") {
  const CliffordRep rep(2);
  const SpinStructure delta({0.5, 0.0});
  const Grid grid(2, 16);
  const LogConformalFactor flat(grid);
  GridSpinorField both = flat_eigenspinor(rep, grid, 1.0);
  both.values() += flat_eigenspinor(rep, grid, -1.0).values();  // pairing cancels
  CHECK_THROWS_AS(functional_J(both, flat, rep, delta), OrthogonalToDiracError);
  CHECK_THROWS_AS(functional_J(GridSpinorField(grid, 2), flat, rep, delta), std::invalid_argument);
  CHECK_THROWS_AS(functional_J(GridSpinorField(Grid(2, 8), 2), flat, rep, delta), std::invalid_argument);
}

TEST_CASE("cutoff profiles") {
  for (CutoffShape shape : {CutoffShape::CosineSquared, CutoffShape::Smoothstep}) {
    const double rho = 0.2;
    const CutoffProfile eta(shape, rho);
    CHECK(eta.value(0.0) == 1.0);
    CHECK(eta.value(rho) == 1.0);
    CHECK(eta.value(2 * rho) == 0.0);
    CHECK(eta.value(0.5) == 0.0);
    CHECK(eta.max_slope() <= 2.0 / rho);
    double prev = 1.0, steepest = 0.0;
    for (int i = 1; i < 1000; ++i) {
      const double r = rho * (1.0 + i / 1000.0);
      const double v = eta.value(r);
      CHECK(v <= prev);
      prev = v;
      const double h = 1e-6;
      CHECK(eta.derivative(r) == doctest::Approx((eta.value(r + h) - eta.value(r - h)) / (2 * h)).epsilon(1e-6).scale(1.0));
      steepest = std::max(steepest, std::abs(eta.derivative(r)));
    }
    CHECK(steepest == doctest::Approx(eta.max_slope()).epsilon(1e-4));
  }
}

TEST_CASE("test spinor parameters") {
  TestSpinorParams p = params_for(0.008);
  CHECK(p.rho() == doctest::Approx(0.2).epsilon(1e-14));
  const double f = 2.0 / (1.0 + 25.0 * 25.0);
  CHECK(p.epsilon_0() == doctest::Approx(0.04 / 0.008 * f).epsilon(1e-14));
  CHECK_NOTHROW(p.validate());
  CHECK_THROWS_AS(params_for(0.02).validate(), ChartSizeError);
  CHECK_THROWS_AS(params_for(0.1).validate(), ChartSizeError);
  p.psi0 *= 2.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("simple test spinor") {
  const CliffordRep rep(2);
  const SpinStructure delta({0.5, 0.0});
  const Eigen::Vector2d center(0.5, 0.5);
  const TestSpinorParams params = params_for(0.01);
  const Grid grid(2, 400);
  const auto s = test_spinor_simple(rep, params, CutoffShape::CosineSquared, grid, center, delta);
  const Eigen::Index at_p = (grid.resolution() / 2) * grid.resolution() + grid.resolution() / 2;
  CHECK((s.psi.at(at_p) - 2.0 * params.psi0).norm() < 1e-14);
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    if ((grid.point(i) - center).norm() >= 2 * params.rho()) CHECK(s.psi.at(i).norm() == 0.0);

  const LogConformalFactor flat(grid);
  const double analytic = functional_J(s.psi, s.dirac, flat).value;
  const double spectral = functional_J(s.psi, flat, rep, delta).value;
  const double streamed = simple_family_J(rep, params, CutoffShape::CosineSquared, 400, center, delta).value;
  CHECK(streamed == doctest::Approx(analytic).epsilon(1e-12));
  CHECK(spectral == doctest::Approx(analytic).epsilon(1e-3));
  CHECK(analytic == doctest::Approx(radial_J(0.01)).epsilon(1e-5));
  CHECK(functional_J(s.psi, s.dirac, flat).sign == 1);
  CHECK(simple_family_J(rep, params_for(0.01, Branch::Minus), CutoffShape::CosineSquared, 400, center, delta).sign == -1);
}

TEST_CASE("simple family follows the radial oracle and approaches the sphere value") {
  const CliffordRep rep(2);
  const SpinStructure delta({0.5, 0.0});
  const Eigen::Vector2d center(0.5, 0.5);
  for (double eps : {0.005, 0.0025}) {
    const int m = static_cast<int>(4 / eps);
    const double J = simple_family_J(rep, params_for(eps), CutoffShape::CosineSquared, m, center, delta).value;
    CHECK(J == doctest::Approx(radial_J(eps)).epsilon(1e-5));
  }
  // numerical form of the upper bound at the smallest feasible epsilon
  const double J = simple_family_J(rep, params_for(0.000625), CutoffShape::CosineSquared, 6400, center, delta).value;
  CHECK(J < 1.05 * sphere_invariant(2));
  CHECK(J > sphere_invariant(2));
}

TEST_CASE("three-zone test spinor") {
  const CliffordRep rep(2);
  const SpinStructure delta({0.5, 0.0});
  const Eigen::Vector2d center(0.5, 0.5);
  GreenOptions go;
  go.split = 0.002;
  const GreenFunction green(rep, delta, center, go);

  SUBCASE("zones glue continuously") {
    for (Branch s : {Branch::Plus, Branch::Minus}) {
      const auto cont = measure_zone_jumps(rep, params_for(0.005, s), CutoffShape::CosineSquared, green,
                                           ZoneConvention::Continuous);
      CHECK(cont.at_rho < 1e-12 * cont.scale);
      CHECK(cont.at_two_rho < 1e-12 * cont.scale);
      const auto lit = measure_zone_jumps(rep, params_for(0.005, s), CutoffShape::CosineSquared, green,
                                          ZoneConvention::AsDisplayed);
      CHECK(lit.at_rho > 1e-3 * lit.scale);
    }
  }

  SUBCASE("analytic and spectral Dirac images agree; signs follow the branch") {
    const Grid grid(2, 400);
    const LogConformalFactor flat(grid);
    for (Branch s : {Branch::Plus, Branch::Minus}) {
      const auto t = test_spinor_three_zone(rep, params_for(0.01, s), CutoffShape::CosineSquared, green, grid);
      const auto J = functional_J(t.psi, t.dirac, flat);
      CHECK(J.sign == sign_of(s));
      CHECK(functional_J(t.psi, flat, rep, delta).value == doctest::Approx(J.value).epsilon(1e-3));
      // outer zone is harmonic
      for (Eigen::Index i = 0; i < grid.size(); i += 13)
        if ((grid.point(i) - center).norm() > 2 * params_for(0.01).rho()) CHECK(t.dirac.at(i).norm() == 0.0);
    }
    const Eigen::VectorXcd dirac = SpectralDirac(rep, delta, grid)
                                       .apply(test_spinor_three_zone(rep, params_for(0.01), CutoffShape::CosineSquared,
                                                                     green, grid)
                                                  .psi.values());
    double outer = 0.0, scale = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double r = (grid.point(i) - center).norm();
      const double v = dirac.segment(2 * i, 2).norm();
      scale = std::max(scale, v);
      if (r > 2.5 * params_for(0.01).rho()) outer = std::max(outer, v);
    }
    CHECK(outer < 1e-3 * scale);
  }
}

TEST_CASE("epsilon sweep fitting") {
  const std::vector<double> eps{0.04, 0.02, 0.01, 0.005};
  auto row = [](double J) {
    SweepRow r;
    r.J = J;
    return r;
  };
  const auto constant = epsilon_sweep(eps, 3.0, [&](double) { return row(3.25); });
  CHECK(constant.decay_exponent == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK_FALSE(constant.monotone);
  CHECK_FALSE(constant.converged);
  CHECK(std::isnan(constant.extrapolated_limit));

  const auto power = epsilon_sweep(eps, 3.0, [&](double e) { return row(3.0 + 7.0 * std::pow(e, 1.5)); });
  CHECK(power.decay_exponent == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(power.monotone);
  CHECK(power.converged);
  CHECK(power.extrapolated_limit == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(power.rows.front().epsilon == 0.04);
  CHECK(power.rows.back().excess == doctest::Approx(7.0 * std::pow(0.005, 1.5)));

  const auto wobble = epsilon_sweep(eps, 3.0, [&](double e) { return row(3.0 + (e > 0.015 ? 1.0 : -1.0) * e); });
  CHECK_FALSE(wobble.converged);

  CHECK_THROWS_AS(epsilon_sweep({}, 3.0, [&](double) { return row(1); }), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_sweep({0.1, 0.05}, 3.0, [&](double) { return row(1); }), std::invalid_argument);
  CHECK_THROWS_AS(epsilon_sweep({0.1, 0.05, 0.01}, 3.0, [&](double) { return row(1); }), std::invalid_argument);
}

TEST_CASE("test spinor sweeps on T^2") {
  const CliffordRep rep(2);
  TestSweepOptions opt;
  const auto simple = test_spinor_sweep(rep, opt);
  CHECK(simple.monotone);
  CHECK(simple.converged);
  CHECK(std::abs(simple.extrapolated_limit / sphere_invariant(2) - 1.0) < 0.01);
  CHECK(simple.rows[0].J == doctest::Approx(radial_J(0.01)).epsilon(1e-5));
  CHECK(sweep_resolution(opt, 0.0025) == 1600);

  opt.epsilons = {0.02, 0.01, 0.005};
  CHECK_THROWS_AS(test_spinor_sweep(rep, opt), ChartSizeError);

  opt.family = TestFamily::ThreeZone;
  opt.delta = SpinStructure({0, 0});
  opt.epsilons = {0.01, 0.005, 0.0025};
  CHECK_THROWS_AS(test_spinor_sweep(rep, opt), NearKernelError);
}

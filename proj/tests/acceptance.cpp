// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "green_oracles.hpp"
#include "oracles.hpp"

#include "confdirac/flatmodel.hpp"
#include "confdirac/functional.hpp"
#include "confdirac/green.hpp"
#include "confdirac/invariant.hpp"

using namespace confdirac;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_seconds <= 0 || secs < budget_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %d. %s | %s | runtime %.2f s%s\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
              in_time ? "" : " (over budget)");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

}  // namespace

int main() {
  criterion(1, "flat spectrum: diagonalized modes vs +-2 pi |gamma + delta|, n in {2,3}, all delta, K = 8", 5.0, [] {
    double worst = 0.0;
    for (int n : {2, 3}) {
      const CliffordRep rep(n);
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const SpinStructure delta = SpinStructure::from_mask(n, mask);
        const auto diag = spectrum_by_diagonalization(rep, delta, 8);
        const auto exact = oracle::closed_form_spectrum(n, delta.delta(), 8);
        if (diag.eigenvalues.size() != exact.size()) return Outcome{false, "eigenvalue count mismatch"};
        for (std::size_t i = 0; i < exact.size(); ++i)
          worst = std::max(worst, std::abs(diag.eigenvalues[i] - exact[i]) / std::max(1.0, std::abs(exact[i])));
      }
    }
    return Outcome{worst < 1e-12, fmt("max relative defect %.2e (tol 1e-12)", worst)};
  });

  criterion(2, "Killing identity: finite-difference order over h in {1e-2, 5e-3, 2.5e-3}, n in {2,3}", 0, [] {
    std::mt19937_64 rng(17);
    double min_order = 1e300;
    for (int n : {2, 3}) {
      const CliffordRep rep(n);
      for (Branch s : {Branch::Plus, Branch::Minus}) {
        const Spinor psi0 = oracle::random_spinor(rng, rep.spinor_dim()).normalized();
        const double eps = 0.5;
        std::vector<Eigen::VectorXd> pts;
        for (int k = 0; k < 8; ++k) pts.push_back(0.6 * oracle::random_vector(rng, n));
        const std::vector<double> hs{1e-2, 5e-3, 2.5e-3};
        std::vector<double> res;
        for (double h : hs) {
          double acc = 0.0;
          for (const auto& x : pts) {
            const auto field = [&](const Eigen::VectorXd& y) { return euclidean_killing_spinor(rep, s, psi0, y, eps); };
            // (n/2)(1/eps) f phi, with the branch sign for the lower choice
            const double k = killing_dirac_factor(n, s, x.norm(), eps);
            acc += (oracle::central_dirac(rep.generators(), field, x, h) - k * field(x)).squaredNorm();
          }
          res.push_back(std::sqrt(acc / pts.size()));
        }
        min_order = std::min(min_order, oracle::loglog_slope(hs, res));
      }
    }
    return Outcome{min_order >= 1.9, fmt("min fitted order %.4f (need >= 1.9)", min_order)};
  });

  criterion(3, "eigenspinor functional: J = pi on flat T^2, delta = (1/2,0), m = 64", 0, [] {
    const CliffordRep rep(2);
    const Grid grid(2, 64);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cplx(0, 1) * rep.generator(0));
    GridSpinorField psi(grid, 2);
    for (Eigen::Index i = 0; i < grid.size(); ++i)
      psi.at(i) = std::exp(cplx(0, M_PI * grid.point(i)[0])) * es.eigenvectors().col(1);
    const double J = functional_J(psi, LogConformalFactor(grid), rep, SpinStructure({0.5, 0.0})).value;
    const double rel = std::abs(J / M_PI - 1.0);
    return Outcome{rel < 1e-8, fmt("J = %.15f", J) + fmt(", relative defect %.2e (tol 1e-8)", rel)};
  });

  criterion(4, "simple test-spinor sweep on T^2: monotone, limit within 1% of 2 sqrt(pi)", 120.0, [] {
    const CliffordRep rep(2);
    TestSweepOptions opt;  // eps in {0.01, 0.005, 0.0025}
    const auto s = test_spinor_sweep(rep, opt);
    const double rel = std::abs(s.extrapolated_limit / sphere_invariant(2) - 1.0);
    std::string d;
    for (const auto& row : s.rows) d += fmt("J(%.4g)=", row.epsilon) + fmt("%.6f ", row.J);
    d += fmt("limit %.6f", s.extrapolated_limit) + fmt(" (rel %.2e, tol 1e-2)", rel);
    return Outcome{s.monotone && s.converged && rel < 0.01, d};
  });

  criterion(5, "mass endomorphism nullity on T^2 (3 structures) and T^3 (1/2,1/2,1/2)", 300.0, [] {
    double norm = 0.0, herm = 0.0, spread = 0.0;
    const std::vector<std::pair<int, SpinStructure>> cases{{2, SpinStructure({0.5, 0.0})},
                                                           {2, SpinStructure({0.0, 0.5})},
                                                           {2, SpinStructure({0.5, 0.5})},
                                                           {3, SpinStructure({0.5, 0.5, 0.5})}};
    for (const auto& [n, delta] : cases) {
      const CliffordRep rep(n);
      const auto m = mass_endomorphism(rep, delta, Eigen::VectorXd::Constant(n, 0.5));
      // the symmetrized alpha, and the raw extrapolated v(p) as the stricter check
      norm = std::max({norm, m.alpha.norm(), m.raw.norm()});
      herm = std::max(herm, m.hermiticity_defect);
      spread = std::max(spread, m.direction_spread);
    }
    const bool ok = norm < 1e-6 && herm < 1e-6 && spread < 1e-5;
    return Outcome{ok, fmt("max |alpha| %.2e (tol 1e-6)", norm) + fmt(", hermiticity %.2e (tol 1e-6)", herm) +
                           fmt(", spread %.2e (tol 1e-5)", spread)};
  });

  criterion(6, "three-zone sweep at nu = 0 on T^2: decay exponent of |J - 2 sqrt(pi)| > 1.1, both branches", 0, [] {
    const CliffordRep rep(2);
    TestSweepOptions opt;
    opt.family = TestFamily::ThreeZone;
    double worst = 1e300;
    std::string d;
    bool signs = true;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      opt.sign = b;
      const auto s = test_spinor_sweep(rep, opt);
      worst = std::min(worst, s.decay_exponent);
      for (const auto& row : s.rows) signs = signs && row.sign == sign_of(b);
      d += std::string(b == Branch::Plus ? "plus " : "minus ") + fmt("%.4f ", s.decay_exponent);
    }
    d += "(need > 1.1)";
    if (!signs) d += ", sign tag mismatch";
    return Outcome{worst > 1.1 && signs, "exponents " + d};
  });

  criterion(7, "conformal search on T^2, delta = (1/2,0): iterates <= 2 sqrt(pi) + 1e-3, final <= pi + 1e-8", 0, [] {
    const CliffordRep rep(2);
    const SpinStructure delta({0.5, 0.0});
    const ConformalSearchSpace space(2);
    InvariantOptions io;
    io.resolution = 32;
    io.budget = 120;
    double worst = 0.0, final_excess = -1e300;
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      const auto est = minimize(rep, delta, space, b, io);
      for (double v : est.history) worst = std::max(worst, v);
      final_excess = std::max(final_excess, est.value - M_PI);
    }
    // the constant direction leaves the objective unchanged
    const Grid grid(2, 32);
    Eigen::VectorXd theta(space.size());
    theta << 0.0, 0.3, -0.2, 0.1, 0.25;
    const double base = normalized_eigenvalue(rep, delta, space.factor(theta, grid), Branch::Plus);
    double invariance = 0.0;
    for (double c : {-0.45, 0.2, 0.5}) {
      theta[0] = c;
      invariance = std::max(invariance,
                            std::abs(normalized_eigenvalue(rep, delta, space.factor(theta, grid), Branch::Plus) - base) / base);
    }
    const bool ok = worst <= sphere_invariant(2) + 1e-3 && final_excess <= 1e-8 && invariance <= 1e-12;
    return Outcome{ok, fmt("max iterate %.10f", worst) + fmt(", final - pi %.2e", final_excess) +
                           fmt(", constant-mode drift %.2e (tol 1e-12)", invariance)};
  });

  criterion(8, "Green's function: weak form for 5 random fields away from p, harmonicity away from p", 0, [] {
    std::mt19937_64 rng(23);
    const CliffordRep rep(2);
    const SpinStructure delta({0.5, 0.0});
    const Eigen::Vector2d p(0.5, 0.5);
    const GreenFunction G(rep, delta, p);
    const Spinor psi0 = oracle::random_spinor(rng, 2).normalized();
    double weak = 0.0;
    for (int t = 0; t < 5; ++t) {
      oracle::BumpField chi;
      chi.center = p + (0.2 + 0.2 * t / 4.0) * oracle::random_vector(rng, 2).normalized();
      chi.radius = 0.1;
      for (int j = 0; j <= 2; ++j) chi.coeffs.push_back(oracle::random_spinor(rng, 2));
      const cplx lhs = oracle::cube_quadrature(chi.center, chi.radius, 48, [&](const Eigen::VectorXd& x) {
        return G.evaluate(x, psi0).dot(chi.dirac(rep.generators(), x));
      });
      weak = std::max(weak, std::abs(lhs - psi0.dot(chi.value(p))));  // chi(p) = 0 here
    }
    double harmonic = 0.0;
    for (int n : {2, 3}) {
      const CliffordRep r(n);
      const GreenFunction g(r, SpinStructure::from_mask(n, (1u << n) - 1), Eigen::VectorXd::Constant(n, 0.5));
      const Spinor s0 = Spinor::Unit(r.spinor_dim(), 0);
      for (int t = 0; t < 6; ++t) {
        Eigen::VectorXd y;
        do y = 0.5 * oracle::random_vector(rng, n).array().tanh().matrix();
        while (y.norm() < 0.1);
        const auto field = [&](const Eigen::VectorXd& x) { return g.evaluate(x, s0); };
        harmonic = std::max(harmonic,
                            oracle::central_dirac6(r.generators(), field, Eigen::VectorXd::Constant(n, 0.5) + y, 1e-3).norm());
      }
    }
    return Outcome{weak < 1e-4 && harmonic < 1e-6,
                   fmt("weak-form defect %.2e (tol 1e-4)", weak) + fmt(", harmonicity residual %.2e (tol 1e-6)", harmonic)};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace confdirac {

using cplx = std::complex<double>;

/// Fiber value of a spinor field at a point, an element of C^N.
using Spinor = Eigen::VectorXcd;

/// Sign selecting the positive (+) or negative (-) branch of the spectrum.
enum class Branch : int { Plus = 1, Minus = -1 };

inline int sign_of(Branch b) { return static_cast<int>(b); }
inline const char* to_string(Branch b) { return b == Branch::Plus ? "+" : "-"; }

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// D (or D_g~) has an eigenvalue at, or numerically indistinguishable from, zero.
class NearKernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation requested at the pole of a Green's function.
class SingularPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline void require_dimension(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace confdirac

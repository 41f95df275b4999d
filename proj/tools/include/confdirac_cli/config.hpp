#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace confdirac::cli {

/// Invalid or inconsistent run configuration (exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Tolerances {
  double eigen = 1e-10;          ///< eigensolver, relative
  double spectrum = 1e-12;       ///< closed form vs diagonalized modes, relative
  double quadrature = 1e-6;      ///< functional identities on grids
  double mass = 1e-6;            ///< mass-endomorphism nullity
  double hermiticity = 1e-6;
  double extrapolation = 1e-4;
  double spread = 1e-5;          ///< direction independence of v(p)
  double limit = 0.01;           ///< relative distance of the sweep limit from the sphere value
  double exponent = 1.1;         ///< minimum decay exponent of the three-zone sweep
  double inequality = 1e-3;      ///< slack in the upper bound by the sphere value
};

struct RunConfig {
  std::string command;
  int n = 2;
  std::string delta = "0.5,0";   ///< twist vector, or "all" for every nontrivial structure (mass)
  int modes = 16;                ///< mode cutoff K
  int grid = 64;                 ///< grid resolution m
  std::vector<double> epsilons{0.01, 0.005, 0.0025};
  std::string family = "simple";         ///< simple | three-zone
  std::string branch = "both";           ///< plus | minus | both
  std::string cutoff = "cos2";           ///< cos2 | smoothstep
  std::string convention = "continuous"; ///< continuous | as-displayed
  std::string route = "analytic";        ///< analytic | spectral
  double points_per_epsilon = 4.0;
  int budget = 200;
  int max_frequency = 1;
  double bound = 0.5;
  std::vector<double> pole;      ///< empty: the cell center
  Tolerances tol;
  std::string output = "confdirac_run";
  std::uint64_t seed = 20040929;

  /// Checks every field against the module preconditions; throws ConfigError.
  void validate() const;
  /// Canonical "key = value" listing of every field that affects results
  /// (the output path is excluded).
  std::string canonical() const;
  /// FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const;
};

/// Overrides fields from a JSON object; unknown keys are a ConfigError.
void apply_json(RunConfig& config, const std::string& json_text);
void apply_json_file(RunConfig& config, const std::string& path);

/// "0.01,0.005" -> {0.01, 0.005}; throws ConfigError.
std::vector<double> parse_list(const std::string& text);

}  // namespace confdirac::cli

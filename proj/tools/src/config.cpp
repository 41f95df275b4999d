#include "confdirac_cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "confdirac/torus.hpp"

namespace confdirac::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

void require_one_of(const std::string& value, std::initializer_list<const char*> allowed, const std::string& key) {
  for (const char* a : allowed)
    if (value == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError("config: " + key + " must be one of {" + list + "}, got '" + value + "'");
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item.substr(b), &used));
      if (item.find_first_not_of(" \t", b + used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("config: cannot parse number '" + item + "'");
    }
  }
  return out;
}

void RunConfig::validate() const {
  require_one_of(command, {"spectrum", "sweep", "mass", "minimize", "selfcheck"}, "command");
  require(n >= 2 && n <= 8, "n must be in [2, 8]");
  if (delta == "all") {
    require(command == "mass", "delta = all is only meaningful for the mass command");
  } else {
    SpinStructure s;
    try {
      s = SpinStructure::parse(delta);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: delta: ") + e.what());
    }
    require(s.dimension() == n, "delta must have n entries");
  }
  require(modes >= 0 && modes <= 64, "modes (K) must be in [0, 64]");
  require(grid >= 4 && grid <= 8192 && grid % 2 == 0, "grid (m) must be even and in [4, 8192]");
  if (command == "sweep") {
    require(epsilons.size() >= 3, "the epsilon list needs at least three values");
    for (double e : epsilons) {
      require(e > 0.0, "epsilons must be positive");
      require(2.0 * std::pow(e, 1.0 / (n + 1.0)) < 0.5,
              "epsilon " + fmt(e) + " violates the chart bound 2 eps^{1/(n+1)} < 1/2");
    }
  }
  require_one_of(family, {"simple", "three-zone"}, "family");
  require_one_of(branch, {"plus", "minus", "both"}, "branch");
  require_one_of(cutoff, {"cos2", "smoothstep"}, "cutoff");
  require_one_of(convention, {"continuous", "as-displayed"}, "convention");
  require_one_of(route, {"analytic", "spectral"}, "route");
  require(points_per_epsilon > 0.0, "points_per_epsilon must be positive");
  require(budget >= 1, "budget must be >= 1");
  require(max_frequency >= 0 && max_frequency <= 2, "max_frequency must be in [0, 2]");
  require(bound > 0.0, "bound must be positive");
  require(pole.empty() || static_cast<int>(pole.size()) == n, "pole must have n entries");
  for (double p : pole) require(p >= 0.0 && p < 1.0, "pole entries must lie in [0, 1)");
  for (double t : {tol.eigen, tol.spectrum, tol.quadrature, tol.mass, tol.hermiticity, tol.extrapolation, tol.spread,
                   tol.limit, tol.inequality})
    require(t > 0.0, "tolerances must be positive");
  require(!output.empty(), "output prefix must not be empty");
}

std::string RunConfig::canonical() const {
  std::ostringstream o;
  o << "command = " << command << '\n'
    << "n = " << n << '\n'
    << "delta = " << delta << '\n'
    << "modes = " << modes << '\n'
    << "grid = " << grid << '\n'
    << "epsilons = " << fmt_list(epsilons) << '\n'
    << "family = " << family << '\n'
    << "branch = " << branch << '\n'
    << "cutoff = " << cutoff << '\n'
    << "convention = " << convention << '\n'
    << "route = " << route << '\n'
    << "points_per_epsilon = " << fmt(points_per_epsilon) << '\n'
    << "budget = " << budget << '\n'
    << "max_frequency = " << max_frequency << '\n'
    << "bound = " << fmt(bound) << '\n'
    << "pole = " << fmt_list(pole) << '\n'
    << "seed = " << seed << '\n'
    << "tol.eigen = " << fmt(tol.eigen) << '\n'
    << "tol.spectrum = " << fmt(tol.spectrum) << '\n'
    << "tol.quadrature = " << fmt(tol.quadrature) << '\n'
    << "tol.mass = " << fmt(tol.mass) << '\n'
    << "tol.hermiticity = " << fmt(tol.hermiticity) << '\n'
    << "tol.extrapolation = " << fmt(tol.extrapolation) << '\n'
    << "tol.spread = " << fmt(tol.spread) << '\n'
    << "tol.limit = " << fmt(tol.limit) << '\n'
    << "tol.exponent = " << fmt(tol.exponent) << '\n'
    << "tol.inequality = " << fmt(tol.inequality) << '\n';
  return o.str();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_json(RunConfig& c, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  require(j.is_object(), "config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "n") c.n = v.get<int>();
      else if (key == "delta") c.delta = v.get<std::string>();
      else if (key == "modes") c.modes = v.get<int>();
      else if (key == "grid") c.grid = v.get<int>();
      else if (key == "epsilons") c.epsilons = v.get<std::vector<double>>();
      else if (key == "family") c.family = v.get<std::string>();
      else if (key == "branch") c.branch = v.get<std::string>();
      else if (key == "cutoff") c.cutoff = v.get<std::string>();
      else if (key == "convention") c.convention = v.get<std::string>();
      else if (key == "route") c.route = v.get<std::string>();
      else if (key == "points_per_epsilon") c.points_per_epsilon = v.get<double>();
      else if (key == "budget") c.budget = v.get<int>();
      else if (key == "max_frequency") c.max_frequency = v.get<int>();
      else if (key == "bound") c.bound = v.get<double>();
      else if (key == "pole") c.pole = v.get<std::vector<double>>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "output") c.output = v.get<std::string>();
      else if (key == "tolerances") {
        require(v.is_object(), "tolerances must be an object");
        for (const auto& [tk, tv] : v.items()) {
          const double x = tv.get<double>();
          if (tk == "eigen") c.tol.eigen = x;
          else if (tk == "spectrum") c.tol.spectrum = x;
          else if (tk == "quadrature") c.tol.quadrature = x;
          else if (tk == "mass") c.tol.mass = x;
          else if (tk == "hermiticity") c.tol.hermiticity = x;
          else if (tk == "extrapolation") c.tol.extrapolation = x;
          else if (tk == "spread") c.tol.spread = x;
          else if (tk == "limit") c.tol.limit = x;
          else if (tk == "exponent") c.tol.exponent = x;
          else if (tk == "inequality") c.tol.inequality = x;
          else throw ConfigError("config: unknown tolerance '" + tk + "'");
        }
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: wrong value type: ") + e.what());
  }
}

void apply_json_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_json(config, ss.str());
}

}  // namespace confdirac::cli

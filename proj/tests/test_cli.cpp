#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "confdirac_cli/commands.hpp"

using namespace confdirac::cli;

namespace {

std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("timestamp = ", 0) != 0) out += line + "\n";
  return out;
}

RunConfig config_for(const std::string& command) {
  RunConfig c;
  c.command = command;
  c.output = (std::filesystem::temp_directory_path() / ("confdirac_test_" + command)).string();
  return c;
}

}  // namespace

TEST_CASE("record round-trips losslessly") {
  ResultRecord r;
  r.command = "sweep";
  r.config_hash = "0123456789abcdef";
  r.timestamp = "2026-01-01T00:00:00Z";
  r.config["n"] = "2";
  r.scalars["third"] = 1.0 / 3.0;
  r.scalars["tiny"] = 4.9406564584124654e-324;
  r.scalars["big"] = -1.7976931348623157e308;
  r.scalars["nan"] = std::numeric_limits<double>::quiet_NaN();
  r.scalars["inf"] = std::numeric_limits<double>::infinity();
  r.text["status"] = "ok";
  r.text["multi"] = "line one line two";
  r.add_check("first", true, 1e-17, 1e-12);
  r.add_check("second", false, 0.1 + 0.2, 0.3);
  r.table.columns = {"a", "b"};
  r.table.rows = {{0.1, M_PI}, {-2.5e-300, std::exp(1.0)}};

  const ResultRecord back = ResultRecord::parse(r.to_text(), r.table_csv());
  CHECK(back.same_result(r));
  CHECK(back.timestamp == r.timestamp);
  CHECK(back.to_text() == r.to_text());
  CHECK(back.scalars.at("third") == 1.0 / 3.0);
  CHECK(std::isnan(back.scalars.at("nan")));
  CHECK(back.checks[1].defect == 0.1 + 0.2);
  CHECK_FALSE(back.passed());

  const std::string prefix = (std::filesystem::temp_directory_path() / "confdirac_roundtrip").string();
  r.write(prefix);
  CHECK(ResultRecord::read(prefix).same_result(r));
  CHECK_THROWS(ResultRecord::parse("garbage line\n"));
  CHECK_THROWS(ResultRecord::parse("check.x = maybe defect=1 tolerance=1\n"));
}

TEST_CASE("config validation") {
  RunConfig c = config_for("sweep");
  CHECK_NOTHROW(c.validate());
  c.epsilons.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.epsilons = {0.02, 0.01, 0.005};
  CHECK_THROWS_AS(c.validate(), ConfigError);  // chart bound
  c = config_for("sweep");
  c.family = "triple";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config_for("spectrum");
  c.delta = "0.5,0,0";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.delta = "all";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config_for("spectrum");
  c.grid = 33;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config_for("launch");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(parse_list("0.01, 0.005,0.0025") == std::vector<double>{0.01, 0.005, 0.0025});
  CHECK_THROWS_AS(parse_list("0.01,abc"), ConfigError);
}

TEST_CASE("JSON config overrides fields") {
  RunConfig c = config_for("sweep");
  apply_json(c, R"({"n": 3, "delta": "0.5,0.5,0.5", "epsilons": [0.001, 0.0005, 0.00025],
                    "family": "three-zone", "tolerances": {"mass": 1e-7}})");
  CHECK(c.n == 3);
  CHECK(c.delta == "0.5,0.5,0.5");
  CHECK(c.epsilons.size() == 3);
  CHECK(c.family == "three-zone");
  CHECK(c.tol.mass == 1e-7);
  CHECK_THROWS_AS(apply_json(c, R"({"colour": 1})"), ConfigError);
  CHECK_THROWS_AS(apply_json(c, R"({"n": "two"})"), ConfigError);
  CHECK_THROWS_AS(apply_json(c, "{"), ConfigError);
}

TEST_CASE("config hash tracks results, not the output path") {
  RunConfig a = config_for("spectrum"), b = a;
  b.output = "elsewhere";
  CHECK(a.hash() == b.hash());
  b.modes = 5;
  CHECK(a.hash() != b.hash());
  CHECK(a.hash().size() == 16);
}

TEST_CASE("spectrum command") {
  RunConfig c = config_for("spectrum");
  c.modes = 4;
  c.grid = 16;
  const RunOutcome out = run(c);
  CHECK(out.exit_code == kExitPass);
  CHECK(out.record.scalars.at("lambda_1_plus") == doctest::Approx(M_PI).epsilon(1e-15));
  bool has_pi = false;
  for (const auto& row : out.record.table.rows) has_pi = has_pi || std::abs(row[1] - M_PI) < 1e-14;
  CHECK(has_pi);

  c.delta = "0,0";
  const RunOutcome kernel = run(c);
  CHECK(kernel.exit_code == kExitNearKernel);
  CHECK(kernel.record.text.at("status") == "near-kernel");
  CHECK(kernel.record.scalars.at("kernel_dimension") == 2);
}

TEST_CASE("runs are deterministic apart from the timestamp") {
  RunConfig c = config_for("mass");
  c.delta = "all";
  const RunOutcome a = run(c);
  const RunOutcome b = run(c);
  CHECK(a.exit_code == kExitPass);
  CHECK(without_timestamp(a.record.to_text()) == without_timestamp(b.record.to_text()));
  CHECK(a.record.table_csv() == b.record.table_csv());
  a.record.write(c.output);
  CHECK(ResultRecord::read(c.output).same_result(a.record));
}

TEST_CASE("error paths map to exit codes") {
  RunConfig c = config_for("mass");
  c.delta = "0,0";
  const RunOutcome kernel = run(c);
  CHECK(kernel.exit_code == kExitNearKernel);
  CHECK(kernel.record.text.at("status") == "near-kernel");

  c = config_for("sweep");
  c.epsilons.clear();
  const RunOutcome bad = run(c);
  CHECK(bad.exit_code == kExitConfig);
  CHECK(bad.record.text.at("status") == "config-error");

  c = config_for("sweep");
  c.tol.limit = 1e-9;  // unattainable: the check must fail, not crash
  c.branch = "plus";
  const RunOutcome strict = run(c);
  CHECK(strict.exit_code == kExitCheckFailed);
  CHECK_FALSE(strict.record.passed());
}

TEST_CASE("sweep and minimize commands") {
  RunConfig c = config_for("sweep");
  c.family = "three-zone";
  const RunOutcome tz = run(c);
  CHECK(tz.exit_code == kExitPass);
  CHECK(tz.record.scalars.at("plus.decay_exponent") > 1.1);
  CHECK(tz.record.scalars.at("minus.decay_exponent") > 1.1);
  CHECK(tz.record.table.rows.size() == 6);

  c = config_for("minimize");
  c.grid = 16;
  c.budget = 30;
  const RunOutcome mn = run(c);
  CHECK(mn.exit_code == kExitPass);
  CHECK(mn.record.scalars.at("plus.value") <= M_PI + 1e-8);
}

TEST_CASE("selfcheck") {
  const RunOutcome out = run(config_for("selfcheck"));
  CHECK(out.exit_code == kExitPass);
  CHECK(out.record.checks.size() >= 10);
}

#include "doctest.h"

#include "ptsusy/output.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace ptsusy;
using nlohmann::json;

namespace {

OutputDocument sample_doc() {
  OutputDocument doc;
  doc.command = "spectrum";
  doc.config.mu = 1.0;
  doc.config.lambda = -2.5;
  doc.config_extra.push_back({"which", "\"partner2\""});
  doc.config_extra.push_back({"continuum_edge", format_double(0.25)});
  doc.spectrum.push_back(
      {"partner2", 0, -3.7499999123456789, 1.25e-13, 3.1e-11, -3.75, true});
  doc.spectrum.push_back(
      {"partner2", 1, -0.7500000987654321, -4.5e-14, 2.2e-11, -0.75, true});
  return doc;
}

} // namespace

TEST_CASE("format_double: 17 significant digits round-trip") {
  for (double v : {-3.7499999123456789, 0.25, 1.0 / 3.0, 6.62607015e-34,
                   -1.7976931348623157e308}) {
    const double back = std::stod(format_double(v));
    CHECK(back == v);
  }
}

TEST_CASE("write_json: parses and round-trips values") {
  const OutputDocument doc = sample_doc();
  std::ostringstream os;
  write_json(os, doc);
  const json parsed = json::parse(os.str());

  CHECK(parsed["command"] == "spectrum");
  CHECK(parsed["config"]["mu"].get<double>() == 1.0);
  CHECK(parsed["config"]["lambda"].get<double>() == -2.5);
  CHECK(parsed["config"]["which"] == "partner2");
  CHECK(parsed["config"]["continuum_edge"].get<double>() == 0.25);
  REQUIRE(parsed["results"].size() == 2);
  CHECK(parsed["results"][0]["energy_re"].get<double>() ==
        -3.7499999123456789);
  CHECK(parsed["results"][0]["analytic"].get<double>() == -3.75);
  CHECK(parsed["results"][1]["bound"].get<bool>());
  CHECK(parsed["checks"].empty());
}

TEST_CASE("write_csv and write_json encode identical values") {
  const OutputDocument doc = sample_doc();
  std::ostringstream js, cs;
  write_json(js, doc);
  write_csv(cs, doc);
  const json parsed = json::parse(js.str());

  std::istringstream lines(cs.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "index,energy_re,energy_im,residual,analytic,bound");

  std::string line;
  int row = 0;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> cols;
    while (std::getline(fields, field, ','))
      cols.push_back(field);
    REQUIRE(cols.size() == 6);
    const auto &jrow = parsed["results"][row];
    CHECK(std::stoi(cols[0]) == jrow["index"].get<int>());
    CHECK(std::stod(cols[1]) ==
          doctest::Approx(jrow["energy_re"].get<double>()).epsilon(1e-15));
    CHECK(std::stod(cols[2]) ==
          doctest::Approx(jrow["energy_im"].get<double>()).epsilon(1e-15));
    CHECK(std::stod(cols[3]) ==
          doctest::Approx(jrow["residual"].get<double>()).epsilon(1e-15));
    CHECK(std::stod(cols[4]) ==
          doctest::Approx(jrow["analytic"].get<double>()).epsilon(1e-15));
    CHECK((cols[5] == "1") == jrow["bound"].get<bool>());
    ++row;
  }
  CHECK(row == 2);
}

TEST_CASE("write_csv: verify document uses the checks table") {
  OutputDocument doc;
  doc.command = "verify";
  CheckEntry c;
  c.name = "pt_symmetry";
  c.metric = 1.5e-15;
  c.tolerance = 1e-12;
  c.passed = true;
  c.detail = "max |V(-x)* - V(x)|, with a comma";
  doc.checks.push_back(c);

  std::ostringstream os;
  write_csv(os, doc);
  std::istringstream lines(os.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == "name,metric,tolerance,passed,detail");
  CHECK(row.find("pt_symmetry") == 0);
  CHECK(row.find("\"max |V(-x)* - V(x)|, with a comma\"") !=
        std::string::npos);
}

TEST_CASE("verify document: CSV and JSON encode identical check values") {
  OutputDocument doc;
  doc.command = "verify";
  doc.checks.push_back({"pt_symmetry", 1.2345678901234567e-15, 1e-12, true,
                        "detail a"});
  doc.checks.push_back({"real_spectrum", 9.87654321e-11, 1e-8, true,
                        "detail b"});
  std::ostringstream js, cs;
  write_json(js, doc);
  write_csv(cs, doc);
  const json parsed = json::parse(js.str());

  std::istringstream lines(cs.str());
  std::string header, line;
  std::getline(lines, header);
  int row = 0;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string name, metric, tol, passed;
    std::getline(fields, name, ',');
    std::getline(fields, metric, ',');
    std::getline(fields, tol, ',');
    std::getline(fields, passed, ',');
    const auto &jrow = parsed["checks"][row];
    CHECK(name == jrow["name"].get<std::string>());
    CHECK(std::stod(metric) ==
          doctest::Approx(jrow["metric"].get<double>()).epsilon(1e-15));
    CHECK(std::stod(tol) ==
          doctest::Approx(jrow["tolerance"].get<double>()).epsilon(1e-15));
    CHECK((passed == "1") == jrow["passed"].get<bool>());
    ++row;
  }
  CHECK(row == 2);
}

TEST_CASE("apply_config_file: keys, comments, overrides, rejects") {
  const std::string path = "test_config_tmp.cfg";
  {
    std::ofstream out(path);
    out << "# comment line\n"
        << "mu = 2.0\n"
        << "lambda=-5.0\n"
        << "n_points = 801   # trailing comment\n"
        << "refine = off\n"
        << "format = csv\n"
        << "which = partner1\n";
  }
  RunConfig cfg;
  std::string which = "both", object = "v1";
  int n = 0;
  apply_config_file(path, cfg, which, object, n);
  CHECK(cfg.mu == 2.0);
  CHECK(cfg.lambda == -5.0);
  CHECK(cfg.n_points == 801);
  CHECK_FALSE(cfg.with_refine);
  CHECK(cfg.format == OutputFormat::csv);
  CHECK(which == "partner1");
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "unknown_key = 1\n";
  }
  RunConfig cfg2;
  CHECK_THROWS_AS(apply_config_file(path, cfg2, which, object, n),
                  std::invalid_argument);
  std::remove(path.c_str());

  CHECK_THROWS_AS(apply_config_file("does_not_exist.cfg", cfg2, which, object,
                                    n),
                  std::invalid_argument);
}

TEST_CASE("RunConfig: validation and defaults") {
  RunConfig cfg;
  CHECK(cfg.resolved_half_width() == 16.0);
  CHECK(cfg.n_points == 4001);
  CHECK_NOTHROW(cfg.validate_or_throw());

  cfg.mu = 2.0;
  CHECK(cfg.resolved_half_width() == 8.0);

  cfg.lambda = 2.0; // mu == lambda
  CHECK_THROWS_AS(cfg.validate_or_throw(), std::invalid_argument);
  cfg.allow_mu_eq_lambda = true;
  CHECK_NOTHROW(cfg.validate_or_throw());

  cfg.n_points = 800; // even
  CHECK_THROWS_AS(cfg.validate_or_throw(), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "godds/error.hpp"
#include "godds/io.hpp"
#include "godds/rng.hpp"

using namespace godds;

namespace {

std::string error_of(const std::string& csv) {
  std::istringstream in(csv);
  try {
    read_dataset_csv(in, SamplingScheme::OutcomeDependent, {}, "test.csv");
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("dataset CSV round trip") {
  const Dataset data = draw_outcome_dependent(het3(), 300, 0.4, 55);
  std::ostringstream out;
  write_dataset_csv(out, data);
  CHECK(out.str().rfind("y,a,x1,x2,x3\n", 0) == 0);
  std::istringstream in(out.str());
  const Dataset back = read_dataset_csv(in, SamplingScheme::OutcomeDependent, 0.4);
  CHECK(back.same_rows(data));
  CHECK(back.omega_design() == 0.4);

  // Non-grid features survive exactly.
  std::vector<double> x;
  CounterRng rng(3);
  for (int i = 0; i < 50; ++i) x.push_back(rng.normal() * 1e-3 + 1.0 / 3.0);
  std::vector<int> a(50, 1), y(50, 0);
  const Dataset fine(1, x, a, y, SamplingScheme::RandomSampling, std::nullopt, 0);
  std::ostringstream o2;
  write_dataset_csv(o2, fine);
  std::istringstream i2(o2.str());
  CHECK(read_dataset_csv(i2, SamplingScheme::RandomSampling).same_rows(fine));
}

TEST_CASE("dataset CSV errors") {
  CHECK(error_of("y,a,x1\n").find("empty dataset") != std::string::npos);
  CHECK(error_of("").find("empty dataset") != std::string::npos);
  const std::string bad_y = error_of("y,a,x1\n0,1,0.5\n2,0,0.1\n");
  CHECK(bad_y.find("row 2") != std::string::npos);
  CHECK(bad_y.find("y must be 0 or 1") != std::string::npos);
  CHECK(error_of("y,a,x1\n0,1,0.5\n1,0\n").find("row 2") != std::string::npos);
  CHECK(error_of("y,a,x1\n0,1,abc\n").find("x1") != std::string::npos);
  CHECK(error_of("y,a,x1\n0,0.5,1\n").find("a must be 0 or 1") != std::string::npos);
  CHECK_FALSE(error_of("a,y,x1\n0,1,0.5\n").empty());
  CHECK(error_of("y,a,x1\n\n1,0,2\n\n").empty());
}

TEST_CASE("DGP configs accept exact fractions") {
  const Json config = Json::parse(R"({
    "strata": [
      {"label": "Female", "p_x": "1/2", "pi1": 0.5, "nu1": "1/6", "nu0": "9/10"},
      {"label": "Male", "p_x": "1/2", "pi1": 0.5, "nu1": "1/26", "nu0": "9/14"}
    ]})");
  const DiscreteDgp dgp = dgp_from_json(config);
  CHECK(dgp.size() == 2);
  CHECK(dgp.nu(1, 0) == 1.0L / 6);
  CHECK(dgp.nu(1, 1) == 1.0L / 26);
  const DiscreteDgp again = dgp_from_json(dgp_to_json(dgp));
  for (std::size_t x = 0; x < 2; ++x) {
    CHECK(std::fabs(static_cast<double>(again.nu(0, x) - dgp.nu(0, x))) < 1e-16);
  }

  Json bad = config;
  bad["strata"][0]["nu1"] = "1/0";
  CHECK_THROWS_AS(dgp_from_json(bad), DataError);
  bad["strata"][0]["nu1"] = "one sixth";
  CHECK_THROWS_AS(dgp_from_json(bad), DataError);
  bad["strata"][0]["nu1"] = 1.5;
  CHECK_THROWS_AS(dgp_from_json(bad), DataError);
  CHECK_THROWS_AS(dgp_from_json(Json::parse(R"({"strata": []})")), DataError);
}

TEST_CASE("doubles are written with 17 significant digits") {
  CounterRng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    const Json parsed = Json::parse(dump_json(Json{{"v", v}}, -1));
    CHECK(parsed["v"].get<double>() == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(dump_json(Json{{"n", std::numeric_limits<double>::quiet_NaN()}}, -1) == R"({"n":null})");
  CHECK(dump_json(Json{{"x", 2.0}}, -1) == R"({"x":2.0})");
  CHECK(dump_json(Json{{"k", 3}}, -1) == R"({"k":3})");
  CHECK(dump_json(Json::array(), 2) == "[]");
}

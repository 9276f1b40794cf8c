#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "fracdense/errors.hpp"
#include "fracdense/io.hpp"

using namespace fracdense;
namespace fs = std::filesystem;

TEST_CASE("exterior data round trip") {
  const ExteriorData data({Bump{2.5, 0.5, 1.0}, Bump{-3.1, 0.2, -0.123456789012345678}});
  const Ball ball{0.25, 1.5};
  const Json j = to_json(ball, data);
  const ExteriorInput back = exterior_from_json(parse_json(dump_json(j), "test"));
  CHECK(back.ball.center == ball.center);
  CHECK(back.ball.radius == ball.radius);
  REQUIRE(back.data.bumps().size() == 2);
  CHECK(back.data.bumps()[1].amplitude == data.bumps()[1].amplitude);
  CHECK(back.data.bumps()[1].half_width == data.bumps()[1].half_width);
}

TEST_CASE("ball defaults to the unit ball") {
  const ExteriorInput input = exterior_from_json(parse_json(R"({"bumps": []})", "test"));
  CHECK(input.ball.center == 0.0);
  CHECK(input.ball.radius == 1.0);
  CHECK(input.data.empty());
}

TEST_CASE("polynomial round trip") {
  const Polynomial p({0.1, 0.0, -1.0 / 3.0, 0.0, 2e-300});
  const Polynomial back = polynomial_from_json(parse_json(dump_json(to_json(p)), "test"));
  CHECK(back.coefficients() == p.coefficients());
  const Json j = to_json(p);
  CHECK(j["n"] == 1);
  CHECK(j["coeffs"].size() == 3);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(parse_json("{\"bumps\": [", "test"), InputError);
  CHECK_THROWS_AS(exterior_from_json(parse_json(R"({"bumps": [{"center": 2.5}]})", "test")), InputError);
  CHECK_THROWS_AS(exterior_from_json(parse_json(R"({"bumps": 3})", "test")), InputError);
  CHECK_THROWS_AS(polynomial_from_json(parse_json(R"({"n": 2, "coeffs": []})", "test")), InputError);
  CHECK_THROWS_AS(polynomial_from_json(parse_json(R"({"n": 1, "coeffs": [[-1, 2.0]]})", "test")), InputError);
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), InputError);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  const std::string t = csv_table({"x", "u"}, {{0.5, 2.0}, {1.0, -0.25}});
  CHECK(t == "x,u\n0.5,2\n1,-0.25\n");
}

TEST_CASE("non-finite values become null") {
  ResidualReport r;
  r.points.push_back({0.0, std::numeric_limits<double>::quiet_NaN()});
  const Json j = to_json(r);
  CHECK(j.dump().find("null") != std::string::npos);
}

TEST_CASE("atomic write") {
  const fs::path dir = fs::temp_directory_path() / "fracdense_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path file = dir / "out.json";
  write_file_atomic(file, "first\n");
  write_file_atomic(file, "second\n");
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "second\n");
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
  fs::remove_all(dir);
}

TEST_CASE("dump uses two-space indentation") {
  Json j;
  j["a"] = 1;
  CHECK(dump_json(j) == "{\n  \"a\": 1\n}\n");
}

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "yamabe/emit.hpp"
#include "yamabe/rounding.hpp"

using namespace yamabe;
using namespace yamabe::emit;

TEST_CASE("tenth rounding rules") {
  CHECK(round_nearest_tenth(147.8779) == 147.9);
  CHECK(round_nearest_tenth(113.5272) == 113.5);
  CHECK(round_nearest_tenth(-1.25) == -1.3);  // ties away from zero
  CHECK(round_floor_tenth(65.2673) == 65.2);
  CHECK(round_floor_tenth(104.9829) == 104.9);
  // Decimal literals are exact fixpoints of both rules.
  for (double v : {45.1, 50.0, 65.2, 0.3, 8.2, 121.4}) {
    CHECK(round_floor_tenth(v) == v);
    CHECK(round_nearest_tenth(v) == v);
  }
}

TEST_CASE("guard window detection") {
  CHECK(near_tenth_boundary(1.04999, Rounding::NearestTenth));
  CHECK(near_tenth_boundary(1.05001, Rounding::NearestTenth));
  CHECK_FALSE(near_tenth_boundary(1.03, Rounding::NearestTenth));
  CHECK(near_tenth_boundary(2.30004, Rounding::FloorTenth));
  CHECK(near_tenth_boundary(2.29996, Rounding::FloorTenth));
  CHECK_FALSE(near_tenth_boundary(2.25, Rounding::FloorTenth));
}

TEST_CASE("guarded rounding defers to the extended re-evaluation") {
  // Outside the window the cheap path answers and the callback is unused.
  CHECK(round_tenth_guarded(65.2673, Rounding::FloorTenth, [] {
          return 0.0L;  // would be wrong if consulted
        }) == 65.2);
  // Inside the window the extended value decides the digit.
  CHECK(round_tenth_guarded(1.04999, Rounding::NearestTenth,
                            [] { return 1.0501L; }) == 1.1);
  CHECK(round_tenth_guarded(1.05001, Rounding::NearestTenth,
                            [] { return 1.0499L; }) == 1.0);
  CHECK(round_tenth_guarded(2.29996, Rounding::FloorTenth,
                            [] { return 2.3001L; }) == 2.3);
  CHECK(round_tenth_guarded(2.30004, Rounding::FloorTenth,
                            [] { return 2.2999L; }) == 2.2);
  // Extended values within representation noise of a boundary snap to it.
  CHECK(round_tenth_guarded(2.30004, Rounding::FloorTenth,
                            [] { return 2.2999999999999998L; }) == 2.3);
}

TEST_CASE("raw formatting is lossless and ascii") {
  for (double v : {65.26739278218333, 1.0 / 3.0, 147.87787092859609}) {
    const std::string s = fmt_raw(v);
    CHECK(std::stod(s) == v);
    CHECK(s.find(',') == std::string::npos);
  }
  CHECK(fmt_raw(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(fmt_tenth(113.5) == "113.5");
  CHECK(fmt_tenth(104.9) == "104.9");
}

TEST_CASE("byte-identical output for identical invocations") {
  const OutputSpec csv{Format::Csv, std::nullopt};
  CHECK(table3(7, 15, csv) == table3(7, 15, csv));
  const auto reg = aggregate::builtin_registry();
  CHECK(table1(5, 13, reg, csv) == table1(5, 13, reg, csv));
  CHECK(registry_dump(reg, Format::Json) == registry_dump(reg, Format::Json));
  CHECK(scan_csv(7, 4, 33) == scan_csv(7, 4, 33));
}

TEST_CASE("raw values round to exactly the emitted rounded values") {
  const OutputSpec raw{Format::Csv, Rounding::None};
  const OutputSpec rounded{Format::Csv, std::nullopt};
  const std::string raw_csv = table3(7, 15, raw);
  const std::string rounded_csv = table3(7, 15, rounded);
  auto rows = [](const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'm') continue;
      out.push_back(aggregate::detail::split(line, ','));
    }
    return out;
  };
  const auto raw_rows = rows(raw_csv);
  const auto rounded_rows = rows(rounded_csv);
  REQUIRE(raw_rows.size() == rounded_rows.size());
  for (size_t i = 0; i < raw_rows.size(); ++i) {
    const double q = std::stod(raw_rows[i][1]);
    const double l = std::stod(raw_rows[i][2]);
    CHECK(fmt_tenth(round_nearest_tenth(q)) == rounded_rows[i][1]);
    CHECK(fmt_tenth(round_floor_tenth(l)) == rounded_rows[i][2]);
  }
}

TEST_CASE("table3 csv golden emission") {
  const std::string expected =
      "# codimension-3 thresholds: q_sphere = m(m-1) vol(S^m)^{2/m} "
      "(nearest 0.1), inf_L = infimum of L_m(c^2) over c (floor 0.1)\n"
      "# note: m=9 sphere constant 147.8779 rounds to 147.9 at the nearest "
      "tenth; elsewhere quoted to two decimals as 147.88\n"
      "m,q_sphere,inf_L\n"
      "7,113.5,65.2\n"
      "8,130.7,78.7\n"
      "9,147.9,91.8\n"
      "10,165.0,104.9\n"
      "11,182.2,118.1\n"
      "12,199.3,131.5\n"
      "13,216.4,145.0\n"
      "14,233.5,158.6\n"
      "15,250.6,172.4\n";
  CHECK(table3(7, 15, {Format::Csv, std::nullopt}) == expected);
}

TEST_CASE("table1 csv golden emission") {
  const auto reg = aggregate::builtin_registry();
  const std::string text = table1(5, 13, reg, {Format::Csv, std::nullopt});
  CHECK(text.find("5,79.0,45.1,-\n") != std::string::npos);
  CHECK(text.find("6,96.3,50.0,-\n") != std::string::npos);
  CHECK(text.find("8,130.7,78.7,121.4\n") != std::string::npos);
  CHECK(text.find("13,216.4,145.0,178.0\n") != std::string::npos);
}

TEST_CASE("cap report carries the renormalized sphere value") {
  const std::string text = cap_report(5, 3.14159265, {Format::Csv, std::nullopt});
  CHECK(text.find(",79.0\n") != std::string::npos);
  const auto j = ordered_json::parse(cap_report(5, pi_v<double>,
                                                {Format::Json, std::nullopt}));
  CHECK(double(j["renormalized"]) == 79.0);
  CHECK(std::abs(double(j["lambda_r"]) -
                 2.5 * std::pow(sphere_volume(5), 0.2)) < 1e-12);
}

TEST_CASE("bound report routes by (m, k)") {
  const auto reg = aggregate::builtin_registry();
  const std::string codim3_text =
      bound_report(8, 5, std::nullopt, reg, {Format::Csv, std::nullopt});
  CHECK(codim3_text.find("78.7") != std::string::npos);
  CHECK(codim3_text.find("codimension-3 infimum") != std::string::npos);
  const std::string mm2 =
      bound_report(9, 7, std::nullopt, reg, {Format::Text, std::nullopt});
  CHECK(mm2.find("threshold value = 0") != std::string::npos);
  const std::string unknown =
      bound_report(14, 2, std::nullopt, reg, {Format::Text, std::nullopt});
  CHECK(unknown.find("unknown") != std::string::npos);
  const std::string at_c =
      bound_report(7, 4, 0.5, reg, {Format::Csv, std::nullopt});
  CHECK(at_c.find(fmt_raw(codim3::L<double>(7, 0.25))) != std::string::npos);
}

TEST_CASE("scan rejects out-of-scope slots") {
  CHECK_THROWS_AS(scan_csv(9, 2, 10), domain_error);
  CHECK_THROWS_AS(scan_csv(7, 4, 1), domain_error);
  const std::string text = scan_csv(9, 7, 5);
  CHECK(text.find("c^{2/m} Q*(S^m)") != std::string::npos);
  // Endpoint values: 0 at c = 0 and the sphere constant at c = 1.
  CHECK(text.find("0,0\n") != std::string::npos);
  CHECK(text.find("1," + fmt_raw(yamabe_sphere(9)) + "\n") !=
        std::string::npos);
}

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "yamabe/emit.hpp"
#include "yamabe/registry.hpp"

using namespace yamabe;
using namespace yamabe::aggregate;

namespace {

const Registry& reg() {
  static const Registry r = builtin_registry();
  return r;
}

bool has_entry(const Registry& r, const std::string& inv, int m,
               std::optional<int> k, Direction d, double value,
               Provenance p) {
  for (const auto& e : r.entries)
    if (e.invariant == inv && e.m == m && e.k == k && e.direction == d &&
        e.provenance == p && e.value && *e.value == value)
      return true;
  return false;
}

}  // namespace

TEST_CASE("registry carries the expected literals") {
  CHECK(has_entry(reg(), "lambda_star", 5, 2, Direction::LowerStrict, 45.1,
                  Provenance::Cited));
  CHECK(has_entry(reg(), "lambda_star", 4, 1, Direction::LowerStrict, 38.9,
                  Provenance::Cited));
  CHECK(has_entry(reg(), "q_hp2", 8, std::nullopt, Direction::Equal, 121.4967,
                  Provenance::Tabulated));
  for (int m = 3; m <= registry_max_m; ++m)
    CHECK(has_entry(reg(), "lambda_star", m, m - 2, Direction::Equal, 0.0,
                    Provenance::Computed));
  // The solution-side invariant is infinite in dimensions 3 and 4.
  CHECK(has_entry(reg(), "lambda_tilde", 3, 2, Direction::Equal,
                  std::numeric_limits<double>::infinity(),
                  Provenance::Computed));
  CHECK(has_entry(reg(), "lambda_tilde", 5, 4, Direction::Equal,
                  yamabe_sphere(5), Provenance::Computed));
}

TEST_CASE("computed entries re-derive identically on regeneration") {
  const Registry again = builtin_registry();
  CHECK(again == reg());
}

TEST_CASE("aggregated spin threshold reproduces the published row") {
  CHECK(*lambda_spin_m(5, reg()) == 45.1);
  CHECK(*lambda_spin_m(6, reg()) == 50.0);
  CHECK(*lambda_spin_m(7, reg()) == 65.2);
  CHECK(*lambda_spin_m(13, reg()) == 145.0);
  // No per-slot backing beyond the published row: honest unknown.
  CHECK_FALSE(lambda_spin_m(14, reg()).has_value());
  CHECK_FALSE(lambda_spin_m(15, reg()).has_value());
  CHECK_THROWS_AS(lambda_spin_m(4, reg()), domain_error);
}

TEST_CASE("row equals the floored codimension-3 infimum on the overlap") {
  for (int m = 7; m <= 13; ++m) {
    const double floored =
        std::floor(codim3::infimum_L<double>(m).value * 10.0) / 10.0;
    CHECK(*lambda_spin_m(m, reg()) == floored);
  }
}

TEST_CASE("identification rule between the surgery and solution constants") {
  CHECK(lambda_equals_tilde(10, 6));   // k <= m-4
  CHECK(lambda_equals_tilde(9, 6));    // k = m-3 = 6
  CHECK(lambda_equals_tilde(7, 4));    // k = m-3 <= 6
  CHECK_FALSE(lambda_equals_tilde(10, 7));  // k = m-3 = 7
  CHECK_FALSE(lambda_equals_tilde(12, 9));
  CHECK_FALSE(lambda_equals_tilde(9, 7));   // k = m-2
  CHECK_FALSE(lambda_equals_tilde(9, 8));   // k = m-1
}

TEST_CASE("sigma lower-bound expressions per dimension case") {
  const auto sc6 = sigma_spin_lower(6, SigmaVariant::SimplyConnected, reg());
  REQUIRE(sc6.terms.size() == 1);
  CHECK(*sc6.value() == 50.0);

  const auto sc8 = sigma_spin_lower(8, SigmaVariant::SimplyConnected, reg());
  REQUIRE(sc8.terms.size() == 2);
  CHECK(*sc8.value() == 78.7);

  const auto sc9 = sigma_spin_lower(9, SigmaVariant::SimplyConnected, reg());
  REQUIRE(sc9.terms.size() == 3);
  CHECK_FALSE(sc9.terms[0].value.has_value());  // k = 1 slot is unbounded
  CHECK(*sc9.terms[1].value == 91.8);
  CHECK(*sc9.terms[2].value == 138.5);
  CHECK_FALSE(sc9.value().has_value());
  CHECK(sc9.render().find("unknown") != std::string::npos);

  // Fundamental-group variant adds the codimension-2 term, which has no
  // value, so the expression turns symbolic.
  const auto fg7 = sigma_spin_lower(7, SigmaVariant::FundamentalGroup, reg());
  REQUIRE(fg7.terms.size() == 2);
  CHECK_FALSE(fg7.value().has_value());
  CHECK_THROWS_AS(sigma_spin_lower(4, SigmaVariant::SimplyConnected, reg()),
                  domain_error);
}

TEST_CASE("min-combinator never undercuts a known term") {
  for (int m = 5; m <= 13; ++m)
    for (auto variant :
         {SigmaVariant::SimplyConnected, SigmaVariant::FundamentalGroup}) {
      const auto expr = sigma_spin_lower(m, variant, reg());
      const auto v = expr.value();
      if (!v) continue;
      for (const auto& t : expr.terms) {
        REQUIRE(t.value.has_value());
        CHECK(*v <= *t.value);
      }
    }
}

TEST_CASE("line serialization round-trips losslessly") {
  const std::string lines = to_lines(reg());
  const Registry parsed = from_lines(lines);
  CHECK(parsed == reg());
  CHECK(to_lines(parsed) == lines);
}

TEST_CASE("json serialization round-trips losslessly") {
  const auto j = emit::registry_to_json(reg());
  const Registry parsed = emit::registry_from_json(j);
  CHECK(parsed == reg());
  CHECK(emit::registry_to_json(parsed).dump(2) == j.dump(2));
  // Infinity survives the string detour.
  bool saw_inf = false;
  for (const auto& e : parsed.entries)
    if (e.value && std::isinf(*e.value)) saw_inf = true;
  CHECK(saw_inf);
}

TEST_CASE("randomized registries survive the line round-trip") {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> m_dist(2, 40);
  std::uniform_real_distribution<double> v_dist(-1e6, 1e6);
  std::uniform_int_distribution<int> pick(0, 4);
  const char* invariants[] = {"lambda_star", "lambda_spin", "q_hp2xr",
                              "custom_id", "lambda_tilde"};
  for (int trial = 0; trial < 50; ++trial) {
    Registry r;
    const int n = 1 + int(rng() % 20);
    for (int i = 0; i < n; ++i) {
      BoundRegistryEntry e;
      e.invariant = invariants[pick(rng)];
      e.m = m_dist(rng);
      if (rng() % 2) e.k = int(rng() % unsigned(e.m));
      e.direction = static_cast<Direction>(rng() % 5);
      switch (rng() % 4) {
        case 0: e.value = std::nullopt; break;
        case 1: e.value = std::numeric_limits<double>::infinity(); break;
        default: e.value = v_dist(rng);
      }
      e.provenance = static_cast<Provenance>(rng() % 3);
      e.citation = "trial " + std::to_string(trial) + " entry " +
                   std::to_string(i);
      r.entries.push_back(std::move(e));
    }
    const std::string lines = to_lines(r);
    CHECK(from_lines(lines) == r);
    CHECK(to_lines(from_lines(lines)) == lines);
    const auto j = emit::registry_to_json(r);
    CHECK(emit::registry_from_json(j) == r);
  }
}

TEST_CASE("serialization rejects malformed input") {
  CHECK_THROWS_AS(from_lines("lambda_star|3"), domain_error);
  CHECK_THROWS_AS(from_lines("lambda_star|3|2|sideways|1|computed|x"),
                  domain_error);
  CHECK_THROWS_AS(from_lines("lambda_star|3|2|lower|1|hearsay|x"),
                  domain_error);
  CHECK_THROWS_AS(from_lines("lambda_star|3|2|lower|abc|computed|x"),
                  domain_error);
}

#include <doctest.h>

#include <cmath>

#include "yamabe/constants.hpp"
#include "yamabe/special.hpp"

using namespace yamabe;

namespace {
constexpr double pi = pi_v<double>;
}

TEST_CASE("gamma at half-integers follows the exact recursion") {
  CHECK(gamma_half_integer(1.0) == 1.0);
  CHECK(gamma_half_integer(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-15));
  CHECK(gamma_half_integer(4.0) == 6.0);
  CHECK(gamma_half_integer(5.0) == 24.0);
  // gamma(3/2) = sqrt(pi)/2, gamma(7/2) = 15 sqrt(pi)/8
  CHECK(gamma_half_integer(1.5) ==
        doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-15));
  CHECK(gamma_half_integer(3.5) ==
        doctest::Approx(15.0 * std::sqrt(pi) / 8).epsilon(1e-15));
}

TEST_CASE("gamma rejects non-half-integers and non-positive arguments") {
  CHECK_THROWS_AS(gamma_half_integer(0.0), domain_error);
  CHECK_THROWS_AS(gamma_half_integer(-1.5), domain_error);
  CHECK_THROWS_AS(gamma_half_integer(0.25), domain_error);
  CHECK_THROWS_AS(gamma_half_integer(2.0000001), domain_error);
}

TEST_CASE("sphere volumes in low dimensions") {
  CHECK(sphere_volume(1) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(sphere_volume(2) == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(sphere_volume(3) == doctest::Approx(2 * pi * pi).epsilon(1e-15));
  CHECK_THROWS_AS(sphere_volume(0), domain_error);
  CHECK_THROWS_AS(sphere_volume(max_dimension + 1), domain_error);
}

TEST_CASE("volume recursion vol(S^m) = 2 pi vol(S^{m-2})/(m-1)") {
  for (int m = 3; m <= 40; ++m) {
    const double direct = sphere_volume(m);
    const double recursed = 2 * pi * sphere_volume(m - 2) / (m - 1);
    CHECK(std::abs(direct - recursed) <= 1e-14 * direct);
  }
}

TEST_CASE("sphere Yamabe constant") {
  // 6 * 2^{2/3} * pi^{4/3}
  const double q3 = 6.0 * std::pow(2.0, 2.0 / 3.0) * std::pow(pi, 4.0 / 3.0);
  CHECK(yamabe_sphere(3) == doctest::Approx(q3).epsilon(1e-15));
  CHECK(std::abs(yamabe_sphere(3) - 43.823233) < 1e-6);
  CHECK(std::abs(yamabe_sphere(7) - 113.5) < 0.05);
  CHECK(std::abs(yamabe_sphere(12) - 199.3) < 0.05);
  CHECK_THROWS_AS(yamabe_sphere(2), domain_error);
}

TEST_CASE("yamabe_sphere is strictly increasing on 3..40") {
  for (int m = 4; m <= 40; ++m)
    CHECK(yamabe_sphere(m) > yamabe_sphere(m - 1));
}

TEST_CASE("spin renormalization matches the sphere constant") {
  CHECK(spin_renormalize(5, 0.0) == 0.0);
  for (int m = 3; m <= 40; ++m) {
    const double lambda = m / 2.0 * std::pow(sphere_volume(m), 1.0 / m);
    const double renorm = spin_renormalize(m, lambda);
    const double qs = yamabe_sphere(m);
    CHECK(std::abs(renorm - qs) <= 1e-12 * qs);
  }
  CHECK_THROWS_AS(spin_renormalize(5, -1.0), domain_error);
}

TEST_CASE("sphere constants record satisfies the exponent identities") {
  for (int m : {3, 4, 7, 12, 40}) {
    const auto sc = sphere_constants(m);
    CHECK(sc.vol > 0);
    CHECK(sc.q_star > 0);
    CHECK(sc.a == doctest::Approx(4.0 * (m - 1) / (m - 2)));
    CHECK(sc.p_star == doctest::Approx(sc.p / (sc.p - 1)).epsilon(1e-15));
    CHECK(sc.q_conj == doctest::Approx(sc.q / (sc.q - 1)).epsilon(1e-15));
    CHECK(sc.q_star ==
          doctest::Approx(m * (m - 1) * std::pow(sc.vol, 2.0 / m)));
  }
}

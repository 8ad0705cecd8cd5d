#include <doctest.h>

#include <cmath>
#include <string>

#include "pccool/error.hpp"
#include "pccool/params.hpp"
#include "support.hpp"

using namespace pccool;
using pccool::testing::ParamGenerator;

TEST_CASE("validate names the offending field") {
  const PhysicalParams good{5, 0, 12, 0.1, 1, 1, 1};
  CHECK_NOTHROW(validate(good));

  auto message = [](PhysicalParams p) -> std::string {
    try {
      validate(p);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInvalidParams);
      return e.what();
    }
    return "";
  };
  PhysicalParams p = good;
  p.omega = -1;
  CHECK(message(p).find("omega") != std::string::npos);
  p = good;
  p.omega = 0;
  CHECK(message(p).find("omega") != std::string::npos);
  p = good;
  p.nu = 0;
  CHECK(message(p).find("nu") != std::string::npos);
  p = good;
  p.eta = -0.1;
  CHECK(message(p).find("eta") != std::string::npos);
  p = good;
  p.gamma_minus = -1;
  CHECK(message(p).find("gamma_minus") != std::string::npos);
  p = good;
  p.delta = NAN;
  CHECK(message(p).find("delta") != std::string::npos);
  p = good;
  p.gamma_plus = p.gamma_minus = p.gamma_zero = 0;
  CHECK(!message(p).empty());
}

TEST_CASE("negative detuning and zero coupling are valid") {
  CHECK_NOTHROW(validate({5, -30, 12, 0.0, 1, 0, 0}));
}

TEST_CASE("dressed frame at resonance") {
  const auto f = dressed_frame({5, 0, 12, 0.1, 1, 1, 1});
  CHECK(f.omega_bar == 5.0);
  CHECK(f.cos2_theta == 0.5);
  CHECK(f.sin2_theta == 0.5);
  CHECK(f.cos_2theta == 0.0);
  CHECK(f.sin_2theta == 1.0);
}

TEST_CASE("dressed frame at delta = -5 (cot 2theta = -0.5)") {
  const auto f = dressed_frame({5, -5, 12, 0.1, 1, 1, 1});
  CHECK(f.omega_bar == doctest::Approx(std::sqrt(31.25)).epsilon(1e-15));
  CHECK(f.cos2_theta == doctest::Approx(0.2763932022500210).epsilon(1e-14));
  CHECK(f.sin2_theta == doctest::Approx(0.7236067977499790).epsilon(1e-14));
  CHECK(f.cos_2theta / f.sin_2theta == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("dressed frame at the nu = 12 resonance") {
  const auto f = dressed_frame(pccool::testing::fig1_resonance());
  CHECK(f.omega_bar == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(f.cos2_theta == doctest::Approx((1 + std::sqrt(11.0) / 6) / 2).epsilon(1e-15));
  CHECK(f.cos2_theta == doctest::Approx(0.77639).epsilon(1e-5));
}

TEST_CASE("dressed frame limits") {
  const auto far_blue = dressed_frame({1, 1e8, 1, 0.1, 1, 1, 1});
  CHECK(far_blue.cos2_theta == doctest::Approx(1.0));
  CHECK(far_blue.sin2_theta > 0.0);  // no cancellation to zero
  CHECK(far_blue.sin2_theta == doctest::Approx(1e-16).epsilon(1e-6));
  const auto far_red = dressed_frame({1, -1e8, 1, 0.1, 1, 1, 1});
  CHECK(far_red.cos2_theta == doctest::Approx(1e-16).epsilon(1e-6));
  CHECK(far_red.sin2_theta == doctest::Approx(1.0));
}

TEST_CASE("dressed frame identities over random parameters") {
  ParamGenerator gen(11);
  for (int i = 0; i < 2000; ++i) {
    const PhysicalParams p = gen();
    const auto f = dressed_frame(p);
    CHECK(f.cos2_theta + f.sin2_theta == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.cos2_theta >= 0.0);
    CHECK(f.sin2_theta >= 0.0);
    CHECK(f.cos_2theta * f.cos_2theta + f.sin_2theta * f.sin_2theta ==
          doctest::Approx(1.0).epsilon(1e-14));
    // cos(2 theta) = cos^2 - sin^2, sin(2 theta) = 2 sin cos
    CHECK(f.cos2_theta - f.sin2_theta == doctest::Approx(f.cos_2theta).epsilon(1e-12));
    CHECK(4.0 * f.cos2_theta * f.sin2_theta ==
          doctest::Approx(f.sin_2theta * f.sin_2theta).epsilon(1e-12));
    // Monotone in delta: more blue detuning, more |1> character in the lower level.
    PhysicalParams q = p;
    q.delta += 1.0;
    CHECK(dressed_frame(q).cos2_theta >= f.cos2_theta);
  }
}

TEST_CASE("reference rate round trip") {
  CHECK(parse_reference_rate("gamma") == ReferenceRate::kGamma);
  CHECK(parse_reference_rate("gamma_plus") == ReferenceRate::kGammaPlus);
  CHECK(to_string(ReferenceRate::kGammaPlus) == "gamma_plus");
  CHECK_THROWS_AS(parse_reference_rate("hz"), Error);
}

TEST_CASE("free-space detection") {
  CHECK(is_free_space({5, 0, 12, 0.1, 1, 1, 1}));
  CHECK_FALSE(is_free_space({5, 0, 12, 0.1, 1, 0.2, 0.2}));
}

TEST_CASE("error kinds map to exit codes") {
  CHECK(exit_code(ErrorKind::kInvalidParams) == 1);
  CHECK(exit_code(ErrorKind::kUnknownPreset) == 1);
  CHECK(exit_code(ErrorKind::kZeroCoupling) == 2);
  CHECK(exit_code(ErrorKind::kDegenerateRates) == 2);
  CHECK(exit_code(ErrorKind::kTruncationBreach) == 3);
  CHECK(exit_code(ErrorKind::kNoSteadyState) == 3);
  CHECK(to_string(ErrorKind::kZeroCoupling) == "zero-coupling");
}

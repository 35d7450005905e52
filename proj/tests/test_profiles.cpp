#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dimred/profiles.hpp"
#include "support.hpp"

using namespace dimred;

namespace {

ProfileFragment fragment(std::string family, std::map<std::string, double> values) {
  ProfileFragment f;
  f.family = std::move(family);
  f.values = std::move(values);
  return f;
}

}  // namespace

TEST_CASE("closed-form values") {
  const auto c = RadiusProfile::constant(2.0).eval(5.0);
  CHECK(c == Jet<double>{2.0, 0.0, 0.0});

  const auto t = testing::junction().eval(0.0);
  CHECK(t.value == 2.0);
  CHECK(t.d1 == 1.0);
  CHECK(t.d2 == 0.0);

  CHECK_THROWS_AS(RadiusProfile::constant(1.0).eval(NAN), DomainError);
  CHECK_THROWS_AS(RadiusProfile(ProfileFamily::tanh_step, {1.0, 2.0}), ValidationError);
}

TEST_CASE("gaussian bump derivatives against central differences") {
  const auto g = RadiusProfile::gaussian_bump(1.0, 0.5, 1.0, 0.0);
  const double h = 1e-4, z = 1.0;
  const auto j = g.eval(z);
  const auto f = [&](double x) { return g.eval(x).value; };
  const double d1 = (f(z + h) - f(z - h)) / (2 * h);
  const double d2 = (f(z + h) - 2 * f(z) + f(z - h)) / (h * h);
  CHECK(std::abs(d1 - j.d1) <= 1e-6 * std::abs(j.d1));
  CHECK(std::abs(d2 - j.d2) <= 1e-6 * std::abs(j.d2) + 1e-6);
}

TEST_CASE("second difference converges at second order") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> zs(-3.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = testing::random_profile(rng);
    const double h = 0.05 * std::min(1.0, p.characteristic_scale());
    double e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double z = zs(rng);
      const auto f = [&](double x) { return p.eval(x).value; };
      const double exact = p.eval(z).d2;
      e1 += std::abs((f(z + h) - 2 * f(z) + f(z - h)) / (h * h) - exact);
      e2 += std::abs((f(z + h / 2) - 2 * f(z) + f(z - h / 2)) / (h * h / 4) - exact);
    }
    CAPTURE(trial);
    CHECK(std::log2(e1 / e2) >= 1.9);
  }
}

TEST_CASE("sum of terms is the sum of jets") {
  const auto a = testing::junction();
  const auto b = RadiusProfile::gaussian_bump(0.5, 0.3, 1.2, -0.4);
  const RadiusProfile s({a, b});
  for (double z : {-2.0, 0.0, 0.3, 1.7}) {
    auto expect = a.eval(z);
    expect += b.eval(z);
    CHECK(s.eval(z) == expect);
  }
}

TEST_CASE("parsing") {
  const auto c = parse_profile(fragment("constant", {{"a", 1.0}}));
  CHECK(c == RadiusProfile::constant(1.0));
  CHECK_THROWS_AS(parse_profile(fragment("constant", {{"a", -1.0}})), ValidationError);

  const auto t = parse_profile(fragment("tanh-step", {{"a", 2}, {"b", 1}, {"k", 0.5}, {"z0", 0}}));
  // 2 + tanh(5): 3 up to 1 - tanh 5 ~ 9.1e-5.
  CHECK(t.eval(10.0).value == doctest::Approx(2.0 + std::tanh(5.0)).epsilon(1e-15));
  CHECK(std::abs(t.eval(10.0).value - 3.0) < 1e-4);

  CHECK_THROWS_AS(parse_profile(fragment("spline", {{"a", 1}})), ParseError);
  CHECK_THROWS_AS(parse_profile(fragment("constant", {{"a", 1}, {"b", 2}})), ParseError);
  CHECK_THROWS_AS(parse_profile(fragment("tanh-step", {{"a", 2}, {"b", 1}, {"k", 0.5}})), ParseError);
  CHECK_THROWS_AS(parse_profile(fragment("gaussian-bump", {{"a", 1}, {"b", 1}, {"sigma", 0}, {"z0", 0}})),
                  ValidationError);
  CHECK_THROWS_AS(parse_profile(fragment("tanh-step", {{"a", 2}, {"b", 1}, {"k", -1}, {"z0", 0}})), ValidationError);
}

TEST_CASE("render and parse round trip") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto p = testing::random_profile(rng);
    CHECK(parse_profile(render_profile(p)) == p);
  }
  const RadiusProfile s({testing::junction(), RadiusProfile::constant(0.5)});
  CHECK(parse_profile(render_profile(s)) == s);
  const RadiusProfile deg(ProfileFamily::tanh_step, {0.0, 1.0, 1.0, 0.0}, true);
  CHECK(parse_profile(render_profile(deg)) == deg);
}

TEST_CASE("positivity reports") {
  const auto ok = validate_positivity(RadiusProfile::constant(1.0), {-10, 10}, 101);
  CHECK(ok.ok());
  CHECK(ok.min_value == 1.0);

  const auto bad = validate_positivity(RadiusProfile::tanh_step(1, -2, 1, 0), {-10, 10}, 101);
  CHECK_FALSE(bad.ok());
  CHECK(bad.min_value < 0.0);

  const auto g = validate_positivity(RadiusProfile::gaussian_bump(0.1, 1, 1, 0), {-5, 5}, 101);
  CHECK(g.ok());
  CHECK(g.min_value == doctest::Approx(0.1 + std::exp(-25.0)).epsilon(1e-14));
  CHECK(std::abs(g.argmin) == 5.0);

  const RadiusProfile deg(ProfileFamily::tanh_step, {0.0, 1.0, 1.0, 0.3}, true);
  const auto d = validate_positivity(deg, {-2, 2}, 101);
  CHECK(d.ok());
  REQUIRE(d.zero_crossings.size() == 1);
  CHECK(d.zero_crossings[0] == doctest::Approx(0.3).epsilon(1e-10));

  CHECK_THROWS_AS(validate_positivity(RadiusProfile::constant(1.0), {1, 1}, 10), ValidationError);
  CHECK_THROWS_AS(validate_positivity(RadiusProfile::constant(1.0), {0, 1}, 1), ValidationError);
}

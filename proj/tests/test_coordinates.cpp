#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dimred/coordinates.hpp"
#include "support.hpp"

using namespace dimred;
using testing::flat;
using testing::junction;

namespace {

// Antiderivative of sqrt(1 + e^{2z}) e^{-z}.
double exp_antiderivative(double z) { return std::asinh(std::exp(z)) - std::sqrt(1.0 + std::exp(2 * z)) * std::exp(-z); }

double exp_map_error(const UMap& map) {
  double worst = 0.0;
  for (int i = 0; i <= 60000; ++i) {
    const double z = -3.0 + 6.0 * i / 60000;
    worst = std::max(worst, std::abs(map.u_of_z(z) - (exp_antiderivative(z) - exp_antiderivative(0.0))));
  }
  return worst;
}

const Geometry exp_geometry(2, {RadiusProfile::exp_ramp(0.0, 1.0, 1.0, 0.0)});

}  // namespace

TEST_CASE("flat map is the identity") {
  const auto map = build_u_map(flat(3), {-10, 10}, 1e-10);
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double z = -10.0 + 0.02 * i;
    worst = std::max(worst, std::abs(map.u_of_z(z) - z));
  }
  CHECK(worst < 1e-12);
  CHECK(map.z_of_u(3.7) == doctest::Approx(3.7).epsilon(1e-15));
  CHECK_FALSE(map.truncated());
}

TEST_CASE("exponential radius against its antiderivative") {
  const auto map = build_u_map(exp_geometry, {-3, 3}, 1e-10);
  CHECK(exp_map_error(map) < 1e-10);
  CHECK(map.estimated_error() < 1e-10);
}

TEST_CASE("quadrature error follows the tolerance") {
  // Above ~1e-6 the panel cap, not the tolerance, sets most widths.
  double previous = exp_map_error(build_u_map(exp_geometry, {-3, 3}, 1e-6));
  for (double tol = 5e-7; tol > 1e-9; tol /= 2) {
    const double err = exp_map_error(build_u_map(exp_geometry, {-3, 3}, tol));
    CAPTURE(tol);
    CHECK(err <= tol);
    CHECK(err <= 0.5 * previous);
    previous = err;
  }
}

TEST_CASE("integrand and origin") {
  const Geometry g(3, {junction(), RadiusProfile::constant(1.0)});
  CHECK(dudz(g, 0.0) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  const auto map = build_u_map(g, {-5, 5}, 1e-11, 1.0);
  CHECK(map.u_of_z(1.0) == 0.0);
  for (std::size_t i = 1; i < map.u_grid().size(); ++i) CHECK(map.u_grid()[i] > map.u_grid()[i - 1]);
  double last = -INFINITY;
  for (int i = 0; i <= 5000; ++i) {
    const double u = map.u_of_z(-5.0 + 10.0 * i / 5000);
    CHECK(u > last);
    last = u;
  }
  CHECK_THROWS_AS(build_u_map(g, {-5, 5}, 1e-11, 6.0), ValidationError);
  CHECK_THROWS_AS(build_u_map(g, {-5, 5}, 0.0), ValidationError);
}

TEST_CASE("inversion") {
  const Geometry g(3, {junction(), RadiusProfile::gaussian_bump(1, 0.5, 1, 0)});
  const auto map = build_u_map(g, {-6, 6}, 1e-10);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> zs(-6, 6), us(map.u_domain().lo, map.u_domain().hi);
  double zz = 0.0, uu = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double z = zs(rng), u = us(rng);
    zz = std::max(zz, std::abs(map.z_of_u(map.u_of_z(z)) - z) / (1 + std::abs(z)));
    uu = std::max(uu, std::abs(map.u_of_z(map.z_of_u(u)) - u) / (1 + std::abs(u)));
  }
  CHECK(zz < 1e-10);
  CHECK(uu < 1e-10);

  CHECK(map.u_of_z(-6.0) == map.u_domain().lo);
  CHECK(map.u_of_z(6.0) == map.u_domain().hi);
  CHECK(map.z_of_u(map.u_domain().hi) == 6.0);
  CHECK(map.z_of_u(map.u_domain().lo) == -6.0);
  CHECK_THROWS_AS(map.u_of_z(6.0 + 1e-9), DomainError);
  CHECK_THROWS_AS(map.z_of_u(map.u_domain().lo - 1e-9), DomainError);
}

TEST_CASE("u-space radii") {
  const auto fm = build_u_map(flat(3), {-2, 2}, 1e-10);
  for (const auto& j : varrho_all(fm, flat(3), 0.5)) CHECK(j == Jet<double>{1.0, 0.0, 0.0});

  const Geometry g(3, {junction(), RadiusProfile::constant(1.0)});
  const auto map = build_u_map(g, {-5, 5}, 1e-12);
  const auto r = varrho(map, g, 0, 0.0);
  CHECK(r.value == 2.0);
  CHECK(r.d1 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(varrho(map, g, 0, map.u_domain().hi + 1.0), DomainError);

  // central differences along u converge to the chain-rule derivatives
  const Geometry g2(3, {junction(), RadiusProfile::gaussian_bump(1, 0.5, 1, 0)});
  const auto m2 = build_u_map(g2, {-5, 5}, 1e-13);
  for (double u : {-1.2, 0.3, 1.4}) {
    for (int a = 0; a < 2; ++a) {
      const auto exact = varrho(m2, g2, a, u);
      const auto err = [&](double h) {
        const auto p = varrho(m2, g2, a, u + h), m = varrho(m2, g2, a, u - h);
        return std::array<double, 2>{std::abs((p.value - m.value) / (2 * h) - exact.d1),
                                     std::abs((p.value - 2 * exact.value + m.value) / (h * h) - exact.d2)};
      };
      const auto e1 = err(0.04), e2 = err(0.02);
      CAPTURE(u);
      CAPTURE(a);
      CHECK(std::log2(e1[0] / e2[0]) >= 1.9);
      CHECK(std::log2(e1[1] / e2[1]) >= 1.9);
    }
  }
}

TEST_CASE("degenerating radius truncates the map") {
  const Geometry g(2, {RadiusProfile(ProfileFamily::tanh_step, {0.0, 1.0, 1.0, 0.0}, true)});
  const auto map = build_u_map(g, {-1, 2}, 1e-10, 1.0);
  CHECK(map.truncated());
  CHECK(map.requested_range() == Interval{-1, 2});
  CHECK(std::tanh(map.z_domain().lo) == doctest::Approx(1e-6).epsilon(1e-6));
  CHECK(map.z_domain().hi == 2.0);

  const Geometry bad(2, {RadiusProfile::tanh_step(1, -2, 1, 0)});
  CHECK_THROWS_AS(build_u_map(bad, {-1, 2}, 1e-10), DomainError);

  UMapOptions tight;
  tight.tol = 1e-12;
  tight.max_panels = 3;
  CHECK_THROWS_AS(build_u_map(Geometry(2, {junction()}), {-5, 5}, tight), SolverError);
}

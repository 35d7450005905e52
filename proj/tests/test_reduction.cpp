#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dimred/reduction.hpp"
#include "dimred/verify.hpp"
#include "support.hpp"

using namespace dimred;
using testing::flat;
using testing::junction;

namespace {

ModeSpec mode(double omega, double mass, std::vector<int> m, Coupling c = Coupling::minimal) {
  return {omega, mass, std::move(m), c};
}

Geometry junction_3d() { return Geometry(3, {junction(), RadiusProfile::constant(1.0)}); }

}  // namespace

TEST_CASE("mode validation") {
  CHECK_NOTHROW(mode(1, 0, {1, 2}).validate(3));
  CHECK_THROWS_AS(mode(1, 0, {1}).validate(3), ValidationError);
  CHECK_THROWS_AS(mode(1, -1, {1, 0}).validate(3), ValidationError);
  CHECK_THROWS_AS(mode(1, 0.5, {1, 0}, Coupling::conformal).validate(3), ValidationError);
  CHECK(kSchrodingerEnergy == 0.0);
}

TEST_CASE("z-equation coefficients") {
  const auto f = z_equation_coeffs(flat(3), mode(2, 1, {1, 0}), 0.7);
  CHECK(f.p == 1.0);
  CHECK(f.w == 2.0);

  const Geometry bump(3, {RadiusProfile::gaussian_bump(1, 0.5, 1, 0), RadiusProfile::constant(2)});
  const auto s = z_equation_coeffs(bump, mode(1.3, 1.3, {0, 0}), 0.4);
  CHECK(s.w == 0.0);

  const auto t = z_equation_coeffs(junction_3d(), mode(0, 0, {1, 1}), 0.0);
  CHECK(t.p == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(t.w == -1.25);
  CHECK_THROWS_AS(z_equation_coeffs(flat(3), mode(0, 0, {1, 1}, Coupling::conformal), 0.0), ValidationError);
}

TEST_CASE("minimal potential") {
  const auto fm = build_u_map(flat(3), {-5, 5}, 1e-10);
  for (double u : {-4.0, 0.0, 2.2})
    CHECK(potential(flat(3), fm, mode(1.5, 0.5, {1, 2}), u) == doctest::Approx(0.25 - 2.25 + 1 + 4).epsilon(1e-15));

  const Geometry g(3, {junction(), RadiusProfile::gaussian_bump(1, 0.5, 1, 0)});
  const auto map = build_u_map(g, {-5, 5}, 1e-11);
  for (double s : {-0.9, -0.2, 0.5}) CHECK(potential(g, map, mode(0.8, 0.8, {0, 0}), s * map.u_domain().hi) == 0.0);

  const auto jm = build_u_map(junction_3d(), {-5, 5}, 1e-11);
  CHECK(potential(junction_3d(), jm, mode(1, 0, {1, 0}), 0.0) == -3.0);
  CHECK_THROWS_AS(potential(junction_3d(), jm, mode(1, 0, {1, 0}), jm.u_domain().hi + 0.1), DomainError);
}

TEST_CASE("monotone coupling and sign structure") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> s(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const auto g = testing::random_geometry(3, rng);
    const auto map = build_u_map(g, {-3, 3}, 1e-10);
    const double u = map.u_domain().lo + s(rng) * map.u_domain().length();
    const double base = potential(g, map, mode(1.1, 0.3, {1, 1}), u);
    CHECK(potential(g, map, mode(1.1, 0.6, {1, 1}), u) >= base);
    CHECK(potential(g, map, mode(1.1, 0.3, {2, 1}), u) >= base);
    CHECK(potential(g, map, mode(1.1, 0.3, {1, -3}), u) >= base);
    CHECK(potential(g, map, mode(1.1, 0.3, {0, 0}), u) < 0.0);
    CHECK(potential(g, map, mode(0.3, 1.1, {0, 0}), u) > 0.0);
  }
}

TEST_CASE("single radius is the d = 2 limit") {
  const auto rho = RadiusProfile::gaussian_bump(1.2, 0.6, 0.8, 0.3);
  const Geometry g2(2, {rho});
  const Geometry g3(3, {rho, RadiusProfile::constant(1.0)});
  const auto m2 = build_u_map(g2, {-4, 4}, 1e-12);
  const auto m3 = build_u_map(g3, {-4, 4}, 1e-12);
  for (int i = 0; i <= 100; ++i) {
    const double u = m2.u_domain().lo + m2.u_domain().length() * i / 100;
    const double v2 = potential(g2, m2, mode(0.9, 0.4, {2}), u);
    const double v3 = potential(g3, m3, mode(0.9, 0.4, {2, 0}), u);
    CHECK(std::abs(v2 - v3) < 1e-10);
    const double r = varrho(m2, g2, 0, u).value;
    CHECK(v2 == doctest::Approx((0.16 - 0.81) * r * r + 4).epsilon(1e-13));
  }
}

TEST_CASE("conformal coupling") {
  CHECK(conformal_weight(3) == 6.0);
  CHECK(conformal_weight(2) == 8.0);
  for (int d = 2; d < 50; ++d) CHECK(conformal_weight(d + 1) < conformal_weight(d));
  CHECK(conformal_weight(1000000) == doctest::Approx(4.0).epsilon(1e-5));
  CHECK_THROWS_AS(conformal_weight(1), ValidationError);

  const auto fm = build_u_map(flat(3), {-5, 5}, 1e-10);
  CHECK(conformal_potential(flat(3), fm, mode(1.5, 0, {1, 2}, Coupling::conformal), 1.0) ==
        doctest::Approx(-2.25 + 5).epsilon(1e-15));
  CHECK(conformal_potential(flat(3), fm, mode(0, 0, {0, 0}, Coupling::conformal), 1.0) == 0.0);
  CHECK_THROWS_AS(conformal_potential(flat(3), fm, mode(1, 0, {0, 0}), 1.0), ValidationError);

  const Geometry g(3, {junction(), RadiusProfile::gaussian_bump(1, 0.5, 1, 0)});
  const auto map = build_u_map(g, {-5, 5}, 1e-11);
  CHECK(conformal_identity_error(g, map, mode(1.2, 0, {1, 1}), 201) < 1e-8);
  const Geometry g4(4, {junction(), RadiusProfile::gaussian_bump(1, 0.5, 1, 0), RadiusProfile::cosh_well(1, 0.2, 0.5, 0)});
  CHECK(conformal_identity_error(g4, build_u_map(g4, {-4, 4}, 1e-11), mode(0.7, 0, {1, 0, 2}), 201) < 1e-8);
}

TEST_CASE("thresholds") {
  CHECK(threshold(flat(3), mode(0, 1, {1, 1}), 0.0) == 3.0);
  CHECK(threshold(junction_3d(), mode(0, 1.5, {0, 0}), 2.0) == 2.25);
  const Geometry wide(3, {RadiusProfile::exp_ramp(1, 1, 1, 0), RadiusProfile::constant(2)});
  CHECK(threshold(wide, mode(0, 1, {1, 2}), 40.0) == doctest::Approx(1 + 1).epsilon(1e-15));
}

TEST_CASE("potential tables") {
  const auto g = junction_3d();
  const auto map = build_u_map(g, {-5, 5}, 1e-11);
  const auto t = tabulate_potential(g, map, mode(1.3, 0, {1, 0}), 101);
  CHECK(t.V.size() == 101);
  CHECK(t.V.start == map.u_domain().lo);
  CHECK(t.V.end() == doctest::Approx(map.u_domain().hi).epsilon(1e-15));
  CHECK(t.provenance == PotentialKind::minimal);
  for (Eigen::Index i : {0, 37, 100}) CHECK(t.V[i] == potential(g, map, t.mode, t.V.x(i)));

  const auto c = tabulate_potential(g, map, mode(1.3, 0, {1, 0}, Coupling::conformal), 101);
  CHECK(c.provenance == PotentialKind::conformal);

  const Interval sub{-1.0, 1.5};
  const auto s = tabulate_potential(g, map, mode(1.3, 0, {1, 0}), 31, &sub);
  CHECK(s.V.start == -1.0);
  CHECK(s.V.end() == doctest::Approx(1.5).epsilon(1e-15));

  const auto sp = tabulate_spectral_potential(g, map, mode(0, 0, {1, 0}), 101);
  const auto at = sp.at(1.69);
  for (Eigen::Index i : {0, 50, 100}) CHECK(at[i] == doctest::Approx(t.V[i]).epsilon(1e-14));
  const auto spc = tabulate_spectral_potential(g, map, mode(0, 0, {1, 0}, Coupling::conformal), 101);
  for (Eigen::Index i : {3, 50, 97}) CHECK(spc.at(1.69)[i] == doctest::Approx(c.V[i]).epsilon(1e-13));
}

TEST_CASE("z-space and u-space solutions coincide") {
  const Geometry g3(3, {junction(), RadiusProfile::gaussian_bump(1, 0.5, 1, 0)});
  const Geometry g4(4, {junction(), RadiusProfile::gaussian_bump(1.2, -0.3, 1.5, 0.5), RadiusProfile::cosh_well(1, 0.2, 0.5, 0)});
  const Geometry g2(2, {RadiusProfile::gaussian_bump(1, 0.5, 1, 0)});
  struct Case {
    const Geometry* g;
    ModeSpec m;
  };
  for (const auto& c : {Case{&g3, mode(2.5, 0.5, {1, 1})}, Case{&g4, mode(3.0, 0, {1, 0, 2})},
                        Case{&g2, mode(0.6, 0, {1})}}) {
    const auto study = transplant_study(*c.g, c.m, {-3, 3}, 100, 5);
    CAPTURE(c.g->dim());
    CHECK(study.final_relative() < 1e-6);
    CHECK(study.observed_order() >= 2.0);
  }
}

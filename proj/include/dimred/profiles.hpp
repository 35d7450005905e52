#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dimred/errors.hpp"
#include "dimred/grid.hpp"

namespace dimred {

// Value and first two derivatives of a scalar function at one point.
template <typename Scalar = double>
struct Jet {
  Scalar value{};
  Scalar d1{};
  Scalar d2{};

  Jet& operator+=(const Jet& o) {
    value += o.value;
    d1 += o.d1;
    d2 += o.d2;
    return *this;
  }
  bool operator==(const Jet&) const = default;
};

// Analytic families of compactification radius rho(z). Parameters, in order:
//   constant        a                  rho = a
//   tanh-step       a b k z0           rho = a + b tanh(k (z - z0))
//   gaussian-bump   a b sigma z0       rho = a + b exp(-(z - z0)^2 / sigma^2)
//   exp-ramp        a b k z0           rho = a + b exp(k (z - z0))
//   cosh-well       a b k z0           rho = a + b cosh(k (z - z0))
//   sum-of-terms    (none; owns a list of sub-profiles, rho = sum of terms)
enum class ProfileFamily { constant, tanh_step, gaussian_bump, exp_ramp, cosh_well, sum_of_terms };

std::string_view family_name(ProfileFamily family);
ProfileFamily family_from_name(std::string_view name);  // throws ParseError
std::span<const std::string_view> parameter_names(ProfileFamily family);

class RadiusProfile {
 public:
  // Throws ValidationError on wrong arity, non-finite parameters, or a
  // non-positive scale parameter (k, sigma).
  RadiusProfile(ProfileFamily family, std::vector<double> params, bool allows_degeneration = false);
  RadiusProfile(std::vector<RadiusProfile> terms, bool allows_degeneration = false);

  static RadiusProfile constant(double a) { return {ProfileFamily::constant, {a}}; }
  static RadiusProfile tanh_step(double a, double b, double k, double z0) {
    return {ProfileFamily::tanh_step, {a, b, k, z0}};
  }
  static RadiusProfile gaussian_bump(double a, double b, double sigma, double z0) {
    return {ProfileFamily::gaussian_bump, {a, b, sigma, z0}};
  }
  static RadiusProfile exp_ramp(double a, double b, double k, double z0) {
    return {ProfileFamily::exp_ramp, {a, b, k, z0}};
  }
  static RadiusProfile cosh_well(double a, double b, double k, double z0) {
    return {ProfileFamily::cosh_well, {a, b, k, z0}};
  }

  ProfileFamily family() const { return family_; }
  std::span<const double> params() const { return params_; }
  std::span<const RadiusProfile> terms() const { return terms_; }
  bool allows_degeneration() const { return allows_degeneration_; }

  // Length over which the profile changes appreciably (1/k, sigma, ...).
  // Constant profiles report +infinity.
  double characteristic_scale() const;

  // rho, rho', rho'' at z. Throws DomainError for non-finite z.
  template <typename Scalar = double>
  Jet<Scalar> eval(Scalar z) const;

  bool operator==(const RadiusProfile&) const = default;

 private:
  ProfileFamily family_;
  std::vector<double> params_;
  std::vector<RadiusProfile> terms_;
  bool allows_degeneration_ = false;
};

template <typename Scalar>
Jet<Scalar> RadiusProfile::eval(Scalar z) const {
  using std::cosh;
  using std::exp;
  using std::isfinite;
  using std::sinh;
  using std::tanh;
  if (!isfinite(z)) throw DomainError("radius profile evaluated at non-finite z");
  const auto p = [this](std::size_t i) { return static_cast<Scalar>(params_[i]); };
  switch (family_) {
    case ProfileFamily::constant:
      return {p(0), Scalar(0), Scalar(0)};
    case ProfileFamily::tanh_step: {
      const Scalar k = p(2);
      const Scalar t = tanh(k * (z - p(3)));
      const Scalar sech2 = Scalar(1) - t * t;
      return {p(0) + p(1) * t, p(1) * k * sech2, Scalar(-2) * p(1) * k * k * t * sech2};
    }
    case ProfileFamily::gaussian_bump: {
      const Scalar s2 = p(2) * p(2);
      const Scalar x = z - p(3);
      const Scalar e = p(1) * exp(-x * x / s2);
      return {p(0) + e, Scalar(-2) * x / s2 * e, (Scalar(4) * x * x / (s2 * s2) - Scalar(2) / s2) * e};
    }
    case ProfileFamily::exp_ramp: {
      const Scalar k = p(2);
      const Scalar e = p(1) * exp(k * (z - p(3)));
      return {p(0) + e, k * e, k * k * e};
    }
    case ProfileFamily::cosh_well: {
      const Scalar k = p(2);
      const Scalar x = k * (z - p(3));
      return {p(0) + p(1) * cosh(x), p(1) * k * sinh(x), p(1) * k * k * cosh(x)};
    }
    case ProfileFamily::sum_of_terms: {
      Jet<Scalar> total;
      for (const auto& term : terms_) total += term.eval(z);
      return total;
    }
  }
  return {};
}

// Config-level representation of a profile: the family name plus named reals.
// Keys other than those listed for the family are rejected by parse_profile.
struct ProfileFragment {
  std::string family;
  std::map<std::string, double> values;
  std::vector<ProfileFragment> terms;
  bool allows_degeneration = false;

  bool operator==(const ProfileFragment&) const = default;
};

RadiusProfile parse_profile(const ProfileFragment& fragment);
ProfileFragment render_profile(const RadiusProfile& profile);

struct PositivityReport {
  double min_value = 0.0;
  double argmin = 0.0;
  std::size_t violations = 0;          // samples with rho <= 0 (non-degenerating profiles)
  std::vector<double> zero_crossings;  // located sign changes (degenerating profiles)

  bool ok() const { return violations == 0; }
};

// Samples rho on n_samples uniformly spaced points of z_range.
PositivityReport validate_positivity(const RadiusProfile& profile, Interval z_range, int n_samples);

}  // namespace dimred

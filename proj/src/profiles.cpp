#include "dimred/profiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace dimred {

namespace {

constexpr std::array<std::string_view, 6> kFamilyNames = {"constant",  "tanh-step", "gaussian-bump",
                                                          "exp-ramp", "cosh-well", "sum-of-terms"};

constexpr std::array<std::string_view, 1> kConstantParams = {"a"};
constexpr std::array<std::string_view, 4> kTanhParams = {"a", "b", "k", "z0"};
constexpr std::array<std::string_view, 4> kGaussParams = {"a", "b", "sigma", "z0"};

constexpr std::string_view kTermsKey = "terms";

void check_parameters(ProfileFamily family, const std::vector<double>& params, bool degenerate) {
  const auto names = parameter_names(family);
  if (params.size() != names.size()) {
    throw ValidationError(std::string(family_name(family)) + " profile takes " + std::to_string(names.size()) +
                          " parameters, got " + std::to_string(params.size()));
  }
  for (double v : params) {
    if (!std::isfinite(v)) throw ValidationError(std::string(family_name(family)) + ": non-finite parameter");
  }
  switch (family) {
    case ProfileFamily::constant:
      if (degenerate ? params[0] < 0.0 : params[0] <= 0.0)
        throw ValidationError("constant profile: non-positive radius a = " + std::to_string(params[0]));
      break;
    case ProfileFamily::tanh_step:
    case ProfileFamily::cosh_well:
      if (params[2] <= 0.0) throw ValidationError(std::string(family_name(family)) + ": k must be positive");
      break;
    case ProfileFamily::gaussian_bump:
      if (params[2] <= 0.0) throw ValidationError("gaussian-bump: sigma must be positive");
      break;
    case ProfileFamily::exp_ramp:
      if (params[2] == 0.0) throw ValidationError("exp-ramp: k must be nonzero");
      break;
    case ProfileFamily::sum_of_terms:
      break;
  }
}

}  // namespace

std::string_view family_name(ProfileFamily family) { return kFamilyNames[static_cast<std::size_t>(family)]; }

ProfileFamily family_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFamilyNames.size(); ++i) {
    if (kFamilyNames[i] == name) return static_cast<ProfileFamily>(i);
  }
  throw ParseError("unknown profile family '" + std::string(name) + "'");
}

std::span<const std::string_view> parameter_names(ProfileFamily family) {
  switch (family) {
    case ProfileFamily::constant:
      return kConstantParams;
    case ProfileFamily::gaussian_bump:
      return kGaussParams;
    case ProfileFamily::tanh_step:
    case ProfileFamily::exp_ramp:
    case ProfileFamily::cosh_well:
      return kTanhParams;
    case ProfileFamily::sum_of_terms:
      return {};
  }
  return {};
}

RadiusProfile::RadiusProfile(ProfileFamily family, std::vector<double> params, bool allows_degeneration)
    : family_(family), params_(std::move(params)), allows_degeneration_(allows_degeneration) {
  if (family == ProfileFamily::sum_of_terms) throw ValidationError("sum-of-terms profile needs a term list");
  check_parameters(family_, params_, allows_degeneration_);
}

RadiusProfile::RadiusProfile(std::vector<RadiusProfile> terms, bool allows_degeneration)
    : family_(ProfileFamily::sum_of_terms), terms_(std::move(terms)), allows_degeneration_(allows_degeneration) {
  if (terms_.empty()) throw ValidationError("sum-of-terms profile needs at least one term");
}

double RadiusProfile::characteristic_scale() const {
  switch (family_) {
    case ProfileFamily::constant:
      return std::numeric_limits<double>::infinity();
    case ProfileFamily::gaussian_bump:
      return params_[2];
    case ProfileFamily::tanh_step:
    case ProfileFamily::exp_ramp:
    case ProfileFamily::cosh_well:
      return 1.0 / std::abs(params_[2]);
    case ProfileFamily::sum_of_terms: {
      double s = std::numeric_limits<double>::infinity();
      for (const auto& t : terms_) s = std::min(s, t.characteristic_scale());
      return s;
    }
  }
  return std::numeric_limits<double>::infinity();
}

RadiusProfile parse_profile(const ProfileFragment& fragment) {
  const ProfileFamily family = family_from_name(fragment.family);
  if (family == ProfileFamily::sum_of_terms) {
    if (!fragment.values.empty())
      throw ParseError("sum-of-terms takes no parameters besides '" + std::string(kTermsKey) + "', got '" +
                       fragment.values.begin()->first + "'");
    std::vector<RadiusProfile> terms;
    terms.reserve(fragment.terms.size());
    for (const auto& t : fragment.terms) terms.push_back(parse_profile(t));
    return RadiusProfile(std::move(terms), fragment.allows_degeneration);
  }
  if (!fragment.terms.empty())
    throw ParseError("'" + std::string(kTermsKey) + "' is only valid for sum-of-terms profiles");
  const auto names = parameter_names(family);
  for (const auto& [key, value] : fragment.values) {
    if (std::find(names.begin(), names.end(), key) == names.end())
      throw ParseError("unknown key '" + key + "' for " + fragment.family + " profile");
  }
  std::vector<double> params;
  params.reserve(names.size());
  for (const auto name : names) {
    const auto it = fragment.values.find(std::string(name));
    if (it == fragment.values.end())
      throw ParseError("missing parameter '" + std::string(name) + "' for " + fragment.family + " profile");
    params.push_back(it->second);
  }
  return RadiusProfile(family, std::move(params), fragment.allows_degeneration);
}

ProfileFragment render_profile(const RadiusProfile& profile) {
  ProfileFragment f;
  f.family = std::string(family_name(profile.family()));
  f.allows_degeneration = profile.allows_degeneration();
  if (profile.family() == ProfileFamily::sum_of_terms) {
    for (const auto& t : profile.terms()) f.terms.push_back(render_profile(t));
    return f;
  }
  const auto names = parameter_names(profile.family());
  for (std::size_t i = 0; i < names.size(); ++i) f.values[std::string(names[i])] = profile.params()[i];
  return f;
}

PositivityReport validate_positivity(const RadiusProfile& profile, Interval z_range, int n_samples) {
  if (n_samples < 2) throw ValidationError("positivity check needs at least two samples");
  if (!(z_range.hi > z_range.lo)) throw ValidationError("positivity check on an empty range");
  PositivityReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  const double h = z_range.length() / (n_samples - 1);
  const auto rho = [&](double z) { return profile.eval(z).value; };
  double prev_z = z_range.lo;
  double prev = rho(prev_z);
  for (int i = 0; i < n_samples; ++i) {
    const double z = i == n_samples - 1 ? z_range.hi : z_range.lo + i * h;
    const double r = rho(z);
    if (r < report.min_value) {
      report.min_value = r;
      report.argmin = z;
    }
    if (!profile.allows_degeneration() && r <= 0.0) ++report.violations;
    if (profile.allows_degeneration()) {
      if (r == 0.0) {
        report.zero_crossings.push_back(z);
      } else if (i > 0 && prev != 0.0 && (r < 0.0) != (prev < 0.0)) {
        double lo = prev_z, hi = z;
        const bool lo_negative = prev < 0.0;
        for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi);
          ((rho(mid) < 0.0) == lo_negative ? lo : hi) = mid;
        }
        report.zero_crossings.push_back(0.5 * (lo + hi));
      }
    }
    prev_z = z;
    prev = r;
  }
  return report;
}

}  // namespace dimred

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dimred/config.hpp"

namespace dimred {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured error (or figure of merit)
  double threshold = 0.0;  // pass bound
  std::string note;
};

// Passes when value < threshold (NaN fails).
CheckResult make_check(std::string name, double value, double threshold, std::string note = {});
// Passes when value >= threshold.
CheckResult make_lower_bound_check(std::string name, double value, double threshold, std::string note = {});

// max |R_closed - R_oracle| / (1 + |R_oracle|) over the samples, closed form
// evaluated from the u-space radii at z.
double curvature_closed_form_error(const Geometry& geom, std::span<const double> z);
// Same for the d = 3 z-space formula.
double curvature_closed_3d_error(const Geometry& geom, std::span<const double> z);

// max relative deviation of the pulled-back metric from diag(rho_1^2.., rho_d^2)
// and the largest off-diagonal entry.
struct EmbeddingError {
  double relative = 0.0;
  double offdiag = 0.0;
};
EmbeddingError embedding_error(const Geometry& geom, double z, std::span<const double> angles);

// Z(z) from the z-equation against psi(u(z)) from Numerov with matched data,
// at n_base * 2^level + 1 nodes for level = 0..levels-1.
struct TransplantLevel {
  std::size_t n = 0;
  double max_diff = 0.0;
  double psi_norm = 0.0;
};

struct TransplantStudy {
  std::vector<TransplantLevel> levels;

  double observed_order() const;    // mean log2 ratio of successive levels above rounding
  double final_relative() const;    // last max_diff / psi_norm
};

TransplantStudy transplant_study(const Geometry& geom, const ModeSpec& mode, Interval z_range, std::size_t n_base,
                                 int levels = 3, double slope = 0.5);

// max |V_c - V(M=0) - R/n_d prod varrho^2| / (1 + |V_c|) on n uniform u nodes.
double conformal_identity_error(const Geometry& geom, const UMap& map, const ModeSpec& mode, std::size_t n);

// Shooting against the finite-difference oracle on the same spectral potential.
struct SpectrumComparison {
  std::vector<double> shooting, oracle;
  std::vector<int> nodes;
  double max_relative = 0.0;  // infinity when the two disagree on the mode count
  bool contiguous_nodes = false;
};

SpectrumComparison compare_spectrum(const Geometry& geom, const UMap& map, const ModeSpec& mode,
                                    const SpectrumConfig& spectrum);

// All checks that apply to the configuration.
std::vector<CheckResult> verify_config(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace dimred

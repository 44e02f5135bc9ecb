#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qbessel {

struct IdentityRecord {
  std::string id;
  std::size_t grid_size = 0;
  double max_residual = 0;
  double tolerance = 0;
  bool passed = false;
  /// First evaluation that threw, if any; a throw counts as a failure.
  std::string error;
};

struct VerifyReport {
  std::vector<IdentityRecord> identities;
  bool passed() const {
    for (const auto& r : identities) {
      if (!r.passed) return false;
    }
    return !identities.empty();
  }
};

struct VerifyConfig {
  /// Restrict the grid to a single q and/or nu; unset means the default grid.
  std::optional<double> q;
  std::optional<double> nu;
  double eps = 1e-12;
  std::uint64_t seed = 0;
  /// Multiplies every tolerance.
  double tolerance_scale = 1;
};

/// Default grid: nu in {-0.5, 0, 0.3, 1, 1.5, 2.7}, q in {0.3, 0.5, 0.8},
/// x in {0.1, 0.5, 0.9, 1.5}.
std::vector<double> default_nu_grid();
std::vector<double> default_q_grid();
std::vector<double> default_x_grid();

/// A Hurwitz sample point with its frozen bound on the deviation at the
/// last m. The bounds are the deviations recomputed in extended precision,
/// raised to the double rounding floor where that is larger.
struct HurwitzSample {
  double nu;
  double q;
  double x;
  double bound;
};

std::vector<HurwitzSample> hurwitz_R_samples();
std::vector<HurwitzSample> hurwitz_tilde_r_samples();
/// m = 5, 10, 20, 40.
std::vector<long> hurwitz_m_list();

VerifyReport run_verify(const VerifyConfig& cfg);

}  // namespace qbessel

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbessel/io.hpp"

namespace qbessel::cli {

enum class Command { Eval, Zeros, Ortho, Lommel, Verify };
enum class BaseMode { Q, QSquared };
enum class OutFormat { Csv, Json };
enum class Family { R, P, SmallR, TildeR, H, TildeH };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitVerify = 3;

struct RunConfig {
  Command command = Command::Eval;
  double q = 0.5;
  double nu = 0;
  /// Unset picks q for the R and p polynomials and q^2 everywhere else.
  std::optional<BaseMode> base_mode;
  double eps = 1e-12;
  long n = 5;
  long m = 5;
  std::vector<double> x_values;
  OutFormat out_format = OutFormat::Csv;
  std::optional<std::string> out_path;

  Family family = Family::R;
  bool with_second = false;
  bool with_dq = false;
  std::uint64_t seed = 0;
  double tolerance_scale = 1;
  /// verify only: whether --q / --nu were given, which restricts the grid.
  bool q_given = false;
  bool nu_given = false;

  BaseMode effective_base_mode() const;
  /// The base p of the series: q or q^2 depending on the mode.
  double base() const;
};

/// Throws qbessel::Error with kind DomainError when an invariant fails.
void validate(const RunConfig& cfg);

struct Output {
  Meta meta;
  Table table;
  int status = kExitOk;
};

/// Runs the command and collects its table. Library errors propagate.
Output compute(const RunConfig& cfg);

/// compute() plus serialization to cfg.out_path or `out`; errors are turned
/// into exit codes and a JSON error record on `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (QBESSEL_EPS supplies the eps default) and calls run().
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string to_string(BaseMode mode);

}  // namespace qbessel::cli

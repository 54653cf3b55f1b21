#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace gjms::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitConvergence = 4;

/// Everything a run depends on. Written next to the results as config.json
/// and accepted back through --config.
struct RunConfig {
  std::string subcommand;
  int n = 3;
  double s = 1.0;
  /// Empty means the critical exponent.
  std::optional<double> alpha;
  std::vector<double> epsilon;
  int L = 64;
  int M = 96;
  /// Quadrature refinement for the Riesz potentials.
  double quad_tol = 1e-7;
  int quad_level = 4;
  std::uint64_t seed = 0;
  /// Subcommand default when empty.
  std::optional<double> tol;
  double bound = 1e-3;
  std::optional<double> amplitude;
  std::vector<double> x{0.5, 1.0, 2.0};
  std::vector<double> radii{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
  std::vector<std::string> init{"noisy_constant"};
  std::string out = "gjms_out";
  std::string format = "csv";
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

/// Parses argv, runs one subcommand and returns its exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gjms::cli

#pragma once

// Command-line front end. Parsing and execution live in the library so the
// tests can drive them without spawning a process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bellproc/dist.hpp"
#include "bellproc/verify.hpp"

namespace bellproc::cli {

enum class Command { table, moments, sample, simulate, verify };
enum class Method { inverse_cdf, compound };
enum class Format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  Command command = Command::table;
  double alpha = 1.0;
  double theta = 1.0;
  double lambda = 1.0;
  /// Time of the marginal for table, moments and sample; multiplies alpha.
  double t = 1.0;
  double horizon = 1.0;
  std::uint64_t n_samples = 1;
  std::uint64_t n_paths = 1;
  std::uint64_t seed = verify::kDefaultSeed;
  double tail_tol = kDefaultTailTol;
  Method method = Method::inverse_cdf;
  Format format = Format::csv;
  /// Empty means stdout.
  std::string output_path;
  std::optional<double> marginal;
  std::vector<std::pair<std::string, double>> perturb;

  /// DB(alpha t, theta, lambda), or DB(alpha, theta, lambda) for simulate.
  std::optional<DegenParams> params;
};

/// Thrown for --help; what() holds the help text.
struct HelpRequested {
  std::string text;
};

/// Parses argv (argv[0] is skipped) and validates every precondition of the
/// selected command. `env_seed` is the value of BELLPROC_SEED, if set.
/// Throws Error(parse) for usage errors, the validation Error for bad
/// parameters, and HelpRequested.
RunConfig parse_args(int argc, const char* const* argv, const char* env_seed = nullptr);

/// Runs a parsed command, writing its output to `out`. Returns the exit code.
int execute(const RunConfig& config, std::ostream& out);

/// parse_args + execute with diagnostics on `err` and output to `out` or the
/// --out file.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const char* env_seed = nullptr);

}  // namespace bellproc::cli

#pragma once

// Command-line front end. Exit codes: 0 success, 2 invalid configuration,
// 3 numerical-contract violation.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gmelab/error.hpp"

namespace gmelab::cli {

enum class command { thresholds, concurrence, verify_decomposition, ppt_scan, witness_scan, locc_demo };
enum class output_format { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct Grid {
  double start = 0.0;
  double stop = 1.0;
  int steps = 11;

  /// `steps` evenly spaced points including both ends; one step gives `start`.
  std::vector<double> points() const;
};

struct RunConfig {
  command cmd = command::thresholds;
  int n = 3;
  std::optional<int> n_max;  // thresholds: rows for N = n..n_max
  int k_max = 4;
  Grid p_grid;
  output_format format = output_format::csv;
  std::string out_path;       // empty: standard output
  std::optional<double> tol;  // overrides the command's default contract tolerance

  // witness-scan
  std::string mode = "triangle";
  std::optional<double> x;
  std::optional<double> z;
  // locc-demo
  std::array<double, 3> probs{1.0 / 3, 1.0 / 3, 1.0 / 3};
  double locc_x = 1.0;
  double locc_y = 0.3;
  double locc_z = 0.3;
  std::string export_path;
  // ppt-scan
  std::string state_path;

  /// Throws error(invalid_argument) on a malformed configuration.
  void validate() const;
};

struct CommandResult {
  CommandResult() = default;
  CommandResult(std::string text) : output(std::move(text)) {}

  std::string output;
  int exit_code = kExitOk;
  std::string message;  // diagnostic for standard error
};

/// Runs one command; library errors propagate as gmelab::error.
CommandResult run(const RunConfig& cfg);

int exit_code_for(errc code) noexcept;

/// Parses argv, runs the command and writes to `out` (or --out) and `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Thread cap from GME_LAB_THREADS (default: hardware concurrency).
unsigned thread_budget();

}  // namespace gmelab::cli

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qmprob::cli {

/// Exit codes of `run`.
inline constexpr int exit_pass = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

/// Environment variable naming the default report directory.
inline constexpr const char* output_dir_env = "QMPROB_OUTPUT_DIR";

struct RunConfig {
  std::string command;
  std::string family = "gaussian";
  std::optional<std::string> input;
  double alpha = 1.0;
  double beta = 0.0;
  double b = 0.0;
  double center = 0.0;
  double momentum = 0.0;
  std::optional<double> energy;
  double tau = 1.0;
  std::optional<std::string> grid;
  double hbar = 1.0;
  double m0 = 1.0;
  double c = 1.0;
  double q = 1.0;
  bool dispersion = false;
  int random = 0;
  unsigned long long seed = 12345;
  double tolerance = 1e-6;
  std::optional<std::string> output;
  std::optional<std::string> csv;
  int jobs = 1;
};

struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
  std::optional<double> oracle;
};

/// value ≥ bound, with the relative allowance used by the uncertainty reports.
Check at_least(std::string name, double value, double bound);
/// value ≤ bound.
Check at_most(std::string name, double value, double bound);
/// |value − oracle| ≤ tol; bound carries tol and slack tol − |value − oracle|.
Check close_to(std::string name, double value, double oracle, double tol);

/// Runs one subcommand. argv[0] is the program name. Reports go to
/// --output, else $QMPROB_OUTPUT_DIR/<command>.json, else standard output.
int run(const std::vector<std::string>& argv);
int run(int argc, const char* const* argv);

/// Evaluates every check selected by `config.command`, in a fixed order.
/// Throws qmprob::Error on input problems.
std::vector<Check> run_checks(const RunConfig& config);

/// Report document with `schema: 1`; overall pass ⇔ every check passes.
nlohmann::ordered_json make_report(const RunConfig& config, const std::vector<Check>& checks, double seconds);

}  // namespace qmprob::cli

#pragma once

// Batch verification runs: configuration, check records, command dispatch and
// machine-readable reports (JSON or CSV) written atomically.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "beltrami/quadrature.hpp"

namespace beltrami {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;          // see report_commands()
  std::string manifold = "s3";  // optimality-scan target: s3, rp3 or t3
  std::uint64_t seed = 20240611;
  double tol_exact = 1e-10;  // closed-form constants and identities
  double tol_float = 1e-8;   // quantities built from floating quadrature or eigensolves
  int dmax = 3;              // atlas span, Galerkin truncation, torus |k| cutoff
  QuadratureSpec fd_quadrature{40, 64};
  QuadratureSpec scan_quadrature{20, 40};
  std::vector<double> t_grid{-0.05, -0.02, -0.01, 0.0, 0.01, 0.02, 0.05};
  int directions = 10;  // taylor-check: random perturbation directions and correction draws
  int samples = 200;    // local-max-scan
  double radius = 0.05;
  int second_variation_draws = 100;
  int scan_polynomials = 10;
  int annulus_n_max = 10;
  double annulus_cutoff = 3.0;
  std::string out;  // empty: write to stdout
  std::string format = "json";

  std::string to_json() const;
  // Missing keys keep their defaults; unknown keys and bad values throw ConfigError.
  static RunConfig from_json(const std::string& text);
  void validate() const;  // throws ConfigError
  friend bool operator==(const RunConfig&, const RunConfig&);
};

const std::vector<std::string>& report_commands();

// pass <=> error <= tolerance, where error is rel_error when `relative` and abs_error
// otherwise. One-sided checks store the amount of violation as the error.
struct CheckRecord {
  std::string id;
  std::string anchor;
  std::string expected_exact;
  double expected = 0.0;
  double computed = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool relative = false;
  bool pass = false;
  double wall_time = 0.0;  // seconds spent producing this record
};

// Field order of CheckRecord; also the CSV header.
const std::vector<std::string>& check_record_columns();

struct Report {
  std::string command;
  RunConfig config;
  std::vector<CheckRecord> checks;
  std::string details_json = "{}";  // command specific data, deterministic
  std::string timestamp;             // UTC, the only time-of-run field in JSON output
  bool all_pass() const;
  int passed() const;
};

// Runs the checks of config.command (config must be valid).
Report execute(const RunConfig& config);

std::string render_json(const Report& r);
// One header line, one row per check. wall_time is the only run-dependent column.
std::string render_csv(const Report& r);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomically(const std::string& path, const std::string& content);

// Exit status: 0 all checks pass, 1 some check failed, 2 invalid configuration.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace beltrami

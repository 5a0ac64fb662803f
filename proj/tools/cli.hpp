#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <rbm/laplace.hpp>
#include <rbm/mc_oracle.hpp>

namespace rbm::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int { ok = 0, usage_error = 1, invalid_params = 2, numerical_failure = 3 };

struct Grid {
  std::string axis = "theta2";  // theta2 (phi1) or theta1 (phi2)
  double lo = -5.0;
  double hi = 0.0;
  int count = 51;
  double imag = 0.0;  // constant imaginary part of the grid points
};

struct RunSpec {
  std::string subcommand;  // validate | geometry | curve | classify | eval | compare | simulate | report
  std::string params_path;
  std::optional<std::string> out_path;  // stdout when absent
  double tol = 1e-10;                   // relative quadrature tolerance of phi
  double classify_tol = 1e-8;           // equality tolerance of the tail table, times scale
  double margin = 1e-3;                 // direct-evaluation margin to the curve, times scale
  Grid grid;
  SimConfig sim;
  std::complex<double> theta1 = -1.0;  // simulate: point of the transform estimate
  std::complex<double> theta2 = -1.0;
  bool with_monte_carlo = false;  // report: append a Monte Carlo cross-check
  unsigned threads = 0;
};

// Parses "LO:HI" into a pair. Throws std::invalid_argument.
std::pair<double, double> parse_range(const std::string& text);
// Parses "AXIS:LO:HI:COUNT". Throws std::invalid_argument.
Grid parse_grid(const std::string& text);
// Parses "a,b" with each entry a real number or a complex number written re+imj.
std::pair<std::complex<double>, std::complex<double>> parse_theta(const std::string& text);

// Builds a RunSpec from the command line. Returns nullopt after printing help
// or a usage error; exit_code is set accordingly.
std::optional<RunSpec> parse_command_line(int argc, const char* const* argv, int& exit_code,
                                          std::ostream& out, std::ostream& err);

// Executes the subcommand, writing the artifact to spec.out_path (or out) and
// diagnostics to err. Returns one of the ExitCode values.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace rbm::cli

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "responsum/system.hpp"
#include "responsum/types.hpp"

namespace responsum {

// Controls for the Newton-on-average-equation solve and the underlying series.
struct SolveConfig {
  double epsilon = 1e-2;
  int k_max = 8;
  int n_trunc = -1;  // -1: pick from k_max and the forcing support
  double tol_newton = 1e-12;
  double tol_picard = 1e-13;
};

// Controls for the reference integration and residual checks.
struct VerifyConfig {
  double t_end = -1.0;  // -1: dissipation-based default
  double step_tol = 1e-10;
  double transient_fraction = 0.75;
};

// Target coefficient for the diagrammatic cross-check.
struct OracleConfig {
  int k = 3;
  Mode nu;  // empty until set by config or command line
};

struct SweepConfig {
  std::vector<double> epsilon_list;
};

// Controls for spectral / small-divisor reporting.
struct BoundsConfig {
  int N = 10;
  double xi = -1.0;  // -1: ln(10) / max forcing mode norm, floored at ln(10)
  double rho = 1.0;
};

struct RunConfig {
  SystemSpec system;
  SolveConfig solve;
  VerifyConfig verify;
  OracleConfig oracle;
  SweepConfig sweep;
  BoundsConfig bounds;
  std::string output_dir = ".";
  std::vector<std::string> warnings;  // non-fatal notes collected while parsing
};

/// Parses the compact inline notation ("0.5 x1^2 - x1 x2") into a polynomial
/// in m variables. Only offered for m <= 3; larger systems use term lists.
Polynomial parse_poly_string(const std::string& text, int m);

/// Builds a RunConfig from its JSON form. `source` names the origin (file
/// path or "<inline>") for error messages. Throws ParseError on structural
/// problems and ValidationError on semantic ones.
RunConfig parse_config_json(const nlohmann::json& j, const std::string& source);

/// Reads and parses a JSON config file.
RunConfig parse_config(const std::string& path);

/// Canonical JSON form of a config; parse_config_json(config_to_json(c))
/// reproduces an equivalent RunConfig.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace responsum

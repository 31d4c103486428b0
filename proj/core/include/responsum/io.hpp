#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "responsum/bifurcation.hpp"
#include "responsum/propagator.hpp"
#include "responsum/series.hpp"
#include "responsum/trees.hpp"
#include "responsum/verify.hpp"

namespace responsum {

/// One evaluation of the resolvent norm against its certified bound.
struct BoundSample {
  double epsilon = 0.0;
  double s = 0.0;
  double inverse_norm = 0.0;
  double bound = 0.0;
};

nlohmann::json solution_to_json(const Vec& c, const Vec& zeta, double epsilon, const FourierMap& u,
                                const RatioDiagnostics& diagnostics,
                                const std::vector<std::string>& flags);

/// decay may be null when too few orders are available to fit a rate.
nlohmann::json report_to_json(const ResidualReport& residual, double attractor_deviation,
                              const Trajectory& traj, const DecayReport* decay);

nlohmann::json bounds_to_json(const SpectralData& sd, const SmallDivisorReport& divisors,
                              const std::vector<BoundSample>& samples);

nlohmann::json oracle_to_json(int k, const Mode& nu, const OracleResult& oracle,
                              const CVec& recursion_value, long counting_checked);

/// Header row plus one row per record, full double precision.
std::string sweep_to_csv(std::span<const BifurcationSolveRecord> records);

std::string trajectory_to_csv(const Trajectory& traj);

void write_json_file(const std::string& path, const nlohmann::json& j);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace responsum

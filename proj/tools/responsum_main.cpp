// Command-line driver: solve for quasi-periodic responses of strongly damped
// oscillators, verify them against direct integration, and cross-check the
// series recursion against its diagrammatic expansion.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "responsum/bifurcation.hpp"
#include "responsum/config.hpp"
#include "responsum/errors.hpp"
#include "responsum/io.hpp"
#include "responsum/propagator.hpp"
#include "responsum/series.hpp"
#include "responsum/system.hpp"
#include "responsum/taylor.hpp"
#include "responsum/trees.hpp"
#include "responsum/verify.hpp"

namespace {

using namespace responsum;

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<double> epsilon;
  std::optional<int> k_max;
  std::optional<int> n_trunc;
  std::optional<int> oracle_k;
  std::optional<std::string> oracle_nu;
  std::optional<int> bounds_N;
};

Mode parse_mode_arg(const std::string& text, int d) {
  Mode nu;
  std::stringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    try {
      size_t used = 0;
      nu.push_back(std::stoi(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw ParseError("--nu: '" + piece + "' is not an integer");
    }
  }
  if (static_cast<int>(nu.size()) != d)
    throw ParseError("--nu needs " + std::to_string(d) + " comma-separated integers");
  return nu;
}

RunConfig load_config(const CliOptions& opt) {
  RunConfig config = parse_config(opt.config_path);
  for (const std::string& w : config.warnings) std::cerr << "warning: " << w << "\n";
  if (!opt.out_dir.empty()) config.output_dir = opt.out_dir;
  if (opt.epsilon) config.solve.epsilon = *opt.epsilon;
  if (opt.k_max) config.solve.k_max = *opt.k_max;
  if (opt.n_trunc) config.solve.n_trunc = *opt.n_trunc;
  if (opt.oracle_k) config.oracle.k = *opt.oracle_k;
  if (opt.oracle_nu) config.oracle.nu = parse_mode_arg(*opt.oracle_nu, config.system.d);
  if (opt.bounds_N) config.bounds.N = *opt.bounds_N;
  if (!(config.solve.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (config.solve.k_max < 1) throw ValidationError("k_max must be at least 1");
  if (config.oracle.k < 1) throw ValidationError("oracle order k must be at least 1");
  if (config.bounds.N < 1) throw ValidationError("bounds N must be at least 1");
  std::filesystem::create_directories(config.output_dir);
  return config;
}

std::string out_path(const RunConfig& config, const std::string& name) {
  return (std::filesystem::path(config.output_dir) / name).string();
}

double auto_xi(const RunConfig& config) {
  if (config.bounds.xi > 0.0) return config.bounds.xi;
  return std::log(10.0) / std::max(1, config.system.max_forcing_mode());
}

struct SolveOutput {
  Vec c;
  TaylorTensors tensors;
  BifurcationSolveRecord record;
  OrderSeries orders;
  SummedSeries summed;
};

SolveOutput run_solve(const RunConfig& config) {
  const SystemSpec& spec = config.system;
  SolveOutput out;
  out.c = find_minimum(build_U(spec), Vec::Zero(spec.m), config.solve.tol_newton);
  out.tensors = taylor_tensors(spec, out.c);
  SeriesParams params{config.solve.k_max, config.solve.n_trunc};
  out.record = solve_zeta(config.solve.epsilon, spec, out.tensors, Vec::Zero(spec.m),
                          config.solve.tol_newton, 50, params);
  out.orders = compute_series(config.solve.epsilon, spec, out.tensors, out.record.zeta,
                              config.solve.k_max, config.solve.n_trunc);
  out.summed = sum_series(out.orders);
  return out;
}

int cmd_solve(const RunConfig& config) {
  SolveOutput out = run_solve(config);
  nlohmann::json sol = solution_to_json(out.c, out.record.zeta, config.solve.epsilon, out.summed.u,
                                        out.summed.diagnostics, {});
  const std::string path = out_path(config, "solution.json");
  write_json_file(path, sol);
  std::printf("solve: epsilon = %g, newton iterations = %d, |H| = %.3e, sup|u| = %.3e\n",
              config.solve.epsilon, out.record.newton_iters, out.record.H_residual,
              out.record.u_sup_norm);
  std::printf("solve: %zu Fourier modes written to %s\n", out.summed.u.size(), path.c_str());
  if (out.summed.diagnostics.non_convergent)
    std::printf("solve: NON_CONVERGENT (order ratio %.3f >= 1)\n", out.summed.diagnostics.ratio);
  if (!out.record.converged) std::printf("solve: average equation Newton did not converge\n");
  return out.record.converged && !out.summed.diagnostics.non_convergent ? 0 : 2;
}

int cmd_verify(const RunConfig& config) {
  const SystemSpec& spec = config.system;
  SolveOutput out = run_solve(config);
  if (!out.record.converged || out.summed.diagnostics.non_convergent) {
    std::printf("verify: solve stage did not converge, nothing to verify\n");
    return 2;
  }
  ResidualReport residual =
      ode_residual(out.summed.u, out.record.zeta, out.c, config.solve.epsilon, spec, out.tensors);
  SpectralData sd = spectral_data(spec.damping, out.tensors.A, spec.mass);
  double t_end = config.verify.t_end > 0.0 ? config.verify.t_end
                                           : default_t_end(config.solve.epsilon, sd);
  Trajectory traj = integrate_reference(config.solve.epsilon, spec, out.c, Vec::Zero(spec.m), t_end,
                                        config.verify.step_tol);
  double deviation = attractor_compare(traj, out.summed.u, out.record.zeta, out.c, spec.omega,
                                       config.verify.transient_fraction);
  DecayReport decay;
  bool have_decay = true;
  try {
    decay = decay_report(out.orders, spec, out.tensors, config.bounds.rho, auto_xi(config));
  } catch (const InsufficientData&) {
    have_decay = false;
  }
  nlohmann::json rep = report_to_json(residual, deviation, traj, have_decay ? &decay : nullptr);
  const std::string path = out_path(config, "report.json");
  write_json_file(path, rep);
  std::printf("verify: residual sup = %.3e (dominant mode %s), l2 = %.3e\n", residual.sup_norm,
              mode_to_string(residual.dominant_mode).c_str(), residual.l2_norm);
  std::printf("verify: attractor deviation = %.3e over t in [%.3g, %.3g] (%ld steps, %ld rejected)\n",
              deviation, config.verify.transient_fraction * t_end, t_end, traj.steps, traj.rejected);
  if (have_decay) std::printf("verify: fitted decay rate xi = %.3f\n", decay.xi_fit);
  std::printf("verify: report written to %s\n", path.c_str());
  return 0;
}

int cmd_oracle(const RunConfig& config) {
  const SystemSpec& spec = config.system;
  if (config.oracle.nu.empty())
    throw ValidationError("oracle needs a target mode: set oracle.nu in the config or pass --nu");
  const int k = config.oracle.k;
  const Mode& nu = config.oracle.nu;
  Vec c = find_minimum(build_U(spec), Vec::Zero(spec.m), config.solve.tol_newton);
  TaylorTensors tensors = taylor_tensors(spec, c);
  Vec zeta = Vec::Zero(spec.m);
  OracleResult oracle = oracle_sum(k, nu, config.solve.epsilon, zeta, tensors, spec);
  OrderSeries orders = compute_series(config.solve.epsilon, spec, tensors, zeta, k, -1);
  CVec recursion = orders.order(k).coeff(nu);
  nlohmann::json j = oracle_to_json(k, nu, oracle, recursion, oracle.labelled_total);
  const std::string path = out_path(config, "oracle.json");
  write_json_file(path, j);
  double diff = (oracle.value - recursion).cwiseAbs().maxCoeff();
  std::printf("oracle: order %d, mode %s: %ld trees, |tree sum - recursion| = %.3e\n", k,
              mode_to_string(nu).c_str(), oracle.tree_count, diff);
  std::printf("oracle: counting check failed on %ld of %ld labelled trees\n",
              oracle.counting_failures, oracle.labelled_total);
  std::printf("oracle: written to %s\n", path.c_str());
  return 0;
}

int cmd_sweep(const RunConfig& config) {
  const SystemSpec& spec = config.system;
  if (config.sweep.epsilon_list.empty())
    throw ValidationError("sweep needs a strictly decreasing sweep.epsilon_list in the config");
  Vec c = find_minimum(build_U(spec), Vec::Zero(spec.m), config.solve.tol_newton);
  TaylorTensors tensors = taylor_tensors(spec, c);
  SeriesParams params{config.solve.k_max, config.solve.n_trunc};
  std::vector<BifurcationSolveRecord> records =
      sweep_epsilon(config.sweep.epsilon_list, spec, tensors, config.solve.tol_newton, params);
  const std::string path = out_path(config, "sweep.csv");
  write_text_file(path, sweep_to_csv(records));
  int failed = 0;
  for (const auto& r : records)
    if (!r.converged) ++failed;
  std::printf("sweep: %zu epsilon values, %d unconverged, written to %s\n", records.size(), failed,
              path.c_str());
  return failed == 0 ? 0 : 2;
}

int cmd_bounds(const RunConfig& config) {
  const SystemSpec& spec = config.system;
  Vec c = find_minimum(build_U(spec), Vec::Zero(spec.m), config.solve.tol_newton);
  TaylorTensors tensors = taylor_tensors(spec, c);
  SpectralData sd = spectral_data(spec.damping, tensors.A, spec.mass);
  double xi = auto_xi(config);
  SmallDivisorReport divisors =
      small_divisor_scan(spec.omega, config.bounds.N, xi, sd.alphaEstimate);
  const double eps_star = sd.alphaEstimate / sd.b[0];
  std::vector<BoundSample> samples;
  for (double ef : {0.5, 0.05, 0.005}) {
    const double eps = ef * eps_star;
    for (double sf : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double s = sf * sd.alphaEstimate;
      samples.push_back({eps, s, inverse_norm(assemble_D(eps, s, spec, tensors.A)),
                         norm_bound(eps, s, sd)});
    }
    samples.push_back({eps, divisors.sN, inverse_norm(assemble_D(eps, divisors.sN, spec, tensors.A)),
                       norm_bound(eps, divisors.sN, sd)});
  }
  nlohmann::json j = bounds_to_json(sd, divisors, samples);
  const std::string path = out_path(config, "bounds.json");
  write_json_file(path, j);
  std::printf("bounds: alpha = %.6g, s_%d = %.6g at mode %s, r_%d = %.6g, delta_%d = %.3e\n",
              sd.alphaEstimate, divisors.N, divisors.sN, mode_to_string(divisors.argmin).c_str(),
              divisors.N, divisors.rN, divisors.N, divisors.deltaN);
  std::printf("bounds: %zu bound samples written to %s\n", samples.size(), path.c_str());
  return 0;
}

int cmd_integrate(const RunConfig& config) {
  const SystemSpec& spec = config.system;
  Vec c = find_minimum(build_U(spec), Vec::Zero(spec.m), config.solve.tol_newton);
  TaylorTensors tensors = taylor_tensors(spec, c);
  SpectralData sd = spectral_data(spec.damping, tensors.A, spec.mass);
  double t_end = config.verify.t_end > 0.0 ? config.verify.t_end
                                           : default_t_end(config.solve.epsilon, sd);
  Trajectory traj = integrate_reference(config.solve.epsilon, spec, c, Vec::Zero(spec.m), t_end,
                                        config.verify.step_tol);
  const std::string path = out_path(config, "trajectory.csv");
  write_text_file(path, trajectory_to_csv(traj));
  std::printf("integrate: t in [0, %.6g], %ld accepted steps, %ld rejected, written to %s\n", t_end,
              traj.steps, traj.rejected, path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-periodic response solutions of strongly damped driven oscillators"};
  app.require_subcommand(1);

  CliOptions opt;
  std::string command;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opt.config_path, "JSON config file")->required();
    sub->add_option("-o,--out", opt.out_dir, "output directory (overrides config)");
    sub->add_option("--epsilon", opt.epsilon, "override solve.epsilon");
    sub->add_option("--kmax", opt.k_max, "override solve.k_max");
    sub->add_option("--ntrunc", opt.n_trunc, "override solve.n_trunc");
    sub->callback([&command, sub] { command = sub->get_name(); });
    return sub;
  };

  add_common(app.add_subcommand("solve", "solve the average equation and write solution.json"));
  add_common(app.add_subcommand("verify", "residuals, reference integration, report.json"));
  CLI::App* oracle =
      add_common(app.add_subcommand("oracle", "compare one coefficient against its tree expansion"));
  oracle->add_option("--k", opt.oracle_k, "override oracle.k");
  oracle->add_option("--nu", opt.oracle_nu, "override oracle.nu (comma-separated integers)");
  add_common(app.add_subcommand("sweep", "continuation over sweep.epsilon_list, sweep.csv"));
  CLI::App* bounds =
      add_common(app.add_subcommand("bounds", "spectral constants and small divisors, bounds.json"));
  bounds->add_option("--N", opt.bounds_N, "override bounds.N");
  add_common(app.add_subcommand("integrate", "reference trajectory only, trajectory.csv"));

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config = load_config(opt);
    if (command == "solve") return cmd_solve(config);
    if (command == "verify") return cmd_verify(config);
    if (command == "oracle") return cmd_oracle(config);
    if (command == "sweep") return cmd_sweep(config);
    if (command == "bounds") return cmd_bounds(config);
    if (command == "integrate") return cmd_integrate(config);
    std::cerr << "error: unknown command\n";
    return 1;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

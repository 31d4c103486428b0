#include "responsum/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "responsum/errors.hpp"

namespace responsum {
namespace {

using nlohmann::json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json vec_field(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json cvec_parts(const CVec& c, bool imag) {
  json out = json::array();
  for (int i = 0; i < c.size(); ++i) out.push_back(imag ? c[i].imag() : c[i].real());
  return out;
}

}  // namespace

json solution_to_json(const Vec& c, const Vec& zeta, double epsilon, const FourierMap& u,
                      const RatioDiagnostics& diagnostics, const std::vector<std::string>& flags) {
  json out;
  out["c"] = vec_field(c);
  out["zeta"] = vec_field(zeta);
  out["epsilon"] = epsilon;
  json modes = json::array();
  for (const auto& [nu, coeff] : u.entries()) {
    json mj;
    mj["nu"] = nu;
    mj["re"] = cvec_parts(coeff, false);
    mj["im"] = cvec_parts(coeff, true);
    modes.push_back(std::move(mj));
  }
  out["modes"] = std::move(modes);
  out["per_order_norms"] = diagnostics.per_order_norms;
  out["ratio"] = diagnostics.ratio;
  json jflags = json::array();
  for (const auto& f : flags) jflags.push_back(f);
  if (diagnostics.non_convergent) jflags.push_back("NON_CONVERGENT");
  out["flags"] = std::move(jflags);
  return out;
}

json report_to_json(const ResidualReport& residual, double attractor_deviation,
                    const Trajectory& traj, const DecayReport* decay) {
  json out;
  out["residual"] = json{{"sup", residual.sup_norm},
                         {"l2", residual.l2_norm},
                         {"dominant_mode", residual.dominant_mode}};
  out["attractor_deviation"] = attractor_deviation;
  if (decay != nullptr) {
    out["decay"] = json{{"xi_fit", decay->xi_fit},
                        {"ratio", decay->ratio},
                        {"Phi", decay->Phi},
                        {"Delta", decay->Delta},
                        {"C0_diag", decay->C0_diag}};
  } else {
    out["decay"] = nullptr;
  }
  out["integrator"] = json{{"steps", traj.steps}, {"rejected", traj.rejected}};
  return out;
}

json bounds_to_json(const SpectralData& sd, const SmallDivisorReport& divisors,
                    const std::vector<BoundSample>& samples) {
  json out;
  out["sN"] = divisors.sN;
  out["argmin"] = divisors.argmin;
  out["rN"] = divisors.rN;
  out["deltaN"] = divisors.deltaN;
  out["N"] = divisors.N;
  out["alpha"] = sd.alphaEstimate;
  out["kappa"] = vec_field(sd.kappa);
  out["b"] = vec_field(sd.b);
  json js = json::array();
  for (const BoundSample& s : samples) {
    js.push_back(json{{"epsilon", s.epsilon},
                      {"s", s.s},
                      {"inverse_norm", s.inverse_norm},
                      {"bound", s.bound}});
  }
  out["bound_samples"] = std::move(js);
  return out;
}

json oracle_to_json(int k, const Mode& nu, const OracleResult& oracle, const CVec& recursion_value,
                    long counting_checked) {
  json out;
  out["k"] = k;
  out["nu"] = nu;
  out["oracle_value"] = json{{"re", cvec_parts(oracle.value, false)},
                             {"im", cvec_parts(oracle.value, true)}};
  out["recursion_value"] = json{{"re", cvec_parts(recursion_value, false)},
                                {"im", cvec_parts(recursion_value, true)}};
  out["abs_diff"] = (oracle.value - recursion_value).cwiseAbs().maxCoeff();
  out["tree_count"] = oracle.tree_count;
  out["counting_checks"] =
      json{{"checked", counting_checked}, {"failures", oracle.counting_failures}};
  return out;
}

std::string sweep_to_csv(std::span<const BifurcationSolveRecord> records) {
  std::ostringstream out;
  int m = records.empty() ? 0 : static_cast<int>(records.front().zeta.size());
  out << "epsilon";
  for (int j = 1; j <= m; ++j) out << ",zeta_" << j;
  out << ",H_residual,u_sup_norm,newton_iters,converged\n";
  for (const BifurcationSolveRecord& r : records) {
    out << fmt17(r.epsilon);
    for (int j = 0; j < m; ++j) out << ',' << fmt17(r.zeta[j]);
    out << ',' << fmt17(r.H_residual) << ',' << fmt17(r.u_sup_norm) << ',' << r.newton_iters << ','
        << (r.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  int m = traj.x.empty() ? 0 : static_cast<int>(traj.x.front().size());
  out << "t";
  for (int j = 1; j <= m; ++j) out << ",x_" << j;
  for (int j = 1; j <= m; ++j) out << ",v_" << j;
  out << '\n';
  for (size_t i = 0; i < traj.t.size(); ++i) {
    out << fmt17(traj.t[i]);
    for (int j = 0; j < m; ++j) out << ',' << fmt17(traj.x[i][j]);
    for (int j = 0; j < m; ++j) out << ',' << fmt17(traj.v[i][j]);
    out << '\n';
  }
  return out.str();
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path);
}

}  // namespace responsum

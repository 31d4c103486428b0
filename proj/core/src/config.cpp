#include "responsum/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "responsum/errors.hpp"

namespace responsum {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& ctx, const std::string& what) {
  throw ParseError(ctx + ": " + what);
}

const json& require_field(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(ctx, std::string("missing required field '") + key + "'");
  return *it;
}

double as_double(const json& j, const std::string& ctx) {
  if (!j.is_number()) fail(ctx, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& ctx) {
  if (!j.is_number_integer()) fail(ctx, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& ctx) {
  if (!j.is_string()) fail(ctx, "expected a string");
  return j.get<std::string>();
}

Vec as_vec(const json& j, int n, const std::string& ctx) {
  if (j.is_number() && n == 1) return Vec::Constant(1, j.get<double>());
  if (!j.is_array()) fail(ctx, "expected an array of numbers");
  if (static_cast<int>(j.size()) != n)
    fail(ctx, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = as_double(j[i], ctx + "[" + std::to_string(i) + "]");
  return v;
}

Mat as_mat(const json& j, int n, const std::string& ctx) {
  if (j.is_number() && n == 1) return Mat::Constant(1, 1, j.get<double>());
  if (!j.is_array()) fail(ctx, "expected an array of rows");
  if (static_cast<int>(j.size()) != n)
    fail(ctx, "expected " + std::to_string(n) + " rows, got " + std::to_string(j.size()));
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string rctx = ctx + "[" + std::to_string(i) + "]";
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(rctx, "expected a row of " + std::to_string(n) + " numbers");
    for (int k = 0; k < n; ++k) a(i, k) = as_double(row[k], rctx + "[" + std::to_string(k) + "]");
  }
  return a;
}

Mode as_mode(const json& j, int d, const std::string& ctx) {
  if (!j.is_array()) fail(ctx, "expected an array of integers");
  if (static_cast<int>(j.size()) != d)
    fail(ctx, "expected " + std::to_string(d) + " entries, got " + std::to_string(j.size()));
  Mode nu(d, 0);
  for (int i = 0; i < d; ++i) nu[i] = as_int(j[i], ctx + "[" + std::to_string(i) + "]");
  return nu;
}

Polynomial::Exponent as_exponents(const json& j, int m, const std::string& ctx) {
  if (!j.is_array()) fail(ctx, "expected an array of integers");
  if (static_cast<int>(j.size()) != m)
    fail(ctx, "expected " + std::to_string(m) + " entries, got " + std::to_string(j.size()));
  Polynomial::Exponent e(m, 0);
  for (int i = 0; i < m; ++i) {
    e[i] = as_int(j[i], ctx + "[" + std::to_string(i) + "]");
    if (e[i] < 0) fail(ctx, "exponents must be nonnegative");
  }
  return e;
}

const json* term_array(const json& j, const std::string& ctx) {
  if (j.is_array()) return &j;
  if (j.is_object() && j.contains("terms")) {
    const json& t = j.at("terms");
    if (!t.is_array()) fail(ctx + ".terms", "expected an array of terms");
    return &t;
  }
  return nullptr;
}

Polynomial parse_poly(const json& j, int m, const std::string& ctx) {
  if (j.is_string()) return parse_poly_string(j.get<std::string>(), m);
  const json* terms = term_array(j, ctx);
  if (terms == nullptr) fail(ctx, "expected a polynomial (string or term list)");
  Polynomial p(m);
  int idx = 0;
  for (const json& t : *terms) {
    const std::string tctx = ctx + ".terms[" + std::to_string(idx++) + "]";
    p.add_term(as_exponents(require_field(t, "exponents", tctx), m, tctx + ".exponents"),
               as_double(require_field(t, "coeff", tctx), tctx + ".coeff"));
  }
  return p;
}

CPolynomial parse_cpoly(const json& j, int m, const std::string& ctx) {
  if (j.is_string()) return to_complex(parse_poly_string(j.get<std::string>(), m));
  const json* terms = term_array(j, ctx);
  if (terms == nullptr) fail(ctx, "expected a polynomial (string or term list)");
  CPolynomial p(m);
  int idx = 0;
  for (const json& t : *terms) {
    const std::string tctx = ctx + ".terms[" + std::to_string(idx++) + "]";
    auto expo = as_exponents(require_field(t, "exponents", tctx), m, tctx + ".exponents");
    double re = 0.0, im = 0.0;
    if (t.is_object() && t.contains("coeff")) {
      re = as_double(t.at("coeff"), tctx + ".coeff");
    } else {
      re = as_double(require_field(t, "re", tctx), tctx + ".re");
      if (t.is_object() && t.contains("im")) im = as_double(t.at("im"), tctx + ".im");
    }
    p.add_term(expo, cplx(re, im));
  }
  return p;
}

const json* mode_array(const json& j, const std::string& ctx) {
  if (j.is_array()) return &j;
  if (j.is_object() && j.contains("modes")) {
    const json& mlist = j.at("modes");
    if (!mlist.is_array()) fail(ctx + ".modes", "expected an array of modes");
    return &mlist;
  }
  fail(ctx, "expected a mode list (array or object with 'modes')");
}

bool close_cvec(const CVec& a, const CVec& b) {
  double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, scale);
}

bool close_cpoly(const CPolynomial& a, const CPolynomial& b) {
  CPolynomial diff = a;
  diff += b * cplx(-1.0, 0.0);
  double scale = 1.0;
  for (const auto& [e, c] : a.terms()) scale = std::max(scale, std::abs(c));
  for (const auto& [e, c] : b.terms()) scale = std::max(scale, std::abs(c));
  for (const auto& [e, c] : diff.terms())
    if (std::abs(c) > 1e-12 * scale) return false;
  return true;
}

/// Collects Hermitian mode data with a first-wins policy: exact duplicates
/// and consistent mirrors fold away; disagreements keep the first value and
/// record a warning instead of failing.
template <typename Value, typename Close>
std::map<Mode, Value> collect_hermitian(std::vector<std::pair<Mode, Value>> raw, Close close,
                                        const std::string& ctx, std::vector<std::string>* warnings) {
  std::map<Mode, Value> kept;
  for (auto& [nu, value] : raw) {
    auto it = kept.find(nu);
    if (it != kept.end()) {
      if (!close(it->second, value, false))
        warnings->push_back(ctx + ": repeated mode " + mode_to_string(nu) +
                            " disagrees with the first occurrence; keeping the first");
      continue;
    }
    auto mirror = kept.find(negate(nu));
    if (mirror != kept.end()) {
      if (!close(mirror->second, value, true))
        warnings->push_back(ctx + ": mode " + mode_to_string(nu) +
                            " is inconsistent with the conjugate of mode " +
                            mode_to_string(negate(nu)) + "; keeping the first");
      continue;
    }
    kept.emplace(nu, std::move(value));
  }
  return kept;
}

TrigVectorField parse_forcing(const json& j, int d, int m, const std::string& ctx,
                              std::vector<std::string>* warnings) {
  const json* mlist = mode_array(j, ctx);
  std::vector<std::pair<Mode, CVec>> raw;
  int idx = 0;
  for (const json& mj : *mlist) {
    const std::string mctx = ctx + "[" + std::to_string(idx++) + "]";
    Mode nu = as_mode(require_field(mj, "nu", mctx), d, mctx + ".nu");
    Vec re = as_vec(require_field(mj, "re", mctx), m, mctx + ".re");
    Vec im = Vec::Zero(m);
    if (mj.contains("im")) im = as_vec(mj.at("im"), m, mctx + ".im");
    CVec c(m);
    for (int i = 0; i < m; ++i) c[i] = cplx(re[i], im[i]);
    raw.emplace_back(std::move(nu), std::move(c));
  }
  auto kept = collect_hermitian(
      std::move(raw),
      [](const CVec& a, const CVec& b, bool mirrored) {
        return close_cvec(a, mirrored ? CVec(b.conjugate()) : b);
      },
      ctx, warnings);
  std::vector<TrigVectorField::ModeEntry> entries;
  entries.reserve(kept.size());
  for (auto& [nu, c] : kept) entries.push_back({nu, std::move(c)});
  return TrigVectorField(d, m, entries);
}

TrigPolynomialFamily parse_family(const json& j, int d, int m, const std::string& ctx,
                                  std::vector<std::string>* warnings) {
  const json* mlist = mode_array(j, ctx);
  std::vector<std::pair<Mode, CPolynomial>> raw;
  int idx = 0;
  for (const json& mj : *mlist) {
    const std::string mctx = ctx + "[" + std::to_string(idx++) + "]";
    Mode nu = as_mode(require_field(mj, "nu", mctx), d, mctx + ".nu");
    CPolynomial p = parse_cpoly(require_field(mj, "poly", mctx), m, mctx + ".poly");
    raw.emplace_back(std::move(nu), std::move(p));
  }
  auto kept = collect_hermitian(
      std::move(raw),
      [](const CPolynomial& a, const CPolynomial& b, bool mirrored) {
        return close_cpoly(a, mirrored ? conjugate(b) : b);
      },
      ctx, warnings);
  std::vector<TrigPolynomialFamily::ModeEntry> entries;
  entries.reserve(kept.size());
  for (auto& [nu, p] : kept) entries.push_back({nu, std::move(p)});
  return TrigPolynomialFamily(d, m, entries);
}

void warn_unknown_keys(const json& j, const std::set<std::string>& known, const std::string& ctx,
                       std::vector<std::string>* warnings) {
  if (!j.is_object()) return;
  for (const auto& [key, value] : j.items())
    if (known.count(key) == 0)
      warnings->push_back(ctx + ": ignoring unrecognized field '" + key + "'");
}

SystemSpec parse_system(const json& j, std::vector<std::string>* warnings) {
  const std::string ctx = "system";
  SystemSpec spec;
  std::string kind = as_string(require_field(j, "kind", ctx), ctx + ".kind");
  if (kind == "gradient-autonomous") {
    spec.kind = SystemKind::GradientAutonomous;
  } else if (kind == "gradient-forced") {
    spec.kind = SystemKind::GradientForced;
  } else {
    fail(ctx + ".kind", "expected 'gradient-autonomous' or 'gradient-forced', got '" + kind + "'");
  }
  spec.m = as_int(require_field(j, "m", ctx), ctx + ".m");
  spec.d = as_int(require_field(j, "d", ctx), ctx + ".d");
  if (spec.m < 1) throw ValidationError("system.m must be at least 1");
  if (spec.d < 1) throw ValidationError("system.d must be at least 1");
  spec.omega = as_vec(require_field(j, "omega", ctx), spec.d, ctx + ".omega");
  spec.mass = j.contains("mass") ? as_mat(j.at("mass"), spec.m, ctx + ".mass")
                                 : Mat(Mat::Identity(spec.m, spec.m));
  spec.damping = as_mat(require_field(j, "damping", ctx), spec.m, ctx + ".damping");

  if (spec.kind == SystemKind::GradientAutonomous) {
    if (j.contains("potential_family"))
      fail(ctx, "'potential_family' applies only to gradient-forced systems");
    spec.potential = parse_poly(require_field(j, "potential", ctx), spec.m, ctx + ".potential");
    spec.forcing = j.contains("forcing")
                       ? parse_forcing(j.at("forcing"), spec.d, spec.m, ctx + ".forcing", warnings)
                       : TrigVectorField(spec.d, spec.m);
  } else {
    if (j.contains("potential")) fail(ctx, "'potential' applies only to gradient-autonomous systems");
    if (j.contains("forcing"))
      fail(ctx, "gradient-forced systems express forcing through 'potential_family'");
    spec.potential_family = parse_family(require_field(j, "potential_family", ctx), spec.d, spec.m,
                                         ctx + ".potential_family", warnings);
  }
  warn_unknown_keys(j,
                    {"kind", "m", "d", "omega", "mass", "damping", "potential", "forcing",
                     "potential_family"},
                    ctx, warnings);
  return spec;
}

void parse_solve(const json& j, SolveConfig* s) {
  const std::string ctx = "solve";
  if (j.contains("epsilon")) s->epsilon = as_double(j.at("epsilon"), ctx + ".epsilon");
  if (j.contains("k_max")) s->k_max = as_int(j.at("k_max"), ctx + ".k_max");
  if (j.contains("n_trunc")) s->n_trunc = as_int(j.at("n_trunc"), ctx + ".n_trunc");
  if (j.contains("tol_newton")) s->tol_newton = as_double(j.at("tol_newton"), ctx + ".tol_newton");
  if (j.contains("tol_picard")) s->tol_picard = as_double(j.at("tol_picard"), ctx + ".tol_picard");
  if (!(s->epsilon > 0.0)) throw ValidationError("solve.epsilon must be positive");
  if (s->k_max < 1) throw ValidationError("solve.k_max must be at least 1");
  if (s->n_trunc < -1 || s->n_trunc == 0)
    throw ValidationError("solve.n_trunc must be positive (or -1 for automatic)");
  if (!(s->tol_newton > 0.0)) throw ValidationError("solve.tol_newton must be positive");
  if (!(s->tol_picard > 0.0)) throw ValidationError("solve.tol_picard must be positive");
}

void parse_verify(const json& j, VerifyConfig* v) {
  const std::string ctx = "verify";
  if (j.contains("t_end")) v->t_end = as_double(j.at("t_end"), ctx + ".t_end");
  if (j.contains("step_tol")) v->step_tol = as_double(j.at("step_tol"), ctx + ".step_tol");
  if (j.contains("transient_fraction"))
    v->transient_fraction = as_double(j.at("transient_fraction"), ctx + ".transient_fraction");
  if (v->t_end != -1.0 && !(v->t_end > 0.0))
    throw ValidationError("verify.t_end must be positive (or -1 for automatic)");
  if (!(v->step_tol > 0.0)) throw ValidationError("verify.step_tol must be positive");
  if (!(v->transient_fraction >= 0.0 && v->transient_fraction < 1.0))
    throw ValidationError("verify.transient_fraction must lie in [0, 1)");
}

void parse_oracle(const json& j, int d, OracleConfig* o) {
  const std::string ctx = "oracle";
  if (j.contains("k")) o->k = as_int(j.at("k"), ctx + ".k");
  if (j.contains("nu")) o->nu = as_mode(j.at("nu"), d, ctx + ".nu");
  if (o->k < 1) throw ValidationError("oracle.k must be at least 1");
}

void parse_sweep(const json& j, SweepConfig* s) {
  const std::string ctx = "sweep";
  if (!j.contains("epsilon_list")) return;
  const json& list = j.at("epsilon_list");
  if (!list.is_array()) fail(ctx + ".epsilon_list", "expected an array of numbers");
  s->epsilon_list.clear();
  for (size_t i = 0; i < list.size(); ++i)
    s->epsilon_list.push_back(as_double(list[i], ctx + ".epsilon_list[" + std::to_string(i) + "]"));
  for (size_t i = 0; i < s->epsilon_list.size(); ++i) {
    if (!(s->epsilon_list[i] > 0.0)) throw ValidationError("sweep.epsilon_list must be positive");
    if (i > 0 && !(s->epsilon_list[i] < s->epsilon_list[i - 1]))
      throw ValidationError("sweep.epsilon_list must be strictly decreasing");
  }
}

void parse_bounds(const json& j, BoundsConfig* b) {
  const std::string ctx = "bounds";
  if (j.contains("N")) b->N = as_int(j.at("N"), ctx + ".N");
  if (j.contains("xi")) b->xi = as_double(j.at("xi"), ctx + ".xi");
  if (j.contains("rho")) b->rho = as_double(j.at("rho"), ctx + ".rho");
  if (b->N < 1) throw ValidationError("bounds.N must be at least 1");
  if (b->xi != -1.0 && !(b->xi > 0.0))
    throw ValidationError("bounds.xi must be positive (or -1 for automatic)");
  if (!(b->rho > 0.0)) throw ValidationError("bounds.rho must be positive");
}

json poly_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [expo, coeff] : p.terms()) {
    json t;
    t["exponents"] = expo;
    t["coeff"] = coeff;
    terms.push_back(std::move(t));
  }
  return json{{"terms", std::move(terms)}};
}

json cpoly_to_json(const CPolynomial& p) {
  json terms = json::array();
  for (const auto& [expo, coeff] : p.terms()) {
    json t;
    t["exponents"] = expo;
    t["re"] = coeff.real();
    t["im"] = coeff.imag();
    terms.push_back(std::move(t));
  }
  return json{{"terms", std::move(terms)}};
}

json mat_to_json(const Mat& a) {
  json rows = json::array();
  for (int i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

Polynomial parse_poly_string(const std::string& text, int m) {
  if (m < 1 || m > 3)
    throw ParseError("inline polynomial notation supports m <= 3; use a term list instead");
  const std::string ctx = "polynomial '" + text + "'";
  Polynomial out(m);
  size_t i = 0;
  const size_t n = text.size();
  auto skip_ws = [&] {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto parse_uint = [&](const std::string& what) {
    size_t start = i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) fail(ctx, "expected " + what + " at position " + std::to_string(start));
    return std::atoi(text.substr(start, i - start).c_str());
  };
  skip_ws();
  if (i == n) fail(ctx, "empty polynomial");
  bool first = true;
  while (i < n) {
    double sign = 1.0;
    if (text[i] == '+' || text[i] == '-') {
      if (text[i] == '-') sign = -1.0;
      ++i;
      skip_ws();
    } else if (!first) {
      fail(ctx, std::string("expected '+' or '-' before position ") + std::to_string(i));
    }
    double coeff = 1.0;
    bool have_factor = false;
    if (i < n && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
      char* end = nullptr;
      coeff = std::strtod(text.c_str() + i, &end);
      if (end == text.c_str() + i) fail(ctx, "malformed number at position " + std::to_string(i));
      i = static_cast<size_t>(end - text.c_str());
      have_factor = true;
    }
    Polynomial::Exponent expo(m, 0);
    while (true) {
      skip_ws();
      if (i >= n || text[i] != 'x') break;
      ++i;
      int var = parse_uint("a variable index after 'x'");
      if (var < 1 || var > m)
        fail(ctx, "variable x" + std::to_string(var) + " is out of range for m = " +
                      std::to_string(m));
      int power = 1;
      if (i < n && text[i] == '^') {
        ++i;
        power = parse_uint("an exponent after '^'");
      }
      expo[var - 1] += power;
      have_factor = true;
    }
    if (!have_factor) fail(ctx, "expected a term at position " + std::to_string(i));
    out.add_term(expo, sign * coeff);
    first = false;
    skip_ws();
    if (i < n && text[i] != '+' && text[i] != '-')
      fail(ctx, std::string("unexpected character '") + text[i] + "' at position " +
                    std::to_string(i));
  }
  return out;
}

RunConfig parse_config_json(const nlohmann::json& j, const std::string& source) {
  if (!j.is_object()) fail(source, "top level must be an object");
  RunConfig config;
  config.system = parse_system(require_field(j, "system", source), &config.warnings);
  if (j.contains("solve")) parse_solve(j.at("solve"), &config.solve);
  if (j.contains("verify")) parse_verify(j.at("verify"), &config.verify);
  if (j.contains("oracle")) parse_oracle(j.at("oracle"), config.system.d, &config.oracle);
  if (j.contains("sweep")) parse_sweep(j.at("sweep"), &config.sweep);
  if (j.contains("bounds")) parse_bounds(j.at("bounds"), &config.bounds);
  if (j.contains("output_dir")) config.output_dir = as_string(j.at("output_dir"), "output_dir");
  warn_unknown_keys(j, {"system", "solve", "verify", "oracle", "sweep", "bounds", "output_dir"},
                    source, &config.warnings);
  config.system.validate();
  return config;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_config_json(j, path);
}

nlohmann::json config_to_json(const RunConfig& config) {
  const SystemSpec& s = config.system;
  json sys;
  sys["kind"] = s.kind == SystemKind::GradientAutonomous ? "gradient-autonomous" : "gradient-forced";
  sys["m"] = s.m;
  sys["d"] = s.d;
  sys["omega"] = vec_to_json(s.omega);
  sys["mass"] = mat_to_json(s.mass);
  sys["damping"] = mat_to_json(s.damping);
  if (s.kind == SystemKind::GradientAutonomous) {
    sys["potential"] = poly_to_json(s.potential);
    json modes = json::array();
    for (const auto& [nu, c] : s.forcing.modes()) {
      json mj;
      mj["nu"] = nu;
      json re = json::array(), im = json::array();
      for (int i = 0; i < s.m; ++i) {
        re.push_back(c[i].real());
        im.push_back(c[i].imag());
      }
      mj["re"] = std::move(re);
      mj["im"] = std::move(im);
      modes.push_back(std::move(mj));
    }
    sys["forcing"] = json{{"modes", std::move(modes)}};
  } else {
    json modes = json::array();
    for (const auto& [nu, p] : s.potential_family.modes()) {
      json mj;
      mj["nu"] = nu;
      mj["poly"] = cpoly_to_json(p);
      modes.push_back(std::move(mj));
    }
    sys["potential_family"] = json{{"modes", std::move(modes)}};
  }

  json out;
  out["system"] = std::move(sys);
  out["solve"] = json{{"epsilon", config.solve.epsilon},
                      {"k_max", config.solve.k_max},
                      {"n_trunc", config.solve.n_trunc},
                      {"tol_newton", config.solve.tol_newton},
                      {"tol_picard", config.solve.tol_picard}};
  out["verify"] = json{{"t_end", config.verify.t_end},
                       {"step_tol", config.verify.step_tol},
                       {"transient_fraction", config.verify.transient_fraction}};
  json oracle;
  oracle["k"] = config.oracle.k;
  if (!config.oracle.nu.empty()) oracle["nu"] = config.oracle.nu;
  out["oracle"] = std::move(oracle);
  out["sweep"] = json{{"epsilon_list", config.sweep.epsilon_list}};
  out["bounds"] =
      json{{"N", config.bounds.N}, {"xi", config.bounds.xi}, {"rho", config.bounds.rho}};
  out["output_dir"] = config.output_dir;
  return out;
}

}  // namespace responsum

#include "responsum/trees.hpp"

#include <functional>
#include <map>
#include <set>

#include "responsum/errors.hpp"
#include "responsum/propagator.hpp"

namespace responsum {

namespace {

int family_ceiling(TreeFamily family) {
  return family == TreeFamily::Autonomous ? kTreeOrderCeilingAutonomous : kTreeOrderCeilingForced;
}

void append_subtree(TreeTopology& dst, const TreeTopology& src, int parent) {
  int offset = dst.order();
  for (int v = 0; v < src.order(); ++v) {
    dst.parent.push_back(src.parent[v] < 0 ? parent : src.parent[v] + offset);
    std::vector<int> ch;
    ch.reserve(src.children[v].size());
    for (int c : src.children[v]) ch.push_back(c + offset);
    dst.children.push_back(std::move(ch));
  }
  dst.children[parent].push_back(offset);
}

std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(parts);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == parts - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 1; v <= left - (parts - 1 - pos); ++v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  if (parts >= 1 && total >= parts) rec(0, total);
  return out;
}

const std::vector<TreeTopology>& build_topologies(int k, TreeFamily family,
                                                  std::map<int, std::vector<TreeTopology>>& memo) {
  auto it = memo.find(k);
  if (it != memo.end()) return it->second;
  std::vector<TreeTopology> out;
  if (k == 1) {
    TreeTopology t;
    t.family = family;
    t.parent = {-1};
    t.children = {{}};
    out.push_back(std::move(t));
  } else {
    int p_min = family == TreeFamily::Autonomous ? 2 : 1;
    for (int p = p_min; p <= k - 1; ++p) {
      for (const auto& parts : compositions(k - 1, p)) {
        std::vector<const std::vector<TreeTopology>*> pools;
        bool feasible = true;
        for (int part : parts) {
          const auto& pool = build_topologies(part, family, memo);
          if (pool.empty()) {
            feasible = false;
            break;
          }
          pools.push_back(&pool);
        }
        if (!feasible) continue;
        std::vector<size_t> idx(p, 0);
        while (true) {
          TreeTopology t;
          t.family = family;
          t.parent = {-1};
          t.children = {{}};
          for (int i = 0; i < p; ++i) append_subtree(t, (*pools[i])[idx[i]], 0);
          out.push_back(std::move(t));
          int pos = p - 1;
          while (pos >= 0 && ++idx[pos] == pools[pos]->size()) idx[pos--] = 0;
          if (pos < 0) break;
        }
      }
    }
  }
  return memo.emplace(k, std::move(out)).first->second;
}

CMat propagator_matrix(double eps, const Mode& momentum, const SystemSpec& spec,
                       const TaylorTensors& tensors) {
  int m = tensors.m;
  if (is_zero(momentum)) return CMat::Identity(m, m);
  CMat d_matrix = assemble_D(eps, dot(spec.omega, momentum), spec, tensors.A);
  Eigen::FullPivLU<CMat> lu(d_matrix);
  if (!lu.isInvertible()) throw SingularMatrix("line propagator is singular");
  return lu.inverse();
}

}  // namespace

std::vector<TreeTopology> enumerate_topologies(int k, TreeFamily family) {
  if (k < 1) throw ValidationError("tree order must be at least 1");
  if (k > family_ceiling(family))
    throw OrderTooLarge("tree order " + std::to_string(k) + " exceeds the enumeration ceiling");
  std::map<int, std::vector<TreeTopology>> memo;
  return build_topologies(k, family, memo);
}

std::vector<LabelledTree> enumerate_labelled(const TreeTopology& topology,
                                             const std::vector<Mode>& mode_support,
                                             bool zeta_allowed) {
  if (mode_support.empty()) throw ValidationError("mode support must be nonempty");
  const int d = static_cast<int>(mode_support[0].size());
  std::set<Mode> nonzero;
  for (const Mode& nu : mode_support) {
    if (static_cast<int>(nu.size()) != d)
      throw ValidationError("mode support entries have mixed dimensions");
    if (is_zero(nu)) throw ValidationError("mode support must exclude the zero mode");
    nonzero.insert(nu);
  }
  const Mode zero = zero_mode(d);
  std::vector<Mode> end_choices(nonzero.begin(), nonzero.end());
  if (zeta_allowed) end_choices.push_back(zero);
  std::vector<Mode> internal_any(nonzero.begin(), nonzero.end());
  internal_any.push_back(zero);
  std::vector<Mode> internal_nonzero(nonzero.begin(), nonzero.end());
  std::vector<Mode> fixed_zero{zero};

  const int k = topology.order();
  std::vector<const std::vector<Mode>*> choices(k);
  for (int v = 0; v < k; ++v) {
    if (topology.is_end(v)) {
      choices[v] = &end_choices;
    } else if (topology.family == TreeFamily::Autonomous) {
      choices[v] = &fixed_zero;
    } else if (topology.degree(v) == 1) {
      choices[v] = &internal_nonzero;
    } else {
      choices[v] = &internal_any;
    }
    if (choices[v]->empty()) return {};
  }

  std::vector<LabelledTree> out;
  std::vector<size_t> idx(k, 0);
  while (true) {
    LabelledTree lt;
    lt.topology = topology;
    lt.node_mode.resize(k);
    for (int v = 0; v < k; ++v) lt.node_mode[v] = (*choices[v])[idx[v]];
    lt.momentum = lt.node_mode;
    for (int v = k - 1; v >= 1; --v)
      lt.momentum[topology.parent[v]] = add(lt.momentum[topology.parent[v]], lt.momentum[v]);
    bool admissible = true;
    for (int v = 0; v < k; ++v) {
      if (!topology.is_end(v) && is_zero(lt.momentum[v])) {
        admissible = false;
        break;
      }
    }
    if (admissible) out.push_back(std::move(lt));
    int pos = k - 1;
    while (pos >= 0 && ++idx[pos] == choices[pos]->size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

CVec tree_value(const LabelledTree& tree, double eps, const Vec& zeta,
                const TaylorTensors& tensors, const SystemSpec& spec) {
  const TreeTopology& topo = tree.topology;
  const int k = topo.order();
  const bool autonomous = spec.kind == SystemKind::GradientAutonomous;
  std::vector<CVec> value(k);
  for (int v = k - 1; v >= 0; --v) {
    CVec raw;
    if (topo.is_end(v)) {
      if (is_zero(tree.node_mode[v])) {
        raw = zeta.cast<cplx>();
      } else if (autonomous) {
        raw = eps * spec.forcing.coeff(tree.node_mode[v]);
      } else {
        raw = -eps * tensors.tensor(tree.node_mode[v], 0).as_vector();
      }
    } else {
      Mode label = autonomous ? zero_mode(tensors.d) : tree.node_mode[v];
      const SymTensor& tens = tensors.tensor(label, topo.degree(v));
      std::vector<CVec> args;
      args.reserve(topo.children[v].size());
      for (int c : topo.children[v]) args.push_back(value[c]);
      raw = -eps * tens.contract(args);
    }
    if (is_zero(tree.momentum[v])) {
      value[v] = raw;
    } else {
      CMat d_matrix = assemble_D(eps, dot(spec.omega, tree.momentum[v]), spec, tensors.A);
      value[v] = apply_D_inverse(d_matrix, raw);
    }
  }
  return value[0];
}

OracleResult oracle_sum(int k, const Mode& nu, double eps, const Vec& zeta,
                        const TaylorTensors& tensors, const SystemSpec& spec) {
  if (static_cast<int>(nu.size()) != tensors.d) throw ValidationError("nu has wrong dimension");
  TreeFamily family = spec.kind == SystemKind::GradientAutonomous ? TreeFamily::Autonomous
                                                                  : TreeFamily::Forced;
  std::vector<Mode> support;
  if (spec.kind == SystemKind::GradientAutonomous) {
    for (const auto& [mode, f] : spec.forcing.modes()) {
      if (!is_zero(mode)) support.push_back(mode);
    }
  } else {
    for (const auto& [mode, tv] : tensors.coeffs) {
      if (!is_zero(mode)) support.push_back(mode);
    }
  }

  OracleResult result;
  result.value = CVec::Zero(tensors.m);
  if (support.empty()) {
    if (k == 1 && is_zero(nu)) {
      result.value = zeta.cast<cplx>();
      result.tree_count = 1;
      result.labelled_total = 1;
    } else {
      enumerate_topologies(k, family);  // still enforce the order ceiling
    }
    return result;
  }

  for (const TreeTopology& topo : enumerate_topologies(k, family)) {
    for (const LabelledTree& lt : enumerate_labelled(topo, support, true)) {
      ++result.labelled_total;
      if (!check_counting(lt).ok) ++result.counting_failures;
      if (lt.root_momentum() == nu) {
        result.value += tree_value(lt, eps, zeta, tensors, spec);
        ++result.tree_count;
      }
    }
  }
  return result;
}

CVec oracle_coefficient(int k, const Mode& nu, double eps, const Vec& zeta,
                        const TaylorTensors& tensors, const SystemSpec& spec) {
  return oracle_sum(k, nu, eps, zeta, tensors, spec).value;
}

std::vector<Chain> find_chains(const LabelledTree& tree) {
  const TreeTopology& topo = tree.topology;
  std::vector<Chain> out;
  auto unary = [&](int v) { return !topo.is_end(v) && topo.degree(v) == 1; };
  for (int v = 0; v < topo.order(); ++v) {
    if (!unary(v)) continue;
    int par = topo.parent[v];
    if (par >= 0 && unary(par)) continue;  // continuation, not a chain head
    Chain c;
    int cur = v;
    while (true) {
      c.nodes.push_back(cur);
      int child = topo.children[cur][0];
      if (!unary(child)) break;
      cur = child;
    }
    out.push_back(std::move(c));
  }
  return out;
}

CountingReport check_counting(const LabelledTree& tree) {
  const TreeTopology& topo = tree.topology;
  CountingReport r;
  r.family = topo.family;
  r.k = topo.order();
  for (int v = 0; v < topo.order(); ++v) {
    if (topo.is_end(v)) {
      ++r.n_end;
    } else if (topo.degree(v) == 1) {
      ++r.n_unary;
    }
  }
  r.n_chains = static_cast<int>(find_chains(tree).size());
  if (r.family == TreeFamily::Autonomous) {
    r.lhs = 2 * r.n_end;
    r.rhs = r.k + 1;
  } else {
    r.lhs = 4 * r.n_end + 2 * r.n_unary - 2 * r.n_chains;
    r.rhs = r.k + 2;
  }
  r.ok = r.lhs >= r.rhs;
  return r;
}

CMat chain_value(const LabelledTree& tree, const Chain& chain, double eps,
                 const TaylorTensors& tensors, const SystemSpec& spec) {
  const TreeTopology& topo = tree.topology;
  CMat acc = CMat::Identity(tensors.m, tensors.m);
  for (int v : chain.nodes) {
    if (topo.is_end(v) || topo.degree(v) != 1)
      throw ValidationError("chain node is not unary internal");
    CMat g = propagator_matrix(eps, tree.momentum[v], spec, tensors);
    CMat f = -eps * tensors.tensor(tree.node_mode[v], 1).as_matrix();
    acc = acc * g * f;
  }
  return acc;
}

}  // namespace responsum

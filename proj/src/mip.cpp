#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "tep/mip.hpp"
#include "tep/network.hpp"

namespace tep {
namespace {

struct BoundFix {
  int var;
  double lo, hi;
};

struct Node {
  std::vector<BoundFix> fixes;
  double bound = -kInf;  // parent relaxation value
  long id = 0;
};

// SOS2 check: returns violated group index or -1; picks the branching split.
int find_sos2_violation(const std::vector<Sos2Group>& groups, const std::vector<double>& x,
                        double tol, int* split_out) {
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& grp = groups[g];
    std::vector<int> nz;
    for (std::size_t i = 0; i < grp.size(); ++i)
      if (std::abs(x[grp[i]]) > tol) nz.push_back(static_cast<int>(i));
    const bool ok = nz.empty() || (nz.size() == 1) ||
                    (nz.size() == 2 && nz[1] == nz[0] + 1);
    if (ok) continue;
    // weighted midpoint of the active indices
    double wsum = 0.0, isum = 0.0;
    for (int i : nz) {
      const double w = std::abs(x[grp[i]]);
      wsum += w;
      isum += w * i;
    }
    int split = static_cast<int>(std::floor(isum / wsum));
    split = std::clamp(split, 0, static_cast<int>(grp.size()) - 2);
    *split_out = split;
    return static_cast<int>(g);
  }
  return -1;
}

}  // namespace

MipResult solve_mip(const LinearProgram& lp0, const std::vector<int>& binaries,
                    const std::vector<Sos2Group>& sos2, const MipOptions& opts) {
  for (int b : binaries)
    if (b < 0 || b >= lp0.num_vars) throw TepError("binary index out of range");
  for (const auto& g : sos2)
    for (int v : g)
      if (v < 0 || v >= lp0.num_vars) throw TepError("sos2 index out of range");

  MipResult best;
  best.status = MipStatus::infeasible;
  double incumbent = kInf;

  std::deque<Node> open;
  long next_id = 0;
  open.push_back(Node{{}, -kInf, next_id++});
  long nodes = 0;
  bool hit_limit = false;

  auto pop_node = [&]() -> Node {
    if (opts.depth_first) {
      Node n = open.back();
      open.pop_back();
      return n;
    }
    // best bound, ties by id
    auto it = std::min_element(open.begin(), open.end(), [](const Node& a, const Node& b) {
      if (a.bound != b.bound) return a.bound < b.bound;
      return a.id < b.id;
    });
    Node n = *it;
    open.erase(it);
    return n;
  };

  while (!open.empty()) {
    if (nodes >= opts.node_limit) {
      hit_limit = true;
      break;
    }
    Node node = pop_node();
    if (node.bound >= incumbent - std::max(opts.gap_abs, opts.gap_rel * std::abs(incumbent)))
      continue;
    ++nodes;

    LinearProgram lp = lp0;
    bool fix_ok = true;
    for (const auto& f : node.fixes) {
      lp.lower[f.var] = std::max(lp.lower[f.var], f.lo);
      lp.upper[f.var] = std::min(lp.upper[f.var], f.hi);
      if (lp.lower[f.var] > lp.upper[f.var]) fix_ok = false;
    }
    if (!fix_ok) continue;
    MipResult rel = solve_lp(lp, opts.lp);
    if (rel.status == MipStatus::unbounded) {
      // relaxation unbounded at the root means the MIP itself is unbounded
      // or ill-posed; report honestly
      best.status = MipStatus::unbounded;
      best.node_count = nodes;
      return best;
    }
    if (rel.status == MipStatus::numerical_failure) {
      best.status = MipStatus::numerical_failure;
      best.node_count = nodes;
      return best;
    }
    if (rel.status != MipStatus::optimal) continue;  // infeasible node
    if (rel.objective >= incumbent - std::max(opts.gap_abs, opts.gap_rel * std::abs(incumbent)))
      continue;

    // most fractional binary
    int frac_var = -1;
    double frac_dist = opts.int_tol;
    for (int bvar : binaries) {
      const double v = rel.x[bvar];
      const double d = std::min(v - std::floor(v), std::ceil(v) - v);
      if (d > frac_dist + 1e-12) {
        frac_dist = d;
        frac_var = bvar;
      }
    }
    if (frac_var >= 0) {
      Node down = node, up = node;
      down.fixes.push_back({frac_var, 0.0, 0.0});
      up.fixes.push_back({frac_var, 1.0, 1.0});
      down.bound = up.bound = rel.objective;
      down.id = next_id++;
      up.id = next_id++;
      open.push_back(down);
      open.push_back(up);
      continue;
    }
    int split = 0;
    const int gviol = find_sos2_violation(sos2, rel.x, opts.int_tol, &split);
    if (gviol >= 0) {
      const auto& grp = sos2[gviol];
      Node left = node, right = node;
      for (std::size_t i = split + 1; i < grp.size(); ++i)
        left.fixes.push_back({grp[i], 0.0, 0.0});
      for (int i = 0; i < split; ++i) right.fixes.push_back({grp[i], 0.0, 0.0});
      left.bound = right.bound = rel.objective;
      left.id = next_id++;
      right.id = next_id++;
      open.push_back(left);
      open.push_back(right);
      continue;
    }

    // integral and SOS2-feasible: new incumbent
    if (rel.objective < incumbent) {
      incumbent = rel.objective;
      best.status = MipStatus::optimal;
      best.objective = rel.objective;
      best.x = rel.x;
      for (int bvar : binaries) best.x[bvar] = std::round(best.x[bvar]);
    }
  }

  best.node_count = nodes;
  if (hit_limit) {
    double remaining = incumbent;
    for (const auto& n : open) remaining = std::min(remaining, n.bound);
    best.best_bound = remaining;
    if (best.status == MipStatus::optimal) best.status = MipStatus::node_limit;
    return best;
  }
  best.best_bound = best.status == MipStatus::optimal ? incumbent : kInf;
  return best;
}

}  // namespace tep

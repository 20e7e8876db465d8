#include "tep/dcopf.hpp"

#include <cassert>
#include <cmath>

#include "tep/mip.hpp"

namespace tep {

DcSolution solve_dcopf_fixed(const Network& net) {
  if (net.candidate_count() != 0)
    throw TepError("solve_dcopf_fixed expects a network without candidates");
  const int n = static_cast<int>(net.bus_count());
  const int L = static_cast<int>(net.branch_count());
  const int G = static_cast<int>(net.generators().size());
  const double base = net.base_mva();

  LinearProgram lp;
  // theta per bus (reference fixed), pg per generator
  for (int i = 0; i < n; ++i) {
    const bool ref = static_cast<std::size_t>(i) == net.reference_index();
    lp.add_var(ref ? 0.0 : -kInf, ref ? 0.0 : kInf, 0.0);
  }
  for (int g = 0; g < G; ++g) {
    const Generator& gen = net.generators()[g];
    lp.add_var(gen.p_min / base, gen.p_max / base, gen.marginal_cost * base);
  }
  // nodal balance: sum_g pg - Pd = sum_j B_ij-weighted angle differences
  for (int i = 0; i < n; ++i) lp.add_row(RowSense::eq, net.p_demand_pu(i));
  for (int k = 0; k < L; ++k) {
    const Branch& br = net.branches()[k];
    const int f = static_cast<int>(net.bus_index(br.from));
    const int t = static_cast<int>(net.bus_index(br.to));
    const double b = 1.0 / br.reactance;
    // flow f->t = b (th_f - th_t) leaves f, enters t
    lp.set_entry(f, f, -b);
    lp.set_entry(f, t, b);
    lp.set_entry(t, t, -b);
    lp.set_entry(t, f, b);
  }
  for (int g = 0; g < G; ++g) {
    const int i = static_cast<int>(net.bus_index(net.generators()[g].bus));
    lp.set_entry(i, n + g, 1.0);
  }
  // line limits
  for (int k = 0; k < L; ++k) {
    const Branch& br = net.branches()[k];
    const int f = static_cast<int>(net.bus_index(br.from));
    const int t = static_cast<int>(net.bus_index(br.to));
    const double b = 1.0 / br.reactance;
    const double cap = net.thermal_pu(k);
    int r = lp.add_row(RowSense::le, cap);
    lp.set_entry(r, f, b);
    lp.set_entry(r, t, -b);
    r = lp.add_row(RowSense::le, cap);
    lp.set_entry(r, f, -b);
    lp.set_entry(r, t, b);
  }

  DcSolution sol;
  MipResult res = solve_lp(lp);
  if (res.status == MipStatus::infeasible) return sol;
  // finite generator bounds rule out an unbounded LP
  assert(res.status == MipStatus::optimal);
  if (res.status != MipStatus::optimal) throw TepError("dcopf: unexpected LP status");

  sol.status = DcStatus::optimal;
  sol.objective_ops = res.objective;
  sol.angles.resize(n);
  sol.vm.assign(n, 1.0);
  sol.va_deg.resize(n);
  for (int i = 0; i < n; ++i) {
    sol.angles[i] = res.x[i];
    sol.va_deg[i] = res.x[i] * 180.0 / M_PI;
  }
  sol.dispatch.resize(G);
  for (int g = 0; g < G; ++g) sol.dispatch[g] = res.x[n + g] * base;
  sol.flows.resize(L);
  for (int k = 0; k < L; ++k) {
    const Branch& br = net.branches()[k];
    const double b = 1.0 / br.reactance;
    sol.flows[k] =
        b * (sol.angles[net.bus_index(br.from)] - sol.angles[net.bus_index(br.to)]) * base;
  }
  return sol;
}

DcSolution solve_dcopf(const Network& net, const Configuration& cfg) {
  if (!cfg.belongs_to(net)) throw TepError("configuration does not belong to this network");
  return solve_dcopf_fixed(apply_configuration(net, cfg).network);
}

}  // namespace tep

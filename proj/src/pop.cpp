#include "tep/pop.hpp"

#include <algorithm>
#include <cmath>

namespace tep {

AffineComplex& AffineComplex::operator+=(const AffineComplex& other) {
  c0 += other.c0;
  for (const auto& [k, c] : other.terms) {
    bool merged = false;
    for (auto& [k2, c2] : terms)
      if (k2 == k) {
        c2 += c;
        merged = true;
        break;
      }
    if (!merged) terms.emplace_back(k, c);
  }
  return *this;
}

AdmittanceSet build_admittance(const Network& net) {
  AdmittanceSet adm;
  adm.n = net.bus_count();
  adm.ybus.assign(adm.n, std::vector<AffineComplex>(adm.n));
  std::size_t cand_pos = 0;
  for (std::size_t b = 0; b < net.branch_count(); ++b) {
    const Branch& br = net.branches()[b];
    const std::size_t f = net.bus_index(br.from), t = net.bus_index(br.to);
    const std::complex<double> y = net.admittance(b);
    if (br.candidate) {
      // availability 1 - o: the term vanishes when the line is open
      const int k = static_cast<int>(cand_pos++);
      adm.ybus[f][f] += {y, {{k, -y}}};
      adm.ybus[t][t] += {y, {{k, -y}}};
      adm.ybus[f][t] += {-y, {{k, y}}};
      adm.ybus[t][f] += {-y, {{k, y}}};
    } else {
      adm.ybus[f][f] += {y, {}};
      adm.ybus[t][t] += {y, {}};
      adm.ybus[f][t] += {-y, {}};
      adm.ybus[t][f] += {-y, {}};
    }
  }
  return adm;
}

std::vector<std::vector<Polynomial>> AdmittanceSet::realified(int o_var_base) const {
  // complex M = A + jB acting on v + ju  ->  [[A, -B], [B, A]]
  const std::size_t m = 2 * n;
  std::vector<std::vector<Polynomial>> out(m, std::vector<Polynomial>(m));
  auto as_poly = [&](std::complex<double> c, int k, bool real_part) {
    Polynomial p;
    const double val = real_part ? c.real() : c.imag();
    if (k < 0)
      p = Polynomial::constant(val);
    else
      p = Polynomial::variable(o_var_base + k) * val;
    return p;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const AffineComplex& e = ybus[i][j];
      Polynomial A = as_poly(e.c0, -1, true);
      Polynomial B = as_poly(e.c0, -1, false);
      for (const auto& [k, c] : e.terms) {
        A += as_poly(c, k, true);
        B += as_poly(c, k, false);
      }
      out[i][j] = A;
      out[i][j + n] = -B;
      out[i + n][j] = B;
      out[i + n][j + n] = A;
    }
  return out;
}

double default_big_m(const Network& net) {
  double vmax = 0.0, zmax = 0.0, rxmax = 0.0;
  for (const Bus& b : net.buses()) vmax = std::max(vmax, b.v_max);
  for (std::size_t k = 0; k < net.branch_count(); ++k) {
    zmax = std::max(zmax, net.thermal_pu(k));
    rxmax = std::max({rxmax, net.branches()[k].resistance, net.branches()[k].reactance});
  }
  return 2.0 * (vmax + zmax * rxmax);
}

IvLayout iv_layout(const Network& net) {
  return IvLayout{static_cast<int>(net.bus_count()), static_cast<int>(net.branch_count()),
                  static_cast<int>(net.candidate_count())};
}

PqvLayout pqv_layout(const Network& net) {
  return PqvLayout{static_cast<int>(net.bus_count()), static_cast<int>(net.candidate_count())};
}

namespace {

// Per-bus aggregate net-injection bounds and the bus marginal cost.
struct BusAgg {
  double p_lo, p_hi, q_lo, q_hi;  // per-unit net injection bounds
  double cost = 0.0;              // USD/MWh; meaningful when has_gen
  bool has_gen = false;
};

std::vector<BusAgg> aggregate_buses(const Network& net) {
  std::vector<BusAgg> agg(net.bus_count());
  for (std::size_t i = 0; i < net.bus_count(); ++i) {
    BusAgg& a = agg[i];
    a.p_lo = -net.p_demand_pu(i);
    a.p_hi = -net.p_demand_pu(i);
    a.q_lo = -net.q_demand_pu(i);
    a.q_hi = -net.q_demand_pu(i);
    for (std::size_t g : net.generators_at(i)) {
      const Generator& gen = net.generators()[g];
      a.p_lo += gen.p_min / net.base_mva();
      a.p_hi += gen.p_max / net.base_mva();
      a.q_lo += gen.q_min / net.base_mva();
      a.q_hi += gen.q_max / net.base_mva();
      if (a.has_gen && a.cost != gen.marginal_cost)
        throw TepError("polynomial builders require one marginal cost per bus");
      a.cost = gen.marginal_cost;
      a.has_gen = true;
    }
  }
  return agg;
}

void push_range(PolyProblem& pp, const Polynomial& expr, double lo, double hi) {
  if (lo == hi) {
    pp.equalities.push_back(expr - Polynomial::constant(lo));
  } else {
    pp.inequalities.push_back(expr - Polynomial::constant(lo));   // expr - lo >= 0
    pp.inequalities.push_back(Polynomial::constant(hi) - expr);   // hi - expr >= 0
  }
}

}  // namespace

PolyProblem build_iv_pop(const Network& net0, double big_m,
                         const std::optional<Configuration>& fix) {
  const Network net = fix ? apply_configuration(net0, *fix).network : net0;
  if (big_m == 0.0) big_m = default_big_m(net);
  if (big_m <= 0.0) throw TepError("big_m must be positive");

  const IvLayout lay = iv_layout(net);
  PolyProblem pp;
  auto V = [&](int j) { return Polynomial::variable(j); };
  for (int i = 0; i < lay.n; ++i) {
    const std::string b = std::to_string(net.buses()[i].id);
    pp.var_names.push_back("v" + b);
    pp.var_names.push_back("u" + b);
    pp.var_names.push_back("z" + b);
    pp.var_names.push_back("w" + b);
  }
  for (int k = 0; k < lay.L; ++k) {
    const Branch& br = net.branches()[k];
    const std::string e = std::to_string(br.from) + "_" + std::to_string(br.to);
    pp.var_names.push_back("zl" + e);
    pp.var_names.push_back("wl" + e);
  }
  std::size_t cpos = 0;
  for (std::size_t b : net.candidate_indices()) {
    const Branch& br = net.branches()[b];
    pp.var_names.push_back("o" + std::to_string(br.from) + "_" + std::to_string(br.to));
    (void)cpos;
  }

  const auto agg = aggregate_buses(net);

  // KCL, eqs. (1)-(2): z_i + sum_in - sum_out = 0
  for (int i = 0; i < lay.n; ++i) {
    Polynomial kz = V(lay.zb(i));
    Polynomial kw = V(lay.wb(i));
    for (int k = 0; k < lay.L; ++k) {
      const Branch& br = net.branches()[k];
      if (static_cast<int>(net.bus_index(br.to)) == i) {
        kz += V(lay.zl(k));
        kw += V(lay.wl(k));
      }
      if (static_cast<int>(net.bus_index(br.from)) == i) {
        kz -= V(lay.zl(k));
        kw -= V(lay.wl(k));
      }
    }
    pp.equalities.push_back(kz);
    pp.equalities.push_back(kw);
  }

  // power bounds, eqs. (5)-(6), and the objective
  Polynomial obj;
  for (int i = 0; i < lay.n; ++i) {
    Polynomial p = V(lay.v(i)) * V(lay.zb(i)) + V(lay.u(i)) * V(lay.wb(i));
    Polynomial q = V(lay.u(i)) * V(lay.zb(i)) - V(lay.v(i)) * V(lay.wb(i));
    push_range(pp, p, agg[i].p_lo, agg[i].p_hi);
    push_range(pp, q, agg[i].q_lo, agg[i].q_hi);
    if (agg[i].has_gen)
      obj += (p + Polynomial::constant(net.p_demand_pu(i))) * (agg[i].cost * net.base_mva());
  }

  // voltage bounds, eq. (7)
  for (int i = 0; i < lay.n; ++i) {
    const Bus& b = net.buses()[i];
    Polynomial vm2 = V(lay.v(i)) * V(lay.v(i)) + V(lay.u(i)) * V(lay.u(i));
    pp.inequalities.push_back(vm2 - Polynomial::constant(b.v_min * b.v_min));
    pp.inequalities.push_back(Polynomial::constant(b.v_max * b.v_max) - vm2);
  }

  // line equations and thermal limits, eqs. (3)-(4), (8i)-(8j)/(12)-(14)
  cpos = 0;
  for (int k = 0; k < lay.L; ++k) {
    const Branch& br = net.branches()[k];
    const int f = static_cast<int>(net.bus_index(br.from));
    const int t = static_cast<int>(net.bus_index(br.to));
    Polynomial re = V(lay.v(f)) - V(lay.v(t)) - V(lay.zl(k)) * br.resistance +
                    V(lay.wl(k)) * br.reactance;
    Polynomial im = V(lay.u(f)) - V(lay.u(t)) - V(lay.zl(k)) * br.reactance -
                    V(lay.wl(k)) * br.resistance;
    Polynomial th = Polynomial::constant(net.thermal_pu(k) * net.thermal_pu(k)) -
                    V(lay.zl(k)) * V(lay.zl(k)) - V(lay.wl(k)) * V(lay.wl(k));
    if (br.candidate) {
      const Polynomial o = V(lay.o(static_cast<int>(cpos++)));
      const Polynomial Mo = o * big_m;
      pp.inequalities.push_back(Mo + re);  // re >= -M o
      pp.inequalities.push_back(Mo - re);  // re <=  M o
      pp.inequalities.push_back(Mo + im);
      pp.inequalities.push_back(Mo - im);
      // z^2 + w^2 <= zbar^2 (1 - o)
      pp.inequalities.push_back(th - o * (net.thermal_pu(k) * net.thermal_pu(k)));
    } else {
      pp.equalities.push_back(re);
      pp.equalities.push_back(im);
      pp.inequalities.push_back(th);
    }
  }

  // derived bus-current boxes (valid by KCL; keeps moment relaxations bounded)
  for (int i = 0; i < lay.n; ++i) {
    double cap = 0.0;
    for (int k = 0; k < lay.L; ++k) {
      const Branch& br = net.branches()[k];
      if (static_cast<int>(net.bus_index(br.from)) == i ||
          static_cast<int>(net.bus_index(br.to)) == i)
        cap += net.thermal_pu(k);
    }
    for (int comp : {lay.zb(i), lay.wb(i)}) {
      pp.inequalities.push_back(Polynomial::constant(cap) - V(comp));
      pp.inequalities.push_back(Polynomial::constant(cap) + V(comp));
    }
  }

  // reference phase and sign
  const int ref = static_cast<int>(net.reference_index());
  pp.equalities.push_back(V(lay.u(ref)));
  pp.inequalities.push_back(V(lay.v(ref)));

  // binaries with o^2 = o; investment term on the objective
  for (int c = 0; c < lay.K; ++c) {
    pp.binaries.push_back(lay.o(c));
    pp.equalities.push_back(V(lay.o(c)) * V(lay.o(c)) - V(lay.o(c)));
    const Branch& br = net.branches()[net.candidate_indices()[c]];
    obj += (Polynomial::constant(1.0) - V(lay.o(c))) * br.build_cost;
  }
  pp.objective = obj;
  pp.check();
  return pp;
}

namespace {

// tr(M xx^T) as a polynomial over the x variables, where M has Polynomial
// entries over the o variables.
Polynomial trace_against_vv(const std::vector<std::vector<Polynomial>>& M,
                            const std::vector<int>& xvars) {
  Polynomial out;
  const std::size_t m = M.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (M[a][b].is_zero()) continue;
      out += M[a][b] * (Polynomial::variable(xvars[b]) * Polynomial::variable(xvars[a]));
    }
  return out;
}

std::vector<std::vector<Polynomial>> mat_mul(const std::vector<std::vector<Polynomial>>& A,
                                             const std::vector<std::vector<Polynomial>>& B) {
  const std::size_t m = A.size();
  std::vector<std::vector<Polynomial>> C(m, std::vector<Polynomial>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (A[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (B[k][j].is_zero()) continue;
        C[i][j] += A[i][k] * B[k][j];
      }
    }
  return C;
}

// Realified per-line power matrices: p_line = tr(Yij xx^T) is the real power
// entering the line at its from end, q_line likewise; entries affine in o.
struct LineMatrices {
  std::vector<std::vector<Polynomial>> Yij, Ybarij;
};

LineMatrices line_matrices(const Network& net, std::size_t branch, int o_base,
                           std::optional<int> cand_pos) {
  const std::size_t n = net.bus_count();
  const Branch& br = net.branches()[branch];
  const std::size_t f = net.bus_index(br.from), t = net.bus_index(br.to);
  const std::complex<double> y = net.admittance(branch);
  // S_f = V_f conj(y (V_f - V_t)); availability multiplies y for candidates
  Polynomial avail = Polynomial::constant(1.0);
  if (cand_pos) avail -= Polynomial::variable(o_base + *cand_pos);

  // p = Re: gr*(vf^2+uf^2) - gr*(vf vt + uf ut) - bi*(uf vt - vf ut) with
  // y = gr + j bi; q = Im: -bi*(vf^2+uf^2) + bi*(vf vt + uf ut) - gr*(uf vt - vf ut)
  const double gr = y.real(), bi = y.imag();
  std::vector<std::vector<Polynomial>> P(2 * n, std::vector<Polynomial>(2 * n));
  std::vector<std::vector<Polynomial>> Q(2 * n, std::vector<Polynomial>(2 * n));
  auto put = [&](std::vector<std::vector<Polynomial>>& M, std::size_t a, std::size_t b,
                 double coef) {
    // symmetric placement: coef/2 on (a,b) and (b,a)
    M[a][b] += avail * (coef / 2.0);
    M[b][a] += avail * (coef / 2.0);
  };
  const std::size_t vf = f, uf = n + f, vt = t, ut = n + t;
  put(P, vf, vf, 2 * gr);
  put(P, uf, uf, 2 * gr);
  put(P, vf, vt, -gr);
  put(P, uf, ut, -gr);
  put(P, uf, vt, -bi);
  put(P, vf, ut, bi);
  put(Q, vf, vf, -2 * bi);
  put(Q, uf, uf, -2 * bi);
  put(Q, vf, vt, bi);
  put(Q, uf, ut, bi);
  put(Q, uf, vt, -gr);
  put(Q, vf, ut, gr);
  return {P, Q};
}

}  // namespace

PolyProblem build_pqv_pop(const Network& net0, const std::optional<Configuration>& fix,
                          PqvThermalForm thermal) {
  const Network net = fix ? apply_configuration(net0, *fix).network : net0;
  const PqvLayout lay = pqv_layout(net);
  PolyProblem pp;
  for (int i = 0; i < lay.n; ++i)
    pp.var_names.push_back("v" + std::to_string(net.buses()[i].id));
  for (int i = 0; i < lay.n; ++i)
    pp.var_names.push_back("u" + std::to_string(net.buses()[i].id));
  for (std::size_t b : net.candidate_indices()) {
    const Branch& br = net.branches()[b];
    pp.var_names.push_back("o" + std::to_string(br.from) + "_" + std::to_string(br.to));
  }

  std::vector<int> xvars(2 * lay.n);
  for (int i = 0; i < 2 * lay.n; ++i) xvars[i] = i;
  const int o_base = 2 * lay.n;

  const AdmittanceSet adm = build_admittance(net);
  const auto Yreal = adm.realified(o_base);

  // bus power matrices Y_k, Ybar_k from rows of Y(o):
  // p_k = v_k (G v - B u)_k + u_k (G u + B v)_k — assembled directly.
  const auto agg = aggregate_buses(net);
  Polynomial obj;
  for (int i = 0; i < lay.n; ++i) {
    Polynomial Iz, Iw;  // bus injection current components
    for (int j = 0; j < 2 * lay.n; ++j) {
      if (!Yreal[i][j].is_zero()) Iz += Yreal[i][j] * Polynomial::variable(xvars[j]);
      if (!Yreal[i + lay.n][j].is_zero())
        Iw += Yreal[i + lay.n][j] * Polynomial::variable(xvars[j]);
    }
    Polynomial p = Polynomial::variable(lay.v(i)) * Iz + Polynomial::variable(lay.u(i)) * Iw;
    Polynomial q = Polynomial::variable(lay.u(i)) * Iz - Polynomial::variable(lay.v(i)) * Iw;
    push_range(pp, p, agg[i].p_lo, agg[i].p_hi);
    push_range(pp, q, agg[i].q_lo, agg[i].q_hi);
    if (agg[i].has_gen)
      obj += (p + Polynomial::constant(net.p_demand_pu(i))) * (agg[i].cost * net.base_mva());

    const Bus& b = net.buses()[i];
    Polynomial vm2 = Polynomial::variable(lay.v(i)) * Polynomial::variable(lay.v(i)) +
                     Polynomial::variable(lay.u(i)) * Polynomial::variable(lay.u(i));
    pp.inequalities.push_back(vm2 - Polynomial::constant(b.v_min * b.v_min));
    pp.inequalities.push_back(Polynomial::constant(b.v_max * b.v_max) - vm2);
  }

  // thermal limits
  std::size_t cpos = 0;
  for (std::size_t k = 0; k < net.branch_count(); ++k) {
    const Branch& br = net.branches()[k];
    const int f = static_cast<int>(net.bus_index(br.from));
    const int t = static_cast<int>(net.bus_index(br.to));
    const std::complex<double> y = net.admittance(k);
    const double cap2 = net.thermal_pu(k) * net.thermal_pu(k);
    std::optional<int> cp;
    Polynomial avail = Polynomial::constant(1.0);
    if (br.candidate) {
      cp = static_cast<int>(cpos++);
      avail -= Polynomial::variable(o_base + *cp);
    }
    if (thermal == PqvThermalForm::current || !br.candidate) {
      // |I|^2 = |y|^2 |V_f - V_t|^2 scaled by availability^2
      Polynomial dv = Polynomial::variable(lay.v(f)) - Polynomial::variable(lay.v(t));
      Polynomial du = Polynomial::variable(lay.u(f)) - Polynomial::variable(lay.u(t));
      Polynomial i2 = (dv * dv + du * du) * std::norm(y);
      if (cp) i2 = i2 * avail * avail;
      Polynomial rhs = br.candidate ? avail * cap2 : Polynomial::constant(cap2);
      pp.inequalities.push_back(rhs - i2);
    } else {
      // paper form: (1-o)[zbar^2 - tr(Y(o) Yij(o) xx')^2 - tr(Y(o) Ybarij(o) xx')^2]
      LineMatrices lm = line_matrices(net, k, o_base, cp);
      auto T1 = trace_against_vv(mat_mul(Yreal, lm.Yij), xvars);
      auto T2 = trace_against_vv(mat_mul(Yreal, lm.Ybarij), xvars);
      Polynomial g = (Polynomial::constant(cap2) - T1 * T1 - T2 * T2) * avail;
      pp.inequalities.push_back(g);
    }
  }

  // reference phase and sign
  const int ref = static_cast<int>(net.reference_index());
  pp.equalities.push_back(Polynomial::variable(lay.u(ref)));
  pp.inequalities.push_back(Polynomial::variable(lay.v(ref)));

  for (int c = 0; c < lay.K; ++c) {
    pp.binaries.push_back(lay.o(c));
    pp.equalities.push_back(Polynomial::variable(lay.o(c)) * Polynomial::variable(lay.o(c)) -
                            Polynomial::variable(lay.o(c)));
    const Branch& br = net.branches()[net.candidate_indices()[c]];
    obj += (Polynomial::constant(1.0) - Polynomial::variable(lay.o(c))) * br.build_cost;
  }
  pp.objective = obj;
  pp.check();
  return pp;
}

PolyProblem relax_binaries(const PolyProblem& pp, const std::vector<int>& keep_binary) {
  PolyProblem out = pp;
  out.binaries.clear();
  out.equalities.clear();
  for (const auto& h : pp.equalities) {
    bool is_bin_eq = false;
    for (int b : pp.binaries) {
      Polynomial sq =
          Polynomial::variable(b) * Polynomial::variable(b) - Polynomial::variable(b);
      if (h.terms() == sq.terms() || h.terms() == (-sq).terms()) {
        is_bin_eq = true;
        if (std::find(keep_binary.begin(), keep_binary.end(), b) != keep_binary.end()) {
          out.equalities.push_back(h);
          out.binaries.push_back(b);
        } else {
          out.inequalities.push_back(Polynomial::variable(b));
          out.inequalities.push_back(Polynomial::constant(1.0) - Polynomial::variable(b));
        }
        break;
      }
    }
    if (!is_bin_eq) out.equalities.push_back(h);
  }
  out.check();
  return out;
}

double amortize(double capital_usd, int years, double rate_per_year) {
  if (years < 1) throw TepError("amortize: years must be >= 1");
  if (rate_per_year < 0.0) throw TepError("amortize: rate must be >= 0");
  const double hours_per_year = 8760.0;
  if (rate_per_year == 0.0) return capital_usd / years / hours_per_year;
  const double annual =
      capital_usd * rate_per_year / (1.0 - std::pow(1.0 + rate_per_year, -years));
  return annual / hours_per_year;
}

}  // namespace tep

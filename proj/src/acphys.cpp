#include "tep/acphys.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace tep {

std::pair<double, double> injection_from_state(double v, double u, double z, double w) {
  return {v * z + u * w, u * z - v * w};
}

std::vector<std::pair<double, double>> kcl_residual(const Network& net,
                                                    const OperatingPoint& pt) {
  const std::size_t n = net.bus_count();
  if (pt.z.size() != n || pt.w.size() != n || pt.z_line.size() != net.branch_count())
    throw TepError("operating point does not match network dimensions");
  std::vector<std::pair<double, double>> res(n, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) {
    res[i].first = pt.z[i];
    res[i].second = pt.w[i];
  }
  for (std::size_t k = 0; k < net.branch_count(); ++k) {
    const Branch& br = net.branches()[k];
    const std::size_t f = net.bus_index(br.from), t = net.bus_index(br.to);
    // z_i + sum_j (z_ji - z_ij) = 0: the line's current leaves f and enters t
    res[f].first -= pt.z_line[k];
    res[f].second -= pt.w_line[k];
    res[t].first += pt.z_line[k];
    res[t].second += pt.w_line[k];
  }
  return res;
}

std::pair<double, double> line_residual(const Branch& branch, const OperatingPoint& pt,
                                        const Network& net, std::size_t branch_pos) {
  if (branch_pos >= pt.z_line.size()) throw TepError("branch not represented in point");
  const std::size_t f = net.bus_index(branch.from), t = net.bus_index(branch.to);
  const double zl = pt.z_line[branch_pos], wl = pt.w_line[branch_pos];
  const double re = pt.v[f] - pt.v[t] - branch.resistance * zl + branch.reactance * wl;
  const double im = pt.u[f] - pt.u[t] - branch.reactance * zl - branch.resistance * wl;
  return {re, im};
}

bool thermal_ok(const Branch& branch, const OperatingPoint& pt, const Network& net,
                std::size_t branch_pos) {
  const double zl = pt.z_line[branch_pos], wl = pt.w_line[branch_pos];
  const double cap = branch.thermal_limit / net.base_mva();
  return zl * zl + wl * wl <= cap * cap + 1e-8;
}

std::pair<std::vector<double>, std::vector<double>> vm_va(const OperatingPoint& pt) {
  std::vector<double> vm(pt.v.size()), va(pt.v.size());
  for (std::size_t i = 0; i < pt.v.size(); ++i) {
    vm[i] = std::hypot(pt.v[i], pt.u[i]);
    va[i] = std::atan2(pt.u[i], pt.v[i]) * 180.0 / M_PI;
  }
  return {vm, va};
}

std::string operating_point_csv(const Network& net, const OperatingPoint& pt) {
  std::ostringstream out;
  auto [vm, va] = vm_va(pt);
  out << "kind,index,a,b\n";
  for (std::size_t i = 0; i < vm.size(); ++i)
    out << "bus," << net.buses()[i].id << "," << vm[i] << "," << va[i] << "\n";
  for (std::size_t k = 0; k < pt.z_line.size(); ++k)
    out << "line," << k << "," << pt.z_line[k] << "," << pt.w_line[k] << "\n";
  return out.str();
}

namespace {

// One scalar constraint: c0 + l.x + sum coef*x_i*x_j.
struct QuadCon {
  double c0 = 0.0;
  std::vector<std::pair<int, double>> lin;
  struct QTerm {
    int i, j;
    double coef;
  };
  std::vector<QTerm> quad;

  double eval(const Eigen::VectorXd& x) const {
    double v = c0;
    for (const auto& [i, c] : lin) v += c * x[i];
    for (const auto& t : quad) v += t.coef * x[t.i] * x[t.j];
    return v;
  }
  void add_grad(const Eigen::VectorXd& x, Eigen::VectorXd& g, double scale) const {
    for (const auto& [i, c] : lin) g[i] += scale * c;
    for (const auto& t : quad) {
      g[t.i] += scale * t.coef * x[t.j];
      g[t.j] += scale * t.coef * x[t.i];
    }
  }
  void add_hess(Eigen::MatrixXd& H, double scale) const {
    for (const auto& t : quad) {
      H(t.i, t.j) += scale * t.coef;
      H(t.j, t.i) += scale * t.coef;
    }
  }
};

struct Nlp {
  int nvar = 0;
  Eigen::VectorXd cost;          // linear objective
  std::vector<QuadCon> eq;       // = 0
  std::vector<QuadCon> ineq;     // >= 0
  Eigen::VectorXd x0;
};

struct Layout {
  int n, L, G;
  int v0, u0, zl0, wl0, pg0, qg0, el0;  // elastics: [ep+ ep- eq+ eq-] per bus
  int nvar;
};

Layout make_layout(const Network& net) {
  Layout lay;
  lay.n = static_cast<int>(net.bus_count());
  lay.L = static_cast<int>(net.branch_count());
  lay.G = static_cast<int>(net.generators().size());
  lay.v0 = 0;
  lay.u0 = lay.n;
  lay.zl0 = 2 * lay.n;
  lay.wl0 = 2 * lay.n + lay.L;
  lay.pg0 = 2 * lay.n + 2 * lay.L;
  lay.qg0 = lay.pg0 + lay.G;
  lay.el0 = lay.qg0 + lay.G;
  lay.nvar = lay.el0 + 4 * lay.n;
  return lay;
}

Nlp build_nlp(const Network& net, const Layout& lay, double elastic_penalty) {
  Nlp nlp;
  nlp.nvar = lay.nvar;
  nlp.cost = Eigen::VectorXd::Zero(lay.nvar);
  for (int g = 0; g < lay.G; ++g)
    nlp.cost[lay.pg0 + g] = net.generators()[g].marginal_cost * net.base_mva();
  for (int i = 0; i < 4 * lay.n; ++i) nlp.cost[lay.el0 + i] = elastic_penalty;

  // line voltage equations
  for (int k = 0; k < lay.L; ++k) {
    const Branch& br = net.branches()[k];
    const int f = static_cast<int>(net.bus_index(br.from));
    const int t = static_cast<int>(net.bus_index(br.to));
    QuadCon re, im;
    re.lin = {{lay.v0 + f, 1.0}, {lay.v0 + t, -1.0}, {lay.zl0 + k, -br.resistance},
              {lay.wl0 + k, br.reactance}};
    im.lin = {{lay.u0 + f, 1.0}, {lay.u0 + t, -1.0}, {lay.zl0 + k, -br.reactance},
              {lay.wl0 + k, -br.resistance}};
    nlp.eq.push_back(re);
    nlp.eq.push_back(im);
  }
  // power balance: v_i z_i + u_i w_i - sum pg + d - ep+ + ep- = 0 (and q)
  for (int i = 0; i < lay.n; ++i) {
    QuadCon p, q;
    p.c0 = net.p_demand_pu(i);
    q.c0 = net.q_demand_pu(i);
    for (int k = 0; k < lay.L; ++k) {
      const Branch& br = net.branches()[k];
      const int f = static_cast<int>(net.bus_index(br.from));
      const int t = static_cast<int>(net.bus_index(br.to));
      double s = 0.0;
      if (f == i) s = 1.0;
      if (t == i) s = -1.0;
      if (s == 0.0) continue;
      // z_i = sum s*zl, w_i = sum s*wl
      p.quad.push_back({lay.v0 + i, lay.zl0 + k, s});
      p.quad.push_back({lay.u0 + i, lay.wl0 + k, s});
      q.quad.push_back({lay.u0 + i, lay.zl0 + k, s});
      q.quad.push_back({lay.v0 + i, lay.wl0 + k, -s});
    }
    for (std::size_t g : net.generators_at(i)) {
      p.lin.push_back({lay.pg0 + static_cast<int>(g), -1.0});
      q.lin.push_back({lay.qg0 + static_cast<int>(g), -1.0});
    }
    p.lin.push_back({lay.el0 + 4 * i + 0, -1.0});
    p.lin.push_back({lay.el0 + 4 * i + 1, 1.0});
    q.lin.push_back({lay.el0 + 4 * i + 2, -1.0});
    q.lin.push_back({lay.el0 + 4 * i + 3, 1.0});
    nlp.eq.push_back(p);
    nlp.eq.push_back(q);
  }
  // reference phase
  {
    QuadCon ref;
    ref.lin = {{lay.u0 + static_cast<int>(net.reference_index()), 1.0}};
    nlp.eq.push_back(ref);
  }
  // voltage magnitude bounds
  for (int i = 0; i < lay.n; ++i) {
    const Bus& b = net.buses()[i];
    QuadCon up, lo;
    up.c0 = b.v_max * b.v_max;
    up.quad = {{lay.v0 + i, lay.v0 + i, -1.0}, {lay.u0 + i, lay.u0 + i, -1.0}};
    lo.c0 = -b.v_min * b.v_min;
    lo.quad = {{lay.v0 + i, lay.v0 + i, 1.0}, {lay.u0 + i, lay.u0 + i, 1.0}};
    nlp.ineq.push_back(up);
    nlp.ineq.push_back(lo);
  }
  // thermal limits
  for (int k = 0; k < lay.L; ++k) {
    QuadCon th;
    const double cap = net.thermal_pu(k);
    th.c0 = cap * cap;
    th.quad = {{lay.zl0 + k, lay.zl0 + k, -1.0}, {lay.wl0 + k, lay.wl0 + k, -1.0}};
    nlp.ineq.push_back(th);
  }
  // generator box bounds
  for (int g = 0; g < lay.G; ++g) {
    const Generator& gen = net.generators()[g];
    const double s = net.base_mva();
    QuadCon a, b, c, d;
    a.c0 = -gen.p_min / s;
    a.lin = {{lay.pg0 + g, 1.0}};
    b.c0 = gen.p_max / s;
    b.lin = {{lay.pg0 + g, -1.0}};
    c.c0 = -gen.q_min / s;
    c.lin = {{lay.qg0 + g, 1.0}};
    d.c0 = gen.q_max / s;
    d.lin = {{lay.qg0 + g, -1.0}};
    nlp.ineq.insert(nlp.ineq.end(), {a, b, c, d});
  }
  // elastics nonnegative
  for (int i = 0; i < 4 * lay.n; ++i) {
    QuadCon e;
    e.lin = {{lay.el0 + i, 1.0}};
    nlp.ineq.push_back(e);
  }
  // reference voltage sign
  {
    QuadCon vr;
    vr.lin = {{lay.v0 + static_cast<int>(net.reference_index()), 1.0}};
    nlp.ineq.push_back(vr);
  }

  nlp.x0 = Eigen::VectorXd::Zero(lay.nvar);
  for (int i = 0; i < lay.n; ++i) nlp.x0[lay.v0 + i] = 1.0;
  for (int g = 0; g < lay.G; ++g) {
    const Generator& gen = net.generators()[g];
    nlp.x0[lay.pg0 + g] = 0.5 * (gen.p_min + gen.p_max) / net.base_mva();
    nlp.x0[lay.qg0 + g] = 0.5 * (gen.q_min + gen.q_max) / net.base_mva();
  }
  for (int i = 0; i < 4 * lay.n; ++i) nlp.x0[lay.el0 + i] = 1e-3;
  return nlp;
}

// Primal-dual interior point with slack variables and an l2 merit line search.
struct IpmOutcome {
  bool converged = false;
  int iterations = 0;
  double kkt = kInf;
  Eigen::VectorXd x;
};

IpmOutcome run_ipm(const Nlp& nlp, const AcSolverOptions& opts) {
  const int nx = nlp.nvar;
  const int me = static_cast<int>(nlp.eq.size());
  const int mi = static_cast<int>(nlp.ineq.size());
  Eigen::VectorXd x = nlp.x0;
  Eigen::VectorXd s(mi), nu(mi), lam = Eigen::VectorXd::Zero(me);
  for (int i = 0; i < mi; ++i) s[i] = std::max(nlp.ineq[i].eval(x), 1e-2);
  double mu = 1e-1;
  for (int i = 0; i < mi; ++i) nu[i] = mu / s[i];
  const double pen = 10.0 * std::max(1.0, nlp.cost.lpNorm<Eigen::Infinity>());

  auto eval_eq = [&](const Eigen::VectorXd& xx) {
    Eigen::VectorXd r(me);
    for (int e = 0; e < me; ++e) r[e] = nlp.eq[e].eval(xx);
    return r;
  };
  auto eval_ineq = [&](const Eigen::VectorXd& xx) {
    Eigen::VectorXd r(mi);
    for (int i = 0; i < mi; ++i) r[i] = nlp.ineq[i].eval(xx);
    return r;
  };
  auto merit = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& ss) {
    double phi = nlp.cost.dot(xx);
    for (int i = 0; i < mi; ++i) phi -= mu * std::log(ss[i]);
    phi += pen * (eval_eq(xx).norm() + (eval_ineq(xx) - ss).norm());
    return phi;
  };

  IpmOutcome out;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    out.iterations = iter + 1;
    Eigen::VectorXd ce = eval_eq(x);
    Eigen::VectorXd ci = eval_ineq(x);
    // residuals
    Eigen::VectorXd rd = nlp.cost;
    Eigen::MatrixXd Je = Eigen::MatrixXd::Zero(me, nx);
    Eigen::MatrixXd Ji = Eigen::MatrixXd::Zero(mi, nx);
    {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(nx);
      for (int e = 0; e < me; ++e) {
        g.setZero();
        nlp.eq[e].add_grad(x, g, 1.0);
        Je.row(e) = g.transpose();
      }
      for (int i = 0; i < mi; ++i) {
        g.setZero();
        nlp.ineq[i].add_grad(x, g, 1.0);
        Ji.row(i) = g.transpose();
      }
    }
    rd -= Je.transpose() * lam + Ji.transpose() * nu;
    const double comp0 = (s.array() * nu.array()).abs().maxCoeff();
    const double kkt0 = std::max({rd.lpNorm<Eigen::Infinity>(), ce.lpNorm<Eigen::Infinity>(),
                                  (ci - s).lpNorm<Eigen::Infinity>(), comp0});
    out.kkt = kkt0;
    if (kkt0 <= opts.kkt_tol) {
      out.converged = true;
      break;
    }
    const double kkt_mu =
        std::max({rd.lpNorm<Eigen::Infinity>(), ce.lpNorm<Eigen::Infinity>(),
                  (ci - s).lpNorm<Eigen::Infinity>(),
                  (s.array() * nu.array() - mu).abs().maxCoeff()});
    if (kkt_mu <= 10.0 * mu) mu = std::max(opts.kkt_tol / 100.0, std::min(mu / 5.0, std::pow(mu, 1.5)));

    // condensed KKT system
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(nx, nx);
    for (int e = 0; e < me; ++e) nlp.eq[e].add_hess(W, -lam[e]);
    for (int i = 0; i < mi; ++i) nlp.ineq[i].add_hess(W, -nu[i]);
    Eigen::VectorXd theta = nu.array() / s.array();
    Eigen::MatrixXd H = W + Ji.transpose() * theta.asDiagonal() * Ji;
    Eigen::VectorXd rc = ci - s;
    // rhs1 = -rd + Ji^T (mu/s - nu - theta*rc)
    Eigen::VectorXd tmp = (mu / s.array()).matrix() - nu - (theta.array() * rc.array()).matrix();
    Eigen::VectorXd rhs1 = -rd + Ji.transpose() * tmp;

    Eigen::VectorXd dx, dlam;
    double delta = 0.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nx + me, nx + me);
      K.topLeftCorner(nx, nx) = H + delta * Eigen::MatrixXd::Identity(nx, nx);
      K.topRightCorner(nx, me) = -Je.transpose();
      K.bottomLeftCorner(me, nx) = Je;
      K.bottomRightCorner(me, me) = -1e-10 * Eigen::MatrixXd::Identity(me, me);
      Eigen::VectorXd rhs(nx + me);
      rhs.head(nx) = rhs1;
      rhs.tail(me) = -ce;
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
      Eigen::VectorXd sol = lu.solve(rhs);
      dx = sol.head(nx);
      dlam = sol.tail(me);
      const double resid = (K * sol - rhs).lpNorm<Eigen::Infinity>() /
                           std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
      const bool sane = std::isfinite(dx.lpNorm<Eigen::Infinity>()) && resid < 1e-6;
      if (sane && dx.dot((H + delta * Eigen::MatrixXd::Identity(nx, nx)) * dx) >= -1e-12)
        break;
      delta = delta == 0.0 ? 1e-8 : delta * 100.0;
    }
    Eigen::VectorXd ds = Ji * dx + rc;
    Eigen::VectorXd dnu =
        (mu / s.array()).matrix() - nu - (theta.array() * ds.array()).matrix();

    // fraction to boundary
    double alpha_s = 1.0, alpha_nu = 1.0;
    for (int i = 0; i < mi; ++i) {
      if (ds[i] < 0) alpha_s = std::min(alpha_s, -0.995 * s[i] / ds[i]);
      if (dnu[i] < 0) alpha_nu = std::min(alpha_nu, -0.995 * nu[i] / dnu[i]);
    }
    // Armijo on the merit
    double alpha = alpha_s;
    const double phi0 = merit(x, s);
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      Eigen::VectorXd xn = x + alpha * dx;
      Eigen::VectorXd sn = s + alpha * ds;
      if ((sn.array() > 0).all() && merit(xn, sn) <= phi0 - 1e-8 * alpha * dx.squaredNorm()) {
        x = xn;
        s = sn;
        accepted = true;
        break;
      }
      alpha *= 0.5;
      if (alpha * dx.lpNorm<Eigen::Infinity>() < opts.step_tol) break;
    }
    if (!accepted) {
      // fall back to a pure centering step; if even that stalls, stop
      if (mu > opts.kkt_tol / 10.0) {
        mu *= 0.2;
        continue;
      }
      break;
    }
    lam += alpha * dlam;
    nu += std::min(alpha_nu, alpha) * dnu;
    for (int i = 0; i < mi; ++i) nu[i] = std::max(nu[i], 1e-12);
  }
  out.x = x;
  return out;
}

}  // namespace

double max_violation(const Network& net, const OperatingPoint& pt,
                     const std::vector<double>& gen_p, const std::vector<double>& gen_q) {
  double worst = 0.0;
  auto bump = [&](double v) { worst = std::max(worst, std::abs(v)); };
  for (auto [re, im] : kcl_residual(net, pt)) {
    bump(re);
    bump(im);
  }
  for (std::size_t k = 0; k < net.branch_count(); ++k) {
    auto [re, im] = line_residual(net.branches()[k], pt, net, k);
    bump(re);
    bump(im);
    const double cap = net.thermal_pu(k);
    const double ex = pt.z_line[k] * pt.z_line[k] + pt.w_line[k] * pt.w_line[k] - cap * cap;
    if (ex > 0) bump(ex);
  }
  for (std::size_t i = 0; i < net.bus_count(); ++i) {
    auto [p, q] = injection_from_state(pt.v[i], pt.u[i], pt.z[i], pt.w[i]);
    double pg = 0.0, qg = 0.0;
    for (std::size_t g : net.generators_at(i)) {
      pg += gen_p[g] / net.base_mva();
      qg += gen_q[g] / net.base_mva();
    }
    bump(p - (pg - net.p_demand_pu(i)));
    bump(q - (qg - net.q_demand_pu(i)));
    const double vm2 = pt.v[i] * pt.v[i] + pt.u[i] * pt.u[i];
    const Bus& b = net.buses()[i];
    if (vm2 > b.v_max * b.v_max) bump(vm2 - b.v_max * b.v_max);
    if (vm2 < b.v_min * b.v_min) bump(b.v_min * b.v_min - vm2);
  }
  for (std::size_t g = 0; g < net.generators().size(); ++g) {
    const Generator& gen = net.generators()[g];
    if (gen_p[g] > gen.p_max) bump((gen_p[g] - gen.p_max) / net.base_mva());
    if (gen_p[g] < gen.p_min) bump((gen.p_min - gen_p[g]) / net.base_mva());
    if (gen_q[g] > gen.q_max) bump((gen_q[g] - gen.q_max) / net.base_mva());
    if (gen_q[g] < gen.q_min) bump((gen.q_min - gen_q[g]) / net.base_mva());
  }
  return worst;
}

SolveReport solve_acopf_fixed(const Network& net,
                              const std::optional<OperatingPoint>& warm_start,
                              const AcSolverOptions& opts) {
  if (net.candidate_count() != 0)
    throw TepError("solve_acopf_fixed expects a network without candidates");
  const Layout lay = make_layout(net);
  Nlp nlp = build_nlp(net, lay, opts.elastic_penalty);
  if (warm_start) {
    const OperatingPoint& wp = *warm_start;
    if (wp.v.size() == net.bus_count() && wp.z_line.size() == net.branch_count()) {
      for (int i = 0; i < lay.n; ++i) {
        nlp.x0[lay.v0 + i] = wp.v[i];
        nlp.x0[lay.u0 + i] = wp.u[i];
      }
      for (int k = 0; k < lay.L; ++k) {
        nlp.x0[lay.zl0 + k] = wp.z_line[k];
        nlp.x0[lay.wl0 + k] = wp.w_line[k];
      }
    }
  }
  IpmOutcome ipm = run_ipm(nlp, opts);

  SolveReport rep;
  rep.iterations = ipm.iterations;
  rep.kkt_residual = ipm.kkt;
  if (!ipm.converged) {
    rep.status = ipm.iterations >= opts.max_iters ? SolveStatus::iteration_limit
                                                  : SolveStatus::numerical_failure;
    return rep;
  }
  double elastic = 0.0;
  for (int i = 0; i < 4 * lay.n; ++i) elastic += std::abs(ipm.x[lay.el0 + i]);
  if (elastic > 1e-6) {
    rep.status = SolveStatus::infeasible;
    return rep;
  }
  OperatingPoint pt;
  pt.v.resize(lay.n);
  pt.u.resize(lay.n);
  pt.z.assign(lay.n, 0.0);
  pt.w.assign(lay.n, 0.0);
  pt.p.resize(lay.n);
  pt.q.resize(lay.n);
  pt.z_line.resize(lay.L);
  pt.w_line.resize(lay.L);
  for (int i = 0; i < lay.n; ++i) {
    pt.v[i] = ipm.x[lay.v0 + i];
    pt.u[i] = ipm.x[lay.u0 + i];
  }
  for (int k = 0; k < lay.L; ++k) {
    pt.z_line[k] = ipm.x[lay.zl0 + k];
    pt.w_line[k] = ipm.x[lay.wl0 + k];
    const Branch& br = net.branches()[k];
    const std::size_t f = net.bus_index(br.from), t = net.bus_index(br.to);
    pt.z[f] += pt.z_line[k];
    pt.w[f] += pt.w_line[k];
    pt.z[t] -= pt.z_line[k];
    pt.w[t] -= pt.w_line[k];
  }
  for (int i = 0; i < lay.n; ++i) {
    auto [p, q] = injection_from_state(pt.v[i], pt.u[i], pt.z[i], pt.w[i]);
    pt.p[i] = p;
    pt.q[i] = q;
  }
  pt.consistent = true;
  rep.point = pt;
  rep.gen_p.resize(lay.G);
  rep.gen_q.resize(lay.G);
  double ops = 0.0;
  for (int g = 0; g < lay.G; ++g) {
    rep.gen_p[g] = ipm.x[lay.pg0 + g] * net.base_mva();
    rep.gen_q[g] = ipm.x[lay.qg0 + g] * net.base_mva();
    ops += net.generators()[g].marginal_cost * rep.gen_p[g];
  }
  rep.objective_ops = ops;
  rep.status = SolveStatus::optimal;
  return rep;
}

SolveReport solve_acopf(const Network& net, const Configuration& cfg,
                        const std::optional<OperatingPoint>& warm_start,
                        const AcSolverOptions& opts) {
  if (!cfg.belongs_to(net)) throw TepError("configuration does not belong to this network");
  return solve_acopf_fixed(apply_configuration(net, cfg).network, warm_start, opts);
}

}  // namespace tep

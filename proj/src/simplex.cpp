#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tep/mip.hpp"
#include "tep/network.hpp"

namespace tep {

int LinearProgram::add_var(double lo, double hi, double cost) {
  lower.push_back(lo);
  upper.push_back(hi);
  objective.push_back(cost);
  return num_vars++;
}

int LinearProgram::add_row(RowSense sense, double rhs_value) {
  senses.push_back(sense);
  rhs.push_back(rhs_value);
  return static_cast<int>(rhs.size()) - 1;
}

void LinearProgram::check() const {
  if (static_cast<int>(objective.size()) != num_vars ||
      static_cast<int>(lower.size()) != num_vars ||
      static_cast<int>(upper.size()) != num_vars)
    throw TepError("LinearProgram: inconsistent variable arrays");
  if (senses.size() != rhs.size()) throw TepError("LinearProgram: inconsistent row arrays");
  auto bad = [](double v) { return std::isnan(v); };
  for (double v : objective)
    if (bad(v) || std::isinf(v)) throw TepError("LinearProgram: bad objective coefficient");
  for (double v : rhs)
    if (bad(v) || std::isinf(v)) throw TepError("LinearProgram: bad rhs");
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= num_rows() || t.col < 0 || t.col >= num_vars)
      throw TepError("LinearProgram: entry out of range");
    if (bad(t.value) || std::isinf(t.value)) throw TepError("LinearProgram: bad coefficient");
  }
  for (int j = 0; j < num_vars; ++j) {
    if (bad(lower[j]) || bad(upper[j]) || lower[j] > upper[j])
      throw TepError("LinearProgram: bad bounds on variable " + std::to_string(j));
  }
}

namespace {

// Bounded-variable revised primal simplex with a dense basis inverse.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opts) : opts_(opts) {
    m_ = lp.num_rows();
    n_struct_ = lp.num_vars;
    cols_.resize(n_struct_);
    for (const auto& t : lp.entries) cols_[t.col].push_back({t.row, t.value});
    // merge duplicate triplets
    for (auto& col : cols_) {
      std::sort(col.begin(), col.end());
      std::vector<std::pair<int, double>> merged;
      for (const auto& e : col) {
        if (!merged.empty() && merged.back().first == e.first)
          merged.back().second += e.second;
        else
          merged.push_back(e);
      }
      col.swap(merged);
    }
    lo_ = lp.lower;
    hi_ = lp.upper;
    cost_.assign(n_struct_, 0.0);
    obj_orig_ = lp.objective;
    b_ = lp.rhs;
    // slacks: row i gets variable n_struct_ + i
    for (int i = 0; i < m_; ++i) {
      cols_.push_back({{i, 1.0}});
      switch (lp.senses[i]) {
        case RowSense::le: lo_.push_back(0.0); hi_.push_back(kInf); break;
        case RowSense::ge: lo_.push_back(-kInf); hi_.push_back(0.0); break;
        case RowSense::eq: lo_.push_back(0.0); hi_.push_back(0.0); break;
      }
      cost_.push_back(0.0);
      obj_orig_.push_back(0.0);
    }
    n_ = static_cast<int>(cols_.size());
  }

  MipStatus run(std::vector<double>* x_out, double* obj_out) {
    place_nonbasic();
    if (!phase1()) return MipStatus::infeasible;
    cost_ = obj_orig_;
    cost_.resize(n_ + num_art_, 0.0);
    MipStatus st = iterate();
    if (st == MipStatus::optimal) {
      x_out->assign(x_.begin(), x_.begin() + n_struct_);
      double obj = 0.0;
      for (int j = 0; j < n_struct_; ++j) obj += obj_orig_[j] * x_[j];
      *obj_out = obj;
    }
    return st;
  }

 private:
  void place_nonbasic() {
    x_.assign(n_, 0.0);
    at_upper_.assign(n_, false);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j]))
        x_[j] = lo_[j];
      else if (std::isfinite(hi_[j])) {
        x_[j] = hi_[j];
        at_upper_[j] = true;
      } else
        x_[j] = 0.0;
    }
  }

  // Initial basis from slacks; rows whose slack cannot absorb the residual
  // get an artificial column.
  bool phase1() {
    basis_.resize(m_);
    in_basis_.assign(n_, false);
    num_art_ = 0;
    std::vector<double> resid = b_;
    for (int j = 0; j < n_struct_; ++j) {
      if (x_[j] == 0.0) continue;
      for (const auto& e : cols_[j]) resid[e.first] -= e.second * x_[j];
    }
    bool any_art = false;
    for (int i = 0; i < m_; ++i) {
      const int sj = n_struct_ + i;
      if (resid[i] >= lo_[sj] - 1e-12 && resid[i] <= hi_[sj] + 1e-12) {
        basis_[i] = sj;
        in_basis_[sj] = true;
        x_[sj] = resid[i];
      } else {
        // clamp slack to nearest bound, absorb the rest in an artificial
        const double sv = std::clamp(resid[i], lo_[sj], hi_[sj]);
        x_[sj] = sv;
        const double gap = resid[i] - sv;
        const double sign = gap >= 0.0 ? 1.0 : -1.0;
        cols_.push_back({{i, sign}});
        lo_.push_back(0.0);
        hi_.push_back(kInf);
        cost_.push_back(0.0);
        x_.push_back(std::abs(gap));
        at_upper_.push_back(false);
        in_basis_.push_back(true);
        basis_[i] = n_ + num_art_;
        ++num_art_;
        any_art = true;
      }
    }
    refactor();
    if (!any_art) return true;
    // phase-1 objective: sum of artificials
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int a = 0; a < num_art_; ++a) cost_[n_ + a] = 1.0;
    MipStatus st = iterate();
    if (st != MipStatus::optimal) return false;
    double infeas = 0.0;
    for (int a = 0; a < num_art_; ++a) infeas += x_[n_ + a];
    if (infeas > 1e-7) return false;
    // freeze artificials at zero
    for (int a = 0; a < num_art_; ++a) {
      lo_[n_ + a] = hi_[n_ + a] = 0.0;
    }
    return true;
  }

  void refactor() {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i)
      for (const auto& e : cols_[basis_[i]]) B(e.first, i) = e.second;
    binv_ = B.partialPivLu().inverse();
    recompute_basics();
  }

  void recompute_basics() {
    Eigen::VectorXd r(m_);
    for (int i = 0; i < m_; ++i) r[i] = b_[i];
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
      if (in_basis_[j] || x_[j] == 0.0) continue;
      for (const auto& e : cols_[j]) r[e.first] -= e.second * x_[j];
    }
    Eigen::VectorXd xb = binv_ * r;
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
  }

  MipStatus iterate() {
    const int ncols = static_cast<int>(cols_.size());
    int stall = 0;
    for (int iter = 0; iter < opts_.max_iters; ++iter) {
      // duals and reduced costs
      Eigen::VectorXd cb(m_);
      for (int i = 0; i < m_; ++i) cb[i] = cost_[basis_[i]];
      Eigen::VectorXd y = binv_.transpose() * cb;
      const bool bland = stall > 60;
      int enter = -1;
      double best = -opts_.opt_tol;
      int dir = 0;
      for (int j = 0; j < ncols; ++j) {
        if (in_basis_[j]) continue;
        if (lo_[j] == hi_[j]) continue;  // fixed
        double d = cost_[j];
        for (const auto& e : cols_[j]) d -= y[e.first] * e.second;
        const bool can_up = !at_upper_[j] || !std::isfinite(hi_[j]);
        const bool at_lo = std::isfinite(lo_[j]) && !at_upper_[j];
        const bool free_var = !std::isfinite(lo_[j]) && !std::isfinite(hi_[j]);
        int jdir = 0;
        double viol = 0.0;
        if (free_var) {
          if (std::abs(d) > opts_.opt_tol) {
            jdir = d < 0 ? 1 : -1;
            viol = -std::abs(d);
          }
        } else if (at_lo || (!std::isfinite(lo_[j]) && at_upper_[j] == false)) {
          if (d < -opts_.opt_tol) {
            jdir = 1;
            viol = d;
          }
        } else {  // at upper
          if (d > opts_.opt_tol) {
            jdir = -1;
            viol = -d;
          }
        }
        if (jdir == 0) continue;
        if (bland) {
          enter = j;
          dir = jdir;
          break;
        }
        if (viol < best) {
          best = viol;
          enter = j;
          dir = jdir;
        }
      }
      if (enter < 0) return MipStatus::optimal;

      // direction through the basis
      Eigen::VectorXd aj = Eigen::VectorXd::Zero(m_);
      for (const auto& e : cols_[enter]) aj[e.first] = e.second;
      Eigen::VectorXd w = binv_ * aj;

      // ratio test: entering moves by t*dir; basic i moves by -dir*w_i*t
      double t_max = kInf;
      int leave = -1;      // row index
      int leave_bound = 0; // -1 to lower, +1 to upper
      if (std::isfinite(hi_[enter]) && std::isfinite(lo_[enter]))
        t_max = hi_[enter] - lo_[enter];  // bound flip
      for (int i = 0; i < m_; ++i) {
        const double wi = dir * w[i];
        const int bj = basis_[i];
        if (wi > 1e-11) {  // basic decreases toward lower bound
          if (std::isfinite(lo_[bj])) {
            const double t = (x_[bj] - lo_[bj]) / wi;
            if (t < t_max - 1e-12 || (bland && t <= t_max && (leave < 0 || bj < basis_[leave]))) {
              t_max = t;
              leave = i;
              leave_bound = -1;
            }
          }
        } else if (wi < -1e-11) {  // basic increases toward upper bound
          if (std::isfinite(hi_[bj])) {
            const double t = (hi_[bj] - x_[bj]) / (-wi);
            if (t < t_max - 1e-12 || (bland && t <= t_max && (leave < 0 || bj < basis_[leave]))) {
              t_max = t;
              leave = i;
              leave_bound = +1;
            }
          }
        }
      }
      if (!std::isfinite(t_max)) return MipStatus::unbounded;
      t_max = std::max(t_max, 0.0);
      stall = t_max < 1e-11 ? stall + 1 : 0;

      // apply step
      x_[enter] += dir * t_max;
      for (int i = 0; i < m_; ++i) x_[basis_[i]] -= dir * w[i] * t_max;
      if (leave < 0) {
        at_upper_[enter] = dir > 0;  // hit the opposite bound: flip
        continue;
      }
      const int out = basis_[leave];
      x_[out] = leave_bound < 0 ? lo_[out] : hi_[out];
      at_upper_[out] = leave_bound > 0;
      in_basis_[out] = false;
      basis_[leave] = enter;
      in_basis_[enter] = true;
      // product-form update of the inverse
      const double piv = w[leave];
      if (std::abs(piv) < 1e-10) {
        refactor();
        continue;
      }
      Eigen::RowVectorXd br = binv_.row(leave) / piv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave) continue;
        if (w[i] != 0.0) binv_.row(i) -= w[i] * br;
      }
      binv_.row(leave) = br;
      if ((iter + 1) % 120 == 0) refactor();
    }
    return MipStatus::numerical_failure;
  }

  SimplexOptions opts_;
  int m_ = 0, n_struct_ = 0, n_ = 0, num_art_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lo_, hi_, cost_, obj_orig_, b_, x_;
  std::vector<bool> at_upper_;
  std::vector<int> basis_;
  std::vector<bool> in_basis_;
  Eigen::MatrixXd binv_;
};

}  // namespace

MipResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts) {
  lp.check();
  MipResult res;
  if (lp.num_rows() == 0) {
    // pure bound problem
    res.x.resize(lp.num_vars);
    double obj = 0.0;
    for (int j = 0; j < lp.num_vars; ++j) {
      const double c = lp.objective[j];
      double v;
      if (c > 0)
        v = lp.lower[j];
      else if (c < 0)
        v = lp.upper[j];
      else
        v = std::isfinite(lp.lower[j]) ? lp.lower[j] : (std::isfinite(lp.upper[j]) ? lp.upper[j] : 0.0);
      if (!std::isfinite(v)) {
        res.status = MipStatus::unbounded;
        return res;
      }
      res.x[j] = v;
      obj += c * v;
    }
    res.status = MipStatus::optimal;
    res.objective = obj + lp.objective_offset;
    res.best_bound = res.objective;
    return res;
  }
  Simplex s(lp, opts);
  double obj = 0.0;
  res.status = s.run(&res.x, &obj);
  if (res.status == MipStatus::optimal) {
    res.objective = obj + lp.objective_offset;
    res.best_bound = res.objective;
  }
  return res;
}

}  // namespace tep

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "tep/mip.hpp"

using namespace tep;

TEST_CASE("one-variable lps") {
  LinearProgram lp;
  int x = lp.add_var(0.0, kInf, -1.0);  // max x == min -x
  lp.add_row(RowSense::le, 3.0);
  lp.set_entry(0, x, 1.0);
  auto res = solve_lp(lp);
  REQUIRE(res.status == MipStatus::optimal);
  CHECK(res.x[x] == doctest::Approx(3.0));

  LinearProgram bad;
  int y = bad.add_var(0.0, kInf, 1.0);
  bad.add_row(RowSense::le, -1.0);
  bad.set_entry(0, y, 1.0);
  CHECK(solve_lp(bad).status == MipStatus::infeasible);

  LinearProgram unb;
  unb.add_var(-kInf, kInf, 1.0);
  unb.add_row(RowSense::le, 5.0);
  unb.set_entry(0, 0, 1.0);
  CHECK(solve_lp(unb).status == MipStatus::unbounded);
}

namespace {

// Brute-force LP oracle: enumerate candidate vertices as intersections of
// n active constraints drawn from the rows and the box bounds.
double vertex_enum_opt(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       const Eigen::VectorXd& c, double lo, double hi) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(b.size());
  // constraint pool: A x <= b, x_i <= hi, -x_i <= -lo
  Eigen::MatrixXd P(m + 2 * n, n);
  Eigen::VectorXd q(m + 2 * n);
  P.topRows(m) = A;
  q.head(m) = b;
  for (int i = 0; i < n; ++i) {
    P.row(m + i).setZero();
    P(m + i, i) = 1.0;
    q(m + i) = hi;
    P.row(m + n + i).setZero();
    P(m + n + i, i) = -1.0;
    q(m + n + i) = -lo;
  }
  const int total = m + 2 * n;
  double best = kInf;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int k) {
    if (k == n) {
      Eigen::MatrixXd M(n, n);
      Eigen::VectorXd r(n);
      for (int i = 0; i < n; ++i) {
        M.row(i) = P.row(pick[i]);
        r(i) = q(pick[i]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (!lu.isInvertible()) return;
      Eigen::VectorXd x = lu.solve(r);
      if (((P * x).array() <= q.array() + 1e-7).all()) best = std::min(best, c.dot(x));
      return;
    }
    for (int i = start; i <= total - (n - k); ++i) {
      pick[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("random dense lps match vertex enumeration") {
  std::mt19937 rng(20240811);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);  // 2..5 vars
    const int m = 2 + static_cast<int>(rng() % 5);  // 2..6 rows
    Eigen::MatrixXd A(m, n);
    Eigen::VectorXd b(m), c(n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
    for (int j = 0; j < n; ++j) c(j) = gauss(rng);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < m; ++i) b(i) = A.row(i).dot(ones) + std::abs(gauss(rng));

    LinearProgram lp;
    for (int j = 0; j < n; ++j) lp.add_var(0.0, 2.0, c(j));
    for (int i = 0; i < m; ++i) {
      lp.add_row(RowSense::le, b(i));
      for (int j = 0; j < n; ++j) lp.set_entry(i, j, A(i, j));
    }
    auto res = solve_lp(lp);
    REQUIRE(res.status == MipStatus::optimal);
    const double oracle = vertex_enum_opt(A, b, c, 0.0, 2.0);
    CHECK(res.objective == doctest::Approx(oracle).epsilon(1e-7));
  }
}

TEST_CASE("knapsacks match exhaustive enumeration") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 10;
    std::vector<double> value(n), weight(n);
    for (int i = 0; i < n; ++i) {
      value[i] = 1 + rng() % 20;
      weight[i] = 1 + rng() % 15;
    }
    const double cap = 0.4 * std::accumulate(weight.begin(), weight.end(), 0.0);
    LinearProgram lp;
    std::vector<int> bins;
    for (int i = 0; i < n; ++i) bins.push_back(lp.add_var(0.0, 1.0, -value[i]));
    lp.add_row(RowSense::le, cap);
    for (int i = 0; i < n; ++i) lp.set_entry(0, i, weight[i]);
    auto res = solve_mip(lp, bins);
    REQUIRE(res.status == MipStatus::optimal);

    double best = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double v = 0.0, w = 0.0;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) {
          v += value[i];
          w += weight[i];
        }
      if (w <= cap) best = std::max(best, v);
    }
    CHECK(-res.objective == doctest::Approx(best).epsilon(1e-9));
    CHECK(std::abs(res.objective - res.best_bound) <= 1e-6 + 1e-9 * std::abs(res.objective));
  }
}

TEST_CASE("lp-integral instance solves at the root") {
  // interval (unimodular) constraint matrix: consecutive-ones rows
  LinearProgram lp;
  std::vector<int> bins;
  for (int i = 0; i < 4; ++i) bins.push_back(lp.add_var(0.0, 1.0, -(i + 1.0)));
  lp.add_row(RowSense::le, 1.0);
  lp.set_entry(0, 0, 1.0);
  lp.set_entry(0, 1, 1.0);
  lp.add_row(RowSense::le, 1.0);
  lp.set_entry(1, 2, 1.0);
  lp.set_entry(1, 3, 1.0);
  auto res = solve_mip(lp, bins);
  REQUIRE(res.status == MipStatus::optimal);
  CHECK(res.node_count == 1);
  CHECK(res.objective == doctest::Approx(-6.0));
}

TEST_CASE("sos2 branching keeps nonzeros adjacent") {
  // max 3*l0 + 0*l1 + 0*l2 + 3*l3 over the simplex with SOS2: the
  // unconstrained optimum wants the non-adjacent ends {l0, l3}.
  LinearProgram lp;
  std::vector<double> profit = {3.0, 1.0, 1.0, 3.0};
  Sos2Group grp;
  for (int i = 0; i < 4; ++i) grp.push_back(lp.add_var(0.0, 1.0, -profit[i]));
  lp.add_row(RowSense::eq, 1.0);
  for (int i = 0; i < 4; ++i) lp.set_entry(0, i, 1.0);
  auto res = solve_mip(lp, {}, {grp});
  REQUIRE(res.status == MipStatus::optimal);
  // oracle: enumerate adjacent pairs (and singletons)
  double best = kInf;
  for (int j = 0; j < 3; ++j) best = std::min(best, -std::max(profit[j], profit[j + 1]));
  CHECK(res.objective == doctest::Approx(best));
  int nnz = 0;
  for (int i = 0; i < 4; ++i) nnz += std::abs(res.x[i]) > 1e-6;
  CHECK(nnz <= 2);
}

TEST_CASE("depth-first and best-bound agree on random mips") {
  std::mt19937 rng(4242);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6;
    const int m = 4;
    LinearProgram lp;
    std::vector<int> bins;
    for (int j = 0; j < n; ++j) bins.push_back(lp.add_var(0.0, 1.0, gauss(rng)));
    for (int i = 0; i < m; ++i) {
      lp.add_row(RowSense::le, 1.0 + (rng() % 3));
      for (int j = 0; j < n; ++j) lp.set_entry(i, j, gauss(rng) > 0 ? 1.0 : 0.0);
    }
    MipOptions best_first;
    MipOptions depth;
    depth.depth_first = true;
    auto a = solve_mip(lp, bins, {}, best_first);
    auto b = solve_mip(lp, bins, {}, depth);
    REQUIRE(a.status == b.status);
    if (a.status == MipStatus::optimal)
      CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
  }
}

TEST_CASE("mps round trip preserves the model") {
  LinearProgram lp;
  std::vector<int> bins;
  bins.push_back(lp.add_var(0.0, 1.0, 2.5));
  lp.add_var(-1.0, 4.0, -1.0);
  lp.add_var(-kInf, kInf, 0.25);
  lp.add_row(RowSense::le, 7.0);
  lp.set_entry(0, 0, 1.0);
  lp.set_entry(0, 1, 2.0);
  lp.add_row(RowSense::eq, 1.5);
  lp.set_entry(1, 1, 1.0);
  lp.set_entry(1, 2, -3.0);
  lp.add_row(RowSense::ge, -2.0);
  lp.set_entry(2, 2, 1.0);
  MipModel model{lp, bins, {{1, 2}}, {}, {}, "RTRIP"};

  const std::string text = write_mps(model);
  MipModel back = read_mps(text);
  CHECK(back.lp.num_vars == 3);
  CHECK(back.lp.num_rows() == 3);
  CHECK(back.binaries == bins);
  REQUIRE(back.sos2.size() == 1);
  CHECK(back.sos2[0].size() == 2);
  // identical optimum through the round trip
  auto direct = solve_mip(model.lp, model.binaries, model.sos2);
  auto rt = solve_mip(back.lp, back.binaries, back.sos2);
  REQUIRE(direct.status == MipStatus::optimal);
  REQUIRE(rt.status == MipStatus::optimal);
  CHECK(direct.objective == doctest::Approx(rt.objective).epsilon(1e-12));
  // and the writer is stable across one more cycle
  CHECK(write_mps(back) == write_mps(read_mps(write_mps(back))));
}

#pragma once

#include <limits>
#include <string>
#include <vector>

namespace tep {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { le, eq, ge };

// min objective . x  subject to  A x (sense) rhs,  lower <= x <= upper.
struct LinearProgram {
  struct Triplet {
    int row;
    int col;
    double value;
  };

  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Triplet> entries;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  double objective_offset = 0.0;

  int num_rows() const { return static_cast<int>(rhs.size()); }
  int add_var(double lo, double hi, double cost);
  int add_row(RowSense sense, double rhs_value);
  void set_entry(int row, int col, double value) { entries.push_back({row, col, value}); }
  void check() const;  // dimension and finiteness checks
};

enum class MipStatus { optimal, infeasible, unbounded, node_limit, numerical_failure };

struct MipResult {
  MipStatus status = MipStatus::numerical_failure;
  double objective = 0.0;
  std::vector<double> x;
  long node_count = 0;
  double best_bound = -kInf;
};

struct SimplexOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  int max_iters = 200000;
};

MipResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

// Ordered group of variable indices; at most two may be nonzero and they
// must be adjacent.
using Sos2Group = std::vector<int>;

struct MipOptions {
  SimplexOptions lp;
  double int_tol = 1e-6;
  double gap_abs = 1e-6;
  double gap_rel = 1e-9;
  long node_limit = 2000000;
  bool depth_first = false;  // default: best-bound node selection
};

MipResult solve_mip(const LinearProgram& lp, const std::vector<int>& binaries,
                    const std::vector<Sos2Group>& sos2 = {}, const MipOptions& opts = {});

// A MIP in engine terms plus naming, for MPS round trips.
struct MipModel {
  LinearProgram lp;
  std::vector<int> binaries;
  std::vector<Sos2Group> sos2;
  std::vector<std::string> var_names;
  std::vector<std::string> row_names;
  std::string name = "TEPMIP";
};

std::string write_mps(const MipModel& model);
MipModel read_mps(const std::string& text);

}  // namespace tep

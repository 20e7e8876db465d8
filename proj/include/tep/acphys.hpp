#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tep/network.hpp"

namespace tep {

// State of the network in rectangular current-voltage coordinates, all
// per-unit. Line entries are aligned with the closed-branch list of the
// network the point was produced for.
struct OperatingPoint {
  std::vector<double> v, u;        // bus voltage, real/imag
  std::vector<double> z, w;        // bus net injected current, real/imag
  std::vector<double> p, q;        // bus net injection
  std::vector<double> z_line, w_line;  // line series current, real/imag
  bool consistent = false;         // p = vz+uw and q = uz-vw hold to 1e-8
};

enum class SolveStatus { optimal, infeasible, iteration_limit, numerical_failure };

struct SolveReport {
  SolveStatus status = SolveStatus::numerical_failure;
  double objective_ops = 0.0;  // USD/h, c^T p term only
  std::optional<OperatingPoint> point;
  std::vector<double> gen_p, gen_q;  // MW / MVAr dispatch per generator
  int iterations = 0;
  double kkt_residual = 0.0;
};

struct AcSolverOptions {
  double kkt_tol = 1e-6;
  double step_tol = 1e-10;
  int max_iters = 200;
  double elastic_penalty = 1e6;  // USD/h per pu of power-balance violation
};

// KCL residual (real, imag) per bus: z_i + sum_j (z_ji - z_ij), eqs. (1)-(2).
std::vector<std::pair<double, double>> kcl_residual(const Network& net,
                                                    const OperatingPoint& pt);

// Series voltage-drop residual of one closed branch, eqs. (3)-(4).
std::pair<double, double> line_residual(const Branch& branch, const OperatingPoint& pt,
                                        const Network& net, std::size_t branch_pos);

// p = vz + uw, q = uz - vw, eqs. (5)-(6).
std::pair<double, double> injection_from_state(double v, double u, double z, double w);

// z^2 + w^2 <= zbar^2 within 1e-8, eq. (8i).
bool thermal_ok(const Branch& branch, const OperatingPoint& pt, const Network& net,
                std::size_t branch_pos);

// Interior-point solve of the fixed-configuration ACOPF, eqs. (1)-(10).
SolveReport solve_acopf(const Network& net, const Configuration& cfg,
                        const std::optional<OperatingPoint>& warm_start = std::nullopt,
                        const AcSolverOptions& opts = {});

// Same on a network without candidates.
SolveReport solve_acopf_fixed(const Network& net,
                              const std::optional<OperatingPoint>& warm_start = std::nullopt,
                              const AcSolverOptions& opts = {});

// Feasibility check of a point against eqs. (1)-(8i) + bounds, independent of
// the solver path. Returns the max violation.
double max_violation(const Network& net, const OperatingPoint& pt,
                     const std::vector<double>& gen_p, const std::vector<double>& gen_q);

// VM (per-unit) and VA (degrees) per bus.
std::pair<std::vector<double>, std::vector<double>> vm_va(const OperatingPoint& pt);

// CSV layout: one row per bus (VM, VA), one row per line (z, w).
std::string operating_point_csv(const Network& net, const OperatingPoint& pt);

}  // namespace tep

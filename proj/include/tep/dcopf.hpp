#pragma once

#include <string>
#include <vector>

#include "tep/network.hpp"

namespace tep {

enum class DcStatus { optimal, infeasible };

struct DcSolution {
  DcStatus status = DcStatus::infeasible;
  double objective_ops = 0.0;       // USD/h
  std::vector<double> angles;       // radians per bus
  std::vector<double> dispatch;     // MW per generator
  std::vector<double> flows;        // MW per closed line (network order)
  std::vector<double> vm, va_deg;   // report convention: VM = 1.00
};

// B-theta linear DC OPF of the configured network (lossless, 1/X weights).
DcSolution solve_dcopf(const Network& net, const Configuration& cfg);
DcSolution solve_dcopf_fixed(const Network& net);

}  // namespace tep

#include "tep/caseio.hpp"

namespace tep {
namespace {

// 6-bus Garver variant with three candidate double-circuit lines to bus 6.
// Generator marginal costs are calibrated (the published tables imply
// c = 1/4/2 USD/MWh at buses 1/3/6).
const char* kGarver6y = R"(# garver6y: 6-bus expansion planning instance
# Bus 6 connects to the system through candidate lines 2-6, 3-6, 4-6.
base_mva 100

[bus]
# bus type Pd Qd Gs Bs area Vm Va baseKV zone Vmax Vmin
1 3  80.00 16.00 0 0 1 1.00 0 230 1 1.05 0.95
2 1 240.00 48.00 0 0 1 0.00 0 230 1 1.05 0.95
3 2  40.00  8.00 0 0 1 1.00 0 230 1 1.05 0.95
4 1 160.00 32.00 0 0 1 0.00 0 230 1 1.05 0.95
5 1 240.00 48.00 0 0 1 1.00 0 230 1 1.05 0.95
6 2   0.00  0.00 0 0 1 0.00 0 230 1 1.05 0.95

[generator]
# bus Qmax Qmin Vg Pmax Pmin
1  48.25 -10 1.00 160 0
3 101.25 -10 1.00 370 0
6 183.00 -10 1.00 610 0

[gencost]
# bus usd_per_mwh  (calibrated; the source tables omit costs)
1 1
3 4
6 2

[branch]
# fbus tbus R X rateA
1 2 0.040 0.40 180
1 4 0.060 0.60 150
1 5 0.010 0.10 360
2 3 0.020 0.20 180
2 4 0.040 0.40 180
3 5 0.010 0.10 360

[candidate]
# fbus tbus R X rateA build_cost
2 6 0.015 0.15 360 100
3 6 0.024 0.24 360  80
4 6 0.008 0.08 360  50
)";

// 2-bus instance: one candidate line (r=0.04, x=0.2). Demand and generation
// bounds are assumed (not published); the instance's role is structural.
const char* kCase2 = R"(# case2: 2-bus instance with a single candidate line
base_mva 100

[bus]
# bus type Pd Qd Gs Bs area Vm Va baseKV zone Vmax Vmin
1 3   0.00  0.00 0 0 1 1.00 0 230 1 1.05 0.95
2 1 100.00 20.00 0 0 1 0.00 0 230 1 1.05 0.95

[generator]
# bus Qmax Qmin Vg Pmax Pmin
1 80 -50 1.00 200 0

[gencost]
# bus usd_per_mwh
1 25

[branch]
# fbus tbus R X rateA

[candidate]
# fbus tbus R X rateA build_cost
1 2 0.04 0.20 200 30
)";

// 2-bus instance with two parallel candidate lines of different admittance.
const char* kCase2mod = R"(# case2mod: 2-bus instance, two parallel candidate lines
base_mva 100

[bus]
# bus type Pd Qd Gs Bs area Vm Va baseKV zone Vmax Vmin
1 3   0.00  0.00 0 0 1 1.00 0 230 1 1.05 0.95
2 1 100.00 20.00 0 0 1 0.00 0 230 1 1.05 0.95

[generator]
# bus Qmax Qmin Vg Pmax Pmin
1 80 -50 1.00 200 0

[gencost]
# bus usd_per_mwh
1 25

[branch]
# fbus tbus R X rateA

[candidate]
# fbus tbus R X rateA build_cost
1 2 0.04 0.20 200 30
1 2 0.02 0.10 200 45
)";

}  // namespace

std::string bundled_instance_text(const std::string& name) {
  if (name == "garver6y") return kGarver6y;
  if (name == "case2") return kCase2;
  if (name == "case2mod") return kCase2mod;
  throw TepError("unknown bundled instance \"" + name + "\"");
}

Network bundled_instance(const std::string& name) {
  return parse_case(bundled_instance_text(name));
}

std::vector<std::string> bundled_instance_names() {
  return {"case2", "case2mod", "garver6y"};
}

}  // namespace tep

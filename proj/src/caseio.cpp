#include "tep/caseio.hpp"

#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

namespace tep {
namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

double num(const std::string& tok, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got \"" + tok + "\"", line);
  }
  if (pos != tok.size()) throw ParseError("trailing characters in number \"" + tok + "\"", line);
  return v;
}

int integer(const std::string& tok, int line) {
  const double v = num(tok, line);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw ParseError("expected an integer, got \"" + tok + "\"", line);
  return i;
}

BusKind kind_from_code(int code, int line) {
  switch (code) {
    case 1: return BusKind::load;
    case 2: return BusKind::generator;
    case 3: return BusKind::reference;
    default: throw ParseError("unknown bus type code " + std::to_string(code), line);
  }
}

int code_from_kind(BusKind k) {
  switch (k) {
    case BusKind::load: return 1;
    case BusKind::generator: return 2;
    default: return 3;
  }
}

}  // namespace

Network parse_case(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::string section;
  double base_mva = 100.0;

  std::vector<Bus> buses;
  std::vector<Branch> branches;     // existing, in file order
  std::vector<Branch> candidates;   // candidate section, in file order
  std::vector<Generator> gens;
  std::map<int, double> gencost;

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks[0].front() == '[') {
      if (toks[0].back() != ']' || toks.size() != 1)
        throw ParseError("malformed section header", lineno);
      section = toks[0].substr(1, toks[0].size() - 2);
      if (section != "bus" && section != "generator" && section != "gencost" &&
          section != "branch" && section != "candidate")
        throw ParseError("unknown section [" + section + "]", lineno);
      continue;
    }
    if (toks[0] == "base_mva") {
      if (toks.size() != 2) throw ParseError("base_mva takes one value", lineno);
      base_mva = num(toks[1], lineno);
      continue;
    }
    if (section.empty()) throw ParseError("data before any section header", lineno);

    if (section == "bus") {
      // bus type Pd Qd Gs Bs area Vm Va baseKV zone Vmax Vmin
      if (toks.size() < 4) throw ParseError("bus row needs at least id, type, Pd, Qd", lineno);
      Bus b;
      b.id = integer(toks[0], lineno);
      b.kind = kind_from_code(integer(toks[1], lineno), lineno);
      b.p_demand = num(toks[2], lineno);
      b.q_demand = num(toks[3], lineno);
      b.base_kv = toks.size() > 9 ? num(toks[9], lineno) : 0.0;
      b.v_max = toks.size() > 11 ? num(toks[11], lineno) : 1.05;
      b.v_min = toks.size() > 12 ? num(toks[12], lineno) : 0.95;
      buses.push_back(b);
    } else if (section == "generator") {
      // bus Qmax Qmin Vg Pmax Pmin [Pc1 Pc2 Qc1min Qc1max Qc2min Qc2max]
      if (toks.size() < 6) throw ParseError("generator row needs bus, Qmax, Qmin, Vg, Pmax, Pmin", lineno);
      Generator g;
      g.bus = integer(toks[0], lineno);
      g.q_max = num(toks[1], lineno);
      g.q_min = num(toks[2], lineno);
      g.p_max = num(toks[4], lineno);
      g.p_min = num(toks[5], lineno);
      gens.push_back(g);
    } else if (section == "gencost") {
      // bus cost_usd_per_mwh
      if (toks.size() < 2) throw ParseError("gencost row needs bus and cost", lineno);
      gencost[integer(toks[0], lineno)] = num(toks[1], lineno);
    } else if (section == "branch" || section == "candidate") {
      // fbus tbus R X rateA [rateB rateC ratio angle] [+ build_cost for candidates]
      if (toks.size() < 5) throw ParseError("branch row needs fbus, tbus, R, X, rateA", lineno);
      Branch br;
      br.from = integer(toks[0], lineno);
      br.to = integer(toks[1], lineno);
      br.resistance = num(toks[2], lineno);
      br.reactance = num(toks[3], lineno);
      br.thermal_limit = num(toks[4], lineno);
      if (section == "candidate") {
        br.candidate = true;
        if (toks.size() < 6) throw ParseError("candidate row needs a build cost", lineno);
        br.build_cost = num(toks.back(), lineno);
        candidates.push_back(br);
      } else {
        branches.push_back(br);
      }
    }
  }

  for (Generator& g : gens) {
    auto it = gencost.find(g.bus);
    if (it == gencost.end())
      throw TepError("missing gencost entry for generator at bus " + std::to_string(g.bus));
    g.marginal_cost = it->second;
  }
  // candidates after existing branches, keeping each section's file order
  branches.insert(branches.end(), candidates.begin(), candidates.end());
  return Network(base_mva, std::move(buses), std::move(branches), std::move(gens));
}

std::string serialize_case(const Network& net) {
  std::ostringstream out;
  out << std::setprecision(15);
  out << "base_mva " << net.base_mva() << "\n\n[bus]\n";
  out << "# bus type Pd Qd Gs Bs area Vm Va baseKV zone Vmax Vmin\n";
  for (const Bus& b : net.buses()) {
    out << b.id << " " << code_from_kind(b.kind) << " " << b.p_demand << " " << b.q_demand
        << " 0 0 1 1 0 " << b.base_kv << " 1 " << b.v_max << " " << b.v_min << "\n";
  }
  out << "\n[generator]\n# bus Qmax Qmin Vg Pmax Pmin\n";
  for (const Generator& g : net.generators()) {
    out << g.bus << " " << g.q_max << " " << g.q_min << " 1 " << g.p_max << " " << g.p_min
        << "\n";
  }
  out << "\n[gencost]\n# bus usd_per_mwh\n";
  for (const Generator& g : net.generators()) {
    out << g.bus << " " << g.marginal_cost << "\n";
  }
  out << "\n[branch]\n# fbus tbus R X rateA\n";
  for (const Branch& br : net.branches()) {
    if (br.candidate) continue;
    out << br.from << " " << br.to << " " << br.resistance << " " << br.reactance << " "
        << br.thermal_limit << "\n";
  }
  out << "\n[candidate]\n# fbus tbus R X rateA build_cost\n";
  for (std::size_t k : net.candidate_indices()) {
    const Branch& br = net.branches()[k];
    out << br.from << " " << br.to << " " << br.resistance << " " << br.reactance << " "
        << br.thermal_limit << " " << br.build_cost << "\n";
  }
  return out.str();
}

}  // namespace tep

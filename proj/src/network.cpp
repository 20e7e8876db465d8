#include "tep/network.hpp"

#include <algorithm>
#include <set>

namespace tep {

Network::Network(double base_mva, std::vector<Bus> buses, std::vector<Branch> branches,
                 std::vector<Generator> generators)
    : base_mva_(base_mva),
      buses_(std::move(buses)),
      branches_(std::move(branches)),
      generators_(std::move(generators)) {
  validate();
  for (std::size_t b = 0; b < branches_.size(); ++b) {
    if (branches_[b].candidate) candidates_.push_back(b);
  }
  for (std::size_t i = 0; i < buses_.size(); ++i) {
    if (buses_[i].kind == BusKind::reference) reference_index_ = i;
  }
}

void Network::validate() const {
  if (base_mva_ <= 0.0) throw TepError("base_mva must be positive");
  std::set<int> ids;
  int refs = 0;
  for (const Bus& b : buses_) {
    if (!ids.insert(b.id).second)
      throw TepError("duplicate bus id " + std::to_string(b.id));
    if (b.kind == BusKind::reference) ++refs;
    if (b.v_min <= 0.0 || b.v_min > b.v_max)
      throw TepError("bad voltage bounds at bus " + std::to_string(b.id));
  }
  if (refs == 0) throw TepError("missing reference bus");
  if (refs > 1) throw TepError("more than one reference bus");
  for (const Branch& br : branches_) {
    if (!ids.count(br.from) || !ids.count(br.to))
      throw TepError("dangling branch endpoint " + std::to_string(br.from) + "-" +
                     std::to_string(br.to));
    if (br.reactance == 0.0)
      throw TepError("zero reactance on branch " + std::to_string(br.from) + "-" +
                     std::to_string(br.to));
    if (br.thermal_limit <= 0.0)
      throw TepError("nonpositive thermal limit on branch " + std::to_string(br.from) +
                     "-" + std::to_string(br.to));
    if (!br.candidate && br.build_cost != 0.0)
      throw TepError("build cost on non-candidate branch " + std::to_string(br.from) +
                     "-" + std::to_string(br.to));
  }
  for (const Generator& g : generators_) {
    if (!ids.count(g.bus)) throw TepError("generator at unknown bus " + std::to_string(g.bus));
    if (g.p_min > g.p_max || g.q_min > g.q_max)
      throw TepError("inverted generator bounds at bus " + std::to_string(g.bus));
  }
}

std::size_t Network::bus_index(int id) const {
  for (std::size_t i = 0; i < buses_.size(); ++i)
    if (buses_[i].id == id) return i;
  throw TepError("unknown bus id " + std::to_string(id));
}

std::vector<std::size_t> Network::generators_at(std::size_t bus_idx) const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < generators_.size(); ++g)
    if (bus_index(generators_[g].bus) == bus_idx) out.push_back(g);
  return out;
}

std::complex<double> Network::admittance(std::size_t b) const {
  const Branch& br = branches_[b];
  return 1.0 / std::complex<double>(br.resistance, br.reactance);
}

Configuration::Configuration(const Network& net, std::vector<std::uint8_t> open_flags)
    : open_flags_(std::move(open_flags)) {
  if (open_flags_.size() != net.candidate_count())
    throw TepError("configuration size does not match candidate count");
  for (std::size_t k : net.candidate_indices()) {
    const Branch& br = net.branches()[k];
    candidate_ends_.emplace_back(br.from, br.to);
  }
}

Configuration Configuration::from_label(const Network& net, const std::string& label) {
  if (label.size() != net.candidate_count())
    throw TepError("label \"" + label + "\" does not match candidate count");
  std::vector<std::uint8_t> flags(label.size());
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] != '0' && label[i] != '1') throw TepError("label must be binary digits");
    flags[i] = label[i] == '1' ? 0 : 1;  // '1' = built = closed
  }
  return Configuration(net, std::move(flags));
}

std::string Configuration::label() const {
  std::string s(open_flags_.size(), '0');
  for (std::size_t i = 0; i < open_flags_.size(); ++i) s[i] = open_flags_[i] ? '0' : '1';
  return s;
}

bool Configuration::belongs_to(const Network& net) const {
  if (open_flags_.size() != net.candidate_count()) return false;
  std::size_t i = 0;
  for (std::size_t k : net.candidate_indices()) {
    const Branch& br = net.branches()[k];
    if (candidate_ends_[i] != std::make_pair(br.from, br.to)) return false;
    ++i;
  }
  return true;
}

std::vector<Configuration> all_configurations(const Network& net) {
  const std::size_t k = net.candidate_count();
  std::vector<Configuration> out;
  out.reserve(std::size_t{1} << k);
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    // lexicographic label order: mask bit (k-1-i) drives label position i
    std::vector<std::uint8_t> flags(k);
    for (std::size_t i = 0; i < k; ++i) {
      const bool built = (mask >> (k - 1 - i)) & 1;
      flags[i] = built ? 0 : 1;
    }
    out.emplace_back(net, std::move(flags));
  }
  return out;
}

AppliedNetwork apply_configuration(const Network& net, const Configuration& cfg) {
  if (!cfg.belongs_to(net)) throw TepError("configuration does not belong to this network");
  std::vector<Branch> kept;
  double invest = 0.0;
  std::size_t ci = 0;
  for (std::size_t b = 0; b < net.branch_count(); ++b) {
    Branch br = net.branches()[b];
    if (br.candidate) {
      const bool built = cfg.built(ci++);
      if (!built) continue;
      invest += br.build_cost;
      br.candidate = false;
      br.build_cost = 0.0;
    }
    kept.push_back(br);
  }
  return AppliedNetwork{Network(net.base_mva(), net.buses(), std::move(kept), net.generators()),
                        invest};
}

double investment_cost(const Network& net, const Configuration& cfg) {
  if (!cfg.belongs_to(net)) throw TepError("configuration does not belong to this network");
  double invest = 0.0;
  std::size_t ci = 0;
  for (std::size_t b : net.candidate_indices()) {
    if (cfg.built(ci++)) invest += net.branches()[b].build_cost;
  }
  return invest;
}

}  // namespace tep

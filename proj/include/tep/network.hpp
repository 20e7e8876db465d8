#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tep {

struct TepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BusKind { reference, generator, load };

struct Bus {
  int id = 0;
  BusKind kind = BusKind::load;
  double p_demand = 0.0;  // MW
  double q_demand = 0.0;  // MVAr
  double v_min = 0.95;    // per-unit
  double v_max = 1.05;
  double base_kv = 0.0;
};

struct Generator {
  int bus = 0;
  double p_min = 0.0;  // MW
  double p_max = 0.0;
  double q_min = 0.0;  // MVAr
  double q_max = 0.0;
  double marginal_cost = 0.0;  // USD per MWh
};

struct Branch {
  int from = 0;
  int to = 0;
  double resistance = 0.0;  // per-unit
  double reactance = 0.0;
  double thermal_limit = 0.0;  // MVA
  bool candidate = false;
  double build_cost = 0.0;  // USD per hour, amortized
};

class Network {
 public:
  Network() = default;
  Network(double base_mva, std::vector<Bus> buses, std::vector<Branch> branches,
          std::vector<Generator> generators);

  double base_mva() const { return base_mva_; }
  const std::vector<Bus>& buses() const { return buses_; }
  const std::vector<Branch>& branches() const { return branches_; }
  const std::vector<Generator>& generators() const { return generators_; }

  std::size_t bus_count() const { return buses_.size(); }
  std::size_t branch_count() const { return branches_.size(); }

  // 0-based internal index of a bus id; throws on unknown id.
  std::size_t bus_index(int id) const;
  std::size_t reference_index() const { return reference_index_; }

  // Indices into branches() of the candidate branches, declaration order.
  const std::vector<std::size_t>& candidate_indices() const { return candidates_; }
  std::size_t candidate_count() const { return candidates_.size(); }

  // Generators attached to bus index i.
  std::vector<std::size_t> generators_at(std::size_t bus_idx) const;

  // Per-unit helpers.
  double p_demand_pu(std::size_t i) const { return buses_[i].p_demand / base_mva_; }
  double q_demand_pu(std::size_t i) const { return buses_[i].q_demand / base_mva_; }
  double thermal_pu(std::size_t b) const { return branches_[b].thermal_limit / base_mva_; }

  // Series admittance y = 1/(R + jX) of branch b.
  std::complex<double> admittance(std::size_t b) const;

 private:
  void validate() const;

  double base_mva_ = 100.0;
  std::vector<Bus> buses_;
  std::vector<Branch> branches_;
  std::vector<Generator> generators_;
  std::vector<std::size_t> candidates_;
  std::size_t reference_index_ = 0;
};

// Open/closed assignment over the candidate branches of one network.
// open_flag 1 = open (not built), matching o_ij = 1; the label string uses
// '1' = built, so label bit = 1 - open_flag, in candidate declaration order.
class Configuration {
 public:
  Configuration() = default;
  Configuration(const Network& net, std::vector<std::uint8_t> open_flags);

  // Parse a label like "101" ('1' = built) against net's candidates.
  static Configuration from_label(const Network& net, const std::string& label);

  const std::vector<std::uint8_t>& open_flags() const { return open_flags_; }
  bool open(std::size_t k) const { return open_flags_[k] != 0; }
  bool built(std::size_t k) const { return open_flags_[k] == 0; }
  std::size_t size() const { return open_flags_.size(); }
  std::string label() const;

  // True when this configuration was built against a network with the same
  // candidate branch list.
  bool belongs_to(const Network& net) const;

 private:
  std::vector<std::uint8_t> open_flags_;
  std::vector<std::pair<int, int>> candidate_ends_;
};

// All 2^k configurations in lexicographic label order ("000" first).
std::vector<Configuration> all_configurations(const Network& net);

struct AppliedNetwork {
  Network network;          // candidates resolved; survivors non-candidate
  double investment_cost;   // USD/h over built candidates
};

AppliedNetwork apply_configuration(const Network& net, const Configuration& cfg);

double investment_cost(const Network& net, const Configuration& cfg);

}  // namespace tep

#include "doctest.h"
#include "tep/caseio.hpp"
#include "tep/network.hpp"

using namespace tep;

TEST_CASE("garver6y parses to the published shape") {
  Network net = bundled_instance("garver6y");
  CHECK(net.bus_count() == 6);
  CHECK(net.branch_count() == 9);
  CHECK(net.candidate_count() == 3);
  CHECK(net.generators().size() == 3);
  CHECK(net.generators()[0].bus == 1);
  CHECK(net.generators()[1].bus == 3);
  CHECK(net.generators()[2].bus == 6);
  // candidate declaration order 2-6, 3-6, 4-6
  const auto& cand = net.candidate_indices();
  CHECK(net.branches()[cand[0]].from == 2);
  CHECK(net.branches()[cand[1]].from == 3);
  CHECK(net.branches()[cand[2]].from == 4);
  CHECK(net.branches()[cand[0]].build_cost == 100.0);
  CHECK(net.branches()[cand[1]].build_cost == 80.0);
  CHECK(net.branches()[cand[2]].build_cost == 50.0);
  CHECK(net.reference_index() == net.bus_index(1));
}

TEST_CASE("zero buses is a missing reference bus") {
  CHECK_THROWS_WITH_AS(parse_case("[bus]\n"), "missing reference bus", TepError);
}

TEST_CASE("parse errors carry line numbers") {
  const char* text = "[bus]\n1 3 0 0\nnot_a_number 1 0 0\n";
  try {
    parse_case(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line_number == 3);
  }
}

TEST_CASE("duplicate bus ids and dangling endpoints are rejected") {
  CHECK_THROWS_AS(parse_case("[bus]\n1 3 0 0\n1 1 0 0\n"), TepError);
  CHECK_THROWS_AS(
      parse_case("[bus]\n1 3 0 0\n[branch]\n1 7 0.1 0.2 100\n"), TepError);
}

TEST_CASE("serialize then parse is the identity on bundled instances") {
  for (const auto& name : bundled_instance_names()) {
    Network a = bundled_instance(name);
    Network b = parse_case(serialize_case(a));
    REQUIRE(a.bus_count() == b.bus_count());
    REQUIRE(a.branch_count() == b.branch_count());
    REQUIRE(a.generators().size() == b.generators().size());
    CHECK(a.base_mva() == b.base_mva());
    for (std::size_t i = 0; i < a.bus_count(); ++i) {
      CHECK(a.buses()[i].id == b.buses()[i].id);
      CHECK(a.buses()[i].kind == b.buses()[i].kind);
      CHECK(a.buses()[i].p_demand == b.buses()[i].p_demand);
      CHECK(a.buses()[i].q_demand == b.buses()[i].q_demand);
      CHECK(a.buses()[i].v_min == b.buses()[i].v_min);
      CHECK(a.buses()[i].v_max == b.buses()[i].v_max);
      CHECK(a.buses()[i].base_kv == b.buses()[i].base_kv);
    }
    for (std::size_t k = 0; k < a.branch_count(); ++k) {
      CHECK(a.branches()[k].from == b.branches()[k].from);
      CHECK(a.branches()[k].to == b.branches()[k].to);
      CHECK(a.branches()[k].resistance == b.branches()[k].resistance);
      CHECK(a.branches()[k].reactance == b.branches()[k].reactance);
      CHECK(a.branches()[k].thermal_limit == b.branches()[k].thermal_limit);
      CHECK(a.branches()[k].candidate == b.branches()[k].candidate);
      CHECK(a.branches()[k].build_cost == b.branches()[k].build_cost);
    }
    for (std::size_t g = 0; g < a.generators().size(); ++g) {
      CHECK(a.generators()[g].bus == b.generators()[g].bus);
      CHECK(a.generators()[g].p_min == b.generators()[g].p_min);
      CHECK(a.generators()[g].p_max == b.generators()[g].p_max);
      CHECK(a.generators()[g].q_min == b.generators()[g].q_min);
      CHECK(a.generators()[g].q_max == b.generators()[g].q_max);
      CHECK(a.generators()[g].marginal_cost == b.generators()[g].marginal_cost);
    }
  }
}

TEST_CASE("configuration enumeration is lexicographic with 2^k entries") {
  Network net = bundled_instance("garver6y");
  auto cfgs = all_configurations(net);
  REQUIRE(cfgs.size() == 8);
  CHECK(cfgs.front().label() == "000");
  CHECK(cfgs[5].label() == "101");
  CHECK(cfgs.back().label() == "111");

  Network c2m = bundled_instance("case2mod");
  CHECK(all_configurations(c2m).size() == 4);

  // zero candidates: the empty configuration
  Network applied = apply_configuration(net, cfgs.back()).network;
  CHECK(applied.candidate_count() == 0);
  CHECK(all_configurations(applied).size() == 1);
}

TEST_CASE("apply_configuration removes open candidates and prices built ones") {
  Network net = bundled_instance("garver6y");
  auto none = apply_configuration(net, Configuration::from_label(net, "000"));
  CHECK(none.network.branch_count() == 6);
  CHECK(none.investment_cost == 0.0);

  auto all = apply_configuration(net, Configuration::from_label(net, "111"));
  CHECK(all.network.branch_count() == 9);
  CHECK(all.investment_cost == 230.0);

  auto some = apply_configuration(net, Configuration::from_label(net, "101"));
  CHECK(some.network.branch_count() == 8);
  CHECK(some.investment_cost == 150.0);

  // the 3-6 line is the 80-dollar difference
  CHECK(all.investment_cost - some.investment_cost == doctest::Approx(80.0).epsilon(0));

  // mismatch is rejected
  Network c2 = bundled_instance("case2");
  CHECK_THROWS_AS(apply_configuration(c2, Configuration::from_label(net, "101")), TepError);
}

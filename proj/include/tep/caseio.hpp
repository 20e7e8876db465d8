#pragma once

#include <string>

#include "tep/network.hpp"

namespace tep {

struct ParseError : TepError {
  ParseError(const std::string& msg, int line)
      : TepError("line " + std::to_string(line) + ": " + msg), line_number(line) {}
  int line_number;
};

// Parse the sectioned instance format ([bus]/[generator]/[gencost]/[branch]/
// [candidate], '#' comments). See README for the column layout.
Network parse_case(const std::string& text);

std::string serialize_case(const Network& net);

// Bundled paper instances: "case2", "case2mod", "garver6y".
Network bundled_instance(const std::string& name);
std::string bundled_instance_text(const std::string& name);
std::vector<std::string> bundled_instance_names();

}  // namespace tep

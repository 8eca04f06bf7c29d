#pragma once

#include <stdexcept>
#include <string>

#include "magrecon/arch/step.hpp"

namespace magrecon::arch {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-oriented interchange format shared by every module and the CLI:
//   name <identifier>          (optional)
//   input <c> <h> <w>
//   <index> <type> key=value ...
// parse_network(print_network(spec)) == spec for any spec.
std::string print_network(const NetworkSpec& spec);
NetworkSpec parse_network(const std::string& text);

void save_network(const NetworkSpec& spec, const std::string& path);
NetworkSpec load_network(const std::string& path);

}  // namespace magrecon::arch

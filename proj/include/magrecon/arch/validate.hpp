#pragma once

#include "magrecon/arch/step.hpp"

namespace magrecon::arch {

// Checks every consistency rule and per-type parameter sanity; the report
// lists all violations, not just the first.
ValidationReport validate_network(const NetworkSpec& spec);

}  // namespace magrecon::arch

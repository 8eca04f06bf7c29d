#pragma once

#include <cstdint>

#include "magrecon/tracesim/trace.hpp"

namespace magrecon::tracesim {

struct DeadBranchPolicy {
  int period = 0;  // insert one decoy after every `period` real steps; 0 = off
  std::vector<arch::StepType> decoy_types = {
      arch::StepType::Conv, arch::StepType::BatchNorm, arch::StepType::MaxPool,
      arch::StepType::AvgPool};
};

struct DeadBranchResult {
  arch::NetworkSpec spec;
  std::vector<int> inserted;  // indices of decoy steps in the augmented spec
};

// Inserts decoy steps that compute on a copy of the dataflow at their
// junction and discard the result. Decoys keep the input dimensions so the
// augmented spec still validates.
DeadBranchResult inject_dead_branches(const arch::NetworkSpec& spec,
                                      const DeadBranchPolicy& policy,
                                      std::uint64_t seed);

// Adds an uncorrelated background load whose long-run mean level equals
// utilization * amp_per_util. utilization = 0 returns the trace unchanged.
Trace apply_jamming(const Trace& trace, double utilization,
                    double amp_per_util, std::uint64_t seed);

}  // namespace magrecon::tracesim

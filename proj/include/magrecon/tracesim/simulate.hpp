#pragma once

#include <cstdint>
#include <utility>

#include "magrecon/tracesim/profile.hpp"
#include "magrecon/tracesim/trace.hpp"

namespace magrecon::tracesim {

struct SimConfig {
  int batch = 64;
  bool clapperboard = true;
  std::uint64_t seed = 0;
};

// Synthesizes the annotated signal for one inference: for each step a
// constant-utilization plateau with deterministic texture, separated by
// sync gaps at idle level, preceded (optionally) by a clapperboard spike,
// with Gaussian sensor noise everywhere. Deterministic given the seed.
// Throws std::invalid_argument when the spec does not validate.
std::pair<Trace, Annotation> simulate(const arch::NetworkSpec& spec,
                                      const DeviceProfile& profile,
                                      const SimConfig& cfg);

// Step duration in samples: work time at full throughput, floored at two
// samples (launch/sync overhead; short activations sit at this floor).
std::int64_t step_duration_samples(const arch::Step& step, int batch,
                                   const DeviceProfile& profile);

// Fraction of full amplitude the step reaches: min(1, rate / core_capacity)
// where rate is the step's MAC throughput over its (floored) duration.
double step_utilization(const arch::Step& step, int batch,
                        const DeviceProfile& profile);

// Optional ADC pass: uniform quantization to `levels` steps over [lo, hi].
Trace quantize_trace(const Trace& trace, double lo, double hi, int levels);

}  // namespace magrecon::tracesim

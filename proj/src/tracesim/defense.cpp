#include "magrecon/tracesim/defense.hpp"

#include <algorithm>
#include <stdexcept>

#include "magrecon/rng.hpp"

namespace magrecon::tracesim {

namespace {

using arch::Step;
using arch::StepType;
using arch::TensorShape;

// A decoy must leave the chain untouched: it reads the junction shape and
// "produces" it again (its real output is discarded).
Step make_decoy(StepType t, const TensorShape& shape, Rng& rng) {
  if (shape.is_flat() || t == StepType::BatchNorm)
    return Step::elemwise(StepType::BatchNorm, shape);
  switch (t) {
    case StepType::Conv: {
      const int k = rng.next_bool(0.5) ? 1 : 3;
      if (k == 3 && shape.height < 2)
        return Step::conv({shape.height, shape.height, 1, 1, 0, 1,
                           shape.channels, shape.channels});
      return Step::conv({shape.height, shape.height, k, 1, (k - 1) / 2, 1,
                         shape.channels, shape.channels});
    }
    case StepType::MaxPool:
    case StepType::AvgPool: {
      if (shape.height < 2)
        return Step::pool(t, {shape.height, shape.height, 1, 1, 0,
                              shape.channels});
      return Step::pool(t, {shape.height, shape.height, 3, 1, 1,
                            shape.channels});
    }
    default:
      return Step::elemwise(StepType::BatchNorm, shape);
  }
}

}  // namespace

DeadBranchResult inject_dead_branches(const arch::NetworkSpec& spec,
                                      const DeadBranchPolicy& policy,
                                      std::uint64_t seed) {
  DeadBranchResult result;
  result.spec.name = spec.name;
  result.spec.input = spec.input;
  if (policy.period <= 0) {
    result.spec.steps = spec.steps;
    return result;
  }
  if (policy.decoy_types.empty())
    throw std::invalid_argument("dead-branch policy allows no decoy types");

  Rng rng(derive_seed(seed, "deadbranch"));
  TensorShape cur = spec.input;
  int since_last = 0;
  for (const Step& s : spec.steps) {
    result.spec.steps.push_back(s);
    cur = s.output_shape();
    if (++since_last == policy.period) {
      since_last = 0;
      const StepType t = rng.pick(policy.decoy_types);
      result.inserted.push_back(static_cast<int>(result.spec.steps.size()));
      result.spec.steps.push_back(make_decoy(t, cur, rng));
    }
  }
  return result;
}

Trace apply_jamming(const Trace& trace, double utilization,
                    double amp_per_util, std::uint64_t seed) {
  if (utilization < 0.0 || utilization >= 1.0)
    throw std::invalid_argument("jam utilization must be in [0, 1)");
  if (utilization == 0.0) return trace;

  Trace out;
  out.sample_rate = trace.sample_rate;
  out.samples = trace.samples;
  Rng rng(derive_seed(seed, "jamming"));
  const double mean_level = utilization * amp_per_util;
  const std::int64_t n = trace.samples.size();
  std::int64_t t = 0;
  while (t < n) {
    // burst boundaries are independent of step boundaries by construction
    const std::int64_t len = rng.next_int(200, 2000);
    const double level = mean_level * (0.7 + 0.6 * rng.next_double());
    const std::int64_t end = std::min(n, t + len);
    for (; t < end; ++t) out.samples[t] += static_cast<float>(level);
  }
  return out;
}

}  // namespace magrecon::tracesim

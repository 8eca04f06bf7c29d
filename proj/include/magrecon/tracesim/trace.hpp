#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magrecon/arch/step.hpp"

namespace magrecon::tracesim {

// Trace-level label domain: the 12 step classes plus a distinguished idle
// label for synchronization gaps (and the clapperboard spike).
inline constexpr int kIdleLabel = arch::kNumStepTypes;
inline constexpr int kNumLabels = arch::kNumStepTypes + 1;

inline const char* label_name(int label) {
  return label == kIdleLabel ? "idle"
                             : arch::to_string(static_cast<arch::StepType>(label));
}

inline std::optional<int> label_from_name(const std::string& name) {
  if (name == "idle") return kIdleLabel;
  if (const auto t = arch::step_type_from_string(name))
    return static_cast<int>(*t);
  return std::nullopt;
}

struct Trace {
  Eigen::VectorXf samples;
  double sample_rate = 47000.0;
};

// Half-open sample range [begin, end). step_index is -1 for idle spans.
struct Span {
  std::int64_t begin = 0;
  std::int64_t end = 0;
  int label = kIdleLabel;
  int step_index = -1;
};

// Spans are disjoint, sorted, and jointly cover [0, samples.size()).
struct Annotation {
  std::vector<Span> spans;
};

}  // namespace magrecon::tracesim

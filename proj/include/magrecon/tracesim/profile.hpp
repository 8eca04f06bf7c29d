#pragma once

#include <array>
#include <string>
#include <vector>

#include "magrecon/arch/step.hpp"

namespace magrecon::tracesim {

// Parameter set characterizing one simulated GPU. Signal units are abstract
// sensor units; the optional ADC pass in simulate.hpp maps them to discrete
// levels.
struct DeviceProfile {
  std::string name = "default";
  double throughput = 7.5e10;     // MACs per second at full utilization
  double core_capacity = 3.75e10; // MACs/s rate at which amplitude saturates
  double base_amp = 0.05;         // idle level
  double amp_per_util = 1.0;
  std::array<double, arch::kNumStepTypes> per_type_amp{};
  double sync_gap = 1e-3;         // seconds between steps
  double noise_sigma = 0.01;
  double sample_rate = 47000.0;
};

// Six named presets with distinct throughput/amplitude/noise parameters;
// cross-device experiments train and test across them.
DeviceProfile device_profile(const std::string& name);
std::vector<std::string> device_profile_names();

// Well-formedness: positive rates, sync gap at least one sample period,
// amplitude entry for all 12 step types.
void check_profile(const DeviceProfile& profile);

}  // namespace magrecon::tracesim

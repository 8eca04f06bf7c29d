#include "magrecon/tracesim/profile.hpp"

#include <sstream>
#include <stdexcept>

namespace magrecon::tracesim {

namespace {

using arch::StepType;

std::array<double, arch::kNumStepTypes> amp_table(
    double relu, double elu, double leaky, double sigmoid, double tanh_,
    double add, double bn, double maxp, double avgp, double fc, double lstm,
    double conv) {
  std::array<double, arch::kNumStepTypes> t{};
  t[static_cast<int>(StepType::ReLU)] = relu;
  t[static_cast<int>(StepType::ELU)] = elu;
  t[static_cast<int>(StepType::LeakyReLU)] = leaky;
  t[static_cast<int>(StepType::Sigmoid)] = sigmoid;
  t[static_cast<int>(StepType::Tanh)] = tanh_;
  t[static_cast<int>(StepType::Add)] = add;
  t[static_cast<int>(StepType::BatchNorm)] = bn;
  t[static_cast<int>(StepType::MaxPool)] = maxp;
  t[static_cast<int>(StepType::AvgPool)] = avgp;
  t[static_cast<int>(StepType::FullyConnected)] = fc;
  t[static_cast<int>(StepType::Lstm)] = lstm;
  t[static_cast<int>(StepType::Conv)] = conv;
  return t;
}

}  // namespace

std::vector<std::string> device_profile_names() {
  return {"default", "turbo", "legacy", "lowamp", "noisy", "dense"};
}

DeviceProfile device_profile(const std::string& name) {
  DeviceProfile p;
  p.name = name;
  if (name == "default") {
    p.per_type_amp = amp_table(0.10, 0.18, 0.26, 0.34, 0.42, 0.45, 0.53, 0.61,
                               0.69, 0.82, 0.90, 1.00);
  } else if (name == "turbo") {
    p.throughput = 1.3e11;
    p.core_capacity = 6.5e10;
    p.base_amp = 0.04;
    p.noise_sigma = 0.008;
    p.sync_gap = 8e-4;
    p.per_type_amp = amp_table(0.12, 0.20, 0.29, 0.37, 0.46, 0.42, 0.56, 0.64,
                               0.72, 0.78, 0.94, 1.05);
  } else if (name == "legacy") {
    p.throughput = 4.5e10;
    p.core_capacity = 2.25e10;
    p.base_amp = 0.07;
    p.noise_sigma = 0.015;
    p.sync_gap = 1.4e-3;
    p.per_type_amp = amp_table(0.09, 0.16, 0.23, 0.31, 0.38, 0.49, 0.57, 0.65,
                               0.73, 0.86, 0.94, 1.02);
  } else if (name == "lowamp") {
    p.throughput = 9e10;
    p.core_capacity = 4.5e10;
    p.amp_per_util = 0.8;
    p.base_amp = 0.06;
    p.noise_sigma = 0.009;
    p.per_type_amp = amp_table(0.11, 0.19, 0.27, 0.35, 0.43, 0.47, 0.55, 0.63,
                               0.71, 0.84, 0.92, 1.00);
  } else if (name == "noisy") {
    p.throughput = 6e10;
    p.core_capacity = 3e10;
    p.noise_sigma = 0.02;
    p.sync_gap = 1.2e-3;
    p.per_type_amp = amp_table(0.10, 0.18, 0.26, 0.34, 0.42, 0.45, 0.53, 0.61,
                               0.69, 0.82, 0.90, 1.00);
  } else if (name == "dense") {
    p.throughput = 1.05e11;
    p.core_capacity = 5.25e10;
    p.base_amp = 0.045;
    p.noise_sigma = 0.011;
    p.sync_gap = 9e-4;
    p.per_type_amp = amp_table(0.13, 0.21, 0.28, 0.36, 0.44, 0.48, 0.55, 0.62,
                               0.70, 0.80, 0.93, 1.03);
  } else {
    std::ostringstream os;
    os << "unknown device profile '" << name << "'; valid names:";
    for (const auto& n : device_profile_names()) os << " " << n;
    throw std::invalid_argument(os.str());
  }
  return p;
}

void check_profile(const DeviceProfile& p) {
  if (p.sample_rate <= 0) throw std::invalid_argument("sample_rate must be > 0");
  if (p.throughput <= 0) throw std::invalid_argument("throughput must be > 0");
  if (p.core_capacity <= 0)
    throw std::invalid_argument("core_capacity must be > 0");
  if (p.sync_gap < 1.0 / p.sample_rate)
    throw std::invalid_argument("sync_gap must be at least one sample period");
  for (double a : p.per_type_amp)
    if (a <= 0) throw std::invalid_argument("per_type_amp must cover all types");
}

}  // namespace magrecon::tracesim

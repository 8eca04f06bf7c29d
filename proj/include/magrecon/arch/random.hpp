#pragma once

#include <cstdint>
#include <stdexcept>

#include "magrecon/arch/step.hpp"

namespace magrecon::arch {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GeneratorConfig {
  int min_depth = 30;  // total step count, inclusive bounds
  int max_depth = 50;
  std::vector<int> resolutions = {224, 96, 64, 48, 32};
  // Allowed step types. Linear types select the network family (CNN, MLP,
  // recurrent); activations, pooling and normalization are interspersed
  // when present.
  std::vector<StepType> step_mix = {
      StepType::Conv,    StepType::FullyConnected,
      StepType::Lstm,    StepType::Add,
      StepType::BatchNorm, StepType::MaxPool,
      StepType::AvgPool, StepType::ReLU,
      StepType::ELU,     StepType::LeakyReLU,
      StepType::Sigmoid, StepType::Tanh};
  int max_channels = 256;
  double lstm_net_fraction = 0.10;  // share of recurrent nets when mixed
  double mlp_net_fraction = 0.10;
};

// Deterministic: the same seed and config always produce the same spec.
// The result passes validate_network with the requested step count.
NetworkSpec random_network(std::uint64_t seed, const GeneratorConfig& cfg);

}  // namespace magrecon::arch

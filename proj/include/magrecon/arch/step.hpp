#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace magrecon::arch {

// The 12 step kinds the side channel resolves. A distinguished Idle label
// exists only at the trace level (see tracesim/seqlabel); it is not a step.
enum class StepType : std::uint8_t {
  Conv,
  FullyConnected,
  Lstm,
  Add,
  BatchNorm,
  MaxPool,
  AvgPool,
  ReLU,
  ELU,
  LeakyReLU,
  Sigmoid,
  Tanh,
};

inline constexpr int kNumStepTypes = 12;

const char* to_string(StepType t);
std::optional<StepType> step_type_from_string(const std::string& s);

bool is_activation(StepType t);
bool is_pooling(StepType t);
// Linear steps carry trainable weights and start a layer.
bool is_linear(StepType t);
// Size-preserving steps pass their input dimensions through unchanged.
bool is_size_preserving(StepType t);

// Feature dimensions flowing between steps. Spatial tensors are square
// (c, s, s); flat tensors have h = w = 0 and c = feature count.
struct TensorShape {
  int channels = 0;
  int height = 0;
  int width = 0;

  static TensorShape spatial(int c, int s) { return {c, s, s}; }
  static TensorShape flat(int n) { return {n, 0, 0}; }
  bool is_flat() const { return height == 0 && width == 0; }
  std::int64_t elems() const {
    return is_flat() ? channels
                     : static_cast<std::int64_t>(channels) * height * width;
  }
  bool operator==(const TensorShape&) const = default;
};

struct ConvParams {
  int s_in = 0;      // spatial input size
  int s_out = 0;     // spatial output size
  int kernel = 1;    // k, odd
  int stride = 1;    // alpha
  int padding = 0;   // beta
  int dilation = 1;  // gamma
  int c_in = 0;
  int c_out = 0;
  bool operator==(const ConvParams&) const = default;
};

struct FcParams {
  int in_features = 0;
  int out_features = 0;
  bool operator==(const FcParams&) const = default;
};

struct LstmParams {
  int in_features = 0;  // per-timestep input width
  int hidden = 0;
  int seq_len = 1;
  bool operator==(const LstmParams&) const = default;
};

// MaxPool/AvgPool; output size follows the conv relation with dilation 1.
struct PoolParams {
  int s_in = 0;
  int s_out = 0;
  int kernel = 2;
  int stride = 2;
  int padding = 0;
  int channels = 0;
  bool operator==(const PoolParams&) const = default;
};

// Add / BatchNorm / activations: operate elementwise on a fixed shape.
struct ElemwiseParams {
  TensorShape shape;
  bool operator==(const ElemwiseParams&) const = default;
};

using StepParams =
    std::variant<ConvParams, FcParams, LstmParams, PoolParams, ElemwiseParams>;

struct Step {
  StepType type = StepType::Conv;
  StepParams params;

  TensorShape input_shape() const;
  TensorShape output_shape() const;
  bool operator==(const Step&) const = default;

  static Step conv(const ConvParams& p) { return {StepType::Conv, p}; }
  static Step fully_connected(int in, int out) {
    return {StepType::FullyConnected, FcParams{in, out}};
  }
  static Step lstm(const LstmParams& p) { return {StepType::Lstm, p}; }
  static Step pool(StepType t, const PoolParams& p) { return {t, p}; }
  static Step elemwise(StepType t, TensorShape shape) {
    return {t, ElemwiseParams{shape}};
  }
};

// Ordered executed step sequence. Branching dataflow (residual shortcuts)
// is flattened to this order with explicit Add steps; edges are not modeled.
struct NetworkSpec {
  std::string name;
  TensorShape input;
  std::vector<Step> steps;
  bool operator==(const NetworkSpec&) const = default;
};

struct Violation {
  int step_index = -1;  // -1: whole-network issue
  std::string constraint;
  std::string message;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;
};

}  // namespace magrecon::arch

#include "magrecon/arch/step.hpp"

#include "magrecon/arch/geometry.hpp"

namespace magrecon::arch {

const char* to_string(StepType t) {
  switch (t) {
    case StepType::Conv: return "conv";
    case StepType::FullyConnected: return "fc";
    case StepType::Lstm: return "lstm";
    case StepType::Add: return "add";
    case StepType::BatchNorm: return "batchnorm";
    case StepType::MaxPool: return "maxpool";
    case StepType::AvgPool: return "avgpool";
    case StepType::ReLU: return "relu";
    case StepType::ELU: return "elu";
    case StepType::LeakyReLU: return "leakyrelu";
    case StepType::Sigmoid: return "sigmoid";
    case StepType::Tanh: return "tanh";
  }
  return "?";
}

std::optional<StepType> step_type_from_string(const std::string& s) {
  for (int i = 0; i < kNumStepTypes; ++i) {
    const auto t = static_cast<StepType>(i);
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

bool is_activation(StepType t) {
  switch (t) {
    case StepType::ReLU:
    case StepType::ELU:
    case StepType::LeakyReLU:
    case StepType::Sigmoid:
    case StepType::Tanh:
      return true;
    default:
      return false;
  }
}

bool is_pooling(StepType t) {
  return t == StepType::MaxPool || t == StepType::AvgPool;
}

bool is_linear(StepType t) {
  return t == StepType::Conv || t == StepType::FullyConnected ||
         t == StepType::Lstm;
}

bool is_size_preserving(StepType t) {
  return is_activation(t) || t == StepType::Add || t == StepType::BatchNorm;
}

TensorShape Step::input_shape() const {
  if (const auto* c = std::get_if<ConvParams>(&params))
    return TensorShape::spatial(c->c_in, c->s_in);
  if (const auto* f = std::get_if<FcParams>(&params))
    return TensorShape::flat(f->in_features);
  if (const auto* l = std::get_if<LstmParams>(&params))
    return TensorShape::flat(l->seq_len * l->in_features);
  if (const auto* p = std::get_if<PoolParams>(&params))
    return TensorShape::spatial(p->channels, p->s_in);
  return std::get<ElemwiseParams>(params).shape;
}

TensorShape Step::output_shape() const {
  if (const auto* c = std::get_if<ConvParams>(&params))
    return TensorShape::spatial(c->c_out, c->s_out);
  if (const auto* f = std::get_if<FcParams>(&params))
    return TensorShape::flat(f->out_features);
  if (const auto* l = std::get_if<LstmParams>(&params))
    return TensorShape::flat(l->seq_len * l->hidden);
  if (const auto* p = std::get_if<PoolParams>(&params))
    return TensorShape::spatial(p->channels, p->s_out);
  return std::get<ElemwiseParams>(params).shape;
}

}  // namespace magrecon::arch

#include "magrecon/arch/builtin.hpp"

#include <sstream>
#include <stdexcept>

#include "magrecon/arch/geometry.hpp"

namespace magrecon::arch {

namespace {

// Incremental step-sequence builder; tracks the shape flowing between steps.
class Builder {
 public:
  explicit Builder(TensorShape input) : cur_(input) {}

  Builder& conv(int c_out, int k, int stride = 1, int pad = 0) {
    const int s_out = conv_out_size(cur_.height, k, stride, pad, 1);
    steps_.push_back(Step::conv(
        {cur_.height, s_out, k, stride, pad, 1, cur_.channels, c_out}));
    cur_ = TensorShape::spatial(c_out, s_out);
    return *this;
  }
  Builder& bn() {
    steps_.push_back(Step::elemwise(StepType::BatchNorm, cur_));
    return *this;
  }
  Builder& act(StepType t = StepType::ReLU) {
    steps_.push_back(Step::elemwise(t, cur_));
    return *this;
  }
  Builder& add() {
    steps_.push_back(Step::elemwise(StepType::Add, cur_));
    return *this;
  }
  Builder& pool(StepType t, int k, int stride, int pad = 0) {
    const int s_out = pool_out_size(cur_.height, k, stride, pad);
    steps_.push_back(
        Step::pool(t, {cur_.height, s_out, k, stride, pad, cur_.channels}));
    cur_ = TensorShape::spatial(cur_.channels, s_out);
    return *this;
  }
  Builder& fc(int out) {
    steps_.push_back(
        Step::fully_connected(static_cast<int>(cur_.elems()), out));
    cur_ = TensorShape::flat(out);
    return *this;
  }

  std::vector<Step> take() { return std::move(steps_); }
  const TensorShape& shape() const { return cur_; }

 private:
  TensorShape cur_;
  std::vector<Step> steps_;
};

NetworkSpec alexnet() {
  Builder b(TensorShape::spatial(3, 224));
  b.conv(64, 11, 4, 2).act().pool(StepType::MaxPool, 3, 2);
  b.conv(192, 5, 1, 2).act().pool(StepType::MaxPool, 3, 2);
  b.conv(384, 3, 1, 1).act();
  b.conv(256, 3, 1, 1).act();
  b.conv(256, 3, 1, 1).act().pool(StepType::MaxPool, 3, 2);
  b.fc(4096).act().fc(4096).act().fc(1000);
  return {"alexnet", TensorShape::spatial(3, 224), b.take()};
}

NetworkSpec vgg(const std::string& name, const std::vector<int>& cfg) {
  Builder b(TensorShape::spatial(3, 224));
  for (int c : cfg) {
    if (c == -1)
      b.pool(StepType::MaxPool, 2, 2);
    else
      b.conv(c, 3, 1, 1).act();
  }
  b.fc(4096).act().fc(4096).act().fc(1000);
  return {name, TensorShape::spatial(3, 224), b.take()};
}

// Identity-shortcut residual block: two 3x3 convs then an elementwise Add.
// When the block changes size or width, the 1x1 projection and its norm are
// emitted in executed order before the Add, applied to the main-path shape.
void basic_block(Builder& b, int c_out, int stride, bool project) {
  b.conv(c_out, 3, stride, 1).bn().act();
  b.conv(c_out, 3, 1, 1).bn();
  if (project) b.conv(c_out, 1, 1, 0).bn();
  b.add().act();
}

void bottleneck_block(Builder& b, int c_mid, int stride, bool project) {
  b.conv(c_mid, 1, 1, 0).bn().act();
  b.conv(c_mid, 3, stride, 1).bn().act();
  b.conv(c_mid * 4, 1, 1, 0).bn();
  if (project) b.conv(c_mid * 4, 1, 1, 0).bn();
  b.add().act();
}

NetworkSpec resnet(const std::string& name, const std::array<int, 4>& blocks,
                   bool bottleneck) {
  Builder b(TensorShape::spatial(3, 224));
  b.conv(64, 7, 2, 3).bn().act().pool(StepType::MaxPool, 3, 2, 1);
  const int widths[4] = {64, 128, 256, 512};
  for (int stage = 0; stage < 4; ++stage) {
    for (int i = 0; i < blocks[stage]; ++i) {
      const int stride = (stage > 0 && i == 0) ? 2 : 1;
      const bool project =
          i == 0 && (bottleneck || stage > 0);  // width or size change
      if (bottleneck)
        bottleneck_block(b, widths[stage], stride, project);
      else
        basic_block(b, widths[stage], stride, project);
    }
  }
  b.pool(StepType::AvgPool, b.shape().height, 1, 0);
  b.fc(1000);
  return {name, TensorShape::spatial(3, 224), b.take()};
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"alexnet",  "vgg11",    "vgg16",    "resnet18",
          "resnet34", "resnet50", "resnet101"};
}

NetworkSpec builtin_network(const std::string& name) {
  const int M = -1;
  if (name == "alexnet") return alexnet();
  if (name == "vgg11")
    return vgg(name, {64, M, 128, M, 256, 256, M, 512, 512, M, 512, 512, M});
  if (name == "vgg16")
    return vgg(name, {64, 64, M, 128, 128, M, 256, 256, 256, M, 512, 512, 512,
                      M, 512, 512, 512, M});
  if (name == "resnet18") return resnet(name, {2, 2, 2, 2}, false);
  if (name == "resnet34") return resnet(name, {3, 4, 6, 3}, false);
  if (name == "resnet50") return resnet(name, {3, 4, 6, 3}, true);
  if (name == "resnet101") return resnet(name, {3, 4, 23, 3}, true);

  std::ostringstream os;
  os << "unknown builtin network '" << name << "'; valid names:";
  for (const auto& n : builtin_names()) os << " " << n;
  throw std::invalid_argument(os.str());
}

}  // namespace magrecon::arch

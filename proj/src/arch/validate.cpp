#include "magrecon/arch/validate.hpp"

#include <sstream>

#include "magrecon/arch/geometry.hpp"

namespace magrecon::arch {

int conv_out_size(int s_in, int kernel, int stride, int padding, int dilation) {
  auto fail = [&](const std::string& ineq) {
    std::ostringstream os;
    os << "invalid geometry (" << ineq << "): s_in=" << s_in << " k=" << kernel
       << " stride=" << stride << " padding=" << padding
       << " dilation=" << dilation;
    throw GeometryError(os.str());
  };
  if (s_in < 1) fail("s_in >= 1");
  if (kernel < 1) fail("k >= 1");
  if (stride < 1) fail("stride >= 1");
  if (dilation < 1) fail("dilation >= 1");
  if (padding < 0) fail("padding >= 0");
  const long long extent = static_cast<long long>(dilation) * (kernel - 1) + 1;
  if (extent > static_cast<long long>(s_in) + 2ll * padding)
    fail("dilation*(k-1)+1 <= s_in + 2*padding");
  const long long num =
      static_cast<long long>(s_in) + 2ll * padding - dilation * (kernel - 1) - 1;
  return static_cast<int>(num / stride + 1);
}

namespace {

void check_step(const Step& step, int idx, std::vector<Violation>& out) {
  auto add = [&](const char* id, const std::string& msg) {
    out.push_back({idx, id, msg});
  };
  switch (step.type) {
    case StepType::Conv: {
      const auto& c = std::get<ConvParams>(step.params);
      if (c.s_in < 1 || c.c_in < 1 || c.c_out < 1 || c.kernel < 1 ||
          c.stride < 1 || c.dilation < 1 || c.padding < 0) {
        add("geometry", "non-positive conv parameter");
        break;
      }
      if (c.kernel % 2 == 0) add("odd-kernel", "conv kernel size must be odd");
      if (c.s_out > c.s_in)
        add("size-monotone", "conv output size exceeds input size");
      try {
        const int expect =
            conv_out_size(c.s_in, c.kernel, c.stride, c.padding, c.dilation);
        if (expect != c.s_out) {
          std::ostringstream os;
          os << "declared s_out=" << c.s_out << " but relation gives "
             << expect;
          add("out-size", os.str());
        }
      } catch (const GeometryError& e) {
        add("geometry", e.what());
      }
      break;
    }
    case StepType::MaxPool:
    case StepType::AvgPool: {
      const auto& p = std::get<PoolParams>(step.params);
      if (p.s_in < 1 || p.channels < 1 || p.kernel < 1 || p.stride < 1 ||
          p.padding < 0) {
        add("geometry", "non-positive pool parameter");
        break;
      }
      try {
        const int expect = pool_out_size(p.s_in, p.kernel, p.stride, p.padding);
        if (expect != p.s_out) {
          std::ostringstream os;
          os << "declared s_out=" << p.s_out << " but relation gives "
             << expect;
          add("out-size", os.str());
        }
      } catch (const GeometryError& e) {
        add("geometry", e.what());
      }
      break;
    }
    case StepType::FullyConnected: {
      const auto& f = std::get<FcParams>(step.params);
      if (f.in_features < 1 || f.out_features < 1)
        add("geometry", "non-positive fc feature count");
      break;
    }
    case StepType::Lstm: {
      const auto& l = std::get<LstmParams>(step.params);
      if (l.in_features < 1 || l.hidden < 1 || l.seq_len < 1)
        add("geometry", "non-positive lstm dimension");
      break;
    }
    default: {
      const auto& e = std::get<ElemwiseParams>(step.params);
      if (e.shape.elems() < 1) add("geometry", "empty elementwise shape");
      break;
    }
  }
}

std::string shape_str(const TensorShape& s) {
  std::ostringstream os;
  if (s.is_flat())
    os << "flat(" << s.channels << ")";
  else
    os << s.channels << "x" << s.height << "x" << s.width;
  return os.str();
}

}  // namespace

ValidationReport validate_network(const NetworkSpec& spec) {
  ValidationReport report;
  auto add = [&](int idx, const char* id, const std::string& msg) {
    report.violations.push_back({idx, id, msg});
  };

  if (spec.steps.empty()) {
    add(-1, "empty", "network has no steps");
    report.valid = false;
    return report;
  }
  if (spec.input.elems() < 1) add(-1, "input-pin", "empty input shape");

  for (int i = 0; i < static_cast<int>(spec.steps.size()); ++i)
    check_step(spec.steps[i], i, report.violations);

  // Chain check: a step consumes the previous step's output. Flat tensors
  // feed spatial-only steps never; linear steps flatten implicitly.
  TensorShape prev = spec.input;
  for (int i = 0; i < static_cast<int>(spec.steps.size()); ++i) {
    const Step& step = spec.steps[i];
    const TensorShape in = step.input_shape();
    bool ok = true;
    switch (step.type) {
      case StepType::Conv:
      case StepType::MaxPool:
      case StepType::AvgPool:
        ok = !prev.is_flat() && in == prev;
        break;
      case StepType::FullyConnected:
      case StepType::Lstm:
        ok = in.elems() == prev.elems();  // implicit flatten
        break;
      default:
        ok = in == prev;
        break;
    }
    if (!ok) {
      std::ostringstream os;
      os << "step input " << shape_str(in) << " does not match previous output "
         << shape_str(prev);
      add(i, i == 0 ? "input-pin" : "inter-consistency", os.str());
    }
    prev = step.output_shape();
  }

  report.valid = report.violations.empty();
  return report;
}

}  // namespace magrecon::arch

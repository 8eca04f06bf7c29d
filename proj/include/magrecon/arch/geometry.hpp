#pragma once

#include <stdexcept>
#include <string>

namespace magrecon::arch {

struct GeometryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Spatial output size of a convolution-style window:
//   floor((s_in + 2*padding - dilation*(kernel-1) - 1) / stride + 1).
// Throws GeometryError when the effective kernel extent does not fit the
// padded input, naming the violated inequality.
int conv_out_size(int s_in, int kernel, int stride, int padding, int dilation);

// Same relation restricted to dilation 1, used by pooling steps.
inline int pool_out_size(int s_in, int kernel, int stride, int padding) {
  return conv_out_size(s_in, kernel, stride, padding, 1);
}

}  // namespace magrecon::arch

#pragma once

#include "magrecon/arch/step.hpp"

namespace magrecon::arch {

// Multiply-accumulate count of one step at the given batch size.
//   Conv: batch * k^2 * c_in * c_out * s_out^2
//   FullyConnected: batch * n_in * n_out
//   Lstm: batch * seq_len * 8 * hidden^2
//   elementwise and pooling: batch * output element count
double step_cost(const Step& step, int batch);

double network_cost(const NetworkSpec& spec, int batch);

}  // namespace magrecon::arch

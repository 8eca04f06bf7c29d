#include "magrecon/arch/cost.hpp"

namespace magrecon::arch {

double step_cost(const Step& step, int batch) {
  const double b = static_cast<double>(batch);
  if (const auto* c = std::get_if<ConvParams>(&step.params)) {
    const double k2 = static_cast<double>(c->kernel) * c->kernel;
    const double area = static_cast<double>(c->s_out) * c->s_out;
    return b * k2 * c->c_in * c->c_out * area;
  }
  if (const auto* f = std::get_if<FcParams>(&step.params))
    return b * f->in_features * f->out_features;
  if (const auto* l = std::get_if<LstmParams>(&step.params))
    return b * l->seq_len * 8.0 * static_cast<double>(l->hidden) * l->hidden;
  return b * static_cast<double>(step.output_shape().elems());
}

double network_cost(const NetworkSpec& spec, int batch) {
  double total = 0.0;
  for (const Step& s : spec.steps) total += step_cost(s, batch);
  return total;
}

}  // namespace magrecon::arch

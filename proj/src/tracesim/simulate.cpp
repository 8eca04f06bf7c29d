#include "magrecon/tracesim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magrecon/arch/cost.hpp"
#include "magrecon/arch/validate.hpp"
#include "magrecon/rng.hpp"

namespace magrecon::tracesim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kClapSeconds = 5e-3;
constexpr double kClapFactor = 3.2;  // of the largest step amplitude
constexpr double kRippleDepth = 0.05;
constexpr int kRippleCycles = 12;

std::int64_t gap_samples(const DeviceProfile& p) {
  return static_cast<std::int64_t>(std::ceil(p.sync_gap * p.sample_rate));
}

// Deterministic within-step texture for sample i of a step lasting n
// samples. Returned value multiplies the utilization part of the signal.
// Convolutions and pools carry structure tied to their hyperparameters:
// a setup phase proportional to kernel size, a mid-step notch for stride 2
// and a trailing dip proportional to padding, mimicking how distinct GPU
// kernel phases show up in a real power envelope.
double texture(const arch::Step& step, std::int64_t i, std::int64_t n) {
  const double pos = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  double m = 1.0 + kRippleDepth * std::sin(kTwoPi * kRippleCycles * pos);
  int kernel = 0, stride = 1, padding = 0;
  if (const auto* c = std::get_if<arch::ConvParams>(&step.params)) {
    kernel = c->kernel;
    stride = c->stride;
    padding = c->padding;
  } else if (const auto* p = std::get_if<arch::PoolParams>(&step.params)) {
    kernel = p->kernel;
    stride = p->stride;
    padding = p->padding;
  }
  if (kernel > 0) {
    if (pos < 0.02 * kernel) m *= 1.08;
    if (stride == 2 && pos >= 0.48 && pos < 0.52) m *= 0.92;
    if (padding > 0 && pos >= 1.0 - 0.015 * padding) m *= 0.94;
  }
  return m;
}

// Pool segments are often too short for phase markers to resolve, so their
// kernel and stride additionally shift the plateau level.
double level_multiplier(const arch::Step& step) {
  if (const auto* p = std::get_if<arch::PoolParams>(&step.params))
    return 1.0 + 0.06 * (p->kernel - 2) + 0.03 * (p->stride - 1);
  return 1.0;
}

}  // namespace

std::int64_t step_duration_samples(const arch::Step& step, int batch,
                                   const DeviceProfile& profile) {
  const double cost = arch::step_cost(step, batch);
  const double raw = cost / profile.throughput * profile.sample_rate;
  return std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(raw)));
}

double step_utilization(const arch::Step& step, int batch,
                        const DeviceProfile& profile) {
  const double cost = arch::step_cost(step, batch);
  const double dur_s =
      static_cast<double>(step_duration_samples(step, batch, profile)) /
      profile.sample_rate;
  return std::min(1.0, cost / profile.core_capacity / dur_s);
}

std::pair<Trace, Annotation> simulate(const arch::NetworkSpec& spec,
                                      const DeviceProfile& profile,
                                      const SimConfig& cfg) {
  check_profile(profile);
  if (cfg.batch < 1) throw std::invalid_argument("batch must be >= 1");
  if (!spec.steps.empty()) {
    const auto report = arch::validate_network(spec);
    if (!report.valid) {
      std::ostringstream os;
      os << "refusing to simulate an inconsistent spec:";
      for (const auto& v : report.violations)
        os << " [step " << v.step_index << " " << v.constraint << "]";
      throw std::invalid_argument(os.str());
    }
  }

  const std::int64_t gap = gap_samples(profile);
  const std::int64_t clap =
      cfg.clapperboard
          ? static_cast<std::int64_t>(std::ceil(kClapSeconds * profile.sample_rate))
          : 0;

  const int n_steps = static_cast<int>(spec.steps.size());
  std::vector<std::int64_t> durations(n_steps);
  std::vector<double> amps(n_steps);
  double max_step_amp = profile.base_amp;
  for (int i = 0; i < n_steps; ++i) {
    durations[i] = step_duration_samples(spec.steps[i], cfg.batch, profile);
    const double util = step_utilization(spec.steps[i], cfg.batch, profile);
    const int type_idx = static_cast<int>(spec.steps[i].type);
    amps[i] = profile.amp_per_util * util * profile.per_type_amp[type_idx] *
              level_multiplier(spec.steps[i]);
    max_step_amp = std::max(max_step_amp, profile.base_amp + amps[i]);
  }
  double clap_amp = kClapFactor * max_step_amp;
  if (n_steps == 0)
    clap_amp = kClapFactor * (profile.base_amp + profile.amp_per_util);

  std::int64_t total = clap + (n_steps + 1) * gap;
  for (const auto d : durations) total += d;

  Trace trace;
  trace.sample_rate = profile.sample_rate;
  trace.samples.resize(total);
  Annotation ann;

  Rng noise(derive_seed(cfg.seed, "sim/noise"));
  std::int64_t t = 0;
  auto fill_idle = [&](std::int64_t n) {
    const std::int64_t b = t;
    for (std::int64_t i = 0; i < n; ++i, ++t)
      trace.samples[t] = static_cast<float>(
          profile.base_amp + profile.noise_sigma * noise.next_normal());
    ann.spans.push_back({b, t, kIdleLabel, -1});
  };

  if (clap > 0) {
    const std::int64_t b = t;
    for (std::int64_t i = 0; i < clap; ++i, ++t)
      trace.samples[t] = static_cast<float>(
          clap_amp + profile.noise_sigma * noise.next_normal());
    ann.spans.push_back({b, t, kIdleLabel, -1});
  }
  fill_idle(gap);
  for (int i = 0; i < n_steps; ++i) {
    const std::int64_t b = t;
    for (std::int64_t j = 0; j < durations[i]; ++j, ++t)
      trace.samples[t] = static_cast<float>(
          profile.base_amp + amps[i] * texture(spec.steps[i], j, durations[i]) +
          profile.noise_sigma * noise.next_normal());
    ann.spans.push_back({b, t, static_cast<int>(spec.steps[i].type), i});
    fill_idle(gap);
  }

  return {std::move(trace), std::move(ann)};
}

Trace quantize_trace(const Trace& trace, double lo, double hi, int levels) {
  if (levels < 2 || hi <= lo)
    throw std::invalid_argument("quantize_trace: bad range or level count");
  Trace out;
  out.sample_rate = trace.sample_rate;
  out.samples.resize(trace.samples.size());
  const double step = (hi - lo) / (levels - 1);
  for (Eigen::Index i = 0; i < trace.samples.size(); ++i) {
    const double x = std::clamp(static_cast<double>(trace.samples[i]), lo, hi);
    out.samples[i] = static_cast<float>(lo + std::round((x - lo) / step) * step);
  }
  return out;
}

}  // namespace magrecon::tracesim

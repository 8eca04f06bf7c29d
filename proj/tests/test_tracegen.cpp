#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "magrecon/arch/builtin.hpp"
#include "magrecon/arch/cost.hpp"
#include "magrecon/arch/random.hpp"
#include "magrecon/arch/validate.hpp"
#include "magrecon/tracesim/defense.hpp"
#include "magrecon/tracesim/simulate.hpp"
#include "magrecon/tracesim/trace_io.hpp"

using namespace magrecon;
using namespace magrecon::tracesim;

namespace {

arch::NetworkSpec small_cnn(std::uint64_t seed = 3, int depth = 12) {
  arch::GeneratorConfig cfg;
  cfg.min_depth = depth;
  cfg.max_depth = depth;
  cfg.resolutions = {64};
  return arch::random_network(seed, cfg);
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "magrecon_test_io";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("empty spec with clapperboard gives spike then one idle span") {
  arch::NetworkSpec spec;
  spec.input = arch::TensorShape::spatial(3, 32);
  const auto profile = device_profile("default");
  SimConfig cfg;
  cfg.clapperboard = true;
  const auto [trace, ann] = simulate(spec, profile, cfg);
  REQUIRE(ann.spans.size() == 2);
  CHECK(ann.spans[0].label == kIdleLabel);
  CHECK(ann.spans[1].label == kIdleLabel);
  // spike region sits well above idle
  double spike_mean = 0.0;
  for (std::int64_t i = ann.spans[0].begin; i < ann.spans[0].end; ++i)
    spike_mean += trace.samples[i];
  spike_mean /= static_cast<double>(ann.spans[0].end - ann.spans[0].begin);
  CHECK(spike_mean > 3.0 * (profile.base_amp + profile.amp_per_util));
  CHECK(ann.spans[1].end == trace.samples.size());
}

TEST_CASE("annotation spans partition every simulated trace") {
  const auto profile = device_profile("default");
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto spec = small_cnn(seed);
    SimConfig cfg;
    cfg.seed = seed;
    const auto [trace, ann] = simulate(spec, profile, cfg);
    std::int64_t cursor = 0;
    int step_cursor = 0;
    for (const Span& s : ann.spans) {
      CHECK(s.begin == cursor);
      CHECK(s.end > s.begin);
      cursor = s.end;
      if (s.label != kIdleLabel) {
        CHECK(s.step_index == step_cursor);
        ++step_cursor;
      }
    }
    CHECK(cursor == trace.samples.size());
    CHECK(step_cursor == static_cast<int>(spec.steps.size()));
  }
}

TEST_CASE("trace length is exactly steps + gaps + clapperboard") {
  const auto profile = device_profile("default");
  const auto spec = small_cnn(11);
  SimConfig cfg;
  const auto [trace, ann] = simulate(spec, profile, cfg);
  const std::int64_t gap =
      static_cast<std::int64_t>(std::ceil(profile.sync_gap * profile.sample_rate));
  const std::int64_t clap =
      static_cast<std::int64_t>(std::ceil(5e-3 * profile.sample_rate));
  std::int64_t expect = clap + (static_cast<std::int64_t>(spec.steps.size()) + 1) * gap;
  for (const auto& step : spec.steps)
    expect += step_duration_samples(step, cfg.batch, profile);
  CHECK(trace.samples.size() == expect);
}

TEST_CASE("same seed reproduces the trace bitwise") {
  const auto profile = device_profile("default");
  const auto spec = small_cnn(5);
  SimConfig cfg;
  cfg.seed = 99;
  const auto [a, ann_a] = simulate(spec, profile, cfg);
  const auto [b, ann_b] = simulate(spec, profile, cfg);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(std::memcmp(a.samples.data(), b.samples.data(),
                    sizeof(float) * a.samples.size()) == 0);
}

TEST_CASE("invalid spec is refused") {
  arch::NetworkSpec spec;
  spec.input = arch::TensorShape::spatial(3, 32);
  spec.steps.push_back(arch::Step::conv({16, 16, 3, 1, 1, 1, 3, 8}));  // wrong s_in
  CHECK_THROWS_AS(simulate(spec, device_profile("default"), SimConfig{}),
                  std::invalid_argument);
}

TEST_CASE("amplitude grows with batch and saturates") {
  auto profile = device_profile("default");
  profile.noise_sigma = 0.0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto spec = small_cnn(seed, 10);
    for (const auto& step : spec.steps) {
      double prev = -1.0;
      for (int batch : {1, 2, 8, 32, 64, 128, 512}) {
        const double util = step_utilization(step, batch, profile);
        CHECK(util >= prev - 1e-12);
        prev = util;
      }
      // once per-duration cost reaches the capacity threshold, no growth
      const double sat_cost = profile.core_capacity * 2.0 / profile.sample_rate;
      if (arch::step_cost(step, 512) >= sat_cost)
        CHECK(step_utilization(step, 100000, profile) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("per-step amplitude under batch 64 dominates batch 1") {
  auto profile = device_profile("default");
  profile.noise_sigma = 0.0;
  const auto spec = small_cnn(7);
  SimConfig big, small;
  big.batch = 64;
  small.batch = 1;
  const auto [tb, ab] = simulate(spec, profile, big);
  const auto [ts, as] = simulate(spec, profile, small);
  std::size_t ib = 0, is = 0;
  for (std::size_t k = 0; k < spec.steps.size(); ++k) {
    while (ab.spans[ib].label == kIdleLabel) ++ib;
    while (as.spans[is].label == kIdleLabel) ++is;
    auto mean = [](const Trace& t, const Span& s) {
      double m = 0.0;
      for (std::int64_t i = s.begin; i < s.end; ++i) m += t.samples[i];
      return m / static_cast<double>(s.end - s.begin);
    };
    CHECK(mean(tb, ab.spans[ib]) >= mean(ts, as.spans[is]) - 1e-6);
    ++ib;
    ++is;
  }
}

TEST_CASE("saturated spans clear the noise floor") {
  const auto profile = device_profile("default");
  const auto spec = arch::builtin_network("alexnet");
  SimConfig cfg;
  cfg.batch = 64;
  const auto [trace, ann] = simulate(spec, profile, cfg);
  for (const Span& s : ann.spans) {
    if (s.label == kIdleLabel) continue;
    const auto& step = spec.steps[s.step_index];
    if (step_utilization(step, cfg.batch, profile) < 1.0) continue;
    double mean = 0.0;
    for (std::int64_t i = s.begin; i < s.end; ++i) mean += trace.samples[i];
    mean /= static_cast<double>(s.end - s.begin);
    CHECK(mean > profile.base_amp + 2.0 * profile.noise_sigma);
  }
}

TEST_CASE("jamming: zero utilization is identity") {
  const auto spec = small_cnn(2);
  const auto profile = device_profile("default");
  const auto [trace, ann] = simulate(spec, profile, SimConfig{});
  const Trace jammed = apply_jamming(trace, 0.0, profile.amp_per_util, 1);
  CHECK(std::memcmp(trace.samples.data(), jammed.samples.data(),
                    sizeof(float) * trace.samples.size()) == 0);
}

TEST_CASE("jamming raises the mean by utilization * amp_per_util") {
  const auto profile = device_profile("default");
  Trace trace;
  trace.sample_rate = profile.sample_rate;
  trace.samples = Eigen::VectorXf::Constant(120000, 0.3f);
  const Trace jammed = apply_jamming(trace, 0.5, profile.amp_per_util, 7);
  const double delta =
      (jammed.samples.cast<double>().mean() - trace.samples.cast<double>().mean());
  CHECK(delta == doctest::Approx(0.5 * profile.amp_per_util).epsilon(0.05));
}

TEST_CASE("dead branches: period 0 leaves the spec unchanged") {
  const auto spec = small_cnn(4);
  const auto result = inject_dead_branches(spec, DeadBranchPolicy{}, 0);
  CHECK(result.spec == spec);
  CHECK(result.inserted.empty());
}

TEST_CASE("dead branches: 30 steps with period 5 become 36") {
  arch::GeneratorConfig gcfg;
  gcfg.min_depth = 30;
  gcfg.max_depth = 30;
  const auto spec = arch::random_network(21, gcfg);
  DeadBranchPolicy policy;
  policy.period = 5;
  const auto result = inject_dead_branches(spec, policy, 3);
  CHECK(result.spec.steps.size() == 36);
  CHECK(result.inserted.size() == 6);
  CHECK(arch::validate_network(result.spec).valid);
}

TEST_CASE("dead branches keep every augmented spec valid") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto spec = small_cnn(seed, 20);
    DeadBranchPolicy policy;
    policy.period = 3;
    const auto result = inject_dead_branches(spec, policy, seed);
    CHECK(arch::validate_network(result.spec).valid);
  }
}

TEST_CASE("trace files round-trip") {
  const auto dir = temp_dir();
  const auto profile = device_profile("default");
  const auto spec = small_cnn(6);
  SimConfig cfg;
  cfg.seed = 5;
  const auto [trace, ann] = simulate(spec, profile, cfg);
  const auto tp = (dir / "t.mtrc").string();
  const auto ap = (dir / "t.ann").string();
  write_trace(trace, ann, tp, ap);
  const auto [back, back_ann] = read_trace(tp, ap);
  CHECK(back.sample_rate == trace.sample_rate);
  REQUIRE(back.samples.size() == trace.samples.size());
  CHECK(std::memcmp(back.samples.data(), trace.samples.data(),
                    sizeof(float) * trace.samples.size()) == 0);
  REQUIRE(back_ann.spans.size() == ann.spans.size());
  for (std::size_t i = 0; i < ann.spans.size(); ++i) {
    CHECK(back_ann.spans[i].begin == ann.spans[i].begin);
    CHECK(back_ann.spans[i].end == ann.spans[i].end);
    CHECK(back_ann.spans[i].label == ann.spans[i].label);
    CHECK(back_ann.spans[i].step_index == ann.spans[i].step_index);
  }
}

TEST_CASE("one-sample trace round-trips") {
  const auto dir = temp_dir();
  Trace trace;
  trace.sample_rate = 47000.0;
  trace.samples = Eigen::VectorXf::Constant(1, 0.25f);
  Annotation ann;
  ann.spans.push_back({0, 1, kIdleLabel, -1});
  const auto tp = (dir / "one.mtrc").string();
  const auto ap = (dir / "one.ann").string();
  write_trace(trace, ann, tp, ap);
  const auto [back, back_ann] = read_trace(tp, ap);
  CHECK(back.samples.size() == 1);
  CHECK(back_ann.spans.size() == 1);
}

TEST_CASE("overlapping spans are a parse error with byte offset") {
  const auto dir = temp_dir();
  Trace trace;
  trace.sample_rate = 47000.0;
  trace.samples = Eigen::VectorXf::Zero(10);
  Annotation ann;
  ann.spans.push_back({0, 6, kIdleLabel, -1});
  ann.spans.push_back({6, 10, kIdleLabel, -1});
  const auto tp = (dir / "bad.mtrc").string();
  const auto ap = (dir / "bad.ann").string();
  write_trace(trace, ann, tp, ap);
  std::ofstream bad(ap, std::ios::binary);
  bad << "0 6 idle -1\n4 10 idle -1\n";
  bad.close();
  CHECK_THROWS_AS(read_trace(tp, ap), TraceIoError);
  try {
    read_trace(tp, ap);
  } catch (const TraceIoError& e) {
    CHECK(e.byte_offset == 12);  // second line start
  }
}

TEST_CASE("truncated payload is a parse error") {
  const auto dir = temp_dir();
  Trace trace;
  trace.sample_rate = 47000.0;
  trace.samples = Eigen::VectorXf::Zero(100);
  Annotation ann;
  ann.spans.push_back({0, 100, kIdleLabel, -1});
  const auto tp = (dir / "trunc.mtrc").string();
  const auto ap = (dir / "trunc.ann").string();
  write_trace(trace, ann, tp, ap);
  std::filesystem::resize_file(tp, 40);
  CHECK_THROWS_AS(read_trace(tp, ap), TraceIoError);
}

TEST_CASE("bad magic is a parse error at offset zero") {
  const auto dir = temp_dir();
  const auto tp = (dir / "nottrace.mtrc").string();
  std::ofstream out(tp, std::ios::binary);
  out << "JUNKJUNKJUNK";
  out.close();
  try {
    read_trace(tp, tp);
    CHECK(false);
  } catch (const TraceIoError& e) {
    CHECK(e.byte_offset == 0);
  }
}

TEST_CASE("quantization maps onto a bounded level set") {
  const auto spec = small_cnn(8);
  const auto [trace, ann] = simulate(spec, device_profile("default"), SimConfig{});
  const Trace q = quantize_trace(trace, -0.5, 4.5, 4096);
  std::set<float> levels(q.samples.begin(), q.samples.end());
  CHECK(levels.size() <= 4096);
  for (Eigen::Index i = 0; i < q.samples.size(); ++i)
    CHECK(std::abs(q.samples[i] - trace.samples[i]) <=
          (4.5 + 0.5) / 4095.0 * 0.5 + 1e-6);
}

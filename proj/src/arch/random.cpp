#include "magrecon/arch/random.hpp"

#include <algorithm>

#include "magrecon/arch/geometry.hpp"
#include "magrecon/rng.hpp"

namespace magrecon::arch {

namespace {

const std::vector<int> kChannelLadder = {8,  16,  24,  32,  48,
                                         64, 96, 128, 192, 256};

struct Mix {
  bool conv = false, fc = false, lstm = false, bn = false, add = false;
  std::vector<StepType> acts;
  std::vector<StepType> pools;
};

Mix scan_mix(const GeneratorConfig& cfg) {
  Mix m;
  for (StepType t : cfg.step_mix) {
    if (t == StepType::Conv) m.conv = true;
    else if (t == StepType::FullyConnected) m.fc = true;
    else if (t == StepType::Lstm) m.lstm = true;
    else if (t == StepType::BatchNorm) m.bn = true;
    else if (t == StepType::Add) m.add = true;
    else if (is_activation(t)) m.acts.push_back(t);
    else if (is_pooling(t)) m.pools.push_back(t);
  }
  return m;
}

int ladder_above(int c, int max_c) {
  for (int v : kChannelLadder)
    if (v > c && v <= max_c) return v;
  return c;
}

class Gen {
 public:
  Gen(Rng& rng, const GeneratorConfig& cfg, const Mix& mix)
      : rng_(rng), cfg_(cfg), mix_(mix) {}

  std::vector<Step> steps;
  TensorShape cur;

  void emit_elemwise(StepType t) { steps.push_back(Step::elemwise(t, cur)); }

  void emit_conv(int c_out, int k, int stride, int pad) {
    const int s_out = conv_out_size(cur.height, k, stride, pad, 1);
    steps.push_back(
        Step::conv({cur.height, s_out, k, stride, pad, 1, cur.channels, c_out}));
    cur = TensorShape::spatial(c_out, s_out);
  }

  void emit_pool() {
    const int k = static_cast<int>(rng_.next_int(2, 3));
    int stride = rng_.next_bool(0.8) ? 2 : 1;
    if (cur.height < k + 1) stride = 1;
    if (cur.height < k) {
      // too small to window; identity pool keeps the chain valid
      steps.push_back(Step::pool(pick_pool(),
                                 {cur.height, cur.height, 1, 1, 0, cur.channels}));
      return;
    }
    const int s_out = pool_out_size(cur.height, k, stride, 0);
    steps.push_back(
        Step::pool(pick_pool(), {cur.height, s_out, k, stride, 0, cur.channels}));
    cur = TensorShape::spatial(cur.channels, s_out);
  }

  void emit_fc(int out) {
    steps.push_back(Step::fully_connected(static_cast<int>(cur.elems()), out));
    cur = TensorShape::flat(out);
  }

  void emit_lstm(int hidden, int seq) {
    const int feat = static_cast<int>(cur.elems()) / seq;
    steps.push_back(Step::lstm({feat, hidden, seq}));
    cur = TensorShape::flat(seq * hidden);
  }

  StepType pick_act() { return rng_.pick(mix_.acts); }
  StepType pick_pool() { return rng_.pick(mix_.pools); }

  // [FC, act, FC, act, ..., FC]; length n >= 1, classifier head last.
  void fc_tail(int n) {
    const std::vector<int> widths = {1024, 2048, 4096};
    const std::vector<int> outs = {10, 100, 1000};
    int w = rng_.pick(widths);
    bool fc_next = true;
    while (n > 1) {
      if (fc_next || mix_.acts.empty()) {
        emit_fc(w);
        w = std::max(256, w / 2);
        fc_next = false;
      } else {
        emit_elemwise(pick_act());
        fc_next = true;
      }
      --n;
    }
    emit_fc(rng_.pick(outs));
  }

 private:
  Rng& rng_;
  const GeneratorConfig& cfg_;
  const Mix& mix_;
};

int pick_kernel(Rng& rng, int s) {
  const double u = rng.next_double();
  if (s >= 160) return u < 0.7 ? 3 : 5;  // keep early high-res convs bounded
  if (u < 0.12) return 1;
  if (u < 0.67) return 3;
  if (u < 0.90) return 5;
  return 7;
}

void cnn_body(Gen& g, Rng& rng, const Mix& mix, const GeneratorConfig& cfg,
              int body_len) {
  int remaining = body_len;
  bool first = true;
  while (remaining > 0) {
    const int block_max = std::min(5, remaining);
    int used = 0;
    const int s = g.cur.height;
    const int k = pick_kernel(rng, s);
    int stride = 1;
    if ((first && s >= 160) || (s >= 16 && rng.next_bool(0.25))) stride = 2;
    int pad = (k - 1) / 2;
    if (stride == 1 && k > 1 && rng.next_bool(0.25)) {
      const int cand = static_cast<int>(rng.next_int(0, (k - 1) / 2));
      // keep the window inside the padded axis and the output usable
      if (k <= s + 2 * cand && s + 2 * cand - (k - 1) >= 4) pad = cand;
    }
    int c_out = g.cur.channels;
    if (first) {
      c_out = s >= 160 ? static_cast<int>(rng.next_int(2, 3)) * 8
                       : static_cast<int>(rng.next_int(3, 6)) * 8;
    } else if (stride == 2 || rng.next_bool(0.3)) {
      c_out = ladder_above(c_out, cfg.max_channels);
    }
    g.emit_conv(c_out, k, stride, pad);
    ++used;
    first = false;
    if (mix.bn && used < block_max && rng.next_bool(0.5)) {
      g.emit_elemwise(StepType::BatchNorm);
      ++used;
    }
    if (!mix.acts.empty() && used < block_max && rng.next_bool(0.85)) {
      g.emit_elemwise(g.pick_act());
      ++used;
    }
    if (!mix.pools.empty() && used < block_max && g.cur.height >= 8 &&
        rng.next_bool(0.28)) {
      g.emit_pool();
      ++used;
    }
    if (mix.add && used < block_max && rng.next_bool(0.15)) {
      g.emit_elemwise(StepType::Add);
      ++used;
    }
    remaining -= used;
  }
}

void mlp_body(Gen& g, Rng& rng, const Mix& mix, int body_len) {
  const std::vector<int> widths = {512, 1024, 2048, 4096};
  int remaining = body_len;
  while (remaining > 0) {
    const int block_max = std::min(3, remaining);
    int used = 0;
    g.emit_fc(rng.pick(widths));
    ++used;
    if (!mix.acts.empty() && used < block_max && rng.next_bool(0.8)) {
      g.emit_elemwise(g.pick_act());
      ++used;
    }
    if (mix.bn && used < block_max && rng.next_bool(0.3)) {
      g.emit_elemwise(StepType::BatchNorm);
      ++used;
    }
    remaining -= used;
  }
}

void lstm_body(Gen& g, Rng& rng, const Mix& mix, int body_len, int seq) {
  const std::vector<int> hiddens = {64, 128, 256};
  int remaining = body_len;
  while (remaining > 0) {
    const int block_max = std::min(2, remaining);
    int used = 0;
    g.emit_lstm(rng.pick(hiddens), seq);
    ++used;
    if (!mix.acts.empty() && used < block_max && rng.next_bool(0.4)) {
      g.emit_elemwise(g.pick_act());
      ++used;
    }
    remaining -= used;
  }
}

// No linear type allowed: chain elementwise/pooling steps over the input.
void elemwise_body(Gen& g, Rng& rng, const Mix& mix, int body_len) {
  std::vector<StepType> choices = mix.acts;
  if (mix.bn) choices.push_back(StepType::BatchNorm);
  if (mix.add) choices.push_back(StepType::Add);
  for (int i = 0; i < body_len; ++i) {
    if (!mix.pools.empty() && (choices.empty() || rng.next_bool(0.3)))
      g.emit_pool();
    else
      g.emit_elemwise(rng.pick(choices));
  }
}

}  // namespace

NetworkSpec random_network(std::uint64_t seed, const GeneratorConfig& cfg) {
  if (cfg.step_mix.empty())
    throw ConfigError("generator config has an empty step mix");
  if (cfg.min_depth < 1 || cfg.max_depth < cfg.min_depth)
    throw ConfigError("generator config has an invalid depth range");
  if (cfg.resolutions.empty())
    throw ConfigError("generator config has no input resolutions");

  const Mix mix = scan_mix(cfg);
  if (!mix.conv && !mix.fc && !mix.lstm && mix.acts.empty() &&
      mix.pools.empty() && !mix.bn && !mix.add)
    throw ConfigError("step mix contains no usable step types");

  Rng rng(derive_seed(seed, "random-network"));
  const int depth =
      static_cast<int>(rng.next_int(cfg.min_depth, cfg.max_depth));

  // Pick the network family from the available linear types.
  enum class Family { Cnn, Mlp, Lstm, Elemwise };
  Family family = Family::Elemwise;
  if (mix.conv) {
    family = Family::Cnn;
    const double u = rng.next_double();
    if (mix.lstm && u < cfg.lstm_net_fraction) family = Family::Lstm;
    else if (mix.fc && u < cfg.lstm_net_fraction + cfg.mlp_net_fraction)
      family = Family::Mlp;
  } else if (mix.lstm) {
    family = Family::Lstm;
  } else if (mix.fc) {
    family = Family::Mlp;
  }

  NetworkSpec spec;
  int lstm_seq = 16;
  if (family == Family::Cnn || family == Family::Elemwise) {
    const int res = rng.pick(cfg.resolutions);
    spec.input = TensorShape::spatial(3, res);
  } else if (family == Family::Mlp) {
    spec.input = TensorShape::flat(rng.pick(std::vector<int>{512, 1024, 2048}));
  } else {
    lstm_seq = static_cast<int>(rng.pick(std::vector<int>{8, 16, 32}));
    const int feat = rng.pick(std::vector<int>{32, 64, 128});
    spec.input = TensorShape::flat(lstm_seq * feat);
  }

  Gen g(rng, cfg, mix);
  g.cur = spec.input;

  switch (family) {
    case Family::Cnn: {
      int tail = 0;
      if (mix.fc && depth >= 2)
        tail = std::min<int>(depth - 1,
                             static_cast<int>(rng.next_int(1, 5)));
      cnn_body(g, rng, mix, cfg, depth - tail);
      if (tail > 0) g.fc_tail(tail);
      break;
    }
    case Family::Mlp: {
      mlp_body(g, rng, mix, depth - 1);
      g.fc_tail(1);
      break;
    }
    case Family::Lstm: {
      int tail = 0;
      if (mix.fc && depth >= 2)
        tail = std::min<int>(depth - 1,
                             static_cast<int>(rng.next_int(1, 3)));
      lstm_body(g, rng, mix, depth - tail, lstm_seq);
      if (tail > 0) g.fc_tail(tail);
      break;
    }
    case Family::Elemwise:
      elemwise_body(g, rng, mix, depth);
      break;
  }

  spec.steps = std::move(g.steps);
  spec.name = "rand" + std::to_string(seed);
  return spec;
}

}  // namespace magrecon::arch

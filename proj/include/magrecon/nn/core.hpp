#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <vector>

#include "magrecon/rng.hpp"

// Small dense-network toolkit: linear layers, an LSTM cell with full
// backpropagation through time, softmax cross-entropy and SGD. Everything is
// templated on the scalar so the shipped float path and the double-precision
// gradient checks share one implementation. Batches are column-major:
// activations are (features x batch).
namespace magrecon::nn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct Param {
  Matrix<Scalar> value;
  Matrix<Scalar> grad;
  Matrix<Scalar> momentum;

  void init(Eigen::Index rows, Eigen::Index cols, Scalar bound, Rng& rng) {
    value.resize(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i)
        value(i, j) = static_cast<Scalar>((2.0 * rng.next_double() - 1.0) * bound);
    grad = Matrix<Scalar>::Zero(rows, cols);
    momentum = Matrix<Scalar>::Zero(rows, cols);
  }
  void zero_grad() { grad.setZero(); }
};

template <typename Scalar>
class Linear {
 public:
  void init(int in, int out, Rng& rng) {
    const Scalar bound = static_cast<Scalar>(1.0 / std::sqrt(double(in)));
    w_.init(out, in, bound, rng);
    b_.init(out, 1, bound, rng);
  }

  Matrix<Scalar> forward(const Matrix<Scalar>& x) {
    x_ = x;
    return (w_.value * x).colwise() + b_.value.col(0);
  }

  Matrix<Scalar> backward(const Matrix<Scalar>& dy) {
    w_.grad.noalias() += dy * x_.transpose();
    b_.grad.col(0) += dy.rowwise().sum();
    return w_.value.transpose() * dy;
  }

  std::vector<Param<Scalar>*> params() { return {&w_, &b_}; }
  int in_features() const { return static_cast<int>(w_.value.cols()); }
  int out_features() const { return static_cast<int>(w_.value.rows()); }

 private:
  Param<Scalar> w_, b_;
  Matrix<Scalar> x_;
};

template <typename Scalar>
struct ReluOp {
  Matrix<Scalar> forward(const Matrix<Scalar>& x) {
    mask_ = (x.array() > Scalar(0)).template cast<Scalar>();
    return x.cwiseProduct(mask_);
  }
  Matrix<Scalar> backward(const Matrix<Scalar>& dy) {
    return dy.cwiseProduct(mask_);
  }
  Matrix<Scalar> mask_;
};

// Inverted dropout; identity when inactive (inference or p == 0).
template <typename Scalar>
struct Dropout {
  double p = 0.0;

  Matrix<Scalar> forward(const Matrix<Scalar>& x, bool training, Rng& rng) {
    if (!training || p <= 0.0) {
      active_ = false;
      return x;
    }
    active_ = true;
    const Scalar keep = static_cast<Scalar>(1.0 - p);
    mask_.resize(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i)
        mask_(i, j) = rng.next_double() < p ? Scalar(0) : Scalar(1) / keep;
    return x.cwiseProduct(mask_);
  }
  Matrix<Scalar> backward(const Matrix<Scalar>& dy) const {
    return active_ ? dy.cwiseProduct(mask_) : dy;
  }

  Matrix<Scalar> mask_;
  bool active_ = false;
};

// One-direction LSTM over a sequence of (in x batch) inputs. Gate layout in
// the stacked weight matrices is [input, forget, cell, output].
template <typename Scalar>
class LstmCell {
 public:
  void init(int in, int hidden, Rng& rng) {
    hidden_ = hidden;
    const Scalar bound = static_cast<Scalar>(1.0 / std::sqrt(double(in + hidden)));
    wx_.init(4 * hidden, in, bound, rng);
    wh_.init(4 * hidden, hidden, bound, rng);
    b_.init(4 * hidden, 1, bound, rng);
    // forget-gate bias starts positive so memory persists early in training
    b_.value.block(hidden, 0, hidden, 1).array() += Scalar(1);
  }

  // xs[t]: (in x B). Returns hs[t]: (hidden x B).
  std::vector<Matrix<Scalar>> forward(const std::vector<Matrix<Scalar>>& xs) {
    const int T = static_cast<int>(xs.size());
    const Eigen::Index B = xs.empty() ? 0 : xs[0].cols();
    xs_ = xs;
    gates_.resize(T);
    cs_.resize(T);
    tanh_cs_.resize(T);
    std::vector<Matrix<Scalar>> hs(T);
    Matrix<Scalar> h = Matrix<Scalar>::Zero(hidden_, B);
    Matrix<Scalar> c = Matrix<Scalar>::Zero(hidden_, B);
    for (int t = 0; t < T; ++t) {
      Matrix<Scalar> z = wx_.value * xs[t] + wh_.value * h;
      z.colwise() += b_.value.col(0);
      auto gi = z.topRows(hidden_).array();
      auto gf = z.middleRows(hidden_, hidden_).array();
      auto gg = z.middleRows(2 * hidden_, hidden_).array();
      auto go = z.bottomRows(hidden_).array();
      Matrix<Scalar> gates(4 * hidden_, B);
      gates.topRows(hidden_) = (Scalar(1) / (Scalar(1) + (-gi).exp())).matrix();
      gates.middleRows(hidden_, hidden_) =
          (Scalar(1) / (Scalar(1) + (-gf).exp())).matrix();
      gates.middleRows(2 * hidden_, hidden_) = gg.tanh().matrix();
      gates.bottomRows(hidden_) = (Scalar(1) / (Scalar(1) + (-go).exp())).matrix();
      c = gates.middleRows(hidden_, hidden_).cwiseProduct(c) +
          gates.topRows(hidden_).cwiseProduct(gates.middleRows(2 * hidden_, hidden_));
      tanh_cs_[t] = c.array().tanh().matrix();
      h = gates.bottomRows(hidden_).cwiseProduct(tanh_cs_[t]);
      gates_[t] = std::move(gates);
      cs_[t] = c;
      hs[t] = h;
    }
    hs_ = hs;
    return hs;
  }

  // dhs[t]: gradient wrt hs[t]. Returns dxs[t]; accumulates weight grads.
  std::vector<Matrix<Scalar>> backward(const std::vector<Matrix<Scalar>>& dhs) {
    const int T = static_cast<int>(xs_.size());
    const Eigen::Index B = T > 0 ? xs_[0].cols() : 0;
    std::vector<Matrix<Scalar>> dxs(T);
    Matrix<Scalar> dh_next = Matrix<Scalar>::Zero(hidden_, B);
    Matrix<Scalar> dc = Matrix<Scalar>::Zero(hidden_, B);
    for (int t = T - 1; t >= 0; --t) {
      const Matrix<Scalar> dh = dhs[t] + dh_next;
      const auto i = gates_[t].topRows(hidden_).array();
      const auto f = gates_[t].middleRows(hidden_, hidden_).array();
      const auto g = gates_[t].middleRows(2 * hidden_, hidden_).array();
      const auto o = gates_[t].bottomRows(hidden_).array();
      const auto tc = tanh_cs_[t].array();
      dc.array() += dh.array() * o * (Scalar(1) - tc * tc);
      Matrix<Scalar> dz(4 * hidden_, B);
      dz.topRows(hidden_) = (dc.array() * g * i * (Scalar(1) - i)).matrix();
      const Matrix<Scalar> c_prev =
          t > 0 ? cs_[t - 1] : Matrix<Scalar>::Zero(hidden_, B);
      dz.middleRows(hidden_, hidden_) =
          (dc.array() * c_prev.array() * f * (Scalar(1) - f)).matrix();
      dz.middleRows(2 * hidden_, hidden_) =
          (dc.array() * i * (Scalar(1) - g * g)).matrix();
      dz.bottomRows(hidden_) = (dh.array() * tc * o * (Scalar(1) - o)).matrix();

      wx_.grad.noalias() += dz * xs_[t].transpose();
      const Matrix<Scalar> h_prev =
          t > 0 ? hs_[t - 1] : Matrix<Scalar>::Zero(hidden_, B);
      wh_.grad.noalias() += dz * h_prev.transpose();
      b_.grad.col(0) += dz.rowwise().sum();

      dxs[t] = wx_.value.transpose() * dz;
      dh_next = wh_.value.transpose() * dz;
      dc = dc.cwiseProduct(gates_[t].middleRows(hidden_, hidden_));
    }
    return dxs;
  }

  std::vector<Param<Scalar>*> params() { return {&wx_, &wh_, &b_}; }
  int hidden() const { return hidden_; }
  int in_features() const { return static_cast<int>(wx_.value.cols()); }

 private:
  int hidden_ = 0;
  Param<Scalar> wx_, wh_, b_;
  std::vector<Matrix<Scalar>> xs_, hs_, gates_, cs_, tanh_cs_;
};

// Bidirectional wrapper: concatenates forward and reverse hidden sequences.
template <typename Scalar>
class BiLstm {
 public:
  void init(int in, int hidden, Rng& rng) {
    fwd_.init(in, hidden, rng);
    bwd_.init(in, hidden, rng);
  }

  std::vector<Matrix<Scalar>> forward(const std::vector<Matrix<Scalar>>& xs) {
    const int T = static_cast<int>(xs.size());
    auto hf = fwd_.forward(xs);
    std::vector<Matrix<Scalar>> rev(T);
    for (int t = 0; t < T; ++t) rev[t] = xs[T - 1 - t];
    auto hb = bwd_.forward(rev);
    std::vector<Matrix<Scalar>> out(T);
    const int h = fwd_.hidden();
    for (int t = 0; t < T; ++t) {
      out[t].resize(2 * h, xs[t].cols());
      out[t].topRows(h) = hf[t];
      out[t].bottomRows(h) = hb[T - 1 - t];
    }
    return out;
  }

  std::vector<Matrix<Scalar>> backward(const std::vector<Matrix<Scalar>>& dout) {
    const int T = static_cast<int>(dout.size());
    const int h = fwd_.hidden();
    std::vector<Matrix<Scalar>> dhf(T), dhb(T);
    for (int t = 0; t < T; ++t) {
      dhf[t] = dout[t].topRows(h);
      dhb[t] = dout[T - 1 - t].bottomRows(h);
    }
    auto dxf = fwd_.backward(dhf);
    auto dxb = bwd_.backward(dhb);
    std::vector<Matrix<Scalar>> dxs(T);
    for (int t = 0; t < T; ++t) dxs[t] = dxf[t] + dxb[T - 1 - t];
    return dxs;
  }

  std::vector<Param<Scalar>*> params() {
    auto p = fwd_.params();
    auto q = bwd_.params();
    p.insert(p.end(), q.begin(), q.end());
    return p;
  }
  int hidden() const { return fwd_.hidden(); }

 private:
  LstmCell<Scalar> fwd_, bwd_;
};

// Row-wise softmax over logits (classes x batch).
template <typename Scalar>
Matrix<Scalar> softmax(const Matrix<Scalar>& logits) {
  Matrix<Scalar> p = logits;
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    auto col = p.col(j).array();
    col -= col.maxCoeff();
    col = col.exp();
    col /= col.sum();
  }
  return p;
}

// Weighted softmax cross-entropy. Targets are class indices per column;
// class_weights scales each sample's contribution; the loss is normalized by
// the total weight so learning rates stay comparable across class balances.
template <typename Scalar>
struct CrossEntropy {
  Scalar loss = 0;
  Matrix<Scalar> dlogits;

  void compute(const Matrix<Scalar>& logits, const std::vector<int>& targets,
               const std::vector<Scalar>& class_weights) {
    const Eigen::Index B = logits.cols();
    Matrix<Scalar> p = softmax(logits);
    Scalar total_w = 0;
    loss = 0;
    for (Eigen::Index j = 0; j < B; ++j) total_w += class_weights[targets[j]];
    if (total_w <= Scalar(0)) total_w = Scalar(1);
    dlogits = p;
    for (Eigen::Index j = 0; j < B; ++j) {
      const int y = targets[j];
      const Scalar w = class_weights[y];
      loss -= w * std::log(std::max(p(y, j), Scalar(1e-30)));
      dlogits(y, j) -= Scalar(1);
      dlogits.col(j) *= w / total_w;
    }
    loss /= total_w;
  }
};

// Mean squared error over a (1 x batch) prediction row.
template <typename Scalar>
struct SquaredError {
  Scalar loss = 0;
  Matrix<Scalar> dpred;

  void compute(const Matrix<Scalar>& pred, const std::vector<Scalar>& targets) {
    const Eigen::Index B = pred.cols();
    dpred.resize(1, B);
    loss = 0;
    for (Eigen::Index j = 0; j < B; ++j) {
      const Scalar d = pred(0, j) - targets[j];
      loss += d * d / Scalar(B);
      dpred(0, j) = Scalar(2) * d / Scalar(B);
    }
  }
};

// SGD with momentum and global-norm gradient clipping.
template <typename Scalar>
class Sgd {
 public:
  Scalar lr = Scalar(0.1);
  Scalar momentum = Scalar(0.9);
  Scalar clip_norm = Scalar(5);

  void step(const std::vector<Param<Scalar>*>& params) {
    Scalar sq = 0;
    for (const auto* p : params) sq += p->grad.squaredNorm();
    const Scalar norm = std::sqrt(sq);
    const Scalar scale =
        (clip_norm > Scalar(0) && norm > clip_norm) ? clip_norm / norm : Scalar(1);
    for (auto* p : params) {
      p->momentum = momentum * p->momentum - lr * scale * p->grad;
      p->value += p->momentum;
      p->grad.setZero();
    }
  }
};

}  // namespace magrecon::nn

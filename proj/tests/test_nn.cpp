#include <doctest.h>

#include <sstream>

#include "magrecon/nn/core.hpp"
#include "magrecon/nn/serialize.hpp"

using namespace magrecon;
using namespace magrecon::nn;

namespace {

// Toy labeler-shaped stack in double precision: two stacked BiLSTMs and a
// dense head over a 3-step sequence.
struct ToyStack {
  BiLstm<double> l1, l2;
  Linear<double> head;
  CrossEntropy<double> ce;

  explicit ToyStack(std::uint64_t seed) {
    Rng rng(seed);
    l1.init(2, 4, rng);
    l2.init(8, 3, rng);
    head.init(6, 3, rng);
  }

  std::vector<Param<double>*> params() {
    auto p = l1.params();
    for (auto* q : l2.params()) p.push_back(q);
    for (auto* q : head.params()) p.push_back(q);
    return p;
  }

  double loss(const std::vector<Matrix<double>>& xs,
              const std::vector<std::vector<int>>& ys,
              const std::vector<double>& w, bool with_grad) {
    auto h1 = l1.forward(xs);
    auto h2 = l2.forward(h1);
    double total = 0;
    std::vector<Matrix<double>> dh2(h2.size());
    std::vector<Matrix<double>> logits(h2.size());
    for (std::size_t t = 0; t < h2.size(); ++t) {
      logits[t] = head.forward(h2[t]);
      ce.compute(logits[t], ys[t], w);
      total += ce.loss;
      if (with_grad) dh2[t] = head.backward(ce.dlogits);
    }
    if (with_grad) l1.backward(l2.backward(dh2));
    return total;
  }
};

double max_rel_error(ToyStack& stack, const std::vector<Matrix<double>>& xs,
                     const std::vector<std::vector<int>>& ys,
                     const std::vector<double>& w) {
  for (auto* p : stack.params()) p->zero_grad();
  stack.loss(xs, ys, w, true);
  // snapshot analytic grads, then central differences per weight
  std::vector<Matrix<double>> analytic;
  for (auto* p : stack.params()) analytic.push_back(p->grad);
  const double eps = 1e-5;
  double worst = 0;
  int pi = 0;
  for (auto* p : stack.params()) {
    for (Eigen::Index j = 0; j < p->value.cols(); ++j)
      for (Eigen::Index i = 0; i < p->value.rows(); ++i) {
        const double keep = p->value(i, j);
        p->value(i, j) = keep + eps;
        const double up = stack.loss(xs, ys, w, false);
        p->value(i, j) = keep - eps;
        const double dn = stack.loss(xs, ys, w, false);
        p->value(i, j) = keep;
        const double fd = (up - dn) / (2 * eps);
        const double an = analytic[pi](i, j);
        const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
        worst = std::max(worst, std::abs(fd - an) / denom);
      }
    ++pi;
  }
  return worst;
}

}  // namespace

TEST_CASE("softmax columns sum to one") {
  Rng rng(1);
  Matrix<double> logits(5, 7);
  for (Eigen::Index j = 0; j < 7; ++j)
    for (Eigen::Index i = 0; i < 5; ++i) logits(i, j) = rng.next_normal() * 3;
  const auto p = softmax(logits);
  for (Eigen::Index j = 0; j < 7; ++j)
    CHECK(p.col(j).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("recurrent stack gradients match central finite differences") {
  ToyStack stack(7);
  Rng rng(11);
  const int T = 3, B = 2;
  std::vector<Matrix<double>> xs(T);
  std::vector<std::vector<int>> ys(T);
  for (int t = 0; t < T; ++t) {
    xs[t].resize(2, B);
    for (int j = 0; j < B; ++j) {
      xs[t](0, j) = rng.next_normal();
      xs[t](1, j) = rng.next_normal();
      ys[t].push_back(static_cast<int>(rng.next_int(0, 2)));
    }
  }
  const std::vector<double> w = {1.0, 2.0, 0.5};  // uneven class weights
  CHECK(max_rel_error(stack, xs, ys, w) < 1e-4);
}

TEST_CASE("dense head gradients match central finite differences") {
  Rng rng(5);
  Linear<double> a, b;
  a.init(4, 8, rng);
  b.init(8, 3, rng);
  ReluOp<double> relu;
  CrossEntropy<double> ce;
  Matrix<double> x(4, 5);
  std::vector<int> y;
  for (Eigen::Index j = 0; j < 5; ++j) {
    for (Eigen::Index i = 0; i < 4; ++i) x(i, j) = rng.next_normal();
    y.push_back(static_cast<int>(rng.next_int(0, 2)));
  }
  const std::vector<double> w = {1.0, 1.0, 1.0};

  auto loss = [&](bool with_grad) {
    auto h = relu.forward(a.forward(x));
    ce.compute(b.forward(h), y, w);
    if (with_grad) a.backward(relu.backward(b.backward(ce.dlogits)));
    return ce.loss;
  };

  std::vector<Param<double>*> params = a.params();
  for (auto* p : b.params()) params.push_back(p);
  for (auto* p : params) p->zero_grad();
  loss(true);
  std::vector<Matrix<double>> analytic;
  for (auto* p : params) analytic.push_back(p->grad);
  const double eps = 1e-5;
  int pi = 0;
  for (auto* p : params) {
    for (Eigen::Index j = 0; j < p->value.cols(); ++j)
      for (Eigen::Index i = 0; i < p->value.rows(); ++i) {
        const double keep = p->value(i, j);
        p->value(i, j) = keep + eps;
        const double up = loss(false);
        p->value(i, j) = keep - eps;
        const double dn = loss(false);
        p->value(i, j) = keep;
        const double fd = (up - dn) / (2 * eps);
        const double an = analytic[pi](i, j);
        const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
        CHECK(std::abs(fd - an) / denom < 1e-4);
      }
    ++pi;
  }
}

TEST_CASE("squared error gradient is exact") {
  SquaredError<double> mse;
  Matrix<double> pred(1, 3);
  pred << 1.0, -2.0, 0.5;
  mse.compute(pred, {0.5, -1.0, 0.5});
  CHECK(mse.loss == doctest::Approx((0.25 + 1.0 + 0.0) / 3.0));
  CHECK(mse.dpred(0, 0) == doctest::Approx(2.0 * 0.5 / 3.0));
  CHECK(mse.dpred(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("sgd with same seed is bit-deterministic") {
  auto run = [] {
    Rng rng(3);
    Linear<float> l;
    l.init(4, 4, rng);
    Sgd<float> opt;
    CrossEntropy<float> ce;
    Matrix<float> x = Matrix<float>::Ones(4, 2);
    for (int it = 0; it < 20; ++it) {
      ce.compute(l.forward(x), {1, 2}, {1.f, 1.f, 1.f, 1.f});
      l.backward(ce.dlogits);
      opt.step(l.params());
    }
    std::ostringstream os;
    write_matrix(os, l.params()[0]->value);
    return os.str();
  };
  CHECK(run() == run());
}

TEST_CASE("matrix serialization round-trips float32 content") {
  Rng rng(9);
  Matrix<float> m(6, 5);
  for (Eigen::Index j = 0; j < 5; ++j)
    for (Eigen::Index i = 0; i < 6; ++i)
      m(i, j) = static_cast<float>(rng.next_normal());
  std::stringstream ss;
  write_matrix(ss, m);
  const auto back = read_matrix<float>(ss);
  CHECK(back == m);
}

TEST_CASE("dropout is identity at inference") {
  Rng rng(2);
  Dropout<float> drop;
  drop.p = 0.5;
  Matrix<float> x = Matrix<float>::Constant(8, 8, 2.0f);
  const auto y = drop.forward(x, false, rng);
  CHECK(y == x);
  const auto z = drop.forward(x, true, rng);
  CHECK(z != x);
}

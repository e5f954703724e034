#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "v2n/errors.hpp"
#include "v2n/neural/adam.hpp"
#include "v2n/neural/checkpoint.hpp"
#include "v2n/neural/gradcheck.hpp"
#include "v2n/neural/lstm.hpp"
#include "v2n/neural/mlp.hpp"

using namespace v2n;
using namespace v2n::neural;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor2D random_tensor(Rng& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
  Tensor2D t(r, c);
  for (auto& v : t.reshaped()) v = rng.uniform(-scale, scale);
  return t;
}

void set_param(Mlp& net, std::size_t index, std::initializer_list<double> values) {
  auto params = net.parameters();
  REQUIRE(static_cast<std::size_t>(params[index]->size()) == values.size());
  std::copy(values.begin(), values.end(), params[index]->reshaped().begin());
}

}  // namespace

TEST_SUITE("neural") {

TEST_CASE("zero network with identity head outputs zeros") {
  const Mlp net({2, 3, {8, 8}, Activation::kElu, Activation::kIdentity});
  Rng rng(1);
  const auto y = net.forward(random_tensor(rng, 5, 2, 10.0));
  CHECK(y.rows() == 5);
  CHECK(y.cols() == 3);
  CHECK(y.isZero(0.0));
}

TEST_CASE("single-layer forward pass by hand") {
  Mlp net({2, 1, {}, Activation::kElu, Activation::kIdentity});
  set_param(net, 0, {2.0, -1.0});
  set_param(net, 1, {0.5});
  Tensor2D x(1, 2);
  x << 3.0, 4.0;
  // 2*3 - 1*4 + 0.5
  CHECK(net.forward(x)(0, 0) == 2.5);

  Mlp squashed({2, 1, {}, Activation::kElu, Activation::kTanh});
  set_param(squashed, 0, {2.0, -1.0});
  set_param(squashed, 1, {0.5});
  CHECK(squashed.forward(x)(0, 0) == doctest::Approx(std::tanh(2.5)).epsilon(1e-15));
}

TEST_CASE("two-layer forward pass by hand with an ELU hidden unit") {
  Mlp net({1, 1, {2}, Activation::kElu, Activation::kIdentity});
  set_param(net, 0, {1.0, -1.0});
  set_param(net, 1, {0.0, 0.0});
  set_param(net, 2, {1.0, 1.0});
  set_param(net, 3, {0.0});
  Tensor2D x(1, 1);
  x << 2.0;
  // elu(2) + elu(-2) = 2 + (e^-2 - 1)
  CHECK(net.forward(x)(0, 0) == doctest::Approx(1.0 + std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("softmax rows sum to one and tanh stays inside (-1, 1)") {
  Rng rng(3);
  const Mlp soft({3, 7, {16, 16}, Activation::kElu, Activation::kSoftmax}, rng);
  const Mlp squash({3, 2, {16}, Activation::kElu, Activation::kTanh}, rng);
  const auto x = random_tensor(rng, 20, 3, 50.0);
  const auto p = soft.forward(x);
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    CHECK(std::abs(p.row(r).sum() - 1.0) <= 1e-12);
    CHECK(p.row(r).minCoeff() >= 0.0);
  }
  const auto t = squash.forward(x);
  CHECK(t.cwiseAbs().maxCoeff() < 1.0);
}

TEST_CASE("forward is pure and bitwise repeatable") {
  Rng rng(4);
  const Mlp net({2, 1, {32, 32}, Activation::kElu, Activation::kTanh}, rng);
  const auto x = random_tensor(rng, 9, 2);
  MlpCache cache;
  const auto a = net.forward(x);
  const auto b = net.forward(x, cache);
  CHECK(a == b);
  CHECK(net.forward(x) == a);
}

TEST_CASE("zero output gradient gives zero gradients") {
  Rng rng(5);
  const Mlp net({3, 2, {8, 8}, Activation::kElu, Activation::kIdentity}, rng);
  MlpCache cache;
  net.forward(random_tensor(rng, 4, 3), cache);
  const auto g = net.backward(cache, Tensor2D::Zero(4, 2));
  REQUIRE(g.params.size() == 6);
  for (const auto& t : g.params) CHECK(t.isZero(0.0));
  CHECK(g.input.isZero(0.0));
}

TEST_CASE("gradients shape-match parameters") {
  Rng rng(6);
  Mlp net({3, 2, {5, 7}, Activation::kElu, Activation::kIdentity}, rng);
  MlpCache cache;
  net.forward(random_tensor(rng, 4, 3), cache);
  const auto g = net.backward(cache, Tensor2D::Ones(4, 2));
  const auto params = std::as_const(net).parameters();
  REQUIRE(g.params.size() == params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    CHECK(g.params[i].rows() == params[i]->rows());
    CHECK(g.params[i].cols() == params[i]->cols());
  }
  CHECK(g.input.rows() == 4);
  CHECK(g.input.cols() == 3);
}

TEST_CASE("ELU derivative is exp(x) on the negative side") {
  Mlp net({1, 1, {1}, Activation::kElu, Activation::kIdentity});
  set_param(net, 0, {1.0});
  set_param(net, 2, {1.0});
  for (double x : {-3.0, -1.0, -0.25, -1e-3, 1e-3, 0.5, 2.0}) {
    Tensor2D in(1, 1);
    in << x;
    MlpCache cache;
    const double y = net.forward(in, cache)(0, 0);
    const auto g = net.backward(cache, Tensor2D::Ones(1, 1));
    if (x < 0) {
      CHECK(y == doctest::Approx(std::expm1(x)).epsilon(1e-12));
      CHECK(g.input(0, 0) == doctest::Approx(std::exp(x)).epsilon(1e-15));
    } else {
      CHECK(y == x);
      CHECK(g.input(0, 0) == 1.0);
    }
  }
  // Continuous and C1 at zero.
  Tensor2D lo(1, 1), hi(1, 1);
  lo << -1e-9;
  hi << 1e-9;
  CHECK(std::abs(net.forward(lo)(0, 0) - net.forward(hi)(0, 0)) < 1e-8);
}

TEST_CASE("stale or foreign caches are rejected") {
  Rng rng(7);
  Mlp a({2, 1, {4}, Activation::kElu, Activation::kIdentity}, rng);
  Mlp b = a;
  MlpCache cache;
  a.forward(random_tensor(rng, 2, 2), cache);
  CHECK_THROWS_AS(b.backward(cache, Tensor2D::Ones(2, 1)), ShapeError);
  CHECK_THROWS_AS(a.backward(cache, Tensor2D::Ones(3, 1)), ShapeError);
  a.parameters();
  CHECK_THROWS_AS(a.backward(cache, Tensor2D::Ones(2, 1)), ShapeError);
  CHECK_THROWS_AS(a.forward(Tensor2D::Ones(2, 3)), ShapeError);
}

TEST_CASE("parameter count matches the closed form") {
  const MlpSpec actor{2, 1, {128, 128, 128}, Activation::kElu, Activation::kTanh};
  // 2*128+128 + 2*(128*128+128) + 128*1+1
  CHECK(actor.parameter_count() == 384 + 2 * 16512 + 129);
  CHECK(Mlp(actor).parameter_count() == actor.parameter_count());
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    MlpSpec s;
    s.input_dim = static_cast<int>(rng.integer(1, 9));
    s.output_dim = static_cast<int>(rng.integer(1, 9));
    std::vector<int> widths{s.input_dim};
    for (int l = 0, n = static_cast<int>(rng.integer(0, 4)); l < n; ++l) {
      s.hidden.push_back(static_cast<int>(rng.integer(1, 16)));
      widths.push_back(s.hidden.back());
    }
    widths.push_back(s.output_dim);
    std::size_t expected = 0;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
      expected += static_cast<std::size_t>(widths[i] * widths[i + 1] + widths[i + 1]);
    }
    CHECK(s.parameter_count() == expected);
    CHECK(Mlp(s).parameter_count() == expected);
  }
  const LstmSpec lstm{1, 2, 4, 1};
  // layer 1: 1*16 + 4*16 + 16; layer 2: 4*16 + 4*16 + 16; head 4 + 1
  CHECK(lstm.parameter_count() == 96 + 144 + 5);
  CHECK(Lstm(lstm).parameter_count() == lstm.parameter_count());
}

TEST_CASE("gradient check on a linear net with quadratic loss is exact") {
  Rng rng(9);
  Mlp net({3, 2, {}, Activation::kElu, Activation::kIdentity}, rng);
  const auto x = random_tensor(rng, 4, 3);
  MlpCache cache;
  const auto y = net.forward(x, cache);
  const auto g = net.backward(cache, 2.0 * y);
  const auto params = net.parameters();
  const auto r = gradient_check(params, g.params,
                                [&] { return net.forward(x).squaredNorm(); });
  CHECK(r.checked == 8);
  CHECK(r.max_relative_error < 1e-8);
}

TEST_CASE("MLP gradients match finite differences for every head") {
  for (auto head : {Activation::kIdentity, Activation::kTanh, Activation::kSoftmax}) {
    CAPTURE(to_string(head));
    Rng shapes(static_cast<std::uint64_t>(head) + 20);
    for (int trial = 0; trial < 6; ++trial) {
      MlpSpec s;
      s.input_dim = static_cast<int>(shapes.integer(1, 16));
      s.output_dim = static_cast<int>(shapes.integer(1, 16));
      for (int l = 0, n = static_cast<int>(shapes.integer(1, 3)); l < n; ++l) {
        s.hidden.push_back(static_cast<int>(shapes.integer(1, 16)));
      }
      s.output_activation = head;
      const auto r = check_mlp(s, 100 + static_cast<std::uint64_t>(trial));
      CHECK(r.max_relative_error < 1e-4);
    }
  }
}

TEST_CASE("full-sized networks pass the gradient oracle") {
  for (const auto& c : standard_gradient_suite(1)) {
    CAPTURE(c.name);
    CHECK(c.result.checked > 0);
    CHECK(c.result.max_relative_error < 1e-4);
  }
}

TEST_CASE("LSTM with zero parameters predicts the head bias") {
  Lstm net({1, 2, 4, 2});
  auto params = net.parameters();
  params.back()->operator()(0, 0) = 0.25;
  params.back()->operator()(0, 1) = -3.0;
  Rng rng(10);
  std::vector<Tensor2D> seq{random_tensor(rng, 3, 1), random_tensor(rng, 3, 1)};
  const auto y = net.forward(seq);
  for (Eigen::Index r = 0; r < 3; ++r) {
    CHECK(y(r, 0) == 0.25);
    CHECK(y(r, 1) == -3.0);
  }
}

TEST_CASE("single LSTM cell by hand") {
  Lstm net({1, 1, 1, 1});
  auto p = net.parameters();
  // W_x (1x4), W_h (1x4), b (1x4) in gate order i, f, g, o; head W (1x1), b.
  *p[0] << 0.5, -0.3, 0.8, 1.2;
  *p[1] << 0.1, 0.2, 0.3, 0.4;
  *p[2] << 0.05, 1.0, -0.1, 0.2;
  *p[3] << 2.0;
  *p[4] << -0.5;
  const double x = 0.7;
  const double i = sigmoid(0.5 * x + 0.05);
  const double g = std::tanh(0.8 * x - 0.1);
  const double o = sigmoid(1.2 * x + 0.2);
  const double c = i * g;  // previous cell state is zero
  const double h = o * std::tanh(c);
  std::vector<Tensor2D> seq{Tensor2D::Constant(1, 1, x)};
  CHECK(net.forward(seq)(0, 0) == doctest::Approx(2.0 * h - 0.5).epsilon(1e-14));

  // Second step uses h and c from the first.
  const double x2 = -0.4;
  const double i2 = sigmoid(0.5 * x2 + 0.1 * h + 0.05);
  const double f2 = sigmoid(-0.3 * x2 + 0.2 * h + 1.0);
  const double g2 = std::tanh(0.8 * x2 + 0.3 * h - 0.1);
  const double o2 = sigmoid(1.2 * x2 + 0.4 * h + 0.2);
  const double c2 = f2 * c + i2 * g2;
  const double h2 = o2 * std::tanh(c2);
  seq.push_back(Tensor2D::Constant(1, 1, x2));
  CHECK(net.forward(seq)(0, 0) == doctest::Approx(2.0 * h2 - 0.5).epsilon(1e-14));
}

TEST_CASE("LSTM gradients match finite differences") {
  CHECK(check_lstm({1, 2, 4, 1}, 3).max_relative_error < 1e-4);
  Rng shapes(31);
  for (int trial = 0; trial < 5; ++trial) {
    LstmSpec s;
    s.input_dim = static_cast<int>(shapes.integer(1, 4));
    s.layers = static_cast<int>(shapes.integer(1, 3));
    s.cells_per_layer = static_cast<int>(shapes.integer(1, 6));
    s.output_dim = static_cast<int>(shapes.integer(1, 3));
    CHECK(check_lstm(s, 40 + static_cast<std::uint64_t>(trial), 4, 2).max_relative_error < 1e-4);
  }
}

TEST_CASE("LSTM rejects empty sequences and bad shapes") {
  const Lstm net({2, 1, 3, 1});
  CHECK_THROWS(net.forward(std::vector<Tensor2D>{}));
  CHECK_THROWS_AS(net.forward(std::vector<Tensor2D>{Tensor2D::Ones(1, 3)}), ShapeError);
}

TEST_CASE("Adam: zero gradient leaves parameters unchanged") {
  Rng rng(11);
  Tensor2D p = random_tensor(rng, 3, 4);
  const Tensor2D before = p;
  AdamState st;
  std::vector<Tensor2D*> params{&p};
  std::vector<Tensor2D> grads{Tensor2D::Zero(3, 4)};
  adam_step(params, grads, st);
  CHECK(p == before);
  CHECK(st.step_count == 1);
}

TEST_CASE("Adam: first step closed form") {
  Rng rng(12);
  Tensor2D p = random_tensor(rng, 2, 5);
  const Tensor2D before = p;
  const Tensor2D g = random_tensor(rng, 2, 5, 3.0);
  AdamState st;
  std::vector<Tensor2D*> params{&p};
  std::vector<Tensor2D> grads{g};
  adam_step(params, grads, st);
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double gk = g.reshaped()(k);
    const double expected = -st.learning_rate * gk / (std::abs(gk) + st.epsilon);
    CHECK(p.reshaped()(k) - before.reshaped()(k) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("Adam: identical inputs give identical parameters; shapes are checked") {
  Rng rng(13);
  Tensor2D a = random_tensor(rng, 3, 3), b = a;
  AdamState sa, sb;
  for (int i = 0; i < 25; ++i) {
    const Tensor2D g = random_tensor(rng, 3, 3);
    std::vector<Tensor2D*> pa{&a}, pb{&b};
    std::vector<Tensor2D> ga{g}, gb{g};
    adam_step(pa, ga, sa);
    adam_step(pb, gb, sb);
  }
  CHECK(a == b);
  std::vector<Tensor2D*> pa{&a};
  std::vector<Tensor2D> bad{Tensor2D::Zero(2, 3)};
  CHECK_THROWS_AS(adam_step(pa, bad, sa), ShapeError);
}

TEST_CASE("soft update interpolates parameters") {
  Rng rng(14);
  const MlpSpec spec{2, 1, {4}, Activation::kElu, Activation::kTanh};
  const Mlp src(spec, rng);
  Mlp dst(spec);
  dst.soft_update_from(src, 1.0);
  CHECK(dst.weight(0) == src.weight(0));
  Mlp half(spec);
  half.soft_update_from(src, 0.25);
  CHECK(half.weight(1).isApprox(0.25 * src.weight(1), 1e-15));
  CHECK_THROWS_AS(half.soft_update_from(Mlp({2, 2, {4}}), 0.5), ShapeError);
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  Rng rng(15);
  const Mlp mlp({2, 11, {128, 128, 128}, Activation::kElu, Activation::kSoftmax}, rng, 1e-3);
  const Lstm lstm({1, 2, 4, 1}, rng);
  const auto dir = std::filesystem::temp_directory_path();
  save_json(dir / "v2n_mlp.json", to_json(mlp));
  save_json(dir / "v2n_lstm.json", to_json(lstm));
  const Mlp mlp2 = mlp_from_json(load_json(dir / "v2n_mlp.json"));
  const Lstm lstm2 = lstm_from_json(load_json(dir / "v2n_lstm.json"));
  CHECK(mlp2.spec() == mlp.spec());
  CHECK(lstm2.spec() == lstm.spec());
  const auto pa = mlp.parameters(), pb = mlp2.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i) CHECK(*pa[i] == *pb[i]);
  const auto la = lstm.parameters(), lb = lstm2.parameters();
  for (std::size_t i = 0; i < la.size(); ++i) CHECK(*la[i] == *lb[i]);
  const auto x = random_tensor(rng, 5, 2);
  CHECK(mlp.forward(x) == mlp2.forward(x));
  std::filesystem::remove(dir / "v2n_mlp.json");
  std::filesystem::remove(dir / "v2n_lstm.json");
}

TEST_CASE("checkpoint loading validates shapes") {
  Rng rng(16);
  auto j = to_json(Mlp({2, 1, {3}}, rng));
  j["parameters"][0]["rows"] = 5;
  CHECK_THROWS(mlp_from_json(j));
}

}  // TEST_SUITE

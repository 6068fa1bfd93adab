#include <doctest.h>

#include <cstdio>
#include <stdexcept>

#include "summ/nn/checkpoint.hpp"
#include "summ/nn/optim.hpp"
#include "summ/rng.hpp"

using namespace summ;
using namespace summ::nn;

TEST_CASE("adam first step with unit gradient") {
  ParamStore<double> store;
  Parameter<double>& p = store.add("p", 1, 1);
  p.value(0, 0) = 1.0;
  p.grad(0, 0) = 1.0;
  Adam<double> opt({&p});
  opt.step(0.1);
  // bias-corrected m-hat = v-hat = 1, so the update is lr * 1/(1 + eps).
  CHECK(p.value(0, 0) == doctest::Approx(0.9).epsilon(1e-7));
}

TEST_CASE("adam adapts to gradient scale") {
  ParamStore<double> store;
  Parameter<double>& big = store.add("big", 1, 1);
  Parameter<double>& small = store.add("small", 1, 1);
  big.grad(0, 0) = 100.0;
  small.grad(0, 0) = 0.01;
  Adam<double> opt({&big, &small});
  opt.step(0.1);
  // First-step updates are lr-sized regardless of gradient magnitude.
  CHECK(big.value(0, 0) == doctest::Approx(-0.1).epsilon(1e-5));
  CHECK(small.value(0, 0) == doctest::Approx(-0.1).epsilon(1e-3));
}

TEST_CASE("lr schedule endpoints") {
  LrSchedule sched;  // base 2e-3, warmup 10000
  CHECK(sched.lr_at(10000) == doctest::Approx(2e-5).epsilon(1e-12));
  CHECK(sched.lr_at(1) == doctest::Approx(2e-9).epsilon(1e-12));
  // warmup region is linear, decay region follows inverse square root
  CHECK(sched.lr_at(5000) == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(sched.lr_at(40000) == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK_THROWS_AS(sched.lr_at(0), std::invalid_argument);
  CHECK_THROWS_AS(sched.lr_at(-3), std::invalid_argument);
}

TEST_CASE("lr schedule peaks at the warmup boundary") {
  LrSchedule sched{1.0, 100};
  double peak = sched.lr_at(100);
  for (long s : {1L, 10L, 50L, 99L, 101L, 150L, 10000L})
    CHECK(sched.lr_at(s) <= peak + 1e-15);
}

TEST_CASE("global norm clip") {
  ParamStore<double> store;
  Parameter<double>& a = store.add("a", 1, 1);
  Parameter<double>& b = store.add("b", 1, 1);
  a.grad(0, 0) = 3.0;
  b.grad(0, 0) = 4.0;
  double norm = clip_global_norm<double>({&a, &b}, 2.0);
  CHECK(norm == doctest::Approx(5.0));
  CHECK(a.grad(0, 0) == doctest::Approx(3.0 * 2.0 / 5.0));
  CHECK(b.grad(0, 0) == doctest::Approx(4.0 * 2.0 / 5.0));
  double sq = a.grad(0, 0) * a.grad(0, 0) + b.grad(0, 0) * b.grad(0, 0);
  CHECK(std::sqrt(sq) == doctest::Approx(2.0));

  // below the threshold nothing moves
  a.grad(0, 0) = 0.3;
  b.grad(0, 0) = 0.4;
  double small = clip_global_norm<double>({&a, &b}, 2.0);
  CHECK(small == doctest::Approx(0.5));
  CHECK(a.grad(0, 0) == doctest::Approx(0.3));
  CHECK_THROWS_AS(clip_global_norm<double>({&a}, 0.0), std::invalid_argument);
}

TEST_CASE("param store rejects duplicates and reports misses") {
  ParamStore<double> store;
  store.add("w", 2, 3);
  CHECK_THROWS_AS(store.add("w", 1, 1), std::invalid_argument);
  CHECK_THROWS_WITH_AS(store.at("nope"), "no such parameter: nope",
                       std::out_of_range);
  CHECK(store.has("w"));
  CHECK(!store.has("nope"));
}

TEST_CASE("checkpoint round trip is bit exact") {
  Rng rng(99);
  ParamStore<double> store;
  Parameter<double>& a = store.add("layer.weight", 3, 4);
  Parameter<double>& b = store.add("layer.bias", 4, 1);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) a.value(r, c) = rng.normal();
  for (int r = 0; r < 4; ++r) b.value(r, 0) = rng.normal();
  a.value(0, 0) = 1.0 / 3.0;
  a.value(1, 1) = -0.0;

  const char* path = "ckpt_roundtrip.bin";
  save_checkpoint(path, store);

  ParamStore<double> loaded;
  loaded.add("layer.weight", 3, 4);
  loaded.add("layer.bias", 4, 1);
  load_checkpoint(path, loaded);
  CHECK((loaded.at("layer.weight").value.array() == a.value.array()).all());
  CHECK((loaded.at("layer.bias").value.array() == b.value.array()).all());
  std::remove(path);
}

TEST_CASE("checkpoint errors: magic, width, shape") {
  ParamStore<double> store;
  store.add("w", 2, 2);
  const char* path = "ckpt_err.bin";
  save_checkpoint(path, store);

  ParamStore<float> wrong_width;
  wrong_width.add("w", 2, 2);
  CHECK_THROWS_WITH_AS(load_checkpoint(path, wrong_width),
                       "checkpoint scalar width 64 does not match model "
                       "scalar width 32",
                       std::runtime_error);

  ParamStore<double> wrong_shape;
  wrong_shape.add("w", 2, 3);
  CHECK_THROWS_AS(load_checkpoint(path, wrong_shape), std::runtime_error);

  {
    std::ofstream os(path, std::ios::binary);
    os << "NOTMAGIC garbage";
  }
  ParamStore<double> any;
  any.add("w", 2, 2);
  CHECK_THROWS_AS(load_checkpoint(path, any), std::runtime_error);
  CHECK_THROWS_AS(load_checkpoint("no_such_file.bin", any), std::runtime_error);
  std::remove(path);
}

TEST_CASE("rng determinism and splitting") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  Rng base(7);
  Rng s1 = base.split(1);
  Rng s2 = base.split(2);
  Rng s1_again = Rng(7).split(1);
  bool all_equal = true;
  for (int i = 0; i < 50; ++i) {
    double x = s1.uniform();
    if (x != s1_again.uniform()) all_equal = false;
    if (x == s2.uniform()) all_equal = false;  // streams should differ
  }
  CHECK(all_equal);

  // uniform_int stays in range and hits every bucket eventually
  Rng c(3);
  std::vector<int> seen(5, 0);
  for (int i = 0; i < 500; ++i) {
    int v = c.uniform_int(5);
    REQUIRE(v >= 0);
    REQUIRE(v < 5);
    seen[v]++;
  }
  for (int k = 0; k < 5; ++k) CHECK(seen[k] > 0);

  // normals have roughly the right first two moments
  Rng d(11);
  double sum = 0, sq = 0;
  const int N = 20000;
  for (int i = 0; i < N; ++i) {
    double x = d.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(sum / N == doctest::Approx(0.0).epsilon(0.05));
  CHECK(sq / N == doctest::Approx(1.0).epsilon(0.05));
}

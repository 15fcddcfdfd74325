#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>

#include "iaca/metrics.hpp"
#include "iaca/network.hpp"
#include "iaca/seeding.hpp"
#include "test_support.hpp"

using namespace iaca;
using cd = std::complex<double>;

namespace {

FilterConfig small_filter(SensitivityMode mode = SensitivityMode::Reduced) {
  FilterConfig c;
  c.feedback_order = 2;
  c.feedforward_order = 2;
  c.mode = mode;
  return c;
}

std::vector<NodeStream> ar4_streams(std::size_t nodes, Eigen::Index length, std::uint64_t seed) {
  std::vector<NodeStream> out;
  for (std::size_t k = 0; k < nodes; ++k) {
    SignalSpec spec;
    spec.length = length;
    spec.seed = derive_seed(seed, 0, k, StreamTag::Signal);
    out.push_back(make_prediction_task(gen_ar4(spec)));
  }
  return out;
}

}  // namespace

TEST_CASE("prediction task pairs each sample with its predecessor") {
  Eigen::VectorXcd s(3);
  s << 1.0, 2.0, 3.0;
  const auto task = make_prediction_task(s);
  REQUIRE(task.input.size() == 2);
  CHECK(task.input(0) == cd(1.0));
  CHECK(task.desired(0) == cd(2.0));
  CHECK(task.input(1) == cd(2.0));
  CHECK(task.desired(1) == cd(3.0));
  CHECK_THROWS_AS(make_prediction_task(Eigen::VectorXcd::Ones(1)), InvalidInput);
}

TEST_CASE("a constant signal is predicted exactly by b0 = 1") {
  const auto task = make_prediction_task(Eigen::VectorXcd::Constant(50, cd(2.0, -1.0)));
  RingNetwork net(small_filter(), {task}, 0.0);
  WeightVector w(2, 2);
  w.b()(0) = 1.0;
  net.set_global_estimate(w);
  const auto record = iaca_iir_run(net, 49);
  CHECK(record.errors.isZero(0.0));
}

TEST_CASE("single-node incremental run equals standalone adaptation") {
  const auto streams = ar4_streams(1, 400, 7);
  RingNetwork net(small_filter(), streams, 1e-3);
  const auto record = iaca_iir_run(net, 399);

  FilterState<double> state(small_filter());
  WeightVector w(2, 2);
  for (Eigen::Index n = 0; n < 399; ++n) {
    const auto r = adapt_step(state, w, streams[0].input(n), streams[0].desired(n), 1e-3);
    REQUIRE(record.errors(n, 0) == r.error);
    w = r.weights;
  }
  CHECK(record.final_weights.front() == w);
  CHECK(net.global_estimate() == w);
}

TEST_CASE("zero step sizes freeze the estimate and give open-loop errors") {
  const auto streams = ar4_streams(3, 200, 8);
  RingNetwork net(small_filter(), streams, 0.0);
  std::mt19937_64 rng(1);
  const auto phi0 = test::random_weights(2, 2, rng);
  net.set_global_estimate(phi0);
  const auto record = iaca_iir_run(net, 199);
  CHECK(record.final_weights.front() == phi0);

  for (std::size_t k = 0; k < 3; ++k) {
    FilterState<double> open_loop(small_filter());
    for (Eigen::Index n = 0; n < 199; ++n) {
      const auto r = adapt_step(open_loop, phi0, streams[k].input(n), streams[k].desired(n), 0.0);
      REQUIRE(record.errors(n, static_cast<Eigen::Index>(k)) == r.error);
    }
  }
}

TEST_CASE("single-node incremental and non-cooperative runs are bit-identical") {
  for (auto mode : {SensitivityMode::Exact, SensitivityMode::Reduced}) {
    const auto streams = ar4_streams(1, 1000, 9);
    RingNetwork a(small_filter(mode), streams, 2e-3);
    RingNetwork b(small_filter(mode), streams, 2e-3);
    CHECK(iaca_iir_run(a, 999) == noncoop_run(b, 999));
  }
}

TEST_CASE("non-cooperative node trajectories do not depend on the network size") {
  const auto streams = ar4_streams(4, 500, 10);
  RingNetwork one(small_filter(), {streams[0]}, 1e-3);
  RingNetwork four(small_filter(), streams, 1e-3);
  const auto r1 = noncoop_run(one, 499);
  const auto r4 = noncoop_run(four, 499);
  CHECK(r1.errors.col(0) == r4.errors.col(0));
  CHECK(r1.final_weights[0] == r4.final_weights[0]);
  CHECK(r4.final_weights.size() == 4);
}

TEST_CASE("the estimate mutates exactly L times per time step") {
  const auto streams = ar4_streams(5, 100, 11);
  RingNetwork net(small_filter(), streams, 1e-3);
  std::map<Eigen::Index, std::vector<std::size_t>> visits;
  RunOptions opts;
  opts.on_update = [&](Eigen::Index n, std::size_t k, const WeightVector&) {
    visits[n].push_back(k);
  };
  const auto record = iaca_iir_run(net, 99, opts);
  CHECK(visits.size() == 99);
  for (const auto& [n, nodes] : visits) {
    CHECK(nodes == std::vector<std::size_t>{0, 1, 2, 3, 4});
  }
  CHECK(record.weight_updates == 99 * 5);
}

TEST_CASE("ring order is configurable") {
  const auto streams = ar4_streams(3, 100, 12);
  RingNetwork net(small_filter(), streams, 1e-3);
  net.set_order({2, 0, 1});
  std::vector<std::size_t> first_step;
  RunOptions opts;
  opts.on_update = [&](Eigen::Index n, std::size_t k, const WeightVector&) {
    if (n == 0) first_step.push_back(k);
  };
  iaca_iir_run(net, 10, opts);
  CHECK(first_step == std::vector<std::size_t>{2, 0, 1});
  CHECK_THROWS_AS(net.set_order({0, 0, 1}), InvalidInput);
  CHECK_THROWS_AS(net.set_order({0, 1}), InvalidInput);
}

TEST_CASE("ring order changes the final gain by less than 1 dB") {
  BatchConfig cfg;
  cfg.signal.length = 2000;
  cfg.mu = 1e-4;
  cfg.nodes = 10;
  cfg.filter = small_filter();
  std::vector<double> forward, shuffled;
  for (std::size_t rep = 0; rep < 20; ++rep) {
    const auto streams = build_node_streams(cfg, rep);
    RingNetwork a(cfg.filter, streams, cfg.mu);
    RingNetwork b(cfg.filter, streams, cfg.mu);
    std::vector<std::size_t> order(10);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), std::mt19937_64(rep));
    b.set_order(order);
    forward.push_back(run_gain(a, iaca_iir_run(a, 1999)).gain_db);
    shuffled.push_back(run_gain(b, iaca_iir_run(b, 1999)).gain_db);
  }
  const double diff = mean_and_std(forward).first - mean_and_std(shuffled).first;
  CHECK(std::abs(diff) < 1.0);
}

TEST_CASE("white noise is not predictable") {
  std::vector<NodeStream> streams;
  for (std::uint64_t k = 0; k < 4; ++k) {
    NoiseSource src(0.0, 40 + k);
    streams.push_back(make_prediction_task(src.draw(4001)));
  }
  RingNetwork net(small_filter(), streams, 1e-4);
  const auto record = iaca_iir_run(net, 4000);
  CHECK(run_gain(net, record).gain_db < 0.2);
}

TEST_CASE("runs reject bad inputs") {
  const auto streams = ar4_streams(2, 50, 13);
  RingNetwork net(small_filter(), streams, 1e-3);
  CHECK_THROWS_AS(iaca_iir_run(net, 50), InvalidInput);
  CHECK_THROWS_AS(noncoop_run(net, 1000), InvalidInput);
  CHECK_THROWS_AS(net.set_step_sizes(Eigen::VectorXd::Constant(2, -1.0)), InvalidInput);
  CHECK_THROWS_AS(net.set_step_sizes(Eigen::VectorXd::Constant(3, 1.0)), InvalidInput);
  CHECK_THROWS_AS(net.set_global_estimate(WeightVector(3, 2)), InvalidInput);
  CHECK_THROWS_AS(RingNetwork(small_filter(), {}, 1e-3), InvalidInput);
  auto uneven = streams;
  uneven[1].input.conservativeResize(10);
  uneven[1].desired.conservativeResize(10);
  CHECK_THROWS_AS(RingNetwork(small_filter(), uneven, 1e-3), InvalidInput);
}

TEST_CASE("per-node step sizes are honoured") {
  const auto streams = ar4_streams(2, 100, 14);
  RingNetwork net(small_filter(), streams, 1e-3);
  Eigen::VectorXd mu(2);
  mu << 1e-3, 0.0;
  net.set_step_sizes(mu);
  std::vector<bool> changed;
  RunOptions opts;
  WeightVector last = net.global_estimate();
  opts.on_update = [&](Eigen::Index, std::size_t k, const WeightVector& w) {
    if (k == 1) changed.push_back(!(w == last));
    last = w;
  };
  iaca_iir_run(net, 99, opts);
  CHECK(std::none_of(changed.begin(), changed.end(), [](bool c) { return c; }));
}

TEST_CASE("divergence events are totalled in the record") {
  FilterConfig c = small_filter();
  c.divergence_threshold = 50.0;
  const auto streams = ar4_streams(2, 300, 15);
  RingNetwork net(c, streams, 0.5);
  const auto record = iaca_iir_run(net, 299);
  CHECK(record.divergence_events > 0);
  CHECK(record.errors.allFinite());
}

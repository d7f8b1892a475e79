#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "vanetsim/core/engine.hpp"
#include "vanetsim/core/rng.hpp"

using namespace vanetsim;

namespace {
struct Tag {
  int value = 0;
};
}  // namespace

TEST_CASE("engine delivers events in time order with FIFO tie break") {
  Engine<Tag> eng;
  eng.schedule(2.0, 0, Tag{20});
  eng.schedule(1.0, 0, Tag{10});
  eng.schedule(2.0, 0, Tag{21});
  eng.schedule(0.5, 0, Tag{5});
  std::vector<int> seen;
  eng.run_until(10.0, [&](SimTime, NodeId, Tag& t) { seen.push_back(t.value); });
  CHECK(seen == std::vector<int>{5, 10, 20, 21});
  CHECK(eng.now() == 10.0);
  CHECK(eng.processed() == 4);
}

TEST_CASE("engine refuses to schedule into the past") {
  Engine<Tag> eng;
  eng.schedule(1.0, 0, Tag{});
  eng.run_until(5.0, [](SimTime, NodeId, Tag&) {});
  CHECK_THROWS_AS(eng.schedule(4.9, 0, Tag{}), SchedulingInPast);
  CHECK_THROWS_AS(eng.schedule(std::nan(""), 0, Tag{}), SchedulingInPast);
  CHECK_NOTHROW(eng.schedule(5.0, 0, Tag{}));
}

TEST_CASE("engine cancellation is lazy but effective") {
  Engine<Tag> eng;
  const auto h = eng.schedule(1.0, 0, Tag{1});
  eng.schedule(2.0, 0, Tag{2});
  eng.cancel(h);
  std::vector<int> seen;
  eng.run_until(3.0, [&](SimTime, NodeId, Tag& t) { seen.push_back(t.value); });
  CHECK(seen == std::vector<int>{2});
  CHECK(eng.processed() == 1);
}

TEST_CASE("engine stops at the horizon and leaves later events queued") {
  Engine<Tag> eng;
  eng.schedule(1.0, 0, Tag{1});
  eng.schedule(7.0, 0, Tag{7});
  std::size_t n = eng.run_until(5.0, [](SimTime, NodeId, Tag&) {});
  CHECK(n == 1);
  CHECK(!eng.empty());
  n = eng.run_until(8.0, [](SimTime, NodeId, Tag&) {});
  CHECK(n == 1);
  CHECK(eng.empty());
}

TEST_CASE("trace hash is reproducible and order sensitive") {
  const auto run = [](bool swapped) {
    Engine<Tag> eng;
    if (swapped) {
      eng.schedule(2.0, 0, Tag{});
      eng.schedule(1.0, 0, Tag{});
    } else {
      eng.schedule(1.0, 0, Tag{});
      eng.schedule(2.0, 0, Tag{});
    }
    eng.run_until(3.0, [](SimTime, NodeId, Tag&) {});
    return eng.trace_hash();
  };
  CHECK(run(false) == run(false));
  // Swapping insertion swaps seq numbers, so the processed order differs.
  CHECK(run(false) != run(true));
}

TEST_CASE("named streams are decorrelated and reproducible") {
  RngStream a(42, "alpha");
  RngStream a2(42, "alpha");
  RngStream b(42, "beta");
  RngStream c(43, "alpha");
  std::vector<std::uint64_t> xs, ys;
  bool all_equal_b = true, all_equal_c = true;
  for (int i = 0; i < 64; ++i) {
    const auto x = a.next_u64();
    CHECK(x == a2.next_u64());
    all_equal_b = all_equal_b && (x == b.next_u64());
    all_equal_c = all_equal_c && (x == c.next_u64());
  }
  CHECK(!all_equal_b);
  CHECK(!all_equal_c);
}

TEST_CASE("fnv1a matches the published reference values") {
  CHECK(RngStream::fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(RngStream::fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(RngStream::fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("uniform01 stays in the half open unit interval") {
  RngStream rng(7, "u01");
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
  CHECK(sum / n == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("uniform range requires a < b") {
  RngStream rng(7, "u");
  CHECK_THROWS_AS(rng.uniform(1.0, 1.0), InvalidDistParams);
  CHECK_THROWS_AS(rng.uniform(2.0, 1.0), InvalidDistParams);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-3.0, 5.0);
    REQUIRE(x >= -3.0);
    REQUIRE(x < 5.0);
  }
}

TEST_CASE("uniform_int covers both endpoints") {
  RngStream rng(11, "ui");
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(rng.uniform_int(3, 7));
  CHECK(seen == std::set<std::uint32_t>{3, 4, 5, 6, 7});
  CHECK(rng.uniform_int(9, 9) == 9);
  CHECK_THROWS_AS(rng.uniform_int(5, 4), InvalidDistParams);
}

TEST_CASE("normal moments match the requested mean and variance") {
  RngStream rng(3, "norm");
  const double mean = -4.0, variance = 9.0;
  const int n = 200000;
  double sum = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(mean, variance);
    sum += x;
    ss += x * x;
  }
  const double m = sum / n;
  const double v = ss / n - m * m;
  CHECK(m == Catch::Approx(mean).margin(0.05));
  CHECK(v == Catch::Approx(variance).margin(0.15));
  CHECK_THROWS_AS(rng.normal(0.0, 0.0), InvalidDistParams);
  CHECK_THROWS_AS(rng.normal(0.0, -1.0), InvalidDistParams);
}

TEST_CASE("gamma moments match shape times scale") {
  RngStream rng(5, "gam");
  for (const double shape : {0.6, 1.0, 1.5, 4.2}) {
    const double scale = 2.5;
    const int n = 120000;
    double sum = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.gamma(shape, scale);
      REQUIRE(x >= 0.0);
      sum += x;
      ss += x * x;
    }
    const double m = sum / n;
    const double v = ss / n - m * m;
    CHECK(m == Catch::Approx(shape * scale).epsilon(0.02));
    CHECK(v == Catch::Approx(shape * scale * scale).epsilon(0.06));
  }
  CHECK_THROWS_AS(rng.gamma(0.0, 1.0), InvalidDistParams);
  CHECK_THROWS_AS(rng.gamma(1.0, 0.0), InvalidDistParams);
}

TEST_CASE("exponential mean is the reciprocal rate") {
  RngStream rng(9, "exp");
  const double rate = 0.25;
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.exponential(rate);
    REQUIRE(x >= 0.0);
    sum += x;
  }
  CHECK(sum / n == Catch::Approx(1.0 / rate).epsilon(0.02));
  CHECK_THROWS_AS(rng.exponential(0.0), InvalidDistParams);
}

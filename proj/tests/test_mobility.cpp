#include <algorithm>
#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace vanetsim;

TEST_CASE("highway placement respects lanes, bounds, and headings") {
  HighwayConfig cfg;
  RngStream rng(1, "topology");
  const auto nodes = build_highway(cfg, 25, 15.0, rng);
  REQUIRE(nodes.size() == 25);
  for (const auto& n : nodes) {
    CHECK(n.lane_index == n.node_id % cfg.lanes);
    CHECK(n.position.x >= 0.0);
    CHECK(n.position.x < cfg.length_m);
    CHECK(n.position.y == cfg.lane_center_y(n.lane_index));
    CHECK(n.speed_mps == 15.0);
    CHECK(n.heading == cfg.heading_for_lane(n.lane_index));
  }
  // Four lanes split two by two between the directions.
  CHECK(cfg.heading_for_lane(0) == +1);
  CHECK(cfg.heading_for_lane(1) == +1);
  CHECK(cfg.heading_for_lane(2) == -1);
  CHECK(cfg.heading_for_lane(3) == -1);
}

TEST_CASE("highway rejects degenerate setups") {
  HighwayConfig cfg;
  RngStream rng(1, "topology");
  CHECK_THROWS_AS(build_highway(cfg, 1, 10.0, rng), InvalidConfig);
  CHECK_THROWS_AS(build_highway(cfg, 5, -1.0, rng), InvalidConfig);
  cfg.length_m = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
}

TEST_CASE("closed form position matches iterated stepping") {
  HighwayConfig cfg;
  RngStream rng(4, "topology");
  const auto nodes = build_highway(cfg, 8, 22.0, rng);
  for (const auto& n : nodes) {
    NodeKinematics walked = n;
    const double dt = 0.25;
    for (int i = 0; i < 400; ++i) walked = step_kinematics(walked, dt, cfg);
    const Position direct = position_at(n, 400 * dt, cfg);
    CHECK(walked.position.x == Catch::Approx(direct.x).margin(1e-6));
    CHECK(walked.position.y == direct.y);
  }
}

TEST_CASE("wraparound keeps coordinates on the strip") {
  CHECK(wrap_coordinate(1250.0, 1000.0) == Catch::Approx(250.0));
  CHECK(wrap_coordinate(-10.0, 1000.0) == Catch::Approx(990.0));
  HighwayConfig cfg;
  NodeKinematics n;
  n.position = {990.0, 2.5};
  n.speed_mps = 20.0;
  n.heading = +1;
  const auto stepped = step_kinematics(n, 1.0, cfg);
  CHECK(stepped.position.x == Catch::Approx(10.0));
  cfg.wraparound = false;
  const auto open = step_kinematics(n, 1.0, cfg);
  CHECK(open.position.x == Catch::Approx(1010.0));
}

TEST_CASE("ring distance takes the short way around") {
  HighwayConfig cfg;
  const Position a{10.0, 0.0};
  const Position b{990.0, 0.0};
  CHECK(distance(a, b) == Catch::Approx(980.0));
  CHECK(ring_distance(a, b, cfg) == Catch::Approx(20.0));
  cfg.wraparound = false;
  CHECK(ring_distance(a, b, cfg) == Catch::Approx(980.0));
}

TEST_CASE("distance pdf is the stated bell curve") {
  GaussianDistanceModel m{100.0, 400.0};
  // Peak value 1/sqrt(2 pi theta) at r = mean.
  CHECK(distance_pdf(m, 100.0) ==
        Catch::Approx(1.0 / std::sqrt(2.0 * M_PI * 400.0)).epsilon(1e-12));
  CHECK(distance_pdf(m, 80.0) == Catch::Approx(distance_pdf(m, 120.0)));
  CHECK(distance_pdf(m, 0.0) < distance_pdf(m, 60.0));
  GaussianDistanceModel bad{100.0, 0.0};
  CHECK_THROWS_AS(distance_pdf(bad, 1.0), NonPositiveVariance);
}

TEST_CASE("distance cdf agrees with the error function oracle") {
  RngStream rng(17, "cdf-oracle");
  for (int trial = 0; trial < 25; ++trial) {
    GaussianDistanceModel m;
    m.mean_m = rng.uniform(40.0, 300.0);
    const double sigma = rng.uniform(1.0, m.mean_m / 8.0);
    m.variance_m2 = sigma * sigma;
    for (int k = 0; k < 4; ++k) {
      const double r = rng.uniform(0.0, m.mean_m + 6.0 * sigma);
      const double got = distance_cdf(m, r);
      const double want = labtest::gaussian_cdf_oracle(m, r);
      CHECK(std::fabs(got - want) <= 1e-9);
    }
  }
}

TEST_CASE("distance cdf rejects negative radii and handles r = 0") {
  GaussianDistanceModel m{50.0, 100.0};
  CHECK(distance_cdf(m, 0.0) == 0.0);
  CHECK_THROWS_AS(distance_cdf(m, -1.0), NegativeRadius);
  GaussianDistanceModel bad{50.0, -4.0};
  CHECK_THROWS_AS(distance_cdf(bad, 10.0), NonPositiveVariance);
}

TEST_CASE("normalization mass is unity away from the origin truncation") {
  GaussianDistanceModel far{200.0, 100.0};  // mean - 8 sigma = 120 > 0
  CHECK(normalization_mass(far) == Catch::Approx(1.0).margin(1e-6));
  // Half the bell sits below 0: the truncated mass is about one half.
  GaussianDistanceModel cut{0.0, 100.0};
  CHECK(normalization_mass(cut) == Catch::Approx(0.5).margin(1e-6));
}

TEST_CASE("efficiency is the cdf scaled to percent") {
  GaussianDistanceModel m{100.0, 400.0};
  for (const double r : {10.0, 50.0, 100.0, 180.0}) {
    CHECK(efficiency(m, r) == 100.0 * distance_cdf(m, r));
  }
}

TEST_CASE("gaussian fit recovers the generating parameters") {
  RngStream rng(23, "fit");
  std::vector<double> samples;
  const double mean = 120.0, variance = 225.0;
  for (int i = 0; i < 50000; ++i) samples.push_back(rng.normal(mean, variance));
  const auto fit = fit_gaussian(samples);
  CHECK(fit.mean_m == Catch::Approx(mean).margin(0.3));
  CHECK(fit.variance_m2 == Catch::Approx(variance).epsilon(0.03));
  const std::vector<double> tiny{1.0};
  CHECK_THROWS_AS(fit_gaussian(tiny), InsufficientSamples);
}

TEST_CASE("epoch trajectories feed the gaussian fit sensibly") {
  EpochModelParams p;
  p.epoch_rate = 2.0;
  p.speed_min_mps = 5.0;
  p.speed_max_mps = 15.0;
  p.heading_sigma_rad = 0.7;
  p.initial_distance_m = 100.0;
  p.cadence_s = 0.5;
  RngStream rng(31, "epochs");
  const auto samples = simulate_epochs(p, 200.0, rng);
  CHECK(samples.size() == 401);
  CHECK(samples.front() == 100.0);
  // The walk must actually move.
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  CHECK(*hi - *lo > 1.0);
  const auto fit = fit_gaussian(samples);
  CHECK(fit.variance_m2 > 0.0);
  EpochModelParams bad = p;
  bad.epoch_rate = 0.0;
  CHECK_THROWS_AS(simulate_epochs(bad, 10.0, rng), InvalidParams);
}

TEST_CASE("adaptive quadrature integrates smooth references") {
  const double got =
      integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(got == Catch::Approx(2.0).margin(1e-10));
  const double poly =
      integrate([](double x) { return 3.0 * x * x; }, -1.0, 2.0, 1e-12);
  CHECK(poly == Catch::Approx(9.0).margin(1e-9));
}

#include <catch2/catch_amalgamated.hpp>

#include "vanetsim/vanetsim.hpp"

TEST_CASE("two node scenario delivers traffic") {
  vanetsim::SimulationSetup setup;
  setup.n_nodes = 2;
  setup.n_flows = 1;
  setup.duration_s = 20.0;
  setup.speed_mps = 0.0;
  setup.highway.length_m = 100.0;
  vanetsim::Simulation sim(setup);
  const auto summary = sim.run();
  CHECK(summary.sent > 0);
  CHECK(summary.delivered > 0);
  CHECK(summary.delivered <= summary.sent);
}

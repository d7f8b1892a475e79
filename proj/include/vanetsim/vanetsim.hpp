#pragma once

// Umbrella header: the whole library in one include.

#include "vanetsim/core/engine.hpp"
#include "vanetsim/core/errors.hpp"
#include "vanetsim/core/rng.hpp"
#include "vanetsim/mac/mac.hpp"
#include "vanetsim/math/integrate.hpp"
#include "vanetsim/metrics/metrics.hpp"
#include "vanetsim/mobility/epochs.hpp"
#include "vanetsim/mobility/gaussian_model.hpp"
#include "vanetsim/mobility/highway.hpp"
#include "vanetsim/net/frame.hpp"
#include "vanetsim/phy/phy.hpp"
#include "vanetsim/routing/dsdv.hpp"
#include "vanetsim/routing/dymo.hpp"
#include "vanetsim/routing/messages.hpp"
#include "vanetsim/routing/olsr.hpp"
#include "vanetsim/routing/presets.hpp"
#include "vanetsim/routing/protocol.hpp"
#include "vanetsim/routing/table.hpp"
#include "vanetsim/scenario/analytics.hpp"
#include "vanetsim/scenario/config.hpp"
#include "vanetsim/scenario/report.hpp"
#include "vanetsim/scenario/run.hpp"
#include "vanetsim/sim/simulation.hpp"
#include "vanetsim/traffic/cbr.hpp"

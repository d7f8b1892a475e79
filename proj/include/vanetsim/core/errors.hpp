#pragma once

#include <stdexcept>
#include <string>

namespace vanetsim {

// Base class for every error the simulator raises on a violated contract.
// Modeled outcomes (queue drops, collisions, suppressed requests) are return
// values, not errors.
struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define VANETSIM_ERROR_TYPE(Name)        \
  struct Name : SimError {               \
    using SimError::SimError;            \
  };

// sim-core
VANETSIM_ERROR_TYPE(SchedulingInPast)
VANETSIM_ERROR_TYPE(InvalidDistParams)

// mobility
VANETSIM_ERROR_TYPE(InvalidConfig)
VANETSIM_ERROR_TYPE(NonPositiveVariance)
VANETSIM_ERROR_TYPE(NegativeRadius)
VANETSIM_ERROR_TYPE(InvalidParams)
VANETSIM_ERROR_TYPE(InsufficientSamples)

// phy-channel
VANETSIM_ERROR_TYPE(NonPositiveDistance)
VANETSIM_ERROR_TYPE(InvalidShape)

// routing
VANETSIM_ERROR_TYPE(InconsistentTopologySets)

// traffic-metrics
VANETSIM_ERROR_TYPE(NonPositiveDuration)
VANETSIM_ERROR_TYPE(NoDeliveredPackets)
VANETSIM_ERROR_TYPE(DuplicateDelivery)

// scenario
VANETSIM_ERROR_TYPE(ParseError)
VANETSIM_ERROR_TYPE(UnknownKey)
VANETSIM_ERROR_TYPE(OutOfRangeValue)
VANETSIM_ERROR_TYPE(IoError)

#undef VANETSIM_ERROR_TYPE

}  // namespace vanetsim

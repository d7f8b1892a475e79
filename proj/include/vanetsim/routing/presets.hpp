#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "vanetsim/core/errors.hpp"

namespace vanetsim {

struct DsdvParams {
  double periodic_update_interval_s = 15.0;
  double min_trigger_interval_s = 1.0;
  double settling_weight = 0.875;
  double full_dump_interval_s = 15.0;
  double neighbor_timeout_multiplier = 3.0;  // missed periodic updates before a link is dead

  void validate() const {
    if (!(periodic_update_interval_s > 0.0) || !(min_trigger_interval_s > 0.0))
      throw InvalidConfig("dsdv: intervals must be > 0");
    if (min_trigger_interval_s > periodic_update_interval_s)
      throw InvalidConfig("dsdv: trigger interval must not exceed periodic interval");
    if (!(settling_weight > 0.0 && settling_weight < 1.0))
      throw InvalidConfig("dsdv: settling weight must be in (0, 1)");
  }
};

struct OlsrParams {
  double hello_interval_s = 2.0;
  double tc_interval_s = 5.0;
  double neighbor_hold_time_s = 6.0;   // 3x hello
  double topology_hold_time_s = 15.0;  // 3x tc

  void validate() const {
    if (!(hello_interval_s > 0.0) || !(tc_interval_s > 0.0))
      throw InvalidConfig("olsr: intervals must be > 0");
    if (neighbor_hold_time_s < hello_interval_s ||
        topology_hold_time_s < tc_interval_s)
      throw InvalidConfig("olsr: hold times must cover at least one interval");
  }
};

struct DymoParams {
  double route_timeout_s = 5.0;
  double rreq_wait_time_s = 2.0;
  std::uint32_t rreq_tries = 3;
  double rreq_rate_limit_per_s = 10.0;
  std::uint32_t hop_limit = 16;

  void validate() const {
    if (!(route_timeout_s > 0.0) || !(rreq_wait_time_s > 0.0) ||
        !(rreq_rate_limit_per_s > 0.0))
      throw InvalidConfig("dymo: timeouts and rate limit must be > 0");
    if (rreq_tries < 1) throw InvalidConfig("dymo: need at least one RREQ try");
    if (hop_limit < 1) throw InvalidConfig("dymo: hop limit must be >= 1");
  }
};

enum class ProtocolName { DSDV, MOD_DSDV, OLSR, MOD_OLSR, DYMO, MOD_DYMO };

inline const char* to_string(ProtocolName p) {
  switch (p) {
    case ProtocolName::DSDV: return "DSDV";
    case ProtocolName::MOD_DSDV: return "MOD_DSDV";
    case ProtocolName::OLSR: return "OLSR";
    case ProtocolName::MOD_OLSR: return "MOD_OLSR";
    case ProtocolName::DYMO: return "DYMO";
    case ProtocolName::MOD_DYMO: return "MOD_DYMO";
  }
  return "?";
}

inline bool protocol_from_string(const std::string& s, ProtocolName& out) {
  if (s == "DSDV") out = ProtocolName::DSDV;
  else if (s == "MOD_DSDV") out = ProtocolName::MOD_DSDV;
  else if (s == "OLSR") out = ProtocolName::OLSR;
  else if (s == "MOD_OLSR") out = ProtocolName::MOD_OLSR;
  else if (s == "DYMO") out = ProtocolName::DYMO;
  else if (s == "MOD_DYMO") out = ProtocolName::MOD_DYMO;
  else return false;
  return true;
}

using ProtocolParams = std::variant<DsdvParams, OlsrParams, DymoParams>;

struct ProtocolPreset {
  ProtocolName name;
  ProtocolParams params;
};

// Base protocols carry their classic defaults.  The MOD variants move only
// the named knobs: MOD_DSDV spaces its trigger/periodic updates out
// (doubled), MOD_OLSR tightens HELLO/TC emission (halved), MOD_DYMO shortens
// the route lifetime, request wait and rate limit (halved).
inline ProtocolPreset preset_params(ProtocolName name) {
  switch (name) {
    case ProtocolName::DSDV:
      return {name, DsdvParams{}};
    case ProtocolName::MOD_DSDV: {
      DsdvParams p;
      p.periodic_update_interval_s = 30.0;
      p.min_trigger_interval_s = 2.0;
      p.full_dump_interval_s = 30.0;
      return {name, p};
    }
    case ProtocolName::OLSR:
      return {name, OlsrParams{}};
    case ProtocolName::MOD_OLSR: {
      OlsrParams p;
      p.hello_interval_s = 1.0;
      p.tc_interval_s = 2.5;
      p.neighbor_hold_time_s = 3.0;
      p.topology_hold_time_s = 7.5;
      return {name, p};
    }
    case ProtocolName::DYMO:
      return {name, DymoParams{}};
    case ProtocolName::MOD_DYMO: {
      DymoParams p;
      p.route_timeout_s = 2.5;
      p.rreq_wait_time_s = 1.0;
      p.rreq_rate_limit_per_s = 5.0;
      return {name, p};
    }
  }
  throw InvalidConfig("unknown protocol preset");
}

}  // namespace vanetsim

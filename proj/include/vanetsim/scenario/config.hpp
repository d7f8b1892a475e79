#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vanetsim/core/errors.hpp"
#include "vanetsim/sim/simulation.hpp"

namespace vanetsim {

// A fully resolved scenario: presets for the chosen MAC variant and protocol
// are materialized, then overrides applied on top.
struct ScenarioConfig {
  SimulationSetup sim;
};

namespace detail {

struct ConfigEntry {
  std::string key;  // dotted: section prefix + key name
  std::string value;
  int line = 0;
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<ConfigEntry> tokenize_config(const std::string& text) {
  std::vector<ConfigEntry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find_first_of("#;");
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("line " + std::to_string(line_no) +
                         ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ParseError("line " + std::to_string(line_no) + ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ParseError("line " + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    entries.push_back({std::move(key), std::move(value), line_no});
  }
  return entries;
}

inline double parse_double(const ConfigEntry& e) {
  try {
    std::size_t used = 0;
    const double v = std::stod(e.value, &used);
    if (used != e.value.size())
      throw ParseError("line " + std::to_string(e.line) + ": bad number '" +
                       e.value + "' for " + e.key);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(e.line) + ": bad number '" +
                     e.value + "' for " + e.key);
  }
}

inline std::uint64_t parse_uint(const ConfigEntry& e) {
  try {
    std::size_t used = 0;
    if (!e.value.empty() && e.value.front() == '-') throw std::invalid_argument("");
    const std::uint64_t v = std::stoull(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(e.line) + ": bad integer '" +
                     e.value + "' for " + e.key);
  }
}

inline bool parse_bool(const ConfigEntry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ParseError("line " + std::to_string(e.line) + ": bad boolean '" +
                   e.value + "' for " + e.key);
}

[[noreturn]] inline void out_of_range(const ConfigEntry& e, const char* what) {
  throw OutOfRangeValue("line " + std::to_string(e.line) + ": " + e.key + " " +
                        what);
}

inline double positive_double(const ConfigEntry& e) {
  const double v = parse_double(e);
  if (!(v > 0.0)) out_of_range(e, "must be > 0");
  return v;
}

inline double nonnegative_double(const ConfigEntry& e) {
  const double v = parse_double(e);
  if (!(v >= 0.0)) out_of_range(e, "must be >= 0");
  return v;
}

// "80:1.5,inf:0.75" -> ascending breakpoint segments.
inline std::vector<NakagamiParams::Segment> parse_segments(const ConfigEntry& e) {
  std::vector<NakagamiParams::Segment> segs;
  std::istringstream in(e.value);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    const std::size_t colon = tok.find(':');
    if (colon == std::string::npos)
      throw ParseError("line " + std::to_string(e.line) +
                       ": expected d:value segment, got '" + tok + "'");
    const std::string d_str = trim(tok.substr(0, colon));
    const std::string v_str = trim(tok.substr(colon + 1));
    NakagamiParams::Segment seg;
    try {
      seg.max_distance_m = d_str == "inf"
                               ? std::numeric_limits<double>::infinity()
                               : std::stod(d_str);
      seg.value = std::stod(v_str);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(e.line) +
                       ": bad segment '" + tok + "'");
    }
    segs.push_back(seg);
  }
  if (segs.empty())
    throw ParseError("line " + std::to_string(e.line) + ": empty segment list");
  return segs;
}

// Shortest decimal that parses back to exactly the same double.
inline std::string format_double(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::ostringstream out;
    out << static_cast<long long>(v);
    return out.str();
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::ostringstream out;
    out.precision(prec);
    out << v;
    if (std::stod(out.str()) == v) return out.str();
  }
  return std::to_string(v);
}

}  // namespace detail

inline const char* to_string(MacKind k) {
  return k == MacKind::Dot11 ? "802.11" : "802.11p";
}

inline bool mac_from_string(std::string_view s, MacKind& out) {
  if (s == "802.11") {
    out = MacKind::Dot11;
    return true;
  }
  if (s == "802.11p") {
    out = MacKind::Dot11p;
    return true;
  }
  return false;
}

// Resolved defaults: every preset materialized so a dump is self-contained.
inline ScenarioConfig default_config() {
  ScenarioConfig cfg;
  cfg.sim.phy = phy_preset(PhyKind::Dot11);
  cfg.sim.mac = mac_preset(MacKind::Dot11);
  cfg.sim.nakagami = nakagami_preset(*cfg.sim.phy);
  cfg.sim.protocol_params = preset_params(cfg.sim.protocol).params;
  return cfg;
}

namespace detail {

// Applies entries onto a config in two phases: scenario-level keys first (so
// the MAC variant and protocol are known), then presets, then module
// overrides in file order.
inline ScenarioConfig build_config(const std::vector<ConfigEntry>& entries) {
  ScenarioConfig cfg;
  SimulationSetup& sim = cfg.sim;

  auto is_top = [](const std::string& k) {
    return k.find('.') == std::string::npos;
  };

  for (const ConfigEntry& e : entries) {
    if (!is_top(e.key)) continue;
    if (e.key == "protocol") {
      if (!protocol_from_string(e.value, sim.protocol))
        out_of_range(e, "is not a known protocol preset");
    } else if (e.key == "mac") {
      if (!mac_from_string(e.value, sim.mac_kind))
        out_of_range(e, "must be 802.11 or 802.11p");
    } else if (e.key == "n_nodes") {
      const std::uint64_t v = parse_uint(e);
      if (v < 2) out_of_range(e, "must be >= 2");
      sim.n_nodes = static_cast<std::uint32_t>(v);
    } else if (e.key == "speed_mps") {
      sim.speed_mps = nonnegative_double(e);
    } else if (e.key == "sim_time") {
      sim.duration_s = positive_double(e);
    } else if (e.key == "packet_bytes") {
      const std::uint64_t v = parse_uint(e);
      if (v == 0) out_of_range(e, "must be >= 1");
      sim.payload_bytes = static_cast<std::uint32_t>(v);
    } else if (e.key == "packet_interval") {
      sim.cbr_interval_s = positive_double(e);
    } else if (e.key == "n_flows") {
      sim.n_flows = static_cast<std::uint32_t>(parse_uint(e));
    } else if (e.key == "seed") {
      sim.seed = parse_uint(e);
    } else if (e.key == "flow_start_min") {
      sim.flow_start_min_s = nonnegative_double(e);
    } else if (e.key == "flow_start_max") {
      sim.flow_start_max_s = nonnegative_double(e);
    } else if (e.key == "ttl") {
      const std::uint64_t v = parse_uint(e);
      if (v == 0) out_of_range(e, "must be >= 1");
      sim.data_ttl = static_cast<std::uint32_t>(v);
    } else if (e.key == "queue_capacity") {
      const std::uint64_t v = parse_uint(e);
      if (v == 0) out_of_range(e, "must be >= 1");
      sim.queue_capacity = static_cast<std::uint32_t>(v);
    } else if (e.key == "discovery_buffer") {
      sim.discovery_buffer = static_cast<std::uint32_t>(parse_uint(e));
    } else {
      throw UnknownKey("line " + std::to_string(e.line) + ": unknown key '" +
                       e.key + "'");
    }
  }

  PhyParams phy = phy_preset(sim.mac_kind == MacKind::Dot11 ? PhyKind::Dot11
                                                            : PhyKind::Dot11p);
  MacParams mac = mac_preset(sim.mac_kind);
  NakagamiParams naka;  // derived from phy after phy overrides, unless set
  DsdvParams dsdv = std::get<DsdvParams>(preset_params(
      sim.protocol == ProtocolName::MOD_DSDV ? ProtocolName::MOD_DSDV
                                             : ProtocolName::DSDV).params);
  OlsrParams olsr = std::get<OlsrParams>(preset_params(
      sim.protocol == ProtocolName::MOD_OLSR ? ProtocolName::MOD_OLSR
                                             : ProtocolName::OLSR).params);
  DymoParams dymo = std::get<DymoParams>(preset_params(
      sim.protocol == ProtocolName::MOD_DYMO ? ProtocolName::MOD_DYMO
                                             : ProtocolName::DYMO).params);
  std::vector<ConfigEntry> naka_entries;

  for (const ConfigEntry& e : entries) {
    if (is_top(e.key)) continue;
    const std::string& k = e.key;
    if (k == "highway.length") {
      sim.highway.length_m = positive_double(e);
    } else if (k == "highway.lanes") {
      const std::uint64_t v = parse_uint(e);
      if (v == 0) out_of_range(e, "must be >= 1");
      sim.highway.lanes = static_cast<std::uint32_t>(v);
    } else if (k == "highway.lane_width") {
      sim.highway.lane_width_m = positive_double(e);
    } else if (k == "highway.wraparound") {
      sim.highway.wraparound = parse_bool(e);
    } else if (k == "phy.carrier_freq_hz") {
      phy.carrier_freq_hz = positive_double(e);
    } else if (k == "phy.tx_power_dbm") {
      phy.tx_power_dbm = parse_double(e);
    } else if (k == "phy.data_rate_bps") {
      phy.data_rate_bps = positive_double(e);
    } else if (k == "phy.rx_threshold_dbm") {
      phy.rx_threshold_dbm = parse_double(e);
    } else if (k == "phy.cs_threshold_dbm") {
      phy.cs_threshold_dbm = parse_double(e);
    } else if (k == "phy.noise_floor_dbm") {
      phy.noise_floor_dbm = parse_double(e);
    } else if (k == "mac.slot_time") {
      mac.slot_time_s = positive_double(e);
    } else if (k == "mac.sifs") {
      mac.sifs_s = positive_double(e);
    } else if (k == "mac.difs") {
      mac.difs_s = positive_double(e);
    } else if (k == "mac.cw_min") {
      mac.cw_min = static_cast<std::uint32_t>(parse_uint(e));
    } else if (k == "mac.cw_max") {
      mac.cw_max = static_cast<std::uint32_t>(parse_uint(e));
    } else if (k == "mac.preamble_plus_header_time") {
      mac.preamble_plus_header_time_s = positive_double(e);
    } else if (k == "mac.ack_timeout") {
      mac.ack_timeout_s = positive_double(e);
    } else if (k == "mac.retry_limit") {
      const std::uint64_t v = parse_uint(e);
      if (v == 0) out_of_range(e, "must be >= 1");
      mac.retry_limit = static_cast<std::uint32_t>(v);
    } else if (k.rfind("nakagami.", 0) == 0) {
      naka_entries.push_back(e);  // applied after phy is final
    } else if (k == "routing.dsdv.periodic_update_interval") {
      dsdv.periodic_update_interval_s = positive_double(e);
    } else if (k == "routing.dsdv.min_trigger_interval") {
      dsdv.min_trigger_interval_s = positive_double(e);
    } else if (k == "routing.dsdv.settling_weight") {
      const double v = parse_double(e);
      if (!(v > 0.0 && v < 1.0)) out_of_range(e, "must be in (0, 1)");
      dsdv.settling_weight = v;
    } else if (k == "routing.dsdv.full_dump_interval") {
      dsdv.full_dump_interval_s = positive_double(e);
    } else if (k == "routing.dsdv.neighbor_timeout_multiplier") {
      dsdv.neighbor_timeout_multiplier = positive_double(e);
    } else if (k == "routing.olsr.hello_interval") {
      olsr.hello_interval_s = positive_double(e);
    } else if (k == "routing.olsr.tc_interval") {
      olsr.tc_interval_s = positive_double(e);
    } else if (k == "routing.olsr.neighbor_hold_time") {
      olsr.neighbor_hold_time_s = positive_double(e);
    } else if (k == "routing.olsr.topology_hold_time") {
      olsr.topology_hold_time_s = positive_double(e);
    } else if (k == "routing.dymo.route_timeout") {
      dymo.route_timeout_s = positive_double(e);
    } else if (k == "routing.dymo.rreq_wait_time") {
      dymo.rreq_wait_time_s = positive_double(e);
    } else if (k == "routing.dymo.rreq_tries") {
      const std::uint64_t v = parse_uint(e);
      if (v == 0) out_of_range(e, "must be >= 1");
      dymo.rreq_tries = static_cast<std::uint32_t>(v);
    } else if (k == "routing.dymo.rreq_rate_limit") {
      dymo.rreq_rate_limit_per_s = positive_double(e);
    } else if (k == "routing.dymo.hop_limit") {
      const std::uint64_t v = parse_uint(e);
      if (v == 0) out_of_range(e, "must be >= 1");
      dymo.hop_limit = static_cast<std::uint32_t>(v);
    } else {
      throw UnknownKey("line " + std::to_string(e.line) + ": unknown key '" +
                       e.key + "'");
    }
  }

  naka = nakagami_preset(phy);
  for (const ConfigEntry& e : naka_entries) {
    const std::string& k = e.key;
    if (k == "nakagami.ref_distance") {
      naka.ref_distance_m = positive_double(e);
    } else if (k == "nakagami.ref_loss_db") {
      naka.ref_loss_db = parse_double(e);
    } else if (k == "nakagami.shape") {
      naka.shape_m = parse_segments(e);
    } else if (k == "nakagami.path_loss_exponent") {
      naka.path_loss_exponent = parse_segments(e);
    } else {
      throw UnknownKey("line " + std::to_string(e.line) + ": unknown key '" +
                       e.key + "'");
    }
  }

  if (sim.flow_start_max_s < sim.flow_start_min_s)
    throw OutOfRangeValue("flow_start_max must be >= flow_start_min");

  sim.phy = phy;
  sim.mac = mac;
  sim.nakagami = naka;
  switch (sim.protocol) {
    case ProtocolName::DSDV:
    case ProtocolName::MOD_DSDV:
      sim.protocol_params = dsdv;
      break;
    case ProtocolName::OLSR:
    case ProtocolName::MOD_OLSR:
      sim.protocol_params = olsr;
      break;
    case ProtocolName::DYMO:
    case ProtocolName::MOD_DYMO:
      sim.protocol_params = dymo;
      break;
  }

  try {
    sim.validate();
    sim.phy->validate();
    sim.mac->validate();
    sim.nakagami->validate();
  } catch (const InvalidConfig& err) {
    throw OutOfRangeValue(err.what());
  }
  return cfg;
}

}  // namespace detail

inline ScenarioConfig parse_config(const std::string& text) {
  return detail::build_config(detail::tokenize_config(text));
}

// Command-line "--set key=value" overrides, applied on top of a parsed file
// by re-running the build with the extra entries appended.
inline ScenarioConfig parse_config_with_overrides(
    const std::string& text, const std::vector<std::string>& overrides) {
  auto entries = detail::tokenize_config(text);
  int pseudo_line = 100000;
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos)
      throw ParseError("override '" + ov + "': expected key=value");
    detail::ConfigEntry e;
    e.key = detail::trim(ov.substr(0, eq));
    e.value = detail::trim(ov.substr(eq + 1));
    e.line = ++pseudo_line;
    entries.push_back(std::move(e));
  }
  return detail::build_config(entries);
}

inline std::string dump_config(const ScenarioConfig& cfg) {
  using detail::format_double;
  const SimulationSetup& s = cfg.sim;
  const PhyParams& phy = s.phy ? *s.phy : phy_preset(PhyKind::Dot11);
  const MacParams& mac = s.mac ? *s.mac : mac_preset(s.mac_kind);
  const NakagamiParams& naka = s.nakagami ? *s.nakagami : nakagami_preset(phy);

  std::ostringstream out;
  out << "protocol = " << to_string(s.protocol) << '\n'
      << "mac = " << to_string(s.mac_kind) << '\n'
      << "n_nodes = " << s.n_nodes << '\n'
      << "speed_mps = " << format_double(s.speed_mps) << '\n'
      << "sim_time = " << format_double(s.duration_s) << '\n'
      << "packet_bytes = " << s.payload_bytes << '\n'
      << "packet_interval = " << format_double(s.cbr_interval_s) << '\n'
      << "n_flows = " << s.n_flows << '\n'
      << "seed = " << s.seed << '\n'
      << "flow_start_min = " << format_double(s.flow_start_min_s) << '\n'
      << "flow_start_max = " << format_double(s.flow_start_max_s) << '\n'
      << "ttl = " << s.data_ttl << '\n'
      << "queue_capacity = " << s.queue_capacity << '\n'
      << "discovery_buffer = " << s.discovery_buffer << '\n'
      << '\n'
      << "[highway]\n"
      << "length = " << format_double(s.highway.length_m) << '\n'
      << "lanes = " << s.highway.lanes << '\n'
      << "lane_width = " << format_double(s.highway.lane_width_m) << '\n'
      << "wraparound = " << (s.highway.wraparound ? "true" : "false") << '\n'
      << '\n'
      << "[phy]\n"
      << "carrier_freq_hz = " << format_double(phy.carrier_freq_hz) << '\n'
      << "tx_power_dbm = " << format_double(phy.tx_power_dbm) << '\n'
      << "data_rate_bps = " << format_double(phy.data_rate_bps) << '\n'
      << "rx_threshold_dbm = " << format_double(phy.rx_threshold_dbm) << '\n'
      << "cs_threshold_dbm = " << format_double(phy.cs_threshold_dbm) << '\n'
      << "noise_floor_dbm = " << format_double(phy.noise_floor_dbm) << '\n'
      << '\n'
      << "[mac]\n"
      << "slot_time = " << format_double(mac.slot_time_s) << '\n'
      << "sifs = " << format_double(mac.sifs_s) << '\n'
      << "difs = " << format_double(mac.difs_s) << '\n'
      << "cw_min = " << mac.cw_min << '\n'
      << "cw_max = " << mac.cw_max << '\n'
      << "preamble_plus_header_time = "
      << format_double(mac.preamble_plus_header_time_s) << '\n'
      << "ack_timeout = " << format_double(mac.ack_timeout_s) << '\n'
      << "retry_limit = " << mac.retry_limit << '\n'
      << '\n'
      << "[nakagami]\n"
      << "ref_distance = " << format_double(naka.ref_distance_m) << '\n'
      << "ref_loss_db = " << format_double(naka.ref_loss_db) << '\n';
  auto dump_segments = [&](const char* name,
                           const std::vector<NakagamiParams::Segment>& segs) {
    out << name << " = ";
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (i) out << ',';
      if (std::isinf(segs[i].max_distance_m))
        out << "inf";
      else
        out << format_double(segs[i].max_distance_m);
      out << ':' << format_double(segs[i].value);
    }
    out << '\n';
  };
  dump_segments("shape", naka.shape_m);
  dump_segments("path_loss_exponent", naka.path_loss_exponent);
  out << '\n';

  const ProtocolParams params =
      s.protocol_params ? *s.protocol_params : preset_params(s.protocol).params;
  if (const auto* p = std::get_if<DsdvParams>(&params)) {
    out << "[routing.dsdv]\n"
        << "periodic_update_interval = "
        << format_double(p->periodic_update_interval_s) << '\n'
        << "min_trigger_interval = " << format_double(p->min_trigger_interval_s)
        << '\n'
        << "settling_weight = " << format_double(p->settling_weight) << '\n'
        << "full_dump_interval = " << format_double(p->full_dump_interval_s)
        << '\n'
        << "neighbor_timeout_multiplier = "
        << format_double(p->neighbor_timeout_multiplier) << '\n';
  } else if (const auto* p = std::get_if<OlsrParams>(&params)) {
    out << "[routing.olsr]\n"
        << "hello_interval = " << format_double(p->hello_interval_s) << '\n'
        << "tc_interval = " << format_double(p->tc_interval_s) << '\n'
        << "neighbor_hold_time = " << format_double(p->neighbor_hold_time_s)
        << '\n'
        << "topology_hold_time = " << format_double(p->topology_hold_time_s)
        << '\n';
  } else if (const auto* p = std::get_if<DymoParams>(&params)) {
    out << "[routing.dymo]\n"
        << "route_timeout = " << format_double(p->route_timeout_s) << '\n'
        << "rreq_wait_time = " << format_double(p->rreq_wait_time_s) << '\n'
        << "rreq_tries = " << p->rreq_tries << '\n'
        << "rreq_rate_limit = " << format_double(p->rreq_rate_limit_per_s) << '\n'
        << "hop_limit = " << p->hop_limit << '\n';
  }
  return out.str();
}

inline std::string dump_defaults() { return dump_config(default_config()); }

}  // namespace vanetsim

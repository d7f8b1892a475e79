#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vanetsim/vanetsim.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw vanetsim::IoError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

vanetsim::ScenarioConfig load_config(const std::string& config_path,
                                     const std::vector<std::string>& sets) {
  const std::string text = config_path.empty() ? "" : read_file(config_path);
  return vanetsim::parse_config_with_overrides(text, sets);
}

void dump_phy_presets(std::ostream& out) {
  using namespace vanetsim;
  for (const MacKind mac : {MacKind::Dot11, MacKind::Dot11p}) {
    const PhyKind pk = mac == MacKind::Dot11 ? PhyKind::Dot11 : PhyKind::Dot11p;
    const PhyParams phy = phy_preset(pk);
    const MacParams mp = mac_preset(mac);
    const NakagamiParams naka = nakagami_preset(phy);
    const auto f = [](double v) { return detail::format_double(v); };
    out << "[phy " << to_string(mac) << "]\n"
        << "carrier_freq_hz = " << f(phy.carrier_freq_hz) << '\n'
        << "tx_power_dbm = " << f(phy.tx_power_dbm) << '\n'
        << "data_rate_bps = " << f(phy.data_rate_bps) << '\n'
        << "rx_threshold_dbm = " << f(phy.rx_threshold_dbm) << '\n'
        << "cs_threshold_dbm = " << f(phy.cs_threshold_dbm) << '\n'
        << "noise_floor_dbm = " << f(phy.noise_floor_dbm) << '\n'
        << "\n[mac " << to_string(mac) << "]\n"
        << "slot_time = " << f(mp.slot_time_s) << '\n'
        << "sifs = " << f(mp.sifs_s) << '\n'
        << "difs = " << f(mp.difs_s) << '\n'
        << "cw_min = " << mp.cw_min << '\n'
        << "cw_max = " << mp.cw_max << '\n'
        << "preamble_plus_header_time = " << f(mp.preamble_plus_header_time_s)
        << '\n'
        << "ack_timeout = " << f(mp.ack_timeout_s) << '\n'
        << "retry_limit = " << mp.retry_limit << '\n'
        << "\n[nakagami " << to_string(mac) << "]\n"
        << "ref_distance = " << f(naka.ref_distance_m) << '\n'
        << "ref_loss_db = " << f(naka.ref_loss_db) << '\n';
    out << "shape = ";
    for (std::size_t i = 0; i < naka.shape_m.size(); ++i) {
      if (i) out << ',';
      if (std::isinf(naka.shape_m[i].max_distance_m))
        out << "inf";
      else
        out << f(naka.shape_m[i].max_distance_m);
      out << ':' << f(naka.shape_m[i].value);
    }
    out << "\npath_loss_exponent = ";
    for (std::size_t i = 0; i < naka.path_loss_exponent.size(); ++i) {
      if (i) out << ',';
      if (std::isinf(naka.path_loss_exponent[i].max_distance_m))
        out << "inf";
      else
        out << f(naka.path_loss_exponent[i].max_distance_m);
      out << ':' << f(naka.path_loss_exponent[i].value);
    }
    out << "\n\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace vanetsim;
  CLI::App app{"VANET routing protocol simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string protocol_opt;
  std::string mac_opt;
  std::string family_opt;
  std::uint32_t nodes_opt = 0;
  double speed_opt = -1.0;
  std::uint64_t seed_opt = 0;
  bool seed_given = false;
  std::uint32_t reps = 1;
  bool trace = false;
  std::vector<std::string> sets;

  auto* sim_cmd = app.add_subcommand("simulate", "run one scenario");
  sim_cmd->add_option("--config", config_path, "config file");
  sim_cmd->add_option("--protocol", protocol_opt,
                      "DSDV|MOD_DSDV|OLSR|MOD_OLSR|DYMO|MOD_DYMO");
  sim_cmd->add_option("--nodes", nodes_opt, "node count");
  sim_cmd->add_option("--speed", speed_opt, "speed in m/s");
  sim_cmd->add_option("--mac", mac_opt, "802.11|802.11p");
  sim_cmd->add_option("--seed", seed_opt, "master seed")
      ->each([&](const std::string&) { seed_given = true; });
  sim_cmd->add_option("--reps", reps, "repetitions with consecutive seeds");
  sim_cmd->add_option("--out", out_dir, "output directory")->required();
  sim_cmd->add_flag("--trace", trace, "write per-event MAC trace");
  sim_cmd->add_option("--set", sets, "extra key=value overrides");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep family");
  sweep_cmd->add_option("--config", config_path, "config file");
  sweep_cmd->add_option("--family", family_opt, "density|mobility")->required();
  sweep_cmd->add_option("--reps", reps, "repetitions with consecutive seeds");
  sweep_cmd->add_option("--out", out_dir, "output directory")->required();
  sweep_cmd->add_option("--set", sets, "extra key=value overrides");

  double an_mean = 0.0, an_var = 1.0, an_rmax = 100.0;
  std::uint32_t an_steps = 101, an_mc = 0;
  std::uint64_t an_seed = 1;
  std::string an_out;
  auto* an_cmd = app.add_subcommand("analytics", "distance model table");
  an_cmd->add_option("--mean", an_mean, "mean distance (m)")->required();
  an_cmd->add_option("--var", an_var, "variance (m^2)")->required();
  an_cmd->add_option("--rmax", an_rmax, "largest radius (m)")->required();
  an_cmd->add_option("--steps", an_steps, "rows in the table")->required();
  an_cmd->add_option("--mc", an_mc, "Monte Carlo samples for a check column");
  an_cmd->add_option("--seed", an_seed, "seed for the Monte Carlo column");
  an_cmd->add_option("--out", an_out, "write CSV here instead of stdout");

  auto* phy_cmd = app.add_subcommand("phy", "PHY utilities");
  auto* phy_dump = phy_cmd->add_subcommand("dump", "print built-in presets");
  auto* cfg_cmd = app.add_subcommand("config", "config utilities");
  auto* cfg_dump =
      cfg_cmd->add_subcommand("dump-defaults", "print the default config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim_cmd) {
      ScenarioConfig cfg = load_config(config_path, sets);
      if (!protocol_opt.empty() &&
          !protocol_from_string(protocol_opt, cfg.sim.protocol))
        throw OutOfRangeValue("unknown protocol: " + protocol_opt);
      if (!mac_opt.empty()) {
        MacKind mk;
        if (!mac_from_string(mac_opt, mk))
          throw OutOfRangeValue("unknown mac variant: " + mac_opt);
        if (mk != cfg.sim.mac_kind) {
          cfg.sim.mac_kind = mk;
          cfg.sim.phy.reset();
          cfg.sim.mac.reset();
          cfg.sim.nakagami.reset();
        }
      }
      if (!protocol_opt.empty()) cfg.sim.protocol_params.reset();
      if (nodes_opt > 0) cfg.sim.n_nodes = nodes_opt;
      if (speed_opt >= 0.0) cfg.sim.speed_mps = speed_opt;
      if (seed_given) cfg.sim.seed = seed_opt;

      std::vector<RunResult> rows;
      for (std::uint32_t rep = 0; rep < reps; ++rep) {
        ScenarioConfig one = cfg;
        one.sim.seed = cfg.sim.seed + rep;
        std::ofstream trace_file;
        std::ostream* trace_sink = nullptr;
        if (trace && reps == 1) {
          std::filesystem::create_directories(out_dir);
          trace_file.open(std::filesystem::path(out_dir) / "trace.txt",
                          std::ios::trunc);
          trace_sink = &trace_file;
        }
        rows.push_back(run_scenario(one, trace_sink));
      }
      write_metrics_csv(rows, std::filesystem::path(out_dir) / "metrics.csv");
      std::cout << metrics_csv(rows);
      return 0;
    }
    if (*sweep_cmd) {
      ScenarioConfig cfg = load_config(config_path, sets);
      SweepFamily family;
      if (family_opt == "density")
        family = SweepFamily::Density;
      else if (family_opt == "mobility")
        family = SweepFamily::Mobility;
      else
        throw OutOfRangeValue("family must be density or mobility");
      const auto rows = run_sweep(cfg, family, reps);
      const auto files = emit_report(rows, family, out_dir);
      for (const auto& f : files) std::cout << f.string() << '\n';
      return 0;
    }
    if (*an_cmd) {
      GaussianDistanceModel model;
      model.mean_m = an_mean;
      model.variance_m2 = an_var;
      const auto rows = analytics_table(model, an_rmax, an_steps);
      std::vector<double> mc;
      const std::vector<double>* mc_ptr = nullptr;
      if (an_mc > 0) {
        RngStream rng(an_seed, "analytics.mc");
        mc = analytics_mc_column(model, rows, an_mc, rng);
        mc_ptr = &mc;
      }
      if (an_out.empty()) {
        print_analytics_table(rows, mc_ptr, std::cout);
      } else {
        std::ostringstream buf;
        print_analytics_table(rows, mc_ptr, buf);
        write_text_atomic(an_out, buf.str());
      }
      return 0;
    }
    if (*phy_dump) {
      dump_phy_presets(std::cout);
      return 0;
    }
    if (*cfg_dump) {
      std::cout << dump_defaults();
      return 0;
    }
    (void)phy_cmd;
    (void)cfg_cmd;
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}

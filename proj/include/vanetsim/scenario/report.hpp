#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vanetsim/core/errors.hpp"
#include "vanetsim/scenario/run.hpp"

namespace vanetsim {

// Fixed six significant digits so equal runs produce byte-equal files.
inline std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string format_metric(const std::optional<double>& v) {
  return v ? format_metric(*v) : std::string();
}

inline constexpr const char* kMetricsCsvHeader =
    "protocol,mac_variant,n_nodes,speed_mps,seed,throughput_Bps,e2ed_s,nrl,"
    "sent,delivered,control_tx,drops_queue,drops_noroute,collisions";

inline std::string metrics_csv(const std::vector<RunResult>& rows) {
  std::ostringstream out;
  out << kMetricsCsvHeader << '\n';
  for (const RunResult& r : rows) {
    out << to_string(r.protocol) << ',' << to_string(r.mac_variant) << ','
        << r.n_nodes << ',' << format_metric(r.speed_mps) << ',' << r.seed << ','
        << format_metric(r.metrics.throughput_Bps) << ','
        << format_metric(r.metrics.e2ed_s) << ',' << format_metric(r.metrics.nrl)
        << ',' << r.metrics.sent << ',' << r.metrics.delivered << ','
        << r.metrics.control_tx << ',' << r.metrics.drops_queue << ','
        << r.metrics.drops_noroute << ',' << r.metrics.collisions << '\n';
  }
  return out.str();
}

// Whole-file replace via temp + rename; an abort never leaves a partial file.
inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path(), ec);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

inline void write_metrics_csv(const std::vector<RunResult>& rows,
                              const std::filesystem::path& path) {
  write_text_atomic(path, metrics_csv(rows));
}

enum class ChartMetric { Throughput, E2ed, Nrl };

inline const char* metric_name(ChartMetric m) {
  switch (m) {
    case ChartMetric::Throughput: return "throughput_Bps";
    case ChartMetric::E2ed: return "e2ed_s";
    case ChartMetric::Nrl: return "nrl";
  }
  return "";
}

inline std::optional<double> metric_value(const RunResult& r, ChartMetric m) {
  switch (m) {
    case ChartMetric::Throughput: return r.metrics.throughput_Bps;
    case ChartMetric::E2ed: return r.metrics.e2ed_s;
    case ChartMetric::Nrl: return r.metrics.nrl;
  }
  return std::nullopt;
}

// Grouped bars: one group per sweep point, one bar per protocol preset,
// heights are seed-averaged means (undefined samples excluded).
inline std::string chart_svg(const std::vector<RunResult>& rows,
                             SweepFamily family, ChartMetric metric,
                             MacKind mac) {
  const std::vector<ProtocolName> protos = all_protocols();
  std::set<double> xs;
  for (const RunResult& r : rows) {
    if (r.mac_variant != mac) continue;
    xs.insert(family == SweepFamily::Density ? static_cast<double>(r.n_nodes)
                                             : r.speed_mps);
  }
  std::vector<double> points(xs.begin(), xs.end());

  // protocol × point -> mean over seeds
  std::map<std::pair<int, double>, std::pair<double, int>> agg;
  for (const RunResult& r : rows) {
    if (r.mac_variant != mac) continue;
    const double x = family == SweepFamily::Density
                         ? static_cast<double>(r.n_nodes)
                         : r.speed_mps;
    const auto v = metric_value(r, metric);
    if (!v) continue;
    auto& slot = agg[{static_cast<int>(r.protocol), x}];
    slot.first += *v;
    slot.second += 1;
  }
  double y_max = 0.0;
  auto mean_of = [&](ProtocolName p, double x) -> std::optional<double> {
    auto it = agg.find({static_cast<int>(p), x});
    if (it == agg.end() || it->second.second == 0) return std::nullopt;
    return it->second.first / it->second.second;
  };
  for (const ProtocolName p : protos)
    for (const double x : points)
      if (const auto v = mean_of(p, x)) y_max = std::max(y_max, *v);
  if (y_max <= 0.0) y_max = 1.0;

  const double width = 720, height = 420;
  const double ml = 80, mr = 20, mt = 40, mb = 70;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;
  static const char* kPalette[6] = {"#4472c4", "#ed7d31", "#a5a5a5",
                                    "#ffc000", "#5b9bd5", "#70ad47"};

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "' font-family='sans-serif'>\n";
  svg << "<rect width='" << width << "' height='" << height
      << "' fill='white'/>\n";
  svg << "<text x='" << width / 2 << "' y='22' text-anchor='middle' "
      << "font-size='15'>" << metric_name(metric) << " by "
      << to_string(family) << " (" << to_string(mac) << ")</text>\n";

  for (int tick = 0; tick <= 5; ++tick) {
    const double frac = tick / 5.0;
    const double y = mt + plot_h * (1.0 - frac);
    svg << "<line x1='" << ml << "' y1='" << y << "' x2='" << width - mr
        << "' y2='" << y << "' stroke='#dddddd'/>\n";
    svg << "<text x='" << ml - 6 << "' y='" << y + 4
        << "' text-anchor='end' font-size='11'>" << format_metric(y_max * frac)
        << "</text>\n";
  }

  const std::size_t n_groups = points.size();
  const std::size_t n_bars = protos.size();
  if (n_groups > 0) {
    const double group_w = plot_w / static_cast<double>(n_groups);
    const double bar_w = group_w * 0.8 / static_cast<double>(n_bars);
    for (std::size_t g = 0; g < n_groups; ++g) {
      const double gx = ml + group_w * static_cast<double>(g) + group_w * 0.1;
      for (std::size_t b = 0; b < n_bars; ++b) {
        const auto v = mean_of(protos[b], points[g]);
        if (!v) continue;
        const double h = plot_h * (*v / y_max);
        svg << "<rect x='" << gx + bar_w * static_cast<double>(b) << "' y='"
            << mt + plot_h - h << "' width='" << bar_w * 0.92 << "' height='"
            << h << "' fill='" << kPalette[b % 6] << "'/>\n";
      }
      svg << "<text x='" << gx + group_w * 0.4 << "' y='" << mt + plot_h + 18
          << "' text-anchor='middle' font-size='12'>" << format_metric(points[g])
          << (family == SweepFamily::Density ? " nodes" : " m/s")
          << "</text>\n";
    }
  }

  double lx = ml;
  const double ly = height - 20;
  for (std::size_t b = 0; b < n_bars; ++b) {
    svg << "<rect x='" << lx << "' y='" << ly - 10 << "' width='12' height='12' "
        << "fill='" << kPalette[b % 6] << "'/>\n";
    svg << "<text x='" << lx + 16 << "' y='" << ly
        << "' font-size='11'>" << to_string(protos[b]) << "</text>\n";
    lx += 16 + 9.0 * std::string(to_string(protos[b])).size();
  }
  svg << "<line x1='" << ml << "' y1='" << mt + plot_h << "' x2='" << width - mr
      << "' y2='" << mt + plot_h << "' stroke='black'/>\n";
  svg << "</svg>\n";
  return svg.str();
}

inline std::string mac_file_tag(MacKind mac) {
  return mac == MacKind::Dot11 ? "80211" : "80211p";
}

// metrics.csv plus one chart per metric x MAC variant present in the rows.
inline std::vector<std::filesystem::path> emit_report(
    const std::vector<RunResult>& rows, SweepFamily family,
    const std::filesystem::path& out_dir) {
  if (rows.empty()) throw InvalidParams("emit_report: no rows");
  std::vector<std::filesystem::path> written;
  const auto csv_path = out_dir / "metrics.csv";
  write_metrics_csv(rows, csv_path);
  written.push_back(csv_path);

  std::set<MacKind> macs;
  for (const RunResult& r : rows) macs.insert(r.mac_variant);
  for (const MacKind mac : macs) {
    for (const ChartMetric m :
         {ChartMetric::Throughput, ChartMetric::E2ed, ChartMetric::Nrl}) {
      const auto path = out_dir / (std::string(metric_name(m)) + "_" +
                                   to_string(family) + "_" + mac_file_tag(mac) +
                                   ".svg");
      write_text_atomic(path, chart_svg(rows, family, m, mac));
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace vanetsim

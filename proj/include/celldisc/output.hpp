// SPDX-License-Identifier: Apache-2.0
//
// CSV tables and minimal SVG plots.

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "celldisc/analytic.hpp"
#include "celldisc/campaign.hpp"
#include "celldisc/codebook.hpp"

namespace celldisc {

inline std::string path_kind_name(const std::optional<PathKind>& k) {
  if (!k) return "none";
  return *k == PathKind::Los ? "los" : "reflected";
}

inline void write_users_csv(std::ostream& os, const RunStats& st, const Codebook& cb) {
  os << "user_id,nominal_x,nominal_y,real_x,real_y,success,bs_switches,mt_switches,via_db,width_deg,dir_index,"
        "path_kind\n";
  os.precision(10);
  for (const auto& r : st.records) {
    const auto& res = r.result;
    os << r.user_id << ',' << r.nominal.x << ',' << r.nominal.y << ',' << r.real.x << ',' << r.real.y << ','
       << (res.success ? 1 : 0) << ',' << res.bs_switches << ',' << res.mt_switches << ',' << (res.via_db ? 1 : 0)
       << ',';
    if (res.config)
      os << cb.width_deg(res.config->level) << ',' << res.config->dir;
    else
      os << ',';
    os << ',' << path_kind_name(res.path_kind) << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const RunStats& st) {
  os.precision(10);
  os << "metric,value\n";
  os << "seed," << st.seed << '\n';
  os << "users," << st.records.size() << '\n';
  os << "discovered," << st.discovered << '\n';
  os << "unreachable_fraction," << st.unreachable_fraction << '\n';
  os << "mean_bs_switches," << st.bs.mean << '\n';
  os << "median_bs_switches," << st.bs.median << '\n';
  os << "p90_bs_switches," << st.bs.p90 << '\n';
  os << "mean_mt_switches," << st.mt.mean << '\n';
  os << "median_mt_switches," << st.mt.median << '\n';
  os << "p10_mt_switches," << st.mt.p10 << '\n';
  os << "p90_mt_switches," << st.mt.p90 << '\n';
  os << "max_mt_switches," << st.mt.max << '\n';
  os << "db_hit_rate," << st.db_hit_rate << '\n';
  os << "mean_db_candidates," << st.mean_db_candidates << '\n';
  os << "db_conditional_success," << st.db_conditional_success << '\n';
}

inline void write_cdf_csv(std::ostream& os, const RunStats& st) {
  os << "mt_switches,cdf\n";
  os.precision(10);
  for (const auto& p : st.mt_cdf) os << p.switches << ',' << p.probability << '\n';
}

// "step,p_bs,p_mt,cumulative" over MT steps, then a summary row.
inline void write_pmf_csv(std::ostream& os, const PmfResult& r) {
  os.precision(12);
  os << "step,p_bs,p_mt,cumulative\n";
  double cum = 0.0;
  for (std::size_t n = 0; n < r.p_mt.size(); ++n) {
    cum += r.p_mt[n];
    os << n << ',' << r.p_bs[n / r.mt_beams] << ',' << r.p_mt[n] << ',' << cum << '\n';
  }
  os << "summary,mean_bs=" << r.mean_bs_switches << ",mean_mt=" << r.mean_mt_switches
     << ",unreachable=" << r.p_unreachable << '\n';
}

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Polyline plot with plain axes; x range is [min x, max x] over all series.
inline void write_svg_plot(std::ostream& os, const std::vector<SvgSeries>& series, const std::string& title,
                           const std::string& x_label, const std::string& y_label) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\">" << x0 << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" text-anchor=\"end\" font-size=\"11\">" << x1
     << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" text-anchor=\"end\" font-size=\"11\">" << y0 << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << y1 << "</text>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
     << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (T + H - B) / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = colors[k % std::size(colors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i)
      os << px(series[k].x[i]) << ',' << py(series[k].y[i]) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 16 * (k + 1) << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
       << color << "\">" << series[k].label << "</text>\n";
  }
  os << "</svg>\n";
}

// Step-shaped CDF of MT switches; x spans up to the largest observed count.
inline SvgSeries cdf_series(const RunStats& st, const std::string& label) {
  SvgSeries s{label, {}, {}};
  double prev = 0.0;
  for (const auto& p : st.mt_cdf) {
    s.x.push_back(p.switches);
    s.y.push_back(prev);
    s.x.push_back(p.switches);
    s.y.push_back(p.probability);
    prev = p.probability;
  }
  return s;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  return os;
}

inline void check_written(std::ofstream& os, const std::filesystem::path& p) {
  os.flush();
  if (!os) throw std::runtime_error("error writing '" + p.string() + "'");
}

}  // namespace detail

struct OutputPaths {
  std::filesystem::path dir{"."};
  bool plots{true};
};

// users.csv, summary.csv, cdf.csv and (with data) cdf.svg under paths.dir.
inline std::vector<std::filesystem::path> emit_outputs(const RunStats& st, const Codebook& cb, const OutputPaths& paths) {
  std::error_code ec;
  std::filesystem::create_directories(paths.dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + paths.dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, auto&& body) {
    const auto p = paths.dir / name;
    auto os = detail::open_output(p);
    body(os);
    detail::check_written(os, p);
    written.push_back(p);
  };
  emit("users.csv", [&](std::ostream& os) { write_users_csv(os, st, cb); });
  emit("summary.csv", [&](std::ostream& os) { write_summary_csv(os, st); });
  emit("cdf.csv", [&](std::ostream& os) { write_cdf_csv(os, st); });
  if (paths.plots && !st.mt_cdf.empty())
    emit("cdf.svg", [&](std::ostream& os) {
      write_svg_plot(os, {cdf_series(st, "seed " + std::to_string(st.seed))}, "CDF of MT switches", "MT switches",
                     "CDF");
    });
  return written;
}

}  // namespace celldisc

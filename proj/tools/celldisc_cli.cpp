// SPDX-License-Identifier: Apache-2.0
//
// celldisc: directional cell discovery campaigns and analytic model.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "celldisc/celldisc.hpp"

namespace {

using namespace celldisc;

constexpr int kConfigErrorExit = 2;

void write_to(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  body(os);
  if (!os) throw std::runtime_error("error writing '" + path + "'");
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out_dir,
                 bool plots) {
  auto cfg = load_config(config_path);
  if (seed) cfg.seed = *seed;
  const auto stats = run_campaign(cfg);
  const auto files = emit_outputs(stats, Codebook(cfg.codebook_widths), {out_dir, plots});
  std::cout << "users=" << stats.records.size() << " discovered=" << stats.discovered
            << " mean_bs=" << stats.bs.mean << " mean_mt=" << stats.mt.mean
            << " unreachable=" << stats.unreachable_fraction << '\n';
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  return 0;
}

int cmd_analytic(const std::string& config_path, const std::string& out) {
  const auto cfg = load_config(config_path);
  const auto pmf = run_analytic(cfg);
  write_to(out, [&](std::ostream& os) { write_pmf_csv(os, pmf); });
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& axis_name, const std::vector<double>& values,
              const std::string& out, const std::string& plot) {
  const auto cfg = load_config(config_path);
  const auto axis = parse_axis(axis_name);
  const auto rows = sweep(cfg, axis, values);
  write_to(out, [&](std::ostream& os) {
    os.precision(10);
    os << "axis,value,algorithm,edp_sectors,replications,mean_bs_switches,mean_mt_switches,unreachable_fraction,"
          "db_hit_rate,mean_db_candidates,db_conditional_success\n";
    for (const auto& r : rows) {
      const std::size_t n = axis == SweepAxis::EdpSectors ? static_cast<std::size_t>(r.value) : cfg.edp_sectors;
      os << axis_name << ',' << r.value << ',' << to_string(cfg.algorithm) << ',' << n << ',' << r.agg.runs << ','
         << r.agg.mean_bs << ',' << r.agg.mean_mt << ',' << r.agg.unreachable_fraction << ',' << r.agg.db_hit_rate
         << ',' << r.agg.mean_db_candidates << ',' << r.agg.db_conditional_success << '\n';
    }
  });
  if (!plot.empty()) {
    SvgSeries s{std::string(to_string(cfg.algorithm)), {}, {}};
    for (const auto& r : rows) {
      s.x.push_back(r.value);
      s.y.push_back(r.agg.mean_mt);
    }
    write_to(plot, [&](std::ostream& os) { write_svg_plot(os, {s}, "Mean MT switches", axis_name, "MT switches"); });
  }
  return 0;
}

int cmd_compare(const std::string& config_path, const std::string& out) {
  const auto cfg = load_config(config_path);
  const auto cmp = compare_model(cfg);
  write_to(out, [&](std::ostream& os) {
    os.precision(10);
    os << "metric,analytic,analytic_se,simulated,relative_gap\n";
    os << "mean_bs_switches," << cmp.analytic.mean_bs_switches << ',' << cmp.analytic.se_mean_bs_switches << ','
       << cmp.simulated.mean_bs << ',' << cmp.gap_bs << '\n';
    os << "mean_mt_switches," << cmp.analytic.mean_mt_switches << ',' << cmp.analytic.se_mean_mt_switches << ','
       << cmp.simulated.mean_mt << ',' << cmp.gap_mt << '\n';
    os << "unreachable," << cmp.analytic.p_unreachable << ",0," << cmp.simulated.unreachable_fraction << ",\n";
  });
  return 0;
}

int cmd_sequence(const std::string& config_path, double x, double y, const std::string& out) {
  const auto cfg = load_config(config_path);
  const Codebook cb(cfg.codebook_widths);
  auto rng = make_rng(cfg.seed, Stream::User, 0);
  const auto seq = build_sequence(cfg.sequence_request(), cb, {x, y}, cfg.bs(), cfg.radio, rng);
  write_to(out, [&](std::ostream& os) { write_sequence_csv(os, cb, seq); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directional cell discovery simulator and analytic model"};
  app.require_subcommand(1);

  std::string config;
  std::string out;

  auto* sim = app.add_subcommand("simulate", "run one campaign and write per-user and summary outputs");
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool no_plot = false;
  sim->add_option("--config", config, "scenario file")->required();
  sim->add_option("--seed", seed, "override the scenario seed");
  sim->add_option("--out", out_dir, "output directory");
  sim->add_flag("--no-plot", no_plot, "skip the SVG plot");

  auto* ana = app.add_subcommand("analytic", "evaluate the sector model PMF as CSV");
  ana->add_option("--config", config, "scenario file")->required();
  ana->add_option("--out", out, "output file (default stdout)");

  auto* swp = app.add_subcommand("sweep", "run one campaign per axis value");
  std::string axis;
  std::vector<double> values;
  std::string plot;
  swp->add_option("--config", config, "scenario file")->required();
  swp->add_option("--axis", axis, "location_error | edp_sectors | db_range | obstacles")->required();
  swp->add_option("--values", values, "comma separated values")->required()->delimiter(',');
  swp->add_option("--out", out, "output CSV (default stdout)");
  swp->add_option("--plot", plot, "optional SVG line plot");

  auto* cmp = app.add_subcommand("compare", "analytic vs simulated mean switches");
  cmp->add_option("--config", config, "scenario file")->required();
  cmp->add_option("--out", out, "output CSV (default stdout)");

  auto* sq = app.add_subcommand("sequence", "export the search sequence for one nominal position");
  double x = 0.0, y = 0.0;
  sq->add_option("--config", config, "scenario file")->required();
  sq->add_option("--x", x, "nominal x (m)")->required();
  sq->add_option("--y", y, "nominal y (m)")->required();
  sq->add_option("--out", out, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(config, seed, out_dir, !no_plot);
    if (*ana) return cmd_analytic(config, out);
    if (*swp) return cmd_sweep(config, axis, values, out, plot);
    if (*cmp) return cmd_compare(config, out);
    if (*sq) return cmd_sequence(config, x, y, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: run experiment configs, reproduce the built-in
// measurement presets, or sweep the randomized ordering checks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "noc/config.hpp"
#include "noc/experiment.hpp"
#include "noc/topology.hpp"

namespace {

using namespace noc;

int run_config(const std::string& config_path, std::uint64_t seed,
               const std::string& out_dir, std::uint64_t max_cycles,
               bool trace, const std::string& variant) {
  ExperimentConfig cfg = ConfigParser::parse_file(config_path);
  if (seed != 0) cfg.traffic.seed = seed;
  if (max_cycles != 0) cfg.max_cycles = max_cycles;
  if (!variant.empty()) {
    if (variant == "narrow-wide")
      cfg.variant = Variant::NarrowWide;
    else if (variant == "wide-only")
      cfg.variant = Variant::WideOnly;
    else
      throw ConfigError("--variant must be narrow-wide or wide-only");
  }
  cfg.out_dir = out_dir;
  std::filesystem::create_directories(out_dir);

  std::ofstream trace_os;
  std::ofstream occupancy_os;
  if (trace) {
    trace_os.open(std::filesystem::path(out_dir) / "flit_trace.csv",
                  std::ios::trunc);
    occupancy_os.open(std::filesystem::path(out_dir) / "ni_occupancy.csv",
                      std::ios::trunc);
  }

  std::vector<SweepRow> rows;
  for (std::uint32_t level : cfg.traffic.interference_levels) {
    RunResult r = run_point(cfg, level, trace ? &trace_os : nullptr,
                            trace ? &occupancy_os : nullptr);
    if (r.report.timeouts != 0) {
      std::cerr << "error: level " << level << " left " << r.report.timeouts
                << " transactions incomplete\n";
      return 2;
    }
    rows.push_back({level, r.report});
  }

  const std::string variant_tag =
      cfg.variant == Variant::NarrowWide ? "nw" : "wo";
  const std::string stem =
      cfg.mode == ExperimentMode::Latency ? "lat" : "bw";
  const std::filesystem::path csv =
      std::filesystem::path(out_dir) /
      (stem + "_" + std::string(to_string(cfg.traffic.direction)) + "_" +
       variant_tag + ".csv");
  if (cfg.mode == ExperimentMode::Latency)
    write_latency_csv(csv, rows);
  else
    write_bw_csv(csv, rows);

  std::cout << "wrote " << csv.string() << "\n";
  for (const auto& row : rows) {
    const LatencyStats& lat = row.report.narrow_read_latency;
    std::cout << "level " << row.level << ": narrow_lat mean="
              << format_double(lat.mean) << " median="
              << format_double(lat.median) << " p99=" << format_double(lat.p99)
              << " wide_bw_pct="
              << format_double(row.report.effective_wide_bw_pct)
              << " txns=" << row.report.completed_txns
              << " cycles=" << row.report.cycles_run << "\n";
  }
  return 0;
}

int preset_zeroload() {
  const ZeroLoadResult z = run_zero_load();
  std::printf("round_trip_cycles,%llu\n",
              (unsigned long long)z.round_trip_cycles);
  std::printf("router_cycles,%llu\n", (unsigned long long)z.router_cycles);
  std::printf("ni_cycles,%llu\n", (unsigned long long)z.ni_cycles);
  std::printf("endpoint_internal_cycles,%llu\n",
              (unsigned long long)z.endpoint_internal_cycles);
  return 0;
}

int preset_boundary(int width, int height) {
  const BoundaryReport r = run_boundary_bandwidth(width, height);
  std::printf("peak_link_bandwidth_gbps,%.2f\n", r.wide_link.simplex_bps / 1e9);
  std::printf("peak_link_bandwidth_gbps_int,%d\n",
              int(r.wide_link.simplex_bps / 1e9));
  std::printf("peak_link_bandwidth_duplex_tbps,%.4f\n",
              r.wide_link.duplex_bps / 1e12);
  std::printf("boundary_ports,%d\n", r.boundary.ports);
  std::printf("boundary_bandwidth_tbps,%.4f\n",
              r.boundary.wide_bits_per_s / 1e12);
  std::printf("boundary_bandwidth_tb_s,%.4f\n",
              r.boundary.wide_bytes_per_s / 1e12);
  std::printf("boundary_narrow_extra_tbps,%.4f\n",
              r.boundary.narrow_bits_per_s / 1e12);
  return 0;
}

int preset_figure(ExperimentMode mode, std::uint64_t seed,
                  const std::string& out_dir) {
  ExperimentConfig base = default_experiment();
  if (seed != 0) base.traffic.seed = seed;
  std::filesystem::create_directories(out_dir);
  const FigureResult result = run_figure(base, mode, out_dir, true);
  for (const auto& [key, rows] : result.sweeps) {
    const auto& [dir, var] = key;
    std::cout << to_string(var) << " " << to_string(dir) << ":";
    for (const auto& row : rows) {
      std::cout << " "
                << (mode == ExperimentMode::Latency
                        ? format_double(row.report.narrow_read_latency.mean)
                        : format_double(row.report.effective_wide_bw_pct));
    }
    std::cout << "\n";
  }
  std::cout << "wrote 4 CSV files to " << out_dir << "\n";
  return 0;
}

int run_check(std::uint64_t runs, std::uint64_t seed) {
  std::cout << "ordering property sweep: " << runs
            << " randomized instances, bypass on+off each\n";
  const OrderingSuiteResult res = run_ordering_suite(runs, seed, &std::cout);
  std::cout << "all " << res.runs << " runs passed the ordering oracle ("
            << res.cross_id_reorders << " cross-ID reorders observed)\n";
  return 0;
}

bool parse_mesh_size(const std::string& s, int& w, int& h) {
  const auto x = s.find('x');
  if (x == std::string::npos) return false;
  try {
    w = std::stoi(s.substr(0, x));
    h = std::stoi(s.substr(x + 1));
  } catch (const std::exception&) {
    return false;
  }
  return w >= 1 && h >= 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-accurate simulator for narrow-wide multi-channel mesh "
               "NoCs with AXI-ordering network interfaces"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string out_dir = "out";
  std::string variant;
  std::uint64_t seed = 0;
  std::uint64_t max_cycles = 0;
  bool trace = false;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Override the traffic seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--max-cycles", max_cycles, "Override the cycle limit");
  run->add_flag("--trace", trace, "Write a flit trace CSV");
  run->add_option("--variant", variant, "narrow-wide | wide-only");

  // preset
  std::string preset_name;
  std::string mesh_size = "7x7";
  auto* preset = app.add_subcommand(
      "preset", "Built-in reproductions: fig5a | fig5b | zeroload | boundary-bw");
  preset->add_option("name", preset_name, "Preset name")->required();
  preset->add_option("--seed", seed, "Traffic seed");
  preset->add_option("--out", out_dir, "Output directory");
  preset->add_option("--mesh", mesh_size, "Mesh size WxH (boundary-bw)");

  // check
  std::uint64_t check_runs = 500;
  auto* check = app.add_subcommand("check", "Randomized ordering-oracle sweep");
  check->add_option("--runs", check_runs, "Number of randomized instances");
  check->add_option("--seed", seed, "Base seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run)
      return run_config(config_path, seed, out_dir, max_cycles, trace, variant);
    if (*preset) {
      if (preset_name == "zeroload") return preset_zeroload();
      if (preset_name == "boundary-bw") {
        int w = 7, h = 7;
        if (!parse_mesh_size(mesh_size, w, h)) {
          std::cerr << "usage error: --mesh expects WxH, got '" << mesh_size
                    << "'\n";
          return 1;
        }
        return preset_boundary(w, h);
      }
      if (preset_name == "fig5a")
        return preset_figure(ExperimentMode::Latency, seed, out_dir);
      if (preset_name == "fig5b")
        return preset_figure(ExperimentMode::Bandwidth, seed, out_dir);
      std::cerr << "usage error: unknown preset '" << preset_name
                << "' (expected fig5a|fig5b|zeroload|boundary-bw)\n";
      return 1;
    }
    if (*check) return run_check(check_runs, seed == 0 ? 1 : seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const UnroutableError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ProtocolError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const KernelError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

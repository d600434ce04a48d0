// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "noc/experiment.hpp"
#include "noc/types.hpp"

namespace noc {

/// Sectioned key-value experiment configs:
///
///   # comment
///   [mesh]
///   width = 4
///   [traffic]
///   interference_levels = 0,2,4,8
///
/// Unknown sections or keys are errors with the offending line number.
class ConfigParser {
 public:
  static ExperimentConfig parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    return parse(is, path);
  }

  static ExperimentConfig parse(std::istream& is, const std::string& origin) {
    ExperimentConfig cfg = default_experiment();
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const std::string trimmed = trim(strip_comment(line));
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[') {
        if (trimmed.back() != ']')
          fail(origin, lineno, "unterminated section header");
        section = trimmed.substr(1, trimmed.size() - 2);
        if (section != "mesh" && section != "router" && section != "ni" &&
            section != "traffic" && section != "experiment")
          fail(origin, lineno, "unknown section [" + section + "]");
        continue;
      }
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        fail(origin, lineno, "expected key = value");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (section.empty())
        fail(origin, lineno, "key outside any [section]");
      apply(cfg, section, key, value, origin, lineno);
    }
    return cfg;
  }

 private:
  [[noreturn]] static void fail(const std::string& origin, int lineno,
                                const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + what);
  }

  static std::string strip_comment(const std::string& s) {
    const auto pos = s.find_first_of("#;");
    return pos == std::string::npos ? s : s.substr(0, pos);
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static std::uint64_t parse_uint(const std::string& v, const std::string& origin,
                                  int lineno) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      fail(origin, lineno, "expected unsigned integer, got '" + v + "'");
    return out;
  }

  static double parse_double(const std::string& v, const std::string& origin,
                             int lineno) {
    try {
      std::size_t used = 0;
      const double out = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      fail(origin, lineno, "expected number, got '" + v + "'");
    }
  }

  static bool parse_bool(const std::string& v, const std::string& origin,
                         int lineno) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(origin, lineno, "expected true/false, got '" + v + "'");
  }

  static NodeId parse_node(const std::string& v, const std::string& origin,
                           int lineno) {
    const auto comma = v.find(',');
    if (comma == std::string::npos)
      fail(origin, lineno, "expected tile coordinate 'x,y', got '" + v + "'");
    return {std::int16_t(parse_uint(trim(v.substr(0, comma)), origin, lineno)),
            std::int16_t(parse_uint(trim(v.substr(comma + 1)), origin, lineno))};
  }

  static std::vector<std::uint32_t> parse_list(const std::string& v,
                                               const std::string& origin,
                                               int lineno) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
      out.push_back(std::uint32_t(parse_uint(trim(item), origin, lineno)));
    if (out.empty()) fail(origin, lineno, "empty list");
    return out;
  }

  static void apply(ExperimentConfig& cfg, const std::string& section,
                    const std::string& key, const std::string& value,
                    const std::string& origin, int lineno) {
    if (section == "mesh") {
      if (key == "width") cfg.mesh.width = int(parse_uint(value, origin, lineno));
      else if (key == "height") cfg.mesh.height = int(parse_uint(value, origin, lineno));
      else if (key == "link_frequency_hz")
        cfg.mesh.link_frequency_hz = parse_double(value, origin, lineno);
      else fail(origin, lineno, "unknown mesh key '" + key + "'");
    } else if (section == "router") {
      if (key == "input_fifo_depth")
        cfg.router.input_fifo_depth = int(parse_uint(value, origin, lineno));
      else if (key == "output_buffered")
        cfg.router.output_buffered = parse_bool(value, origin, lineno);
      else fail(origin, lineno, "unknown router key '" + key + "'");
    } else if (section == "ni") {
      if (key == "narrow_read_rob_bytes")
        cfg.ni.narrow_read_rob_bytes = std::uint32_t(parse_uint(value, origin, lineno));
      else if (key == "wide_read_rob_bytes")
        cfg.ni.wide_read_rob_bytes = std::uint32_t(parse_uint(value, origin, lineno));
      else if (key == "write_table_entries")
        cfg.ni.write_table_entries = std::uint32_t(parse_uint(value, origin, lineno));
      else if (key == "reorder_table_entries")
        cfg.ni.reorder_table_entries = std::uint32_t(parse_uint(value, origin, lineno));
      else if (key == "internal_latency_cycles")
        cfg.ni.internal_latency_cycles = std::uint32_t(parse_uint(value, origin, lineno));
      else if (key == "id_bits")
        cfg.ni.id_bits = std::uint8_t(parse_uint(value, origin, lineno));
      else if (key == "response_bypass")
        cfg.ni.response_bypass = parse_bool(value, origin, lineno);
      else fail(origin, lineno, "unknown ni key '" + key + "'");
    } else if (section == "traffic") {
      if (key == "narrow_txn_count")
        cfg.traffic.narrow_txn_count = std::uint32_t(parse_uint(value, origin, lineno));
      else if (key == "wide_txn_count")
        cfg.traffic.wide_txn_count = std::uint32_t(parse_uint(value, origin, lineno));
      else if (key == "wide_burst_len")
        cfg.traffic.wide_burst_len = std::uint16_t(parse_uint(value, origin, lineno));
      else if (key == "narrow_issue_period")
        cfg.traffic.narrow_issue_period = parse_uint(value, origin, lineno);
      else if (key == "interference_levels")
        cfg.traffic.interference_levels = parse_list(value, origin, lineno);
      else if (key == "direction") {
        if (value == "unidirectional") cfg.traffic.direction = Direction::Unidirectional;
        else if (value == "bidirectional") cfg.traffic.direction = Direction::Bidirectional;
        else fail(origin, lineno, "direction must be unidirectional|bidirectional");
      } else if (key == "source")
        cfg.traffic.source = parse_node(value, origin, lineno);
      else if (key == "target")
        cfg.traffic.target = parse_node(value, origin, lineno);
      else if (key == "seed")
        cfg.traffic.seed = parse_uint(value, origin, lineno);
      else fail(origin, lineno, "unknown traffic key '" + key + "'");
    } else {  // experiment
      if (key == "variant") {
        if (value == "narrow-wide") cfg.variant = Variant::NarrowWide;
        else if (value == "wide-only") cfg.variant = Variant::WideOnly;
        else fail(origin, lineno, "variant must be narrow-wide|wide-only");
      } else if (key == "mode") {
        if (value == "latency") cfg.mode = ExperimentMode::Latency;
        else if (value == "bandwidth") cfg.mode = ExperimentMode::Bandwidth;
        else fail(origin, lineno, "mode must be latency|bandwidth");
      } else if (key == "max_cycles")
        cfg.max_cycles = parse_uint(value, origin, lineno);
      else if (key == "sink_stall_pct")
        cfg.sink_stall_pct = std::uint32_t(parse_uint(value, origin, lineno));
      else fail(origin, lineno, "unknown experiment key '" + key + "'");
    }
  }
};

}  // namespace noc

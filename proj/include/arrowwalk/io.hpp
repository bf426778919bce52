#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arrowwalk/arrow_system.hpp"
#include "arrowwalk/cookie.hpp"
#include "arrowwalk/counterexamples.hpp"
#include "arrowwalk/trajectory.hpp"
#include "json.hpp"

namespace arrowwalk {

using nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

inline Site parse_site_key(const std::string& key) {
  Site x = 0;
  const auto* end = key.data() + key.size();
  auto [p, ec] = std::from_chars(key.data(), end, x);
  if (ec != std::errc{} || p != end) throw std::invalid_argument("site key is not an integer: '" + key + "'");
  return x;
}

/// Shortest round-trip decimal form, '.' separator regardless of locale.
inline std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, p);
}

inline std::string format_number(std::int64_t v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, p);
}

// ---- arrow systems ---------------------------------------------------------

inline Arrow parse_fill(const json& j) {
  const auto s = j.get<std::string>();
  if (s.size() != 1) throw std::invalid_argument("default_fill must be \"L\" or \"R\"");
  return arrow_from_char(s[0]);
}

inline ArrowSystem parse_arrow_system(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw std::invalid_argument("arrow system needs a \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "ce1-L") return ce1_left_system();
  if (kind == "ce1-R") return ce1_right_system(j.value("N", std::int64_t{3}), j.value("allow_small_n", false));
  if (kind != "explicit") throw std::invalid_argument("unknown arrow system kind '" + kind + "'");
  ExplicitTable t;
  if (j.contains("default_fill")) t.default_fill = parse_fill(j.at("default_fill"));
  if (j.contains("stacks")) {
    for (const auto& [key, val] : j.at("stacks").items()) {
      t.stacks[parse_site_key(key)] = arrows_from_string(val.get<std::string>());
    }
  }
  if (j.contains("site_fill")) {
    for (const auto& [key, val] : j.at("site_fill").items()) t.site_fill[parse_site_key(key)] = parse_fill(val);
  }
  return ArrowSystem(std::move(t), j.value("label", std::string("explicit")));
}

inline ArrowSystem load_arrow_system(const std::string& path) {
  try {
    return parse_arrow_system(read_json_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline json arrow_system_to_json(const ExplicitTable& t) {
  json stacks = json::object();
  for (const auto& [x, s] : t.stacks) stacks[format_number(x)] = to_string(s);
  json j = {{"kind", "explicit"}, {"default_fill", std::string(1, to_char(t.default_fill))}, {"stacks", stacks}};
  if (!t.site_fill.empty()) {
    json sf = json::object();
    for (const auto& [x, a] : t.site_fill) sf[format_number(x)] = std::string(1, to_char(a));
    j["site_fill"] = sf;
  }
  return j;
}

// ---- environments and partitions ------------------------------------------

inline CookieEnvironment parse_environment(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("environment must be a JSON object");
  std::map<Site, std::vector<double>> sites;
  if (j.contains("sites")) {
    for (const auto& [key, val] : j.at("sites").items()) sites[parse_site_key(key)] = val.get<std::vector<double>>();
  }
  auto def = j.value("default", std::vector<double>{});
  return CookieEnvironment(std::move(sites), std::move(def), j.value("tail", 0.5));
}

inline CookieEnvironment load_environment(const std::string& path) {
  try {
    return parse_environment(read_json_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline json environment_to_json(const CookieEnvironment& env) {
  json sites = json::object();
  for (const auto& [x, s] : env.sites()) sites[format_number(x)] = s;
  return {{"sites", sites}, {"default", env.default_stack()}, {"tail", env.tail()}};
}

inline BlockPartition parse_partition(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("partition must be a JSON object");
  const int cap = j.value("cap", 3);
  auto blocks = j.value("blocks", BlockPartition::Blocks{});
  std::map<Site, BlockPartition::Blocks> sites;
  if (j.contains("sites")) {
    for (const auto& [key, val] : j.at("sites").items()) {
      sites[parse_site_key(key)] = val.get<BlockPartition::Blocks>();
    }
  }
  return BlockPartition(std::move(blocks), cap, std::move(sites));
}

inline BlockPartition load_partition(const std::string& path) {
  try {
    return parse_partition(read_json_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

// ---- tables ----------------------------------------------------------------

/// Rows of scalar cells written as CSV or as a JSON array of row objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;

  explicit Table(std::vector<std::string> h = {}) : header(std::move(h)) {}

  void add(std::vector<json> row) {
    if (row.size() != header.size()) throw std::logic_error("table row width mismatch");
    rows.push_back(std::move(row));
  }

  static std::string cell_text(const json& c) {
    if (c.is_number_integer()) return format_number(c.get<std::int64_t>());
    if (c.is_number_float()) return format_number(c.get<double>());
    if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
    if (c.is_null()) return "";
    if (c.is_string()) {
      const auto s = c.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + '"';
    }
    return c.dump();
  }

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + cell_text(r[i]);
      out += '\n';
    }
    return out;
  }

  json to_json() const {
    json arr = json::array();
    for (const auto& r : rows) {
      json o = json::object();
      for (std::size_t i = 0; i < r.size(); ++i) o[header[i]] = r[i];
      arr.push_back(std::move(o));
    }
    return arr;
  }

  std::string render(const std::string& format) const {
    if (format == "csv") return csv();
    if (format == "json") return to_json().dump(2) + "\n";
    throw std::invalid_argument("format must be csv or json");
  }
};

inline Table trajectory_table(const Trajectory& t) {
  Table tab({"n", "pos"});
  for (std::int64_t n = 0; n <= t.horizon(); ++n) tab.add({n, t[n]});
  return tab;
}

inline Table pair_table(const Trajectory& l, const Trajectory& r) {
  Table tab({"n", "left", "right"});
  for (std::int64_t n = 0; n <= l.horizon(); ++n) tab.add({n, l[n], r[n]});
  return tab;
}

}  // namespace arrowwalk

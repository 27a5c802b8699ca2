#pragma once

// Serialization layer: grid / polynomial / rule documents, CSV tables, flat
// key=value configs, and run manifests.  Documents are emitted by hand with
// 17-significant-digit floats so identical inputs always produce identical
// bytes; parsing goes through a standard JSON reader.  A stored grid records
// a checksum of its nodes, and loading recomputes the nodes from the deltas
// and refuses a document whose checksum no longer matches.

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "../../vendor/json.hpp"
#include "ptrig/grid.hpp"
#include "ptrig/nudft.hpp"
#include "ptrig/quadrature.hpp"
#include "ptrig/trigpoly.hpp"
#include "ptrig/version.hpp"

namespace ptrig::io {

// %.17g guarantees binary64 round-trips exactly through decimal text.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::string format_checksum(std::uint64_t tag) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, tag);
  return std::string(buf);
}

namespace detail {

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void append_double_array(std::string& out, const std::vector<double>& v,
                                const std::string& indent) {
  out += "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i == 0) ? "\n" : ",\n";
    out += indent + "  " + format_double(v[i]);
  }
  out += "\n" + indent + "]";
}

}  // namespace detail

// --- grid documents ---

inline std::string grid_document(const PerturbedGrid& grid,
                                 const std::string& indent = "") {
  std::string out = "{\n";
  out += indent + "  \"N\": " + std::to_string(grid.half_count) + ",\n";
  out += indent + "  \"alpha\": " + format_double(grid.alpha) + ",\n";
  out += indent + "  \"seed\": " +
         (grid.seed ? std::to_string(*grid.seed) : std::string("null")) + ",\n";
  out += indent + "  \"kind\": \"" + to_string(grid.kind) + "\",\n";
  out += indent + "  \"deltas\": ";
  detail::append_double_array(out, grid.deltas, indent + "  ");
  out += ",\n";
  out += indent + "  \"checksum\": \"" + format_checksum(node_checksum(grid)) +
         "\"\n";
  out += indent + "}";
  return out;
}

inline PerturbedGrid grid_from_json(const nlohmann::json& doc) {
  const int half = doc.at("N").get<int>();
  if (half < 0) throw std::runtime_error("grid document: negative N");
  PerturbedGrid grid;
  grid.half_count = half;
  grid.alpha = doc.at("alpha").get<double>();
  if (doc.at("seed").is_null()) {
    grid.seed = std::nullopt;
  } else {
    grid.seed = doc.at("seed").get<std::uint64_t>();
  }
  const auto kind = grid_kind_from_string(doc.at("kind").get<std::string>());
  if (!kind) throw std::runtime_error("grid document: unknown kind");
  grid.kind = *kind;
  grid.deltas = doc.at("deltas").get<std::vector<double>>();
  if (grid.deltas.size() != static_cast<std::size_t>(2 * half + 1))
    throw std::runtime_error("grid document: delta count does not match N");
  grid.nodes = ptrig::detail::nodes_from_deltas(half, grid.deltas);
  const auto validation = validate(grid);
  if (!validation.within_budget)
    throw std::runtime_error("grid document: deltas exceed declared alpha");
  const std::string stored = doc.at("checksum").get<std::string>();
  if (format_checksum(node_checksum(grid)) != stored)
    throw std::runtime_error("grid document: node checksum mismatch");
  return grid;
}

inline void save_grid(const std::filesystem::path& path,
                      const PerturbedGrid& grid) {
  detail::write_text_file(path, grid_document(grid) + "\n");
}

inline PerturbedGrid load_grid(const std::filesystem::path& path) {
  return grid_from_json(nlohmann::json::parse(detail::read_text_file(path)));
}

// --- polynomial documents ---

inline std::string poly_document(const TrigPoly& q) {
  std::string out = "{\n";
  out += "  \"degree\": " + std::to_string(q.degree) + ",\n";
  out += "  \"coeffs\": [";
  for (std::size_t i = 0; i < q.coeffs.size(); ++i) {
    out += (i == 0) ? "\n" : ",\n";
    out += "    [" + format_double(q.coeffs[i].real()) + ", " +
           format_double(q.coeffs[i].imag()) + "]";
  }
  out += "\n  ]\n}";
  return out;
}

inline TrigPoly poly_from_json(const nlohmann::json& doc) {
  const int degree = doc.at("degree").get<int>();
  complex_vector coeffs;
  for (const auto& pair : doc.at("coeffs")) {
    if (!pair.is_array() || pair.size() != 2)
      throw std::runtime_error("poly document: coefficient is not a pair");
    coeffs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return make_trigpoly(degree, std::move(coeffs));
}

inline void save_poly(const std::filesystem::path& path, const TrigPoly& q) {
  detail::write_text_file(path, poly_document(q) + "\n");
}

inline TrigPoly load_poly(const std::filesystem::path& path) {
  return poly_from_json(nlohmann::json::parse(detail::read_text_file(path)));
}

// --- quadrature rule documents ---

inline std::string rule_document(const QuadratureRule& rule) {
  std::string out = "{\n";
  out += "  \"grid\": " + grid_document(rule.grid, "  ") + ",\n";
  out += "  \"weights\": ";
  detail::append_double_array(out, rule.weights, "  ");
  out += ",\n";
  out += "  \"exactness_degree\": " + std::to_string(rule.exactness_degree) +
         "\n}";
  return out;
}

inline QuadratureRule rule_from_json(const nlohmann::json& doc) {
  QuadratureRule rule;
  rule.grid = grid_from_json(doc.at("grid"));
  rule.weights = doc.at("weights").get<std::vector<double>>();
  rule.exactness_degree = doc.at("exactness_degree").get<int>();
  if (rule.weights.size() != rule.grid.nodes.size())
    throw std::runtime_error("rule document: weight count does not match grid");
  return rule;
}

inline void save_rule(const std::filesystem::path& path,
                      const QuadratureRule& rule) {
  detail::write_text_file(path, rule_document(rule) + "\n");
}

inline QuadratureRule load_rule(const std::filesystem::path& path) {
  return rule_from_json(nlohmann::json::parse(detail::read_text_file(path)));
}

// --- CSV tables ---

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string csv_body(const CsvTable& table) {
  std::string out;
  const auto append_row = [&](const std::vector<std::string>& cells) {
    if (cells.size() != table.header.size())
      throw std::runtime_error("csv row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_row(table.header);
  for (const auto& row : table.rows) append_row(row);
  return out;
}

inline void save_csv(const std::filesystem::path& path, const CsvTable& table) {
  detail::write_text_file(path, csv_body(table));
}

// --- flat key=value configuration ---

inline std::map<std::string, std::string> parse_config_text(
    const std::string& text) {
  const auto trim = [](std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
  };
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": empty key");
    if (!kv.emplace(key, value).second)
      throw std::invalid_argument("config: duplicate key '" + key + "'");
  }
  return kv;
}

inline std::map<std::string, std::string> load_config(
    const std::filesystem::path& path) {
  return parse_config_text(detail::read_text_file(path));
}

// Typed access over a parsed config.  Every lookup records the resolved
// value (explicit or default), so the manifest can echo the full effective
// configuration, and finish() rejects keys no experiment asked about.
class ConfigView {
 public:
  explicit ConfigView(std::map<std::string, std::string> kv)
      : kv_(std::move(kv)) {}

  std::string get_string(const std::string& key, std::string fallback) {
    const auto it = kv_.find(key);
    const std::string value = (it != kv_.end()) ? it->second : fallback;
    touch(key, value);
    return value;
  }

  double get_double(const std::string& key, double fallback) {
    const auto it = kv_.find(key);
    const double value =
        (it != kv_.end()) ? parse_double(key, it->second) : fallback;
    touch(key, format_double(value));
    return value;
  }

  int get_int(const std::string& key, int fallback) {
    const auto it = kv_.find(key);
    const int value = (it != kv_.end()) ? parse_int(key, it->second) : fallback;
    touch(key, std::to_string(value));
    return value;
  }

  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) {
    const auto it = kv_.find(key);
    std::uint64_t value = fallback;
    if (it != kv_.end()) {
      try {
        std::size_t used = 0;
        value = std::stoull(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key +
                                    "': expected unsigned integer");
      }
    }
    touch(key, std::to_string(value));
    return value;
  }

  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> fallback) {
    const auto it = kv_.find(key);
    std::vector<double> value = std::move(fallback);
    if (it != kv_.end()) {
      value.clear();
      for (const auto& item : split_list(key, it->second))
        value.push_back(parse_double(key, item));
    }
    std::string echo = "{";
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (i) echo += ',';
      echo += format_double(value[i]);
    }
    echo += '}';
    touch(key, echo);
    return value;
  }

  std::vector<int> get_int_list(const std::string& key,
                                std::vector<int> fallback) {
    const auto it = kv_.find(key);
    std::vector<int> value = std::move(fallback);
    if (it != kv_.end()) {
      value.clear();
      for (const auto& item : split_list(key, it->second))
        value.push_back(parse_int(key, item));
    }
    std::string echo = "{";
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (i) echo += ',';
      echo += std::to_string(value[i]);
    }
    echo += '}';
    touch(key, echo);
    return value;
  }

  void finish() const {
    std::string unknown;
    for (const auto& [key, value] : kv_) {
      if (resolved_.count(key)) continue;
      if (!unknown.empty()) unknown += ", ";
      unknown += key;
    }
    if (!unknown.empty())
      throw std::invalid_argument("config: unknown keys: " + unknown);
  }

  const std::map<std::string, std::string>& resolved() const {
    return resolved_;
  }

 private:
  void touch(const std::string& key, std::string value) {
    resolved_[key] = std::move(value);
  }

  static double parse_double(const std::string& key, const std::string& text) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key '" + key + "': expected number");
    }
  }

  static int parse_int(const std::string& key, const std::string& text) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("config key '" + key + "': expected integer");
    }
  }

  // Lists are written {a,b,c}; braces are optional and a bare scalar is a
  // one-element list.
  static std::vector<std::string> split_list(const std::string& key,
                                             std::string text) {
    if (!text.empty() && text.front() == '{') {
      if (text.back() != '}')
        throw std::invalid_argument("config key '" + key +
                                    "': unbalanced braces");
      text = text.substr(1, text.size() - 2);
    }
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
      const auto begin = item.find_first_not_of(" \t");
      const auto end = item.find_last_not_of(" \t");
      if (begin == std::string::npos)
        throw std::invalid_argument("config key '" + key + "': empty element");
      items.push_back(item.substr(begin, end - begin + 1));
    }
    if (items.empty())
      throw std::invalid_argument("config key '" + key + "': empty list");
    return items;
  }

  std::map<std::string, std::string> kv_;
  mutable std::map<std::string, std::string> resolved_;
};

// --- run manifest ---

struct ManifestData {
  std::string experiment;
  std::map<std::string, std::string> config;  // resolved echo incl. defaults
  std::vector<std::pair<std::string, std::string>> results;
  bool all_passed = false;
  std::string generated_at;  // the only place a timestamp may appear
};

inline std::string manifest_document(const ManifestData& data) {
  nlohmann::ordered_json doc;
  doc["experiment"] = data.experiment;
  doc["library_version"] = std::string(kVersion);
  doc["generated_at"] = data.generated_at;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : data.config) config[key] = value;
  doc["config"] = std::move(config);
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  for (const auto& [key, value] : data.results) results[key] = value;
  doc["results"] = std::move(results);
  doc["all_passed"] = data.all_passed;
  return doc.dump(2) + "\n";
}

inline void save_manifest(const std::filesystem::path& path,
                          const ManifestData& data) {
  detail::write_text_file(path, manifest_document(data));
}

}  // namespace ptrig::io

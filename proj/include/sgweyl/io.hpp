#pragma once
//
// CSV and JSON serialization of spectra and fits.
//
// CSV: comma separated, '#'-prefixed header lines of the form "# key=value".
// Doubles are written with 17 significant digits, which round-trips exactly.
//

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgweyl/asymptotics.hpp"
#include "sgweyl/core.hpp"
#include "sgweyl/spectrum.hpp"

namespace sgweyl {

using json = nlohmann::json;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s, const std::string& what) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw IoError("schema mismatch: cannot parse " + what + " from '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> header;  // "# key=value" lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  const std::string* header_value(const std::string& key) const {
    for (const auto& [k, v] : header)
      if (k == key) return &v;
    return nullptr;
  }
};

/// Reads '#' header lines, then an optional line of column names, then
/// numeric rows.
inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  bool first_data = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = line.substr(1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        auto k = body.substr(0, eq);
        k.erase(0, k.find_first_not_of(' '));
        t.header.emplace_back(k, body.substr(eq + 1));
      }
      continue;
    }
    auto cells = split(line, ',');
    if (first_data) {
      first_data = false;
      double probe = 0.0;
      const auto& c0 = cells[0];
      auto [p, ec] = std::from_chars(c0.data(), c0.data() + c0.size(), probe);
      if (ec != std::errc()) {
        t.columns = cells;
        continue;
      }
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c, "value in '" + path + "'"));
    if (!t.rows.empty() && row.size() != t.rows.front().size())
      throw IoError("schema mismatch: ragged rows in '" + path + "'");
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// SpectralData

inline json config_json(const DiscretizationConfig& c) {
  return json{{"dimension", c.dimension},
              {"half_width", c.half_width},
              {"grid_points", c.grid_points},
              {"scheme_order", c.scheme_order},
              {"mapping", to_string(c.mapping)},
              {"operator", to_string(c.op)}};
}

inline json spectrum_json(const SpectralData& s) {
  json j = config_json(s.config);
  j["count"] = s.eigenvalues.size();
  j["trusted_count"] = s.trusted_count;
  return j;
}

inline void write_spectrum_csv(const SpectralData& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  const auto& c = s.config;
  out << "# sgweyl spectrum\n"
      << "# dimension=" << c.dimension << "\n"
      << "# half_width=" << format_double(c.half_width) << "\n"
      << "# grid_points=" << c.grid_points << "\n"
      << "# scheme_order=" << c.scheme_order << "\n"
      << "# mapping=" << to_string(c.mapping) << "\n"
      << "# operator=" << to_string(c.op) << "\n"
      << "# trusted_count=" << s.trusted_count << "\n"
      << "eigenvalue\n";
  for (double v : s.eigenvalues) out << format_double(v) << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("schema mismatch: invalid JSON in '" + path + "': " + e.what());
  }
}

/// Writes `<path>` (CSV) and `<path>.json` (sidecar).
inline void write_spectrum(const SpectralData& s, const std::string& csv_path) {
  write_spectrum_csv(s, csv_path);
  write_json(spectrum_json(s), csv_path + ".json");
}

/// Reads a spectrum CSV. The sidecar `<path>.json`, when present, must agree
/// with the CSV header.
inline SpectralData read_spectrum(const std::string& csv_path) {
  const auto t = read_csv(csv_path);
  auto get = [&](const std::string& key) -> std::string {
    const auto* v = t.header_value(key);
    if (!v) throw IoError("schema mismatch: '" + csv_path + "' lacks header '" + key + "'");
    return *v;
  };
  SpectralData s;
  try {
    s.config.dimension = std::stoi(get("dimension"));
    s.config.half_width = parse_double(get("half_width"), "half_width");
    s.config.grid_points = std::stoi(get("grid_points"));
    s.config.scheme_order = std::stoi(get("scheme_order"));
    s.config.mapping = parse_mapping(get("mapping"));
    s.config.op = parse_operator(get("operator"));
    s.trusted_count = std::stoi(get("trusted_count"));
  } catch (const std::invalid_argument&) {
    throw IoError("schema mismatch: malformed header in '" + csv_path + "'");
  } catch (const ValidationError& e) {
    throw IoError(std::string("schema mismatch: ") + e.what());
  }
  for (const auto& row : t.rows) {
    if (row.size() != 1) throw IoError("schema mismatch: spectrum CSV must have one column");
    s.eigenvalues.push_back(row[0]);
  }
  try {
    validate(s);
  } catch (const ValidationError& e) {
    throw IoError(std::string("schema mismatch: ") + e.what());
  }
  std::ifstream sidecar(csv_path + ".json");
  if (sidecar) {
    const auto j = read_json(csv_path + ".json");
    if (j != spectrum_json(s))
      throw IoError("schema mismatch: sidecar '" + csv_path + ".json' disagrees with the CSV");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Fits

inline json fit_json(const WeylFit& f) {
  json j{{"d_over_m", f.d_over_m},         {"window_min", f.window_min},
         {"window_max", f.window_max},     {"residual_sup", f.residual_sup},
         {"condition", f.condition},       {"n_points", f.n_points}};
  for (const auto& [tag, w] : f.coefficients) j[key(tag)] = w;
  return j;
}

inline WeylFit fit_from_json(const json& j) {
  WeylFit f;
  try {
    f.d_over_m = j.at("d_over_m").get<double>();
    f.window_min = j.at("window_min").get<double>();
    f.window_max = j.at("window_max").get<double>();
    f.residual_sup = j.at("residual_sup").get<double>();
    f.condition = j.at("condition").get<double>();
    f.n_points = j.at("n_points").get<int>();
    for (int k = 0; k <= 1; ++k)
      for (int jj = 0; jj <= 1; ++jj) {
        const auto name = key({k, jj});
        if (j.contains(name)) f.coefficients[{k, jj}] = j.at(name).get<double>();
      }
  } catch (const json::exception& e) {
    throw IoError(std::string("schema mismatch: malformed fit JSON: ") + e.what());
  }
  return f;
}

/// Two-column CSV of (lambda, N(lambda)).
inline std::vector<FitPoint> read_points(const std::string& path) {
  const auto t = read_csv(path);
  std::vector<FitPoint> pts;
  for (const auto& row : t.rows) {
    if (row.size() != 2) throw IoError("schema mismatch: fit points CSV needs two columns");
    pts.push_back({row[0], row[1]});
  }
  return pts;
}

inline void write_points(std::span<const FitPoint> pts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "lambda,count\n";
  for (const auto& p : pts) out << format_double(p.lambda) << "," << format_double(p.count) << "\n";
}

}  // namespace sgweyl

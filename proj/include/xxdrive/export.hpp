// Copyright 2026 The xxdrive Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xxdrive/errors.hpp"
#include "xxdrive/steady_state_exact.hpp"
#include "xxdrive/transport.hpp"

namespace xxdrive {

enum class Format { csv, json };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ParameterError("unknown format '" + s + "' (expected csv or json)");
}

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kSweepCsvHeader = "omega,n,eps,mu0,method,current_re,current_im,current_abs";

namespace detail {

inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw IoError("cannot parse number '" + s + "'");
  return v;
}

inline std::string method_label(const SweepRecord& r) {
  return r.failed ? "failed" : std::string(to_string(r.method));
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace detail

/// Records as CSV (header always written) or a JSON array of objects with the
/// same field names. Failed points carry method "failed", NaN currents in
/// CSV, null currents plus an "error" string in JSON.
inline std::string format_records(const std::vector<SweepRecord>& records, Format format) {
  if (format == Format::csv) {
    std::ostringstream os;
    os << kSweepCsvHeader << '\n';
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : records)
      os << detail::fmt17(r.omega) << ',' << r.n << ',' << detail::fmt17(r.eps) << ',' << detail::fmt17(r.mu0)
         << ',' << detail::method_label(r) << ',' << detail::fmt17(r.failed ? nan : r.current_re) << ','
         << detail::fmt17(r.failed ? nan : r.current_im) << ',' << detail::fmt17(r.failed ? nan : r.current_abs)
         << '\n';
    return os.str();
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j = {{"omega", r.omega}, {"n", r.n},     {"eps", r.eps},
                        {"mu0", r.mu0},     {"method", detail::method_label(r)}};
    if (r.failed) {
      j["current_re"] = nullptr;
      j["current_im"] = nullptr;
      j["current_abs"] = nullptr;
      j["error"] = r.error;
    } else {
      j["current_re"] = r.current_re;
      j["current_im"] = r.current_im;
      j["current_abs"] = r.current_abs;
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

inline std::vector<SweepRecord> parse_records(const std::string& text, Format format) {
  std::vector<SweepRecord> out;
  auto fill_method = [](SweepRecord& r, const std::string& m) {
    if (m == "failed") {
      r.failed = true;
    } else {
      r.method = parse_method(m);
    }
  };
  if (format == Format::csv) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kSweepCsvHeader) throw IoError("sweep CSV: missing or wrong header");
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const auto c = detail::split_csv(line);
      if (c.size() != 8) throw IoError("sweep CSV: expected 8 columns in '" + line + "'");
      SweepRecord r;
      r.omega = detail::parse_double(c[0]);
      r.n = std::stoi(c[1]);
      r.eps = detail::parse_double(c[2]);
      r.mu0 = detail::parse_double(c[3]);
      fill_method(r, c[4]);
      r.current_re = detail::parse_double(c[5]);
      r.current_im = detail::parse_double(c[6]);
      r.current_abs = detail::parse_double(c[7]);
      out.push_back(std::move(r));
    }
    return out;
  }
  const auto arr = nlohmann::json::parse(text);
  for (const auto& j : arr) {
    SweepRecord r;
    r.omega = j.at("omega").get<double>();
    r.n = j.at("n").get<int>();
    r.eps = j.at("eps").get<double>();
    r.mu0 = j.at("mu0").get<double>();
    fill_method(r, j.at("method").get<std::string>());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.current_re = j.at("current_re").is_null() ? nan : j.at("current_re").get<double>();
    r.current_im = j.at("current_im").is_null() ? nan : j.at("current_im").get<double>();
    r.current_abs = j.at("current_abs").is_null() ? nan : j.at("current_abs").get<double>();
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

/// |C_jk| as CSV rows (row = j) or nested JSON arrays.
inline std::string format_heatmap(const CovarianceMatrix& C, Format format) {
  const int n = C.n();
  if (format == Format::csv) {
    std::ostringstream os;
    for (int j = 1; j <= n; ++j) {
      for (int k = 1; k <= n; ++k) os << (k > 1 ? "," : "") << detail::fmt17(std::abs(C(j, k)));
      os << '\n';
    }
    return os.str();
  }
  nlohmann::json rows = nlohmann::json::array();
  for (int j = 1; j <= n; ++j) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 1; k <= n; ++k) row.push_back(std::abs(C(j, k)));
    rows.push_back(std::move(row));
  }
  return rows.dump() + "\n";
}

inline std::vector<std::vector<double>> parse_heatmap(const std::string& text, Format format) {
  std::vector<std::vector<double>> out;
  if (format == Format::csv) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      for (const auto& c : detail::split_csv(line)) row.push_back(detail::parse_double(c));
      out.push_back(std::move(row));
    }
    return out;
  }
  return nlohmann::json::parse(text).get<std::vector<std::vector<double>>>();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

inline void export_records(const std::vector<SweepRecord>& records, Format format, const std::string& path) {
  write_text(path, format_records(records, format));
}

inline std::vector<SweepRecord> import_records(const std::string& path, Format format) {
  try {
    return parse_records(read_text(path), format);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

}  // namespace xxdrive

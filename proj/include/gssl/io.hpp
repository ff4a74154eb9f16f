#pragma once

// Dataset and result persistence. Floating point values are written with
// %.17g so files round-trip exactly and reruns are byte-identical.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gssl/config.hpp"
#include "gssl/error.hpp"
#include "gssl/experiments.hpp"
#include "gssl/models.hpp"

namespace gssl {

inline constexpr int kResultSchemaVersion = 1;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Datasets: header x0,...,x{d-1},label

inline std::string dataset_to_csv(const Dataset& data) {
  std::string out;
  for (std::size_t k = 0; k < data.dim(); ++k) out += "x" + std::to_string(k) + ",";
  out += "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t k = 0; k < data.dim(); ++k)
      out += format_double(data.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))) + ",";
    out += data.indicator[i] ? "1\n" : "0\n";
  }
  return out;
}

inline Dataset dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "dataset: empty file", ErrorKind::Schema);
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  require(header.size() >= 2 && header.back() == "label", "dataset: header must end with 'label'", ErrorKind::Schema);
  const std::size_t d = header.size() - 1;
  for (std::size_t k = 0; k < d; ++k)
    require(header[k] == "x" + std::to_string(k), "dataset: unexpected column '" + header[k] + "'", ErrorKind::Schema);
  std::vector<double> coords;
  Dataset data;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    std::stringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    require(cells.size() == d + 1, "dataset: row " + std::to_string(row) + " has the wrong number of fields",
            ErrorKind::Schema);
    for (std::size_t k = 0; k < d; ++k) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[k], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == cells[k].size() && used > 0, "dataset: row " + std::to_string(row) + " has a bad number",
              ErrorKind::Schema);
      coords.push_back(v);
    }
    require(cells[d] == "0" || cells[d] == "1", "dataset: label must be 0 or 1", ErrorKind::Schema);
    data.indicator.push_back(cells[d] == "1" ? 1 : 0);
  }
  data.points.resize(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < row; ++i)
    for (std::size_t k = 0; k < d; ++k)
      data.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = coords[i * d + k];
  return data;
}

// ---------------------------------------------------------------------------
// Results

namespace detail {

inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

inline double number_from(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace detail

inline nlohmann::json result_to_json(const ExperimentResult& r, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["schema_version"] = kResultSchemaVersion;
  j["kind"] = "gssl-result";
  j["experiment"] = r.experiment;
  j["config"] = config_to_json(cfg);
  nlohmann::json refs = nlohmann::json::object();
  for (const auto& [k, v] : r.references) refs[k] = detail::number_or_null(v);
  j["references"] = refs;
  j["reference_note"] = r.reference_note;
  j["rank_deficient_solves"] = r.rank_deficient_solves;
  j["failed_repetitions"] = r.failed_count();
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& rec : r.repetitions) {
    nlohmann::json x{{"index", rec.index}, {"seed", rec.seed}, {"n", rec.n}, {"sigma", rec.sigma}, {"failed", rec.failed}};
    if (rec.failed) x["error"] = rec.error;
    reps.push_back(x);
  }
  j["repetitions"] = reps;
  nlohmann::json series = nlohmann::json::array();
  for (const auto& s : r.series) {
    nlohmann::json vals = nlohmann::json::array();
    for (double v : s.values) vals.push_back(detail::number_or_null(v));
    series.push_back({{"signal", s.signal},
                      {"abscissa", s.abscissa},
                      {"sigma", s.sigma},
                      {"records", s.records},
                      {"values", vals},
                      {"mean", detail::number_or_null(s.mean)},
                      {"std", detail::number_or_null(s.stddev)},
                      {"reference", detail::number_or_null(s.reference)}});
  }
  j["series"] = series;
  if (r.sample_spectrum.size() > 0) j["sample_spectrum"] = detail::vector_to_json(r.sample_spectrum);
  return j;
}

inline ExperimentResult result_from_json(const nlohmann::json& j) {
  ExperimentResult r;
  try {
    require(j.is_object() && j.value("kind", std::string()) == "gssl-result", "result: not a result file",
            ErrorKind::Schema);
    require(j.at("schema_version").get<int>() == kResultSchemaVersion, "result: unsupported schema_version",
            ErrorKind::Schema);
    r.experiment = j.at("experiment").get<std::string>();
    for (const auto& [k, v] : j.at("references").items()) r.references.emplace_back(k, detail::number_from(v));
    r.reference_note = j.value("reference_note", std::string());
    r.rank_deficient_solves = j.value("rank_deficient_solves", std::size_t{0});
    for (const auto& x : j.at("repetitions")) {
      RepetitionRecord rec;
      rec.index = x.at("index").get<std::size_t>();
      rec.seed = x.at("seed").get<std::uint64_t>();
      rec.n = x.at("n").get<std::size_t>();
      rec.sigma = x.at("sigma").get<double>();
      rec.failed = x.at("failed").get<bool>();
      rec.error = x.value("error", std::string());
      r.repetitions.push_back(rec);
    }
    for (const auto& x : j.at("series")) {
      Series s;
      s.signal = x.at("signal").get<std::string>();
      s.abscissa = x.at("abscissa").get<double>();
      s.sigma = x.at("sigma").get<double>();
      s.records = x.at("records").get<std::vector<std::size_t>>();
      for (const auto& v : x.at("values")) s.values.push_back(detail::number_from(v));
      s.mean = detail::number_from(x.at("mean"));
      s.stddev = detail::number_from(x.at("std"));
      s.reference = detail::number_from(x.at("reference"));
      require(s.records.size() == s.values.size(), "result: series records and values differ in length",
              ErrorKind::Schema);
      for (std::size_t idx : s.records)
        require(idx < r.repetitions.size(), "result: series refers to a missing repetition", ErrorKind::Schema);
      r.series.push_back(std::move(s));
    }
    if (j.contains("sample_spectrum")) r.sample_spectrum = detail::vector_from_json(j.at("sample_spectrum"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("result: ") + e.what());
  }
  return r;
}

// Aggregate curve, one row per sweep point. Column sets per experiment:
//   bandwidth, bandwidth-sweep: signal,n,sigma,mean,std,reference
//   reconstruction:             fraction,mean_error,std_error,reference_mass
//   cut:                        n,sigma,mean,std,median_abs_deviation,reference
//   esd:                        t,mean_fraction,std_fraction,reference_mass
inline std::string result_to_csv(const ExperimentResult& r) {
  std::string out;
  const auto f = format_double;
  if (r.experiment == "reconstruction") {
    out = "fraction,mean_error,std_error,reference_mass\n";
    for (const auto& s : r.series)
      out += f(s.abscissa) + "," + f(s.mean) + "," + f(s.stddev) + "," + f(s.reference) + "\n";
  } else if (r.experiment == "cut") {
    out = "n,sigma,mean,std,median_abs_deviation,reference\n";
    for (const auto& s : r.series)
      out += f(s.abscissa) + "," + f(s.sigma) + "," + f(s.mean) + "," + f(s.stddev) + "," +
             f(s.median_abs_deviation()) + "," + f(s.reference) + "\n";
  } else if (r.experiment == "esd") {
    out = "t,mean_fraction,std_fraction,reference_mass\n";
    for (const auto& s : r.series)
      out += f(s.abscissa) + "," + f(s.mean) + "," + f(s.stddev) + "," + f(s.reference) + "\n";
  } else {
    out = "signal,n,sigma,mean,std,reference\n";
    for (const auto& s : r.series)
      out += s.signal + "," + f(s.abscissa) + "," + f(s.sigma) + "," + f(s.mean) + "," + f(s.stddev) + "," +
             f(s.reference) + "\n";
  }
  return out;
}

}  // namespace gssl

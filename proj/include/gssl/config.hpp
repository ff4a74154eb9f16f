#pragma once

// JSON experiment configs. A config either names a preset model
// ("gmm-paper", "nonsep-paper") or spells the model out; config_to_json
// always writes the full model so a snapshot parses back to the same config.
//
//   {
//     "schema_version": 1,
//     "model": "gmm-paper",
//     "boundaries": ["S1", "S2", "S3", "S4", "S5"],
//     "n": 2500, "sigma": 0.1, "energy_tol": 1e-4, "repetitions": 20,
//     "base_seed": 1
//   }
//
// Optional keys: n_sweep, sigma_schedule {scale, exponent}, m,
// rate_params {m0, sigma0, x, y}, label_fractions, label_fraction_step,
// t_grid {lo, hi, points}, mc_samples, threads, max_failure_fraction.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gssl/error.hpp"
#include "gssl/experiments.hpp"
#include "gssl/models.hpp"

namespace gssl {

inline constexpr int kConfigSchemaVersion = 1;

inline const std::vector<std::string>& model_preset_names() {
  static const std::vector<std::string> names{"gmm-paper", "nonsep-paper"};
  return names;
}

inline std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& s : names) out += (out.empty() ? "" : ", ") + s;
  return out;
}

namespace detail {

inline void schema_require(bool cond, const std::string& msg) { require(cond, "config: " + msg, ErrorKind::Schema); }

inline const char* boundary_kind_name(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::VerticalLine: return "vertical-line";
    case BoundaryKind::HorizontalLine: return "horizontal-line";
    case BoundaryKind::Parabola: return "parabola";
    case BoundaryKind::Circle: return "circle";
  }
  return "vertical-line";
}

inline BoundaryKind boundary_kind_from(const std::string& s) {
  if (s == "vertical-line") return BoundaryKind::VerticalLine;
  if (s == "horizontal-line") return BoundaryKind::HorizontalLine;
  if (s == "parabola") return BoundaryKind::Parabola;
  if (s == "circle") return BoundaryKind::Circle;
  throw Error(ErrorKind::Schema,
              "config: unknown boundary kind '" + s + "' (valid: vertical-line, horizontal-line, parabola, circle)");
}

inline nlohmann::json boundary_to_json(const BoundarySpec& b) {
  return {{"name", b.name}, {"kind", boundary_kind_name(b.kind)}, {"parameter", b.parameter},
          {"complement", b.complement}};
}

inline BoundarySpec boundary_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    try {
      return boundary_preset(name);
    } catch (const Error& e) {
      throw Error(ErrorKind::Schema, std::string("config: ") + e.what());
    }
  }
  schema_require(j.is_object(), "boundary must be a preset name or an object");
  BoundarySpec b;
  b.kind = boundary_kind_from(j.at("kind").get<std::string>());
  b.parameter = j.at("parameter").get<double>();
  b.complement = j.value("complement", false);
  b.name = j.value("name", std::string("custom"));
  return b;
}

inline Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  schema_require(j.is_array() && !j.empty(), "expected a non-empty numeric array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

inline nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline nlohmann::json model_to_json(const ModelSpec& model) {
  if (const auto* s = std::get_if<SeparableModelSpec>(&model)) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : s->components)
      comps.push_back({{"mean", vector_to_json(c.mean)}, {"covariance_scale", c.covariance_scale}, {"weight", c.weight}});
    return {{"type", "separable"}, {"components", comps}, {"boundary", boundary_to_json(s->boundary)}};
  }
  const auto& ns = std::get<NonseparableModelSpec>(model);
  return {{"type", "nonseparable"},
          {"class_offsets", {{ns.class_offsets[0](0), ns.class_offsets[0](1)}, {ns.class_offsets[1](0), ns.class_offsets[1](1)}}},
          {"alpha_a", ns.alpha_a},
          {"alpha_ac", ns.alpha_ac}};
}

inline ModelSpec model_from_json(const nlohmann::json& j, std::string& name) {
  if (j.is_string()) {
    name = j.get<std::string>();
    if (name == "gmm-paper") return gmm_paper();
    if (name == "nonsep-paper") return nonsep_paper();
    throw Error(ErrorKind::Schema,
                "config: unknown model preset '" + name + "' (valid presets: " + join_names(model_preset_names()) + ")");
  }
  schema_require(j.is_object(), "model must be a preset name or an object");
  name = j.value("name", std::string("custom"));
  const std::string type = j.at("type").get<std::string>();
  if (type == "separable") {
    SeparableModelSpec s;
    for (const auto& c : j.at("components"))
      s.components.push_back({vector_from_json(c.at("mean")), c.at("covariance_scale").get<double>(),
                              c.at("weight").get<double>()});
    s.boundary = j.contains("boundary") ? boundary_from_json(j.at("boundary")) : boundary_preset("S1");
    return s;
  }
  if (type == "nonseparable") {
    NonseparableModelSpec s;
    if (j.contains("class_offsets")) {
      const auto& o = j.at("class_offsets");
      schema_require(o.is_array() && o.size() == 2, "class_offsets must hold two 2-D points");
      for (std::size_t k = 0; k < 2; ++k) {
        const Eigen::VectorXd v = vector_from_json(o[k]);
        schema_require(v.size() == 2, "class offsets must be 2-D");
        s.class_offsets[k] = v;
      }
    }
    s.alpha_a = j.value("alpha_a", s.alpha_a);
    s.alpha_ac = j.value("alpha_ac", s.alpha_ac);
    return s;
  }
  throw Error(ErrorKind::Schema, "config: unknown model type '" + type + "' (valid: separable, nonseparable)");
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::schema_require;
  schema_require(j.is_object(), "top level must be an object");
  const int version = j.value("schema_version", kConfigSchemaVersion);
  schema_require(version == kConfigSchemaVersion,
                 "unsupported schema_version " + std::to_string(version));
  ExperimentConfig cfg;
  try {
    cfg.model = detail::model_from_json(j.at("model"), cfg.model_name);
    if (j.contains("boundaries")) {
      for (const auto& b : j.at("boundaries")) {
        if (b.is_string() && b.get<std::string>() == "A") {
          schema_require(!cfg.separable(), "boundary 'A' needs a nonseparable model");
          continue;
        }
        schema_require(cfg.separable(), "boundaries S1-S5 need a separable model");
        cfg.boundaries.push_back(detail::boundary_from_json(b));
      }
    } else if (cfg.separable()) {
      if (cfg.model_name == "gmm-paper")
        for (const char* s : {"S1", "S2", "S3", "S4", "S5"}) cfg.boundaries.push_back(boundary_preset(s));
      else
        cfg.boundaries.push_back(std::get<SeparableModelSpec>(cfg.model).boundary);
    }
    // The dataset label follows the first tracked boundary.
    if (auto* s = std::get_if<SeparableModelSpec>(&cfg.model); s && !cfg.boundaries.empty())
      s->boundary = cfg.boundaries.front();
    cfg.n = j.value("n", cfg.n);
    if (j.contains("n_sweep")) cfg.n_sweep = j.at("n_sweep").get<std::vector<std::size_t>>();
    cfg.sigma = j.value("sigma", cfg.sigma);
    if (j.contains("sigma_schedule")) {
      const auto& s = j.at("sigma_schedule");
      cfg.sigma_schedule = SigmaSchedule{s.at("scale").get<double>(), s.at("exponent").get<double>()};
    }
    if (j.contains("m")) cfg.m = j.at("m").get<int>();
    if (j.contains("rate_params")) {
      const auto& r = j.at("rate_params");
      cfg.rate_params = RateParams{r.at("m0").get<double>(), r.at("sigma0").get<double>(), r.at("x").get<double>(),
                                   r.at("y").get<double>()};
    }
    cfg.repetitions = j.value("repetitions", cfg.repetitions);
    cfg.energy_tol = j.value("energy_tol", cfg.energy_tol);
    if (j.contains("label_fractions")) cfg.label_fractions = j.at("label_fractions").get<std::vector<double>>();
    if (j.contains("label_fraction_step")) cfg.label_fraction_step = j.at("label_fraction_step").get<double>();
    if (j.contains("t_grid")) {
      const auto& t = j.at("t_grid");
      cfg.t_lo = t.at("lo").get<double>();
      cfg.t_hi = t.at("hi").get<double>();
      cfg.t_points = t.at("points").get<std::size_t>();
    }
    cfg.mc_samples = j.value("mc_samples", cfg.mc_samples);
    cfg.base_seed = j.value("base_seed", cfg.base_seed);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.max_failure_fraction = j.value("max_failure_fraction", cfg.max_failure_fraction);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("config: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Schema, e.what());
  }
  return cfg;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["model"] = detail::model_to_json(cfg.model);
  j["model"]["name"] = cfg.model_name;
  nlohmann::json bs = nlohmann::json::array();
  if (cfg.separable())
    for (const auto& b : cfg.boundaries) bs.push_back(detail::boundary_to_json(b));
  else
    bs.push_back("A");
  j["boundaries"] = bs;
  j["n"] = cfg.n;
  if (!cfg.n_sweep.empty()) j["n_sweep"] = cfg.n_sweep;
  j["sigma"] = cfg.sigma;
  if (cfg.sigma_schedule)
    j["sigma_schedule"] = {{"scale", cfg.sigma_schedule->scale}, {"exponent", cfg.sigma_schedule->exponent}};
  if (cfg.m) j["m"] = *cfg.m;
  if (cfg.rate_params)
    j["rate_params"] = {{"m0", cfg.rate_params->m0}, {"sigma0", cfg.rate_params->sigma0},
                        {"x", cfg.rate_params->x}, {"y", cfg.rate_params->y}};
  j["repetitions"] = cfg.repetitions;
  j["energy_tol"] = cfg.energy_tol;
  if (!cfg.label_fractions.empty()) j["label_fractions"] = cfg.label_fractions;
  if (cfg.label_fraction_step) j["label_fraction_step"] = *cfg.label_fraction_step;
  j["t_grid"] = {{"lo", cfg.t_lo}, {"hi", cfg.t_hi}, {"points", cfg.t_points}};
  j["mc_samples"] = cfg.mc_samples;
  j["base_seed"] = cfg.base_seed;
  j["threads"] = cfg.threads;
  j["max_failure_fraction"] = cfg.max_failure_fraction;
  return j;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Schema, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

}  // namespace gssl

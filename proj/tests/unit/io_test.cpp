#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <gtest/gtest.h>

#include "gssl/config.hpp"
#include "gssl/io.hpp"
#include "gssl/plot.hpp"

using namespace gssl;
using nlohmann::json;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no gssl::Error thrown";
  return ErrorKind::Numerical;
}

json smoke_json() {
  return json::parse(R"({
    "model": "gmm-paper", "boundaries": ["S1", "S3"], "n": 150, "sigma": 0.2,
    "repetitions": 2, "label_fraction_step": 0.1, "mc_samples": 5000, "base_seed": 3,
    "t_grid": {"lo": 0.0, "hi": 0.5, "points": 6}
  })");
}

}  // namespace

TEST(Config, ParsesPresetAndDefaults) {
  const auto c = config_from_json(smoke_json());
  EXPECT_EQ(c.model_name, "gmm-paper");
  ASSERT_EQ(c.boundaries.size(), 2u);
  EXPECT_EQ(c.boundaries[1].name, "S3");
  EXPECT_EQ(std::get<SeparableModelSpec>(c.model).boundary.name, "S1");
  EXPECT_EQ(c.n, 150u);
  EXPECT_EQ(c.t_points, 6u);
  EXPECT_EQ(c.energy_tol, 1e-4);

  const auto all = config_from_json(json{{"model", "gmm-paper"}});
  EXPECT_EQ(all.boundaries.size(), 5u);
  const auto ns = config_from_json(json{{"model", "nonsep-paper"}, {"boundaries", {"A"}}});
  EXPECT_FALSE(ns.separable());
}

TEST(Config, RoundTripIsStable) {
  auto c = config_from_json(smoke_json());
  c.rate_params = RateParams{1.5, 0.8, 0.5, 0.3};
  c.n_sweep = {100, 200};
  const json j1 = config_to_json(c);
  const json j2 = config_to_json(config_from_json(j1));
  EXPECT_EQ(j1, j2);

  auto ns = config_from_json(json{{"model", "nonsep-paper"}, {"sigma_schedule", {{"scale", 1.0}, {"exponent", -0.2}}}});
  EXPECT_EQ(config_to_json(ns), config_to_json(config_from_json(config_to_json(ns))));
}

TEST(Config, CustomModelObject) {
  const json j = json::parse(R"({
    "model": {"type": "separable", "name": "one-bump",
              "components": [{"mean": [0.5, 0.0], "covariance_scale": 0.3, "weight": 1.0}]},
    "boundaries": [{"kind": "circle", "parameter": 0.4, "name": "disc"}]
  })");
  const auto c = config_from_json(j);
  EXPECT_EQ(c.model_name, "one-bump");
  EXPECT_EQ(c.boundaries[0].kind, BoundaryKind::Circle);
  EXPECT_EQ(c.boundaries[0].parameter, 0.4);
}

TEST(Config, InvalidPresetListsValidNames) {
  try {
    config_from_json(json{{"model", "gmm-typo"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Schema);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("gmm-typo"), std::string::npos);
    EXPECT_NE(msg.find("gmm-paper"), std::string::npos);
    EXPECT_NE(msg.find("nonsep-paper"), std::string::npos);
  }
}

TEST(Config, SchemaErrors) {
  EXPECT_EQ(kind_of([] { config_from_json(json{{"model", "gmm-paper"}, {"boundaries", {"A"}}}); }), ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { config_from_json(json{{"model", "nonsep-paper"}, {"boundaries", {"S1"}}}); }),
            ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { config_from_json(json{{"model", "gmm-paper"}, {"n", "many"}}); }), ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { config_from_json(json{{"model", "gmm-paper"}, {"repetitions", 0}}); }), ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { config_from_json(json{{"model", "gmm-paper"}, {"boundaries", {"S9"}}}); }),
            ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { config_from_json(json::array()); }), ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { config_from_json(json{{"n", 10}}); }), ErrorKind::Schema);
}

TEST(Config, TruncatedFileIsSchemaError) {
  const std::string path = ::testing::TempDir() + "gssl_truncated.json";
  const std::string full = smoke_json().dump();
  write_text_file(path, full.substr(0, full.size() / 2));
  EXPECT_EQ(kind_of([&] { load_config(path); }), ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { load_config("/nonexistent/dir/config.json"); }), ErrorKind::Io);
}

TEST(Dataset, CsvRoundTripIsBitExact) {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const Dataset d = sample(gmm_paper("S5"), 64, seed);
    const std::string csv = dataset_to_csv(d);
    const Dataset back = dataset_from_csv(csv);
    ASSERT_EQ(back.size(), d.size());
    ASSERT_EQ(back.dim(), 2u);
    for (Eigen::Index i = 0; i < d.points.rows(); ++i)
      for (Eigen::Index k = 0; k < 2; ++k) EXPECT_EQ(back.points(i, k), d.points(i, k));
    EXPECT_EQ(back.indicator, d.indicator);
    EXPECT_EQ(dataset_to_csv(back), csv);
  }
}

TEST(Dataset, MalformedCsvIsSchemaError) {
  const std::string csv = dataset_to_csv(sample(nonsep_paper(), 10, 4));
  const auto cut_at = csv.find('\n', csv.size() / 2);
  const std::string truncated = csv.substr(0, cut_at + 8);  // ends inside a row
  EXPECT_EQ(kind_of([&] { dataset_from_csv(truncated); }), ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { dataset_from_csv(""); }), ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { dataset_from_csv("a,b,label\n1,2,0\n"); }), ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { dataset_from_csv("x0,x1,label\n1,2,3\n"); }), ErrorKind::Schema);
  EXPECT_EQ(kind_of([] { dataset_from_csv("x0,x1,label\n1,2x,1\n"); }), ErrorKind::Schema);
}

TEST(Result, JsonRoundTrip) {
  ExperimentConfig c = config_from_json(smoke_json());
  ExperimentResult r = run_bandwidth_experiment(c);
  r.series[0].values[1] = std::numeric_limits<double>::quiet_NaN();
  r.repetitions[1].failed = true;
  r.repetitions[1].error = "boom";
  const json j = result_to_json(r, c);
  EXPECT_TRUE(j["series"][0]["values"][1].is_null());
  EXPECT_EQ(j["failed_repetitions"], 1);
  const ExperimentResult back = result_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.experiment, r.experiment);
  ASSERT_EQ(back.series.size(), r.series.size());
  EXPECT_TRUE(std::isnan(back.series[0].values[1]));
  EXPECT_EQ(back.series[0].values[0], r.series[0].values[0]);
  EXPECT_EQ(back.series[1].mean, r.series[1].mean);
  EXPECT_EQ(back.repetitions[1].error, "boom");
  EXPECT_EQ(back.references, r.references);
  EXPECT_EQ(result_to_json(back, c), j);
}

TEST(Result, RejectsInconsistentJson) {
  ExperimentConfig c = config_from_json(smoke_json());
  json j = result_to_json(run_bandwidth_experiment(c), c);
  json bad = j;
  bad["series"][0]["records"][0] = 999;
  EXPECT_EQ(kind_of([&] { result_from_json(bad); }), ErrorKind::Schema);
  bad = j;
  bad.erase("series");
  EXPECT_EQ(kind_of([&] { result_from_json(bad); }), ErrorKind::Schema);
  bad = j;
  bad["kind"] = "other";
  EXPECT_EQ(kind_of([&] { result_from_json(bad); }), ErrorKind::Schema);
}

TEST(Result, CsvHeaders) {
  ExperimentResult r;
  r.experiment = "reconstruction";
  Series s;
  s.abscissa = 0.25, s.mean = 0.1, s.stddev = 0.0, s.reference = 0.3;
  r.series.push_back(s);
  EXPECT_EQ(result_to_csv(r), "fraction,mean_error,std_error,reference_mass\n0.25,0.10000000000000001,0,0.29999999999999999\n");
  r.experiment = "esd";
  EXPECT_EQ(result_to_csv(r).substr(0, result_to_csv(r).find('\n')), "t,mean_fraction,std_fraction,reference_mass");
  r.experiment = "cut";
  EXPECT_EQ(result_to_csv(r).substr(0, result_to_csv(r).find('\n')), "n,sigma,mean,std,median_abs_deviation,reference");
  r.experiment = "bandwidth";
  EXPECT_EQ(result_to_csv(r).substr(0, result_to_csv(r).find('\n')), "signal,n,sigma,mean,std,reference");
}

TEST(Result, FormatDouble) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Plot, SvgIsWellFormedForEveryExperiment) {
  ExperimentConfig c = config_from_json(smoke_json());
  c.n = 60;
  for (const ExperimentResult& r : {run_bandwidth_experiment(c), run_reconstruction_experiment(c), run_esd_experiment(c)}) {
    const std::string svg = render_svg(figure_for(r));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_EQ(svg.find("nan"), std::string::npos);
    EXPECT_EQ(svg.find("inf"), std::string::npos);
  }
  Plot empty;
  empty.title = "a < b & c";
  const std::string svg = render_svg(empty);
  EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
}

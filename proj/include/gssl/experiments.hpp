#pragma once

// Monte Carlo drivers: each repetition samples a fresh dataset from a seed
// derived from (base_seed, stream, repetition), so repetitions are
// independent tasks and results do not depend on scheduling.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gssl/error.hpp"
#include "gssl/graph.hpp"
#include "gssl/models.hpp"
#include "gssl/numeric.hpp"
#include "gssl/rng.hpp"
#include "gssl/sampling.hpp"
#include "gssl/spectral.hpp"

namespace gssl {

struct SigmaSchedule {
  double scale = 1.0;
  double exponent = -0.25;  // sigma(n) = scale * n^exponent

  double operator()(std::size_t n) const { return scale * std::pow(static_cast<double>(n), exponent); }
};

// Parameters of m = [m0 (log n)^y], sigma = sigma0 n^(-x/(m d)).
struct RateParams {
  double m0 = 1.0;
  double sigma0 = 1.0;
  double x = 0.5;
  double y = 0.4;
};

struct RateSchedule {
  int m = 1;
  double sigma = 1.0;
};

// Nearest-integer m (at least 1), then sigma from that m. The asymptotic
// rate conditions, e.g. n sigma^(md+1) / (m^2 C^m) -> infinity with
// C = 2 / (2 pi)^(d/2), are hypotheses and are not checked here.
inline RateSchedule rate_schedule(std::size_t n, double m0, double sigma0, double x, double y,
                                  std::size_t d) {
  require(m0 > 0.0 && sigma0 > 0.0, "rate_schedule: m0 and sigma0 must be positive");
  require(y > 0.0 && y < 0.5, "rate_schedule: y must lie in (0, 1/2)");
  require(x > 0.0 && x < 1.0, "rate_schedule: x must lie in (0, 1)");
  require(n >= 2, "rate_schedule: n must be >= 2");
  require(d >= 1, "rate_schedule: d must be >= 1");
  RateSchedule out;
  const double raw = m0 * std::pow(std::log(static_cast<double>(n)), y);
  out.m = std::max(1, static_cast<int>(std::lround(raw)));
  out.sigma = sigma0 * std::pow(static_cast<double>(n), -x / (out.m * static_cast<double>(d)));
  return out;
}

inline RateSchedule rate_schedule(std::size_t n, const RateParams& p, std::size_t d) {
  return rate_schedule(n, p.m0, p.sigma0, p.x, p.y, d);
}

struct ExperimentConfig {
  std::string model_name = "gmm-paper";
  ModelSpec model = gmm_paper();
  std::vector<BoundarySpec> boundaries;  // separable signals; ignored for nonseparable
  std::size_t n = 2500;
  std::vector<std::size_t> n_sweep;      // when non-empty, replaces n
  double sigma = 0.1;
  std::optional<SigmaSchedule> sigma_schedule;
  std::optional<int> m;                  // fixed estimator order
  std::optional<RateParams> rate_params; // sets (m, sigma) per n
  std::size_t repetitions = 20;
  double energy_tol = 1e-4;
  std::vector<double> label_fractions;
  std::optional<double> label_fraction_step;  // grid anchored at the reference mass
  double t_lo = 0.01;
  double t_hi = 0.65;
  std::size_t t_points = 50;
  std::size_t mc_samples = 1000000;
  std::uint64_t base_seed = 1;
  std::size_t threads = 1;
  double max_failure_fraction = 0.05;

  bool separable() const { return std::holds_alternative<SeparableModelSpec>(model); }

  std::vector<std::size_t> sizes() const { return n_sweep.empty() ? std::vector<std::size_t>{n} : n_sweep; }

  std::size_t dim() const { return std::visit([](const auto& s) { return s.dim(); }, model); }

  double sigma_for(std::size_t count) const {
    if (rate_params) return rate_schedule(count, *rate_params, dim()).sigma;
    if (sigma_schedule) return (*sigma_schedule)(count);
    return sigma;
  }

  std::optional<int> order_for(std::size_t count) const {
    if (rate_params) return rate_schedule(count, *rate_params, dim()).m;
    return m;
  }

  void validate() const {
    require(repetitions >= 1, "config: repetitions must be >= 1");
    for (std::size_t s : sizes()) require(s >= 2, "config: every n must be >= 2");
    require(sigma > 0.0, "config: sigma must be positive");
    require(energy_tol >= 0.0 && energy_tol < 1.0, "config: energy_tol must lie in [0, 1)");
    for (std::size_t i = 0; i < label_fractions.size(); ++i) {
      require(label_fractions[i] > 0.0 && label_fractions[i] < 1.0,
              "config: label fractions must lie in (0, 1)");
      require(i == 0 || label_fractions[i] > label_fractions[i - 1],
              "config: label fractions must be sorted ascending");
    }
    if (label_fraction_step)
      require(*label_fraction_step > 0.0 && *label_fraction_step < 1.0,
              "config: label_fraction_step must lie in (0, 1)");
    require(t_points >= 1 && t_lo < t_hi, "config: invalid t grid");
    require(mc_samples >= 1, "config: mc_samples must be >= 1");
    if (m) require(*m >= 1, "config: m must be >= 1");
    std::visit([](const auto& s) { s.validate(); }, model);
    if (separable()) require(!boundaries.empty(), "config: separable model needs at least one boundary");
  }
};

struct RepetitionRecord {
  std::size_t index = 0;  // repetition number within its sweep point
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double sigma = 0.0;
  bool failed = false;
  std::string error;
};

// One aggregated curve point. values[k] belongs to repetition record
// `records[k]` of the enclosing result; failed repetitions hold NaN.
struct Series {
  std::string signal;
  double abscissa = 0.0;  // n, label fraction or level t depending on the experiment
  double sigma = 0.0;
  std::vector<std::size_t> records;
  std::vector<double> values;
  double mean = 0.0;
  double stddev = 0.0;
  double reference = std::numeric_limits<double>::quiet_NaN();

  void aggregate() {
    const MeanStd ms = mean_std(values);
    mean = ms.mean;
    stddev = ms.stddev;
  }

  // Median over successful repetitions of |value - reference|.
  double median_abs_deviation() const {
    std::vector<double> dev;
    for (double v : values)
      if (std::isfinite(v)) dev.push_back(std::abs(v - reference));
    if (dev.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(dev.begin(), dev.end());
    const std::size_t h = dev.size() / 2;
    return dev.size() % 2 ? dev[h] : 0.5 * (dev[h - 1] + dev[h]);
  }
};

struct ExperimentResult {
  std::string experiment;
  std::vector<RepetitionRecord> repetitions;
  std::vector<Series> series;
  std::vector<std::pair<std::string, double>> references;  // named theoretical values
  std::string reference_note;
  std::size_t rank_deficient_solves = 0;
  Eigen::VectorXd sample_spectrum;  // eigenvalues of the first repetition (esd only)

  std::size_t failed_count() const {
    return static_cast<std::size_t>(std::count_if(repetitions.begin(), repetitions.end(),
                                                  [](const RepetitionRecord& r) { return r.failed; }));
  }

  bool failed(double max_fraction) const {
    return !repetitions.empty() &&
           static_cast<double>(failed_count()) > max_fraction * static_cast<double>(repetitions.size());
  }

  const Series* find(const std::string& signal, double abscissa) const {
    for (const auto& s : series)
      if (s.signal == signal && s.abscissa == abscissa) return &s;
    return nullptr;
  }

  std::optional<double> reference(const std::string& name) const {
    for (const auto& [k, v] : references)
      if (k == name) return v;
    return std::nullopt;
  }
};

namespace detail {

// Stream identifiers keep the seeds of the different experiments apart.
enum Stream : std::uint64_t {
  kBandwidthStream = 1,
  kReconstructionStream = 2,
  kCutStream = 3,
  kEsdStream = 4,
  kMassOracleStream = 5,
};

inline std::uint64_t stream_for(Stream s, std::size_t n) {
  return (static_cast<std::uint64_t>(s) << 32) ^ static_cast<std::uint64_t>(n);
}

// Runs task(i) for i in [0, count) on up to `threads` workers. Each task
// writes only its own slot, so the outcome is independent of scheduling.
inline void parallel_for(std::size_t count, std::size_t threads,
                         const std::function<void(std::size_t)>& task) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
}

// Per-repetition outcome before it is merged into the result.
struct RepOutcome {
  std::vector<double> values;
  std::size_t rank_deficient = 0;
  Eigen::VectorXd spectrum;
  bool failed = false;
  std::string error;
};

// Runs `reps` repetitions of `body` at size n and appends their records;
// returns the outcomes in repetition order plus the index of the first record.
inline std::pair<std::vector<RepOutcome>, std::size_t> run_repetitions(
    ExperimentResult& result, const ExperimentConfig& cfg, Stream stream, std::size_t n, double sigma,
    const std::function<RepOutcome(const Dataset&)>& body) {
  std::vector<RepOutcome> outcomes(cfg.repetitions);
  std::vector<std::uint64_t> seeds(cfg.repetitions);
  for (std::size_t r = 0; r < cfg.repetitions; ++r)
    seeds[r] = derive_seed(cfg.base_seed, stream_for(stream, n), r);
  parallel_for(cfg.repetitions, cfg.threads, [&](std::size_t r) {
    try {
      const Dataset data = sample(cfg.model, n, seeds[r]);
      outcomes[r] = body(data);
    } catch (const Error& e) {
      outcomes[r] = RepOutcome{};
      outcomes[r].failed = true;
      outcomes[r].error = e.what();
    }
  });
  const std::size_t first = result.repetitions.size();
  for (std::size_t r = 0; r < cfg.repetitions; ++r) {
    RepetitionRecord rec;
    rec.index = r;
    rec.seed = seeds[r];
    rec.n = n;
    rec.sigma = sigma;
    rec.failed = outcomes[r].failed;
    rec.error = outcomes[r].error;
    result.repetitions.push_back(rec);
    result.rank_deficient_solves += outcomes[r].rank_deficient;
  }
  return {std::move(outcomes), first};
}

// Signals tracked for a model: one per boundary, or "A" for the nonseparable class.
inline std::vector<std::string> signal_names(const ExperimentConfig& cfg) {
  std::vector<std::string> names;
  if (cfg.separable())
    for (const auto& b : cfg.boundaries) names.push_back(b.name);
  else
    names.push_back("A");
  return names;
}

inline std::vector<GraphSignal> signals_for(const ExperimentConfig& cfg, const Dataset& data) {
  std::vector<GraphSignal> out;
  if (!cfg.separable()) {
    out.push_back(data.indicator_signal());
    return out;
  }
  for (const auto& b : cfg.boundaries) {
    const auto ind = membership(data, b);
    GraphSignal f(static_cast<Eigen::Index>(ind.size()));
    for (std::size_t i = 0; i < ind.size(); ++i) f(static_cast<Eigen::Index>(i)) = ind[i];
    out.push_back(std::move(f));
  }
  return out;
}

inline double theoretical_sup(const ExperimentConfig& cfg, std::size_t signal) {
  if (const auto* s = std::get_if<SeparableModelSpec>(&cfg.model))
    return boundary_sup_density(*s, cfg.boundaries[signal]);
  return boundary_sup_density(std::get<NonseparableModelSpec>(cfg.model));
}

inline void append_series(ExperimentResult& result, const std::string& signal, double abscissa,
                          double sigma, std::size_t first_record, const std::vector<RepOutcome>& outs,
                          std::size_t slot, double reference) {
  Series s;
  s.signal = signal;
  s.abscissa = abscissa;
  s.sigma = sigma;
  s.reference = reference;
  for (std::size_t r = 0; r < outs.size(); ++r) {
    s.records.push_back(first_record + r);
    s.values.push_back(outs[r].failed ? std::numeric_limits<double>::quiet_NaN() : outs[r].values[slot]);
  }
  s.aggregate();
  result.series.push_back(std::move(s));
}

}  // namespace detail

// Empirical bandwidth omega(1_C) of every tracked signal, per repetition and
// per n. With an estimator order (fixed m or rate_params) the series
// "<signal>:omega_m" hold omega_m and, for separable models,
// "<signal>:omega_m_scaled" hold sigma^(-1/m) omega_m.
inline ExperimentResult run_bandwidth_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.experiment = cfg.n_sweep.empty() ? "bandwidth" : "bandwidth-sweep";
  const auto names = detail::signal_names(cfg);
  std::vector<double> sups(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    sups[k] = detail::theoretical_sup(cfg, k);
    result.references.emplace_back("sup_density:" + names[k], sups[k]);
  }
  result.reference_note =
      "reference = supremum of the data density on the class boundary (separable) or overlap region "
      "(nonseparable)";
  for (std::size_t n : cfg.sizes()) {
    const double sigma = cfg.sigma_for(n);
    const std::optional<int> order = cfg.order_for(n);
    auto [outs, first] = detail::run_repetitions(
        result, cfg, detail::kBandwidthStream, n, sigma, [&](const Dataset& data) {
          const SimilarityGraph g = build_graph(data, sigma);
          const LaplacianMatrix L = laplacian(g);
          const SpectralDecomposition decomp = eigendecompose(L);
          detail::RepOutcome out;
          for (const GraphSignal& f : detail::signals_for(cfg, data)) {
            if (f.squaredNorm() == 0.0) {
              out.values.push_back(0.0);
              if (order) {
                out.values.push_back(0.0);
                out.values.push_back(0.0);
              }
              continue;
            }
            out.values.push_back(bandwidth(decomp, f, cfg.energy_tol));
            if (order) {
              const double wm = bandwidth_estimate(L, f, *order);
              out.values.push_back(wm);
              out.values.push_back(wm * std::pow(sigma, -1.0 / *order));
            }
          }
          return out;
        });
    const std::size_t stride = order ? 3 : 1;
    for (std::size_t k = 0; k < names.size(); ++k) {
      const double nd = static_cast<double>(n);
      detail::append_series(result, names[k], nd, sigma, first, outs, k * stride, sups[k]);
      if (order) {
        detail::append_series(result, names[k] + ":omega_m", nd, sigma, first, outs, k * stride + 1, sups[k]);
        if (cfg.separable())
          detail::append_series(result, names[k] + ":omega_m_scaled", nd, sigma, first, outs,
                                k * stride + 2, sups[k]);
      }
    }
  }
  return result;
}

// Reference label complexity P({x : p(x) <= sup over the boundary}).
inline MassEstimate reference_label_mass(const ExperimentConfig& cfg, std::size_t signal = 0) {
  const double sup = detail::theoretical_sup(cfg, signal);
  return sublevel_mass(cfg.model, sup, cfg.mc_samples,
                       derive_seed(cfg.base_seed, detail::kMassOracleStream, signal));
}

// Label fractions actually used: explicit ones, or the grid
// reference + k * step restricted to (0, 1).
inline std::vector<double> effective_fractions(const ExperimentConfig& cfg, double reference_mass) {
  if (!cfg.label_fraction_step) return cfg.label_fractions;
  const double step = *cfg.label_fraction_step;
  std::vector<double> out;
  const long lo = static_cast<long>(std::ceil((1e-12 - reference_mass) / step));
  for (long k = lo;; ++k) {
    const double rho = reference_mass + static_cast<double>(k) * step;
    if (rho >= 1.0) break;
    if (rho > 0.0) out.push_back(rho);
  }
  return out;
}

// Reconstruction error of the first tracked signal versus label fraction.
// Per repetition: labels from pivoted elimination (one ordering, prefixes per
// fraction), theta = lambda_l, bandlimited least squares, threshold at 0.5,
// E_mean on the unlabeled nodes.
inline ExperimentResult run_reconstruction_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.experiment = "reconstruction";
  const std::string name = detail::signal_names(cfg).front();
  const MassEstimate mass = reference_label_mass(cfg, 0);
  result.references.emplace_back("sup_density:" + name, detail::theoretical_sup(cfg, 0));
  result.references.emplace_back("reference_mass", mass.mass);
  result.references.emplace_back("reference_mass_std_error", mass.std_error);
  result.reference_note = "reference_mass = P(p(x) <= sup density on the boundary), Monte Carlo";
  const std::vector<double> fractions = effective_fractions(cfg, mass.mass);
  require(!fractions.empty(), "reconstruction: no label fractions");
  const std::size_t n = cfg.n;
  const double sigma = cfg.sigma_for(n);
  std::vector<std::size_t> budgets;
  for (double rho : fractions)
    budgets.push_back(std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(rho * static_cast<double>(n))),
                                              1, n - 1));
  const std::size_t l_max = *std::max_element(budgets.begin(), budgets.end());

  auto [outs, first] = detail::run_repetitions(
      result, cfg, detail::kReconstructionStream, n, sigma, [&](const Dataset& data) {
        const SpectralDecomposition decomp = eigendecompose(laplacian(build_graph(data, sigma)));
        const GraphSignal f = detail::signals_for(cfg, data).front();
        const std::vector<std::size_t> order = pivot_order(decomp, l_max);
        detail::RepOutcome out;
        for (std::size_t l : budgets) {
          const LabelSet labels = label_set_from_order(decomp, order, l);
          Eigen::VectorXd known(static_cast<Eigen::Index>(l));
          for (std::size_t i = 0; i < l; ++i)
            known(static_cast<Eigen::Index>(i)) = f(static_cast<Eigen::Index>(labels.indices[i]));
          const Reconstruction rec = reconstruct_bandlimited(decomp, labels, known, labels.cutoff);
          if (rec.rank_deficient) ++out.rank_deficient;
          out.values.push_back(mean_error(threshold_signal(rec.signal), f, labels));
        }
        return out;
      });
  for (std::size_t k = 0; k < fractions.size(); ++k)
    detail::append_series(result, name, fractions[k], sigma, first, outs, k, mass.mass);
  return result;
}

// Cut(A, A^c) / n^2 = (1/n) 1_A^T L 1_A, per repetition and per n, against
// the overlap integral of alpha_A alpha_A^c p_A p_A^c.
inline ExperimentResult run_cut_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  require(!cfg.separable(), "cut experiment needs a nonseparable model");
  ExperimentResult result;
  result.experiment = "cut";
  const double limit = overlap_integral(std::get<NonseparableModelSpec>(cfg.model));
  result.references.emplace_back("overlap_integral", limit);
  result.reference_note = "reference = integral of alpha_A alpha_Ac p_A p_Ac (Gauss-Legendre)";
  for (std::size_t n : cfg.sizes()) {
    const double sigma = cfg.sigma_for(n);
    auto [outs, first] = detail::run_repetitions(
        result, cfg, detail::kCutStream, n, sigma, [&](const Dataset& data) {
          const SimilarityGraph g = build_graph(data, sigma);
          const double nd = static_cast<double>(data.size());
          detail::RepOutcome out;
          out.values.push_back(cut_value(g, data.indicator_signal()) / (nd * nd));
          return out;
        });
    detail::append_series(result, "A", static_cast<double>(n), sigma, first, outs, 0, limit);
  }
  return result;
}

inline std::vector<double> esd_grid(const ExperimentConfig& cfg) {
  std::vector<double> ts(cfg.t_points);
  for (std::size_t i = 0; i < cfg.t_points; ++i)
    ts[i] = cfg.t_points == 1 ? cfg.t_lo
                              : cfg.t_lo + (cfg.t_hi - cfg.t_lo) * static_cast<double>(i) /
                                               static_cast<double>(cfg.t_points - 1);
  return ts;
}

// Mean empirical spectral CDF (1/n) N_L(t) over a t grid against the
// sublevel mass P(p(X) <= t).
inline ExperimentResult run_esd_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.experiment = "esd";
  const std::vector<double> ts = esd_grid(cfg);
  const std::vector<double> sorted_density = std::visit(
      [&](const auto& m) {
        return sampled_density_values(m, cfg.mc_samples, derive_seed(cfg.base_seed, detail::kMassOracleStream, 0));
      },
      cfg.model);
  result.reference_note = "reference = P(p(X) <= t), Monte Carlo over model draws";
  const std::size_t n = cfg.n;
  const double sigma = cfg.sigma_for(n);
  auto [outs, first] = detail::run_repetitions(
      result, cfg, detail::kEsdStream, n, sigma, [&](const Dataset& data) {
        const Eigen::VectorXd lambda = laplacian_eigenvalues(laplacian(build_graph(data, sigma)));
        detail::RepOutcome out;
        for (double t : ts)
          out.values.push_back(static_cast<double>(eigencount(lambda, t)) / static_cast<double>(n));
        out.spectrum = lambda;
        return out;
      });
  for (std::size_t k = 0; k < ts.size(); ++k)
    detail::append_series(result, "esd", ts[k], sigma, first, outs, k, mass_from_sorted(sorted_density, ts[k]));
  for (const auto& o : outs)
    if (!o.failed) {
      result.sample_spectrum = o.spectrum;
      break;
    }
  return result;
}

inline double esd_sup_gap(const ExperimentResult& result) {
  double gap = 0.0;
  for (const auto& s : result.series) gap = std::max(gap, std::abs(s.mean - s.reference));
  return gap;
}

}  // namespace gssl

#pragma once

// Generative data models: a Gaussian mixture split by a boundary curve
// (separable) and a two-class mixture of compact bumps (nonseparable).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gssl/error.hpp"
#include "gssl/quadrature.hpp"
#include "gssl/rng.hpp"

namespace gssl {

using Point = Eigen::VectorXd;

struct GaussianComponent {
  Point mean;
  double covariance_scale = 1.0;  // covariance = covariance_scale * I
  double weight = 1.0;

  double density(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const double d = static_cast<double>(mean.size());
    const double norm = std::pow(2.0 * std::numbers::pi * covariance_scale, -0.5 * d);
    return norm * std::exp(-(x - mean).squaredNorm() / (2.0 * covariance_scale));
  }
};

enum class BoundaryKind {
  VerticalLine,    // x = parameter
  HorizontalLine,  // y = parameter
  Parabola,        // x = y^2 + parameter
  Circle,          // x^2 + y^2 = parameter^2
};

// A 2-D boundary curve g(x) = 0. The class S is the closed set {g <= 0}, or
// {g >= 0} when `complement` is set; points on the curve always belong to S.
struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::VerticalLine;
  double parameter = 0.0;
  bool complement = false;
  std::string name;

  double level(double x, double y) const {
    switch (kind) {
      case BoundaryKind::VerticalLine: return x - parameter;
      case BoundaryKind::HorizontalLine: return y - parameter;
      case BoundaryKind::Parabola: return x - (y * y + parameter);
      case BoundaryKind::Circle: return x * x + y * y - parameter * parameter;
    }
    return 0.0;
  }

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& p) const {
    require(p.size() == 2, "boundary membership needs a 2-D point");
    const double g = level(p(0), p(1));
    if (g == 0.0) return true;
    return complement ? g > 0.0 : g < 0.0;
  }
};

struct SeparableModelSpec {
  std::vector<GaussianComponent> components;
  BoundarySpec boundary;

  std::size_t dim() const { return components.empty() ? 0 : components.front().mean.size(); }

  void validate() const {
    require(!components.empty(), "separable model needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
      require(c.covariance_scale > 0.0, "covariance_scale must be positive");
      require(c.weight > 0.0 && c.weight <= 1.0, "component weight must lie in (0, 1]");
      require(static_cast<std::size_t>(c.mean.size()) == dim(),
              "components disagree on dimension");
      total += c.weight;
    }
    require(std::abs(total - 1.0) <= 1e-12, "component weights must sum to 1");
  }
};

// The compact bump q(x, y) = (3/pi)(1 - x^2 - y^2)^2 on the unit disk.
inline double bump_density(double dx, double dy) {
  const double r2 = dx * dx + dy * dy;
  if (r2 > 1.0) return 0.0;
  const double s = 1.0 - r2;
  return 3.0 / std::numbers::pi * s * s;
}

struct NonseparableModelSpec {
  std::array<Eigen::Vector2d, 2> class_offsets{Eigen::Vector2d(0.75, 0.0),
                                               Eigen::Vector2d(-0.75, 0.0)};
  double alpha_a = 0.5;   // selection probability of class A (offset 0)
  double alpha_ac = 0.5;  // selection probability of A^c (offset 1)

  std::size_t dim() const { return 2; }

  void validate() const {
    require(alpha_a > 0.0 && alpha_a < 1.0 && alpha_ac > 0.0 && alpha_ac < 1.0,
            "selection probabilities must lie in (0, 1)");
    require(std::abs(alpha_a + alpha_ac - 1.0) <= 1e-12,
            "selection probabilities must sum to 1");
  }

  double class_density(int cls, double x, double y) const {
    const Eigen::Vector2d& c = class_offsets[static_cast<std::size_t>(cls)];
    return bump_density(x - c(0), y - c(1));
  }
};

using ModelSpec = std::variant<SeparableModelSpec, NonseparableModelSpec>;

struct Dataset {
  Eigen::MatrixXd points;                 // n x d, one row per sample
  std::vector<std::uint8_t> indicator;    // ground-truth class membership
  std::string model_tag;
  std::uint64_t seed = 0;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }

  Eigen::VectorXd indicator_signal() const {
    Eigen::VectorXd f(static_cast<Eigen::Index>(indicator.size()));
    for (std::size_t i = 0; i < indicator.size(); ++i)
      f(static_cast<Eigen::Index>(i)) = indicator[i] ? 1.0 : 0.0;
    return f;
  }
};

// ---------------------------------------------------------------------------
// Densities

inline double density_at(const SeparableModelSpec& model,
                         const Eigen::Ref<const Eigen::VectorXd>& x) {
  require(static_cast<std::size_t>(x.size()) == model.dim(), "density_at: dimension mismatch");
  double p = 0.0;
  for (const auto& c : model.components) p += c.weight * c.density(x);
  return p;
}

inline double density_at(const NonseparableModelSpec& model,
                         const Eigen::Ref<const Eigen::VectorXd>& x) {
  require(x.size() == 2, "density_at: dimension mismatch");
  return model.alpha_a * model.class_density(0, x(0), x(1)) +
         model.alpha_ac * model.class_density(1, x(0), x(1));
}

inline double density_at(const ModelSpec& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::visit([&](const auto& m) { return density_at(m, x); }, model);
}

// Cheap bound with density_at(x) <= density_upper_bound for every x.
inline double density_upper_bound(const SeparableModelSpec& model) {
  double b = 0.0;
  const double d = static_cast<double>(model.dim());
  for (const auto& c : model.components)
    b += c.weight * std::pow(2.0 * std::numbers::pi * c.covariance_scale, -0.5 * d);
  return b;
}

inline double density_upper_bound(const NonseparableModelSpec& model) {
  return (model.alpha_a + model.alpha_ac) * 3.0 / std::numbers::pi;
}

inline double density_upper_bound(const ModelSpec& model) {
  return std::visit([](const auto& m) { return density_upper_bound(m); }, model);
}

// ---------------------------------------------------------------------------
// Sampling

namespace detail {

inline void draw_point(const SeparableModelSpec& model, CounterRng& rng,
                       Eigen::Ref<Eigen::VectorXd> out) {
  const double u = rng.uniform();
  std::size_t k = 0;
  double acc = model.components[0].weight;
  while (u >= acc && k + 1 < model.components.size()) acc += model.components[++k].weight;
  const auto& c = model.components[k];
  const double sd = std::sqrt(c.covariance_scale);
  for (Eigen::Index j = 0; j < out.size(); ++j) out(j) = c.mean(j) + sd * rng.normal();
}

// Returns true when the point was drawn from class A. The radius uses the
// inverse CDF of q's radial law, F(r) = 1 - (1 - r^2)^3.
inline bool draw_point(const NonseparableModelSpec& model, CounterRng& rng,
                       Eigen::Ref<Eigen::VectorXd> out) {
  const bool in_a = rng.uniform() < model.alpha_a;
  const double u = rng.uniform();
  const double v = rng.uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - std::cbrt(u)));
  const double phi = 2.0 * std::numbers::pi * v;
  const Eigen::Vector2d& c = model.class_offsets[in_a ? 0 : 1];
  out(0) = c(0) + r * std::cos(phi);
  out(1) = c(1) + r * std::sin(phi);
  return in_a;
}

}  // namespace detail

inline Dataset sample_separable(const SeparableModelSpec& spec, std::size_t n, std::uint64_t seed) {
  require(n >= 1, "sample_separable: n must be >= 1");
  spec.validate();
  Dataset data;
  data.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.dim()));
  data.indicator.resize(n);
  data.model_tag = "separable";
  data.seed = seed;
  CounterRng rng(seed);
  Eigen::VectorXd x(static_cast<Eigen::Index>(spec.dim()));
  for (std::size_t i = 0; i < n; ++i) {
    detail::draw_point(spec, rng, x);
    data.points.row(static_cast<Eigen::Index>(i)) = x.transpose();
  }
  if (spec.dim() == 2) {
    for (std::size_t i = 0; i < n; ++i)
      data.indicator[i] = spec.boundary.contains(data.points.row(static_cast<Eigen::Index>(i)).transpose());
  }
  return data;
}

inline Dataset sample_nonseparable(const NonseparableModelSpec& spec, std::size_t n,
                                   std::uint64_t seed) {
  require(n >= 1, "sample_nonseparable: n must be >= 1");
  spec.validate();
  Dataset data;
  data.points.resize(static_cast<Eigen::Index>(n), 2);
  data.indicator.resize(n);
  data.model_tag = "nonseparable";
  data.seed = seed;
  CounterRng rng(seed);
  Eigen::VectorXd x(2);
  for (std::size_t i = 0; i < n; ++i) {
    data.indicator[i] = detail::draw_point(spec, rng, x) ? 1 : 0;
    data.points.row(static_cast<Eigen::Index>(i)) = x.transpose();
  }
  return data;
}

inline Dataset sample(const ModelSpec& model, std::size_t n, std::uint64_t seed) {
  if (const auto* s = std::get_if<SeparableModelSpec>(&model)) return sample_separable(*s, n, seed);
  return sample_nonseparable(std::get<NonseparableModelSpec>(model), n, seed);
}

// Ground-truth indicator of `boundary` on already-sampled points.
inline std::vector<std::uint8_t> membership(const Dataset& data, const BoundarySpec& boundary) {
  std::vector<std::uint8_t> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    out[i] = boundary.contains(data.points.row(static_cast<Eigen::Index>(i)).transpose());
  return out;
}

// ---------------------------------------------------------------------------
// Limit quantities

namespace detail {

struct CurvePoint {
  double x;
  double y;
};

inline CurvePoint boundary_point(const BoundarySpec& b, double t) {
  switch (b.kind) {
    case BoundaryKind::VerticalLine: return {b.parameter, t};
    case BoundaryKind::HorizontalLine: return {t, b.parameter};
    case BoundaryKind::Parabola: return {t * t + b.parameter, t};
    case BoundaryKind::Circle: return {b.parameter * std::cos(t), b.parameter * std::sin(t)};
  }
  return {0.0, 0.0};
}

template <typename F>
double golden_section_max(F&& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return f(0.5 * (a + b));
}

}  // namespace detail

// sup of the mixture density along a 2-D boundary curve: 10^4-point grid over
// the curve parameter, then golden-section refinement around the best cell.
inline double boundary_sup_density(const SeparableModelSpec& model, const BoundarySpec& boundary) {
  model.validate();
  require(model.dim() == 2, "boundary_sup_density: boundary families are defined in 2-D only");
  double lo = 0.0;
  double hi = 0.0;
  switch (boundary.kind) {
    case BoundaryKind::VerticalLine:
    case BoundaryKind::HorizontalLine: {
      double reach = 0.0;
      for (const auto& c : model.components)
        reach = std::max(reach, c.mean.cwiseAbs().maxCoeff() + 10.0 * std::sqrt(c.covariance_scale));
      lo = -reach;
      hi = reach;
      break;
    }
    case BoundaryKind::Parabola: lo = -4.0; hi = 4.0; break;
    case BoundaryKind::Circle:
      require(boundary.parameter > 0.0, "circle radius must be positive");
      lo = 0.0;
      hi = 2.0 * std::numbers::pi;
      break;
  }
  Eigen::VectorXd x(2);
  auto density_along = [&](double t) {
    const auto p = detail::boundary_point(boundary, t);
    x << p.x, p.y;
    return density_at(model, x);
  };
  constexpr int kGrid = 10000;
  const bool periodic = boundary.kind == BoundaryKind::Circle;
  const double step = (hi - lo) / (periodic ? kGrid : kGrid - 1);
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i < kGrid; ++i) {
    const double v = density_along(lo + step * i);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + step * (best - 1);
  double b = lo + step * (best + 1);
  if (!periodic) {
    a = std::max(a, lo);
    b = std::min(b, hi);
  }
  return std::max(best_val, detail::golden_section_max(density_along, a, b, 1e-8));
}

struct Box2 {
  double x0, x1, y0, y1;
  bool empty() const { return !(x0 < x1 && y0 < y1); }
};

// Bounding box of the overlap lens {p_A > 0} n {p_A^c > 0} (unit disks).
inline Box2 overlap_bounding_box(const NonseparableModelSpec& spec) {
  const auto& a = spec.class_offsets[0];
  const auto& b = spec.class_offsets[1];
  return {std::max(a(0), b(0)) - 1.0, std::min(a(0), b(0)) + 1.0,
          std::max(a(1), b(1)) - 1.0, std::min(a(1), b(1)) + 1.0};
}

// sup of p over the open overlap region, by a 2000 x 2000 grid over the lens
// bounding box. An empty overlap region yields 0.
inline double boundary_sup_density(const NonseparableModelSpec& spec) {
  spec.validate();
  const Box2 box = overlap_bounding_box(spec);
  if (box.empty() || (spec.class_offsets[0] - spec.class_offsets[1]).norm() >= 2.0) return 0.0;
  constexpr int kGrid = 2000;
  const double hx = (box.x1 - box.x0) / (kGrid - 1);
  const double hy = (box.y1 - box.y0) / (kGrid - 1);
  double best = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double x = box.x0 + hx * i;
    for (int j = 0; j < kGrid; ++j) {
      const double y = box.y0 + hy * j;
      const double pa = spec.class_density(0, x, y);
      const double pc = spec.class_density(1, x, y);
      if (pa > 0.0 && pc > 0.0) best = std::max(best, spec.alpha_a * pa + spec.alpha_ac * pc);
    }
  }
  return best;
}

struct MassEstimate {
  double mass = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Monte Carlo estimate of P({x : p(x) <= t}) from draws of the model itself.
template <typename Spec>
MassEstimate sublevel_mass(const Spec& model, double t, std::size_t mc_samples, std::uint64_t seed) {
  require(t >= 0.0, "sublevel_mass: t must be >= 0");
  require(mc_samples >= 1, "sublevel_mass: mc_samples must be >= 1");
  model.validate();
  CounterRng rng(seed);
  Eigen::VectorXd x(static_cast<Eigen::Index>(model.dim()));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < mc_samples; ++i) {
    detail::draw_point(model, rng, x);
    if (density_at(model, x) <= t) ++hits;
  }
  MassEstimate est;
  est.samples = mc_samples;
  est.mass = static_cast<double>(hits) / static_cast<double>(mc_samples);
  est.std_error = std::sqrt(est.mass * (1.0 - est.mass) / static_cast<double>(mc_samples));
  return est;
}

inline MassEstimate sublevel_mass(const ModelSpec& model, double t, std::size_t mc_samples,
                                  std::uint64_t seed) {
  return std::visit([&](const auto& m) { return sublevel_mass(m, t, mc_samples, seed); }, model);
}

// Sorted densities of `count` model draws; sublevel masses for a whole grid of
// levels then cost one binary search each.
template <typename Spec>
std::vector<double> sampled_density_values(const Spec& model, std::size_t count, std::uint64_t seed) {
  model.validate();
  CounterRng rng(seed);
  Eigen::VectorXd x(static_cast<Eigen::Index>(model.dim()));
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    detail::draw_point(model, rng, x);
    out[i] = density_at(model, x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double mass_from_sorted(const std::vector<double>& sorted, double t) {
  if (sorted.empty()) return 0.0;
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

// Integral of alpha_A alpha_A^c p_A p_A^c via tensor Gauss-Legendre over the
// lens bounding box, at `nodes` x `nodes` points.
inline double overlap_integral_at(const NonseparableModelSpec& spec, std::size_t nodes) {
  spec.validate();
  const Box2 box = overlap_bounding_box(spec);
  if (box.empty() || (spec.class_offsets[0] - spec.class_offsets[1]).norm() >= 2.0) return 0.0;
  const double scale = spec.alpha_a * spec.alpha_ac;
  return integrate_box(
      [&](double x, double y) { return scale * spec.class_density(0, x, y) * spec.class_density(1, x, y); },
      box.x0, box.x1, box.y0, box.y1, nodes);
}

// Starts at 128 x 128 nodes and doubles until the relative change drops below
// 1e-6 (or 8192 nodes per axis is reached).
inline double overlap_integral(const NonseparableModelSpec& spec) {
  std::size_t nodes = 128;
  double prev = overlap_integral_at(spec, nodes);
  if (prev == 0.0) return 0.0;
  while (nodes < 8192) {
    nodes *= 2;
    const double cur = overlap_integral_at(spec, nodes);
    const bool converged = std::abs(cur - prev) <= 1e-6 * std::abs(cur);
    prev = cur;
    if (converged) break;
  }
  return prev;
}

// ---------------------------------------------------------------------------
// Presets used by the experiments.

inline BoundarySpec boundary_preset(const std::string& name) {
  if (name == "S1") return {BoundaryKind::VerticalLine, 0.0, false, "S1"};
  if (name == "S2") return {BoundaryKind::VerticalLine, -1.0, false, "S2"};
  if (name == "S3") return {BoundaryKind::Parabola, -1.0, false, "S3"};
  if (name == "S4") return {BoundaryKind::HorizontalLine, 0.0, false, "S4"};
  if (name == "S5") return {BoundaryKind::Circle, 1.0, false, "S5"};
  throw Error(ErrorKind::InvalidArgument, "unknown boundary '" + name + "' (valid: S1, S2, S3, S4, S5)");
}

inline SeparableModelSpec gmm_paper(const std::string& boundary = "S1") {
  SeparableModelSpec spec;
  spec.components.push_back({Eigen::Vector2d(-1.0, 0.0), 0.25, 0.4});
  spec.components.push_back({Eigen::Vector2d(1.0, 0.0), 0.16, 0.6});
  spec.boundary = boundary_preset(boundary);
  return spec;
}

inline NonseparableModelSpec nonsep_paper() { return NonseparableModelSpec{}; }

}  // namespace gssl

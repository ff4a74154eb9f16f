#pragma once

// Minimal self-contained SVG charts for the experiment figures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gssl/experiments.hpp"

namespace gssl {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
  std::vector<double> err;  // optional symmetric error bars
  bool markers_only = false;
};

struct Plot {
  std::string title, xlabel, ylabel;
  std::vector<PlotSeries> series;
  std::vector<double> vlines;  // dashed vertical references
  std::vector<std::pair<double, double>> ref_marks;  // (x, y) reference markers
  bool log_x = false;
  bool log_y = false;
};

namespace detail {

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  return colors[i % 7];
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace detail

inline std::string render_svg(const Plot& plot) {
  constexpr double W = 720, H = 460, L = 80, R = 170, T = 40, B = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto tx = [&](double v) { return plot.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return plot.log_y ? std::log10(v) : v; };
  auto take = [&](double x, double y) {
    if (!std::isfinite(tx(x)) || !std::isfinite(ty(y))) return;
    x0 = std::min(x0, tx(x)), x1 = std::max(x1, tx(x));
    y0 = std::min(y0, ty(y)), y1 = std::max(y1, ty(y));
  };
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double e = i < s.err.size() && std::isfinite(s.err[i]) ? s.err[i] : 0.0;
      take(s.x[i], s.y[i] + e);
      take(s.x[i], plot.log_y ? s.y[i] : s.y[i] - e);
    }
  for (const auto& [x, y] : plot.ref_marks) take(x, y);
  for (double v : plot.vlines)
    if (std::isfinite(tx(v))) x0 = std::min(x0, tx(v)), x1 = std::max(x1, tx(v));
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!plot.log_y) y0 = std::min(y0, 0.0);
  if (x1 - x0 <= 0) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 <= 0) y0 -= 0.5, y1 += 0.5;
  const double xpad = 0.05 * (x1 - x0), ypad = 0.05 * (y1 - y0);
  x0 -= xpad, x1 += xpad, y1 += ypad;
  if (plot.log_y) y0 -= ypad;
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
  using detail::num;

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
                  "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
       detail::xml_escape(plot.title) + "</text>\n";
  s += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W - L - R) + "\" height=\"" +
       num(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double fx = x0 + (x1 - x0) * k / 5.0, fy = y0 + (y1 - y0) * k / 5.0;
    const double vx = plot.log_x ? std::pow(10.0, fx) : fx, vy = plot.log_y ? std::pow(10.0, fy) : fy;
    s += "<text x=\"" + num(px(vx)) + "\" y=\"" + num(H - B + 18) + "\" text-anchor=\"middle\">" + num(vx) + "</text>\n";
    s += "<text x=\"" + num(L - 6) + "\" y=\"" + num(py(vy) + 4) + "\" text-anchor=\"end\">" + num(vy) + "</text>\n";
    s += "<line x1=\"" + num(L) + "\" x2=\"" + num(W - R) + "\" y1=\"" + num(py(vy)) + "\" y2=\"" + num(py(vy)) +
         "\" stroke=\"#ddd\"/>\n";
  }
  s += "<text x=\"" + num(L + (W - L - R) / 2) + "\" y=\"" + num(H - 18) + "\" text-anchor=\"middle\">" +
       detail::xml_escape(plot.xlabel) + "</text>\n";
  s += "<text transform=\"translate(20," + num(T + (H - T - B) / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       detail::xml_escape(plot.ylabel) + "</text>\n";
  for (double v : plot.vlines)
    s += "<line x1=\"" + num(px(v)) + "\" x2=\"" + num(px(v)) + "\" y1=\"" + num(T) + "\" y2=\"" + num(H - B) +
         "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n";
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& ps = plot.series[k];
    const char* c = detail::palette(k);
    std::string path;
    for (std::size_t i = 0; i < ps.x.size(); ++i) {
      if (!std::isfinite(ps.y[i])) continue;
      path += (path.empty() ? "M" : " L") + num(px(ps.x[i])) + "," + num(py(ps.y[i]));
      s += "<circle cx=\"" + num(px(ps.x[i])) + "\" cy=\"" + num(py(ps.y[i])) + "\" r=\"3.5\" fill=\"" + c + "\"/>\n";
      if (i < ps.err.size() && std::isfinite(ps.err[i]) && ps.err[i] > 0)
        s += "<line x1=\"" + num(px(ps.x[i])) + "\" x2=\"" + num(px(ps.x[i])) + "\" y1=\"" +
             num(py(ps.y[i] - ps.err[i])) + "\" y2=\"" + num(py(ps.y[i] + ps.err[i])) + "\" stroke=\"" + c + "\"/>\n";
    }
    if (!ps.markers_only && !path.empty())
      s += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + c + "\" stroke-width=\"1.5\"/>\n";
    const double ly = T + 16 + 18.0 * static_cast<double>(k);
    s += "<rect x=\"" + num(W - R + 12) + "\" y=\"" + num(ly - 9) + "\" width=\"12\" height=\"12\" fill=\"" + c + "\"/>\n";
    s += "<text x=\"" + num(W - R + 30) + "\" y=\"" + num(ly + 1) + "\">" + detail::xml_escape(ps.label) + "</text>\n";
  }
  for (const auto& [x, y] : plot.ref_marks) {
    const double cx = px(x), cy = py(y);
    s += "<line x1=\"" + num(cx - 10) + "\" x2=\"" + num(cx + 10) + "\" y1=\"" + num(cy) + "\" y2=\"" + num(cy) +
         "\" stroke=\"black\" stroke-width=\"2.5\"/>\n";
  }
  if (!plot.ref_marks.empty()) {
    const double ly = T + 16 + 18.0 * static_cast<double>(plot.series.size());
    s += "<line x1=\"" + num(W - R + 12) + "\" x2=\"" + num(W - R + 24) + "\" y1=\"" + num(ly - 3) + "\" y2=\"" +
         num(ly - 3) + "\" stroke=\"black\" stroke-width=\"2.5\"/>\n";
    s += "<text x=\"" + num(W - R + 30) + "\" y=\"" + num(ly + 1) + "\">reference</text>\n";
  }
  s += "</svg>\n";
  return s;
}

// Figure for an experiment result: bandwidth means per signal with reference
// markers, std versus n for sweeps, error versus fraction with the reference
// mass, cut versus n, and the ESD curve against P(p <= t).
inline Plot figure_for(const ExperimentResult& r) {
  Plot p;
  if (r.experiment == "reconstruction") {
    p.title = "Reconstruction error";
    p.xlabel = "fraction of labeled nodes";
    p.ylabel = "mean error";
    PlotSeries ps;
    ps.label = r.series.empty() ? "E_mean" : r.series.front().signal;
    for (const auto& s : r.series) ps.x.push_back(s.abscissa), ps.y.push_back(s.mean), ps.err.push_back(s.stddev);
    p.series.push_back(ps);
    if (auto m = r.reference("reference_mass")) p.vlines.push_back(*m);
    return p;
  }
  if (r.experiment == "esd") {
    p.title = "Empirical spectral distribution";
    p.xlabel = "t";
    p.ylabel = "fraction";
    PlotSeries emp, ref;
    emp.label = "mean N_L(t)/n";
    ref.label = "P(p(X) <= t)";
    for (const auto& s : r.series) {
      emp.x.push_back(s.abscissa), emp.y.push_back(s.mean);
      ref.x.push_back(s.abscissa), ref.y.push_back(s.reference);
    }
    p.series = {emp, ref};
    return p;
  }
  // Group by signal, keeping first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Series*>> groups;
  for (const auto& s : r.series) {
    if (s.signal.find(':') != std::string::npos) continue;
    if (!groups.count(s.signal)) order.push_back(s.signal);
    groups[s.signal].push_back(&s);
  }
  if (r.experiment == "cut") {
    p.title = "Cut convergence";
    p.xlabel = "n";
    p.ylabel = "Cut(A, A^c) / n^2";
    PlotSeries ps;
    ps.label = "mean";
    for (const auto& s : r.series) {
      ps.x.push_back(s.abscissa), ps.y.push_back(s.mean), ps.err.push_back(s.stddev);
      p.ref_marks.emplace_back(s.abscissa, s.reference);
    }
    p.series.push_back(ps);
    return p;
  }
  if (r.experiment == "bandwidth-sweep") {
    p.title = "Bandwidth standard deviation";
    p.xlabel = "n";
    p.ylabel = "std of bandwidth";
    p.log_x = true;
    for (const auto& name : order) {
      PlotSeries ps;
      ps.label = name;
      for (const Series* s : groups[name]) ps.x.push_back(s->abscissa), ps.y.push_back(s->stddev);
      p.series.push_back(ps);
    }
    return p;
  }
  p.title = "Empirical bandwidth";
  p.xlabel = "signal";
  p.ylabel = "bandwidth";
  PlotSeries ps;
  ps.label = "mean +- std";
  ps.markers_only = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Series* s = groups[order[k]].front();
    ps.x.push_back(static_cast<double>(k + 1));
    ps.y.push_back(s->mean);
    ps.err.push_back(s->stddev);
    p.ref_marks.emplace_back(static_cast<double>(k + 1), s->reference);
  }
  p.series.push_back(ps);
  std::string names;
  for (std::size_t k = 0; k < order.size(); ++k) names += (k ? ", " : "") + std::to_string(k + 1) + "=" + order[k];
  p.xlabel = "signal (" + names + ")";
  return p;
}

}  // namespace gssl

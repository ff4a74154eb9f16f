#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gssl {

// Pairwise (cascade) summation; error grows as O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kLeaf = 32;
  if (v.size() <= kLeaf) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_dot(std::span<const double> a, std::span<const double> b) {
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  return pairwise_sum(prod);
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1); 0 for a single value
  std::size_t count = 0;
};

// Two-pass mean and sample standard deviation over finite entries, visited
// in index order so the result is a pure function of the input sequence.
inline MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    sum += v;
    ++out.count;
  }
  if (out.count == 0) {
    out.mean = std::nan("");
    out.stddev = std::nan("");
    return out;
  }
  out.mean = sum / static_cast<double>(out.count);
  if (out.count > 1) {
    double ss = 0.0;
    for (double v : values) {
      if (!std::isfinite(v)) continue;
      ss += (v - out.mean) * (v - out.mean);
    }
    out.stddev = std::sqrt(ss / static_cast<double>(out.count - 1));
  }
  return out;
}

}  // namespace gssl

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace netstab {

struct TailFit {
  std::vector<double> thresholds;
  std::vector<double> log_survival;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_lo = 0.0;  // 95% interval
  double slope_hi = 0.0;
  std::size_t n_samples = 0;
  // Fewer than three usable thresholds; slope and interval are NaN.
  bool degenerate = false;

  bool exponential_tail() const { return !degenerate && slope < 0.0 && slope_hi < 0.0; }
};

// Least-squares slope of log P(X > w) over a grid between the 50th and 99th
// percentiles. Integer-valued samples use the integer thresholds in that
// range. Needs at least 500 samples.
TailFit tail_fit(std::span<const double> samples);

}  // namespace netstab

#include "netstab/tail.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "netstab/errors.hpp"

namespace netstab {

namespace {

constexpr std::size_t kMinSamples = 500;
constexpr std::size_t kGridPoints = 20;
constexpr std::size_t kMaxIntegerPoints = 200;

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TailFit tail_fit(std::span<const double> samples) {
  if (samples.size() < kMinSamples) {
    throw InsufficientData("tail fit needs at least 500 samples, got " +
                           std::to_string(samples.size()));
  }
  std::vector<double> v(samples.begin(), samples.end());
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ContractViolation("tail fit samples must be finite and nonnegative");
  }
  std::sort(v.begin(), v.end());
  TailFit fit;
  fit.n_samples = v.size();
  const double q50 = quantile_sorted(v, 0.50);
  const double q99 = quantile_sorted(v, 0.99);
  const bool integral = std::all_of(v.begin(), v.end(), [](double x) { return x == std::floor(x); });

  std::vector<double> grid;
  if (integral) {
    const double lo = std::floor(q50), hi = std::floor(q99);
    const double span = hi - lo;
    const double step = std::max(1.0, std::ceil(span / static_cast<double>(kMaxIntegerPoints - 1)));
    for (double w = lo; w <= hi; w += step) grid.push_back(w);
  } else if (q99 > q50) {
    for (std::size_t k = 0; k < kGridPoints; ++k) {
      grid.push_back(q50 + (q99 - q50) * static_cast<double>(k) / static_cast<double>(kGridPoints - 1));
    }
  } else {
    grid.push_back(q50);
  }

  const double n = static_cast<double>(v.size());
  for (double w : grid) {
    const auto above = static_cast<double>(v.end() - std::upper_bound(v.begin(), v.end(), w));
    if (above <= 0.0) continue;
    fit.thresholds.push_back(w);
    fit.log_survival.push_back(std::log(above / n));
  }

  const std::size_t m = fit.thresholds.size();
  if (m < 3) {
    fit.degenerate = true;
    fit.slope = fit.intercept = fit.slope_lo = fit.slope_hi = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += fit.thresholds[k];
    my += fit.log_survival[k];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sxx += (fit.thresholds[k] - mx) * (fit.thresholds[k] - mx);
    sxy += (fit.thresholds[k] - mx) * (fit.log_survival[k] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double e = fit.log_survival[k] - fit.intercept - fit.slope * fit.thresholds[k];
    sse += e * e;
  }
  const double se = std::sqrt(sse / static_cast<double>(m - 2) / sxx);
  const boost::math::students_t dist(static_cast<double>(m - 2));
  const double tq = boost::math::quantile(dist, 0.975);
  fit.slope_lo = fit.slope - tq * se;
  fit.slope_hi = fit.slope + tq * se;
  return fit;
}

}  // namespace netstab

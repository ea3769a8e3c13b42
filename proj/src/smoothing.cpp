#include "tsforge/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tsforge::smoothing {

namespace {

// Weighted local-linear fit over the q nearest integer positions to
// x_eval, tricube weights; returns the fit evaluated at x_eval.
double local_linear_at(const VecD& y, double x_eval, Index q) {
  const Index n = y.size();
  if (n == 1) return y[0];
  const Index m = std::min<Index>(std::max<Index>(q, 2), n);

  // Contiguous window of m points nearest to x_eval.
  Index lo = static_cast<Index>(std::floor(x_eval)) - (m - 1) / 2;
  lo = std::clamp<Index>(lo, 0, n - m);
  // Nudge to minimize the max distance (matters near the edges).
  while (lo > 0 && x_eval - (lo - 1) < (lo + m - 1) - x_eval) --lo;
  while (lo + m < n && (lo + m) - x_eval < x_eval - lo) ++lo;

  double h = std::max(x_eval - lo, static_cast<double>(lo + m - 1) - x_eval);
  if (q > n)  // loess neighborhood extension beyond the data range
    h *= static_cast<double>(q) / static_cast<double>(n);
  h = std::max(h, 1e-9);

  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (Index j = lo; j < lo + m; ++j) {
    const double u = std::abs(j - x_eval) / h;
    if (u >= 1.0) continue;
    const double t = 1.0 - u * u * u;
    const double w = t * t * t;
    const double xc = j - x_eval;
    sw += w;
    swx += w * xc;
    swy += w * y[j];
    swxx += w * xc * xc;
    swxy += w * xc * y[j];
  }
  if (sw <= 0.0) return y[std::clamp<Index>(static_cast<Index>(std::lround(x_eval)), 0, n - 1)];
  const double denom = sw * swxx - swx * swx;
  if (std::abs(denom) < 1e-12 * sw * std::max(1.0, swxx))
    return swy / sw;  // degenerate: weighted mean
  const double intercept = (swxx * swy - swx * swxy) / denom;
  return intercept;  // fit evaluated at centered x = 0
}

VecD moving_average(const VecD& y, Index w) {
  const Index n = y.size();
  if (w < 1 || n < w) throw std::invalid_argument("moving_average: bad window");
  VecD out(n - w + 1);
  double acc = 0;
  for (Index i = 0; i < w; ++i) acc += y[i];
  out[0] = acc / w;
  for (Index i = w; i < n; ++i) {
    acc += y[i] - y[i - w];
    out[i - w + 1] = acc / w;
  }
  return out;
}

Index odd_at_least(double v) {
  Index s = static_cast<Index>(std::ceil(v));
  if (s % 2 == 0) ++s;
  return std::max<Index>(s, 3);
}

}  // namespace

VecD loess(const VecD& y, Index span) { return loess_jump(y, span, 1); }

VecD loess_jump(const VecD& y, Index span, Index jump) {
  const Index n = y.size();
  if (n == 0) return y;
  VecD out(n);
  if (n == 1) {
    out[0] = y[0];
    return out;
  }
  jump = std::clamp<Index>(jump, 1, n - 1);
  if (jump == 1) {
    for (Index i = 0; i < n; ++i)
      out[i] = local_linear_at(y, static_cast<double>(i), span);
    return out;
  }
  // Evaluate on a coarse grid including both endpoints, interpolate between.
  std::vector<Index> grid;
  for (Index i = 0; i < n; i += jump) grid.push_back(i);
  if (grid.back() != n - 1) grid.push_back(n - 1);
  std::vector<double> fitted(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    fitted[g] = local_linear_at(y, static_cast<double>(grid[g]), span);
  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
    const Index a = grid[g], b = grid[g + 1];
    for (Index i = a; i <= b; ++i) {
      const double t = (b == a) ? 0.0
                                : static_cast<double>(i - a) /
                                      static_cast<double>(b - a);
      out[i] = fitted[g] * (1.0 - t) + fitted[g + 1] * t;
    }
  }
  return out;
}

StlResult stl_decompose(const VecD& x, Index period, const StlParams& params) {
  const Index n = x.size();
  if (period < 2 || period > n / 2)
    throw std::invalid_argument("stl_decompose: period must be in [2, n/2]");

  const Index n_s = params.seasonal_span;
  const Index n_l =
      params.lowpass_span > 0 ? params.lowpass_span : odd_at_least(static_cast<double>(period));
  const Index n_t = params.trend_span > 0
                        ? params.trend_span
                        : odd_at_least(1.5 * period /
                                       (1.0 - 1.5 / static_cast<double>(n_s)));
  const Index trend_jump = std::max<Index>(1, n_t / 10);
  const Index lowpass_jump = std::max<Index>(1, n_l / 10);

  VecD trend = VecD::Zero(n);
  VecD seasonal = VecD::Zero(n);

  for (int iter = 0; iter < params.inner_iterations; ++iter) {
    // 1. Detrend.
    VecD detrended = x - trend;

    // 2. Cycle-subseries smoothing, extended one period at each end.
    VecD cycle(n + 2 * period);
    for (Index phase = 0; phase < period; ++phase) {
      const Index m = (n - phase + period - 1) / period;  // subseries length
      VecD sub(m);
      for (Index j = 0; j < m; ++j) sub[j] = detrended[phase + j * period];
      for (Index j = 0; j < m; ++j)
        cycle[period + phase + j * period] =
            local_linear_at(sub, static_cast<double>(j), n_s);
      cycle[phase] = local_linear_at(sub, -1.0, n_s);
      // The forward extension lands at index phase + (m+1)*period in the
      // padded array; it exists only while within bounds.
      // Forward extension lands at padded index phase + (m+1)*period; the
      // subseries lengths guarantee every padded slot is written once.
      cycle[phase + (m + 1) * period] =
          local_linear_at(sub, static_cast<double>(m), n_s);
    }

    // 3. Low-pass filter of the smoothed cycle-subseries.
    VecD lp = moving_average(moving_average(cycle, period), period);
    lp = moving_average(lp, 3);
    lp = loess_jump(lp, n_l, lowpass_jump);  // length n

    // 4. Seasonal = smoothed cycle-subseries minus its low-pass component.
    for (Index i = 0; i < n; ++i) seasonal[i] = cycle[period + i] - lp[i];

    // 5-6. Deseasonalize and smooth the trend.
    VecD deseason = x - seasonal;
    trend = loess_jump(deseason, n_t, trend_jump);
  }

  StlResult r;
  r.seasonal = seasonal;
  r.trend = trend;
  r.residual = x - seasonal - trend;
  return r;
}

}  // namespace tsforge::smoothing

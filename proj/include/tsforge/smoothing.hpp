#pragma once

#include "tsforge/types.hpp"

namespace tsforge::smoothing {

/// Loess smooth of an equally spaced sequence: local linear regression with
/// tricube weights over a window of `span` nearest points (span is clamped
/// to [2, n] and forced odd where possible).
VecD loess(const VecD& y, Index span);

/// Loess evaluated on a subset grid then linearly interpolated; identical to
/// loess() when jump == 1.
VecD loess_jump(const VecD& y, Index span, Index jump);

struct StlParams {
  Index seasonal_span = 7;  // cycle-subseries smoother
  Index trend_span = 0;     // 0 = derived from period
  Index lowpass_span = 0;   // 0 = smallest odd >= period
  int inner_iterations = 2;
};

struct StlResult {
  VecD seasonal;
  VecD trend;
  VecD residual;
};

/// Seasonal-trend decomposition by loess for a single period. Components
/// satisfy x = seasonal + trend + residual exactly.
StlResult stl_decompose(const VecD& x, Index period, const StlParams& params = {});

}  // namespace tsforge::smoothing

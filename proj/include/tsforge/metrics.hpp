#pragma once

#include "tsforge/types.hpp"

#include <cstdint>
#include <vector>

namespace tsforge::metrics {

enum class Trend : std::uint8_t { increasing = 0, decreasing = 1, no_trend = 2 };
enum class Scedasticity : std::uint8_t { homo = 0, hetero = 1 };

Trend trend_from_string(const std::string& s);
std::string to_string(Trend t);
std::string to_string(Scedasticity s);

/// Seven-metric characterization of one series.
struct MetricProfile {
  bool stationary = false;
  Trend trend = Trend::no_trend;
  double strength_t = 0.0;  // Kendall tau, [-1, 1]
  int k_seasons = 0;        // number of seasonal components, 0..3
  double strength_s = 0.0;  // [0, 1]
  double volatility = 0.0;  // >= 0
  Scedasticity scedasticity = Scedasticity::homo;
  double memorability = 0.5;  // Hurst exponent, clamped to [0, 1]
  double anomaly = 0.0;       // [0, 1]
};

/// Additive decomposition: x = trend + sum(seasonals) + residual.
struct Decomposition {
  std::vector<VecD> seasonals;  // at most 3 components
  VecD trend;
  VecD residual;
};

struct AdfResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int lags = 0;
};

/// Augmented Dickey-Fuller unit-root test, constant-only regression,
/// Schwert lag order floor(12 * (T/100)^(1/4)), MacKinnon p-value.
AdfResult adf_test(const VecD& x);

/// True iff the ADF p-value < 0.05. Constant input counts as stationary.
bool adf_stationary(const VecD& x);

struct MannKendallResult {
  Trend trend = Trend::no_trend;
  double tau = 0.0;  // Kendall tau-b against time
  double p_value = 1.0;
};

/// Mann-Kendall trend test with tie-corrected variance and normal
/// approximation; two-sided significance at 0.05.
MannKendallResult mann_kendall(const VecD& x);

/// Candidate seasonal periods: dominant periodogram peaks (Fisher g-test)
/// whose trial decomposition retains strength >= 0.1. At most max_k periods,
/// strongest first; empty for aperiodic input.
std::vector<Index> detect_periods(const VecD& x, int max_k = 3);

/// Seasonal-trend decomposition by loess, iterated over the given periods
/// (longest first). Empty periods yield a loess trend and no seasonals.
Decomposition mstl(const VecD& x, const std::vector<Index>& periods);

/// max(0, 1 - var(R) / var(R + sum S_i)), clamped to [0, 1].
/// Zero when there are no seasonal components.
double seasonality_strength(const Decomposition& d);

inline constexpr double kVolatilityMeanFloor = 1e-8;
inline constexpr double kVolatilityCap = 1.2;

/// Population std divided by |mean|; capped at 1.2 when |mean| <= 1e-8.
double volatility(const VecD& x);

/// ARCH LM test on a residual sequence: regress squared residuals on their
/// own lags, T*R^2 ~ chi2(lags). Hetero iff p <= 0.05.
Scedasticity arch_lm(const VecD& residual, int lags = 12);

/// Hurst exponent via rescaled range over dyadic block sizes 16..length/4
/// with the Anis-Lloyd finite-sample correction; clamped to [0, 1].
/// Constant input maps to 0.5.
double hurst(const VecD& x);

/// Fraction of points with z-score > 1.645 (one-tailed 95%). Zero for
/// constant input.
double anomaly_ratio(const VecD& x);

struct ProfileOptions {
  Index max_context = 4096;
  int segments = 3;
};

/// Full profile. Series longer than max_context are profiled on three
/// seeded random segments: continuous metrics averaged, discrete metrics
/// majority-voted with ties broken toward the first segment.
MetricProfile profile_series(const VecD& x, std::uint64_t seed,
                             const ProfileOptions& opts = {});

}  // namespace tsforge::metrics

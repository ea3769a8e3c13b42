#include "tsforge/metrics.hpp"

#include "tsforge/rng.hpp"
#include "tsforge/smoothing.hpp"
#include "tsforge/special.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace tsforge::metrics {

namespace {

double population_variance(const VecD& x) {
  const double mu = x.mean();
  return (x.array() - mu).square().sum() / static_cast<double>(x.size());
}

struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd stderr_;
  double r_squared = 0.0;
  Index n_obs = 0;
};

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Index n = X.rows(), k = X.cols();
  OlsFit fit;
  fit.n_obs = n;
  fit.coef = X.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - X * fit.coef;
  const double sse = resid.squaredNorm();
  const double dof = static_cast<double>(n - k);
  const double sigma2 = dof > 0 ? sse / dof : 0.0;
  const Eigen::MatrixXd xtx_inv =
      (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
  fit.stderr_ = (sigma2 * xtx_inv.diagonal()).cwiseMax(0.0).cwiseSqrt();
  const double ybar = y.mean();
  const double sst = (y.array() - ybar).square().sum();
  fit.r_squared = sst > 0 ? 1.0 - sse / sst : 0.0;
  return fit;
}

// MacKinnon (1994) approximate asymptotic p-value for the constant-only
// Dickey-Fuller t-statistic.
double mackinnon_p(double t) {
  constexpr double kMax = 2.74, kMin = -18.83, kStar = -1.61;
  if (t > kMax) return 1.0;
  if (t < kMin) return 0.0;
  double z;
  if (t <= kStar) {
    z = 2.1659 + t * (1.4412 + t * 0.038269);
  } else {
    z = 1.7339 + t * (0.93202 + t * (-0.12745 + t * -0.010368));
  }
  return special::normal_cdf(z);
}

// Strict inversion count (pairs i<j with x[i] > x[j]) via merge sort.
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& buf,
                               std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t count = count_inversions(v, buf, lo, mid) +
                        count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[i] <= v[j]) {
      buf[k++] = v[i++];
    } else {
      count += mid - i;
      buf[k++] = v[j++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return count;
}

}  // namespace

Trend trend_from_string(const std::string& s) {
  if (s == "increasing") return Trend::increasing;
  if (s == "decreasing") return Trend::decreasing;
  if (s == "no_trend") return Trend::no_trend;
  throw DataError("unknown trend value: " + s);
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::increasing: return "increasing";
    case Trend::decreasing: return "decreasing";
    case Trend::no_trend: return "no_trend";
  }
  return "no_trend";
}

std::string to_string(Scedasticity s) {
  return s == Scedasticity::homo ? "homo" : "hetero";
}

AdfResult adf_test(const VecD& x) {
  const Index n = x.size();
  if (n < 32) throw std::invalid_argument("adf_test: need length >= 32");
  AdfResult res;
  if (population_variance(x) <= 1e-24) {
    // Constant series: trivially stationary by convention.
    res.statistic = -std::numeric_limits<double>::infinity();
    res.p_value = 0.0;
    return res;
  }

  const int lags = static_cast<int>(
      std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
  res.lags = lags;

  // Regression: dy_t = alpha + phi * y_{t-1} + sum_i gamma_i dy_{t-i}.
  const Index nobs = n - 1 - lags;
  if (nobs < lags + 4)
    throw std::invalid_argument("adf_test: series too short for lag order");
  Eigen::MatrixXd X(nobs, lags + 2);
  Eigen::VectorXd y(nobs);
  for (Index r = 0; r < nobs; ++r) {
    const Index t = r + lags + 1;  // index into x of dy_t's right endpoint
    y[r] = x[t] - x[t - 1];
    X(r, 0) = x[t - 1];
    for (int i = 1; i <= lags; ++i) X(r, i) = x[t - i] - x[t - i - 1];
    X(r, lags + 1) = 1.0;
  }
  const OlsFit fit = ols(X, y);
  if (fit.stderr_[0] <= 0) {
    res.statistic = 0.0;
    res.p_value = 1.0;
    return res;
  }
  res.statistic = fit.coef[0] / fit.stderr_[0];
  res.p_value = mackinnon_p(res.statistic);
  return res;
}

bool adf_stationary(const VecD& x) { return adf_test(x).p_value < 0.05; }

MannKendallResult mann_kendall(const VecD& x) {
  const Index n = x.size();
  if (n < 8) throw std::invalid_argument("mann_kendall: need length >= 8");

  // S = #concordant - #discordant = C(n,2) - ties - 2 * inversions.
  std::vector<double> v(x.data(), x.data() + n), buf(n);
  const std::uint64_t inversions = count_inversions(v, buf, 0, n);
  // v is now sorted; extract tie-group sizes.
  std::uint64_t tie_pairs = 0;
  double tie_var = 0.0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) {
      tie_pairs += static_cast<std::uint64_t>(t * (t - 1) / 2);
      tie_var += t * (t - 1) * (2 * t + 5);
    }
    i = j;
  }
  const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
  const double s_stat =
      n0 - static_cast<double>(tie_pairs) - 2.0 * static_cast<double>(inversions);

  MannKendallResult res;
  const double denom = (n0 - static_cast<double>(tie_pairs)) * n0;
  res.tau = denom > 0 ? s_stat / std::sqrt(denom) : 0.0;

  const double var_s =
      (static_cast<double>(n) * (n - 1) * (2.0 * n + 5) - tie_var) / 18.0;
  if (var_s <= 0) {
    res.p_value = 1.0;
    res.trend = Trend::no_trend;
    return res;
  }
  double z = 0.0;
  if (s_stat > 0) z = (s_stat - 1.0) / std::sqrt(var_s);
  if (s_stat < 0) z = (s_stat + 1.0) / std::sqrt(var_s);
  res.p_value = 2.0 * (1.0 - special::normal_cdf(std::abs(z)));
  if (res.p_value < 0.05)
    res.trend = s_stat > 0 ? Trend::increasing : Trend::decreasing;
  else
    res.trend = Trend::no_trend;
  return res;
}

namespace {

// Periodogram of the linearly detrended series; index k covers frequencies
// k/n for k in [1, n/2].
Eigen::ArrayXd periodogram(const VecD& x) {
  const Index n = x.size();
  // Least-squares line removal.
  const double tbar = (n - 1) / 2.0;
  const double xbar = x.mean();
  double sxx = 0, sxy = 0;
  for (Index i = 0; i < n; ++i) {
    sxx += (i - tbar) * (i - tbar);
    sxy += (i - tbar) * (x[i] - xbar);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  std::vector<double> d(n);
  for (Index i = 0; i < n; ++i) d[i] = x[i] - xbar - slope * (i - tbar);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, d);
  const Index m = n / 2;
  Eigen::ArrayXd power(m);
  for (Index k = 1; k <= m; ++k) power[k - 1] = std::norm(spec[k]);
  return power;
}

double fisher_g_pvalue(const Eigen::ArrayXd& power) {
  const double total = power.sum();
  if (total <= 0) return 1.0;
  const double g = power.maxCoeff() / total;
  const double n_freq = static_cast<double>(power.size());
  // First-term approximation of Fisher's exact g-test.
  const double logp = std::log(n_freq) + (n_freq - 1.0) * std::log1p(-g);
  return std::min(1.0, std::exp(logp));
}

double trial_strength(const smoothing::StlResult& r) {
  const VecD rs = r.residual + r.seasonal;
  const double denom = population_variance(rs);
  if (denom <= 1e-12) return 0.0;
  const double value = 1.0 - population_variance(r.residual) / denom;
  return std::clamp(value, 0.0, 1.0);
}

constexpr double kFisherAlpha = 0.01;
constexpr double kStrengthFloor = 0.1;

}  // namespace

std::vector<Index> detect_periods(const VecD& x, int max_k) {
  std::vector<Index> accepted;
  const Index n = x.size();
  if (n < 6 || max_k < 1) return accepted;

  VecD work = x;
  while (static_cast<int>(accepted.size()) < max_k) {
    Eigen::ArrayXd power = periodogram(work);
    if (fisher_g_pvalue(power) >= kFisherAlpha) break;

    bool found = false;
    for (int attempt = 0; attempt < 5 && !found; ++attempt) {
      Index peak;
      power.maxCoeff(&peak);
      if (power[peak] <= 0) break;
      const Index k = peak + 1;
      const Index period = static_cast<Index>(
          std::lround(static_cast<double>(n) / static_cast<double>(k)));
      power[peak] = 0.0;  // consumed either way
      if (period < 2 || period > n / 2) continue;
      const bool duplicate =
          std::any_of(accepted.begin(), accepted.end(), [&](Index p) {
            return std::abs(p - period) <= 1;
          });
      if (duplicate) continue;
      const smoothing::StlResult trial = smoothing::stl_decompose(work, period);
      if (trial_strength(trial) < kStrengthFloor) continue;
      accepted.push_back(period);
      work -= trial.seasonal;
      found = true;
    }
    if (!found) break;
  }
  return accepted;
}

Decomposition mstl(const VecD& x, const std::vector<Index>& periods) {
  const Index n = x.size();
  Decomposition d;
  if (periods.empty()) {
    const Index span = std::max<Index>(5, (n / 4) | 1);
    d.trend = smoothing::loess_jump(x, span, std::max<Index>(1, span / 10));
    d.residual = x - d.trend;
    return d;
  }
  if (periods.size() > 3)
    throw std::invalid_argument("mstl: at most 3 seasonal periods");
  for (Index p : periods)
    if (p < 2 || p > n / 2)
      throw std::invalid_argument("mstl: period must be in [2, length/2]");

  // Longest period first; two refinement passes.
  std::vector<Index> order(periods);
  std::sort(order.begin(), order.end(), std::greater<>());

  std::map<Index, VecD> seasonal;
  for (Index p : order) seasonal[p] = VecD::Zero(n);
  VecD trend = VecD::Zero(n);

  constexpr int kPasses = 2;
  for (int pass = 0; pass < kPasses; ++pass) {
    for (Index p : order) {
      VecD work = x - trend;
      for (Index q : order)
        if (q != p) work -= seasonal[q];
      // stl_decompose sees the series with other seasonals removed but its
      // own still present (plus the trend, which it re-estimates).
      work += trend;
      const smoothing::StlResult r = smoothing::stl_decompose(work, p);
      seasonal[p] = r.seasonal;
      trend = r.trend;
    }
  }

  for (Index p : order) d.seasonals.push_back(seasonal[p]);
  d.trend = trend;
  VecD resid = x - trend;
  for (const auto& s : d.seasonals) resid -= s;
  d.residual = resid;
  return d;
}

double seasonality_strength(const Decomposition& d) {
  if (d.seasonals.empty()) return 0.0;
  VecD combined = d.residual;
  for (const auto& s : d.seasonals) combined += s;
  const double denom = population_variance(combined);
  if (denom <= 1e-12) return 0.0;
  const double value = 1.0 - population_variance(d.residual) / denom;
  return std::clamp(value, 0.0, 1.0);
}

double volatility(const VecD& x) {
  if (x.size() < 2) throw std::invalid_argument("volatility: need length >= 2");
  const double mu = x.mean();
  if (std::abs(mu) <= kVolatilityMeanFloor) return kVolatilityCap;
  return std::sqrt(population_variance(x)) / std::abs(mu);
}

Scedasticity arch_lm(const VecD& residual, int lags) {
  const Index n = residual.size();
  lags = std::min<int>(lags, static_cast<int>(n / 4));
  if (lags < 1 || n < 4 * lags)
    throw std::invalid_argument("arch_lm: input too short for lag order");
  if (population_variance(residual) <= 1e-12) return Scedasticity::homo;

  const VecD sq = residual.array().square();
  const Index nobs = n - lags;
  Eigen::MatrixXd X(nobs, lags + 1);
  Eigen::VectorXd y(nobs);
  for (Index r = 0; r < nobs; ++r) {
    const Index t = r + lags;
    y[r] = sq[t];
    X(r, 0) = 1.0;
    for (int i = 1; i <= lags; ++i) X(r, i) = sq[t - i];
  }
  const OlsFit fit = ols(X, y);
  const double lm = static_cast<double>(nobs) * std::max(0.0, fit.r_squared);
  const double p = special::chi2_sf(lm, static_cast<double>(lags));
  return p > 0.05 ? Scedasticity::homo : Scedasticity::hetero;
}

namespace {

// Anis-Lloyd expected rescaled range under i.i.d. input, with the small-m
// (m - 0.5)/m adjustment.
double expected_rescaled_range(Index m) {
  double pref;
  if (m <= 340) {
    pref = std::exp(std::lgamma((m - 1) / 2.0) - std::lgamma(m / 2.0)) /
           std::sqrt(std::numbers::pi);
  } else {
    pref = 1.0 / std::sqrt(m * std::numbers::pi / 2.0);
  }
  double sum = 0.0;
  for (Index i = 1; i < m; ++i)
    sum += std::sqrt(static_cast<double>(m - i) / static_cast<double>(i));
  return (static_cast<double>(m) - 0.5) / static_cast<double>(m) * pref * sum;
}

}  // namespace

double hurst(const VecD& x) {
  const Index n = x.size();
  if (n < 128) throw std::invalid_argument("hurst: need length >= 128");
  if (population_variance(x) <= 1e-24) return 0.5;

  std::vector<double> log_m, log_ratio;
  for (Index m = 16; m <= n / 4; m *= 2) {
    const Index blocks = n / m;
    double rs_sum = 0.0;
    Index rs_count = 0;
    for (Index b = 0; b < blocks; ++b) {
      const auto blk = x.segment(b * m, m);
      const double mu = blk.mean();
      double cum = 0.0, cmin = 0.0, cmax = 0.0, ss = 0.0;
      for (Index i = 0; i < m; ++i) {
        const double dev = blk[i] - mu;
        cum += dev;
        cmin = std::min(cmin, cum);
        cmax = std::max(cmax, cum);
        ss += dev * dev;
      }
      const double sd = std::sqrt(ss / static_cast<double>(m));
      if (sd <= 1e-12) continue;
      rs_sum += (cmax - cmin) / sd;
      ++rs_count;
    }
    if (rs_count == 0) continue;
    const double rs = rs_sum / static_cast<double>(rs_count);
    log_m.push_back(std::log(static_cast<double>(m)));
    log_ratio.push_back(std::log(rs) - std::log(expected_rescaled_range(m)));
  }
  if (log_m.size() < 2) return 0.5;

  // Least-squares slope of the corrected log R/S against log m.
  const double mx =
      std::accumulate(log_m.begin(), log_m.end(), 0.0) / log_m.size();
  const double my =
      std::accumulate(log_ratio.begin(), log_ratio.end(), 0.0) / log_ratio.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < log_m.size(); ++i) {
    sxx += (log_m[i] - mx) * (log_m[i] - mx);
    sxy += (log_m[i] - mx) * (log_ratio[i] - my);
  }
  const double h = 0.5 + (sxx > 0 ? sxy / sxx : 0.0);
  return std::clamp(h, 0.0, 1.0);
}

double anomaly_ratio(const VecD& x) {
  const Index n = x.size();
  if (n < 2) throw std::invalid_argument("anomaly_ratio: need length >= 2");
  const double mu = x.mean();
  const double sd = std::sqrt(population_variance(x));
  if (sd <= 1e-8) return 0.0;
  const Index count =
      (((x.array() - mu) / sd) > 1.645).count();
  return static_cast<double>(count) / static_cast<double>(n);
}

namespace {

MetricProfile profile_whole(const VecD& x) {
  MetricProfile p;
  p.stationary = adf_stationary(x);
  const MannKendallResult mk = mann_kendall(x);
  p.trend = mk.trend;
  p.strength_t = mk.tau;
  const std::vector<Index> periods = detect_periods(x);
  p.k_seasons = static_cast<int>(periods.size());
  const Decomposition d = mstl(x, periods);
  p.strength_s = seasonality_strength(d);
  p.volatility = volatility(x);
  p.scedasticity = arch_lm(d.residual);
  p.memorability = hurst(x);
  p.anomaly = anomaly_ratio(x);
  return p;
}

template <typename T>
T majority_vote(const std::vector<T>& votes) {
  // Most frequent value; ties resolve to the first segment's value.
  T best = votes.front();
  int best_count = 0;
  for (const T& candidate : votes) {
    const int c = static_cast<int>(std::count(votes.begin(), votes.end(), candidate));
    if (c > best_count) {
      best = candidate;
      best_count = c;
    }
  }
  return best;
}

}  // namespace

MetricProfile profile_series(const VecD& x, std::uint64_t seed,
                             const ProfileOptions& opts) {
  const Index n = x.size();
  if (n < 512) throw std::invalid_argument("profile_series: need length >= 512");
  if (n <= opts.max_context) return profile_whole(x);

  rng::Engine eng(seed);
  std::vector<MetricProfile> segs;
  segs.reserve(opts.segments);
  for (int s = 0; s < opts.segments; ++s) {
    const Index start = static_cast<Index>(
        rng::bounded(eng, static_cast<std::uint64_t>(n - opts.max_context + 1)));
    segs.push_back(profile_whole(x.segment(start, opts.max_context)));
  }

  MetricProfile p;
  std::vector<char> stat_votes;
  std::vector<Trend> trend_votes;
  std::vector<int> k_votes;
  std::vector<Scedasticity> sced_votes;
  for (const auto& s : segs) {
    stat_votes.push_back(s.stationary ? 1 : 0);
    trend_votes.push_back(s.trend);
    k_votes.push_back(s.k_seasons);
    sced_votes.push_back(s.scedasticity);
    p.strength_t += s.strength_t;
    p.strength_s += s.strength_s;
    p.volatility += s.volatility;
    p.memorability += s.memorability;
    p.anomaly += s.anomaly;
  }
  const double ns = static_cast<double>(segs.size());
  p.strength_t /= ns;
  p.strength_s /= ns;
  p.volatility /= ns;
  p.memorability /= ns;
  p.anomaly /= ns;
  p.stationary = majority_vote(stat_votes) != 0;
  p.trend = majority_vote(trend_votes);
  p.k_seasons = majority_vote(k_votes);
  p.scedasticity = majority_vote(sced_votes);
  return p;
}

}  // namespace tsforge::metrics

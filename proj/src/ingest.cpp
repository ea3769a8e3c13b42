#include "tsforge/ingest.hpp"

#include <algorithm>
#include <cmath>

namespace tsforge::ingest {

bool accept_series(const Series& s, Index min_len, double max_missing_frac) {
  if (s.length() < min_len) return false;
  return s.missing_fraction() <= max_missing_frac;
}

Series fill_missing_zero(Series s) {
  for (Index i = 0; i < s.values.size(); ++i)
    if (s.missing[i] || !std::isfinite(s.values[i])) s.values[i] = 0.0f;
  return s;
}

namespace {

template <typename Vec>
Vec zscore_vec(const Vec& x) {
  using Scalar = typename Vec::Scalar;
  if (x.size() < 2) throw DataError("zscore: series must have length >= 2");
  const double mu = x.template cast<double>().mean();
  const double var =
      (x.template cast<double>().array() - mu).square().sum() /
      static_cast<double>(x.size());
  const double sd = std::sqrt(var);
  if (sd <= kZScoreStdFloor) return Vec::Zero(x.size());
  return ((x.template cast<double>().array() - mu) / sd)
      .template cast<Scalar>()
      .matrix();
}

}  // namespace

VecD zscore(const VecD& x) { return zscore_vec(x); }
VecF zscore(const VecF& x) { return zscore_vec(x); }

Series zscore(Series s) {
  s.values = zscore(s.values);
  return s;
}

Normalization normalization_from_string(const std::string& name) {
  if (name == "none") return Normalization::none;
  if (name == "per-series") return Normalization::per_series;
  if (name == "per-dataset") return Normalization::per_dataset;
  throw DataError("unknown normalization mode: " + name);
}

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::none: return "none";
    case Normalization::per_series: return "per-series";
    case Normalization::per_dataset: return "per-dataset";
  }
  return "none";
}

void normalize_corpus(RawCorpus& corpus, Normalization mode) {
  if (mode == Normalization::none) return;
  if (mode == Normalization::per_series) {
    for (auto& d : corpus.sub_datasets)
      for (auto& s : d.series) s = zscore(std::move(s));
    return;
  }
  // Per-dataset: pooled mean/std over all values of the sub-dataset.
  for (auto& d : corpus.sub_datasets) {
    double sum = 0.0;
    std::uint64_t n = 0;
    for (const auto& s : d.series) {
      sum += s.values.cast<double>().sum();
      n += static_cast<std::uint64_t>(s.length());
    }
    if (n < 2) continue;
    const double mu = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& s : d.series)
      ss += (s.values.cast<double>().array() - mu).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(n));
    for (auto& s : d.series) {
      if (sd <= kZScoreStdFloor) {
        s.values.setZero();
      } else {
        s.values = ((s.values.cast<double>().array() - mu) / sd)
                       .cast<float>()
                       .matrix();
      }
    }
  }
}

std::uint64_t candidate_window_count(Index T, const WindowSpec& w) {
  if (T < w.window_len) return 0;
  return static_cast<std::uint64_t>((T - w.window_len) / w.stride) + 1;
}

FilterReport prepare_corpus(RawCorpus& corpus, const FilterOptions& opts) {
  FilterReport report;
  for (auto& d : corpus.sub_datasets) {
    std::vector<Series> kept;
    kept.reserve(d.series.size());
    for (auto& s : d.series) {
      if (s.length() < opts.min_len) {
        ++report.dropped_short;
        continue;
      }
      if (s.missing_fraction() > opts.max_missing_frac) {
        ++report.dropped_missing;
        continue;
      }
      kept.push_back(fill_missing_zero(std::move(s)));
      ++report.kept;
    }
    d.series = std::move(kept);
  }
  std::erase_if(corpus.sub_datasets,
                [](const SubDataset& d) { return d.series.empty(); });
  normalize_corpus(corpus, opts.normalization);
  return report;
}

}  // namespace tsforge::ingest

#pragma once

#include "tsforge/types.hpp"

#include <cstdint>
#include <filesystem>

namespace tsforge::ingest {

/// Acceptance filter: length >= min_len and missing fraction <= max_missing.
/// Thresholds refer to the raw series, before any fill or normalization.
bool accept_series(const Series& s, Index min_len = 512,
                   double max_missing_frac = 0.05);

/// Replaces masked values with zero. The mask itself is retained.
Series fill_missing_zero(Series s);

inline constexpr double kZScoreStdFloor = 1e-8;

/// Per-series z-score with population std. Constant series (std <= 1e-8)
/// map to all zeros. Requires length >= 2.
Series zscore(Series s);

/// Z-score an arbitrary vector (population std, same constant-series rule).
VecD zscore(const VecD& x);
VecF zscore(const VecF& x);

enum class Normalization { none, per_series, per_dataset };

Normalization normalization_from_string(const std::string& name);
std::string to_string(Normalization n);

/// Applies the chosen normalization in place. Per-dataset mode pools the
/// mean/std over every value of a sub-dataset.
void normalize_corpus(RawCorpus& corpus, Normalization mode);

/// Number of candidate windows of a series of length T:
/// floor((T - |W|) / S) + 1, or 0 when T < |W|.
std::uint64_t candidate_window_count(Index T, const WindowSpec& w);

struct FilterOptions {
  Index min_len = 512;
  double max_missing_frac = 0.05;
  Normalization normalization = Normalization::per_series;
};

struct FilterReport {
  std::size_t kept = 0;
  std::size_t dropped_short = 0;
  std::size_t dropped_missing = 0;
};

/// Filter -> zero-fill -> normalize, in that order. Sub-datasets that end
/// up empty are removed.
FilterReport prepare_corpus(RawCorpus& corpus, const FilterOptions& opts);

}  // namespace tsforge::ingest

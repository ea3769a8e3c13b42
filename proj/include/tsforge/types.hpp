#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsforge {

using Eigen::Index;
using VecF = Eigen::VectorXf;
using VecD = Eigen::VectorXd;
using MaskArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Error in user-supplied data or files (CLI exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeriesKey {
  std::string dataset_id;
  std::string series_id;

  auto operator<=>(const SeriesKey&) const = default;
  bool operator==(const SeriesKey&) const = default;
};

inline std::string to_string(const SeriesKey& k) {
  return k.dataset_id + "/" + k.series_id;
}

/// One raw time series. `missing` marks positions that were absent in the
/// source; it is retained after zero-filling so provenance survives.
struct Series {
  std::string dataset_id;
  std::string series_id;
  VecF values;
  MaskArray missing;

  Index length() const { return values.size(); }
  SeriesKey key() const { return {dataset_id, series_id}; }

  double missing_fraction() const {
    if (missing.size() == 0) return 0.0;
    return static_cast<double>(missing.count()) /
           static_cast<double>(missing.size());
  }

  VecD values_as_double() const { return values.cast<double>(); }
};

struct SubDataset {
  std::string dataset_id;
  std::string domain;  // informational tag from the manifest
  std::vector<Series> series;
};

struct RawCorpus {
  std::vector<SubDataset> sub_datasets;

  std::uint64_t total_observations() const {
    std::uint64_t n = 0;
    for (const auto& d : sub_datasets)
      for (const auto& s : d.series) n += static_cast<std::uint64_t>(s.length());
    return n;
  }

  std::size_t series_count() const {
    std::size_t n = 0;
    for (const auto& d : sub_datasets) n += d.series.size();
    return n;
  }
};

/// Sliding context window: length |W| and stride S (default 1).
struct WindowSpec {
  Index window_len = 4096;
  Index stride = 1;
};

}  // namespace tsforge

template <>
struct std::hash<tsforge::SeriesKey> {
  std::size_t operator()(const tsforge::SeriesKey& k) const noexcept {
    std::size_t h1 = std::hash<std::string>{}(k.dataset_id);
    std::size_t h2 = std::hash<std::string>{}(k.series_id);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ull + (h1 << 6) + (h1 >> 2));
  }
};

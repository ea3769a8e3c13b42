#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <string_view>

namespace tsforge::rng {

// std::mt19937_64 output is specified bit-exactly by the standard; the
// distribution transforms below avoid std::*_distribution, whose results
// are implementation-defined. Together they make every sampled stream
// reproducible across compilers and platforms.
using Engine = std::mt19937_64;

/// Stage seed derived from the global seed and a stage label (FNV-1a mix).
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view label);

/// Uniform double in [0, 1) with 53 random bits.
inline double canonical(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Rejection sampling, exact for any n >= 1.
std::uint64_t bounded(Engine& eng, std::uint64_t n);

/// Standard normal via Box-Muller (two uniforms per call, no cached spare).
double normal(Engine& eng);

/// Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
double gamma(Engine& eng, double shape);

/// Symmetric Dirichlet(alpha) over k components.
Eigen::VectorXd dirichlet(Engine& eng, double alpha, int k);

/// Fisher-Yates draw of `k` distinct indices from [0, n).
std::vector<std::uint64_t> sample_without_replacement(Engine& eng,
                                                      std::uint64_t n,
                                                      std::uint64_t k);

}  // namespace tsforge::rng

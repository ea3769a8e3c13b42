#include "tsforge/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tsforge::rng {

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view label) {
  // FNV-1a over the label, then splitmix64 finalization mixed with the seed.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  std::uint64_t z = global_seed + 0x9e3779b97f4a7c15ull * (h | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t bounded(Engine& eng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("rng::bounded: n must be positive");
  if ((n & (n - 1)) == 0) return eng() & (n - 1);  // power of two
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v = eng();
  while (v >= limit) v = eng();
  return v % n;
}

double normal(Engine& eng) {
  // Box-Muller; u clamped away from 0 so log() stays finite.
  double u = canonical(eng);
  double v = canonical(eng);
  if (u <= 0.0) u = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * std::numbers::pi * v);
}

double gamma(Engine& eng, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("rng::gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost: Gamma(a) = Gamma(a+1) * U^(1/a)
    const double u = canonical(eng);
    return gamma(eng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal(eng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = canonical(eng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
      return d * v;
  }
}

Eigen::VectorXd dirichlet(Engine& eng, double alpha, int k) {
  if (k < 1) throw std::invalid_argument("rng::dirichlet: k must be >= 1");
  Eigen::VectorXd w(k);
  for (int i = 0; i < k; ++i) w[i] = gamma(eng, alpha);
  const double total = w.sum();
  if (total <= 0.0) return Eigen::VectorXd::Constant(k, 1.0 / k);
  return w / total;
}

std::vector<std::uint64_t> sample_without_replacement(Engine& eng,
                                                      std::uint64_t n,
                                                      std::uint64_t k) {
  if (k > n)
    throw std::invalid_argument("sample_without_replacement: k exceeds n");
  std::vector<std::uint64_t> out;
  out.reserve(k);
  if (k * 4 <= n) {
    // Few draws from a large pool: reject duplicates instead of
    // materializing the pool.
    while (out.size() < k) {
      const std::uint64_t v = bounded(eng, n);
      bool seen = false;
      for (std::uint64_t prev : out) seen = seen || (prev == v);
      if (!seen) out.push_back(v);
    }
    return out;
  }
  std::vector<std::uint64_t> pool(n);
  for (std::uint64_t i = 0; i < n; ++i) pool[i] = i;
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t j = i + bounded(eng, n - i);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

}  // namespace tsforge::rng

#include "blockshrink/sequence_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace blockshrink {

namespace {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline double to_open_unit(std::uint64_t x) {
  // 53-bit mantissa shifted into (0,1); the +0.5 keeps log() finite.
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double standard_normal(const SeedSpec& seed, int level, std::uint64_t k) {
  std::uint64_t h = mix64(0x853c49e6748fea9bull ^ seed.master_seed);
  h = mix64(h ^ seed.repetition);
  h = mix64(h ^ static_cast<std::uint64_t>(level + 2));
  h = mix64(h ^ k);
  const double u1 = to_open_unit(mix64(h ^ 0x2545f4914f6cdd1dull));
  const double u2 = to_open_unit(mix64(h ^ 0xd1b54a32d192ed03ull));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

NoisyCoefficients simulate(const CoefficientTree& truth, std::uint64_t n, double sigma,
                           const SeedSpec& seed) {
  if (!is_power_of_two(n) || n < 2)
    throw std::invalid_argument("simulate: n must be a power of two >= 2");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::domain_error("simulate: sigma must be positive and finite");
  if (!truth.well_formed()) throw std::invalid_argument("simulate: malformed truth tree");
  const int max = log2_exact(n);
  const double noise_sd = sigma / std::sqrt(static_cast<double>(n));
  NoisyCoefficients obs{CoefficientTree::zeros(max), n, sigma};
  for (int j = -1; j <= max; ++j) {
    auto& lvl = obs.y.level(j);
    const bool have_truth = truth.has_level(j);
    for (std::size_t k = 0; k < lvl.size(); ++k) {
      const double d = have_truth ? truth.level(j)[k] : 0.0;
      lvl[k] = d + noise_sd * standard_normal(seed, j, k);
    }
  }
  return obs;
}

NoisyCoefficients rescale_for_estimation(const NoisyCoefficients& obs) {
  if (!(obs.sigma > 0.0)) throw std::domain_error("rescale: sigma must be positive");
  NoisyCoefficients out{obs.y, obs.n, 1.0};
  for (auto& lvl : out.y.levels)
    for (double& v : lvl) v /= obs.sigma;
  return out;
}

CoefficientTree standardized_residuals(const NoisyCoefficients& obs, const CoefficientTree& truth) {
  const double scale = std::sqrt(static_cast<double>(obs.n)) / obs.sigma;
  CoefficientTree out = CoefficientTree::zeros(obs.y.max_level());
  for (int j = -1; j <= out.max_level(); ++j) {
    const bool have_truth = truth.has_level(j);
    for (std::size_t k = 0; k < out.level(j).size(); ++k) {
      const double d = have_truth ? truth.level(j)[k] : 0.0;
      out.level(j)[k] = (obs.y.level(j)[k] - d) * scale;
    }
  }
  return out;
}

}  // namespace blockshrink

#pragma once

#include <cstdint>

#include "blockshrink/wavelet.hpp"

namespace blockshrink {

/// Identifies one Monte Carlo repetition.  Together with the coefficient
/// index (j,k) it determines every noise draw, independent of scheduling.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t repetition = 0;
};

/// Observed sequence Y_{j,k} = d_{j,k} + sigma n^{-1/2} eps_{j,k} together
/// with the model parameters.  The tree carries levels -1..J; simulation
/// fills J = log2(n), a transformed data file fills J = log2(n) - 1.
struct NoisyCoefficients {
  CoefficientTree y;
  std::uint64_t n = 2;
  double sigma = 1.0;
};

/// Standard normal draw keyed on (seed, repetition, level, k) via a
/// counter-based generator (splitmix64 chain + Box-Muller).
double standard_normal(const SeedSpec& seed, int level, std::uint64_t k);

/// Y_{j,k} = d_{j,k} + sigma n^{-1/2} eps_{j,k} on levels -1..log2(n).
/// Truth levels above log2(n) are dropped here; callers keep them for risk
/// tails.  n must be a power of two >= 2, sigma > 0.
NoisyCoefficients simulate(const CoefficientTree& truth, std::uint64_t n, double sigma,
                           const SeedSpec& seed);

/// Observations divided by sigma, sigma field set to 1.  Estimators run on
/// this scale and multiply their output back.
NoisyCoefficients rescale_for_estimation(const NoisyCoefficients& obs);

/// eps_{j,k} = sqrt(n) (Y_{j,k} - d_{j,k}) / sigma; truth levels beyond the
/// observation tree are treated as zero.
CoefficientTree standardized_residuals(const NoisyCoefficients& obs, const CoefficientTree& truth);

}  // namespace blockshrink

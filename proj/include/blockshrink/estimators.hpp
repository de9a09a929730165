#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blockshrink/blocks.hpp"
#include "blockshrink/sequence_model.hpp"

namespace blockshrink {

enum class Variant {
  truncated_block,  // clamp |Y| at t_j on every kept level
  plain_block,      // keep Y verbatim on levels with L_j < infinity
  projection,       // known-smoothness clamp at c 2^{-j(2beta+1)/2}, cutoff J_n(beta)
  hard,             // term-by-term hard thresholding at lambda_mult sigma sqrt(2 ln n / n)
};

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct EstimatorConfig {
  double gamma = 7.0;
  Variant variant = Variant::truncated_block;
  // Zero every block whose own squared sum is below gamma ln n / n.  On for
  // the simulation harness, off for the theoretical form.
  bool block_zeroing = true;
  // Keep levels j <= 2 verbatim (practical denoising aid; off by default).
  bool keep_coarse = false;
  double beta = 1.0;        // projection only
  double Q = 1.0;           // projection only
  double lambda_mult = 1.0; // hard only
};

/// Per-level diagnostics.  L and t are the level statistic and truncation
/// value for the block estimators (L = 0 marks "not applicable" for the
/// projection and hard variants, where t holds the clamp/keep threshold).
/// t is reported on the data scale, i.e. multiplied back by sigma.
struct LevelDiagnostics {
  int L = 0;
  double t = 0.0;
  std::size_t clamped = 0;  // |Y| > t_j and clamped to sign(Y) t_j
  std::size_t zeroed = 0;   // set to zero by the level or block rule
};

struct EstimateResult {
  CoefficientTree coefficients;
  std::vector<LevelDiagnostics> levels;  // indexed like the tree: [j + 1]

  const LevelDiagnostics& diagnostics(int j) const {
    return levels[static_cast<std::size_t>(j + 1)];
  }
};

/// Dispatch on cfg.variant.
EstimateResult estimate(const NoisyCoefficients& obs, const EstimatorConfig& cfg);

/// d_hat_{j,k} = sign(Y)(|Y| ^ t_j) per level, with t_j from the level
/// statistic L_j at threshold gamma ln n / n on the sigma-rescaled
/// observations.  With cfg.block_zeroing, coefficients whose own block stays
/// below the threshold are zeroed.
EstimateResult truncated_block_threshold(const NoisyCoefficients& obs, const EstimatorConfig& cfg);

/// d_hat_{j,k} = Y_{j,k} on levels with L_j < infinity, zero elsewhere; no
/// truncation.
EstimateResult plain_block_threshold(const NoisyCoefficients& obs, const EstimatorConfig& cfg);

/// Known-smoothness estimator: clamp at c 2^{-j(2beta+1)/2} for
/// j <= J_n(beta) = floor(log2(n) / (2beta+1)), zero above.  The constant c
/// is taken to be Q; rates are insensitive to it.
EstimateResult projection_estimator(const NoisyCoefficients& obs, double beta, double Q);

/// Baseline: keep Y iff |Y| > lambda_mult sigma sqrt(2 ln n / n).
EstimateResult hard_threshold(const NoisyCoefficients& obs, double lambda_mult);

}  // namespace blockshrink

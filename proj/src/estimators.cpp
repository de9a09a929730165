#include "blockshrink/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace blockshrink {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::truncated_block: return "truncated-block";
    case Variant::plain_block: return "plain-block";
    case Variant::projection: return "projection";
    case Variant::hard: return "hard";
  }
  throw std::logic_error("variant_name: unknown variant");
}

Variant variant_from_name(const std::string& name) {
  if (name == "truncated-block") return Variant::truncated_block;
  if (name == "plain-block") return Variant::plain_block;
  if (name == "projection") return Variant::projection;
  if (name == "hard") return Variant::hard;
  throw std::invalid_argument("unknown estimator variant: " + name);
}

namespace {

void validate(const NoisyCoefficients& obs) {
  if (!is_power_of_two(obs.n) || obs.n < 2)
    throw std::invalid_argument("estimator: n must be a power of two >= 2");
  if (!(obs.sigma > 0.0) || !std::isfinite(obs.sigma))
    throw std::domain_error("estimator: sigma must be positive and finite");
  if (!obs.y.well_formed()) throw std::invalid_argument("estimator: malformed observations");
  if (obs.y.max_level() > log2_exact(obs.n))
    throw std::invalid_argument("estimator: tree deeper than log2(n)");
}

EstimateResult block_estimate(const NoisyCoefficients& obs, const EstimatorConfig& cfg,
                              bool truncated) {
  validate(obs);
  if (!(cfg.gamma > 0.0)) throw std::domain_error("estimator: gamma must be positive");
  const std::uint64_t n = obs.n;
  const double thr = cfg.gamma * std::log(static_cast<double>(n)) / static_cast<double>(n);
  const NoisyCoefficients scaled = rescale_for_estimation(obs);
  const int max = obs.y.max_level();

  EstimateResult res{CoefficientTree::zeros(max), {}};
  res.levels.resize(static_cast<std::size_t>(max + 2));
  std::vector<char> block_dead;
  for (int j = -1; j <= max; ++j) {
    const auto& y = scaled.y.level(j);
    auto& out = res.coefficients.level(j);
    const std::vector<BlockRange> blocks = partition(y.size(), n);
    const int L = compute_L(y, blocks, thr);
    const double t = truncation_threshold(L, cfg.gamma, n);
    LevelDiagnostics diag{L, t * obs.sigma, 0, 0};

    if (cfg.keep_coarse && j <= 2) {
      for (std::size_t k = 0; k < y.size(); ++k) out[k] = y[k] * obs.sigma;
      res.levels[static_cast<std::size_t>(j + 1)] = diag;
      continue;
    }

    block_dead.assign(y.size(), 0);
    if (cfg.block_zeroing) {
      for (const BlockRange& block : blocks) {
        double sum = 0.0;
        for (std::size_t i = block.begin; i < block.end; ++i) sum += y[i] * y[i];
        if (sum < thr)
          for (std::size_t i = block.begin; i < block.end; ++i) block_dead[i] = 1;
      }
    }

    for (std::size_t k = 0; k < y.size(); ++k) {
      const double v = y[k];
      if (block_dead[k] || L == l_infinity) {
        out[k] = 0.0;
        ++diag.zeroed;
      } else if (truncated && std::abs(v) > t) {
        out[k] = std::copysign(t * obs.sigma, v);
        ++diag.clamped;
      } else {
        out[k] = v * obs.sigma;
      }
    }
    res.levels[static_cast<std::size_t>(j + 1)] = diag;
  }
  return res;
}

}  // namespace

EstimateResult truncated_block_threshold(const NoisyCoefficients& obs,
                                         const EstimatorConfig& cfg) {
  return block_estimate(obs, cfg, true);
}

EstimateResult plain_block_threshold(const NoisyCoefficients& obs, const EstimatorConfig& cfg) {
  return block_estimate(obs, cfg, false);
}

EstimateResult projection_estimator(const NoisyCoefficients& obs, double beta, double Q) {
  validate(obs);
  if (!(beta > 0.0) || !(Q > 0.0))
    throw std::domain_error("projection: beta and Q must be positive");
  const NoisyCoefficients scaled = rescale_for_estimation(obs);
  const int max = obs.y.max_level();
  const int cutoff = static_cast<int>(std::floor(
      static_cast<double>(log2_exact(obs.n)) / (2.0 * beta + 1.0)));
  const double c = Q;

  EstimateResult res{CoefficientTree::zeros(max), {}};
  res.levels.resize(static_cast<std::size_t>(max + 2));
  for (int j = -1; j <= max; ++j) {
    const auto& y = scaled.y.level(j);
    auto& out = res.coefficients.level(j);
    LevelDiagnostics diag;
    if (j > cutoff) {
      diag.zeroed = y.size();
      res.levels[static_cast<std::size_t>(j + 1)] = diag;
      continue;
    }
    const double bound = c * std::exp2(-0.5 * static_cast<double>(j) * (2.0 * beta + 1.0));
    diag.t = bound * obs.sigma;
    for (std::size_t k = 0; k < y.size(); ++k) {
      const double v = y[k];
      if (std::abs(v) > bound) {
        out[k] = std::copysign(bound * obs.sigma, v);
        ++diag.clamped;
      } else {
        out[k] = v * obs.sigma;
      }
    }
    res.levels[static_cast<std::size_t>(j + 1)] = diag;
  }
  return res;
}

EstimateResult hard_threshold(const NoisyCoefficients& obs, double lambda_mult) {
  validate(obs);
  if (lambda_mult < 0.0) throw std::domain_error("hard: lambda multiplier must be >= 0");
  const NoisyCoefficients scaled = rescale_for_estimation(obs);
  const std::uint64_t n = obs.n;
  const double lambda =
      lambda_mult * std::sqrt(2.0 * std::log(static_cast<double>(n)) / static_cast<double>(n));
  const int max = obs.y.max_level();

  EstimateResult res{CoefficientTree::zeros(max), {}};
  res.levels.resize(static_cast<std::size_t>(max + 2));
  for (int j = -1; j <= max; ++j) {
    const auto& y = scaled.y.level(j);
    auto& out = res.coefficients.level(j);
    LevelDiagnostics diag{0, lambda * obs.sigma, 0, 0};
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (std::abs(y[k]) > lambda) {
        out[k] = y[k] * obs.sigma;
      } else {
        out[k] = 0.0;
        ++diag.zeroed;
      }
    }
    res.levels[static_cast<std::size_t>(j + 1)] = diag;
  }
  return res;
}

EstimateResult estimate(const NoisyCoefficients& obs, const EstimatorConfig& cfg) {
  switch (cfg.variant) {
    case Variant::truncated_block: return truncated_block_threshold(obs, cfg);
    case Variant::plain_block: return plain_block_threshold(obs, cfg);
    case Variant::projection: return projection_estimator(obs, cfg.beta, cfg.Q);
    case Variant::hard: return hard_threshold(obs, cfg.lambda_mult);
  }
  throw std::logic_error("estimate: unknown variant");
}

}  // namespace blockshrink

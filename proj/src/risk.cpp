#include "blockshrink/risk.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "blockshrink/parallel.hpp"

namespace blockshrink {

double l2_risk(const CoefficientTree& estimate, const CoefficientTree& truth, double tail_energy) {
  if (!estimate.well_formed() || !truth.well_formed())
    throw std::invalid_argument("l2_risk: malformed tree");
  if (!(tail_energy >= 0.0)) throw std::invalid_argument("l2_risk: negative tail energy");
  double sum = tail_energy;
  for (int j = -1; j <= estimate.max_level(); ++j) {
    const auto& est = estimate.level(j);
    const bool have_truth = truth.has_level(j);
    if (have_truth && truth.level(j).size() != est.size())
      throw std::invalid_argument("l2_risk: level size mismatch");
    for (std::size_t k = 0; k < est.size(); ++k) {
      const double diff = est[k] - (have_truth ? truth.level(j)[k] : 0.0);
      sum += diff * diff;
    }
  }
  return sum;
}

double linf_risk_on_grid(const CoefficientTree& estimate, std::span<const double> truth_grid) {
  const std::vector<double> values = evaluate_expansion(estimate, truth_grid.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    sup = std::max(sup, std::abs(values[i] - truth_grid[i]));
  return sup;
}

double linf_risk(const CoefficientTree& estimate, const FunctionSpec& truth_spec,
                 std::size_t grid_size) {
  const std::vector<double> truth = function_values(truth_spec, grid_size);
  return linf_risk_on_grid(estimate, truth);
}

namespace {

// Truth is carried to J+8; for the sine target the remaining energy is
// covered by the certified geometric bound.
constexpr int tail_levels = 8;

std::size_t auto_grid(int max_level, std::size_t requested) {
  if (requested != 0) return requested;
  return std::max<std::size_t>(std::size_t{1} << (max_level + 1), std::size_t{1} << 14);
}

}  // namespace

std::vector<RiskSummary> monte_carlo(const Scenario& scenario) {
  if (scenario.reps < 1) throw std::invalid_argument("monte_carlo: reps must be >= 1");
  if (scenario.gammas.empty()) throw std::invalid_argument("monte_carlo: no gamma values");
  const int max = log2_exact(scenario.n);
  const CoefficientTree truth = true_coefficients(scenario.function, max + tail_levels);
  const double tail_energy = energy_above(truth, max);
  const double tail_bound =
      std::holds_alternative<SineSpec>(scenario.function) ? sine_tail_energy_bound(max + tail_levels) : 0.0;
  const double tail = tail_energy + tail_bound;
  const std::size_t grid = auto_grid(max, scenario.grid_size);
  const std::vector<double> truth_grid = function_values(scenario.function, grid);

  const std::size_t reps = static_cast<std::size_t>(scenario.reps);
  const std::size_t n_gamma = scenario.gammas.size();
  std::vector<RiskSample> samples(reps * n_gamma);

  parallel_for(reps, scenario.threads, [&](std::size_t r) {
    const SeedSpec seed{scenario.master_seed, r};
    const NoisyCoefficients obs = simulate(truth, scenario.n, scenario.sigma, seed);
    const bool event_t = check_event_T(standardized_residuals(obs, truth), scenario.n);
    EstimatorConfig cfg = scenario.config;
    for (std::size_t g = 0; g < n_gamma; ++g) {
      cfg.gamma = scenario.gammas[g];
      const EstimateResult est = estimate(obs, cfg);
      RiskSample& out = samples[r * n_gamma + g];
      out.l2_sq = l2_risk(est.coefficients, truth, tail);
      out.linf = linf_risk_on_grid(est.coefficients, truth_grid);
      out.event_t = event_t;
    }
  });

  std::vector<RiskSummary> summaries(n_gamma);
  for (std::size_t g = 0; g < n_gamma; ++g) {
    RiskSummary& s = summaries[g];
    s.n = scenario.n;
    s.sigma = scenario.sigma;
    s.gamma = scenario.gammas[g];
    s.variant = scenario.config.variant;
    s.reps = scenario.reps;
    s.master_seed = scenario.master_seed;
    s.tail_energy = tail_energy;
    s.tail_bound = tail_bound;
    s.se_degenerate = scenario.reps == 1;
    double l2_sum = 0.0, linf_sum = 0.0;
    std::size_t t_failures = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const RiskSample& x = samples[r * n_gamma + g];
      l2_sum += x.l2_sq;
      linf_sum += x.linf;
      if (!x.event_t) ++t_failures;
    }
    s.l2_mean = l2_sum / static_cast<double>(reps);
    s.linf_mean = linf_sum / static_cast<double>(reps);
    s.event_t_failure_rate = static_cast<double>(t_failures) / static_cast<double>(reps);
    if (reps > 1) {
      double l2_var = 0.0, linf_var = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const RiskSample& x = samples[r * n_gamma + g];
        l2_var += (x.l2_sq - s.l2_mean) * (x.l2_sq - s.l2_mean);
        linf_var += (x.linf - s.linf_mean) * (x.linf - s.linf_mean);
      }
      const double denom = static_cast<double>(reps) * static_cast<double>(reps - 1);
      s.l2_se = std::sqrt(l2_var / denom);
      s.linf_se = std::sqrt(linf_var / denom);
    }
  }
  return summaries;
}

LjDistribution lj_distribution(const Scenario& scenario) {
  if (scenario.reps < 1) throw std::invalid_argument("lj_distribution: reps must be >= 1");
  if (scenario.gammas.size() != 1)
    throw std::invalid_argument("lj_distribution: exactly one gamma expected");
  const int max = log2_exact(scenario.n);
  const CoefficientTree truth = true_coefficients(scenario.function, max + tail_levels);
  const double gamma = scenario.gammas.front();
  const double thr = gamma * std::log(static_cast<double>(scenario.n)) /
                     static_cast<double>(scenario.n);
  const int b = block_length(scenario.n);
  const std::size_t reps = static_cast<std::size_t>(scenario.reps);

  // One row of counts per level; slot b holds infinity.
  std::vector<std::vector<std::size_t>> counts(static_cast<std::size_t>(max + 2),
                                               std::vector<std::size_t>(b + 1, 0));
  std::mutex merge_mutex;
  const unsigned workers = effective_threads(scenario.threads);
  const std::size_t chunk = (reps + workers - 1) / workers;
  parallel_for(workers, static_cast<int>(workers), [&](std::size_t w) {
    std::vector<std::vector<std::size_t>> local(counts.size(),
                                                std::vector<std::size_t>(b + 1, 0));
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(reps, lo + chunk);
    for (std::size_t r = lo; r < hi; ++r) {
      const NoisyCoefficients obs =
          simulate(truth, scenario.n, scenario.sigma, {scenario.master_seed, r});
      const NoisyCoefficients scaled = rescale_for_estimation(obs);
      for (int j = -1; j <= max; ++j) {
        const auto& lvl = scaled.y.level(j);
        const int L = compute_L(lvl, partition(lvl.size(), scenario.n), thr);
        const std::size_t slot = L == l_infinity ? static_cast<std::size_t>(b)
                                                 : static_cast<std::size_t>(L - 1);
        ++local[static_cast<std::size_t>(j + 1)][slot];
      }
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t lv = 0; lv < counts.size(); ++lv)
      for (std::size_t v = 0; v < counts[lv].size(); ++v) counts[lv][v] += local[lv][v];
  });

  LjDistribution dist;
  dist.n = scenario.n;
  dist.sigma = scenario.sigma;
  dist.gamma = gamma;
  dist.block_len = b;
  dist.reps = scenario.reps;
  dist.per_level.resize(counts.size());
  for (std::size_t lv = 0; lv < counts.size(); ++lv) {
    auto& level_map = dist.per_level[lv];
    for (int v = 1; v <= b; ++v)
      level_map[v] = static_cast<double>(counts[lv][static_cast<std::size_t>(v - 1)]) /
                     static_cast<double>(reps);
    level_map[l_infinity] =
        static_cast<double>(counts[lv][static_cast<std::size_t>(b)]) / static_cast<double>(reps);
  }
  return dist;
}

RateFit rate_regression(std::span<const std::uint64_t> n_values, std::span<const double> risks,
                        RateScale scale) {
  if (n_values.size() != risks.size())
    throw std::invalid_argument("rate_regression: size mismatch");
  const std::size_t m = n_values.size();
  if (m < 2) throw std::invalid_argument("rate_regression: need at least two points");
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double n = static_cast<double>(n_values[i]);
    if (!(risks[i] > 0.0)) throw std::invalid_argument("rate_regression: risks must be positive");
    const double x = scale == RateScale::log_n ? std::log(n) : std::log(n / std::log(n));
    xs[i] = x;
    ys[i] = std::log(risks[i]);
  }
  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    x_mean += xs[i];
    y_mean += ys[i];
  }
  x_mean /= static_cast<double>(m);
  y_mean /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
    sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
  }
  if (sxx == 0.0) throw std::invalid_argument("rate_regression: degenerate abscissa");
  RateFit fit;
  fit.slope = sxy / sxx;
  if (m > 2) {
    const double intercept = y_mean - fit.slope * x_mean;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double resid = ys[i] - intercept - fit.slope * xs[i];
      rss += resid * resid;
    }
    fit.se = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  }
  return fit;
}

int matched_spike_level(double beta, double Q, std::uint64_t n, double sigma, double gamma,
                        double energy_factor) {
  if (!(beta > 0.0) || !(Q > 0.0)) throw std::invalid_argument("matched level: bad (beta, Q)");
  if (!(sigma > 0.0) || !(gamma > 0.0) || !(energy_factor > 0.0))
    throw std::invalid_argument("matched level: bad scenario");
  const int b = block_length(n);
  const int max = log2_exact(n);
  const int j_min = std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(b)))));
  // Solve b (c 2^{-j(2beta+1)/2} / sigma)^2 = energy_factor gamma ln n / n for j;
  // c depends on the level only through a vanishing 2^{-j beta} term, so one
  // refinement pass settles it.
  int level = j_min;
  for (int pass = 0; pass < 2; ++pass) {
    const double c = block_spike_constant({beta, Q, std::max(level, j_min), b});
    const double target = static_cast<double>(b) * c * c * static_cast<double>(n) /
                          (energy_factor * gamma * sigma * sigma *
                           std::log(static_cast<double>(n)));
    const double exact = std::log2(target) / (2.0 * beta + 1.0);
    level = std::clamp(static_cast<int>(std::lround(exact)), j_min, max);
  }
  return level;
}

}  // namespace blockshrink

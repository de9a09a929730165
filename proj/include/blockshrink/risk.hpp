#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "blockshrink/estimators.hpp"

namespace blockshrink {

/// One repetition: squared L2 distance (coefficient space plus true tail
/// energy), grid sup distance, and the event-T diagnostic.
struct RiskSample {
  double l2_sq = 0.0;
  double linf = 0.0;
  bool event_t = true;
};

struct Scenario {
  FunctionSpec function = SineSpec{};
  std::uint64_t n = 1024;
  double sigma = 0.1;
  std::vector<double> gammas = {7.0};
  EstimatorConfig config;     // config.gamma is overridden per entry of gammas
  int reps = 1000;
  std::uint64_t master_seed = 1;
  std::size_t grid_size = 0;  // 0: max(2^{J+1}, 2^14)
  int threads = 0;            // 0: hardware concurrency
};

struct RiskSummary {
  std::uint64_t n = 0;
  double sigma = 0.0;
  double gamma = 0.0;
  Variant variant = Variant::truncated_block;
  int reps = 0;
  std::uint64_t master_seed = 0;
  double l2_mean = 0.0;  // mean of ||f_hat - f||_2^2
  double l2_se = 0.0;
  double linf_mean = 0.0;  // mean of ||f_hat - f||_inf
  double linf_se = 0.0;
  double tail_energy = 0.0;  // truth energy on levels J+1..J+8
  double tail_bound = 0.0;   // certified analytic remainder above J+8
  double event_t_failure_rate = 0.0;
  bool se_degenerate = false;  // reps == 1: SEs reported as 0
};

/// sum_{j<=J} (d_hat - d)^2 + tail_energy, J = estimate.max_level().
/// Truth levels above J belong in tail_energy; missing truth levels count as
/// zero.
double l2_risk(const CoefficientTree& estimate, const CoefficientTree& truth, double tail_energy);

/// max over grid midpoints of |expansion(estimate) - f|.  grid_size must be
/// a power of two >= max(2^{max_level}, representable resolution of spec).
double linf_risk(const CoefficientTree& estimate, const FunctionSpec& truth_spec,
                 std::size_t grid_size);

/// Same, against precomputed truth values (fast path for the Monte Carlo
/// loop).
double linf_risk_on_grid(const CoefficientTree& estimate, std::span<const double> truth_grid);

/// Monte Carlo risks, one summary per gamma.  Repetition r draws its noise
/// from SeedSpec{master_seed, r}, so results are reproducible bit for bit
/// regardless of thread count; all gammas share each repetition's noise.
std::vector<RiskSummary> monte_carlo(const Scenario& scenario);

/// Empirical distribution of the level statistic L_j.
struct LjDistribution {
  std::uint64_t n = 0;
  double sigma = 0.0;
  double gamma = 0.0;
  int block_len = 0;
  int reps = 0;
  // per_level[j + 1] maps each value of {1..block_len} u {l_infinity} to its
  // empirical probability (zero-probability values included).
  std::vector<std::map<int, double>> per_level;
};

LjDistribution lj_distribution(const Scenario& scenario);

enum class RateScale {
  log_n,             // regress log risk on log n
  log_n_over_log_n,  // regress log risk on log(n / ln n)
};

struct RateFit {
  double slope = 0.0;
  double se = 0.0;
};

/// Least-squares slope of log risk against the chosen abscissa.  Throws for
/// fewer than two points; the slope SE is 0 for exactly two.
RateFit rate_regression(std::span<const std::uint64_t> n_values, std::span<const double> risks,
                        RateScale scale);

/// Level whose block-spike energy per block is closest to
/// energy_factor * gamma ln n / n on the sigma scale; the least favorable
/// configuration tracks n^{1/(2beta+1)} this way.  Clamped so that at least
/// one full block exists.  The default factor puts the level statistic
/// strictly between 1 and the block length, where truncation is active
/// (at L <= 2 the clamp is vacuous by construction of t_j).
int matched_spike_level(double beta, double Q, std::uint64_t n, double sigma, double gamma,
                        double energy_factor = 1.6);

}  // namespace blockshrink

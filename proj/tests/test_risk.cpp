#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "blockshrink/risk.hpp"

using namespace blockshrink;

namespace {

CoefficientTree random_tree(int max_level, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CoefficientTree tree = CoefficientTree::zeros(max_level);
  for (auto& lvl : tree.levels)
    for (double& v : lvl) v = normal(rng);
  return tree;
}

}  // namespace

TEST_CASE("coefficient-space L2 risk") {
  const CoefficientTree truth = random_tree(6, 3);
  CHECK(l2_risk(truth, truth, 0.0) == 0.0);

  CoefficientTree off = truth;
  off.level(4)[9] += 0.25;
  CHECK(l2_risk(off, truth, 0.0) == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(l2_risk(truth, truth, 0.125) == doctest::Approx(0.125));

  CHECK_THROWS_AS(l2_risk(truth, truth, -1.0), std::invalid_argument);
}

TEST_CASE("coefficient-space L2 risk equals the grid norm of the difference") {
  const CoefficientTree a = random_tree(8, 10);
  const CoefficientTree b = random_tree(8, 11);
  const std::vector<double> sa = synthesize(a);
  const std::vector<double> sb = synthesize(b);
  double grid_sq = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) grid_sq += (sa[i] - sb[i]) * (sa[i] - sb[i]);
  CHECK(l2_risk(a, b, 0.0) == doctest::Approx(grid_sq).epsilon(1e-8));
}

TEST_CASE("sup-norm risk on the grid") {
  SUBCASE("an estimate equal to a constant truth has zero risk") {
    const FunctionSpec constant = SampleFunction{std::vector<double>(8, 2.5)};
    const CoefficientTree tree = true_coefficients(constant, 5);
    CHECK(linf_risk(tree, constant, 1 << 10) == doctest::Approx(0.0));
  }
  SUBCASE("a bump of delta on d_{0,0} moves the sup by delta") {
    const FunctionSpec constant = SampleFunction{std::vector<double>(8, 1.0)};
    CoefficientTree tree = true_coefficients(constant, 5);
    tree.level(0)[0] += 1e-3;
    CHECK(linf_risk(tree, constant, 1 << 10) == doctest::Approx(1e-3).epsilon(1e-10));
  }
  SUBCASE("grid refinement changes the sine risk by less than 1%") {
    const CoefficientTree truth = true_coefficients(SineSpec{}, 10);
    const NoisyCoefficients obs = simulate(truth, 1024, 0.1, {31, 0});
    const EstimateResult est = estimate(obs, EstimatorConfig{});
    const double coarse = linf_risk(est.coefficients, SineSpec{}, std::size_t{1} << 14);
    const double fine = linf_risk(est.coefficients, SineSpec{}, std::size_t{1} << 16);
    CHECK(std::abs(coarse - fine) / fine < 0.01);
  }
}

TEST_CASE("monte carlo summaries are deterministic and carry the echo") {
  Scenario sc;
  sc.n = 256;
  sc.sigma = 0.2;
  sc.gammas = {3.0, 7.0};
  sc.reps = 40;
  sc.master_seed = 99;
  sc.threads = 2;
  const std::vector<RiskSummary> a = monte_carlo(sc);
  sc.threads = 1;
  const std::vector<RiskSummary> b = monte_carlo(sc);
  REQUIRE(a.size() == 2);
  for (std::size_t g = 0; g < 2; ++g) {
    CHECK(a[g].l2_mean == b[g].l2_mean);
    CHECK(a[g].linf_mean == b[g].linf_mean);
    CHECK(a[g].l2_se == b[g].l2_se);
    CHECK(a[g].gamma == sc.gammas[g]);
    CHECK(a[g].n == 256);
    CHECK(a[g].reps == 40);
  }
}

TEST_CASE("a single repetition reports zero SEs and the degenerate flag") {
  Scenario sc;
  sc.n = 256;
  sc.reps = 1;
  const std::vector<RiskSummary> out = monte_carlo(sc);
  CHECK(out[0].se_degenerate);
  CHECK(out[0].l2_se == 0.0);
  CHECK(out[0].linf_se == 0.0);
}

TEST_CASE("vanishing noise leaves only the truncation bias") {
  Scenario sc;
  sc.n = 1024;
  sc.sigma = 1e-12;
  sc.reps = 3;
  sc.gammas = {7.0};
  const std::vector<RiskSummary> out = monte_carlo(sc);
  // L2: only the energy above level J remains
  const CoefficientTree deep = true_coefficients(SineSpec{}, 18);
  const double tail = energy_above(deep, 10);
  CHECK(out[0].l2_mean == doctest::Approx(tail).epsilon(1e-3));
  // Linf: the projection bias of the level-J truncation
  const CoefficientTree trunc = true_coefficients(SineSpec{}, 10);
  const double bias = linf_risk(trunc, SineSpec{}, std::size_t{1} << 14);
  CHECK(out[0].linf_mean == doctest::Approx(bias).epsilon(1e-4));
}

TEST_CASE("quadrupling the repetitions roughly halves the standard error") {
  Scenario small;
  small.n = 256;
  small.reps = 60;
  small.master_seed = 5;
  Scenario big = small;
  big.reps = 240;
  const double se_small = monte_carlo(small)[0].l2_se;
  const double se_big = monte_carlo(big)[0].l2_se;
  const double ratio = se_small / se_big;
  CHECK(ratio > 1.4);
  CHECK(ratio < 2.6);
}

TEST_CASE("lj distribution support and normalization") {
  Scenario sc;
  sc.n = 1024;
  sc.sigma = 0.1;
  sc.reps = 300;
  sc.master_seed = 12;
  const LjDistribution dist = lj_distribution(sc);
  CHECK(dist.block_len == 7);
  REQUIRE(dist.per_level.size() == 12);
  for (const auto& level_map : dist.per_level) {
    double total = 0.0;
    for (const auto& [value, prob] : level_map) {
      CHECK((value == l_infinity || (value >= 1 && value <= dist.block_len)));
      CHECK(prob >= 0.0);
      total += prob;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lj distribution degenerate cases") {
  SUBCASE("strong noiseless signal fires every level-0 block instantly") {
    Scenario sc;
    sc.n = 256;
    sc.sigma = 1e-10;
    sc.reps = 50;
    const LjDistribution dist = lj_distribution(sc);
    CHECK(dist.per_level[1].at(1) == doctest::Approx(1.0));  // level 0: d_{0,0} ~ 0.9
  }
  SUBCASE("zero truth and a huge gamma never fire") {
    Scenario sc;
    sc.function = SampleFunction{std::vector<double>(4, 0.0)};
    sc.n = 256;
    sc.sigma = 1.0;
    sc.gammas = {1e6};
    sc.reps = 50;
    const LjDistribution dist = lj_distribution(sc);
    for (const auto& level_map : dist.per_level)
      CHECK(level_map.at(l_infinity) == doctest::Approx(1.0));
  }
}

TEST_CASE("rate regression recovers an exact power law") {
  const std::vector<std::uint64_t> ns{256, 512, 1024, 2048, 4096};
  std::vector<double> risks;
  for (std::uint64_t n : ns) risks.push_back(3.7 * std::pow(static_cast<double>(n), -2.0 / 3.0));
  const RateFit fit = rate_regression(ns, risks, RateScale::log_n);
  CHECK(fit.slope == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(fit.se < 1e-12);

  std::vector<double> log_scaled;
  for (std::uint64_t n : ns) {
    const double x = static_cast<double>(n) / std::log(static_cast<double>(n));
    log_scaled.push_back(0.4 * std::pow(x, -1.0 / 3.0));
  }
  const RateFit fit2 = rate_regression(ns, log_scaled, RateScale::log_n_over_log_n);
  CHECK(fit2.slope == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("rate regression rejects degenerate input") {
  const std::vector<std::uint64_t> ns{256};
  const std::vector<double> risks{1.0};
  CHECK_THROWS_AS(rate_regression(ns, risks, RateScale::log_n), std::invalid_argument);
}

TEST_CASE("matched spike level sits inside the level range and fires") {
  for (std::uint64_t n : {std::uint64_t{1} << 10, std::uint64_t{1} << 13, std::uint64_t{1} << 16}) {
    const int level = matched_spike_level(1.0, 5.0, n, 0.1, 7.0);
    const int b = block_length(n);
    CHECK(level >= std::ceil(std::log2(b)));
    CHECK(level <= log2_exact(n));
    // level rounding quantizes the block energy by at most 2^{(2beta+1)/2}
    const double c = block_spike_constant({1.0, 5.0, level, b});
    const double amp = c * std::exp2(-1.5 * level);
    const double energy = b * amp * amp / (0.1 * 0.1);
    const double target = 1.6 * 7.0 * std::log(static_cast<double>(n)) / static_cast<double>(n);
    CHECK(energy / target > 0.3);
    CHECK(energy / target < 3.0);
  }
}

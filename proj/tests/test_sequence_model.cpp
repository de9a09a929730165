#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "blockshrink/sequence_model.hpp"
#include "support/stats.hpp"

using namespace blockshrink;

TEST_CASE("simulation is a pure function of (truth, n, sigma, seed)") {
  const CoefficientTree truth = true_coefficients(SineSpec{}, 8);
  const SeedSpec seed{42, 17};
  const NoisyCoefficients a = simulate(truth, 256, 0.5, seed);
  const NoisyCoefficients b = simulate(truth, 256, 0.5, seed);
  for (int j = -1; j <= a.y.max_level(); ++j)
    for (std::size_t k = 0; k < a.y.level(j).size(); ++k)
      CHECK(a.y.level(j)[k] == b.y.level(j)[k]);

  const NoisyCoefficients c = simulate(truth, 256, 0.5, {42, 18});
  bool any_diff = false;
  for (int j = -1; j <= a.y.max_level() && !any_diff; ++j)
    for (std::size_t k = 0; k < a.y.level(j).size(); ++k)
      if (a.y.level(j)[k] != c.y.level(j)[k]) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("simulate validates its arguments") {
  const CoefficientTree truth = CoefficientTree::zeros(3);
  CHECK_THROWS_AS(simulate(truth, 1000, 1.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(simulate(truth, 1024, 0.0, {}), std::domain_error);
  CHECK_THROWS_AS(simulate(truth, 1024, -1.0, {}), std::domain_error);
}

TEST_CASE("noiseless limit returns the truth") {
  const CoefficientTree truth = true_coefficients(SineSpec{}, 10);
  const NoisyCoefficients obs = simulate(truth, 1024, 1e-12, {7, 0});
  for (int j = -1; j <= obs.y.max_level(); ++j)
    for (std::size_t k = 0; k < obs.y.level(j).size(); ++k) {
      const double d = truth.has_level(j) ? truth.level(j)[k] : 0.0;
      CHECK(std::abs(obs.y.level(j)[k] - d) < 1e-6);
    }
}

TEST_CASE("noise variance matches sigma^2 / n") {
  const CoefficientTree truth = CoefficientTree::zeros(0);
  std::vector<double> values;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const NoisyCoefficients obs = simulate(truth, 1024, 1.0, {2024, rep});
    for (int j = -1; j <= obs.y.max_level(); ++j)
      for (double y : obs.y.level(j)) values.push_back(y);
  }
  const double var = testsupport::sample_variance(values);
  CHECK(var == doctest::Approx(1.0 / 1024.0).epsilon(0.05));
}

TEST_CASE("standardized residuals pass a KS test against the normal law") {
  const CoefficientTree truth = true_coefficients(SineSpec{}, 13);
  const NoisyCoefficients obs = simulate(truth, 8192, 0.3, {99, 3});
  const CoefficientTree resid = standardized_residuals(obs, truth);
  std::vector<double> values;
  for (int j = -1; j <= resid.max_level(); ++j)
    for (double e : resid.level(j)) values.push_back(e);
  REQUIRE(values.size() >= 10000);
  const double d = testsupport::ks_statistic(values, testsupport::standard_normal_cdf);
  CHECK(d < testsupport::ks_critical(0.001, values.size()));
}

TEST_CASE("rescaling divides by sigma and the round trip is tight") {
  CoefficientTree tree = CoefficientTree::zeros(1);
  tree.level(0)[0] = 0.6;
  const NoisyCoefficients obs{tree, 4, 0.3};
  const NoisyCoefficients scaled = rescale_for_estimation(obs);
  CHECK(scaled.sigma == 1.0);
  CHECK(scaled.y.level(0)[0] == doctest::Approx(2.0).epsilon(1e-15));

  const NoisyCoefficients identity{tree, 4, 1.0};
  const NoisyCoefficients same = rescale_for_estimation(identity);
  CHECK(same.y.level(0)[0] == 0.6);

  const CoefficientTree back = scale_tree(scaled.y, obs.sigma);
  CHECK(back.level(0)[0] == doctest::Approx(0.6).epsilon(1e-15));
}

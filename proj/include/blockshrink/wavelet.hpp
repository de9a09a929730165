#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace blockshrink {

/// Coefficients of a Haar expansion on [0,1].
///
/// Levels run j = -1, 0, ..., J where level -1 holds the single scaling
/// coefficient and level j >= 0 holds 2^j wavelet coefficients.  The mother
/// wavelet is +1 on [0,1/2) and -1 on [1/2,1); psi_{j,k} = 2^{j/2} psi(2^j x - k).
struct CoefficientTree {
  // levels[j + 1] stores resolution level j.
  std::vector<std::vector<double>> levels;

  static CoefficientTree zeros(int max_level);

  int max_level() const { return static_cast<int>(levels.size()) - 2; }

  std::vector<double>& level(int j) { return levels[static_cast<std::size_t>(j + 1)]; }
  const std::vector<double>& level(int j) const { return levels[static_cast<std::size_t>(j + 1)]; }

  bool has_level(int j) const { return j >= -1 && j <= max_level(); }

  std::size_t coefficient_count() const;
  double energy() const;  // sum of squared coefficients
  bool well_formed() const;
};

/// Sum of squared coefficients on levels strictly above `level` (up to the
/// tree's own maximum level).
double energy_above(const CoefficientTree& tree, int level);

/// Scale every coefficient by `factor`.
CoefficientTree scale_tree(const CoefficientTree& tree, double factor);

/// The simulation target f = sqrt(2) sin(2 pi x).
struct SineSpec {};

/// A function whose expansion is a single resolution level: every index in a
/// full-length block at `level` carries the coefficient c(beta,Q) 2^{-level(2beta+1)/2},
/// all other coefficients are zero.  These are the least favorable inputs for
/// plain (untruncated) block thresholding.
struct BlockSpike {
  double beta = 1.0;
  double Q = 1.0;
  int level = 1;
  int block_len = 1;
};

/// Piecewise-constant target given by 2^m samples on the uniform dyadic grid.
struct SampleFunction {
  std::vector<double> samples;
};

using FunctionSpec = std::variant<SineSpec, BlockSpike, SampleFunction>;

/// Orthonormal discrete Haar transform of 2^m samples; the result has
/// max_level m - 1.  Constant input [a,...,a] maps to a single scaling
/// coefficient a 2^{m/2}.
CoefficientTree analyze(std::span<const double> samples);

/// Exact inverse of analyze.  Energy is preserved.
std::vector<double> synthesize(const CoefficientTree& tree);

/// Exact inner products <f, psi_{j,k}> for j <= max_level.
///
/// For the sine target they are evaluated from the antiderivative
/// F(x) = -sqrt(2) cos(2 pi x) / (2 pi); for a block spike the amplitude
/// constant is certified against the Hoelder proxy norm (see
/// block_spike_constant); a sampled function is transformed and rescaled to
/// the continuous convention.
CoefficientTree true_coefficients(const FunctionSpec& spec, int max_level);

/// Amplitude constant c(beta,Q): starts from the heuristic Q / (2 * proxy
/// norm at unit amplitude) and halves until the finite-difference Hoelder
/// proxy of the generated function is <= Q.
double block_spike_constant(const BlockSpike& spec);

/// Finite-difference Hoelder proxy norm sup|f| + sup |f(x)-f(y)| / |x-y|^beta
/// of the block-spike function with amplitude constant c, evaluated on the
/// dyadic grid at the spike's natural resolution.
double block_spike_proxy_norm(const BlockSpike& spec, double c);

/// Values of sum d_{j,k} psi_{j,k} at the midpoints (i+1/2)/grid_size.
///
/// The expansion is piecewise constant at resolution 2^{-(max_level+1)}, so
/// midpoint evaluation is exact; finer grids refine the piecewise-constant
/// values, and a boundary hit resolves right-continuously.  grid_size must be
/// a power of two >= 2^{max_level}.
std::vector<double> evaluate_expansion(const CoefficientTree& tree, std::size_t grid_size);

/// sqrt(2) sin(2 pi x)
double sine_value(double x);

/// Exact target values at the midpoints (i+1/2)/grid_size.
std::vector<double> function_values(const FunctionSpec& spec, std::size_t grid_size);

/// Certified bound on the energy of the sine target above `level`
/// (|d_{j,k}| <= sup|f'| 2^{-3j/2} / 4 summed geometrically).
double sine_tail_energy_bound(int level);

/// log2 of a power of two; throws std::invalid_argument otherwise.
int log2_exact(std::uint64_t n);

bool is_power_of_two(std::uint64_t n);

}  // namespace blockshrink

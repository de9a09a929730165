#include "blockshrink/wavelet.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace blockshrink {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;
constexpr double two_pi = 2.0 * std::numbers::pi;

// Antiderivative of sqrt(2) sin(2 pi x).
double sine_antiderivative(double x) { return -std::numbers::sqrt2 * std::cos(two_pi * x) / two_pi; }

}  // namespace

bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(std::uint64_t n) {
  if (!is_power_of_two(n))
    throw std::invalid_argument("expected a power of two, got " + std::to_string(n));
  int m = 0;
  while ((std::uint64_t{1} << m) < n) ++m;
  return m;
}

CoefficientTree CoefficientTree::zeros(int max_level) {
  if (max_level < -1) throw std::invalid_argument("max_level must be >= -1");
  CoefficientTree tree;
  tree.levels.resize(static_cast<std::size_t>(max_level + 2));
  tree.levels[0].assign(1, 0.0);
  for (int j = 0; j <= max_level; ++j)
    tree.levels[static_cast<std::size_t>(j + 1)].assign(std::size_t{1} << j, 0.0);
  return tree;
}

std::size_t CoefficientTree::coefficient_count() const {
  std::size_t total = 0;
  for (const auto& lvl : levels) total += lvl.size();
  return total;
}

double CoefficientTree::energy() const {
  double sum = 0.0;
  for (const auto& lvl : levels)
    for (double d : lvl) sum += d * d;
  return sum;
}

bool CoefficientTree::well_formed() const {
  if (levels.empty() || levels[0].size() != 1) return false;
  for (int j = 0; j <= max_level(); ++j)
    if (level(j).size() != (std::size_t{1} << j)) return false;
  for (const auto& lvl : levels)
    for (double d : lvl)
      if (!std::isfinite(d)) return false;
  return true;
}

double energy_above(const CoefficientTree& tree, int level) {
  double sum = 0.0;
  for (int j = level + 1; j <= tree.max_level(); ++j)
    for (double d : tree.level(j)) sum += d * d;
  return sum;
}

CoefficientTree scale_tree(const CoefficientTree& tree, double factor) {
  CoefficientTree out = tree;
  for (auto& lvl : out.levels)
    for (double& d : lvl) d *= factor;
  return out;
}

CoefficientTree analyze(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("analyze: sample count must be a power of two, got " +
                                std::to_string(n));
  const int m = log2_exact(n);
  CoefficientTree tree = CoefficientTree::zeros(m - 1);
  std::vector<double> buf(samples.begin(), samples.end());
  std::size_t len = n;
  for (int j = m - 1; j >= 0; --j) {
    auto& detail = tree.level(j);
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const double a = buf[2 * k];
      const double b = buf[2 * k + 1];
      detail[k] = (a - b) * inv_sqrt2;
      buf[k] = (a + b) * inv_sqrt2;
    }
    len = half;
  }
  tree.level(-1)[0] = buf[0];
  return tree;
}

std::vector<double> synthesize(const CoefficientTree& tree) {
  if (!tree.well_formed()) throw std::invalid_argument("synthesize: malformed coefficient tree");
  const int max = tree.max_level();
  std::vector<double> out(std::size_t{1} << (max + 1));
  out[0] = tree.level(-1)[0];
  std::size_t len = 1;
  for (int j = 0; j <= max; ++j) {
    const auto& detail = tree.level(j);
    for (std::size_t k = len; k-- > 0;) {
      const double a = out[k];
      const double d = detail[k];
      out[2 * k] = (a + d) * inv_sqrt2;
      out[2 * k + 1] = (a - d) * inv_sqrt2;
    }
    len *= 2;
  }
  return out;
}

double sine_value(double x) { return std::numbers::sqrt2 * std::sin(two_pi * x); }

namespace {

CoefficientTree sine_coefficients(int max_level) {
  CoefficientTree tree = CoefficientTree::zeros(max_level);
  tree.level(-1)[0] = sine_antiderivative(1.0) - sine_antiderivative(0.0);
  for (int j = 0; j <= max_level; ++j) {
    auto& lvl = tree.level(j);
    const double h = std::exp2(-j);
    const double scale = std::exp2(0.5 * j);
    for (std::size_t k = 0; k < lvl.size(); ++k) {
      const double left = static_cast<double>(k) * h;
      const double mid = (static_cast<double>(k) + 0.5) * h;
      const double right = (static_cast<double>(k) + 1.0) * h;
      lvl[k] = scale * (2.0 * sine_antiderivative(mid) - sine_antiderivative(left) -
                        sine_antiderivative(right));
    }
  }
  return tree;
}

void validate_spike(const BlockSpike& spec) {
  if (spec.level < 1) throw std::invalid_argument("block-spike: level must be >= 1");
  if (!(spec.beta > 0.0) || !(spec.Q > 0.0))
    throw std::invalid_argument("block-spike: beta and Q must be positive");
  if (spec.block_len < 1) throw std::invalid_argument("block-spike: block length must be >= 1");
  const std::size_t level_size = std::size_t{1} << spec.level;
  if (level_size < static_cast<std::size_t>(spec.block_len))
    throw std::invalid_argument("block-spike: level too coarse to hold one full block");
}

CoefficientTree spike_coefficients(const BlockSpike& spec, int max_level, double c) {
  CoefficientTree tree = CoefficientTree::zeros(max_level);
  const double amplitude =
      c * std::exp2(-0.5 * static_cast<double>(spec.level) * (2.0 * spec.beta + 1.0));
  auto& lvl = tree.level(spec.level);
  const std::size_t b = static_cast<std::size_t>(spec.block_len);
  const std::size_t full_blocks = lvl.size() / b;
  for (std::size_t blk = 0; blk < full_blocks; ++blk)
    for (std::size_t k = blk * b; k < (blk + 1) * b; ++k) lvl[k] = amplitude;
  return tree;
}

}  // namespace

double block_spike_proxy_norm(const BlockSpike& spec, double c) {
  validate_spike(spec);
  const CoefficientTree tree = spike_coefficients(spec, spec.level, c);
  const std::size_t grid = std::size_t{1} << (spec.level + 1);
  const std::vector<double> values = evaluate_expansion(tree, grid);
  // The values take only {+v, -v, 0}, so the Hoelder quotient over all pairs
  // is attained by an adjacent sign flip; scanning neighbors is exact.
  double sup = 0.0;
  double quotient = 0.0;
  const double step_pow = std::pow(static_cast<double>(grid), spec.beta);
  for (std::size_t i = 0; i < values.size(); ++i) {
    sup = std::max(sup, std::abs(values[i]));
    if (i + 1 < values.size())
      quotient = std::max(quotient, std::abs(values[i + 1] - values[i]) * step_pow);
  }
  return sup + quotient;
}

double block_spike_constant(const BlockSpike& spec) {
  validate_spike(spec);
  const double unit_norm = block_spike_proxy_norm(spec, 1.0);
  if (unit_norm <= 0.0) throw std::invalid_argument("block-spike: degenerate proxy norm");
  double c = spec.Q / (2.0 * unit_norm);
  for (int iter = 0; iter < 200 && block_spike_proxy_norm(spec, c) > spec.Q; ++iter) c *= 0.5;
  return c;
}

CoefficientTree true_coefficients(const FunctionSpec& spec, int max_level) {
  if (max_level < -1) throw std::invalid_argument("true_coefficients: max_level must be >= -1");
  if (std::holds_alternative<SineSpec>(spec)) return sine_coefficients(max_level);
  if (const auto* spike = std::get_if<BlockSpike>(&spec)) {
    validate_spike(*spike);
    if (spike->level > max_level)
      throw std::invalid_argument("block-spike: spike level exceeds requested max_level");
    return spike_coefficients(*spike, max_level, block_spike_constant(*spike));
  }
  const auto& fn = std::get<SampleFunction>(spec);
  if (!is_power_of_two(fn.samples.size()))
    throw std::invalid_argument("samples: count must be a power of two");
  const int m = log2_exact(fn.samples.size());
  const CoefficientTree disc = analyze(fn.samples);
  const double scale = std::exp2(-0.5 * m);
  CoefficientTree tree = CoefficientTree::zeros(max_level);
  for (int j = -1; j <= std::min(max_level, disc.max_level()); ++j)
    for (std::size_t k = 0; k < disc.level(j).size(); ++k)
      tree.level(j)[k] = disc.level(j)[k] * scale;
  return tree;
}

std::vector<double> evaluate_expansion(const CoefficientTree& tree, std::size_t grid_size) {
  if (!tree.well_formed())
    throw std::invalid_argument("evaluate_expansion: malformed coefficient tree");
  if (!is_power_of_two(grid_size))
    throw std::invalid_argument("evaluate_expansion: grid size must be a power of two");
  const int max = tree.max_level();
  if (max >= 0 && grid_size < (std::size_t{1} << max))
    throw std::invalid_argument("evaluate_expansion: grid coarser than 2^max_level");
  const std::size_t full = std::size_t{1} << (max + 1);
  const std::vector<double> cells = synthesize(tree);
  const double scale = std::sqrt(static_cast<double>(full));
  std::vector<double> out(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const std::size_t idx = ((2 * i + 1) * full) / (2 * grid_size);
    out[i] = cells[idx] * scale;
  }
  return out;
}

std::vector<double> function_values(const FunctionSpec& spec, std::size_t grid_size) {
  if (!is_power_of_two(grid_size))
    throw std::invalid_argument("function_values: grid size must be a power of two");
  if (std::holds_alternative<SineSpec>(spec)) {
    std::vector<double> out(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i)
      out[i] = sine_value((static_cast<double>(i) + 0.5) / static_cast<double>(grid_size));
    return out;
  }
  if (const auto* spike = std::get_if<BlockSpike>(&spec))
    return evaluate_expansion(true_coefficients(spec, spike->level), grid_size);
  const auto& fn = std::get<SampleFunction>(spec);
  if (!is_power_of_two(fn.samples.size()))
    throw std::invalid_argument("samples: count must be a power of two");
  const std::size_t count = fn.samples.size();
  std::vector<double> out(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const std::size_t idx = ((2 * i + 1) * count) / (2 * grid_size);
    out[i] = fn.samples[idx];
  }
  return out;
}

double sine_tail_energy_bound(int level) {
  // |d_{j,k}| <= sup|f'| 2^{-3j/2} / 4 with sup|f'| = 2 sqrt(2) pi, so the
  // level-j energy is at most pi^2 2^{-2j} / 2 and the tail sums to
  // pi^2 4^{-level} / 6.
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return pi2 * std::exp2(-2.0 * static_cast<double>(level)) / 6.0;
}

}  // namespace blockshrink

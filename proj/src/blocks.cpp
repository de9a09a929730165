#include "blockshrink/blocks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace blockshrink {

int block_length(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("block_length: n must be >= 2");
  return static_cast<int>(std::ceil(std::log(static_cast<double>(n))));
}

std::vector<BlockRange> partition(std::size_t level_size, std::uint64_t n) {
  if (level_size < 1) throw std::invalid_argument("partition: level size must be >= 1");
  const std::size_t b = static_cast<std::size_t>(block_length(n));
  std::vector<BlockRange> blocks;
  blocks.reserve(level_size / b + 1);
  for (std::size_t begin = 0; begin < level_size; begin += b)
    blocks.push_back({begin, std::min(begin + b, level_size)});
  return blocks;
}

namespace {

void check_threshold(double threshold) {
  if (!(threshold > 0.0)) throw std::domain_error("level statistic: threshold must be positive");
}

}  // namespace

int compute_L(std::span<const double> y_level, std::span<const BlockRange> blocks,
              double threshold) {
  check_threshold(threshold);
  int best = l_infinity;
  std::vector<double> squares;
  for (const BlockRange& block : blocks) {
    const std::size_t s = block.size();
    if (s == 0) continue;
    squares.clear();
    double largest = 0.0;
    for (std::size_t i = block.begin; i < block.end; ++i) {
      const double sq = y_level[i] * y_level[i];
      squares.push_back(sq);
      largest = std::max(largest, sq);
    }
    if (largest >= threshold) return 1;
    if (best == 2) continue;  // nothing below can improve a finite best of 2
    // Descending stable sort: ties keep index order.
    std::stable_sort(squares.begin(), squares.end(), std::greater<double>());
    double prefix = 0.0;
    for (std::size_t m = 0; m < squares.size(); ++m) {
      prefix += squares[m];
      if (prefix >= threshold) {
        best = std::min(best, static_cast<int>(m) + 1);
        break;
      }
    }
  }
  return best;
}

int compute_L_bruteforce(std::span<const double> y_level, std::span<const BlockRange> blocks,
                         double threshold) {
  check_threshold(threshold);
  int best = l_infinity;
  for (const BlockRange& block : blocks) {
    const std::size_t s = block.size();
    if (s == 0) continue;
    if (s > 20)
      throw std::invalid_argument("compute_L_bruteforce: block too long for enumeration");
    // Descending-square order so that subset sums round exactly like the
    // prefix sums in compute_L.
    std::vector<double> squares;
    squares.reserve(s);
    for (std::size_t i = block.begin; i < block.end; ++i)
      squares.push_back(y_level[i] * y_level[i]);
    std::stable_sort(squares.begin(), squares.end(), std::greater<double>());
    const std::uint32_t limit = 1u << s;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
      const int size = std::popcount(mask);
      if (size >= best) continue;
      double sum = 0.0;
      for (std::size_t i = 0; i < s; ++i)
        if (mask & (1u << i)) sum += squares[i];
      if (sum >= threshold) best = size;
    }
    if (best == 1) return 1;
  }
  return best;
}

double truncation_threshold(int L, double gamma, std::uint64_t n) {
  if (!(gamma > 0.0)) throw std::domain_error("truncation_threshold: gamma must be positive");
  if (L == 1) return std::numeric_limits<double>::infinity();
  if (L == l_infinity) return 0.0;
  if (L < 1) throw std::invalid_argument("truncation_threshold: invalid L");
  return std::sqrt(gamma * std::log(static_cast<double>(n)) /
                   (static_cast<double>(n) * static_cast<double>(L - 1)));
}

double chi_square_tail_bound(int m, double Q) {
  if (m < 1) throw std::invalid_argument("chi_square_tail_bound: m must be >= 1");
  if (Q < std::numbers::e) throw std::domain_error("chi_square_tail_bound: requires Q >= e");
  return std::exp(0.5 * static_cast<double>(m) * (1.0 - Q + std::log(Q)));
}

bool check_event_T(const CoefficientTree& residuals, std::uint64_t n) {
  const double bound = 6.95 * std::log(static_cast<double>(n));
  for (int j = -1; j <= residuals.max_level(); ++j) {
    const auto& lvl = residuals.level(j);
    for (const BlockRange& block : partition(lvl.size(), n)) {
      double sum = 0.0;
      for (std::size_t i = block.begin; i < block.end; ++i) sum += lvl[i] * lvl[i];
      if (sum >= bound) return false;
    }
  }
  return true;
}

}  // namespace blockshrink

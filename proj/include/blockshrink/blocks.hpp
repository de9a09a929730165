#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "blockshrink/wavelet.hpp"

namespace blockshrink {

/// Sentinel for L_j = infinity (no subset of any block reaches the threshold).
inline constexpr int l_infinity = std::numeric_limits<int>::max();

/// ceil(ln n): the block length.  Natural logarithm throughout; for n = 2^10
/// this gives 7.
int block_length(std::uint64_t n);

/// Half-open index range [begin, end) of one block.
struct BlockRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

/// Contiguous blocks of length ceil(ln n) covering 0..level_size-1; the last
/// block may be shorter, and a level smaller than the block length forms a
/// single short block.
std::vector<BlockRange> partition(std::size_t level_size, std::uint64_t n);

/// Smallest number of observations, all in one block, whose squared sum
/// reaches `threshold`; l_infinity if no block qualifies.  Per block the
/// squared entries are sorted descending (stable, so ties keep index order)
/// and the minimal qualifying prefix is taken.
int compute_L(std::span<const double> y_level, std::span<const BlockRange> blocks,
              double threshold);

/// Test oracle: exhaustive enumeration of all subsets of every block.
/// Subset sums accumulate in descending-square order so that results agree
/// with compute_L to the last bit.  Blocks longer than 20 are rejected.
int compute_L_bruteforce(std::span<const double> y_level, std::span<const BlockRange> blocks,
                         double threshold);

/// t_j = sqrt(gamma ln n / (n (L-1))) with the conventions t = infinity for
/// L = 1 and t = 0 for L = infinity.
double truncation_threshold(int L, double gamma, std::uint64_t n);

/// Chernoff bound exp(m (1 - Q + ln Q) / 2) on P(chi^2_L >= Q m) for L <= m.
/// Requires Q >= e.
double chi_square_tail_bound(int m, double Q);

/// True iff every block on every level of the residual tree has squared sum
/// strictly below 6.95 ln n.  Simulation diagnostic; residuals are the
/// standardized noise sqrt(n)(Y - d)/sigma.
bool check_event_T(const CoefficientTree& residuals, std::uint64_t n);

}  // namespace blockshrink

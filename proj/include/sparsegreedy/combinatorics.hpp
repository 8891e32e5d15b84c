#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace sparsegreedy {

/// C(n, k) in floating point; only used for budget comparisons.
inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

/// Calls fn(const std::vector<std::size_t>&) for every k-subset of {0..n-1} in lexicographic order.
/// Stops early if fn returns false.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(static_cast<const std::vector<std::size_t>&>(idx))) return;
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Same as above but over a k-subset of an explicit pool, yielding pool values.
template <typename Fn>
void for_each_combination_of(const std::vector<std::size_t>& pool, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> picked(k);
  for_each_combination(pool.size(), k, [&](const std::vector<std::size_t>& pos) {
    for (std::size_t i = 0; i < k; ++i) picked[i] = pool[pos[i]];
    return fn(static_cast<const std::vector<std::size_t>&>(picked));
  });
}

}  // namespace sparsegreedy

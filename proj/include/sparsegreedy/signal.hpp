#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsegreedy/space.hpp"

namespace sparsegreedy {

/// f = sum_{i in T} x_i g_i with T sorted and every x_i nonzero.
class SparseSignal {
public:
  SparseSignal(std::vector<std::size_t> support, Vector coeffs)
      : support_(std::move(support)), coeffs_(std::move(coeffs)) {
    if (support_.empty()) throw std::invalid_argument("sparse signal needs K >= 1");
    require_dim(static_cast<std::size_t>(coeffs_.size()), support_.size(), "signal coefficients");
    // Keep coefficients aligned while sorting the support.
    std::vector<std::size_t> order(support_.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return support_[a] < support_[b]; });
    std::vector<std::size_t> s(support_.size());
    Vector c(coeffs_.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      s[k] = support_[order[k]];
      c[static_cast<Eigen::Index>(k)] = coeffs_[static_cast<Eigen::Index>(order[k])];
    }
    support_ = std::move(s);
    coeffs_ = std::move(c);
    for (std::size_t k = 1; k < support_.size(); ++k) {
      if (support_[k] == support_[k - 1]) {
        throw std::invalid_argument("duplicate support index " + std::to_string(support_[k]));
      }
    }
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k] == 0.0 || !std::isfinite(coeffs_[k])) {
        throw std::invalid_argument("signal coefficients must be finite and nonzero");
      }
    }
  }

  std::size_t sparsity() const noexcept { return support_.size(); }
  const std::vector<std::size_t>& support() const noexcept { return support_; }
  const Vector& coeffs() const noexcept { return coeffs_; }

  void check_against(const Dictionary& dict) const {
    if (support_.back() >= dict.size()) {
      throw std::invalid_argument("support index " + std::to_string(support_.back()) +
                                  " out of range for " + std::to_string(dict.size()) + " atoms");
    }
  }

  Vector synthesize(const Dictionary& dict) const {
    check_against(dict);
    return dict.synthesize(support_, coeffs_);
  }

private:
  std::vector<std::size_t> support_;
  Vector coeffs_;
};

}  // namespace sparsegreedy

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sparsegreedy/chebyshev.hpp"
#include "sparsegreedy/combinatorics.hpp"
#include "sparsegreedy/errors.hpp"
#include "sparsegreedy/signal.hpp"
#include "sparsegreedy/space.hpp"

namespace sparsegreedy {

/// Combinatorial limits for the exhaustive certifiers.
struct Budgets {
  double rip_subsets = 1e6;
  double nikolskii_subsets = 1e6;
  double incoherence_pairs = 1e5;
  double best_m_term_supports = 1e5;
};

enum class EstimateMethod { exhaustive, sampled };

inline std::string_view to_string(EstimateMethod m) {
  return m == EstimateMethod::exhaustive ? "exhaustive" : "sampled";
}

struct RipEstimate {
  std::size_t sparsity = 0;
  double delta = 0.0;
  EstimateMethod method = EstimateMethod::exhaustive;
  /// Number of sampled supports; 0 for an exhaustive sweep.
  std::uint64_t trials = 0;
};

// ---------------------------------------------------------------------------
// Coherence and the D-norm

/// M(D) = max over ordered pairs g != h of |F_g(h)|.
inline double coherence(const Dictionary& dict) {
  if (dict.size() < 2) throw std::invalid_argument("coherence needs at least two atoms");
  Matrix cross = dict.functionals().transpose() * dict.atoms();
  cross.diagonal().setZero();
  return cross.cwiseAbs().maxCoeff();
}

/// ||f||_D = max over atoms g of |F_g(f)|.
inline double d_norm(const Vector& f, const Dictionary& dict) {
  require_dim(static_cast<std::size_t>(f.size()), dict.dim(), "d_norm");
  return (dict.functionals().transpose() * f).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Restricted isometry

namespace detail {

inline void require_hilbert(const Dictionary& dict, const char* what) {
  if (!dict.space().is_hilbert()) throw std::invalid_argument(std::string(what) + " requires p = 2");
}

// max(lambda_max - 1, 1 - lambda_min) of the Gram block on `support`.
inline double gram_deviation(const Matrix& gram, const std::vector<std::size_t>& support) {
  const auto s = static_cast<Eigen::Index>(support.size());
  Matrix block(s, s);
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) {
      block(a, b) = gram(static_cast<Eigen::Index>(support[static_cast<std::size_t>(a)]),
                         static_cast<Eigen::Index>(support[static_cast<std::size_t>(b)]));
    }
  }
  if (s == 1) return std::abs(block(0, 0) - 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(block, Eigen::EigenvaluesOnly);
  const Vector& ev = eig.eigenvalues();
  return std::max({ev[s - 1] - 1.0, 1.0 - ev[0], 0.0});
}

inline std::size_t clamp_sparsity(const Dictionary& dict, std::size_t S) {
  if (S < 1) throw std::invalid_argument("sparsity S must be >= 1");
  return std::min(S, dict.size());
}

}  // namespace detail

/// Exact delta_S via extreme eigenvalues of every S-column Gram block. By eigenvalue interlacing the
/// smaller supports never exceed the size-S maximum, so only |Lambda| = S is swept.
inline RipEstimate rip_constant_exhaustive(const Dictionary& dict, std::size_t S, const Budgets& budgets = {}) {
  detail::require_hilbert(dict, "RIP");
  const std::size_t s = detail::clamp_sparsity(dict, S);
  const double count = binomial(dict.size(), s);
  if (count > budgets.rip_subsets) throw BudgetExceeded("exhaustive RIP sweep", count, budgets.rip_subsets);
  const Matrix gram = dict.atoms().transpose() * dict.atoms();
  double delta = 0.0;
  for_each_combination(dict.size(), s, [&](const std::vector<std::size_t>& support) {
    delta = std::max(delta, detail::gram_deviation(gram, support));
    return true;
  });
  return {S, delta, EstimateMethod::exhaustive, 0};
}

/// Lower bound on delta_S from `trials` uniformly drawn supports. Falls back to the exhaustive sweep
/// (reported as such) when trials >= C(N, S).
inline RipEstimate rip_lower_bound_sampled(const Dictionary& dict, std::size_t S, std::uint64_t trials,
                                           std::uint64_t seed) {
  detail::require_hilbert(dict, "RIP");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const std::size_t s = detail::clamp_sparsity(dict, S);
  if (static_cast<double>(trials) >= binomial(dict.size(), s)) {
    Budgets unlimited;
    unlimited.rip_subsets = std::numeric_limits<double>::infinity();
    return rip_constant_exhaustive(dict, S, unlimited);
  }
  const Matrix gram = dict.atoms().transpose() * dict.atoms();
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pool(dict.size());
  double delta = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < s; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<std::size_t> support(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s));
    std::sort(support.begin(), support.end());
    delta = std::max(delta, detail::gram_deviation(gram, support));
  }
  return {S, delta, EstimateMethod::sampled, trials};
}

struct RipDoubling {
  double delta_s = 0.0;
  double delta_2s = 0.0;
  /// delta_2S <= 3 delta_S + 1e-9. Reported, not asserted: it fails for correlated atoms at S = 1.
  bool holds = true;
};

inline RipDoubling rip_doubling_check(const Dictionary& dict, std::size_t S, const Budgets& budgets = {}) {
  RipDoubling out;
  out.delta_s = rip_constant_exhaustive(dict, S, budgets).delta;
  out.delta_2s = rip_constant_exhaustive(dict, 2 * S, budgets).delta;
  out.holds = out.delta_2s <= 3.0 * out.delta_s + 1e-9;
  return out;
}

/// U = ((1 + delta) / (1 - delta))^{1/2}: the unconditionality constant implied by RIP(D, delta).
inline double riesz_to_unconditionality(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in [0, 1)");
  return std::sqrt((1.0 + delta) / (1.0 - delta));
}

// ---------------------------------------------------------------------------
// Signal-level constants

/// N(x, nu): the largest n whose n smallest squared magnitudes sum to at most nu.
inline std::size_t n_of_x(const Vector& coeffs, double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("nu must be >= 0");
  std::vector<double> sq(static_cast<std::size_t>(coeffs.size()));
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) sq[static_cast<std::size_t>(i)] = coeffs[i] * coeffs[i];
  std::sort(sq.begin(), sq.end());
  double acc = 0.0;
  std::size_t n = 0;
  for (double v : sq) {
    acc += v;
    if (acc > nu) break;
    ++n;
  }
  return n;
}

inline std::size_t n_of_x(const SparseSignal& x, double nu) { return n_of_x(x.coeffs(), nu); }

/// Smallest constant C1 with sum_{i in A} |x_i| <= C1 |A|^r ||f_A|| for every nonempty A in T.
/// Walks the subsets in Gray-code order, resynchronizing f_A from scratch periodically.
inline double nikolskii_constant(const SparseSignal& f, const Dictionary& dict, double r,
                                 const Budgets& budgets = {}) {
  if (!(r >= 0.5)) throw std::invalid_argument("Nikol'skii parameter r must be >= 1/2");
  f.check_against(dict);
  const std::size_t K = f.sparsity();
  if (K > 20) throw BudgetExceeded("Nikol'skii sweep over 2^K subsets (K > 20)", std::ldexp(1.0, static_cast<int>(K)), std::ldexp(1.0, 20));
  const double count = std::ldexp(1.0, static_cast<int>(K)) - 1.0;
  if (count > budgets.nikolskii_subsets) throw BudgetExceeded("Nikol'skii sweep", count, budgets.nikolskii_subsets);

  const double p = dict.space().p();
  const auto& T = f.support();
  const Vector& x = f.coeffs();
  const std::uint64_t total = std::uint64_t{1} << K;
  Vector fa = Vector::Zero(static_cast<Eigen::Index>(dict.dim()));
  std::uint64_t mask = 0;
  double best = 0.0;
  for (std::uint64_t k = 1; k < total; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t flip = gray ^ mask;
    const int bit = std::countr_zero(flip);
    const double sgn = (gray & flip) ? 1.0 : -1.0;
    mask = gray;
    if (k % 256 == 0) {
      fa.setZero();
      for (std::size_t b = 0; b < K; ++b) {
        if (mask >> b & 1U) fa += x[static_cast<Eigen::Index>(b)] * dict.atom(T[b]);
      }
    } else {
      fa += sgn * x[bit] * dict.atom(T[static_cast<std::size_t>(bit)]);
    }
    double l1 = 0.0;
    int card = 0;
    for (std::size_t b = 0; b < K; ++b) {
      if (mask >> b & 1U) {
        l1 += std::abs(x[static_cast<Eigen::Index>(b)]);
        ++card;
      }
    }
    const double norm = detail::raw_lp_norm(fa, p);
    const double ratio = norm > 0.0 ? l1 / (std::pow(card, r) * norm) : std::numeric_limits<double>::infinity();
    best = std::max(best, ratio);
  }
  return best;
}

namespace detail {

// Columns of `cols` spanning the same subspace, chosen by pivoted QR.
inline Matrix independent_columns(const Matrix& cols, double threshold) {
  if (cols.cols() == 0) return cols;
  Eigen::ColPivHouseholderQR<Matrix> qr(cols);
  qr.setThreshold(threshold);
  const Eigen::Index rank = qr.rank();
  if (rank == cols.cols()) return cols;
  Matrix out(cols.rows(), rank);
  for (Eigen::Index k = 0; k < rank; ++k) out.col(k) = cols.col(qr.colsPermutation().indices()[k]);
  return out;
}

// min_c ||f - cols c||_p with dependent columns pruned first.
inline double distance_to_span(const Vector& f, const Matrix& cols, double p, const ProjectionOptions& opts) {
  const Matrix basis = independent_columns(cols, opts.rank_threshold);
  const double dist = best_lp_approximation(f, basis, p, opts).residual_norm;
  // f in the span up to rounding
  return dist <= 1e-12 * raw_lp_norm(f, p) ? 0.0 : dist;
}

}  // namespace detail

/// Number of (A, Lambda) pairs the pruned incoherence sweep evaluates.
inline double incoherence_sweep_size(std::size_t K, std::size_t N, std::size_t D) {
  double total = 0.0;
  for (std::size_t a = 1; a <= std::min(K, D); ++a) {
    const std::size_t pool = N - a;
    const std::size_t lam = std::min(D - a, pool);
    total += binomial(K, a) * binomial(pool, lam);
  }
  return total;
}

/// Smallest U with ||f_A - sum_{Lambda} c_i g_i|| >= ||f_A|| / U over disjoint A in T, Lambda with
/// |A| + |Lambda| <= D. Lambda ranges over every atom outside A (including T \ A). Only maximal Lambda
/// are evaluated: the residual can only shrink as Lambda grows.
inline double incoherence_constant(const SparseSignal& f, const Dictionary& dict, std::size_t D,
                                   const Budgets& budgets = {}, const ProjectionOptions& opts = {}) {
  f.check_against(dict);
  if (D < 1) throw std::invalid_argument("incoherence depth D must be >= 1");
  const std::size_t K = f.sparsity();
  const std::size_t N = dict.size();
  const double count = incoherence_sweep_size(K, N, D);
  if (count > budgets.incoherence_pairs) throw BudgetExceeded("incoherence sweep", count, budgets.incoherence_pairs);

  const double p = dict.space().p();
  const auto& T = f.support();
  const Vector& x = f.coeffs();
  double best = 1.0;
  for (std::size_t a = 1; a <= std::min(K, D); ++a) {
    for_each_combination(K, a, [&](const std::vector<std::size_t>& pos) {
      std::vector<std::size_t> A(a);
      Vector xa(static_cast<Eigen::Index>(a));
      std::vector<bool> in_a(N, false);
      for (std::size_t k = 0; k < a; ++k) {
        A[k] = T[pos[k]];
        xa[static_cast<Eigen::Index>(k)] = x[static_cast<Eigen::Index>(pos[k])];
        in_a[A[k]] = true;
      }
      const Vector fa = dict.synthesize(A, xa);
      const double fa_norm = detail::raw_lp_norm(fa, p);
      std::vector<std::size_t> pool;
      pool.reserve(N - a);
      for (std::size_t j = 0; j < N; ++j) {
        if (!in_a[j]) pool.push_back(j);
      }
      const std::size_t lam = std::min(D - a, pool.size());
      if (lam == 0) return true;
      for_each_combination_of(pool, lam, [&](const std::vector<std::size_t>& Lambda) {
        const double dist = detail::distance_to_span(fa, dict.columns(Lambda), p, opts);
        best = std::max(best, dist > 0.0 ? fa_norm / dist : std::numeric_limits<double>::infinity());
        return std::isfinite(best);
      });
      return std::isfinite(best);
    });
    if (!std::isfinite(best)) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Best m-term approximation

enum class ApproxNorm { space, d_norm };

inline std::string_view to_string(ApproxNorm n) { return n == ApproxNorm::space ? "space" : "d_norm"; }

struct BestMTerm {
  double sigma = 0.0;
  std::vector<std::size_t> support;
};

namespace detail {

// min_c max_k |a_k - (B c)_k| by enumerating vertices of the epigraph: every candidate optimum makes
// m + 1 of the 2n signed constraints z >= s (a_k - B_k c) active.
inline double minimax_fit(const Vector& a, const Matrix& B) {
  const Eigen::Index n = a.size();
  const Eigen::Index m = B.cols();
  if (m == 0) return a.cwiseAbs().maxCoeff();
  const auto rows = static_cast<std::size_t>(2 * n);
  double best = std::numeric_limits<double>::infinity();
  Matrix sys(m + 1, m + 1);
  Vector rhs(m + 1);
  for_each_combination(rows, static_cast<std::size_t>(m + 1), [&](const std::vector<std::size_t>& pick) {
    for (Eigen::Index i = 0; i <= m; ++i) {
      const auto k = static_cast<Eigen::Index>(pick[static_cast<std::size_t>(i)] / 2);
      const double s = (pick[static_cast<std::size_t>(i)] % 2 == 0) ? 1.0 : -1.0;
      // z + s B_k c = s a_k
      sys(i, 0) = 1.0;
      sys.block(i, 1, 1, m) = s * B.row(k);
      rhs[i] = s * a[k];
    }
    Eigen::FullPivLU<Matrix> lu(sys);
    if (!lu.isInvertible()) return true;
    const Vector sol = lu.solve(rhs);
    const Vector c = sol.tail(m);
    best = std::min(best, (a - B * c).cwiseAbs().maxCoeff());
    return true;
  });
  if (!std::isfinite(best)) {
    // No vertex: B is column-rank deficient, so drop redundant columns.
    const Matrix reduced = independent_columns(B, 1e-12);
    if (reduced.cols() < m) return minimax_fit(a, reduced);
  }
  return best;
}

}  // namespace detail

/// Exact sigma_m(f) in the chosen norm by exhaustive support enumeration. Ties resolve to the
/// lexicographically smallest support.
inline BestMTerm best_m_term_oracle(const Vector& f, const Dictionary& dict, std::size_t m, ApproxNorm norm,
                                    const Budgets& budgets = {}, const ProjectionOptions& opts = {}) {
  require_dim(static_cast<std::size_t>(f.size()), dict.dim(), "best_m_term_oracle");
  const std::size_t N = dict.size();
  const std::size_t mm = std::min(m, N);
  const double count = binomial(N, mm);
  if (count > budgets.best_m_term_supports) throw BudgetExceeded("best m-term sweep", count, budgets.best_m_term_supports);

  const double p = dict.space().p();
  const Matrix& W = dict.functionals();
  const Vector a = W.transpose() * f;
  BestMTerm best;
  best.sigma = std::numeric_limits<double>::infinity();
  for_each_combination(N, mm, [&](const std::vector<std::size_t>& S) {
    const Matrix cols = dict.columns(S);
    double sigma;
    if (norm == ApproxNorm::space) {
      sigma = detail::distance_to_span(f, cols, p, opts);
    } else {
      sigma = detail::minimax_fit(a, W.transpose() * cols);
    }
    if (sigma < best.sigma - 1e-12 * std::max(1.0, best.sigma) || !std::isfinite(best.sigma)) {
      best.sigma = sigma;
      best.support = S;
    }
    return true;
  });
  return best;
}

// ---------------------------------------------------------------------------
// Aggregate report

struct CertificateEntry {
  double parameter = 0.0;
  std::optional<double> value;
  EstimateMethod method = EstimateMethod::exhaustive;
  /// Set when the budget forbade the computation.
  std::optional<std::string> skipped;
};

struct RipEntry {
  std::size_t sparsity = 0;
  std::optional<RipEstimate> estimate;
  std::optional<std::string> skipped;
};

/// M(D), delta_S, C1 and U, each tagged with how it was obtained.
struct CertificateReport {
  double coherence = 0.0;
  std::vector<RipEntry> rip;
  std::optional<CertificateEntry> c1;
  std::optional<CertificateEntry> u;
};

}  // namespace sparsegreedy

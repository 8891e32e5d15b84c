#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sparsegreedy/chebyshev.hpp"
#include "sparsegreedy/errors.hpp"
#include "sparsegreedy/signal.hpp"
#include "sparsegreedy/space.hpp"

namespace sparsegreedy {

enum class Algorithm { womp, wcga, wqoga };
enum class StopReason { tolerance, max_iterations, degenerate_system };
enum class SelectionMode { inner_product, norming_functional };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::womp: return "womp";
    case Algorithm::wcga: return "wcga";
    case Algorithm::wqoga: return "wqoga";
  }
  return "?";
}

inline std::string_view to_string(StopReason s) {
  switch (s) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::max_iterations: return "max_iterations";
    case StopReason::degenerate_system: return "degenerate_system";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "womp") return Algorithm::womp;
  if (s == "wcga") return Algorithm::wcga;
  if (s == "wqoga") return Algorithm::wqoga;
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

inline StopReason parse_stop_reason(std::string_view s) {
  if (s == "tolerance") return StopReason::tolerance;
  if (s == "max_iterations") return StopReason::max_iterations;
  if (s == "degenerate_system") return StopReason::degenerate_system;
  throw std::invalid_argument("unknown stop reason '" + std::string(s) + "'");
}

/// Constant weakness t in (0, 1]; ties and weak selection resolve to the lowest qualifying index.
struct GreedyConfig {
  double weakness_t = 1.0;
  int max_iterations = 1;
  double residual_tolerance = 0.0;
  ProjectionOptions projection{};
  /// WOMP rebuilds its QR factors from scratch at this period.
  int refactor_period = 50;

  void validate() const {
    if (!(weakness_t > 0.0 && weakness_t <= 1.0)) throw std::invalid_argument("weakness t must lie in (0, 1]");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(residual_tolerance >= 0.0)) throw std::invalid_argument("residual tolerance must be >= 0");
  }
};

struct GreedyTrace {
  Algorithm algorithm = Algorithm::womp;
  /// T^m in selection order.
  std::vector<std::size_t> selected;
  /// ||f_m|| for m = 0 .. iterations().
  std::vector<double> residual_norms;
  /// |T \ T^m| per m, present when the ground truth was supplied.
  std::optional<std::vector<std::size_t>> gamma_sizes;
  Vector final_coeffs;
  Vector final_residual;
  StopReason stop_reason = StopReason::max_iterations;

  std::size_t iterations() const noexcept { return selected.size(); }
};

/// |T \ T^m| for m = 0 .. trace.iterations().
inline std::vector<std::size_t> trace_gamma_sizes(const GreedyTrace& trace, const SparseSignal& truth) {
  std::vector<std::size_t> out;
  out.reserve(trace.selected.size() + 1);
  std::vector<bool> hit(truth.support().size(), false);
  std::size_t remaining = truth.support().size();
  out.push_back(remaining);
  for (std::size_t idx : trace.selected) {
    const auto& T = truth.support();
    auto it = std::lower_bound(T.begin(), T.end(), idx);
    if (it != T.end() && *it == idx) {
      const auto pos = static_cast<std::size_t>(it - T.begin());
      if (!hit[pos]) {
        hit[pos] = true;
        --remaining;
      }
    }
    out.push_back(remaining);
  }
  return out;
}

namespace detail {

// Smallest index i (not excluded) with scores[i] >= t * max; nullopt when every score is zero.
inline std::optional<std::size_t> weak_argmax(const Vector& scores, double t,
                                              const std::vector<bool>* excluded = nullptr) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (excluded && (*excluded)[static_cast<std::size_t>(i)]) continue;
    best = std::max(best, scores[i]);
  }
  if (!(best > 0.0)) return std::nullopt;
  const double bar = t * best;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (excluded && (*excluded)[static_cast<std::size_t>(i)]) continue;
    if (scores[i] >= bar) return static_cast<std::size_t>(i);
  }
  return std::nullopt;
}

inline Vector selection_scores(const Vector& residual, const Dictionary& dict, SelectionMode mode) {
  if (mode == SelectionMode::inner_product) {
    if (!dict.space().is_hilbert()) {
      throw std::invalid_argument("inner-product selection requires p = 2");
    }
    return (dict.atoms().transpose() * residual).cwiseAbs();
  }
  return (dict.atoms().transpose() * dual_representer(residual, dict.space().p())).cwiseAbs();
}

// Scores below this (after normalizing by the residual norm) count as zero.
inline constexpr double kZeroScore = 1e-13;

inline void check_inputs(const Vector& f0, const Dictionary& dict, const GreedyConfig& cfg,
                         const std::optional<SparseSignal>& truth) {
  cfg.validate();
  require_dim(static_cast<std::size_t>(f0.size()), dict.dim(), "f0");
  if (!f0.allFinite()) throw std::invalid_argument("f0 has non-finite entries");
  if (truth) truth->check_against(dict);
}

inline void finish(GreedyTrace& trace, const GreedyConfig& cfg, const std::optional<SparseSignal>& truth,
                   bool degenerate) {
  if (degenerate) {
    trace.stop_reason = StopReason::degenerate_system;
  } else if (trace.residual_norms.back() <= cfg.residual_tolerance) {
    trace.stop_reason = StopReason::tolerance;
  } else {
    trace.stop_reason = StopReason::max_iterations;
  }
  if (truth) trace.gamma_sizes = trace_gamma_sizes(trace, *truth);
}

}  // namespace detail

/// Weak greedy selection: smallest index whose score reaches t times the best score.
inline std::size_t select_atom(const Vector& residual, const Dictionary& dict, double t, SelectionMode mode) {
  require_dim(static_cast<std::size_t>(residual.size()), dict.dim(), "residual");
  if (residual.isZero(0.0)) throw std::invalid_argument("select_atom: zero residual");
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("weakness t must lie in (0, 1]");
  auto idx = detail::weak_argmax(detail::selection_scores(residual, dict, mode), t);
  if (!idx) throw DegenerateSystem("residual is orthogonal to every atom");
  return *idx;
}

/// Weak Orthogonal Matching Pursuit (Hilbert space only). The orthogonal projection onto the
/// selected atoms is kept as an incrementally updated QR factorization (Gram-Schmidt with one
/// reorthogonalization pass), rebuilt from scratch every `refactor_period` iterations.
inline GreedyTrace run_womp(const Vector& f0, const Dictionary& dict, const GreedyConfig& cfg,
                            const std::optional<SparseSignal>& truth = std::nullopt) {
  if (!dict.space().is_hilbert()) throw std::invalid_argument("WOMP requires p = 2");
  detail::check_inputs(f0, dict, cfg, truth);

  const Eigen::Index M = static_cast<Eigen::Index>(dict.dim());
  const auto cap = static_cast<Eigen::Index>(std::min<std::size_t>(static_cast<std::size_t>(cfg.max_iterations),
                                                                   dict.size()));
  GreedyTrace trace;
  trace.algorithm = Algorithm::womp;
  Matrix Q(M, cap);
  Matrix R = Matrix::Zero(cap, cap);
  std::vector<bool> used(dict.size(), false);
  Vector r = f0;
  trace.residual_norms.push_back(r.norm());
  bool degenerate = false;

  auto rebuild = [&](Eigen::Index m) {
    const Matrix cols = dict.columns(trace.selected);
    Eigen::HouseholderQR<Matrix> qr(cols);
    Q.leftCols(m) = qr.householderQ() * Matrix::Identity(M, m);
    R.topLeftCorner(m, m) = qr.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
    // Fix signs so the diagonal stays positive like the Gram-Schmidt factors.
    for (Eigen::Index k = 0; k < m; ++k) {
      if (R(k, k) < 0.0) {
        R.row(k) *= -1.0;
        Q.col(k) *= -1.0;
      }
    }
  };

  while (static_cast<int>(trace.selected.size()) < cfg.max_iterations) {
    const double rn = trace.residual_norms.back();
    if (rn <= cfg.residual_tolerance) break;
    const Vector scores = (dict.atoms().transpose() * r).cwiseAbs() / rn;
    auto pick = detail::weak_argmax(scores, cfg.weakness_t, &used);
    if (!pick || scores[static_cast<Eigen::Index>(*pick)] <= detail::kZeroScore) {
      degenerate = true;
      break;
    }
    const auto m = static_cast<Eigen::Index>(trace.selected.size());
    const Vector g = dict.atom(*pick);
    Vector q = g;
    Vector coef = Vector::Zero(m);
    for (int pass = 0; pass < 2 && m > 0; ++pass) {
      const Vector h = Q.leftCols(m).transpose() * q;
      q -= Q.leftCols(m) * h;
      coef += h;
    }
    const double qn = q.norm();
    if (qn <= cfg.projection.rank_threshold) {
      degenerate = true;
      break;
    }
    Q.col(m) = q / qn;
    R.col(m).head(m) = coef;
    R(m, m) = qn;
    used[*pick] = true;
    trace.selected.push_back(*pick);
    const Eigen::Index mm = m + 1;
    if (cfg.refactor_period > 0 && mm % cfg.refactor_period == 0) rebuild(mm);
    r = f0 - Q.leftCols(mm) * (Q.leftCols(mm).transpose() * f0);
    trace.residual_norms.push_back(r.norm());
  }

  const auto m = static_cast<Eigen::Index>(trace.selected.size());
  trace.final_coeffs = R.topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(
      Q.leftCols(m).transpose() * f0);
  trace.final_residual = std::move(r);
  detail::finish(trace, cfg, truth, degenerate);
  return trace;
}

/// Weak Chebyshev Greedy Algorithm: selection by the residual's norming functional, then the
/// best l_p approximant from the span of the selected atoms.
inline GreedyTrace run_wcga(const Vector& f0, const Dictionary& dict, const GreedyConfig& cfg,
                            const std::optional<SparseSignal>& truth = std::nullopt) {
  detail::check_inputs(f0, dict, cfg, truth);
  const double p = dict.space().p();
  GreedyTrace trace;
  trace.algorithm = Algorithm::wcga;
  std::vector<bool> used(dict.size(), false);
  Vector r = f0;
  Vector coeffs(0);
  trace.residual_norms.push_back(detail::raw_lp_norm(r, p));
  bool degenerate = false;

  while (static_cast<int>(trace.selected.size()) < cfg.max_iterations && trace.selected.size() < dict.size()) {
    if (trace.residual_norms.back() <= cfg.residual_tolerance) break;
    const Vector scores = detail::selection_scores(r, dict, SelectionMode::norming_functional);
    auto pick = detail::weak_argmax(scores, cfg.weakness_t, &used);
    if (!pick || scores[static_cast<Eigen::Index>(*pick)] <= detail::kZeroScore) {
      degenerate = true;
      break;
    }
    std::vector<std::size_t> next = trace.selected;
    next.push_back(*pick);
    const auto g = dict.atom(*pick);
    Vector warm(coeffs.size() + 1);
    warm.head(coeffs.size()) = coeffs;
    warm[coeffs.size()] = r.dot(g) / g.squaredNorm();
    Projection proj;
    try {
      proj = chebyshev_project(f0, next, dict, cfg.projection, &warm);
    } catch (const DegenerateSystem&) {
      degenerate = true;
      break;
    }
    used[*pick] = true;
    trace.selected = std::move(next);
    coeffs = std::move(proj.coeffs);
    r = std::move(proj.residual);
    trace.residual_norms.push_back(proj.residual_norm);
  }

  trace.final_coeffs = std::move(coeffs);
  trace.final_residual = std::move(r);
  detail::finish(trace, cfg, truth, degenerate);
  return trace;
}

/// Weak Quasi-Orthogonal Greedy Algorithm: selection by the fixed atom functionals F_g applied to
/// the residual; coefficients solve F_{phi_j}(f0 - sum_i c_i phi_i) = 0 for j = 1..m.
/// A singular interpolation matrix ends the run with degenerate_system.
inline GreedyTrace run_wqoga(const Vector& f0, const Dictionary& dict, const GreedyConfig& cfg,
                             const std::optional<SparseSignal>& truth = std::nullopt) {
  detail::check_inputs(f0, dict, cfg, truth);
  const double p = dict.space().p();
  const Matrix& W = dict.functionals();
  GreedyTrace trace;
  trace.algorithm = Algorithm::wqoga;
  std::vector<bool> used(dict.size(), false);
  Vector r = f0;
  Vector coeffs(0);
  trace.residual_norms.push_back(detail::raw_lp_norm(r, p));
  bool degenerate = false;

  while (static_cast<int>(trace.selected.size()) < cfg.max_iterations && trace.selected.size() < dict.size()) {
    const double rn = trace.residual_norms.back();
    if (rn <= cfg.residual_tolerance) break;
    const Vector scores = (W.transpose() * r).cwiseAbs() / rn;
    auto pick = detail::weak_argmax(scores, cfg.weakness_t, &used);
    if (!pick || scores[static_cast<Eigen::Index>(*pick)] <= detail::kZeroScore) {
      degenerate = true;
      break;
    }
    std::vector<std::size_t> next = trace.selected;
    next.push_back(*pick);
    const Matrix cols = dict.columns(next);
    Matrix Wsel(cols.rows(), cols.cols());
    for (std::size_t k = 0; k < next.size(); ++k) Wsel.col(static_cast<Eigen::Index>(k)) = W.col(static_cast<Eigen::Index>(next[k]));
    const Matrix G = Wsel.transpose() * cols;
    Eigen::FullPivLU<Matrix> lu(G);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
      degenerate = true;
      break;
    }
    used[*pick] = true;
    trace.selected = std::move(next);
    coeffs = lu.solve(Wsel.transpose() * f0);
    r = f0 - cols * coeffs;
    trace.residual_norms.push_back(detail::raw_lp_norm(r, p));
  }

  trace.final_coeffs = std::move(coeffs);
  trace.final_residual = std::move(r);
  detail::finish(trace, cfg, truth, degenerate);
  return trace;
}

inline GreedyTrace run_greedy(Algorithm alg, const Vector& f0, const Dictionary& dict, const GreedyConfig& cfg,
                              const std::optional<SparseSignal>& truth = std::nullopt) {
  switch (alg) {
    case Algorithm::womp: return run_womp(f0, dict, cfg, truth);
    case Algorithm::wcga: return run_wcga(f0, dict, cfg, truth);
    case Algorithm::wqoga: return run_wqoga(f0, dict, cfg, truth);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace sparsegreedy

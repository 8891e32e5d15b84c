#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "sparsegreedy/errors.hpp"
#include "sparsegreedy/space.hpp"

namespace sparsegreedy {

struct ProjectionOptions {
  /// Bound on max_j |F_residual(g_j)| certifying the best approximant.
  double tolerance = 1e-9;
  int max_newton_steps = 200;
  /// Relative column-pivoted QR threshold below which the atoms count as dependent.
  double rank_threshold = 1e-10;
};

struct Projection {
  Vector coeffs;
  Vector residual;
  double residual_norm = 0.0;
  /// max_j |F_residual(g_j)|, zero when the residual vanishes.
  double stationarity = 0.0;
  int newton_steps = 0;
};

namespace detail {

inline double stationarity_of(const Vector& residual, const Matrix& cols, double p) {
  if (cols.cols() == 0 || residual.isZero(0.0)) return 0.0;
  return (cols.transpose() * dual_representer(residual, p)).cwiseAbs().maxCoeff();
}

// d/ds of sum |r_i - s v_i|^p, divided by p.
inline double line_slope(const Vector& r, const Vector& v, double s, double p) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double e = r[i] - s * v[i];
    acc -= signum(e) * abs_pow(std::abs(e), p - 1.0) * v[i];
  }
  return acc;
}

inline double line_curvature(const Vector& r, const Vector& v, double s, double p) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double e = r[i] - s * v[i];
    acc += abs_pow(std::abs(e), p - 2.0) * v[i] * v[i];
  }
  return (p - 1.0) * acc;
}

// Exact minimizer of the convex 1-D function s -> ||r - s v||_p^p, by bracketed Newton.
inline double exact_line_search(const Vector& r, const Vector& v, double p) {
  double lo = 0.0;
  double hi = 1.0;
  double slope0 = line_slope(r, v, 0.0, p);
  if (slope0 >= 0.0) return 0.0;
  int guard = 0;
  while (line_slope(r, v, hi, p) < 0.0 && guard++ < 200) {
    lo = hi;
    hi *= 2.0;
  }
  double s = std::min(1.0, hi);
  for (int it = 0; it < 200; ++it) {
    const double g = line_slope(r, v, s, p);
    if (g == 0.0) return s;
    if (g < 0.0) lo = s; else hi = s;
    const double h = line_curvature(r, v, s, p);
    double next = (h > 0.0) ? s - g / h : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-16 * std::max(1.0, std::abs(s)) || hi - lo <= 1e-16 * hi) {
      return next;
    }
    s = next;
  }
  return s;
}

}  // namespace detail

/// Best l_p approximation of f from the span of the columns of `cols`.
/// Hilbert case: least squares. p > 2: damped Newton on ||f - cols c||_p^p with exact line search,
/// certified by the first-order condition F_residual(g_j) = 0 for every column.
inline Projection best_lp_approximation(const Vector& f, const Matrix& cols, double p,
                                        const ProjectionOptions& opts = {},
                                        const Vector* warm_start = nullptr) {
  require_dim(static_cast<std::size_t>(cols.rows()), static_cast<std::size_t>(f.size()),
              "projection atoms");
  Projection out;
  const Eigen::Index m = cols.cols();
  if (m == 0) {
    out.coeffs = Vector(0);
    out.residual = f;
    out.residual_norm = detail::raw_lp_norm(f, p);
    return out;
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(cols);
  qr.setThreshold(opts.rank_threshold);
  if (qr.rank() < m) throw DegenerateSystem("selected atoms are linearly dependent");
  Vector c = qr.solve(f);
  Vector r = f - cols * c;

  const double f_norm = detail::raw_lp_norm(f, p);
  const double exact_floor = 1e-14 * std::max(f_norm, std::numeric_limits<double>::min());
  if (p == 2.0 || detail::raw_lp_norm(r, p) <= exact_floor) {
    out.coeffs = std::move(c);
    out.residual = std::move(r);
    out.residual_norm = detail::raw_lp_norm(out.residual, p);
    out.stationarity = out.residual_norm <= exact_floor ? 0.0
                                                        : detail::stationarity_of(out.residual, cols, p);
    return out;
  }

  if (warm_start != nullptr && warm_start->size() == m && warm_start->allFinite()) {
    c = *warm_start;
    r = f - cols * c;
  }

  for (int step = 0;; ++step) {
    const double nr = detail::raw_lp_norm(r, p);
    const Vector rn = r / nr;
    Vector weights(rn.size());
    Vector curv(rn.size());
    for (Eigen::Index i = 0; i < rn.size(); ++i) {
      const double a = std::abs(rn[i]);
      curv[i] = detail::abs_pow(a, p - 2.0);
      weights[i] = detail::signum(rn[i]) * curv[i] * a;
    }
    // weights is the dual representer of r, since ||rn||_p = 1.
    const Vector grad = cols.transpose() * weights;
    const double stat = grad.cwiseAbs().maxCoeff();
    if (stat <= opts.tolerance) {
      out.stationarity = stat;
      out.newton_steps = step;
      break;
    }
    if (step >= opts.max_newton_steps) {
      throw SolverStagnation("chebyshev projection did not reach stationarity " +
                             std::to_string(opts.tolerance) + " (at " + std::to_string(stat) + ")");
    }
    Matrix hess = cols.transpose() * curv.asDiagonal() * cols;
    Eigen::LDLT<Matrix> ldlt(hess);
    Vector dir;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) dir = ldlt.solve(grad);
    if (dir.size() != m || !dir.allFinite()) {
      const double ridge = 1e-12 * std::max(hess.trace(), 1e-300);
      hess.diagonal().array() += ridge;
      dir = hess.ldlt().solve(grad);
    }
    // Newton step scaled back from the normalized residual.
    dir *= nr / (p - 1.0);
    const Vector v = cols * dir;
    const double s = detail::exact_line_search(r, v, p);
    c += s * dir;
    r = f - cols * c;
  }

  out.coeffs = std::move(c);
  out.residual = std::move(r);
  out.residual_norm = detail::raw_lp_norm(out.residual, p);
  return out;
}

/// Chebyshev (best-approximation) projection of f0 onto span{g_j : j in atoms}.
inline Projection chebyshev_project(const Vector& f0, const std::vector<std::size_t>& atoms,
                                    const Dictionary& dict, const ProjectionOptions& opts = {},
                                    const Vector* warm_start = nullptr) {
  require_dim(static_cast<std::size_t>(f0.size()), dict.dim(), "chebyshev_project");
  for (std::size_t j : atoms) {
    if (j >= dict.size()) throw std::out_of_range("atom index out of range");
  }
  return best_lp_approximation(f0, dict.columns(atoms), dict.space().p(), opts, warm_start);
}

}  // namespace sparsegreedy

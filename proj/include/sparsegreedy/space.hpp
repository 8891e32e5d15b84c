#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsegreedy/errors.hpp"

namespace sparsegreedy {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// The ambient space l_p^M, restricted to 2 <= p < inf where rho(u) <= gamma u^2.
class SpaceSpec {
public:
  static SpaceSpec make(std::size_t dim, double p) {
    if (!(p >= 2.0) || !std::isfinite(p)) {
      throw std::invalid_argument("p must be >= 2 (got " + std::to_string(p) + ")");
    }
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    return SpaceSpec(dim, p);
  }

  std::size_t dim() const noexcept { return dim_; }
  double p() const noexcept { return p_; }
  /// Conjugate exponent p' = p / (p - 1).
  double dual_p() const noexcept { return p_ / (p_ - 1.0); }
  double gamma() const noexcept { return (p_ - 1.0) / 2.0; }
  bool is_hilbert() const noexcept { return p_ == 2.0; }

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;

private:
  SpaceSpec(std::size_t dim, double p) : dim_(dim), p_(p) {}
  std::size_t dim_;
  double p_;
};

inline double smoothness_gamma(const SpaceSpec& space) { return space.gamma(); }

namespace detail {

// a^e for a >= 0, with a multiply loop when e is a small integer (p = 4 is the common case).
inline double abs_pow(double a, double e) {
  if (e == std::floor(e) && e >= 0.0 && e <= 16.0) {
    double r = 1.0;
    for (int k = static_cast<int>(e); k > 0; --k) r *= a;
    return r;
  }
  return std::pow(a, e);
}

// Scaled by the max entry so large p neither overflows nor underflows.
template <typename Derived>
double raw_lp_norm(const Eigen::MatrixBase<Derived>& f, double p) {
  if (p == 2.0) return f.norm();
  const double scale = f.cwiseAbs().maxCoeff();
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) acc += abs_pow(std::abs(f[i]) / scale, p);
  return scale * std::pow(acc, 1.0 / p);
}

inline double signum(double v) { return (v > 0.0) - (v < 0.0); }

// |f_i|^{p-1} sign(f_i) / ||f||^{p-1}; caller guarantees f != 0.
template <typename Derived>
Vector dual_representer(const Eigen::MatrixBase<Derived>& f, double p) {
  const double norm = raw_lp_norm(f, p);
  if (p == 2.0) return f / norm;
  Vector w(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    w[i] = signum(f[i]) * abs_pow(std::abs(f[i]) / norm, p - 1.0);
  }
  return w;
}

}  // namespace detail

inline double lp_norm(const Vector& f, const SpaceSpec& space) {
  require_dim(static_cast<std::size_t>(f.size()), space.dim(), "lp_norm");
  return detail::raw_lp_norm(f, space.p());
}

/// Representer w of the unique norming functional F_f(g) = <w, g>.
class NormingFunctional {
public:
  NormingFunctional(Vector weights, double p) : weights_(std::move(weights)), p_(p) {}

  const Vector& weights() const noexcept { return weights_; }
  double operator()(const Vector& g) const {
    require_dim(static_cast<std::size_t>(g.size()), static_cast<std::size_t>(weights_.size()),
                "NormingFunctional");
    return weights_.dot(g);
  }
  double dual_norm() const { return detail::raw_lp_norm(weights_, p_ / (p_ - 1.0)); }

private:
  Vector weights_;
  double p_;
};

inline NormingFunctional norming_functional(const Vector& f, const SpaceSpec& space) {
  require_dim(static_cast<std::size_t>(f.size()), space.dim(), "norming_functional");
  if (!f.allFinite()) throw std::invalid_argument("norming_functional: non-finite input");
  if (f.isZero(0.0)) throw std::invalid_argument("norming_functional: zero vector has no norming functional");
  return NormingFunctional(detail::dual_representer(f, space.p()), space.p());
}

/// dim x N matrix of unit-norm atoms, plus the matrix of their norming functionals.
class Dictionary {
public:
  static constexpr double kUnitTolerance = 1e-12;

  /// Takes columns that are already normalized; rejects any |‖g‖ - 1| > tol.
  static Dictionary from_normalized(Matrix atoms, const SpaceSpec& space,
                                    double tol = kUnitTolerance) {
    validate_shape(atoms, space);
    for (Eigen::Index j = 0; j < atoms.cols(); ++j) {
      const double n = detail::raw_lp_norm(atoms.col(j), space.p());
      if (!(std::abs(n - 1.0) <= tol)) {
        throw std::invalid_argument("atom " + std::to_string(j) + " has norm " +
                                    std::to_string(n) + ", expected 1");
      }
    }
    check_distinct(atoms);
    return Dictionary(std::move(atoms), space);
  }

  std::size_t dim() const noexcept { return space_.dim(); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(atoms_.cols()); }
  const SpaceSpec& space() const noexcept { return space_; }
  const Matrix& atoms() const noexcept { return atoms_; }
  auto atom(std::size_t i) const { return atoms_.col(static_cast<Eigen::Index>(i)); }
  /// Column j holds the representer of F_{g_j}.
  const Matrix& functionals() const noexcept { return functionals_; }

  /// Phi_S x_S for an index list and aligned coefficients.
  Vector synthesize(const std::vector<std::size_t>& support, const Vector& coeffs) const {
    require_dim(static_cast<std::size_t>(coeffs.size()), support.size(), "synthesize");
    Vector f = Vector::Zero(atoms_.rows());
    for (std::size_t k = 0; k < support.size(); ++k) f += coeffs[k] * atom(support[k]);
    return f;
  }

  Matrix columns(const std::vector<std::size_t>& idx) const {
    Matrix out(atoms_.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = atom(idx[k]);
    return out;
  }

private:
  Dictionary(Matrix atoms, const SpaceSpec& space) : atoms_(std::move(atoms)), space_(space) {
    functionals_.resize(atoms_.rows(), atoms_.cols());
    for (Eigen::Index j = 0; j < atoms_.cols(); ++j) {
      functionals_.col(j) = detail::dual_representer(atoms_.col(j), space_.p());
    }
  }

  static void validate_shape(const Matrix& atoms, const SpaceSpec& space) {
    if (atoms.cols() < 1) throw std::invalid_argument("dictionary needs at least one atom");
    require_dim(static_cast<std::size_t>(atoms.rows()), space.dim(), "dictionary rows");
    if (!atoms.allFinite()) throw std::invalid_argument("dictionary has non-finite entries");
  }

  static void check_distinct(const Matrix& atoms) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(atoms.cols()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    auto less = [&](Eigen::Index a, Eigen::Index b) {
      for (Eigen::Index i = 0; i < atoms.rows(); ++i) {
        if (atoms(i, a) != atoms(i, b)) return atoms(i, a) < atoms(i, b);
      }
      return false;
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (!less(order[k - 1], order[k])) {
        throw std::invalid_argument("atoms " + std::to_string(order[k - 1]) + " and " +
                                    std::to_string(order[k]) + " are identical");
      }
    }
  }

  friend Dictionary normalize_dictionary(Matrix raw, const SpaceSpec& space);

  Matrix atoms_;
  Matrix functionals_;
  SpaceSpec space_;
};

/// Divides every column by its l_p norm, preserving order.
inline Dictionary normalize_dictionary(Matrix raw, const SpaceSpec& space) {
  Dictionary::validate_shape(raw, space);
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const double n = detail::raw_lp_norm(raw.col(j), space.p());
    if (n == 0.0) throw std::invalid_argument("column " + std::to_string(j) + " is zero");
    raw.col(j) /= n;
  }
  Dictionary::check_distinct(raw);
  return Dictionary(std::move(raw), space);
}

}  // namespace sparsegreedy

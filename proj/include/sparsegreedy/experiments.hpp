#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "sparsegreedy/analysis.hpp"
#include "sparsegreedy/greedy.hpp"
#include "sparsegreedy/signal.hpp"
#include "sparsegreedy/space.hpp"

namespace sparsegreedy {

// ---------------------------------------------------------------------------
// Seeding

/// SplitMix64 output function (finalizer).
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Per-trial seed: splitmix64(base_seed ^ splitmix64(trial)). Depends only on (base_seed, trial).
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) {
  return splitmix64(base_seed ^ splitmix64(trial));
}

// ---------------------------------------------------------------------------
// Configuration

enum class CoefficientLaw { uniform_pm1, rademacher, uniform_floor };
enum class DictionaryLaw { gaussian_normalized, from_file };

inline std::string_view to_string(CoefficientLaw c) {
  switch (c) {
    case CoefficientLaw::uniform_pm1: return "uniform_pm1";
    case CoefficientLaw::rademacher: return "rademacher";
    case CoefficientLaw::uniform_floor: return "uniform_floor";
  }
  return "?";
}

inline std::string_view to_string(DictionaryLaw d) {
  return d == DictionaryLaw::gaussian_normalized ? "gaussian_normalized" : "from_file";
}

inline CoefficientLaw parse_coefficient_law(std::string_view s) {
  if (s == "uniform_pm1" || s == "uniform") return CoefficientLaw::uniform_pm1;
  if (s == "rademacher") return CoefficientLaw::rademacher;
  if (s == "uniform_floor" || s == "floor") return CoefficientLaw::uniform_floor;
  throw std::invalid_argument("unknown coefficient law '" + std::string(s) + "'");
}

inline DictionaryLaw parse_dictionary_law(std::string_view s) {
  if (s == "gaussian_normalized" || s == "gaussian") return DictionaryLaw::gaussian_normalized;
  if (s == "from_file" || s == "file") return DictionaryLaw::from_file;
  throw std::invalid_argument("unknown dictionary law '" + std::string(s) + "'");
}

struct McConfig {
  std::size_t dim_m = 0;
  std::size_t n_atoms = 0;
  std::size_t sparsity_k = 0;
  /// Iteration budget is ceil(K (1 + epsilon)).
  double epsilon = 0.5;
  /// Coefficient floor for uniform_floor.
  std::optional<double> epsilon1;
  std::uint64_t trials = 1;
  std::uint64_t base_seed = 0;
  CoefficientLaw coefficient_law = CoefficientLaw::uniform_pm1;
  DictionaryLaw dictionary_law = DictionaryLaw::gaussian_normalized;
  /// Fixed dictionary for DictionaryLaw::from_file.
  std::shared_ptr<const Dictionary> dictionary;
  /// Thresholds nu at which N(x, nu) is recorded.
  std::vector<double> nu_grid{1.0};
  /// A trial counts as recovered when ||f_m|| <= this and T is contained in the selected set.
  double recovery_tolerance = 1e-6;

  void validate() const {
    if (dictionary_law == DictionaryLaw::from_file) {
      if (!dictionary) throw std::invalid_argument("from_file dictionary law needs a dictionary");
      if (dictionary->dim() != dim_m || dictionary->size() != n_atoms) {
        throw std::invalid_argument("dictionary shape does not match dim_m x n_atoms");
      }
      if (!dictionary->space().is_hilbert()) throw std::invalid_argument("Monte Carlo recovery runs OMP and needs p = 2");
    }
    if (sparsity_k < 1) throw std::invalid_argument("sparsity K must be >= 1");
    if (!(sparsity_k <= dim_m && dim_m <= n_atoms)) throw std::invalid_argument("need K <= M <= N");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (coefficient_law == CoefficientLaw::uniform_floor && !epsilon1) {
      throw std::invalid_argument("uniform_floor needs epsilon1");
    }
    if (epsilon1 && !(*epsilon1 > 0.0 && *epsilon1 < 1.0)) throw std::invalid_argument("epsilon1 must lie in (0, 1)");
    for (double nu : nu_grid) {
      if (!(nu >= 0.0)) throw std::invalid_argument("nu grid values must be >= 0");
    }
  }

  /// ceil(K (1 + epsilon)), guarded against K * 1.1 = 22.000000000000004.
  std::size_t iteration_budget() const {
    const double raw = static_cast<double>(sparsity_k) * (1.0 + epsilon);
    return static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw));
  }
};

// ---------------------------------------------------------------------------
// Instances

struct Instance {
  std::uint64_t seed = 0;
  std::shared_ptr<const Dictionary> dictionary;
  SparseSignal signal;
  Vector f0;
};

namespace detail {

inline Vector draw_coefficients(std::size_t K, CoefficientLaw law, std::optional<double> floor,
                                std::mt19937_64& rng) {
  Vector x(static_cast<Eigen::Index>(K));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    switch (law) {
      case CoefficientLaw::uniform_pm1: {
        double v = 0.0;
        while (v == 0.0) v = unit(rng);
        x[i] = v;
        break;
      }
      case CoefficientLaw::rademacher:
        x[i] = coin(rng) ? 1.0 : -1.0;
        break;
      case CoefficientLaw::uniform_floor: {
        std::uniform_real_distribution<double> mag(*floor, 1.0);
        const double m = mag(rng);
        x[i] = coin(rng) ? m : -m;
        break;
      }
    }
  }
  return x;
}

inline std::vector<std::size_t> draw_support(std::size_t N, std::size_t K, std::mt19937_64& rng) {
  std::vector<std::size_t> pool(N);
  for (std::size_t i = 0; i < N; ++i) pool[i] = i;
  for (std::size_t i = 0; i < K; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, N - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  std::vector<std::size_t> support(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(K));
  std::sort(support.begin(), support.end());
  return support;
}

}  // namespace detail

/// Standard-normal M x N matrix (column by column), columns normalized in l_p.
inline Dictionary gaussian_dictionary(std::size_t M, std::size_t N, const SpaceSpec& space, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix raw(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(N));
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    for (Eigen::Index i = 0; i < raw.rows(); ++i) raw(i, j) = normal(rng);
  }
  return normalize_dictionary(std::move(raw), space);
}

/// Draws, in order from one mt19937_64 stream seeded by trial_seed: the dictionary (if random),
/// the support (uniform without replacement), then the coefficients. f0 = Phi x.
inline Instance gen_instance(const McConfig& cfg, std::uint64_t trial) {
  cfg.validate();
  if (trial >= cfg.trials) throw std::out_of_range("trial index beyond configured trials");
  const std::uint64_t seed = trial_seed(cfg.base_seed, trial);
  std::mt19937_64 rng(seed);
  std::shared_ptr<const Dictionary> dict = cfg.dictionary;
  if (cfg.dictionary_law == DictionaryLaw::gaussian_normalized) {
    dict = std::make_shared<const Dictionary>(
        gaussian_dictionary(cfg.dim_m, cfg.n_atoms, SpaceSpec::make(cfg.dim_m, 2.0), rng));
  }
  auto support = detail::draw_support(cfg.n_atoms, cfg.sparsity_k, rng);
  Vector coeffs = detail::draw_coefficients(cfg.sparsity_k, cfg.coefficient_law, cfg.epsilon1, rng);
  SparseSignal signal(std::move(support), std::move(coeffs));
  Vector f0 = signal.synthesize(*dict);
  return Instance{seed, std::move(dict), std::move(signal), std::move(f0)};
}

// ---------------------------------------------------------------------------
// Parallel trial execution

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Results must be written to per-index slots.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Monte Carlo recovery

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score 95% interval for a binomial proportion.
inline Interval wilson95(std::uint64_t successes, std::uint64_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(successes) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (ph + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Binomial standard error sqrt(f (1 - f) / n).
inline double binomial_sigma(double freq, std::uint64_t n) {
  return std::sqrt(std::max(0.0, freq * (1.0 - freq)) / static_cast<double>(n));
}

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  bool recovered = false;
  std::optional<std::size_t> iterations_to_zero;
  std::size_t gamma_k = 0;
  std::vector<std::size_t> n_of_x;
  double residual_final = 0.0;
  StopReason stop_reason = StopReason::max_iterations;
};

struct McResult {
  McConfig config;
  std::vector<TrialRecord> records;
  std::uint64_t recovered = 0;
  double frequency = 0.0;
  Interval ci95;
};

inline constexpr std::string_view kGaussianDictionaryNote =
    "gaussian_normalized dictionaries stand in for RIP dictionaries; delta_2K is not certified at this scale";

/// Runs OMP on one instance with the ceil(K(1+eps)) budget and scores it.
inline TrialRecord run_recovery_trial(const McConfig& cfg, std::uint64_t trial) {
  const Instance inst = gen_instance(cfg, trial);
  GreedyConfig gcfg;
  gcfg.weakness_t = 1.0;
  gcfg.max_iterations = static_cast<int>(cfg.iteration_budget());
  gcfg.residual_tolerance = cfg.recovery_tolerance;
  const GreedyTrace trace = run_womp(inst.f0, *inst.dictionary, gcfg, inst.signal);

  TrialRecord rec;
  rec.trial = trial;
  rec.seed = inst.seed;
  rec.stop_reason = trace.stop_reason;
  rec.residual_final = trace.residual_norms.back();
  for (std::size_t m = 0; m < trace.residual_norms.size(); ++m) {
    if (trace.residual_norms[m] <= cfg.recovery_tolerance) {
      rec.iterations_to_zero = m;
      break;
    }
  }
  const auto& gammas = *trace.gamma_sizes;
  rec.gamma_k = gammas[std::min(cfg.sparsity_k, gammas.size() - 1)];
  rec.recovered = rec.residual_final <= cfg.recovery_tolerance && gammas.back() == 0;
  for (double nu : cfg.nu_grid) rec.n_of_x.push_back(n_of_x(inst.signal, nu));
  return rec;
}

inline McResult mc_recovery(const McConfig& cfg, unsigned jobs = 1) {
  cfg.validate();
  McResult out;
  out.config = cfg;
  out.records.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(out.records.size(), jobs, [&](std::size_t i) { out.records[i] = run_recovery_trial(cfg, i); });
  for (const auto& r : out.records) out.recovered += r.recovered ? 1 : 0;
  out.frequency = static_cast<double>(out.recovered) / static_cast<double>(cfg.trials);
  out.ci95 = wilson95(out.recovered, cfg.trials);
  return out;
}

// ---------------------------------------------------------------------------
// Small-coefficient count

struct SmallCoeffReport {
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  /// Fraction of trials with |{i : |x_i| < p}| <= 2 p K.
  double frequency = 1.0;
  /// 1 - 2 exp(-K p^2 / 2).
  double hoeffding_bound = 0.0;
};

/// Only the coefficient stream is drawn: K uniforms from the trial's mt19937_64.
inline SmallCoeffReport small_coeff_check(const McConfig& cfg, double p_threshold, unsigned jobs = 1) {
  if (cfg.coefficient_law != CoefficientLaw::uniform_pm1) {
    throw std::invalid_argument("small_coeff_check needs uniform_pm1 coefficients");
  }
  if (!(p_threshold > 0.0)) throw std::invalid_argument("threshold must be > 0");
  if (cfg.sparsity_k < 1 || cfg.trials < 1) throw std::invalid_argument("need K >= 1 and trials >= 1");
  const double K = static_cast<double>(cfg.sparsity_k);
  std::vector<std::uint8_t> violated(static_cast<std::size_t>(cfg.trials), 0);
  parallel_for(violated.size(), jobs, [&](std::size_t t) {
    std::mt19937_64 rng(trial_seed(cfg.base_seed, t));
    const Vector x = detail::draw_coefficients(cfg.sparsity_k, CoefficientLaw::uniform_pm1, std::nullopt, rng);
    const auto small = (x.array().abs() < p_threshold).count();
    violated[t] = static_cast<double>(small) > 2.0 * p_threshold * K ? 1 : 0;
  });
  SmallCoeffReport rep;
  rep.trials = cfg.trials;
  for (auto v : violated) rep.violations += v;
  rep.frequency = 1.0 - static_cast<double>(rep.violations) / static_cast<double>(rep.trials);
  rep.hoeffding_bound = 1.0 - 2.0 * std::exp(-K * p_threshold * p_threshold / 2.0);
  return rep;
}

// ---------------------------------------------------------------------------
// Lebesgue-type checks on single instances

/// Slack for comparing residual norms that should obey an exact inequality.
inline constexpr double kResidualSlack = 1e-10;

struct DecayReport {
  double c1_nikolskii = 0.0;
  double u = 1.0;
  double gamma = 0.5;
  /// t^2 / (32 gamma C1^2 U^2)
  double rate = 0.0;
  double r = 0.5;
  std::size_t sparsity = 0;
  std::size_t depth = 0;
  double epsilon = 0.0;
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
  /// min over (k, m) of bound - ||f_m||.
  double tightest_margin = std::numeric_limits<double>::infinity();
  GreedyTrace trace;

  bool passed() const { return violations == 0; }
};

/// Certifies C1, U and gamma exhaustively, runs WCGA, and checks
/// ||f_m|| <= ||f_k|| exp(-c1 (m - k) / K^{2r}) + 2 eps for every k < m with K + m <= D.
inline DecayReport decay_check(const Vector& f0, const Dictionary& dict, const SparseSignal& truth,
                               const GreedyConfig& cfg, double r, std::size_t budget_d,
                               const Budgets& budgets = {}) {
  const std::size_t K = truth.sparsity();
  if (budget_d <= K) throw std::invalid_argument("decay check needs D > K");
  DecayReport rep;
  rep.r = r;
  rep.sparsity = K;
  rep.depth = budget_d;
  rep.c1_nikolskii = nikolskii_constant(truth, dict, r, budgets);
  rep.u = incoherence_constant(truth, dict, budget_d, budgets, cfg.projection);
  rep.gamma = smoothness_gamma(dict.space());
  const double t = cfg.weakness_t;
  rep.rate = t * t / (32.0 * rep.gamma * rep.c1_nikolskii * rep.c1_nikolskii * rep.u * rep.u);
  if (!std::isfinite(rep.rate)) rep.rate = 0.0;
  rep.epsilon = lp_norm(f0 - truth.synthesize(dict), dict.space());

  GreedyConfig run_cfg = cfg;
  run_cfg.max_iterations = std::min<int>(cfg.max_iterations, static_cast<int>(budget_d - K));
  rep.trace = run_wcga(f0, dict, run_cfg, truth);

  const auto& norms = rep.trace.residual_norms;
  const double scale = std::pow(static_cast<double>(K), 2.0 * r);
  const double slack = kResidualSlack * std::max(1.0, norms.front());
  for (std::size_t m = 1; m < norms.size(); ++m) {
    for (std::size_t k = 0; k < m; ++k) {
      const double bound = norms[k] * std::exp(-rep.rate * static_cast<double>(m - k) / scale) + 2.0 * rep.epsilon;
      ++rep.pairs_checked;
      rep.tightest_margin = std::min(rep.tightest_margin, bound - norms[m]);
      if (norms[m] > bound + slack) ++rep.violations;
    }
  }
  return rep;
}

struct LebesgueReport {
  double c1_nikolskii = 0.0;
  double u = 1.0;
  std::size_t sparsity = 0;
  double r = 0.5;
  double big_c = 1.0;
  std::size_t m_star = 0;
  double epsilon = 0.0;
  double final_norm = 0.0;
  /// ||f_{m*}|| / eps, absent when eps = 0.
  std::optional<double> ratio;
  std::optional<double> ratio_bound;
  bool exact_required = false;
  bool passed = true;
  GreedyTrace trace;
};

/// Runs WCGA for m* = ceil(big_c U^2 ln(U + 1) K^{2r}) iterations. With eps = ||f0 - f^eps|| = 0
/// the run must end at ||f_{m*}|| <= 1e-9; otherwise ||f_{m*}|| / eps is reported and, if a bound
/// is supplied, compared with it.
inline LebesgueReport lebesgue_check(const Vector& f0, const Dictionary& dict, const SparseSignal& truth,
                                     const GreedyConfig& cfg, double r, double big_c, std::size_t budget_d,
                                     std::optional<double> ratio_bound = std::nullopt,
                                     const Budgets& budgets = {}) {
  if (!(big_c > 0.0)) throw std::invalid_argument("big_c must be > 0");
  LebesgueReport rep;
  rep.sparsity = truth.sparsity();
  rep.r = r;
  rep.big_c = big_c;
  rep.ratio_bound = ratio_bound;
  rep.c1_nikolskii = nikolskii_constant(truth, dict, r, budgets);
  rep.u = incoherence_constant(truth, dict, budget_d, budgets, cfg.projection);
  if (!std::isfinite(rep.u)) throw DegenerateSystem("incoherence constant is infinite; no iteration budget");
  const double K = static_cast<double>(rep.sparsity);
  rep.m_star = static_cast<std::size_t>(
      std::ceil(big_c * rep.u * rep.u * std::log(rep.u + 1.0) * std::pow(K, 2.0 * r) - 1e-9));
  rep.m_star = std::max<std::size_t>(rep.m_star, 1);
  rep.epsilon = lp_norm(f0 - truth.synthesize(dict), dict.space());

  GreedyConfig run_cfg = cfg;
  run_cfg.max_iterations = static_cast<int>(std::min(rep.m_star, dict.size()));
  rep.trace = run_wcga(f0, dict, run_cfg, truth);
  rep.final_norm = rep.trace.residual_norms.back();
  rep.exact_required = rep.epsilon <= 1e-14 * std::max(1.0, lp_norm(f0, dict.space()));
  if (rep.exact_required) {
    rep.passed = rep.final_norm <= 1e-9;
  } else {
    rep.ratio = rep.final_norm / rep.epsilon;
    rep.passed = !ratio_bound || *rep.ratio <= *ratio_bound;
  }
  return rep;
}

struct QogaDnormReport {
  double coherence = 0.0;
  std::size_t m = 0;
  bool skipped = false;
  std::string skip_reason;
  double residual_d_norm = 0.0;
  double sigma = 0.0;
  std::vector<std::size_t> best_support;
  static constexpr double kFactor = 13.5;
  bool passed = true;
  GreedyTrace trace;
};

/// QOGA (t = 1) for m steps; checks ||f_m||_D <= 13.5 sigma_m(f0)_D + 1e-9 when m <= 1/(3 M(D)).
inline QogaDnormReport qoga_lebesgue_dnorm_check(const Vector& f0, const Dictionary& dict, std::size_t m,
                                                 const Budgets& budgets = {}) {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  QogaDnormReport rep;
  rep.m = m;
  rep.coherence = coherence(dict);
  if (static_cast<double>(m) * 3.0 * rep.coherence > 1.0) {
    rep.skipped = true;
    rep.skip_reason = "m exceeds 1/(3 M(D))";
    return rep;
  }
  GreedyConfig cfg;
  cfg.weakness_t = 1.0;
  cfg.max_iterations = static_cast<int>(m);
  rep.trace = run_wqoga(f0, dict, cfg);
  rep.residual_d_norm = d_norm(rep.trace.final_residual, dict);
  const BestMTerm best = best_m_term_oracle(f0, dict, m, ApproxNorm::d_norm, budgets);
  rep.sigma = best.sigma;
  rep.best_support = best.support;
  rep.passed = rep.residual_d_norm <= QogaDnormReport::kFactor * rep.sigma + 1e-9;
  return rep;
}

struct Theorem21Row {
  double c = 0.0;
  double nu = 0.0;
  std::size_t n_of_x = 0;
  std::size_t bound = 0;
  bool holds = false;
};

struct Theorem21Report {
  std::size_t sparsity = 0;
  double delta_2k = 0.0;
  std::optional<std::size_t> iterations_to_zero;
  /// Smallest c with iterations_to_zero <= K + 6 N(x, c delta^{1/2} K); +inf if none.
  double c_min = std::numeric_limits<double>::infinity();
  std::vector<Theorem21Row> rows;
};

/// Exploratory: tabulates OMP's iterations to zero residual against K + 6 N(x, c delta_2K^{1/2} K).
inline Theorem21Report theorem21_diagnostic(const Dictionary& dict, const SparseSignal& x,
                                            const std::vector<double>& c_grid, double delta_budget = 1e6,
                                            double zero_tolerance = 1e-9) {
  x.check_against(dict);
  Theorem21Report rep;
  const std::size_t K = x.sparsity();
  rep.sparsity = K;
  Budgets b;
  b.rip_subsets = delta_budget;
  rep.delta_2k = rip_constant_exhaustive(dict, 2 * K, b).delta;

  const Vector f0 = x.synthesize(dict);
  GreedyConfig cfg;
  cfg.max_iterations = static_cast<int>(std::min(dict.dim(), dict.size()));
  cfg.residual_tolerance = zero_tolerance;
  const GreedyTrace trace = run_womp(f0, dict, cfg, x);
  if (trace.residual_norms.back() <= zero_tolerance) rep.iterations_to_zero = trace.iterations();

  const double scale = std::sqrt(rep.delta_2k) * static_cast<double>(K);
  if (rep.iterations_to_zero) {
    const std::size_t iters = *rep.iterations_to_zero;
    const std::size_t need = iters <= K ? 0 : (iters - K + 5) / 6;
    if (need == 0) {
      rep.c_min = 0.0;
    } else if (need <= K && scale > 0.0) {
      std::vector<double> sq(K);
      for (std::size_t i = 0; i < K; ++i) sq[i] = x.coeffs()[static_cast<Eigen::Index>(i)] * x.coeffs()[static_cast<Eigen::Index>(i)];
      std::sort(sq.begin(), sq.end());
      double acc = 0.0;
      for (std::size_t i = 0; i < need; ++i) acc += sq[i];
      rep.c_min = acc / scale;
    }
  }
  for (double c : c_grid) {
    Theorem21Row row;
    row.c = c;
    row.nu = c * scale;
    row.n_of_x = n_of_x(x, row.nu);
    row.bound = K + 6 * row.n_of_x;
    row.holds = rep.iterations_to_zero && *rep.iterations_to_zero <= row.bound;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace sparsegreedy

#pragma once

#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsegreedy/analysis.hpp"
#include "sparsegreedy/experiments.hpp"
#include "sparsegreedy/greedy.hpp"
#include "sparsegreedy/signal.hpp"
#include "sparsegreedy/space.hpp"

namespace sparsegreedy::io {

using nlohmann::json;

/// Reader tolerance on unit atom norms.
inline constexpr double kReaderUnitTolerance = 1e-9;

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline Vector to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Shortest round-trip decimal; NaN/inf become null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------------------
// Dictionary: {"dim", "n_atoms", "p", "atoms": [[column 0], [column 1], ...]}

inline json to_json(const Dictionary& d) {
  json atoms = json::array();
  for (std::size_t j = 0; j < d.size(); ++j) atoms.push_back(to_std(d.atom(j)));
  return json{{"dim", d.dim()}, {"n_atoms", d.size()}, {"p", d.space().p()}, {"atoms", std::move(atoms)}};
}

/// Re-verifies unit norms (within 1e-9) but never renormalizes.
inline Dictionary dictionary_from_json(const json& j) {
  const auto dim = j.at("dim").get<std::size_t>();
  const auto n = j.at("n_atoms").get<std::size_t>();
  const auto p = j.at("p").get<double>();
  const auto& atoms = j.at("atoms");
  if (!atoms.is_array() || atoms.size() != n) {
    throw std::invalid_argument("dictionary: 'atoms' must hold n_atoms columns");
  }
  Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
  for (std::size_t c = 0; c < n; ++c) {
    const auto col = atoms[c].get<std::vector<double>>();
    if (col.size() != dim) throw std::invalid_argument("dictionary: column " + std::to_string(c) + " has wrong length");
    m.col(static_cast<Eigen::Index>(c)) = to_eigen(col);
  }
  return Dictionary::from_normalized(std::move(m), SpaceSpec::make(dim, p), kReaderUnitTolerance);
}

// ---------------------------------------------------------------------------
// SparseSignal: {"support": [0-based indices], "coeffs": [...]}

inline json to_json(const SparseSignal& s) {
  return json{{"support", s.support()}, {"coeffs", to_std(s.coeffs())}};
}

inline SparseSignal signal_from_json(const json& j) {
  return SparseSignal(j.at("support").get<std::vector<std::size_t>>(),
                      to_eigen(j.at("coeffs").get<std::vector<double>>()));
}

// ---------------------------------------------------------------------------
// GreedyTrace, one JSON object per line

inline json to_json(const GreedyTrace& t) {
  json out{{"algorithm", to_string(t.algorithm)},
           {"selected", t.selected},
           {"residual_norms", t.residual_norms},
           {"final_coeffs", to_std(t.final_coeffs)},
           {"stop_reason", to_string(t.stop_reason)}};
  if (t.gamma_sizes) out["gamma_sizes"] = *t.gamma_sizes;
  return out;
}

inline GreedyTrace trace_from_json(const json& j) {
  GreedyTrace t;
  t.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  t.selected = j.at("selected").get<std::vector<std::size_t>>();
  t.residual_norms = j.at("residual_norms").get<std::vector<double>>();
  t.final_coeffs = to_eigen(j.at("final_coeffs").get<std::vector<double>>());
  t.stop_reason = parse_stop_reason(j.at("stop_reason").get<std::string>());
  if (j.contains("gamma_sizes")) t.gamma_sizes = j.at("gamma_sizes").get<std::vector<std::size_t>>();
  return t;
}

// ---------------------------------------------------------------------------
// CertificateReport

inline json to_json(const CertificateReport& r) {
  json rip = json::array();
  for (const auto& e : r.rip) {
    if (e.estimate) {
      rip.push_back({{"S", e.sparsity},
                     {"delta", number(e.estimate->delta)},
                     {"method", to_string(e.estimate->method)},
                     {"trials", e.estimate->trials}});
    } else {
      rip.push_back({{"S", e.sparsity}, {"delta", nullptr}, {"method", "skipped"}, {"trials", 0},
                     {"reason", e.skipped.value_or("")}});
    }
  }
  auto entry = [](const std::optional<CertificateEntry>& e, const char* key) -> json {
    if (!e) return nullptr;
    json out{{key, e->parameter}};
    if (e->value) {
      out["value"] = number(*e->value);
      out["method"] = to_string(e->method);
    } else {
      out["value"] = nullptr;
      out["method"] = "skipped";
      out["reason"] = e->skipped.value_or("");
    }
    return out;
  };
  json out{{"coherence", number(r.coherence)}, {"rip", std::move(rip)}};
  out["c1"] = entry(r.c1, "r");
  out["u"] = entry(r.u, "D");
  if (r.u && out["u"].is_object()) out["u"]["D"] = static_cast<std::size_t>(r.u->parameter);
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo outputs

/// The resolved configuration; thread count is deliberately absent so output is jobs-independent.
inline json to_json(const McConfig& c) {
  json out{{"dim_m", c.dim_m},
           {"n_atoms", c.n_atoms},
           {"sparsity_k", c.sparsity_k},
           {"epsilon", c.epsilon},
           {"epsilon1", c.epsilon1 ? json(*c.epsilon1) : json(nullptr)},
           {"trials", c.trials},
           {"base_seed", c.base_seed},
           {"coefficient_law", to_string(c.coefficient_law)},
           {"dictionary_law", to_string(c.dictionary_law)},
           {"iteration_budget", c.iteration_budget()},
           {"nu_grid", c.nu_grid},
           {"recovery_tolerance", c.recovery_tolerance},
           {"seed_mixing", "splitmix64(base_seed ^ splitmix64(trial))"}};
  return out;
}

inline constexpr const char* kTrialCsvHeader = "trial,seed,recovered,iterations_to_zero,gamma_k,n_of_x,residual_final";

/// Doubles printed with max_digits10 so the CSV round-trips.
inline void write_trial_csv(std::ostream& os, const McResult& res) {
  os << kTrialCsvHeader << '\n';
  std::ostringstream num;
  num << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : res.records) {
    os << r.trial << ',' << r.seed << ',' << (r.recovered ? 1 : 0) << ',';
    if (r.iterations_to_zero) os << *r.iterations_to_zero;
    os << ',' << r.gamma_k << ',';
    for (std::size_t i = 0; i < r.n_of_x.size(); ++i) os << (i ? ";" : "") << r.n_of_x[i];
    num.str("");
    num << r.residual_final;
    os << ',' << num.str() << '\n';
  }
}

inline json aggregate_json(const McResult& res) {
  json out{{"config", to_json(res.config)},
           {"frequency", res.frequency},
           {"ci95", {res.ci95.lo, res.ci95.hi}},
           {"recovered", res.recovered},
           {"trials", res.config.trials}};
  if (res.config.dictionary_law == DictionaryLaw::gaussian_normalized) out["note"] = kGaussianDictionaryNote;
  return out;
}

// ---------------------------------------------------------------------------
// Files

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

inline Dictionary read_dictionary(const std::string& path) { return dictionary_from_json(read_json_file(path)); }
inline SparseSignal read_signal(const std::string& path) { return signal_from_json(read_json_file(path)); }

}  // namespace sparsegreedy::io

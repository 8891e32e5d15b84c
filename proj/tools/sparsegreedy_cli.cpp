// sparsegreedy: dictionary generation and certification, greedy runs, Monte Carlo sweeps and
// Lebesgue-type checks.
//
// Exit codes: 0 success, 1 a check's inequality failed, 2 usage or input error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsegreedy.hpp"

namespace sg = sparsegreedy;
using sg::io::json;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    sg::io::write_text_file(path, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <typename T>
T require(const std::optional<T>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required flag ") + flag);
  return *v;
}

// ---------------------------------------------------------------------------

struct GenDictArgs {
  std::size_t dim = 0;
  std::size_t n = 0;
  double p = 2.0;
  std::optional<std::uint64_t> seed;
  std::string law = "gaussian";
  std::string out;
};

int cmd_gen_dict(const GenDictArgs& a) {
  const auto space = sg::SpaceSpec::make(a.dim, a.p);
  std::optional<sg::Dictionary> dict;
  if (a.law == "identity") {
    if (a.n != a.dim) throw UsageError("identity law needs --n equal to --dim");
    dict = sg::normalize_dictionary(sg::Matrix::Identity(static_cast<Eigen::Index>(a.dim), static_cast<Eigen::Index>(a.n)), space);
  } else if (a.law == "gaussian") {
    std::mt19937_64 rng(require(a.seed, "--seed"));
    dict = sg::gaussian_dictionary(a.dim, a.n, space, rng);
  } else {
    throw UsageError("unknown --law '" + a.law + "' (gaussian | identity)");
  }
  json j = sg::io::to_json(*dict);
  j["config"] = {{"command", "gen-dict"}, {"dim", a.dim}, {"n", a.n}, {"p", a.p}, {"law", a.law},
                 {"seed", a.seed ? json(*a.seed) : json(nullptr)}};
  emit(a.out, dump(j));
  return 0;
}

// ---------------------------------------------------------------------------

struct GenSignalArgs {
  std::optional<std::size_t> n;
  std::string dict_path;
  std::size_t k = 1;
  std::string law = "uniform";
  std::optional<double> eps1;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_gen_signal(const GenSignalArgs& a) {
  std::size_t n = 0;
  if (!a.dict_path.empty()) {
    n = sg::io::read_dictionary(a.dict_path).size();
  } else {
    n = require(a.n, "--n or --dict");
  }
  if (a.k < 1 || a.k > n) throw UsageError("--k must lie in [1, n_atoms]");
  const auto law = sg::parse_coefficient_law(a.law);
  if (law == sg::CoefficientLaw::uniform_floor && !(a.eps1 && *a.eps1 > 0.0 && *a.eps1 < 1.0)) {
    throw UsageError("floor law needs --eps1 in (0, 1)");
  }
  std::mt19937_64 rng(require(a.seed, "--seed"));
  auto support = sg::detail::draw_support(n, a.k, rng);
  auto coeffs = sg::detail::draw_coefficients(a.k, law, a.eps1, rng);
  sg::SparseSignal s(std::move(support), std::move(coeffs));
  json j = sg::io::to_json(s);
  j["config"] = {{"command", "gen-signal"}, {"n_atoms", n}, {"k", a.k}, {"law", sg::to_string(law)},
                 {"eps1", a.eps1 ? json(*a.eps1) : json(nullptr)}, {"seed", *a.seed}};
  emit(a.out, dump(j));
  return 0;
}

// ---------------------------------------------------------------------------

struct CertifyArgs {
  std::string dict_path;
  std::string signal_path;
  std::vector<std::size_t> rip_s;
  std::string method = "exhaustive";
  std::uint64_t trials = 1000;
  std::optional<std::uint64_t> seed;
  std::optional<double> a1_r;
  std::optional<std::size_t> a2_d;
  double budget_rip = 1e6;
  double budget_a1 = 1e6;
  double budget_a2 = 1e5;
  std::string out;
};

int cmd_certify(const CertifyArgs& a) {
  const auto dict = sg::io::read_dictionary(a.dict_path);
  sg::Budgets budgets;
  budgets.rip_subsets = a.budget_rip;
  budgets.nikolskii_subsets = a.budget_a1;
  budgets.incoherence_pairs = a.budget_a2;
  if (a.method != "exhaustive" && a.method != "sampled") throw UsageError("--method must be exhaustive or sampled");
  if (a.method == "sampled" && !a.rip_s.empty()) require(a.seed, "--seed (sampled RIP)");
  if ((a.a1_r || a.a2_d) && a.signal_path.empty()) throw UsageError("--a1-r/--a2-d need --signal");

  sg::CertificateReport rep;
  rep.coherence = dict.size() >= 2 ? sg::coherence(dict) : 0.0;
  for (std::size_t S : a.rip_s) {
    sg::RipEntry e;
    e.sparsity = S;
    if (!dict.space().is_hilbert()) {
      e.skipped = "RIP requires p = 2";
      rep.rip.push_back(std::move(e));
      continue;
    }
    try {
      e.estimate = a.method == "exhaustive" ? sg::rip_constant_exhaustive(dict, S, budgets)
                                            : sg::rip_lower_bound_sampled(dict, S, a.trials, *a.seed);
    } catch (const sg::BudgetExceeded& ex) {
      e.skipped = ex.what();
    }
    rep.rip.push_back(std::move(e));
  }
  std::optional<sg::SparseSignal> signal;
  if (!a.signal_path.empty()) signal = sg::io::read_signal(a.signal_path);
  if (a.a1_r) {
    sg::CertificateEntry e;
    e.parameter = *a.a1_r;
    try {
      e.value = sg::nikolskii_constant(*signal, dict, *a.a1_r, budgets);
    } catch (const sg::BudgetExceeded& ex) {
      e.skipped = ex.what();
    }
    rep.c1 = e;
  }
  if (a.a2_d) {
    sg::CertificateEntry e;
    e.parameter = static_cast<double>(*a.a2_d);
    try {
      e.value = sg::incoherence_constant(*signal, dict, *a.a2_d, budgets);
    } catch (const sg::BudgetExceeded& ex) {
      e.skipped = ex.what();
    }
    rep.u = e;
  }
  json j = sg::io::to_json(rep);
  j["config"] = {{"command", "certify"},
                 {"dict", a.dict_path},
                 {"signal", a.signal_path},
                 {"rip_s", a.rip_s},
                 {"method", a.method},
                 {"trials", a.trials},
                 {"seed", a.seed ? json(*a.seed) : json(nullptr)},
                 {"a1_r", a.a1_r ? json(*a.a1_r) : json(nullptr)},
                 {"a2_d", a.a2_d ? json(*a.a2_d) : json(nullptr)},
                 {"budgets", {{"rip", a.budget_rip}, {"a1", a.budget_a1}, {"a2", a.budget_a2}}}};
  emit(a.out, dump(j));
  return 0;
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string alg = "wcga";
  std::string dict_path;
  std::string signal_path;
  std::optional<double> p;
  double t = 1.0;
  std::optional<int> max_iter;
  double tol = 1e-10;
  std::string out;
};

int cmd_run(const RunArgs& a) {
  const auto dict = sg::io::read_dictionary(a.dict_path);
  if (a.p && *a.p != dict.space().p()) {
    throw UsageError("--p " + std::to_string(*a.p) + " does not match the dictionary's p");
  }
  const auto signal = sg::io::read_signal(a.signal_path);
  const auto alg = sg::parse_algorithm(a.alg);
  sg::GreedyConfig cfg;
  cfg.weakness_t = a.t;
  cfg.max_iterations = a.max_iter.value_or(static_cast<int>(std::min(dict.size(), dict.dim())));
  cfg.residual_tolerance = a.tol;
  const auto trace = sg::run_greedy(alg, signal.synthesize(dict), dict, cfg, signal);
  json j = sg::io::to_json(trace);
  j["config"] = {{"command", "run"}, {"alg", a.alg}, {"dict", a.dict_path}, {"signal", a.signal_path},
                 {"p", dict.space().p()}, {"t", a.t}, {"max_iter", cfg.max_iterations}, {"tol", a.tol}};
  emit(a.out, j.dump() + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct McArgs {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double eps = 0.5;
  std::optional<double> eps1;
  std::uint64_t trials = 100;
  std::optional<std::uint64_t> seed;
  std::string law = "uniform";
  std::string dict_law = "gaussian";
  std::string dict_path;
  std::vector<double> nu;
  unsigned jobs = 1;
  std::string out = "mc";
  std::string out_csv;
  std::string out_json;
};

int cmd_mc(const McArgs& a) {
  sg::McConfig cfg;
  cfg.dim_m = a.m;
  cfg.n_atoms = a.n;
  cfg.sparsity_k = a.k;
  cfg.epsilon = a.eps;
  cfg.epsilon1 = a.eps1;
  cfg.trials = a.trials;
  cfg.base_seed = require(a.seed, "--seed");
  cfg.coefficient_law = sg::parse_coefficient_law(a.law);
  cfg.dictionary_law = sg::parse_dictionary_law(a.dict_law);
  if (cfg.dictionary_law == sg::DictionaryLaw::from_file) {
    if (a.dict_path.empty()) throw UsageError("--dict-law file needs --dict");
    cfg.dictionary = std::make_shared<const sg::Dictionary>(sg::io::read_dictionary(a.dict_path));
    if (cfg.dim_m == 0) cfg.dim_m = cfg.dictionary->dim();
    if (cfg.n_atoms == 0) cfg.n_atoms = cfg.dictionary->size();
  }
  if (!a.nu.empty()) cfg.nu_grid = a.nu;
  cfg.validate();
  const auto res = sg::mc_recovery(cfg, a.jobs);
  std::ostringstream csv;
  sg::io::write_trial_csv(csv, res);
  json agg = sg::io::aggregate_json(res);
  agg["config"]["command"] = "mc";
  if (!a.dict_path.empty()) agg["config"]["dict"] = a.dict_path;
  emit(a.out_csv.empty() ? a.out + ".csv" : a.out_csv, csv.str());
  emit(a.out_json.empty() ? a.out + ".json" : a.out_json, dump(agg));
  return 0;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string kind;
  std::string dict_path;
  std::string signal_path;
  std::string f0_path;
  double t = 1.0;
  double r = 0.5;
  std::size_t d = 12;
  double big_c = 1.0;
  std::optional<double> ratio_bound;
  std::size_t m = 1;
  std::vector<double> c_grid{0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
  int max_iter = 1000;
  double tol = 1e-12;
  std::string out;
};

json trace_summary(const sg::GreedyTrace& t) { return sg::io::to_json(t); }

int cmd_check(const CheckArgs& a) {
  const auto dict = sg::io::read_dictionary(a.dict_path);
  std::optional<sg::SparseSignal> signal;
  if (!a.signal_path.empty()) signal = sg::io::read_signal(a.signal_path);
  sg::Vector f0;
  if (!a.f0_path.empty()) {
    f0 = sg::io::to_eigen(sg::io::read_json_file(a.f0_path).at("f0").get<std::vector<double>>());
  } else if (signal) {
    f0 = signal->synthesize(dict);
  }
  if (a.kind != "qoga-dnorm" && !signal) throw UsageError("check " + a.kind + " needs --signal");
  if (a.kind == "qoga-dnorm" && f0.size() == 0) throw UsageError("check qoga-dnorm needs --signal or --f0");

  sg::GreedyConfig cfg;
  cfg.weakness_t = a.t;
  cfg.max_iterations = a.max_iter;
  cfg.residual_tolerance = a.tol;

  json j;
  bool passed = true;
  if (a.kind == "decay") {
    const auto rep = sg::decay_check(f0, dict, *signal, cfg, a.r, a.d);
    passed = rep.passed();
    j = {{"check", "decay"},          {"c1", sg::io::number(rep.c1_nikolskii)}, {"u", sg::io::number(rep.u)},
         {"gamma", rep.gamma},        {"rate_c1", rep.rate},                    {"r", rep.r},
         {"K", rep.sparsity},         {"D", rep.depth},                         {"epsilon", rep.epsilon},
         {"pairs_checked", rep.pairs_checked}, {"violations", rep.violations},
         {"tightest_margin", sg::io::number(rep.tightest_margin)}, {"trace", trace_summary(rep.trace)}};
  } else if (a.kind == "lebesgue") {
    const auto rep = sg::lebesgue_check(f0, dict, *signal, cfg, a.r, a.big_c, a.d, a.ratio_bound);
    passed = rep.passed;
    j = {{"check", "lebesgue"}, {"c1", sg::io::number(rep.c1_nikolskii)}, {"u", rep.u},
         {"K", rep.sparsity},   {"r", rep.r},                              {"big_c", rep.big_c},
         {"m_star", rep.m_star}, {"epsilon", rep.epsilon},                 {"final_norm", rep.final_norm},
         {"ratio", rep.ratio ? json(*rep.ratio) : json(nullptr)},
         {"ratio_bound", rep.ratio_bound ? json(*rep.ratio_bound) : json(nullptr)},
         {"exact_required", rep.exact_required}, {"trace", trace_summary(rep.trace)}};
  } else if (a.kind == "qoga-dnorm") {
    const auto rep = sg::qoga_lebesgue_dnorm_check(f0, dict, a.m);
    passed = rep.passed;
    j = {{"check", "qoga-dnorm"}, {"coherence", rep.coherence}, {"m", rep.m}, {"skipped", rep.skipped}};
    if (rep.skipped) {
      j["reason"] = rep.skip_reason;
    } else {
      j["residual_d_norm"] = rep.residual_d_norm;
      j["sigma_m_d"] = rep.sigma;
      j["best_support"] = rep.best_support;
      j["factor"] = sg::QogaDnormReport::kFactor;
      j["trace"] = trace_summary(rep.trace);
    }
  } else if (a.kind == "thm21") {
    const auto rep = sg::theorem21_diagnostic(dict, *signal, a.c_grid);
    json rows = json::array();
    for (const auto& r : rep.rows) {
      rows.push_back({{"c", r.c}, {"nu", r.nu}, {"n_of_x", r.n_of_x}, {"bound", r.bound}, {"holds", r.holds}});
    }
    j = {{"check", "thm21"},
         {"K", rep.sparsity},
         {"delta_2k", rep.delta_2k},
         {"iterations_to_zero", rep.iterations_to_zero ? json(*rep.iterations_to_zero) : json(nullptr)},
         {"c_min", sg::io::number(rep.c_min)},
         {"rows", std::move(rows)},
         {"note", "exploratory: the absolute constant is not computable, so no assertion is made"}};
  } else {
    throw UsageError("unknown check '" + a.kind + "' (decay | lebesgue | qoga-dnorm | thm21)");
  }
  j["passed"] = passed;
  j["config"] = {{"command", "check"}, {"kind", a.kind}, {"dict", a.dict_path}, {"signal", a.signal_path},
                 {"f0", a.f0_path}, {"t", a.t}, {"r", a.r}, {"D", a.d}, {"big_c", a.big_c},
                 {"m", a.m}, {"c_grid", a.c_grid}, {"max_iter", a.max_iter}, {"tol", a.tol}};
  emit(a.out, dump(j));
  return passed ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy sparse approximation in l_p: WOMP, WCGA, WQOGA, certifiers and experiments"};
  app.require_subcommand(1);

  GenDictArgs gd;
  auto* gen_dict = app.add_subcommand("gen-dict", "write a normalized dictionary as JSON");
  gen_dict->add_option("--dim", gd.dim, "ambient dimension M")->required();
  gen_dict->add_option("--n", gd.n, "number of atoms N")->required();
  gen_dict->add_option("--p", gd.p, "exponent p >= 2");
  gen_dict->add_option("--seed", gd.seed, "RNG seed (gaussian law)");
  gen_dict->add_option("--law", gd.law, "gaussian | identity");
  gen_dict->add_option("--out", gd.out, "output path (default stdout)");

  GenSignalArgs gs;
  auto* gen_signal = app.add_subcommand("gen-signal", "write a random K-sparse signal as JSON");
  gen_signal->add_option("--n", gs.n, "number of atoms N");
  gen_signal->add_option("--dict", gs.dict_path, "take N from this dictionary");
  gen_signal->add_option("--k", gs.k, "sparsity K")->required();
  gen_signal->add_option("--law", gs.law, "uniform | rademacher | floor");
  gen_signal->add_option("--eps1", gs.eps1, "coefficient floor for the floor law");
  gen_signal->add_option("--seed", gs.seed, "RNG seed");
  gen_signal->add_option("--out", gs.out, "output path (default stdout)");

  CertifyArgs ce;
  auto* certify = app.add_subcommand("certify", "measure coherence, RIP, C1 and U");
  certify->add_option("--dict", ce.dict_path)->required();
  certify->add_option("--signal", ce.signal_path);
  certify->add_option("--rip-s", ce.rip_s, "sparsity levels for delta_S");
  certify->add_option("--method", ce.method, "exhaustive | sampled");
  certify->add_option("--trials", ce.trials, "sampled supports");
  certify->add_option("--seed", ce.seed);
  certify->add_option("--a1-r", ce.a1_r, "Nikol'skii parameter r");
  certify->add_option("--a2-d", ce.a2_d, "incoherence depth D");
  certify->add_option("--budget-rip", ce.budget_rip);
  certify->add_option("--budget-a1", ce.budget_a1);
  certify->add_option("--budget-a2", ce.budget_a2);
  certify->add_option("--out", ce.out);

  RunArgs ru;
  auto* run = app.add_subcommand("run", "run one greedy pursuit and emit a JSON-lines trace");
  run->add_option("--alg", ru.alg, "womp | wcga | wqoga");
  run->add_option("--dict", ru.dict_path)->required();
  run->add_option("--signal", ru.signal_path)->required();
  run->add_option("--p", ru.p, "must match the dictionary's p");
  run->add_option("--t", ru.t, "weakness parameter in (0, 1]");
  run->add_option("--max-iter", ru.max_iter);
  run->add_option("--tol", ru.tol, "stop when the residual norm is at most this");
  run->add_option("--out", ru.out);

  McArgs mc;
  auto* mcs = app.add_subcommand("mc", "Monte Carlo OMP recovery sweep");
  mcs->add_option("--m", mc.m, "dimension M");
  mcs->add_option("--n", mc.n, "atoms N");
  mcs->add_option("--k", mc.k, "sparsity K")->required();
  mcs->add_option("--eps", mc.eps, "iteration budget ceil(K(1+eps))");
  mcs->add_option("--eps1", mc.eps1, "coefficient floor");
  mcs->add_option("--trials", mc.trials);
  mcs->add_option("--seed", mc.seed, "base seed");
  mcs->add_option("--law", mc.law, "uniform | rademacher | floor");
  mcs->add_option("--dict-law", mc.dict_law, "gaussian | file");
  mcs->add_option("--dict", mc.dict_path);
  mcs->add_option("--nu", mc.nu, "nu grid for N(x, nu)");
  mcs->add_option("--jobs", mc.jobs, "worker threads");
  mcs->add_option("--out", mc.out, "output prefix for <prefix>.csv and <prefix>.json");
  mcs->add_option("--out-csv", mc.out_csv);
  mcs->add_option("--out-json", mc.out_json);

  CheckArgs ck;
  auto* check = app.add_subcommand("check", "decay | lebesgue | qoga-dnorm | thm21");
  check->add_option("kind", ck.kind)->required();
  check->add_option("--dict", ck.dict_path)->required();
  check->add_option("--signal", ck.signal_path);
  check->add_option("--f0", ck.f0_path, "JSON {\"f0\": [...]} overriding Phi x");
  check->add_option("--t", ck.t);
  check->add_option("--r", ck.r);
  check->add_option("--d", ck.d, "incoherence depth D");
  check->add_option("--big-c", ck.big_c);
  check->add_option("--ratio-bound", ck.ratio_bound);
  check->add_option("--m", ck.m);
  check->add_option("--c-grid", ck.c_grid);
  check->add_option("--max-iter", ck.max_iter);
  check->add_option("--tol", ck.tol);
  check->add_option("--out", ck.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_dict->parsed()) return cmd_gen_dict(gd);
    if (gen_signal->parsed()) return cmd_gen_signal(gs);
    if (certify->parsed()) return cmd_certify(ce);
    if (run->parsed()) return cmd_run(ru);
    if (mcs->parsed()) return cmd_mc(mc);
    if (check->parsed()) return cmd_check(ck);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

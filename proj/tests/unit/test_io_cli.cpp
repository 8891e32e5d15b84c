#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "sparsegreedy.hpp"

namespace sg = sparsegreedy;
namespace fs = std::filesystem;
using sg::io::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Scratch {
public:
  Scratch() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("sparsegreedy_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string operator/(const std::string& name) const { return (dir_ / name).string(); }

private:
  fs::path dir_;
};

int cli(const std::string& args) {
  const std::string cmd = std::string(SPARSEGREEDY_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Serialization

TEST(Io, DictionaryRoundTripIsExact) {
  std::mt19937_64 rng(1);
  const auto d = gen::gaussian_dict(5, 7, 3.0, rng);
  const auto back = sg::io::dictionary_from_json(json::parse(sg::io::to_json(d).dump()));
  EXPECT_TRUE(back.atoms() == d.atoms());
  EXPECT_EQ(back.space().p(), 3.0);
}

TEST(Io, DictionaryReaderVerifiesNorms) {
  json j = sg::io::to_json(gen::identity_dict(3));
  j["atoms"][1][1] = 1.0 + 5e-10;
  EXPECT_NO_THROW(sg::io::dictionary_from_json(j));
  j["atoms"][1][1] = 1.0 + 1e-8;
  EXPECT_THROW(sg::io::dictionary_from_json(j), std::invalid_argument);
  j = sg::io::to_json(gen::identity_dict(3));
  j["atoms"][0] = json::array({1.0, 0.0});
  EXPECT_THROW(sg::io::dictionary_from_json(j), std::invalid_argument);
}

TEST(Io, SignalAndTraceRoundTrip) {
  const sg::SparseSignal x({4, 1}, (sg::Vector(2) << 0.1, -0.7).finished());
  const auto xb = sg::io::signal_from_json(json::parse(sg::io::to_json(x).dump()));
  EXPECT_EQ(xb.support(), (std::vector<std::size_t>{1, 4}));
  EXPECT_TRUE(xb.coeffs() == x.coeffs());

  std::mt19937_64 rng(2);
  const auto d = gen::gaussian_dict(8, 10, 2.0, rng);
  sg::GreedyConfig cfg;
  cfg.max_iterations = 4;
  const auto tr = sg::run_wcga(gen::gaussian_vector(8, rng), d, cfg, x);
  const auto back = sg::io::trace_from_json(json::parse(sg::io::to_json(tr).dump()));
  EXPECT_EQ(back.selected, tr.selected);
  EXPECT_EQ(back.residual_norms, tr.residual_norms);
  EXPECT_EQ(back.gamma_sizes, tr.gamma_sizes);
  EXPECT_TRUE(back.final_coeffs == tr.final_coeffs);
  EXPECT_EQ(back.stop_reason, tr.stop_reason);
}

TEST(Io, SkippedCertificateEntries) {
  sg::CertificateReport rep;
  rep.coherence = 0.25;
  sg::RipEntry e;
  e.sparsity = 3;
  e.skipped = "budget";
  rep.rip.push_back(e);
  const json j = sg::io::to_json(rep);
  EXPECT_EQ(j["rip"][0]["method"], "skipped");
  EXPECT_TRUE(j["rip"][0]["delta"].is_null());
  EXPECT_TRUE(j["c1"].is_null());
}

TEST(Io, TrialCsvShape) {
  sg::McConfig c;
  c.dim_m = 16;
  c.n_atoms = 32;
  c.sparsity_k = 3;
  c.trials = 5;
  c.base_seed = 9;
  std::ostringstream os;
  sg::io::write_trial_csv(os, sg::mc_recovery(c));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial,seed,recovered,iterations_to_zero,gamma_k,n_of_x,residual_final");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6);
    ++rows;
  }
  EXPECT_EQ(rows, 5);
}

// ---------------------------------------------------------------------------
// CLI

TEST(Cli, GenDictDeterministicAndIdentity) {
  Scratch s;
  ASSERT_EQ(cli("gen-dict --dim 8 --n 16 --p 2 --seed 7 --law gaussian --out " + (s / "a.json")), 0);
  ASSERT_EQ(cli("gen-dict --dim 8 --n 16 --p 2 --seed 7 --law gaussian --out " + (s / "b.json")), 0);
  EXPECT_EQ(slurp(s / "a.json"), slurp(s / "b.json"));

  ASSERT_EQ(cli("gen-dict --law identity --dim 4 --n 4 --out " + (s / "i.json")), 0);
  const auto d = sg::io::read_dictionary(s / "i.json");
  EXPECT_TRUE(d.atoms() == sg::Matrix::Identity(4, 4));
}

TEST(Cli, RejectsPBelowTwo) {
  Scratch s;
  const std::string cmd = std::string(SPARSEGREEDY_CLI_PATH) + " gen-dict --dim 4 --n 4 --p 1.5 --seed 1 --law gaussian 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  char buf[256];
  while (fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_NE(out.find("p must be >= 2"), std::string::npos) << out;
}

TEST(Cli, CertifyMatchesLibrary) {
  Scratch s;
  ASSERT_EQ(cli("gen-dict --dim 8 --n 16 --p 2 --seed 3 --out " + (s / "d.json")), 0);
  ASSERT_EQ(cli("gen-signal --dict " + (s / "d.json") + " --k 3 --seed 4 --out " + (s / "x.json")), 0);
  ASSERT_EQ(cli("certify --dict " + (s / "d.json") + " --signal " + (s / "x.json") +
                " --rip-s 2 --method exhaustive --a2-d 6 --a1-r 0.5 --out " + (s / "c.json")),
            0);
  const json j = sg::io::read_json_file(s / "c.json");
  const auto d = sg::io::read_dictionary(s / "d.json");
  const auto x = sg::io::read_signal(s / "x.json");
  EXPECT_EQ(j["rip"][0]["delta"].get<double>(), sg::rip_constant_exhaustive(d, 2).delta);
  EXPECT_EQ(j["coherence"].get<double>(), sg::coherence(d));
  EXPECT_EQ(j["u"]["value"].get<double>(), sg::incoherence_constant(x, d, 6));
  EXPECT_EQ(j["u"]["method"], "exhaustive");
  EXPECT_TRUE(j.contains("config"));
}

TEST(Cli, CertifyIdentity) {
  Scratch s;
  ASSERT_EQ(cli("gen-dict --law identity --dim 6 --n 6 --out " + (s / "d.json")), 0);
  ASSERT_EQ(cli("gen-signal --n 6 --k 2 --seed 1 --out " + (s / "x.json")), 0);
  ASSERT_EQ(cli("certify --dict " + (s / "d.json") + " --signal " + (s / "x.json") +
                " --rip-s 1 --rip-s 3 --a2-d 4 --out " + (s / "c.json")),
            0);
  const json j = sg::io::read_json_file(s / "c.json");
  EXPECT_EQ(j["coherence"].get<double>(), 0.0);
  for (const auto& e : j["rip"]) EXPECT_NEAR(e["delta"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(j["u"]["value"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, CertifyBudgetOverrunIsSkippedNotFatal) {
  Scratch s;
  ASSERT_EQ(cli("gen-dict --dim 20 --n 40 --p 2 --seed 3 --out " + (s / "d.json")), 0);
  ASSERT_EQ(cli("certify --dict " + (s / "d.json") + " --rip-s 2 --rip-s 6 --budget-rip 1000 --out " + (s / "c.json")), 0);
  const json j = sg::io::read_json_file(s / "c.json");
  EXPECT_EQ(j["rip"][0]["method"], "exhaustive");
  EXPECT_EQ(j["rip"][1]["method"], "skipped");
  EXPECT_TRUE(j["rip"][1]["delta"].is_null());
}

TEST(Cli, RunEmitsMonotoneTrace) {
  Scratch s;
  ASSERT_EQ(cli("gen-dict --dim 10 --n 20 --p 4 --seed 3 --out " + (s / "d.json")), 0);
  ASSERT_EQ(cli("gen-signal --n 20 --k 3 --seed 4 --out " + (s / "x.json")), 0);
  ASSERT_EQ(cli("run --alg wcga --p 4 --t 1 --dict " + (s / "d.json") + " --signal " + (s / "x.json") +
                " --out " + (s / "t.jsonl")),
            0);
  std::ifstream in(s / "t.jsonl");
  std::string line;
  std::getline(in, line);
  const json j = json::parse(line);
  const auto norms = j["residual_norms"].get<std::vector<double>>();
  for (std::size_t m = 1; m < norms.size(); ++m) EXPECT_LE(norms[m], norms[m - 1] + 1e-10);
  EXPECT_EQ(j["config"]["alg"], "wcga");
}

TEST(Cli, McShapeContract) {
  Scratch s;
  ASSERT_EQ(cli("mc --m 64 --n 128 --k 8 --eps 0.5 --trials 100 --seed 1 --out " + (s / "mc")), 0);
  const std::string csv = slurp(s / "mc.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
  const json agg = sg::io::read_json_file(s / "mc.json");
  EXPECT_EQ(agg["trials"], 100);
  EXPECT_EQ(agg["ci95"].size(), 2u);
  EXPECT_EQ(agg["config"]["base_seed"], 1);
}

TEST(Cli, McJobsByteIdentical) {
  Scratch s;
  ASSERT_EQ(cli("mc --m 32 --n 64 --k 5 --trials 40 --seed 11 --jobs 1 --out " + (s / "a")), 0);
  ASSERT_EQ(cli("mc --m 32 --n 64 --k 5 --trials 40 --seed 11 --jobs 8 --out " + (s / "b")), 0);
  EXPECT_EQ(slurp(s / "a.csv"), slurp(s / "b.csv"));
  EXPECT_EQ(slurp(s / "a.json"), slurp(s / "b.json"));
}

TEST(Cli, CheckDecayOnCertifiedInstance) {
  Scratch s;
  ASSERT_EQ(cli("gen-dict --law identity --dim 10 --n 10 --p 4 --out " + (s / "d.json")), 0);
  ASSERT_EQ(cli("gen-signal --n 10 --k 3 --seed 2 --out " + (s / "x.json")), 0);
  EXPECT_EQ(cli("check decay --r 0.5 --d 8 --dict " + (s / "d.json") + " --signal " + (s / "x.json") +
                " --out " + (s / "r.json")),
            0);
  EXPECT_TRUE(sg::io::read_json_file(s / "r.json")["passed"].get<bool>());
}

TEST(Cli, ExitCodeMatrix) {
  Scratch s;
  ASSERT_EQ(cli("gen-dict --law identity --dim 8 --n 8 --out " + (s / "d.json")), 0);
  ASSERT_EQ(cli("gen-signal --n 8 --k 3 --seed 5 --out " + (s / "x.json")), 0);
  std::ofstream(s / "bad.json") << "{ not json";
  std::ofstream(s / "noise.json") << R"({"f0": [1, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3]})";

  // valid
  EXPECT_EQ(cli("check qoga-dnorm --m 2 --dict " + (s / "d.json") + " --signal " + (s / "x.json")), 0);
  EXPECT_EQ(cli("check thm21 --dict " + (s / "d.json") + " --signal " + (s / "x.json")), 0);
  EXPECT_EQ(cli("check lebesgue --big-c 1 --d 6 --dict " + (s / "d.json") + " --signal " + (s / "x.json")), 0);

  // failing check: the noisy f0 leaves a residual far above the requested ratio bound
  EXPECT_EQ(cli("check lebesgue --big-c 0.1 --d 6 --ratio-bound 0.01 --dict " + (s / "d.json") + " --signal " +
                (s / "x.json") + " --f0 " + (s / "noise.json")),
            1);

  // usage and input errors
  EXPECT_EQ(cli(""), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
  EXPECT_EQ(cli("gen-dict --dim 4 --n 4 --law gaussian"), 2);  // missing seed
  EXPECT_EQ(cli("gen-signal --n 8 --k 3"), 2);                 // missing seed
  EXPECT_EQ(cli("mc --m 16 --n 32 --k 2 --trials 3"), 2);      // missing seed
  EXPECT_EQ(cli("gen-dict --law identity --dim 4 --n 5"), 2);
  EXPECT_EQ(cli("run --dict " + (s / "bad.json") + " --signal " + (s / "x.json")), 2);
  EXPECT_EQ(cli("run --dict " + (s / "missing.json") + " --signal " + (s / "x.json")), 2);
  EXPECT_EQ(cli("run --alg nope --dict " + (s / "d.json") + " --signal " + (s / "x.json")), 2);
  EXPECT_EQ(cli("run --p 3 --dict " + (s / "d.json") + " --signal " + (s / "x.json")), 2);
  EXPECT_EQ(cli("check sideways --dict " + (s / "d.json") + " --signal " + (s / "x.json")), 2);
  EXPECT_EQ(cli("gen-dict --dim 4 --n 4 --seed 1 --out /nonexistent_dir/x.json"), 2);
}

TEST(Cli, PipelineNeverRenormalizes) {
  Scratch s;
  ASSERT_EQ(cli("gen-dict --dim 6 --n 9 --p 3 --seed 2 --out " + (s / "d.json")), 0);
  const std::string before = slurp(s / "d.json");
  ASSERT_EQ(cli("gen-signal --dict " + (s / "d.json") + " --k 2 --seed 3 --out " + (s / "x.json")), 0);
  ASSERT_EQ(cli("certify --dict " + (s / "d.json") + " --signal " + (s / "x.json") + " --a1-r 0.5 --out " + (s / "c.json")), 0);
  ASSERT_EQ(cli("run --dict " + (s / "d.json") + " --signal " + (s / "x.json") + " --out " + (s / "t.jsonl")), 0);
  EXPECT_EQ(slurp(s / "d.json"), before);
  const auto j = sg::io::read_json_file(s / "d.json");
  const auto d = sg::io::read_dictionary(s / "d.json");
  for (std::size_t c = 0; c < d.size(); ++c) {
    const auto col = j["atoms"][c].get<std::vector<double>>();
    for (std::size_t i = 0; i < col.size(); ++i) {
      EXPECT_EQ(d.atoms()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)), col[i]);
    }
  }
}

// Recover a 3-sparse signal in l_4 with WCGA and print the residual trail.

#include <iostream>
#include <random>

#include "sparsegreedy.hpp"

int main() {
  namespace sg = sparsegreedy;
  const auto space = sg::SpaceSpec::make(32, 4.0);
  std::mt19937_64 rng(7);
  const auto dict = sg::gaussian_dictionary(32, 48, space, rng);
  const sg::SparseSignal x({3, 17, 40}, (sg::Vector(3) << 1.0, -0.6, 0.8).finished());
  const sg::Vector f0 = x.synthesize(dict);

  sg::GreedyConfig cfg;
  cfg.max_iterations = 10;
  cfg.residual_tolerance = 1e-10;
  const auto trace = sg::run_wcga(f0, dict, cfg, x);

  for (std::size_t m = 0; m < trace.residual_norms.size(); ++m) {
    std::cout << "m=" << m << "  ||f_m||_4=" << trace.residual_norms[m];
    if (m > 0) std::cout << "  picked " << trace.selected[m - 1];
    std::cout << '\n';
  }
  std::cout << "stop: " << sg::to_string(trace.stop_reason) << '\n';
}

// Optimal readout of the Grover-parameterized cursor machine for a range of
// word lengths, with the entropy left in the register and its reset cost.

#include <cstdio>

#include "cursorqc/cursorqc.hpp"

int main() {
  using namespace cursorqc;
  std::printf("%3s %6s %10s %10s %10s %12s %14s\n", "mu", "s", "tau", "p_target", "lambda2", "S [nats]",
              "heat@300K [J]");
  for (unsigned mu = 2; mu <= 8; ++mu) {
    const auto p = grover_params(mu);
    const auto opt = optimal_tau(p);
    const auto a = amplitude(build_spectrum(p.s, p.lambda), opt.tau);
    const auto b = bloch_at(p, a);
    const auto eig = reduced_eigensystem(b);
    const double entropy = entropy_closed(b);
    std::printf("%3u %6zu %10.4f %10.6f %10.6f %12.6f %14.6e\n", mu, p.s, opt.tau, opt.p_max, eig.lambda2, entropy,
                landauer_cost(entropy, 1, 300.0));
  }
}

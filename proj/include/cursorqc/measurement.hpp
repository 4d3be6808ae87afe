#pragma once

// Reading the qubit register with the projector (I + sigma3)/2 and what the
// readout does to the cursor: post-measurement position profiles and energy
// distributions in the machine's energy eigenbasis.

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "cursorqc/cursor_kernel.hpp"
#include "cursorqc/machine.hpp"
#include "cursorqc/qubit_grover.hpp"
#include "cursorqc/types.hpp"

namespace cursorqc {

struct CollapseOutcome {
  int outcome_bit = 1;       // 1: register found in |sigma3=+1>, 0: in |sigma3=-1>
  double probability = 0.0;  // Born probability of this outcome
  bool present = false;      // false when probability is below the cutoff
  CVector register_state;    // sigma3 eigenstate
  CVector cursor_state;      // normalized cursor factor (empty when absent)
  CVector machine_vector;    // register_state (x) cursor_state, site-major

  const CVector& require_present() const {
    if (!present) throw BranchAbsentError("collapse: outcome has vanishing probability");
    return machine_vector;
  }
};

/// Collapse of a qubit-register machine state. Element 0 is outcome 1
/// (|sigma3=+1>), element 1 is outcome 0 (|sigma3=-1>).
inline std::array<CollapseOutcome, 2> collapse(const MachineState& m) {
  detail::require(m.dim_register() == 2, "collapse: register must be a qubit");
  const auto s = static_cast<Eigen::Index>(m.sites());
  std::array<CollapseOutcome, 2> out;
  for (int branch = 0; branch < 2; ++branch) {
    auto& o = out[static_cast<std::size_t>(branch)];
    o.outcome_bit = branch == 0 ? 1 : 0;
    o.register_state = CVector::Zero(2);
    o.register_state(branch) = 1.0;
    CVector f(s);
    for (Eigen::Index x = 0; x < s; ++x) f(x) = m.amplitudes.values(x) * m.trajectory[static_cast<std::size_t>(x)](branch);
    o.probability = f.squaredNorm();
    o.present = o.probability > kSchmidtCutoff;
    if (!o.present) continue;
    o.cursor_state = f / std::sqrt(o.probability);
    o.machine_vector = CVector::Zero(2 * s);
    for (Eigen::Index x = 0; x < s; ++x) o.machine_vector(2 * x + branch) = o.cursor_state(x);
  }
  return out;
}

/// Collapse of the qubit example at time t (any t; the readout time of
/// interest is where gamma(t) = 0).
inline std::array<CollapseOutcome, 2> collapse(const QubitExample& p, double t) {
  const auto spec = build_spectrum(p.s, p.lambda);
  return collapse(evolve(qubit_program(p), initial_register(p), spec, t));
}

/// P_j(x) = |cursor factor of outcome j at x|^2. An absent outcome yields
/// an all-zero profile.
inline std::pair<std::vector<double>, std::vector<double>> cursor_position_distributions(
    const std::array<CollapseOutcome, 2>& outcomes) {
  const auto profile = [](const CollapseOutcome& o, std::size_t s) {
    std::vector<double> p(s, 0.0);
    if (!o.present) return p;
    for (std::size_t x = 0; x < s; ++x) p[x] = std::norm(o.cursor_state(static_cast<Eigen::Index>(x)));
    return p;
  };
  const auto s = static_cast<std::size_t>(
      outcomes[0].present ? outcomes[0].cursor_state.size() : outcomes[1].cursor_state.size());
  return {profile(outcomes[0], s), profile(outcomes[1], s)};
}

/// Energy eigenbasis of the constant-rotation qubit machine:
/// |E_k; sigma2 = eta> = |sigma2 = eta> (x) sum_x v_k(x) exp(-i eta alpha (x-1)/2) |C(x)>.
/// Column 2k holds eta = +1, column 2k+1 holds eta = -1, both with energy E_k.
struct EnergyBasis {
  std::size_t s = 0;
  double lambda = 1.0;
  RVector energies;  // E_k, k = 1..s
  CMatrix vectors;   // 2s x 2s

  static int eta_of(Eigen::Index column) { return column % 2 == 0 ? +1 : -1; }
};

struct EnergyDistribution {
  std::vector<double> energies;
  std::vector<double> probabilities;
};

inline EnergyBasis machine_energy_basis(const QubitExample& p) {
  const auto spec = build_spectrum(p.s, p.lambda);
  const auto s = static_cast<Eigen::Index>(p.s);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  EnergyBasis basis{p.s, p.lambda, spec.energies, CMatrix(2 * s, 2 * s)};
  for (Eigen::Index k = 0; k < s; ++k) {
    for (int e = 0; e < 2; ++e) {
      const double eta = e == 0 ? 1.0 : -1.0;
      const cplx up = inv_sqrt2, down = eta * i * inv_sqrt2;  // |sigma2 = eta>
      auto col = basis.vectors.col(2 * k + e);
      for (Eigen::Index x = 0; x < s; ++x) {
        const cplx f = spec.modes(k, x) * std::polar(1.0, -eta * p.alpha * static_cast<double>(x) / 2.0);
        col(2 * x) = up * f;
        col(2 * x + 1) = down * f;
      }
    }
  }
  return basis;
}

/// Same basis recovered from a program; the program must repeat a single
/// real rotation about e2 on a qubit.
inline EnergyBasis machine_energy_basis(const UnitaryProgram& prog, double lambda) {
  detail::require(prog.dim_register == 2, "machine_energy_basis: register must be a qubit");
  double alpha = 0.0;
  if (!prog.steps.empty()) {
    const CMatrix& u = prog.steps.front();
    for (const auto& step : prog.steps) {
      detail::require((step - u).cwiseAbs().maxCoeff() < 1e-12,
                      "machine_energy_basis: program is not a constant rotation");
    }
    const double c = u(0, 0).real(), sn = u(1, 0).real();
    CMatrix expected(2, 2);
    expected << c, -sn, sn, c;
    detail::require((u - expected).cwiseAbs().maxCoeff() < 1e-12,
                    "machine_energy_basis: step is not a rotation about e2");
    alpha = 2.0 * std::atan2(sn, c);
  }
  return machine_energy_basis(qubit_example(prog.sites(), 0.0, alpha, lambda));
}

/// p(E_k) = sum_eta |<E_k; sigma2 = eta | state>|^2.
inline EnergyDistribution energy_distribution(const CVector& state, const EnergyBasis& basis) {
  detail::require(state.size() == basis.vectors.rows(), "energy_distribution: state dimension mismatch");
  const CVector overlaps = basis.vectors.adjoint() * state;
  EnergyDistribution out;
  out.energies.assign(basis.energies.data(), basis.energies.data() + basis.energies.size());
  out.probabilities.resize(basis.s);
  for (std::size_t k = 0; k < basis.s; ++k) {
    const auto c = static_cast<Eigen::Index>(2 * k);
    out.probabilities[k] = std::norm(overlaps(c)) + std::norm(overlaps(c + 1));
  }
  return out;
}

/// <state|H|state>.
inline double mean_energy(const UnitaryProgram& prog, double lambda, const CVector& state) {
  return state.dot(hamiltonian_matvec(prog, lambda, state)).real();
}

/// Mean cursor speed |dE/dp| = sqrt(lambda^2 - E^2) under an energy
/// distribution of the band E(p) = -lambda cos p. <H> vanishes for every
/// state built on the bipartite chain from C(1), so the recoil shows up here
/// and in the shape of the distribution rather than in the mean energy.
inline double mean_group_speed(const EnergyDistribution& dist, double lambda) {
  double v = 0.0;
  for (std::size_t k = 0; k < dist.energies.size(); ++k) {
    const double e = dist.energies[k];
    v += dist.probabilities[k] * std::sqrt(std::max(0.0, lambda * lambda - e * e));
  }
  return v;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  detail::require(p.size() == q.size(), "total_variation: size mismatch");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

}  // namespace cursorqc

#pragma once

// The spin-1/2 register driven by a fixed rotation about e2, and its Grover
// parameterization. Basis order is (|sigma3=+1>, |sigma3=-1>); the target
// state omega is |sigma3=+1>.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cursorqc/cursor_kernel.hpp"
#include "cursorqc/machine.hpp"
#include "cursorqc/types.hpp"

namespace cursorqc {

/// Boltzmann constant, exact SI value (J/K).
inline constexpr double kBoltzmann = 1.380649e-23;

/// Qubit example: initial polar angle theta, per-step rotation alpha about
/// e2, s cursor sites, coupling lambda.
struct QubitExample {
  std::size_t s = 2;
  double theta = 0.0;
  double alpha = 0.0;
  double lambda = 1.0;
};

struct GroverParams : QubitExample {
  unsigned mu = 0;
  double chi = 0.0;
};

inline QubitExample qubit_example(std::size_t s, double theta, double alpha, double lambda = 1.0) {
  detail::require(s >= 1, "qubit_example: s must be >= 1");
  detail::require(lambda > 0.0, "qubit_example: lambda must be > 0");
  return QubitExample{s, theta, alpha, lambda};
}

/// chi = arcsin(2^{-mu/2}), theta = pi - 2 chi, alpha = -4 chi, s = 2^mu + 1.
inline GroverParams grover_params(unsigned mu, double lambda = 1.0) {
  detail::require(mu >= 1, "grover_params: mu must be >= 1");
  detail::require(mu <= 30, "grover_params: mu too large for a desk-scale cursor");
  detail::require(lambda > 0.0, "grover_params: lambda must be > 0");
  GroverParams p;
  p.mu = mu;
  p.chi = std::asin(std::pow(2.0, -0.5 * mu));
  p.theta = kPi - 2.0 * p.chi;
  p.alpha = -4.0 * p.chi;
  p.s = (std::size_t{1} << mu) + 1;
  p.lambda = lambda;
  return p;
}

inline CVector initial_register(const QubitExample& p) {
  CVector r(2);
  r << std::cos(0.5 * p.theta), std::sin(0.5 * p.theta);
  return r;
}

/// exp(-i alpha sigma2 / 2).
inline CMatrix step_unitary(const QubitExample& p) {
  const double c = std::cos(0.5 * p.alpha), s = std::sin(0.5 * p.alpha);
  CMatrix u(2, 2);
  u << c, -s, s, c;
  return u;
}

inline UnitaryProgram qubit_program(const QubitExample& p) { return constant_program(step_unitary(p), p.s - 1); }

/// Oracle reflection A = I - 2|omega><omega| and estimation reflection
/// B = 2|iota><iota| - I.
inline std::pair<CMatrix, CMatrix> grover_factors(const QubitExample& p) {
  const CMatrix id = CMatrix::Identity(2, 2);
  CVector omega(2);
  omega << 1.0, 0.0;
  const CVector iota = initial_register(p);
  return {id - 2.0 * omega * omega.adjoint(), 2.0 * iota * iota.adjoint() - id};
}

inline const CMatrix& pauli(int axis) {
  static const CMatrix s1 = (CMatrix(2, 2) << 0, 1, 1, 0).finished();
  static const CMatrix s2 = (CMatrix(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished();
  static const CMatrix s3 = (CMatrix(2, 2) << 1, 0, 0, -1).finished();
  detail::require(axis >= 1 && axis <= 3, "pauli: axis must be 1, 2 or 3");
  return axis == 1 ? s1 : (axis == 2 ? s2 : s3);
}

struct BlochVector {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;

  double r() const { return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3); }
  /// Polar angle in the e1-e3 plane measured from +e3; zero when r = 0.
  double gamma() const { return (s1 == 0.0 && s3 == 0.0) ? 0.0 : std::atan2(s1, s3); }
};

/// (Tr rho sigma_1, Tr rho sigma_2, Tr rho sigma_3) for a qubit density matrix.
inline BlochVector bloch_of(const DensityMatrix& rho) {
  detail::require(rho.dimension() == 2, "bloch_of: not a qubit density matrix");
  const auto tr = [&](int a) { return (rho.entries * pauli(a)).trace().real(); };
  return {tr(1), tr(2), tr(3)};
}

/// Bloch vector of the register at time t:
/// sum_x |c|^2 (sin(theta + (x-1) alpha), 0, cos(theta + (x-1) alpha)).
inline BlochVector bloch_at(const QubitExample& p, const AmplitudeVector& a) {
  BlochVector b;
  for (std::size_t x = 0; x < a.size(); ++x) {
    const double w = std::norm(a.values(static_cast<Eigen::Index>(x)));
    const double phase = p.theta + static_cast<double>(x) * p.alpha;
    b.s1 += w * std::sin(phase);
    b.s3 += w * std::cos(phase);
  }
  return b;
}

inline std::vector<BlochVector> bloch_trajectory(const QubitExample& p, std::span<const double> times) {
  const auto spec = build_spectrum(p.s, p.lambda);
  std::vector<BlochVector> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(bloch_at(p, amplitude(spec, t)));
  return out;
}

struct ReducedEigensystem {
  double lambda1 = 1.0, lambda2 = 0.0;
  CVector b1, b2;
};

inline ReducedEigensystem reduced_eigensystem(const BlochVector& b) {
  const double r = b.r();
  detail::require(r <= 1.0 + 1e-12, "reduced_eigensystem: Bloch vector longer than 1");
  const double rc = std::min(r, 1.0);
  const double g = b.gamma();
  ReducedEigensystem out;
  out.lambda1 = 0.5 * (1.0 + rc);
  out.lambda2 = 1.0 - out.lambda1;
  out.b1.resize(2);
  out.b2.resize(2);
  out.b1 << std::cos(0.5 * g), std::sin(0.5 * g);
  out.b2 << -std::sin(0.5 * g), std::cos(0.5 * g);
  return out;
}

/// Binary entropy of (1 +- r)/2 in nats.
inline double entropy_closed(const BlochVector& b) {
  const double r = std::min(b.r(), 1.0);
  const auto term = [](double q) { return q > 0.0 ? -q * std::log(q) : 0.0; };
  return term(0.5 * (1.0 + r)) + term(0.5 * (1.0 - r));
}

/// Cursor states paired with b1 and b2 in the Schmidt form. A branch whose
/// weight is below the cutoff is reported as absent.
struct ConjugateCursorStates {
  double lambda1 = 1.0, lambda2 = 0.0;
  std::optional<CVector> d1, d2;
};

/// d1(x) = c(t,x) cos((theta + (x-1) alpha - gamma)/2) / sqrt(lambda1),
/// d2(x) = c(t,x) sin((theta + (x-1) alpha - gamma)/2) / sqrt(lambda2).
inline ConjugateCursorStates conjugate_cursor_states(const QubitExample& p, double t) {
  const auto a = amplitude(build_spectrum(p.s, p.lambda), t);
  const auto bloch = bloch_at(p, a);
  const auto eig = reduced_eigensystem(bloch);
  const double g = bloch.gamma();
  ConjugateCursorStates out;
  out.lambda1 = eig.lambda1;
  out.lambda2 = eig.lambda2;
  const auto n = static_cast<Eigen::Index>(p.s);
  const auto branch = [&](double weight, bool cosine) -> std::optional<CVector> {
    if (weight <= kSchmidtCutoff) return std::nullopt;
    CVector d(n);
    const double scale = 1.0 / std::sqrt(weight);
    for (Eigen::Index x = 0; x < n; ++x) {
      const double half = 0.5 * (p.theta + static_cast<double>(x) * p.alpha - g);
      d(x) = a.values(x) * (cosine ? std::cos(half) : std::sin(half)) * scale;
    }
    return d;
  };
  out.d1 = branch(out.lambda1, true);
  out.d2 = branch(out.lambda2, false);
  return out;
}

/// (Tr rho_r (I + sigma3)/2, Tr rho_r (I - sigma3)/2).
inline std::pair<double, double> success_probability(const QubitExample& p, double t) {
  const auto b = bloch_at(p, amplitude(build_spectrum(p.s, p.lambda), t));
  return {0.5 * (1.0 + b.s3), 0.5 * (1.0 - b.s3)};
}

struct OptimalTau {
  double tau = 0.0;
  double p_max = 0.0;
};

/// First global maximizer of p_target on [0, s/lambda]: coarse grid of
/// `grid_step`, then golden-section refinement to 1e-4/lambda.
inline OptimalTau optimal_tau(const QubitExample& p, double grid_step = 0.05) {
  detail::require(grid_step > 0.0 && grid_step <= 0.1 / p.lambda * (1.0 + 1e-12),
                  "optimal_tau: grid_step must be in (0, 0.1/lambda]");
  const auto spec = build_spectrum(p.s, p.lambda);
  const auto target = [&](double t) { return 0.5 * (1.0 + bloch_at(p, amplitude(spec, t)).s3); };
  const double t_end = static_cast<double>(p.s) / p.lambda;
  const auto n = static_cast<std::size_t>(std::floor(t_end / grid_step * (1.0 + 1e-12)));

  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = target(static_cast<double>(i) * grid_step);
  const double best = *std::max_element(values.begin(), values.end());
  std::size_t idx = 0;
  while (values[idx] < best - 1e-9) ++idx;

  double lo = std::max(0.0, (static_cast<double>(idx) - 1.0) * grid_step);
  double hi = std::min(t_end, (static_cast<double>(idx) + 1.0) * grid_step);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  const double tol = 1e-4 / p.lambda;
  double a = hi - inv_phi * (hi - lo), b = lo + inv_phi * (hi - lo);
  double fa = target(a), fb = target(b);
  while (hi - lo > tol) {
    if (fa >= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = target(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = target(b);
    }
  }
  OptimalTau out{0.5 * (lo + hi), 0.0};
  out.p_max = target(out.tau);
  if (values[idx] > out.p_max) out = {static_cast<double>(idx) * grid_step, values[idx]};
  return out;
}

/// Time near `near` at which gamma(t) = 0, i.e. s1 changes sign with s3 > 0:
/// the register's preferred eigenvector coincides with the target state.
/// Brackets by scanning outward in `step` and bisects to 1e-13.
inline std::optional<double> gamma_zero_time(const QubitExample& p, double near, double step = 0.05,
                                             double max_distance = -1.0) {
  const auto spec = build_spectrum(p.s, p.lambda);
  const auto bloch = [&](double t) { return bloch_at(p, amplitude(spec, t)); };
  if (max_distance < 0.0) max_distance = static_cast<double>(p.s) / p.lambda;
  const auto root_in = [&](double lo, double hi) -> std::optional<double> {
    auto blo = bloch(lo), bhi = bloch(hi);
    if (blo.s1 == 0.0 && blo.s3 > 0.0) return lo;
    if (blo.s1 * bhi.s1 > 0.0) return std::nullopt;
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      const auto bm = bloch(mid);
      if ((bm.s1 > 0.0) == (blo.s1 > 0.0)) {
        lo = mid;
        blo = bm;
      } else {
        hi = mid;
      }
    }
    const double t = 0.5 * (lo + hi);
    if (bloch(t).s3 <= 0.0) return std::nullopt;
    return t;
  };
  for (double off = 0.0; off <= max_distance; off += step) {
    if (auto r = root_in(near + off, near + off + step)) return r;
    if (near - off - step >= 0.0) {
      if (auto r = root_in(near - off - step, near - off)) return r;
    }
  }
  return std::nullopt;
}

/// Heat N k_B T S (joules) to reset N registers carrying entropy S (nats).
inline double landauer_cost(double entropy_nats, std::size_t n_machines, double temperature_kelvin) {
  detail::require(entropy_nats >= 0.0, "landauer_cost: entropy must be >= 0");
  detail::require(n_machines >= 1, "landauer_cost: need at least one machine");
  detail::require(temperature_kelvin > 0.0, "landauer_cost: temperature must be > 0");
  return static_cast<double>(n_machines) * kBoltzmann * temperature_kelvin * entropy_nats;
}

}  // namespace cursorqc

#pragma once

// The register coupled to the cursor. A machine started in R(1) (x) C(1)
// stays in the product form sum_x c(t,x;s) R(x) (x) C(x); this header builds
// that state, its reduced density matrices and Schmidt form, and a
// brute-force integrator over the full register (x) cursor space.
//
// Full machine vectors use site-major layout: element x*d + r is the
// amplitude of |r> (x) |C(x+1)>, d = register dimension.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cursorqc/cursor_kernel.hpp"
#include "cursorqc/rk4.hpp"
#include "cursorqc/types.hpp"

namespace cursorqc {

inline constexpr double kUnitarityTolerance = 1e-12;
inline constexpr double kSchmidtCutoff = 1e-12;
inline constexpr std::size_t kOracleMaxDimension = std::size_t{1} << 16;

/// Ordered register steps U_1..U_{s-1}. The cursor has steps.size() + 1 sites.
struct UnitaryProgram {
  std::size_t dim_register = 0;
  std::vector<CMatrix> steps;

  std::size_t sites() const { return steps.size() + 1; }
};

inline double unitarity_error(const CMatrix& u) {
  const auto n = u.rows();
  return (u.adjoint() * u - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

inline UnitaryProgram make_program(std::size_t dim_register, std::vector<CMatrix> steps) {
  detail::require(dim_register >= 1, "make_program: register dimension must be >= 1");
  const auto d = static_cast<Eigen::Index>(dim_register);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& u = steps[i];
    detail::require(u.rows() == d && u.cols() == d,
                    "make_program: step " + std::to_string(i + 1) + " has wrong shape");
    detail::require(unitarity_error(u) < kUnitarityTolerance,
                    "make_program: step " + std::to_string(i + 1) + " is not unitary");
  }
  return UnitaryProgram{dim_register, std::move(steps)};
}

/// The same step applied `count` times.
inline UnitaryProgram constant_program(const CMatrix& step, std::size_t count) {
  return make_program(static_cast<std::size_t>(step.rows()), std::vector<CMatrix>(count, step));
}

/// Appends `extra` identity steps (an inactive stretch of cursor).
inline UnitaryProgram pad_with_identity(UnitaryProgram prog, std::size_t extra) {
  const auto d = static_cast<Eigen::Index>(prog.dim_register);
  prog.steps.insert(prog.steps.end(), extra, CMatrix::Identity(d, d));
  return prog;
}

/// Hermitian, unit-trace, positive semidefinite.
struct DensityMatrix {
  CMatrix entries;

  std::size_t dimension() const { return static_cast<std::size_t>(entries.rows()); }

  /// Ascending.
  RVector eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(entries, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  double trace() const { return entries.trace().real(); }
  double hermiticity_error() const { return (entries - entries.adjoint()).cwiseAbs().maxCoeff(); }
};

struct MachineState {
  AmplitudeVector amplitudes;
  std::vector<CVector> trajectory;  // R(1)..R(s)

  std::size_t sites() const { return trajectory.size(); }
  std::size_t dim_register() const {
    return trajectory.empty() ? 0 : static_cast<std::size_t>(trajectory.front().size());
  }

  /// Register trajectory as the columns of a d x s matrix.
  CMatrix trajectory_matrix() const {
    CMatrix m(static_cast<Eigen::Index>(dim_register()), static_cast<Eigen::Index>(sites()));
    for (std::size_t x = 0; x < sites(); ++x) m.col(static_cast<Eigen::Index>(x)) = trajectory[x];
    return m;
  }

  CVector full_vector() const {
    const auto d = static_cast<Eigen::Index>(dim_register());
    CVector v(d * static_cast<Eigen::Index>(sites()));
    for (std::size_t x = 0; x < sites(); ++x) {
      const auto xi = static_cast<Eigen::Index>(x);
      v.segment(xi * d, d) = amplitudes.values(xi) * trajectory[x];
    }
    return v;
  }
};

/// Orthonormal factors of the bipartite machine state, weights descending.
struct SchmidtPair {
  std::vector<double> weights;
  std::vector<CVector> register_basis;
  std::vector<CVector> cursor_basis;

  std::size_t rank() const { return weights.size(); }

  CVector reconstruct() const {
    if (weights.empty()) return {};
    const auto d = register_basis.front().size();
    const auto s = cursor_basis.front().size();
    CVector v = CVector::Zero(d * s);
    for (std::size_t j = 0; j < weights.size(); ++j) {
      const double w = std::sqrt(weights[j]);
      for (Eigen::Index x = 0; x < s; ++x) {
        v.segment(x * d, d) += (w * cursor_basis[j](x)) * register_basis[j];
      }
    }
    return v;
  }
};

inline std::vector<CVector> register_trajectory(const UnitaryProgram& prog, const CVector& r1) {
  detail::require(r1.size() == static_cast<Eigen::Index>(prog.dim_register),
                  "register_trajectory: initial vector has wrong dimension");
  detail::require(std::abs(r1.norm() - 1.0) < 1e-12, "register_trajectory: initial vector must be unit norm");
  std::vector<CVector> out;
  out.reserve(prog.sites());
  out.push_back(r1);
  for (const auto& u : prog.steps) out.push_back(u * out.back());
  return out;
}

inline MachineState evolve(const UnitaryProgram& prog, const CVector& r1, const CursorSpectrum& spec,
                           double t) {
  detail::require(prog.steps.size() + 1 == spec.s,
                  "evolve: program has " + std::to_string(prog.steps.size()) + " steps but cursor has " +
                      std::to_string(spec.s) + " sites");
  return MachineState{amplitude(spec, t), register_trajectory(prog, r1)};
}

/// Writes H v into out, where
/// H = -(lambda/2) sum_x [U_x (x) |C(x+1)><C(x)| + U_x^dagger (x) |C(x)><C(x+1)|].
/// Never forms the (d s)^2 matrix.
inline void hamiltonian_apply(const UnitaryProgram& prog, double lambda, const CVector& v, CVector& out) {
  const auto d = static_cast<Eigen::Index>(prog.dim_register);
  const auto n = d * static_cast<Eigen::Index>(prog.sites());
  detail::require(v.size() == n, "hamiltonian_matvec: vector dimension does not match d*s");
  out.setZero(n);
  const double h = 0.5 * lambda;
  for (std::size_t i = 0; i < prog.steps.size(); ++i) {
    const auto x = static_cast<Eigen::Index>(i);
    const auto& u = prog.steps[i];
    out.segment((x + 1) * d, d).noalias() -= h * (u * v.segment(x * d, d));
    out.segment(x * d, d).noalias() -= h * (u.adjoint() * v.segment((x + 1) * d, d));
  }
}

inline CVector hamiltonian_matvec(const UnitaryProgram& prog, double lambda, const CVector& v) {
  CVector out;
  hamiltonian_apply(prog, lambda, v, out);
  return out;
}

namespace detail {

inline void check_oracle_size(const UnitaryProgram& prog) {
  const std::size_t n = prog.dim_register * prog.sites();
  if (n > kOracleMaxDimension) {
    throw ResourceLimitError("evolve_oracle: machine dimension " + std::to_string(n) + " exceeds guard " +
                             std::to_string(kOracleMaxDimension));
  }
}

inline CVector initial_machine_vector(const UnitaryProgram& prog, const CVector& r1) {
  detail::require(r1.size() == static_cast<Eigen::Index>(prog.dim_register),
                  "evolve_oracle: initial vector has wrong dimension");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(prog.dim_register * prog.sites()));
  v.head(r1.size()) = r1;
  return v;
}

}  // namespace detail

/// Full-space RK4 integration of the machine Schrodinger equation starting
/// from r1 (x) C(1). Sampled at each of `times` (non-decreasing).
inline std::vector<CVector> evolve_oracle_sweep(const UnitaryProgram& prog, const CVector& r1, double lambda,
                                                std::span<const double> times, double dt) {
  detail::check_oracle_size(prog);
  detail::require(lambda > 0.0, "evolve_oracle: lambda must be > 0");
  detail::require(dt > 0.0 && dt <= 0.01 / lambda * (1.0 + 1e-12),
                  "evolve_oracle: dt exceeds the bound 0.01/lambda");
  detail::require(std::is_sorted(times.begin(), times.end()), "evolve_oracle: times must be non-decreasing");
  auto apply = [&prog, lambda](const CVector& in, CVector& out) { hamiltonian_apply(prog, lambda, in, out); };
  detail::Rk4Propagator prop(detail::initial_machine_vector(prog, r1), dt, apply);
  std::vector<CVector> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(prop.advance_to(t));
  return out;
}

inline CVector evolve_oracle(const UnitaryProgram& prog, const CVector& r1, double lambda, double t, double dt) {
  const double ts[] = {t};
  return std::move(evolve_oracle_sweep(prog, r1, lambda, ts, dt).front());
}

/// |<a|b>|^2 for unit vectors.
inline double fidelity(const CVector& a, const CVector& b) { return std::norm(a.dot(b)); }

/// rho_r = sum_x |c(t,x;s)|^2 |R(x)><R(x)|.
inline DensityMatrix register_density(const MachineState& m) {
  const CMatrix traj = m.trajectory_matrix();
  const RVector w = m.amplitudes.values.cwiseAbs2();
  return DensityMatrix{traj * w.cast<cplx>().asDiagonal() * traj.adjoint()};
}

/// rho_c(x, y) = c_x conj(c_y) <R(y)|R(x)>.
inline DensityMatrix cursor_density(const MachineState& m) {
  const CMatrix traj = m.trajectory_matrix();
  const CVector& c = m.amplitudes.values;
  const CMatrix gram = (traj.adjoint() * traj).conjugate();
  return DensityMatrix{(c * c.adjoint()).cwiseProduct(gram)};
}

inline SchmidtPair schmidt(const MachineState& m) {
  const DensityMatrix rho = register_density(m);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.entries);
  const auto d = rho.entries.rows();
  const auto s = static_cast<Eigen::Index>(m.sites());
  const CMatrix overlaps_base = m.trajectory_matrix();  // column x = R(x)

  SchmidtPair out;
  for (Eigen::Index j = d - 1; j >= 0; --j) {
    const double w = es.eigenvalues()(j);
    if (w <= kSchmidtCutoff) continue;
    const CVector b = es.eigenvectors().col(j);
    // d_j(x) = c_x <b_j|R(x)> / sqrt(w)
    const CVector proj = overlaps_base.adjoint() * b;  // conj(<b|R(x)>)
    CVector dj(s);
    for (Eigen::Index x = 0; x < s; ++x) dj(x) = m.amplitudes.values(x) * std::conj(proj(x)) / std::sqrt(w);
    out.weights.push_back(w);
    out.register_basis.push_back(b);
    out.cursor_basis.push_back(std::move(dj));
  }
  return out;
}

/// -sum lambda ln lambda in nats over eigenvalues above the cutoff.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  const RVector ev = rho.eigenvalues();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > kSchmidtCutoff) sum -= ev(i) * std::log(ev(i));
  }
  return std::max(sum, 0.0);
}

}  // namespace cursorqc

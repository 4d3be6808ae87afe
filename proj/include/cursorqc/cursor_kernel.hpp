#pragma once

// Free cursor on an open chain of s sites: spectrum, closed-form propagation
// amplitudes from the first site, and a fixed-step integrator of the same
// lattice Schrodinger equation used as an independent check.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cursorqc/rk4.hpp"
#include "cursorqc/types.hpp"

namespace cursorqc {

/// Eigen-angles, energies and standing-wave modes of the s-site cursor.
/// Index k runs 0..s-1 here and stands for the mode number k+1; likewise
/// column x of `modes` is cursor site x+1.
struct CursorSpectrum {
  std::size_t s = 0;
  double lambda = 1.0;
  RVector angles;    // k pi / (s + 1)
  RVector energies;  // -lambda cos(angle)
  RMatrix modes;     // modes(k, x) = sqrt(2/(s+1)) sin((x+1) angle_k)

  double mode_value(std::size_t k, std::size_t x) const { return modes(k, x); }
};

/// c(t, x; s) for x = 1..s, stored 0-based.
struct AmplitudeVector {
  double t = 0.0;
  CVector values;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

inline CursorSpectrum build_spectrum(std::size_t s, double lambda = 1.0) {
  detail::require(s >= 1, "build_spectrum: site count must be >= 1");
  detail::require(lambda > 0.0 && std::isfinite(lambda), "build_spectrum: lambda must be > 0");
  CursorSpectrum spec;
  spec.s = s;
  spec.lambda = lambda;
  const auto n = static_cast<Eigen::Index>(s);
  spec.angles.resize(n);
  spec.energies.resize(n);
  spec.modes.resize(n, n);
  const double norm = std::sqrt(2.0 / static_cast<double>(s + 1));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double angle = static_cast<double>(k + 1) * kPi / static_cast<double>(s + 1);
    spec.angles(k) = angle;
    spec.energies(k) = -lambda * std::cos(angle);
    for (Eigen::Index x = 0; x < n; ++x) {
      spec.modes(k, x) = norm * std::sin(static_cast<double>(x + 1) * angle);
    }
  }
  return spec;
}

/// Closed form requires a uniform coupling; per-bond couplings are only
/// supported by amplitude_ode.
inline CursorSpectrum build_spectrum(std::size_t s, std::span<const double> coupling) {
  detail::require(!coupling.empty(), "build_spectrum: empty coupling");
  const double first = coupling.front();
  for (double c : coupling) {
    detail::require(c == first, "build_spectrum: closed form needs a constant coupling");
  }
  return build_spectrum(s, first);
}

/// c(t,x;s) = sum_k exp(-i E_k t) v_k(1) v_k(x), the cursor started on site 1.
inline AmplitudeVector amplitude(const CursorSpectrum& spec, double t) {
  const auto n = static_cast<Eigen::Index>(spec.s);
  CVector weights(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    weights(k) = std::polar(spec.modes(k, 0), -spec.energies(k) * t);
  }
  AmplitudeVector out;
  out.t = t;
  out.values = spec.modes.transpose().cast<cplx>() * weights;
  return out;
}

namespace detail {

inline std::vector<double> bond_couplings(std::size_t s, std::span<const double> coupling) {
  require(s >= 1, "amplitude_ode: site count must be >= 1");
  const std::size_t bonds = s - 1;
  require(coupling.size() == 1 || coupling.size() == bonds,
          "amplitude_ode: coupling must hold 1 value or one value per bond (s-1)");
  std::vector<double> out(bonds, coupling.empty() ? 0.0 : coupling.front());
  if (coupling.size() == bonds) std::copy(coupling.begin(), coupling.end(), out.begin());
  for (double c : coupling) require(c > 0.0 && std::isfinite(c), "amplitude_ode: coupling must be > 0");
  return out;
}

inline void check_ode_step(std::span<const double> coupling, double dt) {
  const double cmax = *std::max_element(coupling.begin(), coupling.end());
  require(dt > 0.0, "amplitude_ode: dt must be > 0");
  require(dt <= 0.01 / cmax * (1.0 + 1e-12),
          "amplitude_ode: dt exceeds the stability/accuracy bound 0.01/max(coupling)");
}

// H c on the open chain: (H c)(x) = -(l_{x-1}/2) c(x-1) - (l_x/2) c(x+1).
struct ChainHamiltonian {
  std::vector<double> half_bond;

  void operator()(const CVector& in, CVector& out) const {
    const auto n = in.size();
    out.setZero(n);
    for (Eigen::Index x = 0; x + 1 < n; ++x) {
      const double h = half_bond[static_cast<std::size_t>(x)];
      out(x + 1) -= h * in(x);
      out(x) -= h * in(x + 1);
    }
  }
};

inline ChainHamiltonian make_chain(std::size_t s, std::span<const double> coupling) {
  auto bonds = bond_couplings(s, coupling);
  for (auto& b : bonds) b *= 0.5;
  return ChainHamiltonian{std::move(bonds)};
}

inline CVector first_site(std::size_t s) {
  CVector c = CVector::Zero(static_cast<Eigen::Index>(s));
  c(0) = 1.0;
  return c;
}

}  // namespace detail

/// Integrates i dc/dt(x) = -(l/2)(c(x-1) + c(x+1)) from c(0, x) = delta_{x,1}
/// with classical RK4. `coupling` holds either a single constant or one
/// value per bond (x, x+1), x = 1..s-1.
inline AmplitudeVector amplitude_ode(std::size_t s, std::span<const double> coupling, double t,
                                     double dt) {
  auto chain = detail::make_chain(s, coupling);
  detail::check_ode_step(coupling, dt);
  detail::Rk4Propagator prop(detail::first_site(s), dt, std::move(chain));
  AmplitudeVector out;
  out.t = t;
  out.values = prop.advance_to(t);
  return out;
}

inline AmplitudeVector amplitude_ode(std::size_t s, double lambda, double t, double dt) {
  const double c[] = {lambda};
  return amplitude_ode(s, std::span<const double>(c), t, dt);
}

/// Same integration sampled at several times in one pass. `times` must be
/// non-decreasing.
inline std::vector<AmplitudeVector> amplitude_ode_sweep(std::size_t s,
                                                        std::span<const double> coupling,
                                                        std::span<const double> times, double dt) {
  auto chain = detail::make_chain(s, coupling);
  detail::check_ode_step(coupling, dt);
  detail::require(std::is_sorted(times.begin(), times.end()),
                  "amplitude_ode_sweep: times must be non-decreasing");
  detail::Rk4Propagator prop(detail::first_site(s), dt, std::move(chain));
  std::vector<AmplitudeVector> out;
  out.reserve(times.size());
  for (double t : times) out.push_back({t, prop.advance_to(t)});
  return out;
}

/// |c(t,x;s)|^2, the distribution of the cursor position Q.
inline std::vector<double> position_distribution(const AmplitudeVector& a) {
  std::vector<double> p(a.size());
  for (std::size_t x = 0; x < p.size(); ++x) p[x] = std::norm(a.values(static_cast<Eigen::Index>(x)));
  return p;
}

/// Variance of Q, with sites labelled 1..s.
inline double position_variance(const AmplitudeVector& a) {
  const auto p = position_distribution(a);
  double total = 0.0, mean = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    total += p[x];
    mean += p[x] * static_cast<double>(x + 1);
  }
  mean /= total;
  double var = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double d = static_cast<double>(x + 1) - mean;
    var += p[x] * d * d;
  }
  return var / total;
}

}  // namespace cursorqc

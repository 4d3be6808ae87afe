#pragma once

#include <cmath>
#include <utility>

#include "cursorqc/types.hpp"

namespace cursorqc::detail {

// One classical fourth-order Runge-Kutta step of i dpsi/dt = H psi, where
// apply_h(in, out) writes H*in into out.
template <class ApplyH>
void rk4_step(CVector& psi, double h, ApplyH&& apply_h, CVector& k1, CVector& k2, CVector& k3,
              CVector& k4, CVector& tmp) {
  const cplx minus_i(0.0, -1.0);
  apply_h(psi, k1);
  k1 *= minus_i;
  tmp = psi + (0.5 * h) * k1;
  apply_h(tmp, k2);
  k2 *= minus_i;
  tmp = psi + (0.5 * h) * k2;
  apply_h(tmp, k3);
  k3 *= minus_i;
  tmp = psi + h * k3;
  apply_h(tmp, k4);
  k4 *= minus_i;
  psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Fixed-step propagator that advances a state from its current time to a
/// sequence of target times. Full steps of size dt are taken and a single
/// shorter step lands exactly on each target.
template <class ApplyH>
class Rk4Propagator {
 public:
  Rk4Propagator(CVector psi0, double dt, ApplyH apply_h)
      : psi_(std::move(psi0)), dt_(dt), apply_h_(std::move(apply_h)) {
    const auto n = psi_.size();
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    tmp_.resize(n);
  }

  /// Advance to `target` (which may lie before the current time; steps are
  /// then taken backwards).
  const CVector& advance_to(double target) {
    const double span = target - t_;
    const double dir = span < 0 ? -1.0 : 1.0;
    const double h = dir * dt_;
    const auto full = static_cast<long long>(std::floor(std::abs(span) / dt_ * (1.0 + 1e-12)));
    const double start = t_;
    for (long long n = 0; n < full; ++n) {
      rk4_step(psi_, h, apply_h_, k1_, k2_, k3_, k4_, tmp_);
    }
    const double reached = start + static_cast<double>(full) * h;
    const double rest = target - reached;
    if (std::abs(rest) > 1e-14) rk4_step(psi_, rest, apply_h_, k1_, k2_, k3_, k4_, tmp_);
    t_ = target;
    return psi_;
  }

  double time() const { return t_; }
  const CVector& state() const { return psi_; }

 private:
  CVector psi_;
  double dt_;
  double t_ = 0.0;
  ApplyH apply_h_;
  CVector k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace cursorqc::detail

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "cursorqc/machine.hpp"
#include "cursorqc/qubit_grover.hpp"

using namespace cursorqc;

TEST(GroverParams, SmallWord) {
  const auto p = grover_params(2);
  EXPECT_NEAR(p.chi, kPi / 6, 1e-15);
  EXPECT_NEAR(p.theta, 2 * kPi / 3, 1e-15);
  EXPECT_NEAR(p.alpha, -2 * kPi / 3, 1e-15);
  EXPECT_EQ(p.s, 5u);
}

TEST(GroverParams, FigureScale) {
  const auto p = grover_params(7);
  EXPECT_EQ(p.s, 129u);
  EXPECT_NEAR(p.chi, 0.088504, 5e-7);
}

TEST(GroverParams, Invariants) {
  for (unsigned mu = 1; mu <= 12; ++mu) {
    const auto p = grover_params(mu);
    EXPECT_NEAR(std::sin(p.chi) * std::sin(p.chi), std::pow(2.0, -static_cast<double>(mu)), 1e-12);
    EXPECT_GT(p.chi, 0.0);
    EXPECT_LT(p.chi, kPi / 2);
    EXPECT_GT(p.theta, 0.0);
    EXPECT_LT(p.theta, kPi);
    EXPECT_LT(p.alpha, 0.0);
  }
  EXPECT_THROW(grover_params(0), std::invalid_argument);
}

TEST(InitialRegister, Eigenvector) {
  EXPECT_LT((initial_register(qubit_example(3, 0.0, 0.1)) - CVector::Unit(2, 0)).norm(), 1e-15);
  for (unsigned mu = 1; mu <= 10; ++mu) {
    const auto p = grover_params(mu);
    const CVector r = initial_register(p);
    EXPECT_NEAR(r(0).real(), std::pow(2.0, -0.5 * mu), 1e-12);
    const CMatrix n_sigma = std::sin(p.theta) * pauli(1) + std::cos(p.theta) * pauli(3);
    EXPECT_LT((n_sigma * r - r).norm(), 1e-12);
  }
}

TEST(StepUnitary, SpecialAngles) {
  EXPECT_LT((step_unitary(qubit_example(2, 0.0, 0.0)) - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((step_unitary(qubit_example(2, 0.0, -2 * kPi)) + CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  // Compare with exp(-i alpha sigma2/2) = cos(alpha/2) I - i sin(alpha/2) sigma2.
  const double alpha = 0.37;
  const CMatrix expected = std::cos(alpha / 2) * CMatrix::Identity(2, 2) - cplx(0, std::sin(alpha / 2)) * pauli(2);
  EXPECT_LT((step_unitary(qubit_example(2, 0.0, alpha)) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GroverFactors, Reflections) {
  for (unsigned mu = 1; mu <= 10; ++mu) {
    const auto p = grover_params(mu);
    const auto [a, b] = grover_factors(p);
    EXPECT_LT((a - (CMatrix(2, 2) << -1, 0, 0, 1).finished()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((b * b - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((b - b.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    // One Grover iteration is one rotation step, global phase included.
    CMatrix product(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) product(i, j) = b(i, 0) * a(0, j) + b(i, 1) * a(1, j);
    EXPECT_LT((product - step_unitary(p)).cwiseAbs().maxCoeff(), 1e-12) << "mu=" << mu;
  }
}

TEST(BlochTrajectory, InitialPoint) {
  const auto p = grover_params(7);
  const double t0[] = {0.0};
  const auto b = bloch_trajectory(p, t0).front();
  EXPECT_NEAR(b.s1, std::sin(p.theta), 1e-13);
  EXPECT_NEAR(b.s3, std::cos(p.theta), 1e-13);
  EXPECT_NEAR(b.r(), 1.0, 1e-13);
}

TEST(BlochTrajectory, AgreesWithDensityMatrixAndStaysInPlane) {
  const auto p = grover_params(7);
  const auto spec = build_spectrum(p.s);
  const auto prog = qubit_program(p);
  std::vector<double> times;
  for (double t = 0.0; t < 2.0 * p.s; t += 2.5) times.push_back(t);
  const auto traj = bloch_trajectory(p, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto numeric = bloch_of(register_density(evolve(prog, initial_register(p), spec, times[i])));
    EXPECT_NEAR(traj[i].s1, numeric.s1, 1e-10);
    EXPECT_NEAR(traj[i].s3, numeric.s3, 1e-10);
    EXPECT_NEAR(numeric.s2, 0.0, 1e-10);
    EXPECT_LE(traj[i].r(), 1.0 + 1e-12);
  }
}

TEST(BlochTrajectory, SpiralsInside) {
  const auto p = grover_params(7);
  std::vector<double> times;
  for (double t = 0.25; t < static_cast<double>(p.s); t += 0.25) times.push_back(t);
  for (const auto& b : bloch_trajectory(p, times)) EXPECT_LT(b.r(), 1.0 - 1e-6);
}

TEST(ReducedEigensystem, Limits) {
  const auto mixed = reduced_eigensystem(BlochVector{0, 0, 0});
  EXPECT_DOUBLE_EQ(mixed.lambda1, 0.5);
  EXPECT_DOUBLE_EQ(mixed.lambda2, 0.5);
  const auto pure = reduced_eigensystem(BlochVector{0, 0, 1});
  EXPECT_DOUBLE_EQ(pure.lambda1, 1.0);
  EXPECT_LT((pure.b1 - CVector::Unit(2, 0)).norm(), 1e-15);
  EXPECT_THROW(reduced_eigensystem(BlochVector{0.8, 0, 0.8}), std::invalid_argument);
}

TEST(ReducedEigensystem, MatchesNumericEigensolver) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> radius(0.0, 1.0), angle(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    const double r = radius(rng), g = angle(rng);
    const BlochVector b{r * std::sin(g), 0.0, r * std::cos(g)};
    const CMatrix rho = 0.5 * (CMatrix::Identity(2, 2) + b.s1 * pauli(1) + b.s3 * pauli(3));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    const auto eig = reduced_eigensystem(b);
    EXPECT_NEAR(eig.lambda1, es.eigenvalues()(1), 1e-10);
    EXPECT_NEAR(eig.lambda2, es.eigenvalues()(0), 1e-10);
    EXPECT_NEAR(eig.lambda1 + eig.lambda2, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(eig.b1.dot(es.eigenvectors().col(1))), 1.0, 1e-10);
    EXPECT_NEAR(std::abs(eig.b2.dot(es.eigenvectors().col(0))), 1.0, 1e-10);
  }
}

TEST(EntropyClosed, Limits) {
  EXPECT_NEAR(entropy_closed(BlochVector{0, 0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(entropy_closed(BlochVector{0, 0, 0}), std::log(2.0), 1e-15);
}

TEST(EntropyClosed, MatchesEigenEntropyThroughReflection) {
  // Covers [0, 2s), including the stretch after the packet bounces off site s.
  const auto p = grover_params(7);
  const auto spec = build_spectrum(p.s);
  const auto prog = qubit_program(p);
  for (double t = 0.0; t < 2.0 * p.s; t += 0.5) {
    const auto m = evolve(prog, initial_register(p), spec, t);
    EXPECT_NEAR(entropy_closed(bloch_at(p, m.amplitudes)), von_neumann_entropy(register_density(m)), 1e-10)
        << "t=" << t;
  }
}

TEST(ConjugateCursorStates, InitialTimeHasOneBranch) {
  const auto states = conjugate_cursor_states(grover_params(5), 0.0);
  ASSERT_TRUE(states.d1.has_value());
  EXPECT_FALSE(states.d2.has_value());
  EXPECT_NEAR(std::abs((*states.d1)(0)), 1.0, 1e-12);
  EXPECT_NEAR(states.d1->tail(states.d1->size() - 1).norm(), 0.0, 1e-12);
}

TEST(ConjugateCursorStates, OrthonormalAndMatchSchmidt) {
  const auto p = grover_params(7);
  const auto spec = build_spectrum(p.s);
  const auto prog = qubit_program(p);
  const double tau = optimal_tau(p).tau;
  for (double t : {tau, 3.0, 40.0, 150.0, 200.0}) {
    const auto states = conjugate_cursor_states(p, t);
    ASSERT_TRUE(states.d1 && states.d2);
    EXPECT_NEAR(states.d1->squaredNorm(), 1.0, 1e-10);
    EXPECT_NEAR(states.d2->squaredNorm(), 1.0, 1e-10);
    EXPECT_NEAR(std::abs(states.d1->dot(*states.d2)), 0.0, 1e-10);
    const auto sp = schmidt(evolve(prog, initial_register(p), spec, t));
    ASSERT_EQ(sp.rank(), 2u);
    EXPECT_NEAR(std::abs(sp.cursor_basis[0].dot(*states.d1)), 1.0, 1e-8) << "t=" << t;
    EXPECT_NEAR(std::abs(sp.cursor_basis[1].dot(*states.d2)), 1.0, 1e-8) << "t=" << t;
  }
}

TEST(ConjugateCursorStates, HalfAngleReadingMatters) {
  // The alternative reading cos(theta + (x-1) alpha - gamma/2) is not an
  // orthogonal pair; the half-angle of the whole argument is.
  const auto p = grover_params(5);
  const double t = 6.0;
  const auto a = amplitude(build_spectrum(p.s), t);
  const double g = bloch_at(p, a).gamma();
  CVector u(p.s), v(p.s);
  for (Eigen::Index x = 0; x < static_cast<Eigen::Index>(p.s); ++x) {
    const double arg = p.theta + static_cast<double>(x) * p.alpha - g / 2;
    u(x) = a.values(x) * std::cos(arg);
    v(x) = a.values(x) * std::sin(arg);
  }
  EXPECT_GT(std::abs(u.dot(v)) / (u.norm() * v.norm()), 1e-3);
  const auto states = conjugate_cursor_states(p, t);
  EXPECT_LT(std::abs(states.d1->dot(*states.d2)), 1e-12);
}

TEST(SuccessProbability, Basics) {
  for (unsigned mu = 1; mu <= 9; ++mu) {
    const auto p = grover_params(mu);
    EXPECT_NEAR(success_probability(p, 0.0).first, std::pow(2.0, -static_cast<double>(mu)), 1e-12);
    for (double t : {1.0, 3.5, 12.0}) {
      const auto [pt, pu] = success_probability(p, t);
      EXPECT_NEAR(pt + pu, 1.0, 1e-12);
    }
  }
}

TEST(SuccessProbability, BoundedByLargestEigenvalue) {
  const auto p = grover_params(7);
  const auto spec = build_spectrum(p.s);
  double best = 0.0;
  for (double t = 0.0; t < static_cast<double>(p.s); t += 0.1) {
    const auto b = bloch_at(p, amplitude(spec, t));
    const double pt = 0.5 * (1.0 + b.s3);
    EXPECT_LE(pt, reduced_eigensystem(b).lambda1 + 1e-12);
    best = std::max(best, pt);
  }
  EXPECT_LT(best, 1.0 - 1e-3);
}

namespace {

struct TauFixture {
  unsigned mu;
  double tau, p_max, lambda2;
};

// Produced by optimal_tau(grover_params(mu)) with the default 0.05 grid.
constexpr TauFixture kTauFixtures[] = {
    {4, 4.1016714341, 0.812395097097, 0.185357826206},  {5, 5.5477247489, 0.859744429222, 0.138161762645},
    {6, 7.6005478103, 0.885819448314, 0.112039519953},  {7, 10.5092822460, 0.900281749512, 0.097572915436},
    {8, 14.6278273881, 0.908273165952, 0.089589701579},
};

}  // namespace

TEST(OptimalTau, RegressionConstants) {
  for (const auto& f : kTauFixtures) {
    const auto p = grover_params(f.mu);
    const auto opt = optimal_tau(p);
    EXPECT_NEAR(opt.tau, f.tau, 1e-9) << "mu=" << f.mu;
    EXPECT_NEAR(opt.p_max, f.p_max, 1e-11) << "mu=" << f.mu;
    const auto eig = reduced_eigensystem(bloch_at(p, amplitude(build_spectrum(p.s), opt.tau)));
    EXPECT_NEAR(eig.lambda2, f.lambda2, 1e-11) << "mu=" << f.mu;
    EXPECT_LT(opt.p_max, 1.0);
  }
}

TEST(OptimalTau, SquareRootScaling) {
  for (unsigned mu = 4; mu <= 6; ++mu) {
    const double ratio = optimal_tau(grover_params(mu + 2)).tau / optimal_tau(grover_params(mu)).tau;
    EXPECT_GE(ratio, 1.6) << "mu=" << mu;
    EXPECT_LE(ratio, 2.4) << "mu=" << mu;
  }
}

TEST(OptimalTau, RefinedPointBeatsGrid) {
  const auto p = grover_params(6);
  const auto opt = optimal_tau(p, 0.1);
  for (double t = 0.0; t <= static_cast<double>(p.s); t += 0.1) EXPECT_LE(success_probability(p, t).first, opt.p_max + 1e-12);
  EXPECT_NEAR(optimal_tau(p, 0.1).tau, optimal_tau(p, 0.05).tau, 2e-4);
  EXPECT_THROW(optimal_tau(p, 0.2), std::invalid_argument);
}

TEST(OptimalTau, FirstLocalMaximumIsGlobal) {
  for (unsigned mu = 2; mu <= 8; ++mu) {
    const auto p = grover_params(mu);
    const double step = 0.05;
    std::vector<double> v;
    for (double t = 0.0; t <= static_cast<double>(p.s); t += step) v.push_back(success_probability(p, t).first);
    std::size_t first = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] > v[i - 1] && v[i] >= v[i + 1]) {
        first = i;
        break;
      }
    }
    EXPECT_NEAR(static_cast<double>(first) * step, optimal_tau(p).tau, step) << "mu=" << mu;
  }
}

TEST(OptimalTau, InvariantUnderCouplingRescale) {
  for (double lambda : {0.5, 2.0}) {
    const auto base = optimal_tau(grover_params(6));
    const auto scaled = optimal_tau(grover_params(6, lambda), 0.05 / lambda);
    EXPECT_NEAR(scaled.tau * lambda, base.tau, 2e-4);
    EXPECT_NEAR(scaled.p_max, base.p_max, 1e-8);
  }
}

TEST(GammaZeroTime, PreferredAxisMeetsTarget) {
  const auto p = grover_params(7);
  const auto tau = optimal_tau(p).tau;
  const auto t0 = gamma_zero_time(p, tau);
  ASSERT_TRUE(t0.has_value());
  const auto b = bloch_at(p, amplitude(build_spectrum(p.s), *t0));
  EXPECT_NEAR(b.gamma(), 0.0, 1e-12);
  EXPECT_GT(b.s3, 0.0);
  // Not the same instant as the maximum of p_target.
  EXPECT_GT(std::abs(*t0 - tau), 0.1);
  EXPECT_NEAR(success_probability(p, *t0).first, reduced_eigensystem(b).lambda1, 1e-12);
}

TEST(Landauer, Arithmetic) {
  EXPECT_EQ(landauer_cost(0.0, 10, 300.0), 0.0);
  EXPECT_NEAR(landauer_cost(std::log(2.0), 1, 300.0), 2.870978885078724e-21, 1e-33);
  EXPECT_NEAR(landauer_cost(std::log(2.0), 1, 300.0) / 2.8711e-21, 1.0, 1e-4);
  EXPECT_DOUBLE_EQ(landauer_cost(0.3, 2000, 4.2), 2.0 * landauer_cost(0.3, 1000, 4.2));
  EXPECT_THROW(landauer_cost(-0.1, 1, 300.0), std::invalid_argument);
  EXPECT_THROW(landauer_cost(0.1, 0, 300.0), std::invalid_argument);
  EXPECT_THROW(landauer_cost(0.1, 1, -3.0), std::invalid_argument);
}

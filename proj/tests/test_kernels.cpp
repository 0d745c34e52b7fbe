#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "specgap/kernels.hpp"

using namespace specgap;

TEST(EvalPhi, PowerLawValues) {
  EXPECT_DOUBLE_EQ(eval_phi(KineticKernel::power(1.0), 2.0), 2.0);
  EXPECT_DOUBLE_EQ(eval_phi(KineticKernel::power(0.0), 7.3), 1.0);
  EXPECT_DOUBLE_EQ(eval_phi(KineticKernel::power(2.0), 1.5), 2.25);
  EXPECT_DOUBLE_EQ(eval_phi(KineticKernel::power(0.0), 0.0), 1.0);
  EXPECT_THROW(eval_phi(KineticKernel::power(1.0), -1.0), DomainError);
  EXPECT_THROW(KineticKernel::power(-0.5), DomainError);
  EXPECT_THROW(KineticKernel::constant(-1.0), DomainError);
}

TEST(EvalPhi, TabulatedInterpolatesAndClamps) {
  const auto k = KineticKernel::tabulated({0.0, 1.0, 3.0}, {1.0, 2.0, 0.5});
  EXPECT_DOUBLE_EQ(eval_phi(k, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(eval_phi(k, 2.0), 1.25);
  EXPECT_DOUBLE_EQ(eval_phi(k, 10.0), 0.5);
  EXPECT_THROW(KineticKernel::tabulated({0.0, 0.0}, {1.0, 1.0}), ConfigError);
  EXPECT_THROW(KineticKernel::tabulated({0.0, 1.0}, {1.0, -1.0}), DomainError);
}

TEST(MonotoneEnvelope, SuffixMinimumOfTable) {
  const auto env = monotone_envelope(KineticKernel::tabulated({0.0, 1.0, 2.0}, {2.0, 1.0, 3.0}));
  const auto& t = std::get<TabulatedPhi>(env.form);
  ASSERT_EQ(t.values.size(), 3u);
  EXPECT_DOUBLE_EQ(t.values[0], 1.0);
  EXPECT_DOUBLE_EQ(t.values[1], 1.0);
  EXPECT_DOUBLE_EQ(t.values[2], 3.0);
}

TEST(MonotoneEnvelope, MatchesBruteForceSuffixMinimum) {
  const auto k = KineticKernel::tabulated({0.0, 1.0, 2.0, 2.5, 4.0}, {1.0, 3.0, 2.0, 5.0, 0.8});
  const auto env = monotone_envelope(k);
  // Oracle: minimum of the interpolant over a dense suffix grid.
  const int n = 4001;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = eval_phi(k, 4.5 * i / (n - 1));
  double m = std::numeric_limits<double>::infinity();
  for (int i = n - 1; i >= 0; --i) {
    m = std::min(m, vals[i]);
    EXPECT_NEAR(eval_phi(env, 4.5 * i / (n - 1)), m, 2e-3) << i;
  }
}

TEST(MonotoneEnvelope, NonTabulatedUnchanged) {
  const auto p = monotone_envelope(KineticKernel::power(1.0));
  EXPECT_DOUBLE_EQ(std::get<PowerLaw>(p.form).gamma, 1.0);
  const auto c = monotone_envelope(KineticKernel::constant(2.5));
  EXPECT_DOUBLE_EQ(std::get<ConstantPhi>(c.form).value, 2.5);
}

TEST(LowerBound, Examples) {
  EXPECT_DOUBLE_EQ(lower_bound_params(KineticKernel::power(1.0), 0.5).c_phi, 0.5);
  EXPECT_DOUBLE_EQ(lower_bound_params(KineticKernel::constant(3.0), 0.0).c_phi, 3.0);
  EXPECT_THROW(lower_bound_params(KineticKernel::power(2.0), 0.0), HypothesisViolation);
  EXPECT_THROW(lower_bound_params(KineticKernel::constant(0.0), 1.0), HypothesisViolation);
  const auto t = KineticKernel::tabulated({0.0, 1.0, 2.0}, {2.0, 1.0, 3.0});
  EXPECT_DOUBLE_EQ(lower_bound_params(t, 0.5).c_phi, 1.0);
  EXPECT_DOUBLE_EQ(lower_bound_params(t, 1.5).c_phi, 2.0);
}

TEST(EvalB, ConstantAndGrazing) {
  EXPECT_DOUBLE_EQ(eval_b(AngularKernel::constant(1.0), pi / 3), 1.0);
  const Mollifier j = Mollifier::bump();
  const auto b = AngularKernel::grazing(0.1, j, 3);
  EXPECT_EQ(eval_b(b, 0.1 * pi / 2 + 1e-9), 0.0);
  EXPECT_EQ(eval_b(b, 1.0), 0.0);
  EXPECT_NEAR(eval_b(b, 0.05), j(0.5) / (1e-3 * std::sin(0.025)), 1e-9 * eval_b(b, 0.05));
  EXPECT_TRUE(std::isinf(eval_b(b, 0.0)));
  EXPECT_THROW(eval_b(b, -0.1), DomainError);
  EXPECT_THROW(eval_b(b, 4.0), DomainError);
}

TEST(EvalB, SinWeightIsFiniteAtZero) {
  const auto b = AngularKernel::grazing(0.2, Mollifier::bump(), 3);
  const double w0 = b_sin_weight(b, 0.0, 3);
  EXPECT_TRUE(std::isfinite(w0));
  EXPECT_NEAR(w0, Mollifier::bump()(0.0) / 0.008 * 2.0, 1e-12);
  const double th = 0.07;
  EXPECT_NEAR(b_sin_weight(b, th, 3), eval_b(b, th) * std::sin(th), 1e-10 * b_sin_weight(b, th, 3));
}

TEST(EvalBTilde, Examples) {
  EXPECT_NEAR(eval_b_tilde(AngularKernel::constant(1.0), pi, 3), 4.0, 1e-15);
  EXPECT_EQ(eval_b_tilde(AngularKernel::constant(1.0), 0.0, 3), 0.0);
  EXPECT_EQ(eval_b_tilde(AngularKernel::linear(), 0.0, 3), 0.0);
  EXPECT_TRUE(b_tilde_nonincreasing(AngularKernel::grazing(0.2, Mollifier::bump(), 3), 3));
  EXPECT_FALSE(b_tilde_nonincreasing(AngularKernel::constant(1.0), 3));
  EXPECT_FALSE(b_tilde_nonincreasing(AngularKernel::linear(), 3));
}

TEST(ComputeCb, ConstantKernels) {
  EXPECT_NEAR(compute_c_b(AngularKernel::constant(1.0), 3), 4.0 * pi, 1e-12);
  EXPECT_NEAR(compute_c_b(AngularKernel::constant(2.5), 3), 10.0 * pi, 1e-11);
  EXPECT_NEAR(compute_c_b(AngularKernel::constant(1.0), 2), 2.0 * pi, 1e-12);
}

TEST(ComputeCb, AbsCosineAgainstDenseScan) {
  std::vector<double> th, val;
  for (int i = 0; i <= 2048; ++i) {
    th.push_back(pi * i / 2048);
    val.push_back(std::abs(std::cos(th.back())));
  }
  const auto b = AngularKernel::tabulated(th, val);
  const double fast = compute_c_b(b, 3, 64);

  // Oracle: midpoint rule in (theta, phi) over sigma3, with sigma1 = e_z and
  // sigma2 at angle psi in the xz-plane; psi scanned at 10x the resolution.
  const int nt = 200, np = 400, npsi = 640;
  double oracle = std::numeric_limits<double>::infinity();
  for (int k = 0; k < npsi; ++k) {
    const double psi = pi * k / (npsi - 1);
    double s = 0.0;
    for (int i = 0; i < nt; ++i) {
      const double t = pi * (i + 0.5) / nt;
      const double st = std::sin(t), ct = std::cos(t);
      for (int m = 0; m < np; ++m) {
        const double p = 2.0 * pi * (m + 0.5) / np;
        const double c2 = std::sin(psi) * st * std::cos(p) + std::cos(psi) * ct;
        s += std::min(std::abs(ct), std::abs(c2)) * st;
      }
    }
    oracle = std::min(oracle, s * (pi / nt) * (2.0 * pi / np));
  }
  EXPECT_NEAR(fast / oracle, 1.0, 2e-3);
}

TEST(ComputeCb, ZeroOverlapIsHypothesisViolation) {
  // Supported on theta < 0.2: two far-apart directions share no sigma3.
  EXPECT_THROW(compute_c_b(AngularKernel::tabulated({0.0, 0.2, 0.3, pi}, {1.0, 1.0, 0.0, 0.0}), 3),
               HypothesisViolation);
}

TEST(Mollifier, BumpIsNormalized) {
  const Mollifier j = Mollifier::bump(2.0);
  // Oracle: composite Simpson on [0, pi/2].
  const int n = 20000;
  const double h = (pi / 2) / n;
  double mass = 0.0, m2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h, w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    mass += w * j(x);
    m2 += w * j(x) * x * x;
  }
  mass *= h / 3;
  m2 *= h / 3;
  EXPECT_NEAR(mass, 1.0, 1e-12);
  EXPECT_NEAR(j.second_moment, m2, 1e-12);
  EXPECT_EQ(j(-0.1), 0.0);
  EXPECT_EQ(j(2.0), 0.0);
}

TEST(CNj, FormulaArithmetic) {
  Mollifier unit;
  unit.second_moment = 1.0;
  EXPECT_NEAR(c_Nj(unit, 3), pi / 4, 1e-15);
  EXPECT_NEAR(c_Nj(unit, 2), 0.25, 1e-15);
  Mollifier m = unit;
  m.second_moment = 3.7;
  EXPECT_NEAR(c_Nj(m, 3), 3.7 * pi / 4, 1e-14);
}

TEST(KernelJson, RoundTrip) {
  for (const auto& k : {KineticKernel::power(1.5), KineticKernel::constant(2.0),
                        KineticKernel::tabulated({0.0, 1.0}, {1.0, 2.0})}) {
    EXPECT_EQ(to_json(kinetic_from_json(to_json(k))), to_json(k));
  }
  for (const auto& b : {AngularKernel::constant(2.0), AngularKernel::grazing(0.3, Mollifier::bump(3.0), 3),
                        AngularKernel::linear()}) {
    EXPECT_EQ(to_json(angular_from_json(to_json(b))), to_json(b));
  }
  EXPECT_THROW(kinetic_from_json({{"type", "weird"}}), ConfigError);
  EXPECT_THROW(angular_from_json({{"type", "weird"}}), ConfigError);
}

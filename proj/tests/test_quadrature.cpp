#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "specgap/quadrature.hpp"

using namespace specgap;

namespace {

// int_R x^k e^{-x^2} dx
double gaussian_moment(int k) { return k % 2 ? 0.0 : std::tgamma(0.5 * (k + 1)); }

}  // namespace

TEST(GaussHermite, OnePointRule) {
  const auto g = gauss_hermite_grid(1, 1);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.coords[0], 0.0);
  EXPECT_NEAR(g.weights[0], std::sqrt(pi), 1e-15);
}

TEST(GaussHermite, FourthMomentOrderFive) {
  const auto est = integrate(gauss_hermite_grid(5, 1), [](const Vec& v) { return std::pow(v(0), 4); });
  EXPECT_NEAR(est.value, 0.75 * std::sqrt(pi), 1e-14);
}

TEST(GaussHermite, TotalMassOrderEight) {
  const auto g = gauss_hermite_grid(8, 3);
  double s = 0.0;
  for (double w : g.weights) s += w;
  EXPECT_NEAR(s, std::pow(pi, 1.5), 1e-13);
}

TEST(GaussHermite, ExactUpToDegreeTwoNMinusOne) {
  for (int n : {3, 7, 12, 20}) {
    const Rule1D r = gauss_hermite_1d(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        s += r.weights[i] * std::pow(r.nodes[i], k);
        scale += r.weights[i] * std::abs(std::pow(r.nodes[i], k));
      }
      EXPECT_NEAR(s, gaussian_moment(k), 1e-13 * scale) << "n=" << n << " k=" << k;
    }
  }
}

TEST(GaussHermite, HighOrderStaysAccurate) {
  const Rule1D r = gauss_hermite_1d(64);
  double s0 = 0.0, s10 = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    s0 += r.weights[i];
    s10 += r.weights[i] * std::pow(r.nodes[i], 10);
  }
  EXPECT_NEAR(s0, std::sqrt(pi), 1e-13);
  EXPECT_NEAR(s10 / gaussian_moment(10), 1.0, 1e-12);
}

TEST(GaussHermite, OrderAboveCapIsResourceError) {
  EXPECT_THROW(gauss_hermite_grid(65, 1), ResourceError);
  EXPECT_THROW(gauss_hermite_grid(0, 1), DomainError);
  EXPECT_THROW(gauss_hermite_grid(4, 4), DomainError);
}

TEST(GaussLegendre, PolynomialsOnInterval) {
  const Rule1D r = gauss_legendre_1d(6, 0.5, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 11);
  EXPECT_NEAR(s, (std::pow(2.0, 12) - std::pow(0.5, 12)) / 12.0, 1e-11);
}

TEST(GaussLaguerre, GammaMoments) {
  for (double alpha : {0.0, 0.5, 2.0}) {
    const Rule1D r = gauss_laguerre_1d(8, alpha);
    for (int k = 0; k <= 15; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = std::tgamma(k + alpha + 1.0);
      EXPECT_NEAR(s / exact, 1.0, 1e-12) << "alpha=" << alpha << " k=" << k;
    }
  }
}

TEST(RadialRule, EvenPolynomialsAgainstGammaFunction) {
  // int_0^inf r^{p+2k} e^{-c r^2} dr = Gamma((p+2k+1)/2) / (2 c^{(p+2k+1)/2})
  const double p = 2.0, c = 1.7;
  const Rule1D r = radial_rule(5, p, c);
  for (int k = 0; k <= 9; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 2 * k);
    const double a = 0.5 * (p + 2 * k + 1);
    EXPECT_NEAR(s / (std::tgamma(a) / (2.0 * std::pow(c, a))), 1.0, 1e-12) << k;
  }
}

TEST(SphereGrid, AreaAndSecondMoment) {
  for (int order : {1, 2, 5}) {
    const auto g = sphere_grid(3, order);
    EXPECT_NEAR(integrate(g, [](const Vec&) { return 1.0; }).value, 4.0 * pi, 1e-13);
  }
  Vec e(3);
  e << 0.3, -0.5, 0.8;
  e.normalize();
  for (int order : {2, 3, 6}) {
    const auto est = integrate(sphere_grid(3, order), [&](const Vec& s) { return std::pow(s.dot(e), 2); });
    EXPECT_NEAR(est.value, 4.0 * pi / 3.0, 1e-14);
  }
}

TEST(SphereGrid, HarmonicExactness) {
  // int (s.e)^{2k} = 4 pi / (2k + 1), degree 2k <= 2 order - 1
  Vec e(3);
  e << 1.0, 2.0, 2.0;
  e /= 3.0;
  const auto g = sphere_grid(3, 6);
  for (int k = 0; k <= 5; ++k) {
    const auto est = integrate(g, [&](const Vec& s) { return std::pow(s.dot(e), 2 * k); });
    EXPECT_NEAR(est.value, 4.0 * pi / (2 * k + 1), 1e-13) << k;
  }
}

TEST(SphereGrid, CircleIsUniform) {
  const auto g = sphere_grid(2, 7);
  ASSERT_EQ(g.size(), 14u);
  for (double w : g.weights) EXPECT_DOUBLE_EQ(w, pi / 7);
  EXPECT_THROW(sphere_grid(4, 3), DomainError);
}

TEST(Integrate, GaussianMoments) {
  const auto g = gauss_hermite_grid(6, 3, true);
  EXPECT_NEAR(integrate(g, [](const Vec&) { return 1.0; }).value, std::pow(pi, 1.5), 1e-13);
  EXPECT_NEAR(integrate(g, [](const Vec& v) { return v.squaredNorm(); }).value, 1.5 * std::pow(pi, 1.5), 1e-13);
  const auto zero = integrate(g, [](const Vec&) { return 0.0; });
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_EQ(zero.error, 0.0);
}

TEST(Integrate, EmbeddedErrorSeesUnderResolution) {
  const auto g = gauss_hermite_grid(3, 1, true);
  // x^6 is exact at order 4 but not 3; the embedded order-2 rule disagrees.
  const auto est = integrate(g, [](const Vec& v) { return std::pow(v(0), 6); });
  EXPECT_GT(est.error, 0.1);
}

TEST(Integrate, NonFiniteValueNamesTheNode) {
  const auto g = gauss_hermite_grid(3, 1);
  try {
    integrate(g, [](const Vec& v) { return v(0) == 0.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0; });
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
}

TEST(MonteCarlo, ConstantIsExact) {
  const auto est = monte_carlo_integrate(3, [](std::span<const double>) { return 1.0; }, 10000, 3);
  EXPECT_NEAR(est.value, std::pow(pi, 1.5), 1e-12);
  EXPECT_NEAR(est.error, 0.0, 1e-12);
}

TEST(MonteCarlo, OddMomentWithinFourSigma) {
  const auto est = monte_carlo_integrate(3, [](std::span<const double> x) { return x[0]; }, 200000, 11);
  EXPECT_LT(std::abs(est.value), 4.0 * est.error);
}

TEST(MonteCarlo, SecondMomentWithinFourSigma) {
  const auto est = monte_carlo_integrate(
      3, [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }, 1000000, 7);
  EXPECT_LT(std::abs(est.value - 1.5 * std::pow(pi, 1.5)), 4.0 * est.error);
}

TEST(MonteCarlo, SameBitsAtAnyThreadCount) {
  auto f = [](std::span<const double> x) { return std::exp(x[0]) * x[1] * x[1]; };
  set_thread_count(1);
  const auto a = monte_carlo_integrate(2, f, 50000, 42);
  set_thread_count(4);
  const auto b = monte_carlo_integrate(2, f, 50000, 42);
  set_thread_count(0);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.error, b.error);
  const auto c = monte_carlo_integrate(2, f, 50000, 43);
  EXPECT_NE(a.value, c.value);
}

TEST(Parallel, PairwiseSumIsOrderIndependentOfThreads) {
  std::vector<double> xs(10007);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::sin(0.37 * i) * 1e3 + 1e-7 * i;
  set_thread_count(1);
  const double a = pairwise_sum(xs);
  set_thread_count(3);
  const double b = pairwise_sum(xs);
  set_thread_count(0);
  EXPECT_EQ(a, b);
}

#include <cmath>

#include <gtest/gtest.h>

#include "specgap/spectral.hpp"

using namespace specgap;

namespace {

const auto one_phi = KineticKernel::constant(1.0);
const auto one_b = AngularKernel::constant(1.0);

}  // namespace

TEST(Lambda0, MaxwellValue) {
  EXPECT_NEAR(bobylev_lambda0(one_b), 4.0 * pi / 3.0, 1e-12);
  EXPECT_NEAR(bobylev_lambda0(AngularKernel::constant(2.5)), 2.5 * 4.0 * pi / 3.0, 1e-12);
}

TEST(Lambda0, LinearKernelClosedForm) {
  // int_0^pi theta sin^3(theta) = (pi/2) int_0^pi sin^3 = 2 pi / 3, by theta -> pi - theta.
  EXPECT_NEAR(bobylev_lambda0(AngularKernel::linear(257)), 2.0 * pi * pi / 3.0, 1e-12);
}

TEST(Lambda0, GrazingSweepApproachesMomentLimit) {
  const Mollifier j = Mollifier::bump();
  const auto t = lambda0_sweep(j, {0.4, 0.2, 0.1, 0.05});
  for (const auto& r : t.rows) EXPECT_NEAR(r.limit, 2.0 * pi * j.second_moment, 1e-15);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_LT(t.rows[i].rel_error, t.rows[i - 1].rel_error);
  EXPECT_GE(t.fitted_order, 0.8);
  EXPECT_NEAR(t.fitted_order, 2.0, 0.05);
}

TEST(Assembly, GramIsIdentityInBothNormalizations) {
  for (auto norm : {Normalization::unit_mass, Normalization::paper_raw}) {
    const auto s = assemble_landau(one_phi, 4, 3, norm);
    EXPECT_LT((s.G - Eigen::MatrixXd::Identity(s.G.rows(), s.G.cols())).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((s.A - s.A.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Assembly, FullAndReducedAgree) {
  auto basis = std::make_shared<const BasisSet>(3, 4);
  const auto phi = KineticKernel::power(1.0);
  const Eigen::MatrixXd reduced = boltzmann_form(basis, phi, one_b).matrix();
  const Eigen::MatrixXd full = boltzmann_matrix_full(*basis, phi, one_b);
  EXPECT_LT((reduced - full).cwiseAbs().maxCoeff(), 1e-10 * reduced.cwiseAbs().maxCoeff());
}

TEST(Assembly, PolarizationMatchesDirectDissipation) {
  auto basis = std::make_shared<const BasisSet>(3, 4);
  const auto phi = KineticKernel::power(1.0);
  const auto form = boltzmann_form(basis, phi, one_b);
  Eigen::VectorXd c(basis->size());
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = std::sin(1.7 * i + 0.3);
  const auto h = TestFunction::expansion(basis, c);
  const double direct = d_boltzmann(h, phi, one_b).value;
  EXPECT_NEAR(form.evaluate(c).value / direct, 1.0, 1e-11);
  const auto lform = landau_form(basis, phi);
  EXPECT_NEAR(lform.evaluate(c).value / d_landau(h, phi).value, 1.0, 1e-11);
}

TEST(Assembly, NormalizationScalesRawByPiToThreeHalves) {
  const auto unit = assemble_boltzmann(one_phi, one_b, 4, 3, Normalization::unit_mass);
  const auto raw = assemble_boltzmann(one_phi, one_b, 4, 3, Normalization::paper_raw);
  EXPECT_NEAR(spectral_gap(raw).gap / spectral_gap(unit).gap, std::pow(pi, 1.5), 1e-12);
}

TEST(Assembly, TruncationLimits) {
  EXPECT_THROW(spectral_gap(assemble_landau(one_phi, 1)), DomainError);
  EXPECT_THROW(assemble_landau(one_phi, 11), ResourceError);
  EXPECT_THROW(assemble_landau(one_phi, -1), DomainError);
}

TEST(SpectralGap, MaxwellBoltzmann) {
  const auto s = assemble_boltzmann(one_phi, one_b, 6);
  const auto g = spectral_gap(s);
  EXPECT_NEAR(g.gap, 4.0 * pi / 3.0, 1e-11);
  EXPECT_EQ(g.multiplicity, 4);
  // Rayleigh quotient of the returned eigenvector, and G-orthogonality to invariants.
  const Eigen::VectorXd& x = g.eigenvector;
  EXPECT_NEAR(x.dot(s.A * x) / x.dot(s.G * x), g.gap, 1e-11);
  for (std::size_t i = 0; i < s.basis->size(); ++i) {
    if ((*s.basis)[i].is_invariant()) EXPECT_NEAR((s.G * x)(i), 0.0, 1e-12);
  }
}

TEST(SpectralGap, TableIsNonIncreasing) {
  const auto s = assemble_boltzmann(KineticKernel::power(1.0), one_b, 6);
  const auto rows = gap_table(s, {2, 3, 4, 5, 6});
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].gap, rows[i - 1].gap * (1.0 + 1e-12));
  // Frozen: hard-sphere gap (unit mass) at truncation 6, default grids.
  EXPECT_NEAR(rows.back().gap, 9.914079791977057, 1e-9);
}

TEST(SpectralGap, MaxwellLandau) {
  const auto g = spectral_gap(assemble_landau(one_phi, 6));
  EXPECT_NEAR(g.gap, 8.0, 1e-11);
  EXPECT_EQ(g.multiplicity, 4);
  EXPECT_GE(g.gap, 2.0 * pi);
  // Next level: the traceless quadratic modes at 12.
  EXPECT_NEAR(g.spectrum(4), 12.0, 1e-10);
}

TEST(SpectralGap, TwoDimensionalMaxwell) {
  // On the circle with b = 1 the heat-flux pair and the (n=2, l=0) mode share
  // -int_0^{2pi} (cos^4(t/2) + sin^4(t/2) - 1) dt = pi/2.
  const auto g = spectral_gap(assemble_boltzmann(one_phi, one_b, 6, 2));
  EXPECT_NEAR(g.gap, pi / 2.0, 1e-12);
  EXPECT_EQ(g.multiplicity, 3);
}

TEST(SystemJson, HasBundleKeys) {
  const auto j = to_json(assemble_landau(one_phi, 2));
  for (const char* k : {"basis", "A", "G", "normalization", "grid-meta"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["normalization"], "unit-mass");
  EXPECT_EQ(j["A"].size(), 10u);
}

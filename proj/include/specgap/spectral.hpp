#pragma once

// Galerkin systems (A, G) for the linearized operators and their spectral gap.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "basis.hpp"
#include "forms.hpp"
#include "kernels.hpp"

namespace specgap {

struct GalerkinSystem {
  std::shared_ptr<const BasisSet> basis;
  Eigen::MatrixXd A;
  Eigen::MatrixXd G;
  Normalization normalization = Normalization::unit_mass;
  nlohmann::json grid_meta;
};

namespace detail {
inline GalerkinSystem system_from_form(const BlockForm& form, Normalization norm, const std::string& op) {
  const BasisSet& raw = *form.basis;
  GalerkinSystem s;
  s.basis = std::make_shared<const BasisSet>(raw.dim(), raw.truncation(), norm);
  // phi_unit = pi^{N/4} phi_raw and M_unit = pi^{-N/2} M, so D scales by pi^{-N/2}.
  s.A = form.matrix() * (norm == Normalization::unit_mass ? std::pow(pi, -0.5 * raw.dim()) : 1.0);
  s.G = gram_matrix(*s.basis);
  s.normalization = norm;
  s.grid_meta = to_json(form.grids);
  s.grid_meta["operator"] = op;
  s.grid_meta["assembly"] = "symmetry-reduced";
  return s;
}

inline void check_truncation(int truncation) {
  if (truncation < 0) throw DomainError("truncation must be >= 0");
  if (truncation > 10) throw ResourceError("truncation above 10 is outside desk scale");
}
}  // namespace detail

inline GalerkinSystem assemble_boltzmann(const KineticKernel& phi, const AngularKernel& b, int truncation, int N = 3,
                                         Normalization norm = Normalization::unit_mass, DissipationGrids grids = {}) {
  detail::check_truncation(truncation);
  auto raw = std::make_shared<const BasisSet>(N, truncation, Normalization::paper_raw);
  GalerkinSystem s = detail::system_from_form(boltzmann_form(raw, phi, b, grids), norm, "boltzmann");
  s.grid_meta["phi"] = to_json(phi);
  s.grid_meta["b"] = to_json(b);
  return s;
}

inline GalerkinSystem assemble_landau(const KineticKernel& phi, int truncation, int N = 3,
                                      Normalization norm = Normalization::unit_mass, DissipationGrids grids = {}) {
  detail::check_truncation(truncation);
  auto raw = std::make_shared<const BasisSet>(N, truncation, Normalization::paper_raw);
  GalerkinSystem s = detail::system_from_form(landau_form(raw, phi, grids), norm, "landau");
  s.grid_meta["phi"] = to_json(phi);
  return s;
}

/// Leading block of degree <= t (the basis is ordered by degree).
inline GalerkinSystem truncate(const GalerkinSystem& s, int t) {
  if (t > s.basis->truncation()) throw DomainError("truncate: degree above assembled truncation");
  GalerkinSystem r;
  r.basis = std::make_shared<const BasisSet>(s.basis->dim(), t, s.normalization);
  const auto n = static_cast<Eigen::Index>(r.basis->size());
  r.A = s.A.topLeftCorner(n, n);
  r.G = s.G.topLeftCorner(n, n);
  r.normalization = s.normalization;
  r.grid_meta = s.grid_meta;
  return r;
}

struct GapResult {
  double gap = 0.0;
  int multiplicity = 0;
  Eigen::VectorXd eigenvector;  // coefficients over the system basis, unit G-norm
  Eigen::VectorXd spectrum;     // restricted eigenvalues, ascending
};

inline constexpr double multiplet_tolerance = 1e-8;

/// Smallest generalized eigenvalue of (A, G) on the G-orthogonal complement
/// of the collision invariants 1, v, |v|^2.
inline GapResult spectral_gap(const GalerkinSystem& s) {
  const std::size_t nb = s.basis->size();
  std::vector<int> inv;
  for (std::size_t i = 0; i < nb; ++i) {
    if ((*s.basis)[i].is_invariant()) inv.push_back(static_cast<int>(i));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(nb), k = static_cast<Eigen::Index>(inv.size());
  if (n - k <= 0) throw DomainError("spectral_gap: empty complement (truncation keeps only the invariants)");
  Eigen::LLT<Eigen::MatrixXd> llt(s.G);
  if (llt.info() != Eigen::Success) throw DomainError("spectral_gap: Gram matrix is not positive definite");
  // Complement: null space of C^T G, from a full QR of G C.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, k);
  for (Eigen::Index j = 0; j < k; ++j) C(inv[j], j) = 1.0;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(s.G * C);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd Z = Q.rightCols(n - k);
  const Eigen::MatrixXd Ar = Z.transpose() * s.A * Z;
  const Eigen::MatrixXd Gr = Z.transpose() * s.G * Z;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (Ar + Ar.transpose()),
                                                                0.5 * (Gr + Gr.transpose()));
  if (eig.info() != Eigen::Success) throw DomainError("spectral_gap: eigensolver failed");
  GapResult r;
  r.spectrum = eig.eigenvalues();
  r.gap = r.spectrum(0);
  r.multiplicity = 0;
  for (Eigen::Index i = 0; i < r.spectrum.size(); ++i) {
    if (std::abs(r.spectrum(i) - r.gap) <= multiplet_tolerance * std::max(1.0, std::abs(r.gap))) ++r.multiplicity;
  }
  Eigen::VectorXd x = Z * eig.eigenvectors().col(0);
  x /= std::sqrt(x.dot(s.G * x));
  r.eigenvector = x;
  return r;
}

struct GapRow {
  int truncation = 0;
  double gap = 0.0;
  int multiplicity = 0;
};

/// Gap for each truncation in `degrees`, all taken from one assembled system.
inline std::vector<GapRow> gap_table(const GalerkinSystem& s, const std::vector<int>& degrees) {
  std::vector<GapRow> rows;
  for (int t : degrees) {
    const GapResult g = spectral_gap(truncate(s, t));
    rows.push_back({t, g.gap, g.multiplicity});
  }
  return rows;
}

/// |lambda_0| = pi int_0^pi sin^3(theta) b(theta) dtheta (N = 3).
inline double bobylev_lambda0(const AngularKernel& b_in, int order = 64) {
  const AngularKernel b = with_dim(b_in, 3);
  Rule1D rule;
  if (const auto* t = std::get_if<TabulatedB>(&b.form)) {
    std::vector<double> br{0.0};
    for (double x : t->theta) {
      if (x > br.back() && x < pi) br.push_back(x);
    }
    br.push_back(pi);
    rule = composite_legendre(std::min(order, 16), br);
  } else {
    rule = gauss_legendre_1d(order, 0.0, b_support(b));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double th = rule.nodes[i];
    s += rule.weights[i] * std::sin(th) * std::sin(th) * b_sin_weight(b, th, 3);
  }
  return pi * s;
}

struct Lambda0Row {
  double eps = 0.0;
  double lambda0 = 0.0;
  double limit = 0.0;
  double rel_error = 0.0;
};

struct Lambda0Table {
  std::vector<Lambda0Row> rows;
  double fitted_order = 0.0;
};

/// bobylev_lambda0(b_eps) against its limit 2 pi int j chi^2.
inline Lambda0Table lambda0_sweep(const Mollifier& j, const std::vector<double>& eps) {
  check_eps_list(eps);
  Lambda0Table t;
  const double limit = 2.0 * pi * j.second_moment;
  std::vector<double> errs;
  for (double e : eps) {
    const double l0 = bobylev_lambda0(AngularKernel::grazing(e, j, 3));
    t.rows.push_back({e, l0, limit, std::abs(l0 - limit) / limit});
    errs.push_back(t.rows.back().rel_error);
  }
  t.fitted_order = fitted_order(eps, errs);
  return t;
}

inline nlohmann::json to_json(const GalerkinSystem& s) {
  auto mat = [](const Eigen::MatrixXd& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      std::vector<double> r(M.cols());
      for (Eigen::Index j = 0; j < M.cols(); ++j) r[j] = M(i, j);
      rows.push_back(r);
    }
    return rows;
  };
  return {{"basis", to_json(*s.basis)},
          {"A", mat(s.A)},
          {"G", mat(s.G)},
          {"normalization", to_string(s.normalization)},
          {"grid-meta", s.grid_meta}};
}

}  // namespace specgap

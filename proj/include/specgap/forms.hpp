#pragma once

// Bilinear dissipation forms on the Sonine x harmonic basis (paper-raw weight).
//
// The forms are rotation invariant, so on real harmonics they act as
// a^l (x) I on each angular degree l. The reduced assembly fixes the
// pre-collision direction to e_N, multiplies by |S^{N-1}| and sums the
// products over m; the addition theorem makes this exact.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "basis.hpp"
#include "dissipation.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace specgap {

/// Index lists of the basis grouped by (l, m), each sorted by n.
struct HarmonicGroups {
  std::vector<std::vector<std::vector<int>>> of;  // of[l][k] = indices for the k-th m of degree l

  explicit HarmonicGroups(const BasisSet& basis) {
    const int L = basis.truncation();
    of.resize(L + 1);
    for (int l = 0; l <= L; ++l) {
      std::vector<int> ms;
      for (const auto& b : basis.indices()) {
        if (b.l == l && std::find(ms.begin(), ms.end(), b.m) == ms.end()) ms.push_back(b.m);
      }
      std::sort(ms.begin(), ms.end());
      for (int m : ms) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < basis.size(); ++i) {
          if (basis[i].l == l && basis[i].m == m) idx.push_back(static_cast<int>(i));
        }
        of[l].push_back(idx);
      }
    }
  }
};

/// Rotation-invariant quadratic form stored as one block a^l per degree l.
struct BlockForm {
  std::shared_ptr<const BasisSet> basis;
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<Eigen::MatrixXd> error_blocks;  // |a - a_lower| when requested
  DissipationGrids grids;
  std::string label;

  /// Dense matrix over the basis.
  Eigen::MatrixXd matrix() const { return expand(blocks); }
  Eigen::MatrixXd error_matrix() const {
    return error_blocks.empty() ? Eigen::MatrixXd::Zero(basis->size(), basis->size()) : expand(error_blocks);
  }

  IntegralEstimate evaluate(const Eigen::VectorXd& c) const {
    IntegralEstimate e;
    const HarmonicGroups g(*basis);
    for (std::size_t l = 0; l < blocks.size(); ++l) {
      for (const auto& idx : g.of[l]) {
        Eigen::VectorXd x(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) x(k) = c(idx[k]);
        e.value += x.dot(blocks[l] * x);
        if (!error_blocks.empty()) e.error += x.cwiseAbs().dot(error_blocks[l] * x.cwiseAbs());
      }
    }
    return e;
  }

 private:
  Eigen::MatrixXd expand(const std::vector<Eigen::MatrixXd>& b) const {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(basis->size(), basis->size());
    const HarmonicGroups g(*basis);
    for (std::size_t l = 0; l < b.size(); ++l) {
      for (const auto& idx : g.of[l]) {
        for (std::size_t i = 0; i < idx.size(); ++i) {
          for (std::size_t j = 0; j < idx.size(); ++j) A(idx[i], idx[j]) = b[l](i, j);
        }
      }
    }
    return A;
  }
};

namespace detail {

/// Per-chunk Gram accumulation: columns sqrt(w) * x restricted to each (l, m)
/// group, flushed into per-degree sums S_l += X X^T.
class GroupAccumulator {
 public:
  GroupAccumulator(const HarmonicGroups& g, std::size_t reserve) : g_(g) {
    const std::size_t L = g.of.size();
    X_.resize(L);
    used_.assign(L, 0);
    S_.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
      const int n = g.of[l].empty() ? 0 : static_cast<int>(g.of[l][0].size());
      X_[l].resize(n, static_cast<Eigen::Index>(reserve * g.of[l].size()));
      S_[l] = Eigen::MatrixXd::Zero(n, n);
    }
  }

  template <class Get>
  void add(double w, Get&& value_of_index) {
    const double s = std::sqrt(w);
    for (std::size_t l = 0; l < X_.size(); ++l) {
      for (const auto& idx : g_.of[l]) {
        if (used_[l] == X_[l].cols()) flush(l);
        for (std::size_t k = 0; k < idx.size(); ++k) X_[l](k, used_[l]) = s * value_of_index(idx[k]);
        ++used_[l];
      }
    }
  }

  std::vector<Eigen::MatrixXd> finish() {
    for (std::size_t l = 0; l < X_.size(); ++l) flush(l);
    return S_;
  }

 private:
  void flush(std::size_t l) {
    if (used_[l] == 0) return;
    const auto Xl = X_[l].leftCols(used_[l]);
    S_[l].noalias() += Xl * Xl.transpose();
    used_[l] = 0;
  }

  const HarmonicGroups& g_;
  std::vector<Eigen::MatrixXd> X_;
  std::vector<Eigen::Index> used_;
  std::vector<Eigen::MatrixXd> S_;
};

inline std::vector<Eigen::MatrixXd> sum_blocks(const std::vector<std::vector<Eigen::MatrixXd>>& parts) {
  return pairwise_reduce(std::span<const std::vector<Eigen::MatrixXd>>(parts),
                         [](const std::vector<Eigen::MatrixXd>& a, const std::vector<Eigen::MatrixXd>& b) {
                           std::vector<Eigen::MatrixXd> r = a;
                           for (std::size_t l = 0; l < r.size(); ++l) r[l] += b[l];
                           return r;
                         });
}

inline Vec unit_pole(int N) {
  Vec e = Vec::Zero(N);
  e(N - 1) = 1.0;
  return e;
}

enum class FormKind { boltzmann, landau, difference };

inline std::vector<Eigen::MatrixXd> reduced_blocks(FormKind kind, const BasisSet& basis, const KineticKernel& phi,
                                                   const AngularKernel* b, const DissipationGrids& g) {
  const int N = basis.dim();
  const HarmonicGroups groups(basis);
  const QuadratureGrid omega = scaled_hermite_grid(g.velocity_order, N, 2.0);
  const Vec e = unit_pole(N);
  const auto F = orthonormal_frame(e);
  const std::size_t nb = basis.size();
  Rule1D radial;
  DeviationRule dev;
  double pref = 0.0;
  switch (kind) {
    case FormKind::boltzmann:
      radial = kernel_radial_rule(phi, g.radial_order, N - 1.0, 2.0, 2.0);
      dev = make_deviation_rule(*b, N, g.angle_order, g.azimuth_order);
      pref = std::pow(2.0, N) / 4.0;
      break;
    case FormKind::landau:
      radial = kernel_radial_rule(phi, g.radial_order, N + 1.0, 0.5, 1.0);
      pref = 0.5;
      break;
    case FormKind::difference:
      radial = kernel_radial_rule(phi, g.radial_order, N - 1.0, 0.5, 1.0);
      pref = 1.0;
      break;
  }
  std::vector<std::vector<Eigen::MatrixXd>> parts(omega.size());
  for_each_chunk(omega.size(), [&](std::size_t io) {
    const Vec O = omega.node(io);
    const std::size_t per = kind == FormKind::boltzmann ? radial.size() * dev.size() : radial.size() * (N - 1);
    GroupAccumulator acc(groups, std::max<std::size_t>(per, 1));
    std::vector<double> k(nb);
    for (std::size_t ir = 0; ir < radial.size(); ++ir) {
      const double r = radial.nodes[ir];
      const double wr = omega.weights[io] * radial.weights[ir];
      if (kind == FormKind::boltzmann) {
        const auto a = basis.values(O + r * e), c = basis.values(O - r * e);
        for (std::size_t q = 0; q < dev.size(); ++q) {
          const Vec s1 = deviate(e, F, dev, q);
          const auto p = basis.values(O + r * s1), s = basis.values(O - r * s1);
          for (std::size_t i = 0; i < nb; ++i) k[i] = p[i] + s[i] - a[i] - c[i];
          acc.add(wr * dev.weights[q], [&](int i) { return k[i]; });
        }
      } else if (kind == FormKind::landau) {
        const Eigen::MatrixXd d = basis.gradients(O + 0.5 * r * e) - basis.gradients(O - 0.5 * r * e);
        for (int t = 0; t < N - 1; ++t) acc.add(wr, [&](int i) { return d(i, t); });
      } else {
        const auto a = basis.values(O + 0.5 * r * e), c = basis.values(O - 0.5 * r * e);
        for (std::size_t i = 0; i < nb; ++i) k[i] = a[i] - c[i];
        acc.add(wr, [&](int i) { return k[i]; });
      }
    }
    parts[io] = acc.finish();
  });
  auto blocks = sum_blocks(parts);
  const double area = sphere_area(N);
  for (std::size_t l = 0; l < blocks.size(); ++l) {
    blocks[l] *= pref * area / harmonic_multiplicity(N, static_cast<int>(l));
  }
  return blocks;
}

inline BlockForm make_form(FormKind kind, std::shared_ptr<const BasisSet> basis, const KineticKernel& phi,
                           const AngularKernel* b, DissipationGrids grids, std::string label) {
  if (basis->normalization() != Normalization::paper_raw) {
    throw DomainError("block forms are assembled on the paper-raw basis");
  }
  BlockForm f;
  f.basis = basis;
  f.label = std::move(label);
  f.grids = resolve_grids(grids, basis->truncation(), b);
  f.blocks = reduced_blocks(kind, *basis, phi, b, f.grids);
  if (f.grids.embedded) {
    const auto lower = reduced_blocks(kind, *basis, phi, b, lower_grids(f.grids));
    for (std::size_t l = 0; l < lower.size(); ++l) f.error_blocks.push_back((f.blocks[l] - lower[l]).cwiseAbs());
  }
  return f;
}
}  // namespace detail

/// Boltzmann form D(f, g) with B = Phi b, reduced assembly.
inline BlockForm boltzmann_form(std::shared_ptr<const BasisSet> basis, const KineticKernel& phi,
                                const AngularKernel& b, DissipationGrids grids = {}) {
  const AngularKernel bb = with_dim(b, basis->dim());
  return detail::make_form(detail::FormKind::boltzmann, basis, phi, &bb, grids,
                           "boltzmann " + describe(phi) + " " + describe(b));
}

/// Landau form 1/2 int int Phi |z|^2 <Pi grad f-diff, Pi grad g-diff> M M*.
inline BlockForm landau_form(std::shared_ptr<const BasisSet> basis, const KineticKernel& phi,
                             DissipationGrids grids = {}) {
  return detail::make_form(detail::FormKind::landau, basis, phi, nullptr, grids, "landau " + describe(phi));
}

/// int int (f(x) - f(y)) (g(x) - g(y)) Phi(|x - y|) M(x) M(y) dx dy.
inline BlockForm difference_form(std::shared_ptr<const BasisSet> basis, const KineticKernel& phi,
                                 DissipationGrids grids = {}) {
  return detail::make_form(detail::FormKind::difference, basis, phi, nullptr, grids, "difference " + describe(phi));
}

/// Boltzmann matrix without the symmetry reduction: the pre-collision
/// direction runs over a sphere rule and every index pair is accumulated.
inline Eigen::MatrixXd boltzmann_matrix_full(const BasisSet& basis, const KineticKernel& phi, const AngularKernel& b_in,
                                             DissipationGrids grids = {}) {
  const int N = basis.dim();
  const AngularKernel b = with_dim(b_in, N);
  const DissipationGrids g = resolve_grids(grids, basis.truncation(), &b);
  const QuadratureGrid omega = scaled_hermite_grid(g.velocity_order, N, 2.0);
  const Rule1D radial = kernel_radial_rule(phi, g.radial_order, N - 1.0, 2.0, 2.0);
  const QuadratureGrid s2 = sphere_grid(N, g.sphere_order);
  const DeviationRule dev = make_deviation_rule(b, N, g.angle_order, g.azimuth_order);
  const std::size_t nb = basis.size();
  std::vector<Eigen::MatrixXd> parts(omega.size());
  for_each_chunk(omega.size(), [&](std::size_t io) {
    const Vec O = omega.node(io);
    Eigen::MatrixXd X(nb, radial.size() * dev.size());
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nb, nb);
    for (std::size_t is = 0; is < s2.size(); ++is) {
      const Vec e = s2.node(is);
      const auto F = orthonormal_frame(e);
      Eigen::Index col = 0;
      for (std::size_t ir = 0; ir < radial.size(); ++ir) {
        const double r = radial.nodes[ir];
        const auto a = basis.values(O + r * e), c = basis.values(O - r * e);
        for (std::size_t q = 0; q < dev.size(); ++q) {
          const Vec s1 = detail::deviate(e, F, dev, q);
          const auto p = basis.values(O + r * s1), s = basis.values(O - r * s1);
          const double w = std::sqrt(s2.weights[is] * radial.weights[ir] * dev.weights[q]);
          for (std::size_t i = 0; i < nb; ++i) X(i, col) = w * (p[i] + s[i] - a[i] - c[i]);
          ++col;
        }
      }
      S.noalias() += X.leftCols(col) * X.leftCols(col).transpose();
    }
    parts[io] = omega.weights[io] * S;
  });
  const Eigen::MatrixXd A = pairwise_reduce(std::span<const Eigen::MatrixXd>(parts),
                                            [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) -> Eigen::MatrixXd { return x + y; });
  return std::pow(2.0, N) / 4.0 * A;
}

/// Gram matrix <phi_i, phi_j> under the basis' own normalization.
inline Eigen::MatrixXd gram_matrix(const BasisSet& basis) {
  const int N = basis.dim();
  const QuadratureGrid g = gauss_hermite_grid(basis.truncation() + 2, N);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = basis.values(g.node(i));
    const Eigen::Map<const Eigen::VectorXd> x(v.data(), v.size());
    G.noalias() += g.weights[i] * x * x.transpose();
  }
  G *= mass_scale(basis.normalization(), N);
  return 0.5 * (G + G.transpose());
}

}  // namespace specgap

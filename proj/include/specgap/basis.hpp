#pragma once

// Sonine x solid-harmonic basis phi_{nlm}(v) = L_n^{(l+N/2-1)}(|v|^2) R_{lm}(v) / c_{nl},
// orthonormal in L^2(M).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "core.hpp"
#include "jet.hpp"

namespace specgap {

struct BasisIndex {
  int n = 0;
  int l = 0;
  int m = 0;

  int degree() const { return 2 * n + l; }
  bool is_invariant() const { return (n == 0 && l <= 1) || (n == 1 && l == 0); }
  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

inline std::string to_string(const BasisIndex& i) {
  return "(" + std::to_string(i.n) + "," + std::to_string(i.l) + "," + std::to_string(i.m) + ")";
}

/// Number of angular orders m for degree l.
inline int harmonic_multiplicity(int N, int l) { return N == 3 ? 2 * l + 1 : (l == 0 ? 1 : 2); }

/// All indices with 2n + l <= truncation, sorted by (degree, l, m), so every
/// lower truncation is a leading block.
class BasisSet {
 public:
  BasisSet(int N, int truncation, Normalization norm = Normalization::paper_raw)
      : N_(N), T_(truncation), norm_(norm) {
    if (N != 2 && N != 3) throw DomainError("BasisSet: N must be 2 or 3");
    if (truncation < 0) throw DomainError("BasisSet: truncation must be >= 0");
    for (int d = 0; d <= truncation; ++d) {
      for (int l = d % 2; l <= d; l += 2) {
        const int n = (d - l) / 2;
        if (N == 3) {
          for (int m = -l; m <= l; ++m) idx_.push_back({n, l, m});
        } else if (l == 0) {
          idx_.push_back({n, 0, 0});
        } else {
          idx_.push_back({n, l, -l});
          idx_.push_back({n, l, l});
        }
      }
    }
    const double unit = norm == Normalization::unit_mass ? std::pow(pi, 0.25 * N) : 1.0;
    scale_.resize(idx_.size());
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      const int n = idx_[i].n, l = idx_[i].l;
      const double alpha = l + 0.5 * N - 1.0;
      const double sq = 0.5 * std::exp(std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0));
      scale_[i] = unit / std::sqrt(sq);
    }
  }

  int dim() const { return N_; }
  int truncation() const { return T_; }
  Normalization normalization() const { return norm_; }
  std::size_t size() const { return idx_.size(); }
  const BasisIndex& operator[](std::size_t i) const { return idx_[i]; }
  const std::vector<BasisIndex>& indices() const { return idx_; }

  /// Position of (n, l, m), or -1.
  int find(int n, int l, int m) const {
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      if (idx_[i] == BasisIndex{n, l, m}) return static_cast<int>(i);
    }
    return -1;
  }

  /// Number of leading indices with degree <= t.
  std::size_t prefix_size(int t) const {
    return static_cast<std::size_t>(
        std::count_if(idx_.begin(), idx_.end(), [t](const BasisIndex& b) { return b.degree() <= t; }));
  }

  /// Values of every basis function at v (Scalar = double or Jet).
  template <class Scalar>
  void evaluate(const std::array<Scalar, 3>& v, std::vector<Scalar>& out) const;

  std::vector<double> values(const Vec& v) const {
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (int d = 0; d < N_; ++d) p[d] = v(d);
    std::vector<double> out;
    evaluate(p, out);
    return out;
  }

  /// Gradients (row i = grad phi_i) at v.
  Eigen::MatrixXd gradients(const Vec& v) const {
    std::array<Jet, 3> p;
    for (int d = 0; d < N_; ++d) p[d] = Jet::variable(v(d), d);
    std::vector<Jet> out;
    evaluate(p, out);
    Eigen::MatrixXd g(out.size(), N_);
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (int d = 0; d < N_; ++d) g(i, d) = out[i].d[d];
    }
    return g;
  }

 private:
  int N_;
  int T_;
  Normalization norm_;
  std::vector<BasisIndex> idx_;
  std::vector<double> scale_;
};

namespace detail {
/// Orthonormal real solid harmonics r^l Y_lm(v/r) for N = 3, index [l][m + l].
template <class S>
std::vector<std::vector<S>> solid_harmonics_3d(const std::array<S, 3>& v, int L) {
  const S& x = v[0];
  const S& y = v[1];
  const S& z = v[2];
  const S r2 = x * x + y * y + z * z;
  // C_m + i S_m = (x + i y)^m
  std::vector<S> C(L + 1), Sn(L + 1);
  C[0] = S(1.0);
  Sn[0] = S(0.0);
  for (int m = 1; m <= L; ++m) {
    C[m] = x * C[m - 1] - y * Sn[m - 1];
    Sn[m] = x * Sn[m - 1] + y * C[m - 1];
  }
  std::vector<std::vector<S>> out(L + 1);
  for (int l = 0; l <= L; ++l) out[l].assign(2 * l + 1, S(0.0));
  for (int m = 0; m <= L; ++m) {
    // Pi_l^m(z, r^2): P_l^m(cos) sin^{-m} r^{l-m}, without the Condon-Shortley sign.
    std::vector<S> P(L + 1, S(0.0));
    double dfact = 1.0;
    for (int k = 1; k <= 2 * m - 1; k += 2) dfact *= k;
    P[m] = S(dfact);
    if (m + 1 <= L) P[m + 1] = (2.0 * m + 1.0) * (z * P[m]);
    for (int l = m + 2; l <= L; ++l) {
      P[l] = ((2.0 * l - 1.0) * (z * P[l - 1]) - (l + m - 1.0) * (r2 * P[l - 2])) / static_cast<double>(l - m);
    }
    for (int l = m; l <= L; ++l) {
      if (m == 0) {
        out[l][l] = std::sqrt((2.0 * l + 1.0) / (4.0 * pi)) * P[l];
      } else {
        const double ratio = std::exp(std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0));
        const double K = std::sqrt((2.0 * l + 1.0) / (2.0 * pi) * ratio);
        out[l][l + m] = K * (P[l] * C[m]);
        out[l][l - m] = K * (P[l] * Sn[m]);
      }
    }
  }
  return out;
}

/// N = 2: index [l][0] = sine part (m = -l), [l][1] = cosine part (m = +l).
template <class S>
std::vector<std::vector<S>> solid_harmonics_2d(const std::array<S, 3>& v, int L) {
  std::vector<std::vector<S>> out(L + 1);
  out[0] = {S(1.0 / std::sqrt(2.0 * pi))};
  S c(1.0), s(0.0);
  const double k = 1.0 / std::sqrt(pi);
  for (int l = 1; l <= L; ++l) {
    const S cn = v[0] * c - v[1] * s;
    const S sn = v[0] * s + v[1] * c;
    c = cn;
    s = sn;
    out[l] = {k * s, k * c};
  }
  return out;
}
}  // namespace detail

template <class Scalar>
void BasisSet::evaluate(const std::array<Scalar, 3>& v, std::vector<Scalar>& out) const {
  const int L = T_;
  std::array<Scalar, 3> p = v;
  if (N_ == 2) p[2] = Scalar(0.0);
  const Scalar x = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
  const auto Y = N_ == 3 ? detail::solid_harmonics_3d(p, L) : detail::solid_harmonics_2d(p, L);
  // Laguerre values lag[l][n] with alpha = l + N/2 - 1.
  std::vector<std::vector<Scalar>> lag(L + 1);
  for (int l = 0; l <= L; ++l) {
    const int nmax = (L - l) / 2;
    const double a = l + 0.5 * N_ - 1.0;
    auto& Ln = lag[l];
    Ln.resize(nmax + 1);
    Ln[0] = Scalar(1.0);
    if (nmax >= 1) Ln[1] = Scalar(1.0 + a) - x;
    for (int k = 1; k + 1 <= nmax; ++k) {
      Ln[k + 1] = ((Scalar(2.0 * k + 1.0 + a) - x) * Ln[k] - (k + a) * Ln[k - 1]) / (k + 1.0);
    }
  }
  out.resize(idx_.size());
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    const auto& b = idx_[i];
    const int mi = N_ == 3 ? b.m + b.l : (b.l == 0 ? 0 : (b.m < 0 ? 0 : 1));
    out[i] = scale_[i] * (lag[b.l][b.n] * Y[b.l][mi]);
  }
}

inline nlohmann::json to_json(const BasisSet& basis) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : basis.indices()) arr.push_back({b.n, b.l, b.m});
  return arr;
}

}  // namespace specgap

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace specgap {

inline constexpr double pi = std::numbers::pi;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A structural hypothesis on the collision kernel does not hold
/// (c_Phi = 0, c_b = 0, non-monotone b~, ...).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// Non-finite integrand or other failure inside a quadrature.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A rule is too coarse for the integrand it was asked to resolve.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Requested size exceeds what the library supports.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or kernel description.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Velocity-space point. Dimension is a runtime value in {1, 2, 3}; storage is
/// inline so small vectors never touch the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

/// Surface measure |S^{N-1}| of the unit sphere in R^N.
inline double sphere_area(int N) {
  if (N < 1) throw DomainError("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(pi, 0.5 * N) / std::tgamma(0.5 * N);
}

inline void require_dimension(int N, int lo, int hi, std::string_view what) {
  if (N < lo || N > hi) {
    throw DomainError(std::string(what) + ": dimension " + std::to_string(N) +
                      " outside supported range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
}

/// Measure convention for L^2(M).
///   paper_raw : M(v) = exp(-|v|^2), total mass pi^{N/2}
///   unit_mass : M(v) = exp(-|v|^2) / pi^{N/2}
enum class Normalization { paper_raw, unit_mass };

inline std::string to_string(Normalization n) {
  return n == Normalization::paper_raw ? "paper-raw" : "unit-mass";
}

inline Normalization parse_normalization(std::string_view s) {
  if (s == "paper-raw" || s == "paper_raw" || s == "raw") return Normalization::paper_raw;
  if (s == "unit-mass" || s == "unit_mass" || s == "unit") return Normalization::unit_mass;
  throw ConfigError("unknown normalization '" + std::string(s) + "'");
}

/// Factor applied to exp(-|v|^2) to obtain M under the given convention.
inline double mass_scale(Normalization n, int N) {
  return n == Normalization::paper_raw ? 1.0 : std::pow(pi, -0.5 * N);
}

/// Returns an orthonormal basis of e^perp (columns), e a unit vector in R^N.
inline Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 2> orthonormal_frame(const Vec& e) {
  const int N = static_cast<int>(e.size());
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 2> F(N, N - 1);
  if (N == 2) {
    F(0, 0) = -e(1);
    F(1, 0) = e(0);
  } else if (N == 3) {
    Eigen::Vector3d a = std::abs(e(0)) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    Eigen::Vector3d ev(e(0), e(1), e(2));
    Eigen::Vector3d f1 = a.cross(ev).normalized();
    Eigen::Vector3d f2 = ev.cross(f1);
    F.col(0) = f1;
    F.col(1) = f2;
  }
  return F;
}

}  // namespace specgap

#pragma once

// Gauss rules, tensor/sphere grids and seeded Monte Carlo. The Gaussian weight
// exp(-|v|^2) is part of every rule: integrands never carry it.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "core.hpp"
#include "parallel.hpp"

namespace specgap {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss rule of size n for the measure whose monic orthogonal polynomials
/// satisfy p_{k+1} = (x - a_k) p_k - b_k p_{k-1}, with mu0 = total mass.
/// Nodes come from the Jacobi matrix, are Newton-polished on the orthonormal
/// recurrence, and weights are Christoffel numbers 1 / sum_k p_k(x)^2.
template <class A, class B>
Rule1D gauss_rule(int n, A&& a, B&& b, double mu0) {
  if (n < 1) throw DomainError("gauss_rule: order must be >= 1");
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) diag(k) = a(k);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(b(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  // Orthonormal recurrence: sqrt(b_{k+1}) q_{k+1} = (x - a_k) q_k - sqrt(b_k) q_{k-1}.
  auto evaluate = [&](double x, double& qn, double& dqn, double& christoffel) {
    double q_prev = 0.0, dq_prev = 0.0;
    double q = 1.0 / std::sqrt(mu0), dq = 0.0;
    christoffel = q * q;
    for (int k = 0; k < n; ++k) {
      const double sb_next = std::sqrt(b(k + 1));
      const double sb = k > 0 ? std::sqrt(b(k)) : 0.0;
      const double q_next = ((x - a(k)) * q - sb * q_prev) / sb_next;
      const double dq_next = (q + (x - a(k)) * dq - sb * dq_prev) / sb_next;
      q_prev = q;
      dq_prev = dq;
      q = q_next;
      dq = dq_next;
      if (k + 1 < n) christoffel += q * q;
    }
    qn = q;
    dqn = dq;
  };

  for (int i = 0; i < n; ++i) {
    double x = eig.eigenvalues()(i);
    double qn = 0.0, dqn = 0.0, c = 0.0;
    for (int it = 0; it < 8; ++it) {
      evaluate(x, qn, dqn, c);
      if (dqn == 0.0) break;
      const double step = qn / dqn;
      x -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    }
    evaluate(x, qn, dqn, c);
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / c;
  }
  return rule;
}

namespace detail {
/// Enforces x_i = -x_{n-1-i} and equal paired weights for a symmetric measure,
/// so odd moments cancel exactly and the middle node of an odd rule is 0.
inline Rule1D symmetrized(Rule1D r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t k = n - 1 - i;
    const double x = 0.5 * (r.nodes[k] - r.nodes[i]), w = 0.5 * (r.weights[i] + r.weights[k]);
    r.nodes[i] = -x;
    r.nodes[k] = x;
    r.weights[i] = r.weights[k] = w;
  }
  if (n % 2) r.nodes[n / 2] = 0.0;
  return r;
}
}  // namespace detail

/// Gauss-Hermite rule for weight exp(-x^2) on R.
inline Rule1D gauss_hermite_1d(int n) {
  return detail::symmetrized(gauss_rule(
      n, [](int) { return 0.0; }, [](int k) { return 0.5 * k; }, std::sqrt(pi)));
}

/// Gauss-Legendre rule on [lo, hi].
inline Rule1D gauss_legendre_1d(int n, double lo = -1.0, double hi = 1.0) {
  Rule1D r = detail::symmetrized(gauss_rule(
      n, [](int) { return 0.0; },
      [](int k) {
        const double kk = static_cast<double>(k) * k;
        return kk / (4.0 * kk - 1.0);
      },
      2.0));
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

/// Generalized Gauss-Laguerre rule for weight x^alpha exp(-x) on [0, inf).
inline Rule1D gauss_laguerre_1d(int n, double alpha) {
  if (!(alpha > -1.0)) throw DomainError("gauss_laguerre_1d: alpha must exceed -1");
  return gauss_rule(
      n, [alpha](int k) { return 2.0 * k + alpha + 1.0; }, [alpha](int k) { return k * (k + alpha); },
      std::tgamma(alpha + 1.0));
}

/// Rule for int_0^inf f(r) r^p exp(-c r^2) dr, exact when f is an even
/// polynomial of degree <= 4n - 2 (substitution x = c r^2).
inline Rule1D radial_rule(int n, double p, double c) {
  if (!(p > -1.0) || !(c > 0.0)) throw DomainError("radial_rule: need p > -1 and c > 0");
  Rule1D lag = gauss_laguerre_1d(n, 0.5 * (p - 1.0));
  const double scale = 0.5 * std::pow(c, -0.5 * (p + 1.0));
  for (std::size_t i = 0; i < lag.size(); ++i) {
    lag.nodes[i] = std::sqrt(lag.nodes[i] / c);
    lag.weights[i] *= scale;
  }
  return lag;
}

/// Composite Gauss-Legendre over consecutive panels given by breakpoints.
inline Rule1D composite_legendre(int n, std::span<const double> breaks) {
  Rule1D out;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    if (!(breaks[p + 1] > breaks[p])) continue;
    Rule1D r = gauss_legendre_1d(n, breaks[p], breaks[p + 1]);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

enum class GridKind { gauss_hermite_tensor, sphere_product, monte_carlo };

inline std::string to_string(GridKind k) {
  switch (k) {
    case GridKind::gauss_hermite_tensor: return "gauss-hermite-tensor";
    case GridKind::sphere_product: return "sphere-product";
    case GridKind::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

/// Node/weight set in R^N (row-major coordinates).
struct QuadratureGrid {
  int dim = 0;
  GridKind kind = GridKind::gauss_hermite_tensor;
  int order = 0;
  std::vector<double> coords;  // size() * dim
  std::vector<double> weights;
  std::shared_ptr<const QuadratureGrid> lower;  // embedded next-lower-order rule

  std::size_t size() const { return weights.size(); }
  Vec node(std::size_t i) const {
    Vec v(dim);
    for (int d = 0; d < dim; ++d) v(d) = coords[i * dim + d];
    return v;
  }
};

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {
inline QuadratureGrid tensor_grid(const Rule1D& r, int N, double node_scale, double weight_scale) {
  QuadratureGrid g;
  g.dim = N;
  const std::size_t n = r.size();
  std::size_t total = 1;
  for (int d = 0; d < N; ++d) total *= n;
  g.coords.resize(total * N);
  g.weights.resize(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    double w = weight_scale;
    for (int d = N - 1; d >= 0; --d) {
      const std::size_t k = rem % n;
      rem /= n;
      g.coords[idx * N + d] = node_scale * r.nodes[k];
      w *= r.weights[k];
    }
    g.weights[idx] = w;
  }
  return g;
}
}  // namespace detail

inline constexpr int max_gauss_order = 64;

/// Tensor Gauss-Hermite grid for weight exp(-|v|^2) on R^N.
inline QuadratureGrid gauss_hermite_grid(int order, int N, bool embedded = false) {
  if (order < 1) throw DomainError("gauss_hermite_grid: order must be >= 1");
  if (order > max_gauss_order) {
    throw ResourceError("gauss_hermite_grid: order " + std::to_string(order) + " exceeds " +
                        std::to_string(max_gauss_order));
  }
  require_dimension(N, 1, 3, "gauss_hermite_grid");
  QuadratureGrid g = detail::tensor_grid(gauss_hermite_1d(order), N, 1.0, 1.0);
  g.kind = GridKind::gauss_hermite_tensor;
  g.order = order;
  if (embedded && order > 1) g.lower = std::make_shared<QuadratureGrid>(gauss_hermite_grid(order - 1, N, false));
  return g;
}

/// Tensor Gauss-Hermite grid for weight exp(-c |x|^2) on R^N.
inline QuadratureGrid scaled_hermite_grid(int order, int N, double c) {
  QuadratureGrid g = detail::tensor_grid(gauss_hermite_1d(order), N, 1.0 / std::sqrt(c), std::pow(c, -0.5 * N));
  g.kind = GridKind::gauss_hermite_tensor;
  g.order = order;
  return g;
}

/// Quadrature on S^{N-1}. N = 3: Gauss-Legendre in cos(theta) times 2*order
/// uniform azimuths (exact for harmonics of degree <= 2*order - 1).
/// N = 2: 2*order uniform angles with weight pi/order each.
inline QuadratureGrid sphere_grid(int N, int order, bool embedded = false) {
  if (order < 1) throw DomainError("sphere_grid: order must be >= 1");
  if (N != 2 && N != 3) throw DomainError("sphere_grid: unsupported dimension " + std::to_string(N));
  QuadratureGrid g;
  g.dim = N;
  g.kind = GridKind::sphere_product;
  g.order = order;
  const int naz = 2 * order;
  if (N == 2) {
    for (int k = 0; k < naz; ++k) {
      const double phi = 2.0 * pi * k / naz;
      g.coords.push_back(std::cos(phi));
      g.coords.push_back(std::sin(phi));
      g.weights.push_back(pi / order);
    }
  } else {
    const Rule1D mu = gauss_legendre_1d(order);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double s = std::sqrt(std::max(0.0, 1.0 - mu.nodes[i] * mu.nodes[i]));
      for (int k = 0; k < naz; ++k) {
        const double phi = 2.0 * pi * k / naz;
        g.coords.push_back(s * std::cos(phi));
        g.coords.push_back(s * std::sin(phi));
        g.coords.push_back(mu.nodes[i]);
        g.weights.push_back(mu.weights[i] * pi / order);
      }
    }
  }
  if (embedded && order > 1) g.lower = std::make_shared<QuadratureGrid>(sphere_grid(N, order - 1, false));
  return g;
}

namespace detail {
inline double plain_sum(const QuadratureGrid& grid, const std::function<double(const Vec&)>& f) {
  std::vector<double> terms(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec x = grid.node(i);
    const double y = f(x);
    if (!std::isfinite(y)) {
      std::ostringstream os;
      os << "integrate: non-finite integrand at node " << i << " (";
      for (int d = 0; d < grid.dim; ++d) os << (d ? ", " : "") << x(d);
      os << ")";
      throw QuadratureError(os.str());
    }
    terms[i] = grid.weights[i] * y;
  }
  return pairwise_sum(terms);
}
}  // namespace detail

/// sum_i w_i f(x_i). The error estimate compares against the embedded
/// lower-order rule when the grid carries one, else it is 0.
inline IntegralEstimate integrate(const QuadratureGrid& grid, const std::function<double(const Vec&)>& f) {
  IntegralEstimate est;
  est.value = detail::plain_sum(grid, f);
  if (grid.lower) est.error = std::abs(est.value - detail::plain_sum(*grid.lower, f));
  return est;
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct MomentAccumulator {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double y) {
    count += 1.0;
    const double delta = y - mean;
    mean += delta / count;
    m2 += delta * (y - mean);
  }
  static MomentAccumulator merge(const MomentAccumulator& a, const MomentAccumulator& b) {
    if (a.count == 0.0) return b;
    if (b.count == 0.0) return a;
    MomentAccumulator r;
    r.count = a.count + b.count;
    const double delta = b.mean - a.mean;
    r.mean = a.mean + delta * (b.count / r.count);
    r.m2 = a.m2 + b.m2 + delta * delta * (a.count * b.count / r.count);
    return r;
  }
};
}  // namespace detail

inline constexpr std::size_t monte_carlo_chunk = 4096;

/// Monte Carlo estimate of int_{R^N} f(v) exp(-|v|^2) dv. Samples are drawn
/// per chunk from an engine seeded by (seed, chunk index), so the result is
/// independent of thread count; chunk moments merge in a fixed pairwise order.
inline IntegralEstimate monte_carlo_integrate(int N, const std::function<double(std::span<const double>)>& f,
                                              std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw DomainError("monte_carlo_integrate: need at least 2 samples");
  if (N < 1) throw DomainError("monte_carlo_integrate: dimension must be >= 1");
  const std::size_t chunks = (samples + monte_carlo_chunk - 1) / monte_carlo_chunk;
  std::vector<detail::MomentAccumulator> parts(chunks);
  for_each_chunk(chunks, [&](std::size_t c) {
    std::mt19937_64 engine(detail::splitmix64(seed ^ detail::splitmix64(c + 1)));
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const std::size_t begin = c * monte_carlo_chunk;
    const std::size_t end = std::min(samples, begin + monte_carlo_chunk);
    std::vector<double> x(N);
    detail::MomentAccumulator acc;
    for (std::size_t s = begin; s < end; ++s) {
      for (int d = 0; d < N; ++d) x[d] = normal(engine);
      const double y = f(x);
      if (!std::isfinite(y)) {
        throw QuadratureError("monte_carlo_integrate: non-finite sample at index " + std::to_string(s));
      }
      acc.push(y);
    }
    parts[c] = acc;
  });
  const auto total = pairwise_reduce(std::span<const detail::MomentAccumulator>(parts),
                                     &detail::MomentAccumulator::merge);
  const double mass = std::pow(pi, 0.5 * N);
  const double n = static_cast<double>(samples);
  const double variance = total.m2 / (n - 1.0);
  return {mass * total.mean, mass * std::sqrt(variance / n)};
}

inline nlohmann::json to_json(const QuadratureGrid& g) {
  nlohmann::json j;
  j["dim"] = g.dim;
  j["kind"] = to_string(g.kind);
  j["order"] = g.order;
  j["weights"] = g.weights;
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<double> p(g.coords.begin() + i * g.dim, g.coords.begin() + (i + 1) * g.dim);
    nodes.push_back(p);
  }
  j["nodes"] = nodes;
  return j;
}

}  // namespace specgap

#pragma once

// Boltzmann and Landau entropy dissipation functionals for a single test
// function, with weight M = exp(-|v|^2).
//
// Boltzmann is integrated in center-of-mass variables
//   v = O + r s2, v* = O - r s2, v' = O + r s1, v'* = O - r s1,
// where s1 is spread around s2 by the deviation angle theta, so that
//   D = 2^N/4 int dO e^{-2|O|^2} int dr r^{N-1} Phi(2r) e^{-2r^2} int ds2 int ds1 b k.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "basis.hpp"
#include "core.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace specgap {

// ---------------------------------------------------------------- test functions

struct TestFunction {
  int dim = 3;
  int degree = -1;  // polynomial degree when known
  std::string name = "closure";
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::shared_ptr<const BasisSet> basis;  // set for basis expansions
  Eigen::VectorXd coefficients;

  double operator()(const Vec& v) const { return value(v); }

  static TestFunction closure(int N, std::function<double(const Vec&)> f, std::function<Vec(const Vec&)> grad,
                              int degree = -1, std::string name = "closure") {
    TestFunction h;
    h.dim = N;
    h.degree = degree;
    h.name = std::move(name);
    h.value = std::move(f);
    h.gradient = std::move(grad);
    return h;
  }

  static TestFunction expansion(std::shared_ptr<const BasisSet> basis, Eigen::VectorXd coef) {
    if (static_cast<std::size_t>(coef.size()) != basis->size()) {
      throw DomainError("TestFunction::expansion: coefficient count does not match basis");
    }
    TestFunction h;
    h.dim = basis->dim();
    h.name = "expansion";
    h.degree = 0;
    for (std::size_t i = 0; i < basis->size(); ++i) {
      if (coef(i) != 0.0) h.degree = std::max(h.degree, (*basis)[i].degree());
    }
    h.basis = basis;
    h.coefficients = coef;
    h.value = [basis, coef](const Vec& v) {
      const auto vals = basis->values(v);
      return Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size()).dot(coef);
    };
    h.gradient = [basis, coef](const Vec& v) -> Vec { return basis->gradients(v).transpose() * coef; };
    return h;
  }
};

/// Polynomial test functions by name: one, v1, v2, v3, energy (|v|^2),
/// v1v2, v1v2v3, quad (v1^2 - v2^2), heat (v1 (|v|^2 - (N+2)/2)), energy2 (|v|^4).
inline TestFunction named_function(const std::string& name, int N) {
  require_dimension(N, 2, 3, "named_function");
  auto g0 = [N] { return Vec(Vec::Zero(N)); };
  auto mk = [&](std::function<double(const Vec&)> f, std::function<Vec(const Vec&)> g, int deg) {
    return TestFunction::closure(N, std::move(f), std::move(g), deg, name);
  };
  if (name == "one") return mk([](const Vec&) { return 1.0; }, [g0](const Vec&) { return g0(); }, 0);
  if (name == "v1" || name == "v2" || name == "v3") {
    const int a = name[1] - '1';
    if (a >= N) throw ConfigError("test function " + name + " needs more dimensions");
    return mk([a](const Vec& v) { return v(a); },
              [a, g0](const Vec&) {
                Vec g = g0();
                g(a) = 1.0;
                return g;
              },
              1);
  }
  if (name == "energy") return mk([](const Vec& v) { return v.squaredNorm(); }, [](const Vec& v) { return Vec(2.0 * v); }, 2);
  if (name == "v1v2") {
    return mk([](const Vec& v) { return v(0) * v(1); },
              [g0](const Vec& v) {
                Vec g = g0();
                g(0) = v(1);
                g(1) = v(0);
                return g;
              },
              2);
  }
  if (name == "quad") {
    return mk([](const Vec& v) { return v(0) * v(0) - v(1) * v(1); },
              [g0](const Vec& v) {
                Vec g = g0();
                g(0) = 2.0 * v(0);
                g(1) = -2.0 * v(1);
                return g;
              },
              2);
  }
  if (name == "heat") {
    const double c = 0.5 * (N + 2);
    return mk([c](const Vec& v) { return v(0) * (v.squaredNorm() - c); },
              [c](const Vec& v) {
                Vec g = 2.0 * v(0) * v;
                g(0) += v.squaredNorm() - c;
                return g;
              },
              3);
  }
  if (name == "energy2") {
    return mk([](const Vec& v) { return v.squaredNorm() * v.squaredNorm(); },
              [](const Vec& v) { return Vec(4.0 * v.squaredNorm() * v); }, 4);
  }
  if (name == "v1v2v3") {
    if (N < 3) throw ConfigError("test function v1v2v3 needs N = 3");
    return mk([](const Vec& v) { return v(0) * v(1) * v(2); },
              [](const Vec& v) {
                Vec g(3);
                g << v(1) * v(2), v(0) * v(2), v(0) * v(1);
                return g;
              },
              3);
  }
  throw ConfigError("unknown test function '" + name + "'");
}

/// Coefficients <h, phi_i> in L^2(M) for M = exp(-|v|^2), by Gauss-Hermite
/// quadrature (exact when h is a polynomial of degree <= truncation).
inline Eigen::VectorXd project_to_basis(const TestFunction& h, const BasisSet& basis) {
  if (h.dim != basis.dim()) throw DomainError("project_to_basis: dimension mismatch");
  const int order = std::max(basis.truncation() + 1, h.degree >= 0 ? (basis.truncation() + h.degree) / 2 + 1 : 12);
  const QuadratureGrid g = gauss_hermite_grid(std::min(order, max_gauss_order), basis.dim());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(basis.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec v = g.node(i);
    const auto vals = basis.values(v);
    c += (g.weights[i] * h(v)) * Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
  }
  if (basis.normalization() == Normalization::unit_mass) c *= mass_scale(Normalization::unit_mass, basis.dim());
  return c;
}

// ---------------------------------------------------------------- collisions

struct CollisionPair {
  Vec v, v_star, v_prime, v_star_prime;
};

/// v' = (v + v*)/2 + |v - v*|/2 sigma, v'* = (v + v*)/2 - |v - v*|/2 sigma.
inline CollisionPair post_collision(const Vec& v, const Vec& v_star, const Vec& sigma) {
  if (v.size() != v_star.size() || v.size() != sigma.size()) throw DomainError("post_collision: dimension mismatch");
  if (std::abs(sigma.norm() - 1.0) > 1e-12) throw DomainError("post_collision: sigma must be a unit vector");
  const Vec mid = 0.5 * (v + v_star);
  const double half = 0.5 * (v - v_star).norm();
  CollisionPair p{v, v_star, mid + half * sigma, mid - half * sigma};
  return p;
}

/// [h(v) + h(v*) - h(v') - h(v'*)]^2.
inline double k_defect(const TestFunction& h, const CollisionPair& p) {
  const double d = h(p.v) + h(p.v_star) - h(p.v_prime) - h(p.v_star_prime);
  return d * d;
}

/// u - (u.z / |z|^2) z.
inline Vec projection_transverse(const Vec& z, const Vec& u) {
  const double zz = z.squaredNorm();
  if (!(zz > 0.0)) throw DomainError("projection_transverse: z must be non-zero");
  return u - (u.dot(z) / zz) * z;
}

// ---------------------------------------------------------------- grids

/// Quadrature orders for the dissipation integrals. Zero means "choose": one
/// above the exactness threshold for the test-function degree when known (so
/// the embedded lower rule is exact too), otherwise velocity 10 and sphere 8.
/// Grazing kernels need angle_order >= 32.
struct DissipationGrids {
  int velocity_order = 0;
  int radial_order = 0;
  int sphere_order = 0;
  int angle_order = 0;
  int azimuth_order = 0;
  bool embedded = false;
};

inline constexpr int grazing_min_angle_order = 32;

inline DissipationGrids resolve_grids(DissipationGrids g, int degree, const AngularKernel* b = nullptr) {
  if (g.velocity_order <= 0) g.velocity_order = degree >= 0 ? degree + 2 : 10;
  if (g.radial_order <= 0) g.radial_order = g.velocity_order / 2 + 1;
  if (g.sphere_order <= 0) g.sphere_order = degree >= 0 ? degree + 2 : 8;
  const bool grazing = b && b->is_grazing();
  if (g.angle_order <= 0) g.angle_order = grazing ? grazing_min_angle_order : g.sphere_order;
  if (g.azimuth_order <= 0) g.azimuth_order = g.sphere_order;
  if (grazing && g.angle_order < grazing_min_angle_order) {
    throw ResolutionError("grazing kernel needs a dedicated angle rule of order >= " +
                          std::to_string(grazing_min_angle_order) + " on [0, eps*pi/2] (got " +
                          std::to_string(g.angle_order) + "); raise angle_order");
  }
  for (int o : {g.velocity_order, g.sphere_order, g.angle_order, g.azimuth_order}) {
    if (o > max_gauss_order) throw ResourceError("dissipation grid order exceeds " + std::to_string(max_gauss_order));
  }
  return g;
}

inline DissipationGrids lower_grids(DissipationGrids g) {
  for (int* o : {&g.velocity_order, &g.radial_order, &g.sphere_order, &g.angle_order, &g.azimuth_order}) {
    *o = std::max(1, *o - 1);
  }
  g.embedded = false;
  return g;
}

inline nlohmann::json to_json(const DissipationGrids& g) {
  return {{"velocity_order", g.velocity_order}, {"radial_order", g.radial_order}, {"sphere_order", g.sphere_order},
          {"angle_order", g.angle_order},       {"azimuth_order", g.azimuth_order}, {"embedded", g.embedded}};
}

/// int_0^inf f(r) Phi(s r) r^p e^{-c r^2} dr as sum w_i f(r_i). Power-law
/// kernels are folded into the Laguerre weight, so the rule stays exact.
inline Rule1D kernel_radial_rule(const KineticKernel& phi, int order, double p, double c, double s) {
  if (const auto g = power_exponent(phi)) {
    Rule1D r = radial_rule(order, p + *g, c);
    const double f = power_prefactor(phi) * std::pow(s, *g);
    for (double& w : r.weights) w *= f;
    return r;
  }
  Rule1D r = radial_rule(order, p, c);
  for (std::size_t i = 0; i < r.size(); ++i) r.weights[i] *= eval_phi(phi, s * r.nodes[i]);
  return r;
}

/// Deviation rule: points s1 = cos(theta) e + sum_k perp_k F_k around a pole e
/// (F an orthonormal frame of e^perp), weights include b(theta) dsigma.
struct DeviationRule {
  int dim = 3;
  std::vector<double> cos_theta;
  std::vector<std::array<double, 2>> perp;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

namespace detail {
inline void add_theta_nodes(DeviationRule& rule, const AngularKernel& b, double theta, double w, int naz) {
  const int N = rule.dim;
  const double wb = w * b_sin_weight(b, theta, N);
  if (wb == 0.0) return;
  const double c = std::cos(theta), s = std::sin(theta);
  if (N == 2) {
    rule.cos_theta.insert(rule.cos_theta.end(), {c, c});
    rule.perp.push_back({s, 0.0});
    rule.perp.push_back({-s, 0.0});
    rule.weights.insert(rule.weights.end(), {wb, wb});
    return;
  }
  for (int k = 0; k < naz; ++k) {
    const double phi = 2.0 * pi * k / naz;
    rule.cos_theta.push_back(c);
    rule.perp.push_back({s * std::cos(phi), s * std::sin(phi)});
    rule.weights.push_back(wb * 2.0 * pi / naz);
  }
}
}  // namespace detail

/// Builds the s1 rule for kernel b. Constant b: Gauss-Legendre in cos(theta)
/// (N = 3) or 2*order uniform angles (N = 2). Tabulated b: composite
/// Gauss-Legendre in theta over the table panels. Grazing b: Gauss-Legendre
/// in theta on the support [0, eps*pi/2].
inline DeviationRule make_deviation_rule(const AngularKernel& b_in, int N, int order, int azimuth_order) {
  if (N != 2 && N != 3) throw DomainError("make_deviation_rule: N must be 2 or 3");
  const AngularKernel b = with_dim(b_in, N);
  DeviationRule rule;
  rule.dim = N;
  const int naz = 2 * azimuth_order;
  if (const auto* c = std::get_if<ConstantB>(&b.form)) {
    if (c->value == 0.0) return rule;
    if (N == 2) {
      for (int k = 0; k < 2 * order; ++k) {
        const double t = 2.0 * pi * k / (2 * order);
        rule.cos_theta.push_back(std::cos(t));
        rule.perp.push_back({std::sin(t), 0.0});
        rule.weights.push_back(c->value * pi / order);
      }
      return rule;
    }
    const Rule1D mu = gauss_legendre_1d(order);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double s = std::sqrt(std::max(0.0, 1.0 - mu.nodes[i] * mu.nodes[i]));
      for (int k = 0; k < naz; ++k) {
        const double phi = 2.0 * pi * k / naz;
        rule.cos_theta.push_back(mu.nodes[i]);
        rule.perp.push_back({s * std::cos(phi), s * std::sin(phi)});
        rule.weights.push_back(c->value * mu.weights[i] * 2.0 * pi / naz);
      }
    }
    return rule;
  }
  Rule1D theta;
  if (const auto* t = std::get_if<TabulatedB>(&b.form)) {
    std::vector<double> br{0.0};
    for (double x : t->theta) {
      if (x > br.back() && x < pi) br.push_back(x);
    }
    br.push_back(pi);
    const int panels = static_cast<int>(br.size()) - 1;
    const int per = std::max(2, (2 * order + panels - 1) / panels);
    theta = composite_legendre(std::min(per, order), br);
  } else {
    theta = gauss_legendre_1d(order, 0.0, b_support(b));
  }
  for (std::size_t i = 0; i < theta.size(); ++i) detail::add_theta_nodes(rule, b, theta.nodes[i], theta.weights[i], naz);
  return rule;
}

namespace detail {
inline Vec deviate(const Vec& e, const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 2>& F,
                   const DeviationRule& rule, std::size_t q) {
  Vec s = rule.cos_theta[q] * e;
  for (int k = 0; k < e.size() - 1; ++k) s += rule.perp[q][k] * F.col(k);
  return s;
}

inline QuadratureGrid sphere_or_circle(int N, int order) { return sphere_grid(N, order); }

/// Sums fn(c) over chunks with a fixed reduction order.
template <class Fn>
double chunked_sum(std::size_t chunks, Fn&& fn) {
  std::vector<double> part(chunks, 0.0);
  for_each_chunk(chunks, [&](std::size_t c) { part[c] = fn(c); });
  return pairwise_sum(part);
}

inline void check_finite(double x, const char* what, const Vec& at) {
  if (!std::isfinite(x)) {
    std::ostringstream os;
    os << what << ": non-finite integrand at (" << at.transpose() << ")";
    throw QuadratureError(os.str());
  }
}
}  // namespace detail

// ---------------------------------------------------------------- functionals

namespace detail {
inline double d_boltzmann_value(const TestFunction& h, const KineticKernel& phi, const AngularKernel& b,
                                const DissipationGrids& g) {
  const int N = h.dim;
  const QuadratureGrid omega = scaled_hermite_grid(g.velocity_order, N, 2.0);
  const Rule1D radial = kernel_radial_rule(phi, g.radial_order, N - 1.0, 2.0, 2.0);
  const QuadratureGrid s2 = sphere_or_circle(N, g.sphere_order);
  const DeviationRule dev = make_deviation_rule(b, N, g.angle_order, g.azimuth_order);
  const double pref = std::pow(2.0, N) / 4.0;
  return pref * chunked_sum(omega.size(), [&](std::size_t io) {
    const Vec O = omega.node(io);
    double acc = 0.0;
    for (std::size_t is = 0; is < s2.size(); ++is) {
      const Vec e = s2.node(is);
      const auto F = orthonormal_frame(e);
      for (std::size_t ir = 0; ir < radial.size(); ++ir) {
        const double r = radial.nodes[ir];
        const Vec v = O + r * e, vs = O - r * e;
        const double hv = h(v) + h(vs);
        double inner = 0.0;
        for (std::size_t q = 0; q < dev.size(); ++q) {
          const Vec s1 = deviate(e, F, dev, q);
          const double d = h(O + r * s1) + h(O - r * s1) - hv;
          inner += dev.weights[q] * d * d;
        }
        check_finite(inner, "d_boltzmann", v);
        acc += s2.weights[is] * radial.weights[ir] * inner;
      }
    }
    return omega.weights[io] * acc;
  });
}
}  // namespace detail

/// D^Bo(h) = 1/4 int int int Phi(|v - v*|) b(cos theta) M M* k dsigma dv* dv.
inline IntegralEstimate d_boltzmann(const TestFunction& h, const KineticKernel& phi, const AngularKernel& b,
                                    DissipationGrids grids = {}) {
  require_dimension(h.dim, 2, 3, "d_boltzmann");
  const DissipationGrids g = resolve_grids(grids, h.degree, &b);
  IntegralEstimate est;
  est.value = detail::d_boltzmann_value(h, phi, b, g);
  if (g.embedded) est.error = std::abs(est.value - detail::d_boltzmann_value(h, phi, b, lower_grids(g)));
  return est;
}

namespace detail {
inline double d_boltzmann_omega_value(const TestFunction& h, const KineticKernel& phi, const AngularKernel& b_in,
                                      const DissipationGrids& g) {
  const int N = 3;
  const AngularKernel b = with_dim(b_in, N);
  const QuadratureGrid omegas = sphere_grid(N, g.sphere_order);
  const Rule1D line = gauss_hermite_1d(g.velocity_order);
  const QuadratureGrid plane = gauss_hermite_grid(g.velocity_order, 2);
  const Rule1D radial = kernel_radial_rule(phi, g.radial_order, N - 1.0, 1.0, std::sqrt(2.0));
  // alpha rule: theta = 2|alpha - pi/2|, support of b~ limits |alpha - pi/2|.
  const double half_width = 0.5 * b_support(b);
  const double brk[] = {pi / 2 - half_width, pi / 2, pi / 2 + half_width};
  const Rule1D alpha = composite_legendre(g.angle_order, brk);
  const int naz = 2 * g.azimuth_order;
  const double r2 = std::sqrt(0.5);
  return chunked_sum(omegas.size(), [&](std::size_t iw) {
    const Vec w = omegas.node(iw);
    const auto F = orthonormal_frame(w);
    double acc = 0.0;
    for (std::size_t ia = 0; ia < alpha.size(); ++ia) {
      const double a = alpha.nodes[ia];
      const double theta = std::min(pi, 2.0 * std::abs(a - pi / 2));
      const double bt = eval_b_tilde(b, theta, N) * std::sin(a) * alpha.weights[ia];
      if (bt == 0.0) continue;
      for (int k = 0; k < naz; ++k) {
        const double ph = 2.0 * pi * k / naz;
        const Vec dir = std::cos(a) * w + std::sin(a) * (std::cos(ph) * F.col(0) + std::sin(ph) * F.col(1));
        for (std::size_t ir = 0; ir < radial.size(); ++ir) {
          const double R = radial.nodes[ir];
          const double t = R * dir.dot(w);
          const Vec U = R * dir - t * w;
          for (std::size_t is = 0; is < line.size(); ++is) {
            const double s = line.nodes[is];
            const double r1 = r2 * (s + t), rr2 = r2 * (s - t);
            double inner = 0.0;
            for (std::size_t ip = 0; ip < plane.size(); ++ip) {
              const Vec W = plane.coords[2 * ip] * F.col(0) + plane.coords[2 * ip + 1] * F.col(1);
              const Vec V1 = r2 * (W + U), V2 = r2 * (W - U);
              const double d = h(r1 * w + V1) + h(rr2 * w + V2) - h(rr2 * w + V1) - h(r1 * w + V2);
              inner += plane.weights[ip] * d * d;
            }
            acc += bt * (2.0 * pi / naz) * radial.weights[ir] * line.weights[is] * inner;
          }
        }
      }
    }
    return omegas.weights[iw] * acc;
  }) / 8.0;
}
}  // namespace detail

/// Same functional in the omega-representation (N = 3):
///   D = 1/8 int_{S^2} dw int b~(theta) Phi(|v - v*|) M M* k dv dv*,
/// with v = r1 w + V1, v* = r2 w + V2, v' = r2 w + V1, v'* = r1 w + V2.
/// The 1/8 is 1/4 times the 1/2 from the two-to-one map w -> sigma.
inline IntegralEstimate d_boltzmann_omega(const TestFunction& h, const KineticKernel& phi, const AngularKernel& b,
                                          DissipationGrids grids = {}) {
  if (h.dim != 3) throw DomainError("d_boltzmann_omega: only N = 3 is supported");
  DissipationGrids g = resolve_grids(grids, h.degree, &b);
  // The alpha integrand carries sin(alpha) |cos(alpha)|^k factors, which a
  // Legendre rule only resolves spectrally; default to a finer alpha rule.
  if (grids.angle_order <= 0 && !b.is_grazing()) g.angle_order = std::min(max_gauss_order, 3 * g.sphere_order);
  IntegralEstimate est;
  est.value = detail::d_boltzmann_omega_value(h, phi, b, g);
  if (g.embedded) est.error = std::abs(est.value - detail::d_boltzmann_omega_value(h, phi, b, lower_grids(g)));
  return est;
}

namespace detail {
inline double d_landau_value(const TestFunction& h, const KineticKernel& phi, const DissipationGrids& g) {
  const int N = h.dim;
  const QuadratureGrid omega = scaled_hermite_grid(g.velocity_order, N, 2.0);
  const Rule1D radial = kernel_radial_rule(phi, g.radial_order, N + 1.0, 0.5, 1.0);
  const QuadratureGrid sig = sphere_or_circle(N, g.sphere_order);
  return 0.5 * chunked_sum(omega.size(), [&](std::size_t io) {
    const Vec O = omega.node(io);
    double acc = 0.0;
    for (std::size_t is = 0; is < sig.size(); ++is) {
      const Vec s = sig.node(is);
      for (std::size_t ir = 0; ir < radial.size(); ++ir) {
        const double rho = radial.nodes[ir];
        if (rho < 1e-12) continue;  // removable: |z|^2 Phi(z) -> 0
        const Vec a = O + 0.5 * rho * s, c = O - 0.5 * rho * s;
        const Vec diff = h.gradient(a) - h.gradient(c);
        const double q = projection_transverse(s, diff).squaredNorm();
        check_finite(q, "d_landau", a);
        acc += sig.weights[is] * radial.weights[ir] * q;
      }
    }
    return omega.weights[io] * acc;
  });
}
}  // namespace detail

/// D^La(h) = 1/2 int int Phi(|z|) |z|^2 |Pi_{z^perp}(grad h - grad h*)|^2 M M*, z = v - v*.
inline IntegralEstimate d_landau(const TestFunction& h, const KineticKernel& phi, DissipationGrids grids = {}) {
  require_dimension(h.dim, 2, 3, "d_landau");
  if (!h.gradient) throw DomainError("d_landau: test function has no gradient");
  const DissipationGrids g = resolve_grids(grids, h.degree);
  IntegralEstimate est;
  est.value = detail::d_landau_value(h, phi, g);
  if (g.embedded) est.error = std::abs(est.value - detail::d_landau_value(h, phi, lower_grids(g)));
  return est;
}

/// Monte Carlo over (v, v*) in R^{2N} with the deviation integral done by the
/// deterministic rule. Bit-identical for equal (samples, seed).
inline IntegralEstimate d_boltzmann_monte_carlo(const TestFunction& h, const KineticKernel& phi,
                                                const AngularKernel& b, std::size_t samples, std::uint64_t seed,
                                                DissipationGrids grids = {}) {
  const int N = h.dim;
  require_dimension(N, 2, 3, "d_boltzmann_monte_carlo");
  const DissipationGrids g = resolve_grids(grids, h.degree, &b);
  const DeviationRule dev = make_deviation_rule(b, N, g.angle_order, g.azimuth_order);
  auto f = [&](std::span<const double> x) {
    Vec v(N), vs(N);
    for (int d = 0; d < N; ++d) {
      v(d) = x[d];
      vs(d) = x[N + d];
    }
    const Vec z = v - vs;
    const double zn = z.norm();
    if (zn == 0.0) return 0.0;
    const Vec e = z / zn;
    const auto F = orthonormal_frame(e);
    const Vec O = 0.5 * (v + vs);
    const double r = 0.5 * zn;
    const double hv = h(v) + h(vs);
    double inner = 0.0;
    for (std::size_t q = 0; q < dev.size(); ++q) {
      const Vec s1 = detail::deviate(e, F, dev, q);
      const double d = h(O + r * s1) + h(O - r * s1) - hv;
      inner += dev.weights[q] * d * d;
    }
    return 0.25 * eval_phi(phi, zn) * inner;
  };
  return monte_carlo_integrate(2 * N, f, samples, seed);
}

// ---------------------------------------------------------------- grazing

struct GrazingRow {
  double eps = 0.0;
  double d_boltzmann = 0.0;
  double c_times_d_landau = 0.0;
  double rel_error = 0.0;
};

struct GrazingTable {
  std::vector<GrazingRow> rows;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();
  Mollifier j;
};

/// Least-squares slope of log(err) against log(eps); NaN when fewer than two
/// positive errors are available.
inline double fitted_order(const std::vector<double>& eps, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(err[i] > 0.0)) continue;
    const double x = std::log(eps[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline void check_eps_list(const std::vector<double>& eps) {
  if (eps.empty()) throw ConfigError("eps list is empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw ConfigError("eps values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError("eps list must be strictly decreasing");
  }
}

/// Rows (eps, D^Bo_{b_eps,Phi}(h), c_{N,j} D^La_Phi(h), relative error).
/// Values below this are roundoff on a collision invariant and are reported as 0.
inline constexpr double null_floor = 1e-12;

inline GrazingTable grazing_sweep(const TestFunction& h, const KineticKernel& phi, const Mollifier& j,
                                  const std::vector<double>& eps, DissipationGrids grids = {}) {
  check_eps_list(eps);
  auto snap = [](double x) { return std::abs(x) <= null_floor ? 0.0 : x; };
  GrazingTable table;
  table.j = j;
  const double c = c_Nj(j, h.dim);
  const double landau = snap(c * d_landau(h, phi, grids).value);
  std::vector<double> errs;
  for (double e : eps) {
    const AngularKernel b = AngularKernel::grazing(e, j, h.dim);
    GrazingRow row;
    row.eps = e;
    row.d_boltzmann = snap(d_boltzmann(h, phi, b, grids).value);
    row.c_times_d_landau = landau;
    const double diff = std::abs(row.d_boltzmann - landau);
    row.rel_error = diff == 0.0 ? 0.0 : diff / std::max(std::abs(landau), std::abs(row.d_boltzmann));
    table.rows.push_back(row);
    errs.push_back(row.rel_error);
  }
  table.fitted_order = fitted_order(eps, errs);
  return table;
}

}  // namespace specgap

#pragma once

// Collision kernels B = b(cos theta) Phi(|v - v*|) and their structural constants.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "core.hpp"
#include "quadrature.hpp"

namespace specgap {

// ---------------------------------------------------------------- Phi

struct PowerLaw {
  double gamma = 1.0;
};
struct ConstantPhi {
  double value = 1.0;
};
/// Piecewise-linear table; clamps to the end values outside [r.front(), r.back()].
struct TabulatedPhi {
  std::vector<double> r;
  std::vector<double> values;
};

struct KineticKernel {
  std::variant<PowerLaw, ConstantPhi, TabulatedPhi> form;

  static KineticKernel power(double gamma) {
    if (!(gamma >= 0.0)) throw DomainError("PowerLaw kernel needs gamma >= 0");
    return {PowerLaw{gamma}};
  }
  static KineticKernel constant(double value) {
    if (!(value >= 0.0)) throw DomainError("Constant kernel needs value >= 0");
    return {ConstantPhi{value}};
  }
  static KineticKernel tabulated(std::vector<double> r, std::vector<double> values);
};

struct KineticLowerBound {
  double R = 0.0;
  double c_phi = 0.0;
};

namespace detail {
inline void check_table(const std::vector<double>& x, const std::vector<double>& y, const char* what) {
  if (x.empty() || x.size() != y.size()) throw ConfigError(std::string(what) + ": grid and values must match and be non-empty");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw ConfigError(std::string(what) + ": non-finite entry");
    if (y[i] < 0.0) throw DomainError(std::string(what) + ": values must be non-negative");
    if (i > 0 && !(x[i] > x[i - 1])) throw ConfigError(std::string(what) + ": grid must be strictly increasing");
  }
}

inline double interpolate(const std::vector<double>& x, const std::vector<double>& y, double t) {
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const double s = (t - x[k - 1]) / (x[k] - x[k - 1]);
  return (1.0 - s) * y[k - 1] + s * y[k];
}
}  // namespace detail

inline KineticKernel KineticKernel::tabulated(std::vector<double> r, std::vector<double> values) {
  detail::check_table(r, values, "Tabulated kernel");
  if (r.front() < 0.0) throw DomainError("Tabulated kernel: r-grid must start at r >= 0");
  return {TabulatedPhi{std::move(r), std::move(values)}};
}

inline double eval_phi(const KineticKernel& k, double r) {
  if (!(r >= 0.0)) throw DomainError("eval_phi: r must be >= 0");
  if (const auto* p = std::get_if<PowerLaw>(&k.form)) return p->gamma == 0.0 ? 1.0 : std::pow(r, p->gamma);
  if (const auto* c = std::get_if<ConstantPhi>(&k.form)) return c->value;
  const auto& t = std::get<TabulatedPhi>(k.form);
  return detail::interpolate(t.r, t.values, r);
}

/// Phi~(r) = inf_{r' >= r} Phi(r'). Exact for tabulated kernels: crossing
/// points of the running minimum are inserted as new breakpoints.
inline KineticKernel monotone_envelope(const KineticKernel& k) {
  const auto* t = std::get_if<TabulatedPhi>(&k.form);
  if (!t) return k;  // power laws with gamma >= 0 and constants are already non-decreasing
  const std::size_t n = t->r.size();
  std::vector<double> rr{t->r.back()}, vv{t->values.back()};
  double m = t->values.back();
  for (std::size_t i = n - 1; i-- > 0;) {
    const double a = t->values[i], b = t->values[i + 1];
    if (a < m) {
      if (b > m) {
        const double rc = t->r[i] + (m - a) / (b - a) * (t->r[i + 1] - t->r[i]);
        if (rc < rr.back()) {
          rr.push_back(rc);
          vv.push_back(m);
        }
      }
      m = a;
    }
    rr.push_back(t->r[i]);
    vv.push_back(m);
  }
  std::reverse(rr.begin(), rr.end());
  std::reverse(vv.begin(), vv.end());
  return {TabulatedPhi{std::move(rr), std::move(vv)}};
}

/// c_Phi = inf { Phi(r) : r >= R }. Exact for all three variants.
inline KineticLowerBound lower_bound_params(const KineticKernel& k, double R) {
  if (!(R >= 0.0)) throw DomainError("lower_bound_params: R must be >= 0");
  double c = 0.0;
  if (const auto* p = std::get_if<PowerLaw>(&k.form)) {
    c = p->gamma == 0.0 ? 1.0 : std::pow(R, p->gamma);
  } else if (const auto* cst = std::get_if<ConstantPhi>(&k.form)) {
    c = cst->value;
  } else {
    const auto& t = std::get<TabulatedPhi>(k.form);
    c = eval_phi(k, R);
    for (std::size_t i = 0; i < t.r.size(); ++i) {
      if (t.r[i] >= R) c = std::min(c, t.values[i]);
    }
  }
  if (!(c > 0.0)) {
    throw HypothesisViolation("kinetic kernel is not bounded below by a positive constant on [R, inf) for R = " +
                              std::to_string(R));
  }
  return {R, c};
}

/// Exponent of an exact power-law factor (0 for constants), if any.
inline std::optional<double> power_exponent(const KineticKernel& k) {
  if (const auto* p = std::get_if<PowerLaw>(&k.form)) return p->gamma;
  if (std::holds_alternative<ConstantPhi>(k.form)) return 0.0;
  return std::nullopt;
}

/// Multiplicative constant in front of the power (1 for PowerLaw, value for Constant).
inline double power_prefactor(const KineticKernel& k) {
  if (const auto* c = std::get_if<ConstantPhi>(&k.form)) return c->value;
  return 1.0;
}

inline std::string describe(const KineticKernel& k) {
  if (const auto* p = std::get_if<PowerLaw>(&k.form)) return "power:" + std::to_string(p->gamma);
  if (const auto* c = std::get_if<ConstantPhi>(&k.form)) return "constant:" + std::to_string(c->value);
  return "tabulated";
}

// ---------------------------------------------------------------- mollifier

/// j(chi) = (1 - (2 chi / pi)^2)^power / normalization on [0, pi/2].
struct Mollifier {
  double power = 2.0;
  double normalization = 1.0;
  double second_moment = 0.0;  // int j(chi) chi^2 dchi

  static constexpr double support = pi / 2.0;

  static Mollifier bump(double power = 2.0) {
    if (!(power > 0.0)) throw DomainError("Mollifier: power must be > 0");
    Mollifier j;
    j.power = power;
    const Rule1D r = gauss_legendre_1d(64, 0.0, support);
    double mass = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double s = j.raw(r.nodes[i]);
      mass += r.weights[i] * s;
      m2 += r.weights[i] * s * r.nodes[i] * r.nodes[i];
    }
    j.normalization = mass;
    j.second_moment = m2 / mass;
    return j;
  }

  double raw(double chi) const {
    if (chi < 0.0 || chi > support) return 0.0;
    const double x = 2.0 * chi / pi;
    return std::pow(1.0 - x * x, power);
  }
  double operator()(double chi) const { return raw(chi) / normalization; }
};

inline std::string describe(const Mollifier& j) {
  std::ostringstream os;
  os << "bump:" << j.power;
  return os.str();
}

/// c_{N,j} = 2^{N-5} |S^{N-2}| / (N-1) * int j(chi) chi^2 dchi.
inline double c_Nj(const Mollifier& j, int N) {
  if (N < 2) throw DomainError("c_Nj: N must be >= 2");
  return std::pow(2.0, N - 5) * sphere_area(N - 1) / (N - 1) * j.second_moment;
}

// ---------------------------------------------------------------- b

struct ConstantB {
  double value = 1.0;
};
/// Piecewise linear in theta on a grid inside [0, pi], clamped outside it.
struct TabulatedB {
  std::vector<double> theta;
  std::vector<double> values;
};
/// b_eps(theta) = j(theta/eps) / (eps^3 sin^{N-2}(theta/2)).
struct GrazingB {
  Mollifier j;
  double eps = 0.1;
  int dim = 3;
};

struct AngularKernel {
  std::variant<ConstantB, TabulatedB, GrazingB> form;

  static AngularKernel constant(double value) {
    if (!(value >= 0.0)) throw DomainError("Constant angular kernel needs value >= 0");
    return {ConstantB{value}};
  }
  static AngularKernel tabulated(std::vector<double> theta, std::vector<double> values) {
    detail::check_table(theta, values, "Tabulated angular kernel");
    if (theta.front() < 0.0 || theta.back() > pi) throw DomainError("Tabulated angular kernel: grid must lie in [0, pi]");
    return {TabulatedB{std::move(theta), std::move(values)}};
  }
  /// b(theta) = theta, sampled on a fine grid (non-monotone b~).
  static AngularKernel linear(int points = 257) {
    std::vector<double> t(points), v(points);
    for (int i = 0; i < points; ++i) t[i] = v[i] = pi * i / (points - 1);
    return tabulated(std::move(t), std::move(v));
  }
  static AngularKernel grazing(double eps, Mollifier j = Mollifier::bump(), int dim = 3) {
    if (!(eps > 0.0) || eps > 2.0) throw DomainError("Grazing angular kernel needs 0 < eps <= 2");
    if (dim < 2) throw DomainError("Grazing angular kernel needs dimension >= 2");
    return {GrazingB{j, eps, dim}};
  }

  bool is_grazing() const { return std::holds_alternative<GrazingB>(form); }
  bool is_constant() const { return std::holds_alternative<ConstantB>(form); }
};

/// Same kernel with the grazing dimension set to N (other variants unchanged).
inline AngularKernel with_dim(AngularKernel b, int N) {
  if (auto* g = std::get_if<GrazingB>(&b.form)) g->dim = N;
  return b;
}

inline void check_theta(double theta, const char* what) {
  if (!(theta >= 0.0 && theta <= pi)) throw DomainError(std::string(what) + ": theta must lie in [0, pi]");
}

/// Upper end of the support of b in theta.
inline double b_support(const AngularKernel& b) {
  if (const auto* g = std::get_if<GrazingB>(&b.form)) return std::min(pi, g->eps * Mollifier::support);
  return pi;
}

/// b(theta). The grazing variant is +inf at theta = 0 when N >= 3.
inline double eval_b(const AngularKernel& b, double theta) {
  check_theta(theta, "eval_b");
  if (const auto* c = std::get_if<ConstantB>(&b.form)) return c->value;
  if (const auto* t = std::get_if<TabulatedB>(&b.form)) return detail::interpolate(t->theta, t->values, theta);
  const auto& g = std::get<GrazingB>(b.form);
  const double jv = g.j(theta / g.eps);
  if (jv == 0.0) return 0.0;
  const double s = std::pow(std::sin(0.5 * theta), g.dim - 2);
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  return jv / (g.eps * g.eps * g.eps * s);
}

/// b(theta) sin^{N-2}(theta), the density of b against dtheta on the sphere,
/// evaluated without the removable 0 * inf at theta = 0 for grazing kernels.
inline double b_sin_weight(const AngularKernel& b, double theta, int N) {
  check_theta(theta, "b_sin_weight");
  if (const auto* g = std::get_if<GrazingB>(&b.form)) {
    if (g->dim != N) throw DomainError("b_sin_weight: grazing kernel built for another dimension");
    return g->j(theta / g->eps) / (g->eps * g->eps * g->eps) * std::pow(2.0 * std::cos(0.5 * theta), N - 2);
  }
  return eval_b(b, theta) * std::pow(std::sin(theta), N - 2);
}

/// b~(theta) = 2^{N-1} sin^{N-2}(theta/2) b(theta). For the grazing variant
/// this is 2^{N-1} j_eps(theta)/eps^2, continuous at theta = 0.
inline double eval_b_tilde(const AngularKernel& b, double theta, int N) {
  check_theta(theta, "eval_b_tilde");
  if (N < 2) throw DomainError("eval_b_tilde: N must be >= 2");
  if (const auto* g = std::get_if<GrazingB>(&b.form)) {
    if (g->dim != N) throw DomainError("eval_b_tilde: grazing kernel built for another dimension");
    return std::pow(2.0, N - 1) * g->j(theta / g->eps) / (g->eps * g->eps * g->eps);
  }
  return std::pow(2.0, N - 1) * std::pow(std::sin(0.5 * theta), N - 2) * eval_b(b, theta);
}

/// Sampled check that b~ is non-increasing on [0, pi].
inline bool b_tilde_nonincreasing(const AngularKernel& b, int N, int samples = 2001) {
  double prev = eval_b_tilde(b, 0.0, N);
  for (int i = 1; i < samples; ++i) {
    const double v = eval_b_tilde(b, pi * i / (samples - 1), N);
    if (v > prev * (1.0 + 1e-12) + 1e-300) return false;
    prev = v;
  }
  return true;
}

inline std::string describe(const AngularKernel& b) {
  if (const auto* c = std::get_if<ConstantB>(&b.form)) return "constant:" + std::to_string(c->value);
  if (const auto* g = std::get_if<GrazingB>(&b.form)) return "grazing:" + std::to_string(g->eps);
  return "tabulated";
}

namespace detail {
/// int_{S^{N-1}} min{b(e_N . s), b(u . s)} ds with u at angle psi from e_N.
inline double min_overlap(const AngularKernel& b, int N, double psi, int order) {
  auto angle = [](double c) { return std::acos(std::clamp(c, -1.0, 1.0)); };
  const double cp = std::cos(psi), sp = std::sin(psi);
  double total = 0.0;
  const int naz = 2 * order;
  if (N == 2) {
    for (int k = 0; k < naz; ++k) {
      const double a = 2.0 * pi * (k + 0.5) / naz;
      const double c1 = std::cos(a), c2 = std::cos(a - psi);
      total += std::min(eval_b(b, angle(c1)), eval_b(b, angle(c2)));
    }
    return total * (2.0 * pi / naz);
  }
  const Rule1D mu = gauss_legendre_1d(order);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - mu.nodes[i] * mu.nodes[i]));
    const double b1 = eval_b(b, angle(mu.nodes[i]));
    double ring = 0.0;
    for (int k = 0; k < naz; ++k) {
      const double phi = 2.0 * pi * (k + 0.5) / naz;
      const double c2 = sp * s * std::cos(phi) + cp * mu.nodes[i];
      ring += std::min(b1, eval_b(b, angle(c2)));
    }
    total += mu.weights[i] * ring * (2.0 * pi / naz);
  }
  return total;
}
}  // namespace detail

/// c_b = inf_{sigma1, sigma2} int min{b(sigma1.sigma3), b(sigma2.sigma3)} dsigma3.
/// The infimum depends only on the angle psi between sigma1 and sigma2; psi is
/// scanned on `resolution` points of [0, pi] and the best point refined by
/// golden-section search. Returns the smallest value seen.
inline double compute_c_b(const AngularKernel& b_in, int N, int resolution = 64) {
  if (N != 2 && N != 3) throw DomainError("compute_c_b: N must be 2 or 3");
  if (resolution < 16) throw DomainError("compute_c_b: resolution must be >= 16");
  const AngularKernel b = with_dim(b_in, N);
  const int order = std::min(max_gauss_order, std::max(64, resolution));
  auto f = [&](double psi) { return detail::min_overlap(b, N, psi, order); };
  double best = std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = 0; k < resolution; ++k) {
    const double v = f(pi * k / (resolution - 1));
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  const double h = pi / (resolution - 1);
  double lo = std::max(0.0, (best_k - 1) * h), hi = std::min(pi, (best_k + 1) * h);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
    best = std::min({best, f1, f2});
  }
  if (!(best > 1e-12)) throw HypothesisViolation("angular kernel has c_b = 0 (needs c_b > 0)");
  return best;
}

// ---------------------------------------------------------------- JSON

inline KineticKernel kinetic_from_json(const nlohmann::json& j) {
  const std::string type = j.value("type", "");
  if (type == "power") return KineticKernel::power(j.at("gamma").get<double>());
  if (type == "constant") return KineticKernel::constant(j.value("value", 1.0));
  if (type == "tabulated") {
    return KineticKernel::tabulated(j.at("r").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
  }
  throw ConfigError("unknown phi type '" + type + "'");
}

inline nlohmann::json to_json(const KineticKernel& k) {
  if (const auto* p = std::get_if<PowerLaw>(&k.form)) return {{"type", "power"}, {"gamma", p->gamma}};
  if (const auto* c = std::get_if<ConstantPhi>(&k.form)) return {{"type", "constant"}, {"value", c->value}};
  const auto& t = std::get<TabulatedPhi>(k.form);
  return {{"type", "tabulated"}, {"r", t.r}, {"values", t.values}};
}

inline Mollifier mollifier_from_json(const nlohmann::json& j) {
  if (j.is_null()) return Mollifier::bump();
  if (j.is_string()) {
    if (j.get<std::string>() == "bump") return Mollifier::bump();
    throw ConfigError("unknown mollifier '" + j.get<std::string>() + "'");
  }
  return Mollifier::bump(j.value("power", 2.0));
}

inline AngularKernel angular_from_json(const nlohmann::json& j, int dim = 3) {
  const std::string type = j.value("type", "");
  if (type == "constant") return AngularKernel::constant(j.value("value", 1.0));
  if (type == "grazing") {
    return AngularKernel::grazing(j.at("eps").get<double>(),
                                  mollifier_from_json(j.contains("mollifier") ? j["mollifier"] : nlohmann::json()), dim);
  }
  if (type == "linear") return AngularKernel::linear();
  if (type == "tabulated") {
    return AngularKernel::tabulated(j.at("theta").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
  }
  throw ConfigError("unknown b type '" + type + "'");
}

inline nlohmann::json to_json(const AngularKernel& b) {
  if (const auto* c = std::get_if<ConstantB>(&b.form)) return {{"type", "constant"}, {"value", c->value}};
  if (const auto* g = std::get_if<GrazingB>(&b.form)) {
    return {{"type", "grazing"}, {"eps", g->eps}, {"mollifier", {{"type", "bump"}, {"power", g->j.power}}}};
  }
  const auto& t = std::get<TabulatedB>(b.form);
  return {{"type", "tabulated"}, {"theta", t.theta}, {"values", t.values}};
}

}  // namespace specgap

#pragma once

#include <array>

namespace specgap {

/// First-order forward-mode dual number with three partials. Only the
/// polynomial operations needed by the basis are provided.
struct Jet {
  double v = 0.0;
  std::array<double, 3> d{0.0, 0.0, 0.0};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  static Jet variable(double value, int axis) {
    Jet j(value);
    j.d[axis] = 1.0;
    return j;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < 3; ++i) d[i] += o.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < 3; ++i) d[i] -= o.d[i];
    return *this;
  }
  Jet& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    return *this;
  }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator-(Jet a) { return a *= -1.0; }
inline Jet operator*(Jet a, double s) { return a *= s; }
inline Jet operator*(double s, Jet a) { return a *= s; }
inline Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.v * b.v);
  for (int i = 0; i < 3; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.v; }

}  // namespace specgap

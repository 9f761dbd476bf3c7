#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "outcode/errors.hpp"

namespace outcode {

// Row-major n x d point set.
struct Points {
  int n = 0;
  int d = 0;
  std::vector<double> a;

  Points() = default;
  Points(int n_, int d_) : n(n_), d(d_), a(std::size_t(n_) * d_, 0.0) {}

  double* row(int i) { return a.data() + std::size_t(i) * d; }
  const double* row(int i) const { return a.data() + std::size_t(i) * d; }
};

inline double dot(const double* u, const double* v, int d) {
  double s = 0.0;
  for (int a = 0; a < d; ++a) s += u[a] * v[a];
  return s;
}

inline double sqnorm(const double* u, int d) { return dot(u, u, d); }

inline double norm(const double* u, int d) { return std::sqrt(sqnorm(u, d)); }

inline double sqdist(const double* u, const double* v, int d) {
  double s = 0.0;
  for (int a = 0; a < d; ++a) {
    double t = u[a] - v[a];
    s += t * t;
  }
  return s;
}

inline double dist(const double* u, const double* v, int d) { return std::sqrt(sqdist(u, v, d)); }

inline double clamp_unit(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

// Angle between unit vectors; inputs are assumed normalized.
inline double angle(const double* u, const double* v, int d) {
  return std::acos(clamp_unit(dot(u, v, d)));
}

inline std::vector<double> normalized(const double* u, int d) {
  double nz = norm(u, d);
  if (nz < 1e-300) throw InvalidInput("cannot normalize a zero vector");
  std::vector<double> out(u, u + d);
  for (int a = 0; a < d; ++a) out[a] /= nz;
  return out;
}

}  // namespace outcode

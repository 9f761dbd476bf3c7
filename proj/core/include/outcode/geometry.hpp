#pragma once

#include <utility>
#include <vector>

#include "outcode/errors.hpp"
#include "outcode/points.hpp"

namespace outcode {

// -------------------------------------------------------------------------
// Codes
// -------------------------------------------------------------------------

// Sign vector in {+1, -1}^m.
struct Codeword {
  std::vector<int> bits;

  Codeword() = default;
  explicit Codeword(std::vector<int> b) : bits(std::move(b)) {}
  int size() const { return int(bits.size()); }
  bool operator==(const Codeword& o) const { return bits == o.bits; }
};

struct CodeMatrix {
  std::vector<Codeword> rows;

  int num_classes() const { return int(rows.size()); }
  int code_length() const { return rows.empty() ? 0 : rows.front().size(); }

  // all rows same length, entries in {+1,-1}, rows pairwise distinct
  void validate() const;
};

int hamming_distance(const Codeword& a, const Codeword& b);

// -------------------------------------------------------------------------
// Geometry primitives
// -------------------------------------------------------------------------

// w^T x - b with ||w|| = 1.
struct Hyperplane {
  std::vector<double> w;
  double b = 0.0;

  int dim() const { return int(w.size()); }
  double eval(const double* x) const { return dot(w.data(), x, dim()) - b; }
};

void validate_unit_direction(const std::vector<double>& w, double tol = 1e-12);

struct SphericalCap {
  std::vector<double> center;   // unit vector
  double angular_radius = 0.0;  // radians in [0, pi]
};

struct HalfBall {
  std::vector<double> center;
  double radius = 0.0;
  std::vector<double> direction;  // unit vector

  // open half-ball membership: y in B(center, radius) with direction^T (y - center) > 0
  bool contains(const double* y) const;
};

// sign with sign(0) := +1
inline int sign_pm(double v) { return v < 0.0 ? -1 : +1; }

Codeword predict_codeword(const std::vector<Hyperplane>& planes, const double* x, int d);

// nearest row in Hamming distance; ties broken by smallest class index
int decode(const Codeword& predicted, const CodeMatrix& code);

// -------------------------------------------------------------------------
// Measures on balls and spheres
// -------------------------------------------------------------------------

// Volume of the unit ball in R^d (exact recurrence). d >= 1.
double unit_ball_volume(int d);

// Measure of a spherical cap of angular radius r on S^{d-1}, relative to the
// uniform probability measure on the sphere. d >= 2, r in [0, pi].
double cap_measure(int d, double r);

// P(X_1 in [0, rho]) for X uniform in the ball of radius r in R^d.
double ball_slice_probability(int d, double r, double rho);

// Closed-form lower/upper bounds for the slice probability; requires
// rho <= r / sqrt(2).
std::pair<double, double> ball_slice_bounds(int d, double r, double rho);

// Projected density restricted to one cap: value at a sphere point v with
// u = w^T v > b, density bound constant c. Zero at u <= b.
double projected_density_value(int d, double b, double u, double c);

// Angular radius of the level set {q_c >= lambda} for the single-cap
// projected density with constant c; lambda in [0, peak). Throws
// EmptyLevelSet past the peak.
double cap_level_radius(int d, double b, double c, double lambda);

// Volume of the solid cap {x : ||x|| <= 1, w^T x > b}.
double solid_cap_volume(int d, double b);

}  // namespace outcode

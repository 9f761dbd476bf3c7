#include "outcode/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "outcode/quadrature.hpp"

namespace outcode {

void CodeMatrix::validate() const {
  int m = code_length();
  for (const auto& row : rows) {
    if (row.size() != m) throw InvalidInput("code matrix rows have unequal lengths");
    for (int v : row.bits)
      if (v != 1 && v != -1) throw InvalidInput("codeword entries must be +1 or -1");
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (rows[i] == rows[j]) throw InvalidInput("code matrix rows must be distinct");
}

int hamming_distance(const Codeword& a, const Codeword& b) {
  if (a.size() != b.size()) throw InvalidInput("hamming_distance: codeword lengths differ");
  int dist = 0;
  for (int k = 0; k < a.size(); ++k)
    if (a.bits[k] != b.bits[k]) ++dist;
  return dist;
}

void validate_unit_direction(const std::vector<double>& w, double tol) {
  double nz = norm(w.data(), int(w.size()));
  if (std::fabs(nz - 1.0) > tol) throw InvalidInput("direction vector is not unit norm");
}

bool HalfBall::contains(const double* y) const {
  int d = int(center.size());
  if (sqdist(y, center.data(), d) > radius * radius) return false;
  double s = 0.0;
  for (int a = 0; a < d; ++a) s += direction[a] * (y[a] - center[a]);
  return s > 0.0;
}

Codeword predict_codeword(const std::vector<Hyperplane>& planes, const double* x, int d) {
  Codeword cw;
  cw.bits.reserve(planes.size());
  for (const auto& h : planes) {
    if (h.dim() != d) throw InvalidInput("predict_codeword: dimension mismatch");
    cw.bits.push_back(sign_pm(h.eval(x)));
  }
  return cw;
}

int decode(const Codeword& predicted, const CodeMatrix& code) {
  if (code.num_classes() == 0) throw InvalidInput("decode: empty code matrix");
  int best = 0;
  int best_dist = std::numeric_limits<int>::max();
  for (int i = 0; i < code.num_classes(); ++i) {
    int dist = hamming_distance(predicted, code.rows[i]);
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

double unit_ball_volume(int d) {
  if (d < 1) throw InvalidInput("unit_ball_volume: d must be >= 1");
  // v_d = v_{d-2} * 2 pi / d, v_0 = 1, v_1 = 2
  double even = 1.0, odd = 2.0;
  if (d == 1) return 2.0;
  double v = 0.0;
  for (int k = 2; k <= d; ++k) {
    if (k % 2 == 0) {
      even = even * 2.0 * M_PI / double(k);
      v = even;
    } else {
      odd = odd * 2.0 * M_PI / double(k);
      v = odd;
    }
  }
  return v;
}

namespace {

double sin_power_integral(int p, double a, double b) {
  if (p == 0) return b - a;
  return integrate([p](double t) { return std::pow(std::sin(t), p); }, a, b, 1e-9, 60);
}

}  // namespace

double cap_measure(int d, double r) {
  if (d < 2) throw InvalidInput("cap_measure: d must be >= 2");
  if (r < 0.0 || r > M_PI) throw InvalidInput("cap_measure: angular radius outside [0, pi]");
  if (r == 0.0) return 0.0;
  if (r == M_PI) return 1.0;
  double num = sin_power_integral(d - 2, 0.0, r);
  double den = sin_power_integral(d - 2, 0.0, M_PI);
  return num / den;
}

double ball_slice_probability(int d, double r, double rho) {
  if (d < 1) throw InvalidInput("ball_slice_probability: d must be >= 1");
  if (r <= 0.0) throw InvalidInput("ball_slice_probability: radius must be positive");
  if (rho < 0.0 || rho > r) throw InvalidInput("ball_slice_probability: need 0 <= rho <= r");
  if (rho == 0.0) return 0.0;
  double vd = unit_ball_volume(d);
  double vdm1 = d == 1 ? 1.0 : unit_ball_volume(d - 1);  // v_0 = 1
  double p = double(d - 1) / 2.0;
  double integ = integrate([r, p](double x) { return std::pow(r * r - x * x, p); }, 0.0, rho,
                           1e-9, 60);
  return vdm1 / (std::pow(r, d) * vd) * integ;
}

std::pair<double, double> ball_slice_bounds(int d, double r, double rho) {
  if (d < 1) throw InvalidInput("ball_slice_bounds: d must be >= 1");
  if (r <= 0.0) throw InvalidInput("ball_slice_bounds: radius must be positive");
  if (rho < 0.0 || rho > r / std::sqrt(2.0) + 1e-15)
    throw InvalidInput("ball_slice_bounds: lemma requires 0 <= rho <= r/sqrt(2)");
  double lo = std::sqrt(double(d) / (std::pow(2.0, d) * M_PI)) * rho / r;
  double hi = std::sqrt(double(d + 1) / (2.0 * M_PI)) * rho / r;
  return {lo, hi};
}

double projected_density_value(int d, double b, double u, double c) {
  if (u <= b) return 0.0;
  double vd = unit_ball_volume(d);
  return c * vd * (1.0 - std::pow(b / u, d));
}

double cap_level_radius(int d, double b, double c, double lambda) {
  if (lambda < 0.0) throw InvalidInput("cap_level_radius: lambda must be >= 0");
  double vd = unit_ball_volume(d);
  double scale = c * vd;
  if (lambda >= scale) throw EmptyLevelSet("cap_level_radius: level above the density scale");
  double arg = b * std::pow(1.0 - lambda / scale, -1.0 / double(d));
  if (arg > 1.0 + 1e-12) throw EmptyLevelSet("cap_level_radius: level set is empty");
  return std::acos(clamp_unit(arg));
}

double solid_cap_volume(int d, double b) {
  if (d < 1) throw InvalidInput("solid_cap_volume: d must be >= 1");
  if (b >= 1.0) return 0.0;
  double lo = std::max(b, -1.0);
  if (d == 1) return 1.0 - lo;
  double vdm1 = unit_ball_volume(d - 1);
  double p = double(d - 1) / 2.0;
  return vdm1 * integrate([p](double t) { return std::pow(1.0 - t * t, p); }, lo, 1.0, 1e-9, 60);
}

}  // namespace outcode

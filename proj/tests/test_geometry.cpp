#include <cmath>
#include <vector>

#include "doctest.h"
#include "outcode/geometry.hpp"
#include "outcode/instance.hpp"
#include "outcode/rng.hpp"

using namespace outcode;

namespace {

Codeword cw(std::vector<int> bits) { return Codeword(std::move(bits)); }

// all sign vectors of length m
std::vector<Codeword> all_codewords(int m) {
  std::vector<Codeword> out;
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> bits(m);
    for (int k = 0; k < m; ++k) bits[k] = (mask >> k) & 1 ? +1 : -1;
    out.push_back(cw(bits));
  }
  return out;
}

}  // namespace

TEST_CASE("hamming distance examples and errors") {
  CHECK(hamming_distance(cw({+1, -1, +1}), cw({+1, -1, +1})) == 0);
  CHECK(hamming_distance(cw({+1, +1}), cw({-1, -1})) == 2);
  // one-vs-all rows are always at distance exactly 2
  CodeMatrix ova;
  for (int i = 0; i < 4; ++i) {
    std::vector<int> row(4, -1);
    row[i] = +1;
    ova.rows.push_back(cw(row));
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) CHECK(hamming_distance(ova.rows[i], ova.rows[j]) == 2);
  CHECK_THROWS_AS(hamming_distance(cw({+1}), cw({+1, -1})), InvalidInput);
}

TEST_CASE("hamming distance is a metric, exhaustively for m <= 6") {
  for (int m = 1; m <= 6; ++m) {
    auto words = all_codewords(m);
    int n = int(words.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int dij = hamming_distance(words[i], words[j]);
        CHECK(dij >= 0);
        CHECK(dij == hamming_distance(words[j], words[i]));
        CHECK((dij == 0) == (i == j));
      }
    if (m <= 4) {  // full triple scan only at the small sizes
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            CHECK(hamming_distance(words[i], words[k]) <=
                  hamming_distance(words[i], words[j]) + hamming_distance(words[j], words[k]));
    }
  }
  // triangle inequality spot check at m = 6 on random triples
  auto words = all_codewords(6);
  Rng rng(7);
  for (int t = 0; t < 20000; ++t) {
    const auto& a = words[rng.uniform_index(words.size())];
    const auto& b = words[rng.uniform_index(words.size())];
    const auto& c = words[rng.uniform_index(words.size())];
    CHECK(hamming_distance(a, c) <= hamming_distance(a, b) + hamming_distance(b, c));
  }
}

TEST_CASE("predict_codeword signs and boundary convention") {
  Hyperplane h1{{1.0, 0.0}, 0.0};
  double x1[2] = {0.5, 0.0};
  CHECK(predict_codeword({h1}, x1, 2).bits == std::vector<int>{+1});

  double on_plane[2] = {0.0, 0.3};
  CHECK(predict_codeword({h1}, on_plane, 2).bits == std::vector<int>{+1});  // sign(0) = +1

  Hyperplane h2{{0.0, 1.0}, 0.0};
  double x2[2] = {-1.0, 1.0};
  CHECK(predict_codeword({h1, h2}, x2, 2).bits == std::vector<int>{-1, +1});
}

TEST_CASE("decode nearest codeword with smallest-index ties") {
  CodeMatrix code;
  code.rows = {cw({+1, -1, -1}), cw({-1, +1, -1}), cw({-1, -1, +1})};
  CHECK(decode(code.rows[2], code) == 2);
  CHECK(decode(cw({+1, -1, -1}), code) == 0);
  // (+1,+1,-1) is at distance 1 from rows 0 and 1: smallest index wins
  CHECK(decode(cw({+1, +1, -1}), code) == 0);
}

TEST_CASE("unit ball volume") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(unit_ball_volume(0), InvalidInput);
  // against the gamma-function formula
  for (int d = 1; d <= 15; ++d) {
    double wanted = std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
    CHECK(unit_ball_volume(d) == doctest::Approx(wanted).epsilon(1e-12));
  }
}

TEST_CASE("cap measure examples, monotonicity, symmetry") {
  for (int d : {2, 3, 5, 9}) CHECK(cap_measure(d, M_PI / 2.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cap_measure(3, M_PI / 3.0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(cap_measure(2, M_PI / 4.0) == doctest::Approx(0.25).epsilon(1e-9));
  // closed form on the 2-sphere: (1 - cos r) / 2
  for (double r = 0.1; r < M_PI; r += 0.37)
    CHECK(cap_measure(3, r) == doctest::Approx((1.0 - std::cos(r)) / 2.0).epsilon(1e-9));
  for (int d : {2, 3, 6}) {
    double prev = -1.0;
    for (int k = 0; k <= 24; ++k) {
      double r = M_PI * k / 24.0;
      double v = cap_measure(d, r);
      CHECK(v >= prev - 1e-12);
      prev = v;
      CHECK(cap_measure(d, M_PI - r) == doctest::Approx(1.0 - v).epsilon(1e-8));
    }
    CHECK(cap_measure(d, 0.0) == 0.0);
    CHECK(cap_measure(d, M_PI) == 1.0);
  }
  CHECK_THROWS_AS(cap_measure(1, 0.5), InvalidInput);
  CHECK_THROWS_AS(cap_measure(3, -0.1), InvalidInput);
  CHECK_THROWS_AS(cap_measure(3, 3.5), InvalidInput);
}

TEST_CASE("ball slice probability: closed forms and Monte Carlo") {
  CHECK(ball_slice_probability(4, 1.0, 0.0) == 0.0);
  CHECK(ball_slice_probability(1, 1.0, 0.3) == doctest::Approx(0.15).epsilon(1e-12));
  // d = 2 closed form at rho = 1/sqrt(2): 1/4 + 1/(2 pi)
  double expected = 0.25 + 1.0 / (2.0 * M_PI);
  CHECK(ball_slice_probability(2, 1.0, 1.0 / std::sqrt(2.0)) ==
        doctest::Approx(expected).epsilon(1e-9));
  CHECK_THROWS_AS(ball_slice_probability(2, 1.0, 1.5), InvalidInput);

  // Monte Carlo agreement, d = 3
  Rng rng(11);
  long n = 200000, hits = 0;
  double rho = 0.4;
  std::vector<double> p(3);
  for (long t = 0; t < n; ++t) {
    rng.ball_point(3, p.data());
    if (p[0] >= 0.0 && p[0] <= rho) ++hits;
  }
  double est = double(hits) / double(n);
  double target = ball_slice_probability(3, 1.0, rho);
  double se = std::sqrt(est * (1.0 - est) / double(n));
  CHECK(std::fabs(est - target) <= 4.0 * se);
}

TEST_CASE("ball slice bounds") {
  auto [lo1, hi1] = ball_slice_bounds(1, 1.0, 0.5);
  CHECK(lo1 == doctest::Approx(0.1995).epsilon(1e-3));
  CHECK(hi1 == doctest::Approx(0.2821).epsilon(1e-3));
  auto [lo0, hi0] = ball_slice_bounds(3, 1.0, 0.0);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == 0.0);
  auto [lo2, hi2] = ball_slice_bounds(2, 1.0, 1.0 / std::sqrt(2.0));
  CHECK(lo2 == doctest::Approx(0.2821).epsilon(1e-3));
  CHECK(hi2 == doctest::Approx(0.4886).epsilon(1e-3));
  double exact2 = ball_slice_probability(2, 1.0, 1.0 / std::sqrt(2.0));
  CHECK(lo2 <= exact2);
  CHECK(exact2 <= hi2);
  CHECK_THROWS_AS(ball_slice_bounds(2, 1.0, 0.9), InvalidInput);

  // containment across dimensions and widths
  for (int d = 1; d <= 10; ++d)
    for (int k = 1; k <= 12; ++k) {
      double rho = k / 12.0 / std::sqrt(2.0);
      double p = ball_slice_probability(d, 1.0, rho);
      auto [lo, hi] = ball_slice_bounds(d, 1.0, rho);
      CHECK(p >= lo - 1e-9);
      CHECK(p <= hi + 1e-9);
    }
}

TEST_CASE("projected density bounds on a one-vs-all instance") {
  auto inst = generate_one_vs_all(3, 2, 0.5, 3);
  double b = inst.planes[0].b;
  double c = inst.certified.c_lb;
  CHECK(b == doctest::Approx(0.5));

  // at the cap center the density equals c * v_d * (1 - b^d)
  auto [ql, qu] = projected_density_bounds(inst, inst.planes[0].w.data());
  double expected = c * unit_ball_volume(3) * (1.0 - b * b * b);
  CHECK(ql == doctest::Approx(expected).epsilon(1e-12));
  CHECK(qu == doctest::Approx(expected).epsilon(1e-12));

  // on the rim the density vanishes; w0 = e0, rotate by arccos(b) toward e1
  double rho = std::acos(b);
  std::vector<double> rim = {std::cos(rho), std::sin(rho), 0.0};
  auto [qrl, qru] = projected_density_bounds(inst, rim.data());
  CHECK(qrl <= 1e-8);
  CHECK(qru <= 1e-8);

  // outside every cap: equator point orthogonal to both w0 and -w0 caps
  std::vector<double> mid = {0.0, 1.0, 0.0};
  auto [zl, zu] = projected_density_bounds(inst, mid.data());
  CHECK(zl == 0.0);
  CHECK(zu == 0.0);

  // overlapping caps violate the instance invariant
  ProblemInstance bad = inst;
  bad.planes[1].w = bad.planes[0].w;  // duplicate direction: caps coincide
  std::vector<double> v = bad.planes[0].w;
  CHECK_THROWS_AS(projected_density_bounds(bad, v.data()), InstanceInvariantViolation);
}

TEST_CASE("cap radius: endpoints, inverse round-trip, ordering") {
  auto inst = generate_one_vs_all(3, 2, 0.5, 3);
  double b = inst.planes[0].b;
  CHECK(cap_radius(inst, 0, 0.0, LevelSide::upper) == doctest::Approx(std::acos(b)).epsilon(1e-12));

  double peak = inst.certified.c_lb * unit_ball_volume(3) * (1.0 - b * b * b);
  // radius shrinks to zero as the level approaches the peak
  CHECK(cap_radius(inst, 0, peak * (1.0 - 1e-9), LevelSide::lower) < 1e-2);
  CHECK_THROWS_AS(cap_radius(inst, 0, peak * 1.01, LevelSide::lower), EmptyLevelSet);

  // round trip: the density at the level-set rim recovers the level
  for (double lambda : {0.05, 0.3, 0.8}) {
    double rho = cap_radius(inst, 0, lambda, LevelSide::lower);
    double q_at_rim = projected_density_value(3, b, std::cos(rho), inst.certified.c_lb);
    CHECK(q_at_rim == doctest::Approx(lambda).epsilon(1e-9));
  }

  // decreasing in lambda; upper-bound level sets contain lower-bound ones
  double prev = 1e9;
  for (double lambda : {0.0, 0.1, 0.2, 0.4}) {
    double r_up = cap_radius(inst, 0, lambda, LevelSide::upper);
    double r_lo = cap_radius(inst, 0, lambda, LevelSide::lower);
    CHECK(r_up >= r_lo - 1e-12);  // c_ub >= c_lb
    CHECK(r_up <= prev + 1e-12);
    prev = r_up;
  }
}

TEST_CASE("codeword prediction pipeline survives a duplicated redundant plane") {
  auto inst = generate_ecoc(2, 3, 0.3, 9);
  auto sample = draw_sample(inst, 500, 21);
  ProblemInstance padded = inst;
  padded.planes.push_back(inst.planes[0]);
  for (int i = 0; i < padded.code.num_classes(); ++i)
    padded.code.rows[i].bits.push_back(inst.code.rows[i].bits[0]);
  for (int i = 0; i < sample.pts.n; ++i) {
    const double* x = sample.pts.row(i);
    int before = decode(predict_codeword(inst.planes, x, 2), inst.code);
    int after = decode(predict_codeword(padded.planes, x, 2), padded.code);
    CHECK(before == after);
  }
}

TEST_CASE("annulus mass of projected samples matches the density quadrature") {
  // uniform one-vs-all: q_l = q_u = q; empirical annulus mass tracks the
  // integral of q over the annulus
  auto inst = generate_one_vs_all(3, 2, 0.5, 5);
  auto sample = draw_sample(inst, 120000, 17);
  double rho1 = 0.25, rho2 = 0.55;
  const double* w = inst.planes[0].w.data();
  long hits = 0;
  for (int i = 0; i < sample.pts.n; ++i) {
    auto v = normalized(sample.pts.row(i), 3);
    double ang = std::acos(clamp_unit(dot(w, v.data(), 3)));
    if (ang >= rho1 && ang <= rho2) ++hits;
  }
  double est = double(hits) / double(sample.pts.n);
  // integrate q over the annulus against the normalized sphere measure
  double z = 2.0;  // integral of sin(theta) over [0, pi]
  double target = 0.0;
  int steps = 4000;
  for (int k = 0; k < steps; ++k) {
    double th = rho1 + (rho2 - rho1) * (k + 0.5) / steps;
    double q = projected_density_value(3, inst.planes[0].b, std::cos(th), inst.certified.c_lb);
    target += q * std::sin(th) / z * (rho2 - rho1) / steps;
  }
  double se = std::sqrt(est * (1.0 - est) / double(sample.pts.n));
  CHECK(std::fabs(est - target) <= 4.0 * se + 1e-4);
}

#include <cmath>
#include <cstdio>
#include <set>

#include "doctest.h"
#include "outcode/instance.hpp"
#include "outcode/io.hpp"
#include "outcode/rng.hpp"

using namespace outcode;

namespace {

// brute-force minimum cross-class distance over sampled pairs
double sampled_cross_margin(const ProblemInstance& inst, int pool_n, long pairs,
                            std::uint64_t seed) {
  Sample pool = draw_sample(inst, pool_n, seed);
  std::vector<int> labels(pool_n);
  for (int i = 0; i < pool_n; ++i) labels[i] = inst.truth_label(pool.pts.row(i));
  Rng rng(seed + 1);
  double best = 1e300;
  long done = 0, guard = 0;
  while (done < pairs && guard < 100 * pairs) {
    ++guard;
    int i = int(rng.uniform_index(pool_n)), j = int(rng.uniform_index(pool_n));
    if (labels[i] == labels[j]) continue;
    best = std::min(best, dist(pool.pts.row(i), pool.pts.row(j), inst.d));
    ++done;
  }
  return best;
}

int min_pairwise_hamming(const CodeMatrix& code) {
  int best = 1 << 30;
  for (int i = 0; i < code.num_classes(); ++i)
    for (int j = i + 1; j < code.num_classes(); ++j)
      best = std::min(best, hamming_distance(code.rows[i], code.rows[j]));
  return best;
}

}  // namespace

TEST_CASE("generate_ecoc: canonical two-ball instance") {
  auto inst = generate_ecoc(2, 2, 0.3, 1);
  CHECK(inst.regions.size() == 2);
  CHECK(inst.region_radius == doctest::Approx(0.15));
  CHECK(inst.certified.margin_g == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(inst.certified.thickness_C == 1.0);
  CHECK(inst.certified.diameter <= 1.0 + 1e-12);
  CHECK(min_pairwise_hamming(inst.code) >= inst.d + 1);
  // empirical face of the separation lemma
  double margin = sampled_cross_margin(inst, 1500, 100000, 5);
  CHECK(margin >= 0.3 * 0.95);
  CHECK(margin >= 0.3 - 1e-9);  // points of disjoint balls can never be closer
}

TEST_CASE("generate_ecoc: three regions need a smaller radius but keep the gap") {
  auto inst = generate_ecoc(2, 3, 0.3, 1);
  CHECK(inst.regions.size() == 3);
  CHECK(inst.region_radius < 0.15);
  CHECK(inst.certified.margin_g == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(min_pairwise_hamming(inst.code) >= 3);
  // every region stays inside the unit-diameter ball
  for (const auto& r : inst.regions)
    CHECK(norm(r.center.data(), 2) + inst.region_radius <= 0.5 + 1e-9);
}

TEST_CASE("generate_ecoc: decoded class equals ground truth at beta = 0") {
  for (auto shape : {RegionShape::ball, RegionShape::cube}) {
    auto inst = generate_ecoc(3, 3, 0.25, 2, shape);
    auto sample = draw_sample(inst, 2000, 3);
    for (int i = 0; i < sample.pts.n; ++i) {
      const double* x = sample.pts.row(i);
      CHECK(decode(predict_codeword(inst.planes, x, inst.d), inst.code) == inst.truth_label(x));
    }
  }
}

TEST_CASE("generate_ecoc: cube regions certify thickness sqrt(d)") {
  auto inst = generate_ecoc(3, 2, 0.3, 4, RegionShape::cube);
  CHECK(inst.certified.thickness_C == doctest::Approx(std::sqrt(3.0)));
  CHECK(inst.certified.margin_g >= 0.3 - 1e-12);
}

TEST_CASE("generate_ecoc: single region and infeasible packing") {
  auto inst = generate_ecoc(2, 1, 0.3, 1);
  CHECK(inst.num_classes() == 1);
  CHECK(inst.code.code_length() >= 1);
  CHECK_THROWS_AS(generate_ecoc(2, 12, 0.5, 1), GenerationError);
}

TEST_CASE("generate_ecoc_manifold: flat patches in ambient space") {
  auto inst = generate_ecoc_manifold(5, 1, 3, 0.3, 7);
  CHECK(inst.shape == RegionShape::patch);
  CHECK(inst.patch_axes == std::vector<int>{1});
  CHECK(inst.certified.doubling_dimension.has_value());
  CHECK(*inst.certified.doubling_dimension == 1.0);
  CHECK(inst.certified.margin_g == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(min_pairwise_hamming(inst.code) >= 6);

  auto sample = draw_sample(inst, 500, 8);
  for (int i = 0; i < sample.pts.n; ++i) {
    const double* x = sample.pts.row(i);
    // off-patch coordinates match a region center exactly
    CHECK(std::fabs(x[2]) < 1e-12);
    CHECK(std::fabs(x[3]) < 1e-12);
    CHECK(std::fabs(x[4]) < 1e-12);
    CHECK(inst.truth_label(x) >= 0);
  }

  // degenerate intrinsic dimension falls back to full-dimensional regions
  auto full = generate_ecoc_manifold(3, 3, 2, 0.3, 7);
  CHECK(full.shape == RegionShape::ball);
}

TEST_CASE("generate_ecoc_manifold: empirical doubling ratios") {
  auto inst = generate_ecoc_manifold(5, 1, 3, 0.3, 7);
  auto pool = draw_sample(inst, 100000, 9);
  Rng rng(10);
  double r_hi = std::min(inst.region_radius, inst.certified.margin_g / 2.0);
  double r_lo = inst.region_radius / 64.0;
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    const double* x = pool.pts.row(int(rng.uniform_index(pool.pts.n)));
    double r = r_lo * std::pow(r_hi / r_lo, rng.uniform());
    long small = 0, big = 0;
    for (int i = 0; i < pool.pts.n; ++i) {
      double dd = dist(pool.pts.row(i), x, inst.d);
      if (dd <= r) ++small;
      if (dd <= 2.0 * r) ++big;
    }
    REQUIRE(small > 0);
    if (double(big) / double(small) > std::pow(2.0, 1 + 1)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("generate_one_vs_all: antipodal pair keeps b_min and caps disjoint") {
  auto inst = generate_one_vs_all(3, 2, 0.5, 3);
  CHECK(inst.planes.size() == 2);
  CHECK(inst.certified.b_min == doctest::Approx(0.5));
  CHECK(dot(inst.planes[0].w.data(), inst.planes[1].w.data(), 3) == doctest::Approx(-1.0));
  // quadrature volume against the recorded Monte Carlo cross-check
  CHECK(std::fabs(inst.certified.support_volume - inst.certified.vol_mc) <=
        4.0 * inst.certified.vol_mc_se);
  // sampled points: the label is inherited by the spherical projection
  auto sample = draw_sample(inst, 50000, 4);
  for (int i = 0; i < sample.pts.n; ++i) {
    const double* x = sample.pts.row(i);
    auto v = normalized(x, 3);
    CHECK(inst.truth_label(x) == inst.truth_label(v.data()));
  }
}

TEST_CASE("generate_one_vs_all: no sampled point lies in two caps") {
  auto inst = generate_one_vs_all(3, 3, 0.5, 6);
  CHECK(inst.certified.b_min >= 0.5);
  auto sample = draw_sample(inst, 30000, 5);
  for (int i = 0; i < sample.pts.n; ++i) {
    int hits = 0;
    for (const auto& h : inst.planes)
      if (h.eval(sample.pts.row(i)) > 0.0) ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("generate_one_vs_all: single class and impossible packings") {
  auto inst = generate_one_vs_all(2, 1, 0.3, 1);
  CHECK(inst.num_classes() == 1);
  CHECK(inst.certified.b_min == doctest::Approx(0.3));
  CHECK_THROWS_AS(generate_one_vs_all(3, 7, 0.5, 1), GenerationError);
}

TEST_CASE("generate_boundary_features: staircase2d witnesses and certificates") {
  auto inst = generate_boundary_features(2, "staircase2d", 0.1, 1);
  CHECK(inst.planes.size() == 4);
  CHECK(inst.num_classes() == 7);
  CHECK(inst.layout.witnesses.size() == 4);
  CHECK(inst.certified.scale_R == doctest::Approx(0.1));
  // each witness ball carries only the two admissible codewords
  Rng rng(2);
  for (const auto& [plane_k, center] : inst.layout.witnesses) {
    std::set<std::vector<int>> seen;
    std::vector<double> p(2);
    for (int t = 0; t < 10000; ++t) {
      rng.ball_point(2, p.data());
      for (int a = 0; a < 2; ++a) p[a] = center[a] + 0.1 * p[a];
      seen.insert(predict_codeword(inst.planes, p.data(), 2).bits);
    }
    CHECK(seen.size() == 2);
    auto it = seen.begin();
    auto c1 = *it, c2 = *std::next(it);
    int diffs = 0, diff_at = -1;
    for (std::size_t k = 0; k < c1.size(); ++k)
      if (c1[k] != c2[k]) {
        ++diffs;
        diff_at = int(k);
      }
    CHECK(diffs == 1);
    CHECK(diff_at == plane_k);
  }
}

TEST_CASE("generate_boundary_features: grid2d, degenerate 1-d box, bad R") {
  auto grid = generate_boundary_features(2, "grid2d", 0.05, 1);
  CHECK(grid.planes.size() == 8);
  CHECK(grid.num_classes() == 22);

  // m planes bounding one box: the 1-d axis grid has a single occupied cell
  auto single = generate_boundary_features(1, "axis_grid_d", 0.1, 1);
  CHECK(single.num_classes() == 1);
  CHECK(single.planes.size() == 2);

  CHECK_THROWS_AS(generate_boundary_features(2, "staircase2d", 0.3, 1), GenerationError);
  CHECK_THROWS_AS(generate_boundary_features(2, "nope", 0.1, 1), InvalidInput);
}

TEST_CASE("draw_sample: determinism, support membership, errors") {
  auto inst = generate_ecoc(2, 2, 0.3, 1);
  auto s1 = draw_sample(inst, 400, 9);
  auto s2 = draw_sample(inst, 400, 9);
  CHECK(s1.pts.a == s2.pts.a);  // bit-for-bit
  auto s3 = draw_sample(inst, 400, 10);
  CHECK(s1.pts.a != s3.pts.a);
  for (int i = 0; i < s1.pts.n; ++i) CHECK(inst.truth_label_or_none(s1.pts.row(i)) >= 0);
  CHECK_THROWS_AS(draw_sample(inst, 0, 1), InvalidInput);

  auto one = draw_sample(inst, 1, 2);
  CHECK(one.pts.n == 1);
}

TEST_CASE("oracle: noiseless, flip fraction, persistence, budget") {
  auto inst = generate_ecoc(2, 3, 0.3, 1);
  auto sample = draw_sample(inst, 10000, 2);

  LabeledOracle clean(inst, 0.0, 123);
  for (int i = 0; i < 500; ++i)
    CHECK(clean.query(sample.pts.row(i), i) == inst.truth_label(sample.pts.row(i)));
  CHECK(clean.query_count() == 500);

  LabeledOracle noisy(inst, 0.05, 77);
  long flipped = 0;
  for (int i = 0; i < 10000; ++i)
    if (noisy.query(sample.pts.row(i), i) != inst.truth_label(sample.pts.row(i))) ++flipped;
  double frac = double(flipped) / 10000.0;
  CHECK(frac >= 0.03);
  CHECK(frac <= 0.07);
  // requerying an index returns the same answer
  for (int i = 0; i < 200; ++i) {
    int a = noisy.query(sample.pts.row(i), i);
    int b = noisy.query(sample.pts.row(i), i);
    CHECK(a == b);
  }

  LabeledOracle capped(inst, 0.0, 1, 3);
  for (int i = 0; i < 3; ++i) capped.query(sample.pts.row(i), i);
  CHECK_THROWS_AS(capped.query(sample.pts.row(3), 3), BudgetExhausted);

  // outside the support there is no class
  double far[2] = {7.0, 7.0};
  CHECK_THROWS_AS(clean.query(far, 999), NoClassError);
}

TEST_CASE("verify_assumptions passes for every generator") {
  CHECK(verify_assumptions(generate_ecoc(2, 3, 0.3, 1), 40000, 1).all_pass());
  CHECK(verify_assumptions(generate_ecoc(3, 2, 0.3, 2, RegionShape::cube), 40000, 2).all_pass());
  CHECK(verify_assumptions(generate_ecoc_manifold(5, 1, 3, 0.3, 3), 40000, 3).all_pass());
  CHECK(verify_assumptions(generate_one_vs_all(3, 3, 0.5, 4), 40000, 4).all_pass());
  CHECK(
      verify_assumptions(generate_boundary_features(2, "staircase2d", 0.1, 5), 40000, 5).all_pass());
}

TEST_CASE("verify_assumptions flags constructed violations") {
  // two touching classes: shrink the certified margin claim below reality
  auto touching = generate_ecoc(2, 2, 0.3, 1);
  touching.regions[1].center = touching.regions[0].center;
  for (auto& c : touching.regions[1].center) c += 1e-4;  // overlapping balls
  touching.certified.margin_g = 0.3;                     // now a false claim
  auto rep = verify_assumptions(touching, 30000, 2);
  bool margin_failed = false;
  for (const auto& c : rep.checks)
    if (c.name.rfind("a:", 0) == 0 && !c.pass) margin_failed = true;
  CHECK(margin_failed);

  // overlapping caps fail the disjointness check
  auto ova = generate_one_vs_all(3, 2, 0.5, 3);
  ova.planes[1].w = ova.planes[0].w;
  auto rep2 = verify_assumptions(ova, 30000, 3);
  bool caps_failed = false;
  for (const auto& c : rep2.checks)
    if (c.name.rfind("d:", 0) == 0 && !c.pass) caps_failed = true;
  CHECK(caps_failed);
}

TEST_CASE("instance files round-trip exactly") {
  for (int variant = 0; variant < 4; ++variant) {
    ProblemInstance inst;
    switch (variant) {
      case 0: inst = generate_ecoc(2, 3, 0.3, 11); break;
      case 1: inst = generate_ecoc_manifold(4, 1, 2, 0.25, 12); break;
      case 2: inst = generate_one_vs_all(3, 2, 0.5, 13); break;
      default: inst = generate_boundary_features(2, "staircase2d", 0.1, 14); break;
    }
    std::string text = instance_to_json(inst);
    ProblemInstance back = instance_from_json(text);
    CHECK(instance_to_json(back) == text);  // byte-stable after one round trip
    CHECK(back.certified.support_volume == inst.certified.support_volume);
    CHECK(back.certified.c_lb == inst.certified.c_lb);
    CHECK(back.certified.margin_g == inst.certified.margin_g);
    for (std::size_t p = 0; p < inst.planes.size(); ++p) {
      CHECK(back.planes[p].b == inst.planes[p].b);
      CHECK(back.planes[p].w == inst.planes[p].w);
    }
  }
}

TEST_CASE("sample CSV round-trips values exactly") {
  auto inst = generate_one_vs_all(3, 2, 0.5, 3);
  auto sample = draw_sample(inst, 200, 4);
  std::vector<int> labels(200);
  for (int i = 0; i < 200; ++i) labels[i] = inst.truth_label(sample.pts.row(i));
  std::string path = "test_sample_roundtrip.csv";
  save_sample_csv(sample, path, &labels);
  std::vector<int> labels_back;
  Points pts = load_points_csv(path, &labels_back);
  CHECK(pts.n == 200);
  CHECK(pts.d == 3);
  CHECK(pts.a == sample.pts.a);
  CHECK(labels_back == labels);
  std::remove(path.c_str());
}

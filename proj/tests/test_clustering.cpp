#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "doctest.h"
#include "outcode/clustering.hpp"
#include "outcode/rng.hpp"

using namespace outcode;

namespace {

Points make_points(const std::vector<std::vector<double>>& rows) {
  Points pts(int(rows.size()), rows.empty() ? 0 : int(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), pts.row(int(i)));
  return pts;
}

Points random_points(int n, int d, std::uint64_t seed, bool on_sphere = false) {
  Rng rng(seed);
  Points pts(n, d);
  for (int i = 0; i < n; ++i) {
    if (on_sphere) {
      rng.unit_vector(d, pts.row(i));
    } else {
      for (int a = 0; a < d; ++a) pts.row(i)[a] = rng.uniform(-1.0, 1.0);
    }
  }
  return pts;
}

// reference partition by breadth-first search on the explicit radius graph
std::vector<std::vector<int>> bfs_partition(const Points& pts, double r, Metric metric,
                                            EdgeRule rule) {
  int n = pts.n;
  auto connected = [&](int i, int j) {
    double dd = metric == Metric::euclidean ? dist(pts.row(i), pts.row(j), pts.d)
                                            : angle(pts.row(i), pts.row(j), pts.d);
    return rule == EdgeRule::inclusive ? dd <= r : dd < r;
  };
  std::vector<int> comp(n, -1);
  int nc = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[s] = nc;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v)
        if (comp[v] < 0 && connected(u, v)) {
          comp[v] = nc;
          q.push(v);
        }
    }
    ++nc;
  }
  std::vector<std::vector<int>> groups(nc);
  for (int i = 0; i < n; ++i) groups[comp[i]].push_back(i);
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return groups;
}

}  // namespace

TEST_CASE("radius components basics") {
  auto pts = make_points({{0.0, 0.0}, {0.5, 0.0}});
  auto cl = radius_components(pts, 0.6, Metric::euclidean);
  CHECK(cl.num_clusters() == 1);
  auto cl2 = radius_components(pts, 0.4, Metric::euclidean);
  CHECK(cl2.num_clusters() == 2);

  // radius at least the diameter always yields one cluster
  auto rnd = random_points(80, 3, 5);
  CHECK(radius_components(rnd, 10.0, Metric::euclidean).num_clusters() == 1);
  CHECK_THROWS_AS(radius_components(rnd, 0.0, Metric::euclidean), InvalidInput);
}

TEST_CASE("radius components match brute-force BFS on a two-blob instance") {
  Rng rng(3);
  Points pts(200, 2);
  for (int i = 0; i < 200; ++i) {
    double cx = i < 120 ? -0.5 : 0.5;
    pts.row(i)[0] = cx + rng.uniform(-0.08, 0.08);
    pts.row(i)[1] = rng.uniform(-0.08, 0.08);
  }
  auto cl = radius_components(pts, 0.1, Metric::euclidean);
  auto ref = bfs_partition(pts, 0.1, Metric::euclidean, EdgeRule::inclusive);
  CHECK(cl.members == ref);
  CHECK(cl.num_clusters() == 2);
  CHECK(cl.sizes[0] == 120);  // ordered by decreasing size
}

TEST_CASE("radius components as a partition are permutation invariant") {
  auto pts = random_points(120, 2, 9);
  auto base = radius_components(pts, 0.35, Metric::euclidean);

  Rng rng(10);
  std::vector<int> perm(pts.n);
  for (int i = 0; i < pts.n; ++i) perm[i] = i;
  for (int i = pts.n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
  Points shuffled(pts.n, pts.d);
  for (int i = 0; i < pts.n; ++i)
    std::copy(pts.row(perm[i]), pts.row(perm[i]) + pts.d, shuffled.row(i));

  auto moved = radius_components(shuffled, 0.35, Metric::euclidean);
  // map shuffled clusters back to original indices and compare as set of sets
  std::set<std::set<int>> a, b;
  for (const auto& g : base.members) a.insert(std::set<int>(g.begin(), g.end()));
  for (const auto& g : moved.members) {
    std::set<int> back;
    for (int i : g) back.insert(perm[i]);
    b.insert(std::move(back));
  }
  CHECK(a == b);
}

TEST_CASE("dendrogram on three collinear points") {
  auto pts = make_points({{0.0}, {1.0}, {3.0}});
  auto dendro = single_linkage_dendrogram(pts, Metric::euclidean);
  REQUIRE(dendro.merges.size() == 2);
  CHECK(dendro.merges[0].height == doctest::Approx(1.0));
  CHECK(dendro.merges[1].height == doctest::Approx(2.0));
  auto parts = cut(dendro, 1.5);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == std::vector<int>{0, 1});
  CHECK(parts[1] == std::vector<int>{2});
}

TEST_CASE("dendrogram cut equals radius components across random sets") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    int n = 30 + int(seed) * 33;
    auto pts = random_points(n, 2, 100 + seed);
    auto dendro = single_linkage_dendrogram(pts, Metric::euclidean);
    Rng rng(200 + seed);
    for (int k = 0; k < 20; ++k) {
      double r = rng.uniform(0.01, 1.2);
      auto from_cut = cut(dendro, r);
      auto from_graph = radius_components(pts, r, Metric::euclidean).members;
      CHECK(from_cut == from_graph);
    }
  }
  // angular metric variant
  auto pts = random_points(150, 3, 42, true);
  auto dendro = single_linkage_dendrogram(pts, Metric::angular);
  Rng rng(43);
  for (int k = 0; k < 10; ++k) {
    double r = rng.uniform(0.05, 1.5);
    auto from_cut = cut(dendro, r);
    auto from_graph = radius_components(pts, r, Metric::angular).members;
    CHECK(from_cut == from_graph);
  }
}

TEST_CASE("coarsest pure pruning") {
  // two tight blobs far apart
  auto pts = make_points({{0.0}, {0.1}, {0.2}, {5.0}, {5.1}, {5.2}});
  auto dendro = single_linkage_dendrogram(pts, Metric::euclidean);

  SUBCASE("all labels identical prunes to the root") {
    std::map<int, int> labeled{{0, 4}, {4, 4}};
    auto pr = coarsest_pure_pruning(dendro, labeled);
    REQUIRE(pr.clusters.size() == 1);
    CHECK(pr.clusters[0].size() == 6);
    CHECK(pr.labels[0] == 4);
  }

  SUBCASE("one label per blob prunes to the two blobs") {
    std::map<int, int> labeled{{1, 0}, {4, 1}};
    auto pr = coarsest_pure_pruning(dendro, labeled);
    REQUIRE(pr.clusters.size() == 2);
    CHECK(pr.clusters[0] == std::vector<int>{0, 1, 2});
    CHECK(pr.clusters[1] == std::vector<int>{3, 4, 5});
    CHECK(pr.labels[0] == 0);
    CHECK(pr.labels[1] == 1);

    // coarseness is maximal: the root would mix both labels
    std::map<int, int> counts;
    for (const auto& [leaf, label] : labeled) ++counts[label];
    CHECK(counts.size() == 2);
  }

  SUBCASE("agnostic threshold keeps a 9:1 majority cluster") {
    Points many(10, 1);
    for (int i = 0; i < 10; ++i) many.row(i)[0] = 0.01 * i;
    auto d2 = single_linkage_dendrogram(many, Metric::euclidean);
    std::map<int, int> labeled;
    for (int i = 0; i < 9; ++i) labeled[i] = 0;  // class A
    labeled[9] = 1;                              // one class-B point
    auto pr = coarsest_pure_pruning(d2, labeled, 0.75);
    REQUIRE(pr.clusters.size() == 1);
    CHECK(pr.labels[0] == 0);
    // the strict threshold splits it
    auto strict = coarsest_pure_pruning(d2, labeled, 1.0);
    CHECK(strict.clusters.size() > 1);
  }

  SUBCASE("no labeled points is an error") {
    std::map<int, int> empty;
    CHECK_THROWS_AS(coarsest_pure_pruning(dendro, empty), InvalidInput);
  }

  SUBCASE("pruning is an antichain covering all leaves") {
    std::map<int, int> labeled{{0, 0}, {2, 0}, {3, 1}, {5, 2}};
    auto pr = coarsest_pure_pruning(dendro, labeled);
    std::vector<int> seen;
    for (const auto& c : pr.clusters) seen.insert(seen.end(), c.begin(), c.end());
    std::sort(seen.begin(), seen.end());
    CHECK(seen == std::vector<int>{0, 1, 2, 3, 4, 5});
  }
}

TEST_CASE("mark_active semantics") {
  // tau n <= 1: every point counts itself
  auto pts = random_points(12, 3, 7, true);
  auto mask = mark_active(pts, 0.05, 0.05);
  CHECK(mask.num_active() == 12);

  // an isolated point with no neighbors within r_a is inactive at tau n = 2
  Points iso(5, 2);
  double angs[5] = {0.0, 0.02, 0.04, 0.06, 2.0};
  for (int i = 0; i < 5; ++i) {
    iso.row(i)[0] = std::cos(angs[i]);
    iso.row(i)[1] = std::sin(angs[i]);
  }
  auto m2 = mark_active(iso, 0.1, 0.4);  // tau n = 2
  CHECK(m2.active[0] == 1);
  CHECK(m2.active[4] == 0);

  // exact count semantics against a brute-force loop
  auto sph = random_points(150, 3, 8, true);
  double r_a = 0.3, tau = 0.05;
  auto m3 = mark_active(sph, r_a, tau);
  for (int i = 0; i < sph.n; ++i) {
    int count = 0;
    for (int j = 0; j < sph.n; ++j)
      if (angle(sph.row(i), sph.row(j), 3) <= r_a) ++count;
    CHECK(m3.neighbor_count[i] == count);
    CHECK((m3.active[i] != 0) == (double(count) >= tau * sph.n - 1e-9));
  }

  CHECK_THROWS_AS(mark_active(random_points(5, 2, 1, false), 0.1, 0.5), InvalidInput);
  CHECK_THROWS_AS(mark_active(sph, 0.1, 0.0), InvalidInput);
}

TEST_CASE("nearest cluster classification") {
  auto pts = make_points({{0.0, 0.0}, {0.1, 0.0}, {2.0, 0.0}, {2.1, 0.0}});
  auto cl = radius_components(pts, 0.2, Metric::euclidean);
  REQUIRE(cl.num_clusters() == 2);
  LabeledClustering lc{cl, pts, {7, 9}, {{}, {}}};

  double q1[2] = {0.05, 0.0};  // touching cluster 0
  CHECK(nearest_cluster_classify(lc, q1, 2) == 7);
  double q2[2] = {1.9, 0.0};
  CHECK(nearest_cluster_classify(lc, q2, 2) == 9);
  double mid[2] = {1.05, 0.0};  // equidistant to members 0.1 and 2.0: smaller id wins
  CHECK(nearest_cluster_classify(lc, mid, 2) == 7);

  // unlabeled clusters are ignored
  LabeledClustering partial{cl, pts, {-1, 9}, {{}, {}}};
  CHECK(nearest_cluster_classify(partial, q1, 2) == 9);
  LabeledClustering none{cl, pts, {-1, -1}, {{}, {}}};
  CHECK_THROWS_AS(nearest_cluster_classify(none, q1, 2), InvalidInput);

  // brute-force agreement on random data
  auto rnd = random_points(120, 2, 21);
  auto rcl = radius_components(rnd, 0.25, Metric::euclidean);
  std::vector<int> labels(rcl.num_clusters());
  for (int c = 0; c < rcl.num_clusters(); ++c) labels[c] = c % 3;
  LabeledClustering rlc{rcl, rnd, labels, {}};
  rlc.label_queries.assign(rcl.num_clusters(), {});
  Rng rng(22);
  for (int t = 0; t < 200; ++t) {
    double q[2] = {rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
    double best = 1e300;
    int best_c = -1;
    for (int c = 0; c < rcl.num_clusters(); ++c)
      for (int idx : rcl.members[c]) {
        double dd = dist(q, rnd.row(idx), 2);
        if (dd < best) {
          best = dd;
          best_c = c;
        }
      }
    CHECK(nearest_cluster_classify(rlc, q, 2) == labels[best_c]);
  }
}

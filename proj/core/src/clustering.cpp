#include "outcode/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "outcode/errors.hpp"

namespace outcode {

namespace {

struct UnionFind {
  std::vector<int> parent, size;

  explicit UnionFind(int n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return true;
  }
};

// canonical partition: clusters ordered by (size desc, smallest member asc),
// members ascending
template <class RootOf>
std::vector<std::vector<int>> canonical_partition(const std::vector<int>& ids, RootOf root_of) {
  std::map<int, std::vector<int>> by_root;
  for (int id : ids) by_root[root_of(id)].push_back(id);
  std::vector<std::vector<int>> groups;
  groups.reserve(by_root.size());
  for (auto& [root, g] : by_root) {
    std::sort(g.begin(), g.end());
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return groups;
}

double pair_distance(const Points& pts, int i, int j, Metric metric) {
  if (metric == Metric::euclidean) return dist(pts.row(i), pts.row(j), pts.d);
  return angle(pts.row(i), pts.row(j), pts.d);
}

}  // namespace

Clustering radius_components_subset(const Points& pts, const std::vector<int>& subset, double r_c,
                                    Metric metric, EdgeRule rule) {
  if (r_c <= 0.0) throw InvalidInput("radius_components: radius must be positive");
  if (subset.empty()) throw InvalidInput("radius_components: need at least one point");
  int m = int(subset.size());
  UnionFind uf(m);
  // angular comparisons go through the cosine to avoid acos in the O(n^2) loop
  if (metric == Metric::angular) {
    double cos_r = std::cos(std::min(r_c, M_PI));
    for (int i = 0; i < m; ++i) {
      const double* pi = pts.row(subset[i]);
      for (int j = i + 1; j < m; ++j) {
        double c = clamp_unit(dot(pi, pts.row(subset[j]), pts.d));
        bool edge = rule == EdgeRule::inclusive ? c >= cos_r : c > cos_r;
        if (edge) uf.unite(i, j);
      }
    }
  } else {
    for (int i = 0; i < m; ++i) {
      const double* pi = pts.row(subset[i]);
      for (int j = i + 1; j < m; ++j) {
        double dd = dist(pi, pts.row(subset[j]), pts.d);
        bool edge = rule == EdgeRule::inclusive ? dd <= r_c : dd < r_c;
        if (edge) uf.unite(i, j);
      }
    }
  }
  std::vector<int> pos(m);
  std::iota(pos.begin(), pos.end(), 0);
  auto groups = canonical_partition(pos, [&](int p) { return uf.find(p); });

  Clustering out;
  out.metric = metric;
  out.radius = r_c;
  out.point_index = subset;
  out.cluster_of.assign(m, -1);
  out.members.resize(groups.size());
  out.sizes.resize(groups.size());
  for (std::size_t c = 0; c < groups.size(); ++c) {
    out.sizes[c] = int(groups[c].size());
    out.members[c].reserve(groups[c].size());
    for (int p : groups[c]) {
      out.cluster_of[p] = int(c);
      out.members[c].push_back(subset[p]);
    }
    std::sort(out.members[c].begin(), out.members[c].end());
  }
  return out;
}

Clustering radius_components(const Points& pts, double r_c, Metric metric, EdgeRule rule) {
  std::vector<int> all(pts.n);
  std::iota(all.begin(), all.end(), 0);
  return radius_components_subset(pts, all, r_c, metric, rule);
}

Dendrogram single_linkage_dendrogram(const Points& pts, Metric metric) {
  int n = pts.n;
  if (n < 1) throw InvalidInput("single_linkage_dendrogram: need at least one point");
  Dendrogram out;
  out.n = n;
  out.metric = metric;
  if (n == 1) return out;

  // Prim's algorithm on the dense distance graph
  std::vector<double> best(n, 1e300);
  std::vector<int> best_from(n, -1);
  std::vector<char> used(n, 0);
  used[0] = 1;
  for (int j = 1; j < n; ++j) {
    best[j] = pair_distance(pts, 0, j, metric);
    best_from[j] = 0;
  }
  struct Edge {
    double w;
    int u, v;
  };
  std::vector<Edge> mst;
  mst.reserve(n - 1);
  for (int step = 1; step < n; ++step) {
    int pick = -1;
    double pick_w = 1e301;
    for (int j = 0; j < n; ++j)
      if (!used[j] && best[j] < pick_w) {
        pick_w = best[j];
        pick = j;
      }
    used[pick] = 1;
    mst.push_back({best[pick], std::min(best_from[pick], pick), std::max(best_from[pick], pick)});
    for (int j = 0; j < n; ++j)
      if (!used[j]) {
        double w = pair_distance(pts, pick, j, metric);
        if (w < best[j]) {
          best[j] = w;
          best_from[j] = pick;
        }
      }
  }
  std::sort(mst.begin(), mst.end(), [](const Edge& a, const Edge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  UnionFind uf(n);
  std::vector<int> node_of_root(n);
  std::iota(node_of_root.begin(), node_of_root.end(), 0);
  for (const auto& e : mst) {
    int ru = uf.find(e.u), rv = uf.find(e.v);
    int left = node_of_root[ru], right = node_of_root[rv];
    uf.unite(ru, rv);
    int nr = uf.find(ru);
    out.merges.push_back({e.w, std::min(left, right), std::max(left, right)});
    node_of_root[nr] = n + int(out.merges.size()) - 1;
  }
  return out;
}

std::vector<std::vector<int>> cut(const Dendrogram& dendro, double r) {
  int n = dendro.n;
  UnionFind uf(n);
  // leaf sets are merged in height order; heights tie-broken like the builder
  std::vector<int> leaf_rep(2 * n - 1, -1);
  for (int i = 0; i < n; ++i) leaf_rep[i] = i;
  for (std::size_t k = 0; k < dendro.merges.size(); ++k) {
    const auto& m = dendro.merges[k];
    int lu = leaf_rep[m.left], lv = leaf_rep[m.right];
    leaf_rep[n + int(k)] = lu;
    if (m.height <= r) uf.unite(lu, lv);
  }
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return canonical_partition(ids, [&](int i) { return uf.find(i); });
}

namespace {

struct NodeStats {
  std::map<int, int> label_counts;
  int labeled_total = 0;
};

bool node_is_pure(const NodeStats& st, double threshold, int& majority) {
  majority = -1;
  if (st.labeled_total == 0) return true;
  int best = -1, best_count = -1;
  for (const auto& [label, count] : st.label_counts)
    if (count > best_count) {
      best_count = count;
      best = label;
    }
  majority = best;
  return double(best_count) >= threshold * double(st.labeled_total) - 1e-12;
}

}  // namespace

Pruning coarsest_pure_pruning(const Dendrogram& dendro, const std::map<int, int>& labeled,
                              double purity_threshold) {
  if (labeled.empty()) throw InvalidInput("coarsest_pure_pruning: need at least one labeled point");
  int n = dendro.n;
  int total_nodes = n + int(dendro.merges.size());
  std::vector<NodeStats> stats(total_nodes);
  for (const auto& [leaf, label] : labeled) {
    if (leaf < 0 || leaf >= n) throw InvalidInput("coarsest_pure_pruning: leaf index out of range");
    stats[leaf].label_counts[label] = 1;
    stats[leaf].labeled_total = 1;
  }
  for (std::size_t k = 0; k < dendro.merges.size(); ++k) {
    const auto& m = dendro.merges[k];
    auto& dst = stats[n + int(k)];
    for (int child : {m.left, m.right}) {
      dst.labeled_total += stats[child].labeled_total;
      for (const auto& [label, count] : stats[child].label_counts)
        dst.label_counts[label] += count;
    }
  }

  auto collect_leaves = [&](int node) {
    std::vector<int> leaves;
    std::vector<int> st{node};
    while (!st.empty()) {
      int v = st.back();
      st.pop_back();
      if (v < n) {
        leaves.push_back(v);
      } else {
        const auto& m = dendro.merges[v - n];
        st.push_back(m.left);
        st.push_back(m.right);
      }
    }
    std::sort(leaves.begin(), leaves.end());
    return leaves;
  };

  int root = total_nodes - 1;  // single tree when n >= 2; the leaf itself when n == 1
  Pruning out;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    int majority;
    if (node_is_pure(stats[node], purity_threshold, majority)) {
      out.clusters.push_back(collect_leaves(node));
      out.labels.push_back(majority);
    } else {
      const auto& m = dendro.merges[node - n];
      stack.push_back(m.right);
      stack.push_back(m.left);
    }
  }
  return out;
}

int ActivityMask::num_active() const {
  int c = 0;
  for (char a : active) c += a != 0;
  return c;
}

ActivityMask mark_active(const Points& pts, double r_a, double tau) {
  if (tau <= 0.0 || tau > 1.0) throw InvalidInput("mark_active: tau must lie in (0, 1]");
  if (r_a <= 0.0) throw InvalidInput("mark_active: r_a must be positive");
  int n = pts.n;
  for (int i = 0; i < n; ++i)
    if (std::fabs(norm(pts.row(i), pts.d) - 1.0) > 1e-9)
      throw InvalidInput("mark_active: points must lie on the unit sphere");
  ActivityMask out;
  out.r_a = r_a;
  out.tau = tau;
  out.neighbor_count.assign(n, 1);  // each point counts itself
  double cos_r = std::cos(std::min(r_a, M_PI));
  for (int i = 0; i < n; ++i) {
    const double* pi = pts.row(i);
    for (int j = i + 1; j < n; ++j) {
      if (clamp_unit(dot(pi, pts.row(j), pts.d)) >= cos_r) {
        ++out.neighbor_count[i];
        ++out.neighbor_count[j];
      }
    }
  }
  out.active.assign(n, 0);
  double need = tau * double(n);
  for (int i = 0; i < n; ++i) out.active[i] = double(out.neighbor_count[i]) >= need - 1e-9;
  return out;
}

int nearest_cluster_classify(const LabeledClustering& lc, const double* x, int d) {
  const Points& pts = lc.points;
  if (pts.d != d) throw InvalidInput("nearest_cluster_classify: dimension mismatch");
  std::vector<double> proj;
  const double* q = x;
  if (lc.clustering.metric == Metric::angular) {
    proj = normalized(x, d);
    q = proj.data();
  }
  int best_cluster = -1;
  double best = 1e300;
  for (int c = 0; c < lc.clustering.num_clusters(); ++c) {
    if (lc.labels[c] < 0) continue;
    for (int idx : lc.clustering.members[c]) {
      double dd = lc.clustering.metric == Metric::angular ? angle(q, pts.row(idx), d)
                                                          : dist(q, pts.row(idx), d);
      if (dd < best) {
        best = dd;
        best_cluster = c;
      }
    }
  }
  if (best_cluster < 0) throw InvalidInput("nearest_cluster_classify: no labeled cluster");
  return lc.labels[best_cluster];
}

}  // namespace outcode

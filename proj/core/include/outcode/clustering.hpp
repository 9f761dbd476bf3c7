#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "outcode/points.hpp"

namespace outcode {

enum class Metric { euclidean, angular };

enum class EdgeRule { inclusive, strict };  // edge at distance <= r vs < r

// Partition of a point subset into connected components of the radius graph.
// Cluster ids are ordered by decreasing size, ties by smallest member index.
struct Clustering {
  Metric metric = Metric::euclidean;
  double radius = 0.0;
  std::vector<int> point_index;              // original indices of clustered points
  std::vector<int> cluster_of;               // parallel to point_index
  std::vector<std::vector<int>> members;     // original indices per cluster, ascending
  std::vector<int> sizes;

  int num_clusters() const { return int(members.size()); }
};

Clustering radius_components(const Points& pts, double r_c, Metric metric,
                             EdgeRule rule = EdgeRule::inclusive);

// Variant over a subset of point indices.
Clustering radius_components_subset(const Points& pts, const std::vector<int>& subset, double r_c,
                                    Metric metric, EdgeRule rule = EdgeRule::inclusive);

// Single-linkage merge tree. Leaves are 0..n-1; merge k creates node n+k.
struct Dendrogram {
  struct Merge {
    double height;
    int left, right;
  };
  int n = 0;
  Metric metric = Metric::euclidean;
  std::vector<Merge> merges;  // heights nondecreasing
};

Dendrogram single_linkage_dendrogram(const Points& pts, Metric metric = Metric::euclidean);

// Clusters obtained by cutting the tree at height r (edges <= r merged),
// with the same canonical ordering as radius_components.
std::vector<std::vector<int>> cut(const Dendrogram& dendro, double r);

// Shallowest antichain covering all leaves whose nodes are label-pure.
// label < 0 marks a cluster that contains no labeled point.
struct Pruning {
  std::vector<std::vector<int>> clusters;  // leaf indices per cluster, ascending
  std::vector<int> labels;                 // majority label per cluster, -1 if unlabeled
};

// labeled maps leaf index -> class id; purity_threshold = 1 demands a single
// class among labeled members, lower values demand a majority of at least
// that fraction.
Pruning coarsest_pure_pruning(const Dendrogram& dendro, const std::map<int, int>& labeled,
                              double purity_threshold = 1.0);

// Per-point activity flags: active iff at least tau*n points (including the
// point itself) lie within angular distance r_a.
struct ActivityMask {
  double r_a = 0.0;
  double tau = 0.0;
  std::vector<char> active;
  std::vector<int> neighbor_count;

  int num_active() const;
};

ActivityMask mark_active(const Points& pts_on_sphere, double r_a, double tau);

// A clustering with labels attached to some clusters, plus the sample indices
// of the queries that produced each label.
struct LabeledClustering {
  Clustering clustering;
  Points points;                        // coordinates of the clustered points (by original index)
  std::vector<int> labels;              // per cluster, -1 if unlabeled
  std::vector<std::vector<long>> label_queries;  // ledger rows per cluster
};

// Label of the labeled cluster with the smallest point-to-member distance;
// ties go to the smaller cluster id. For angular clusterings the query point
// is projected to the sphere first.
int nearest_cluster_classify(const LabeledClustering& lc, const double* x, int d);

}  // namespace outcode

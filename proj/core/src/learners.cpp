#include "outcode/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "outcode/rng.hpp"

namespace outcode {

namespace {

long stop_threshold(double epsilon, int n) {
  return long(std::ceil(epsilon * double(n) / 4.0));
}

// Query policy for one group. Realizable mode queries the smallest member
// index once; majority mode queries t seeded random members (distinct when
// the group is large enough) and returns the majority label.
int label_group(const std::vector<int>& members, const Points& pts, LabeledOracle& oracle,
                bool majority_mode, int t_per_group, Rng& rng, QueryLedger& ledger,
                const std::string& purpose, std::vector<long>& rows) {
  auto query_one = [&](int idx) {
    int label = oracle.query(pts.row(idx), idx);
    rows.push_back(ledger.total());
    ledger.add(idx, label, purpose);
    return label;
  };
  if (!majority_mode) return query_one(members.front());

  std::vector<int> picks;
  int m = int(members.size());
  if (m >= t_per_group) {
    for (int pos : rng.sample_without_replacement(m, t_per_group)) picks.push_back(members[pos]);
  } else {
    for (int t = 0; t < t_per_group; ++t) picks.push_back(members[rng.uniform_index(m)]);
  }
  std::map<int, int> votes;
  for (int idx : picks) ++votes[query_one(idx)];
  int best = -1, best_count = -1;
  for (const auto& [label, count] : votes)
    if (count > best_count) {
      best_count = count;
      best = label;
    }
  return best;
}

Points copy_points(const Points& pts) { return pts; }

}  // namespace

std::string PlaneSet::cell_key(const double* x, int d) const {
  std::string key(entries.size(), '+');
  for (std::size_t j = 0; j < entries.size(); ++j) {
    const auto& e = entries[j];
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += e.direction[a] * (x[a] - e.center[a]);
    key[j] = s < 0.0 ? '-' : '+';
  }
  return key;
}

int Classifier::predict(const double* x) const {
  if (kind == Kind::plane_detection) {
    std::string key = planes.cell_key(x, d);
    auto it = cell_labels.find(key);
    if (it != cell_labels.end()) return it->second;
    // unknown cell: seed-deterministic pseudo-random label from the key
    std::uint64_t h = unknown_cell_seed;
    for (char c : key) h = mix_seed(h, std::uint64_t(c) + 0x101);
    std::uint64_t s = h;
    return int(splitmix64(s) % std::uint64_t(std::max(1, n_classes)));
  }
  return nearest_cluster_classify(lc, x, d);
}

// ---------------------------------------------------------------------------

LearnResult single_linkage_learn(const Sample& sample, LabeledOracle& oracle, double r_c,
                                 double epsilon, bool majority_mode, int t_per_group,
                                 std::uint64_t query_seed) {
  if (r_c <= 0.0) throw InvalidInput("single_linkage_learn: r_c must be positive");
  if (epsilon <= 0.0 || epsilon >= 1.0)
    throw InvalidInput("single_linkage_learn: epsilon must lie in (0, 1)");
  int n = sample.pts.n;
  QueryLedger ledger;
  Clustering clusters = radius_components(sample.pts, r_c, Metric::euclidean);

  std::vector<int> labels(clusters.num_clusters(), -1);
  std::vector<std::vector<long>> rows(clusters.num_clusters());
  long threshold = stop_threshold(epsilon, n);
  long unlabeled = n;
  Rng rng(mix_seed(query_seed, 0x51));
  try {
    for (int c = 0; c < clusters.num_clusters(); ++c) {
      if (unlabeled <= threshold) break;
      labels[c] = label_group(clusters.members[c], sample.pts, oracle, majority_mode, t_per_group,
                              rng, ledger, "cluster", rows[c]);
      unlabeled -= clusters.sizes[c];
    }
  } catch (const BudgetExhausted& e) {
    throw PartialResult(std::string("single_linkage_learn: ") + e.what(), std::move(ledger));
  }

  LearnResult out;
  out.classifier.kind = Classifier::Kind::single_linkage;
  out.classifier.d = sample.pts.d;
  out.classifier.n_classes = oracle.instance().num_classes();
  out.classifier.lc = LabeledClustering{std::move(clusters), copy_points(sample.pts),
                                        std::move(labels), std::move(rows)};
  out.ledger = std::move(ledger);
  return out;
}

LearnResult hierarchical_learn(const Sample& sample, LabeledOracle& oracle, int t,
                               std::uint64_t seed, double purity_threshold) {
  int n = sample.pts.n;
  if (t < 1 || t > n) throw InvalidInput("hierarchical_learn: need 1 <= t <= n");
  QueryLedger ledger;
  Dendrogram dendro = single_linkage_dendrogram(sample.pts, Metric::euclidean);

  Rng rng(mix_seed(seed, 0x52));
  std::map<int, int> labeled;
  try {
    for (int idx : rng.sample_without_replacement(n, t)) {
      int label = oracle.query(sample.pts.row(idx), idx);
      ledger.add(idx, label, "pruning");
      labeled[idx] = label;
    }
  } catch (const BudgetExhausted& e) {
    throw PartialResult(std::string("hierarchical_learn: ") + e.what(), std::move(ledger));
  }

  Pruning pruning = coarsest_pure_pruning(dendro, labeled, purity_threshold);

  Clustering clusters;
  clusters.metric = Metric::euclidean;
  clusters.radius = 0.0;
  clusters.point_index.resize(n);
  std::iota(clusters.point_index.begin(), clusters.point_index.end(), 0);
  clusters.cluster_of.assign(n, -1);
  clusters.members = pruning.clusters;
  clusters.sizes.resize(pruning.clusters.size());
  for (std::size_t c = 0; c < pruning.clusters.size(); ++c) {
    clusters.sizes[c] = int(pruning.clusters[c].size());
    for (int leaf : pruning.clusters[c]) clusters.cluster_of[leaf] = int(c);
  }

  std::vector<std::vector<long>> rows(pruning.clusters.size());
  for (std::size_t c = 0; c < pruning.clusters.size(); ++c)
    for (const auto& e : ledger.entries)
      if (clusters.cluster_of[int(e.point_index)] == int(c)) rows[c].push_back(e.step);

  LearnResult out;
  out.classifier.kind = Classifier::Kind::hierarchical;
  out.classifier.d = sample.pts.d;
  out.classifier.n_classes = oracle.instance().num_classes();
  out.classifier.lc = LabeledClustering{std::move(clusters), copy_points(sample.pts),
                                        pruning.labels, std::move(rows)};
  out.ledger = std::move(ledger);
  return out;
}

LearnResult robust_sphere_learn(const Sample& sample, LabeledOracle& oracle, double r_c,
                                double epsilon, double c_lb, double c_ub, bool majority_mode,
                                int t_per_group, std::uint64_t query_seed) {
  if (oracle.instance().kind != InstanceKind::one_vs_all)
    throw InvalidInput("robust_sphere_learn: instance is not one-vs-all");
  if (r_c <= 0.0) throw InvalidInput("robust_sphere_learn: r_c must be positive");
  int n = sample.pts.n;
  int d = sample.pts.d;

  double r_a = r_c / 2.0;
  double tau = c_lb / (2.0 * c_ub) * cap_measure(d, std::min(r_a, M_PI)) * epsilon;
  tau = std::min(tau, 1.0);
  if (tau <= 0.0) throw InvalidInput("robust_sphere_learn: activity threshold collapsed to zero");

  Points proj(n, d);
  for (int i = 0; i < n; ++i) {
    auto v = normalized(sample.pts.row(i), d);
    std::copy(v.begin(), v.end(), proj.row(i));
  }

  ActivityMask mask = mark_active(proj, r_a, tau);
  std::vector<int> active_idx;
  for (int i = 0; i < n; ++i)
    if (mask.active[i]) active_idx.push_back(i);
  if (active_idx.empty())
    throw DegenerateInstance("robust_sphere_learn: every point is inactive at this threshold");

  Clustering clusters =
      radius_components_subset(proj, active_idx, r_c, Metric::angular, EdgeRule::strict);

  QueryLedger ledger;
  std::vector<int> labels(clusters.num_clusters(), -1);
  std::vector<std::vector<long>> rows(clusters.num_clusters());
  long threshold = stop_threshold(epsilon, n);
  long unlabeled_active = long(active_idx.size());
  Rng rng(mix_seed(query_seed, 0x53));
  try {
    for (int c = 0; c < clusters.num_clusters(); ++c) {
      if (unlabeled_active <= threshold) break;
      labels[c] = label_group(clusters.members[c], sample.pts, oracle, majority_mode, t_per_group,
                              rng, ledger, "sphere-cluster", rows[c]);
      unlabeled_active -= clusters.sizes[c];
    }
  } catch (const BudgetExhausted& e) {
    throw PartialResult(std::string("robust_sphere_learn: ") + e.what(), std::move(ledger));
  }

  LearnResult out;
  out.classifier.kind = Classifier::Kind::robust_sphere;
  out.classifier.d = d;
  out.classifier.n_classes = oracle.instance().num_classes();
  out.classifier.lc =
      LabeledClustering{std::move(clusters), std::move(proj), std::move(labels), std::move(rows)};
  out.ledger = std::move(ledger);
  return out;
}

double choose_connection_radius(const ProblemInstance& inst, double epsilon) {
  if (inst.kind != InstanceKind::one_vs_all)
    throw InvalidInput("choose_connection_radius: instance is not one-vs-all");
  if (epsilon <= 0.0) throw InvalidInput("choose_connection_radius: epsilon must be positive");
  double c_lb = inst.certified.c_lb, c_ub = inst.certified.c_ub;
  double eps_tilde = c_lb / c_ub * epsilon;
  double best = 1e300;
  for (int i = 0; i < int(inst.planes.size()); ++i) {
    double rhs1, rhs2;
    try {
      rhs1 = cap_radius(inst, i, 0.75 * eps_tilde, LevelSide::lower) -
             cap_radius(inst, i, epsilon, LevelSide::upper);
      rhs2 = cap_radius(inst, i, 0.0, LevelSide::upper) -
             cap_radius(inst, i, 0.25 * eps_tilde, LevelSide::upper);
    } catch (const EmptyLevelSet&) {
      throw InfeasibleRadius(
          "choose_connection_radius: level set empty at this epsilon; use a smaller epsilon");
    }
    if (rhs1 <= 0.0 || rhs2 <= 0.0)
      throw InfeasibleRadius(
          "choose_connection_radius: constraints infeasible; use a smaller epsilon");
    best = std::min(best, std::min(0.6 * rhs1, 0.5 * rhs2));
  }
  if (!(best > 0.0) || best == 1e300)
    throw InfeasibleRadius("choose_connection_radius: no class admits a positive radius");
  return 2.0 * best;
}

// ---------------------------------------------------------------------------
// Plane detection
// ---------------------------------------------------------------------------

double half_ball_mass_bound(int d, double r, double c_lb) {
  return 0.5 * c_lb * std::pow(r, d) * unit_ball_volume(d);
}

double plane_detection_alpha(int d, int m, double eps, double diameter, double R, double c_lb) {
  double c = 2.0 * diameter + std::sqrt(std::pow(2.0, d) * M_PI / double(d)) * R / 4.0;
  double t = eps * diameter /
             (double(m) * c * std::pow(diameter, d) * unit_ball_volume(d) * c_lb);
  return M_PI / (2.0 * double(d + 1)) * t * t;
}

namespace {

long count_halfball(const Points& pts, const std::vector<int>& in_ball, const double* center,
                    const double* dir) {
  long cnt = 0;
  int d = pts.d;
  for (int idx : in_ball) {
    const double* y = pts.row(idx);
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += dir[a] * (y[a] - center[a]);
    if (s > 0.0) ++cnt;
  }
  return cnt;
}

std::pair<std::vector<double>, long> sweep_min_direction_2d(const Points& pts,
                                                            const std::vector<int>& in_ball,
                                                            const double* center) {
  // A point offset at angle theta lies in the open half-ball of direction psi
  // iff psi is in the open arc (theta - pi/2, theta + pi/2). Minimizing the
  // half-ball count is minimizing arc coverage over psi.
  struct Event {
    double ang;
    int delta;
  };
  std::vector<Event> events;
  events.reserve(2 * in_ball.size());
  auto wrap = [](double a) {
    while (a < 0.0) a += 2.0 * M_PI;
    while (a >= 2.0 * M_PI) a -= 2.0 * M_PI;
    return a;
  };
  std::vector<std::pair<double, double>> arcs;  // (start, end), open, possibly wrapping
  for (int idx : in_ball) {
    double dx = pts.row(idx)[0] - center[0];
    double dy = pts.row(idx)[1] - center[1];
    if (dx * dx + dy * dy < 1e-300) continue;  // a point exactly at the center is in no half-ball
    double theta = std::atan2(dy, dx);
    double s = wrap(theta - M_PI / 2.0), e = wrap(theta + M_PI / 2.0);
    arcs.emplace_back(s, e);
    events.push_back({s, +1});
    events.push_back({e, -1});
  }
  if (arcs.empty()) {
    std::vector<double> dir{1.0, 0.0};
    return {dir, 0};
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.ang != b.ang) return a.ang < b.ang;
    return a.delta < b.delta;
  });
  int m = int(events.size());

  // coverage on the wrap arc (events[m-1].ang, events[0].ang + 2pi)
  double probe = wrap(0.5 * (events[m - 1].ang + events[0].ang + 2.0 * M_PI));
  auto covers = [](const std::pair<double, double>& arc, double psi) {
    auto [s, e] = arc;
    return s < e ? (psi > s && psi < e) : (psi > s || psi < e);
  };
  int base = 0;
  for (const auto& arc : arcs) base += covers(arc, probe);

  int best_cov = base;
  double best_lo = events[m - 1].ang, best_hi = events[0].ang + 2.0 * M_PI;
  int cov = base;
  for (int j = 0; j < m; ++j) {
    cov += events[j].delta;
    double lo = events[j].ang;
    double hi = j + 1 < m ? events[j + 1].ang : events[0].ang + 2.0 * M_PI;
    if (hi - lo < 1e-15) continue;
    if (cov < best_cov) {
      best_cov = cov;
      best_lo = lo;
      best_hi = hi;
    }
  }
  double best_mid = wrap(0.5 * (best_lo + best_hi));
  std::vector<double> dir{std::cos(best_mid), std::sin(best_mid)};
  long exact = count_halfball(pts, in_ball, center, dir.data());
  return {dir, exact};
}

}  // namespace

std::pair<std::vector<double>, long> min_halfball_direction(const Points& pts,
                                                            const std::vector<int>& in_ball,
                                                            const double* center, double r,
                                                            int k_directions, std::uint64_t seed) {
  int d = pts.d;
  (void)r;
  if (in_ball.empty()) {
    std::vector<double> dir(d, 0.0);
    dir[0] = 1.0;
    return {dir, 0};
  }
  if (d == 2) return sweep_min_direction_2d(pts, in_ball, center);

  Rng rng(mix_seed(seed, 0x54));
  std::vector<double> best_dir(d, 0.0);
  best_dir[0] = 1.0;
  long best = count_halfball(pts, in_ball, center, best_dir.data());
  std::vector<double> cand(d);
  for (int k = 0; k < k_directions; ++k) {
    rng.unit_vector(d, cand.data());
    long c = count_halfball(pts, in_ball, center, cand.data());
    if (c < best) {
      best = c;
      best_dir = cand;
    }
  }
  // coordinate-wise perturbation descent
  double step = 0.5;
  for (int it = 0; it < 100 && best > 0; ++it) {
    bool improved = false;
    for (int a = 0; a < d && !improved; ++a) {
      for (double sgn : {+1.0, -1.0}) {
        cand = best_dir;
        cand[a] += sgn * step;
        double nz = norm(cand.data(), d);
        if (nz < 1e-12) continue;
        for (auto& x : cand) x /= nz;
        long c = count_halfball(pts, in_ball, center, cand.data());
        if (c < best) {
          best = c;
          best_dir = cand;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.7;
  }
  return {best_dir, best};
}

PlanesLearnResult plane_detection_learn(const Sample& sample, LabeledOracle& oracle, double r,
                                        double tau, int L_cells, const std::vector<double>& lo,
                                        const std::vector<double>& hi,
                                        const PlaneDetectOptions& opt) {
  if (r <= 0.0) throw InvalidInput("plane_detection_learn: r must be positive");
  if (tau <= 0.0 || tau >= 1.0) throw InvalidInput("plane_detection_learn: tau must lie in (0, 1)");
  int n = sample.pts.n;
  int d = sample.pts.d;
  if (int(lo.size()) != d || int(hi.size()) != d)
    throw InvalidInput("plane_detection_learn: domain box dimension mismatch");

  struct Candidate {
    int center_idx;
    std::vector<double> dir;
    long count;
  };
  std::vector<Candidate> candidates;
  std::vector<int> in_ball;
  for (int i = 0; i < n; ++i) {
    const double* x = sample.pts.row(i);
    double margin = 1e300;
    for (int a = 0; a < d; ++a) margin = std::min(margin, std::min(x[a] - lo[a], hi[a] - x[a]));
    if (margin < r) continue;  // B(x, r) must stay inside the domain
    in_ball.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      if (dist(x, sample.pts.row(j), d) <= r) in_ball.push_back(j);
    }
    auto [dir, cnt] =
        min_halfball_direction(sample.pts, in_ball, x, r, opt.k_directions, mix_seed(opt.seed, i));
    if (double(cnt) / double(n) < tau) candidates.push_back({i, std::move(dir), cnt});
  }
  if (candidates.empty())
    throw NoPlanesDetected("plane_detection_learn: no qualifying half-ball found");

  // dedup near-identical planes; keep the lower-count representative
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.count != b.count) return a.count < b.count;
    return a.center_idx < b.center_idx;
  });
  const double angle_tol = 2.0 * M_PI / 180.0;
  PlaneSet planes;
  for (const auto& c : candidates) {
    const double* xc = sample.pts.row(c.center_idx);
    bool dup = false;
    for (const auto& kept : planes.entries) {
      double a1 = angle(c.dir.data(), kept.direction.data(), d);
      double face_angle = std::min(a1, M_PI - a1);
      if (face_angle > angle_tol) continue;
      double off1 = 0.0, off2 = 0.0;
      for (int a = 0; a < d; ++a) {
        off1 += kept.direction[a] * (xc[a] - kept.center[a]);
        off2 += c.dir[a] * (kept.center[a] - xc[a]);
      }
      if (std::fabs(off1) <= r / 10.0 && std::fabs(off2) <= r / 10.0) {
        dup = true;
        break;
      }
    }
    if (!dup)
      planes.entries.push_back({std::vector<double>(xc, xc + d), c.dir, r, c.count});
  }

  // cells induced by the sign vectors
  std::map<std::string, std::vector<int>> cells;
  for (int i = 0; i < n; ++i) cells[planes.cell_key(sample.pts.row(i), d)].push_back(i);

  std::vector<std::pair<std::string, const std::vector<int>*>> order;
  order.reserve(cells.size());
  for (const auto& [key, members] : cells) order.emplace_back(key, &members);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second->size() != b.second->size()) return a.second->size() > b.second->size();
    return a.first < b.first;
  });

  QueryLedger ledger;
  int to_query = L_cells;
  if (int(order.size()) < L_cells) {
    to_query = int(order.size());
    ledger.notes.push_back("fewer nonempty cells (" + std::to_string(order.size()) +
                           ") than requested queries (" + std::to_string(L_cells) +
                           "); querying all cells");
  }
  std::map<std::string, int> cell_labels;
  Rng rng(mix_seed(opt.seed, 0x55));
  try {
    for (int q = 0; q < to_query; ++q) {
      std::vector<long> rows;
      int label = label_group(*order[q].second, sample.pts, oracle, opt.majority_mode,
                              opt.t_per_group, rng, ledger, "cell", rows);
      cell_labels[order[q].first] = label;
    }
  } catch (const BudgetExhausted& e) {
    throw PartialResult(std::string("plane_detection_learn: ") + e.what(), std::move(ledger));
  }

  PlanesLearnResult out;
  out.classifier.kind = Classifier::Kind::plane_detection;
  out.classifier.d = d;
  out.classifier.n_classes = oracle.instance().num_classes();
  out.classifier.planes = planes;
  out.classifier.cell_labels = std::move(cell_labels);
  out.classifier.unknown_cell_seed = mix_seed(opt.seed, 0xdead);
  out.ledger = std::move(ledger);
  out.planes = std::move(planes);
  return out;
}

LearnResult agnostic_wrap(BaseAlgo algo, const Sample& sample, LabeledOracle& oracle,
                          const BaseParams& p, int t_per_group, std::uint64_t seed) {
  if (t_per_group < 1) throw InvalidInput("agnostic_wrap: t_per_group must be >= 1");
  switch (algo) {
    case BaseAlgo::single_linkage:
      return single_linkage_learn(sample, oracle, p.rc, p.eps, true, t_per_group, seed);
    case BaseAlgo::robust_sphere:
      return robust_sphere_learn(sample, oracle, p.rc, p.eps, p.c_lb, p.c_ub, true, t_per_group,
                                 seed);
    case BaseAlgo::plane_detection: {
      PlaneDetectOptions opt;
      opt.k_directions = p.k_directions;
      opt.seed = seed;
      opt.majority_mode = true;
      opt.t_per_group = t_per_group;
      auto res = plane_detection_learn(sample, oracle, p.r, p.tau, p.L_cells, p.lo, p.hi, opt);
      return {std::move(res.classifier), std::move(res.ledger)};
    }
  }
  throw InvalidInput("agnostic_wrap: unknown base learner");
}

}  // namespace outcode

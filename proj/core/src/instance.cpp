#include "outcode/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "outcode/rng.hpp"

namespace outcode {

namespace {
constexpr double kMembershipTol = 1e-9;
}

std::string to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::ecoc: return "ecoc";
    case InstanceKind::one_vs_all: return "one_vs_all";
    case InstanceKind::boundary_features: return "boundary_features";
  }
  return "ecoc";
}

InstanceKind instance_kind_from_string(const std::string& s) {
  if (s == "ecoc") return InstanceKind::ecoc;
  if (s == "one_vs_all") return InstanceKind::one_vs_all;
  if (s == "boundary_features") return InstanceKind::boundary_features;
  throw InvalidInput("unknown instance kind: " + s);
}

int ProblemInstance::num_classes() const { return code.num_classes(); }

std::string ProblemInstance::id() const {
  std::ostringstream os;
  os << to_string(kind) << ":d=" << d << ":L=" << num_classes() << ":seed=" << seed;
  return os.str();
}

double ProblemInstance::cube_half_side() const { return region_radius / std::sqrt(double(d)); }

namespace {

// membership of x in region k, by shape
bool region_contains(const ProblemInstance& inst, int k, const double* x) {
  const double* c = inst.regions[k].center.data();
  int d = inst.d;
  double r = inst.region_radius;
  switch (inst.shape) {
    case RegionShape::ball:
      return dist(x, c, d) <= r + kMembershipTol;
    case RegionShape::cube: {
      double u = inst.cube_half_side();
      for (int a = 0; a < d; ++a)
        if (std::fabs(x[a] - c[a]) > u + kMembershipTol) return false;
      return true;
    }
    case RegionShape::patch: {
      double in_plane = 0.0;
      std::vector<char> on_patch(d, 0);
      for (int a : inst.patch_axes) on_patch[a] = 1;
      for (int a = 0; a < d; ++a) {
        double t = x[a] - c[a];
        if (on_patch[a]) {
          in_plane += t * t;
        } else if (std::fabs(t) > kMembershipTol) {
          return false;
        }
      }
      return std::sqrt(in_plane) <= r + kMembershipTol;
    }
  }
  return false;
}

// cell coordinate of x along each axis of a boundary layout; -1 if outside
std::vector<int> boundary_cell_of(const BoundaryLayout& lay, int d, const double* x) {
  std::vector<int> cell(d);
  for (int a = 0; a < d; ++a) {
    double lo = lay.domain_lo[a], hi = lay.domain_hi[a];
    if (x[a] < lo - kMembershipTol || x[a] > hi + kMembershipTol) return {};
    double w = (hi - lo) / lay.cells_per_axis;
    int c = int(std::floor((x[a] - lo) / w));
    if (c < 0) c = 0;
    if (c >= lay.cells_per_axis) c = lay.cells_per_axis - 1;
    // on-plane points belong to the positive side, matching sign(0) = +1
    double boundary = lo + (c + 1) * w;
    if (x[a] >= boundary) ++c;
    if (c >= lay.cells_per_axis) c = lay.cells_per_axis - 1;
    cell[a] = c;
  }
  return cell;
}

int boundary_class_of(const BoundaryLayout& lay, const std::vector<int>& cell) {
  if (cell.empty()) return -1;
  auto it = std::lower_bound(lay.occupied.begin(), lay.occupied.end(), cell);
  if (it != lay.occupied.end() && *it == cell) return int(it - lay.occupied.begin());
  return -1;
}

}  // namespace

int ProblemInstance::truth_label_or_none(const double* x) const {
  switch (kind) {
    case InstanceKind::ecoc: {
      for (int k = 0; k < int(regions.size()); ++k)
        if (region_contains(*this, k, x)) return k;
      return -1;
    }
    case InstanceKind::one_vs_all: {
      if (sqnorm(x, d) > (1.0 + kMembershipTol) * (1.0 + kMembershipTol)) return -1;
      for (int i = 0; i < int(planes.size()); ++i)
        if (planes[i].eval(x) > 0.0) return i;
      return -1;
    }
    case InstanceKind::boundary_features: {
      return boundary_class_of(layout, boundary_cell_of(layout, d, x));
    }
  }
  return -1;
}

int ProblemInstance::truth_label(const double* x) const {
  int label = truth_label_or_none(x);
  if (label < 0) throw NoClassError("point lies outside the instance support");
  return label;
}

void ProblemInstance::domain_box(std::vector<double>& lo, std::vector<double>& hi) const {
  lo.assign(d, 0.0);
  hi.assign(d, 0.0);
  switch (kind) {
    case InstanceKind::ecoc:
      for (int a = 0; a < d; ++a) {
        lo[a] = -0.5;
        hi[a] = 0.5;
      }
      break;
    case InstanceKind::one_vs_all:
      for (int a = 0; a < d; ++a) {
        lo[a] = -1.0;
        hi[a] = 1.0;
      }
      break;
    case InstanceKind::boundary_features:
      lo = layout.domain_lo;
      hi = layout.domain_hi;
      break;
  }
}

std::pair<double, double> projected_density_bounds(const ProblemInstance& inst, const double* v) {
  if (inst.kind != InstanceKind::one_vs_all)
    throw InvalidInput("projected_density_bounds: instance is not one-vs-all");
  if (std::fabs(norm(v, inst.d) - 1.0) > 1e-9)
    throw InvalidInput("projected_density_bounds: v must be a unit vector");
  int hit = -1;
  for (int i = 0; i < int(inst.planes.size()); ++i) {
    if (inst.planes[i].eval(v) > 0.0) {
      if (hit >= 0)
        throw InstanceInvariantViolation("projected_density_bounds: v lies in two caps");
      hit = i;
    }
  }
  if (hit < 0) return {0.0, 0.0};
  const auto& h = inst.planes[hit];
  double u = dot(h.w.data(), v, inst.d);
  double ql = projected_density_value(inst.d, h.b, u, inst.certified.c_lb);
  double qu = inst.certified.c_ub / inst.certified.c_lb * ql;
  return {ql, qu};
}

double cap_radius(const ProblemInstance& inst, int class_i, double lambda, LevelSide side) {
  if (inst.kind != InstanceKind::one_vs_all)
    throw InvalidInput("cap_radius: instance is not one-vs-all");
  if (class_i < 0 || class_i >= int(inst.planes.size()))
    throw InvalidInput("cap_radius: class index out of range");
  double c = side == LevelSide::upper ? inst.certified.c_ub : inst.certified.c_lb;
  return cap_level_radius(inst.d, inst.planes[class_i].b, c, lambda);
}

// -------------------------------------------------------------------------
// Sampling
// -------------------------------------------------------------------------

namespace {

void sample_region_point(const ProblemInstance& inst, int k, Rng& rng, double* out) {
  const auto& c = inst.regions[k].center;
  int d = inst.d;
  double r = inst.region_radius;
  switch (inst.shape) {
    case RegionShape::ball: {
      std::vector<double> p(d);
      rng.ball_point(d, p.data());
      for (int a = 0; a < d; ++a) out[a] = c[a] + r * p[a];
      break;
    }
    case RegionShape::cube: {
      double u = inst.cube_half_side();
      for (int a = 0; a < d; ++a) out[a] = c[a] + rng.uniform(-u, u);
      break;
    }
    case RegionShape::patch: {
      int di = int(inst.patch_axes.size());
      std::vector<double> p(di);
      rng.ball_point(di, p.data());
      for (int a = 0; a < d; ++a) out[a] = c[a];
      for (int j = 0; j < di; ++j) out[inst.patch_axes[j]] += r * p[j];
      break;
    }
  }
}

}  // namespace

Sample draw_sample(const ProblemInstance& inst, int n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("draw_sample: n must be >= 1");
  Sample s;
  s.seed = seed;
  s.instance_id = inst.id();
  s.pts = Points(n, inst.d);
  Rng rng(mix_seed(seed, 0x5a17));
  if (inst.kind == InstanceKind::one_vs_all) {
    // rejection from the unit ball
    long trials = 0, accepted = 0;
    std::vector<double> p(inst.d);
    while (accepted < n) {
      rng.ball_point(inst.d, p.data());
      ++trials;
      if (inst.truth_label_or_none(p.data()) >= 0) {
        std::copy(p.begin(), p.end(), s.pts.row(int(accepted)));
        ++accepted;
      }
      if (trials >= 100000 && double(accepted) / double(trials) < 1e-4)
        throw SamplerEfficiencyError("draw_sample: rejection acceptance rate below 1e-4");
    }
  } else if (inst.kind == InstanceKind::boundary_features) {
    const auto& lay = inst.layout;
    double w = (lay.domain_hi[0] - lay.domain_lo[0]) / lay.cells_per_axis;
    int n_occ = int(lay.occupied.size());
    for (int i = 0; i < n; ++i) {
      int cell = int(rng.uniform_index(n_occ));
      double* row = s.pts.row(i);
      for (int a = 0; a < inst.d; ++a)
        row[a] = lay.domain_lo[a] + (lay.occupied[cell][a] + rng.uniform()) * w;
    }
  } else {
    int nr = int(inst.regions.size());
    for (int i = 0; i < n; ++i) {
      int k = int(rng.uniform_index(nr));
      sample_region_point(inst, k, rng, s.pts.row(i));
    }
  }
  return s;
}

HeldOutSet draw_held_out(const ProblemInstance& inst, int n, std::uint64_t seed) {
  HeldOutSet h;
  Sample s = draw_sample(inst, n, mix_seed(seed, 0xeeee));
  h.pts = std::move(s.pts);
  h.labels.resize(n);
  for (int i = 0; i < n; ++i) h.labels[i] = inst.truth_label(h.pts.row(i));
  return h;
}

// -------------------------------------------------------------------------
// Oracle
// -------------------------------------------------------------------------

LabeledOracle::LabeledOracle(const ProblemInstance& inst, double eta, std::uint64_t noise_seed,
                             std::optional<long> budget)
    : inst_(&inst), eta_(eta), noise_seed_(noise_seed), budget_(budget) {
  if (eta < 0.0 || eta >= 1.0) throw InvalidInput("oracle: eta must be in [0, 1)");
}

int LabeledOracle::query(const double* x, long index) {
  if (budget_ && query_count_ >= *budget_)
    throw BudgetExhausted("oracle: label budget exhausted");
  int label = inst_->truth_label(x);
  if (eta_ > 0.0) {
    double u = indexed_uniform(noise_seed_, std::uint64_t(index), 0);
    if (u < eta_) {
      int L = inst_->num_classes();
      if (L > 1) {
        double v = indexed_uniform(noise_seed_, std::uint64_t(index), 1);
        int shift = 1 + int(v * (L - 1));
        if (shift > L - 1) shift = L - 1;
        label = (label + shift) % L;
      }
    }
  }
  ++query_count_;
  return label;
}

// -------------------------------------------------------------------------
// Certification report
// -------------------------------------------------------------------------

bool CertReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string CertReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks)
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " -- " << c.detail << "\n";
  return os.str();
}

namespace {

bool planes_axis_aligned(const std::vector<Hyperplane>& planes, std::vector<int>& axis_of) {
  axis_of.clear();
  for (const auto& h : planes) {
    int axis = -1;
    for (int a = 0; a < h.dim(); ++a) {
      if (std::fabs(h.w[a]) > 1e-12) {
        if (axis >= 0) return false;
        axis = a;
      }
    }
    if (axis < 0 || std::fabs(std::fabs(h.w[axis]) - 1.0) > 1e-9) return false;
    axis_of.push_back(axis);
  }
  return true;
}

}  // namespace

CertReport verify_assumptions(const ProblemInstance& inst, long mc_budget, std::uint64_t seed) {
  CertReport rep;
  Rng rng(mix_seed(seed, 0xcafe));
  char buf[256];

  // (a) minimum cross-class distance
  {
    CheckResult c{"a:min-cross-class-distance", true, ""};
    if (inst.certified.margin_g > 0.0 && inst.num_classes() >= 2) {
      long pairs = std::max<long>(1000, mc_budget);
      int pool_n = int(std::min<long>(4000, pairs));
      Sample pool = draw_sample(inst, pool_n, mix_seed(seed, 1));
      std::vector<int> labels(pool_n);
      for (int i = 0; i < pool_n; ++i) labels[i] = inst.truth_label(pool.pts.row(i));
      double best = 1e300;
      long done = 0, guard = 0;
      while (done < pairs && guard < 50 * pairs) {
        ++guard;
        int i = int(rng.uniform_index(pool_n)), j = int(rng.uniform_index(pool_n));
        if (labels[i] == labels[j]) continue;
        best = std::min(best, dist(pool.pts.row(i), pool.pts.row(j), inst.d));
        ++done;
      }
      c.pass = done > 0 && best >= inst.certified.margin_g * 0.95;
      std::snprintf(buf, sizeof buf, "min sampled distance %.6g vs certified g %.6g", best,
                    inst.certified.margin_g);
      c.detail = buf;
    } else {
      c.detail = "no positive margin certified for this kind; skipped";
    }
    rep.checks.push_back(c);
  }

  // (b) codeword Hamming distances
  {
    CheckResult c{"b:codeword-hamming", true, ""};
    int L = inst.num_classes();
    int min_h = 1 << 30;
    for (int i = 0; i < L; ++i)
      for (int j = i + 1; j < L; ++j)
        min_h = std::min(min_h, hamming_distance(inst.code.rows[i], inst.code.rows[j]));
    if (L < 2) {
      c.detail = "single class; vacuous";
    } else if (inst.kind == InstanceKind::ecoc) {
      int need = int(2 * inst.certified.beta) + inst.d + 1;
      c.pass = min_h >= need;
      std::snprintf(buf, sizeof buf, "min pairwise %d, required >= %d", min_h, need);
      c.detail = buf;
    } else if (inst.kind == InstanceKind::one_vs_all) {
      c.pass = min_h == 2;
      std::snprintf(buf, sizeof buf, "min pairwise %d, expected exactly 2", min_h);
      c.detail = buf;
    } else {
      c.pass = min_h >= 1;
      std::snprintf(buf, sizeof buf, "min pairwise %d, required >= 1", min_h);
      c.detail = buf;
    }
    rep.checks.push_back(c);
  }

  // (c) general position
  {
    CheckResult c{"c:general-position", true, ""};
    std::vector<int> axis_of;
    if (planes_axis_aligned(inst.planes, axis_of)) {
      bool ok = true;
      for (std::size_t i = 0; i < inst.planes.size() && ok; ++i)
        for (std::size_t j = i + 1; j < inst.planes.size() && ok; ++j)
          if (axis_of[i] == axis_of[j] &&
              std::fabs(inst.planes[i].b * inst.planes[i].w[axis_of[i]] -
                        inst.planes[j].b * inst.planes[j].w[axis_of[j]]) < 1e-12)
            ok = false;
      c.pass = ok;
      c.detail = ok ? "axis-aligned planes with distinct per-axis offsets"
                    : "two coincident parallel planes found";
    } else {
      c.detail = "planes not axis-aligned; positional check not applicable";
    }
    rep.checks.push_back(c);
  }

  // (d) cap disjointness
  {
    CheckResult c{"d:cap-disjointness", true, ""};
    if (inst.kind == InstanceKind::one_vs_all) {
      bool ok = true;
      double worst = 1e300;
      for (std::size_t i = 0; i < inst.planes.size(); ++i)
        for (std::size_t j = i + 1; j < inst.planes.size(); ++j) {
          double ang = angle(inst.planes[i].w.data(), inst.planes[j].w.data(), inst.d);
          double need = std::acos(clamp_unit(inst.planes[i].b)) +
                        std::acos(clamp_unit(inst.planes[j].b));
          worst = std::min(worst, ang - need);
          if (ang < need - 1e-12) ok = false;
        }
      c.pass = ok;
      std::snprintf(buf, sizeof buf, "min angular slack %.6g rad", worst == 1e300 ? 0.0 : worst);
      c.detail = buf;
    } else {
      c.detail = "not a one-vs-all instance; skipped";
    }
    rep.checks.push_back(c);
  }

  // (e) boundary-features witness balls
  {
    CheckResult c{"e:witness-balls", true, ""};
    if (inst.kind == InstanceKind::boundary_features) {
      long per = std::max<long>(1000, mc_budget / std::max<std::size_t>(1, inst.layout.witnesses.size()));
      per = std::min<long>(per, 10000);
      bool ok = true;
      std::string why;
      for (const auto& [plane_k, center] : inst.layout.witnesses) {
        std::set<std::vector<int>> seen;
        std::vector<double> p(inst.d);
        for (long t = 0; t < per; ++t) {
          rng.ball_point(inst.d, p.data());
          for (int a = 0; a < inst.d; ++a) p[a] = center[a] + inst.certified.scale_R * p[a];
          seen.insert(predict_codeword(inst.planes, p.data(), inst.d).bits);
          if (seen.size() > 2) break;
        }
        if (seen.size() > 2) {
          ok = false;
          why = "witness ball for plane " + std::to_string(plane_k) + " saw >2 codewords";
          break;
        }
        if (seen.size() == 2) {
          auto it = seen.begin();
          const auto& c1 = *it;
          const auto& c2 = *std::next(it);
          int diff = 0, diff_at = -1;
          for (std::size_t k = 0; k < c1.size(); ++k)
            if (c1[k] != c2[k]) {
              ++diff;
              diff_at = int(k);
            }
          if (diff != 1 || diff_at != plane_k) {
            ok = false;
            why = "witness codewords for plane " + std::to_string(plane_k) +
                  " do not differ in exactly that bit";
            break;
          }
        }
      }
      c.pass = ok;
      c.detail = ok ? "each witness ball carries at most the two admissible codewords" : why;
    } else {
      c.detail = "not a boundary-features instance; skipped";
    }
    rep.checks.push_back(c);
  }

  // (f) density bounds via probe-ball histogram
  {
    CheckResult c{"f:density-probes", true, ""};
    long n = std::max<long>(20000, mc_budget);
    Sample pool = draw_sample(inst, int(std::min<long>(n, 200000)), mix_seed(seed, 2));
    long N = pool.pts.n;
    struct Probe {
      std::vector<double> center;
      double radius;
      double expected;
    };
    std::vector<Probe> probes;
    if (inst.kind == InstanceKind::ecoc) {
      int take = std::min<int>(3, int(inst.regions.size()));
      for (int k = 0; k < take; ++k) {
        Probe p;
        p.center = inst.regions[k].center;
        if (inst.shape == RegionShape::ball) {
          p.radius = inst.region_radius / 2.0;
          p.expected = std::pow(0.5, inst.d) / double(inst.regions.size());
        } else if (inst.shape == RegionShape::cube) {
          p.radius = inst.cube_half_side() / 2.0;
          p.expected = unit_ball_volume(inst.d) * std::pow(p.radius, inst.d) /
                       inst.certified.support_volume;
        } else {
          p.radius = inst.region_radius / 2.0;
          p.expected = std::pow(0.5, int(inst.patch_axes.size())) / double(inst.regions.size());
        }
        probes.push_back(std::move(p));
      }
    } else if (inst.kind == InstanceKind::one_vs_all) {
      int take = std::min<int>(3, int(inst.planes.size()));
      for (int k = 0; k < take; ++k) {
        Probe p;
        double b = inst.planes[k].b;
        p.radius = (1.0 - b) / 4.0;
        p.center.assign(inst.d, 0.0);
        for (int a = 0; a < inst.d; ++a) p.center[a] = (1.0 + b) / 2.0 * inst.planes[k].w[a];
        p.expected = unit_ball_volume(inst.d) * std::pow(p.radius, inst.d) *
                     inst.certified.c_lb;
        probes.push_back(std::move(p));
      }
    } else {
      const auto& lay = inst.layout;
      double w = (lay.domain_hi[0] - lay.domain_lo[0]) / lay.cells_per_axis;
      int take = std::min<int>(3, int(lay.occupied.size()));
      for (int k = 0; k < take; ++k) {
        Probe p;
        p.radius = w / 4.0;
        p.center.resize(inst.d);
        for (int a = 0; a < inst.d; ++a)
          p.center[a] = lay.domain_lo[a] + (lay.occupied[k][a] + 0.5) * w;
        p.expected = unit_ball_volume(inst.d) * std::pow(p.radius, inst.d) *
                     inst.certified.c_lb;
        probes.push_back(std::move(p));
      }
    }
    bool ok = true;
    double worst_dev = 0.0;
    for (const auto& p : probes) {
      long cnt = 0;
      for (long i = 0; i < N; ++i)
        if (dist(pool.pts.row(int(i)), p.center.data(), inst.d) <= p.radius) ++cnt;
      double emp = double(cnt) / double(N);
      double se = std::sqrt(std::max(emp * (1.0 - emp), 1e-12) / double(N));
      double dev = std::fabs(emp - p.expected) / se;
      worst_dev = std::max(worst_dev, dev);
      if (dev > 5.0) ok = false;
    }
    c.pass = ok;
    std::snprintf(buf, sizeof buf, "%zu probes, worst deviation %.2f standard errors",
                  probes.size(), worst_dev);
    c.detail = buf;
    rep.checks.push_back(c);
  }

  return rep;
}

}  // namespace outcode

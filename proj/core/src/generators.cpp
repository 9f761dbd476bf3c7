#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "outcode/instance.hpp"
#include "outcode/rng.hpp"

namespace outcode {

namespace {

constexpr double kClearanceMargin = 1e-9;  // keep planes strictly off region surfaces
constexpr double kMinOffsetSep = 1e-7;     // distinct per-axis offsets (general position)

struct PlaneBuild {
  std::vector<Hyperplane> planes;         // w = +e_axis
  std::vector<std::vector<int>> codes;    // per region sign vector
  std::map<int, std::vector<double>> offsets_by_axis;
};

// Free sub-intervals of (lo, hi) after removing blocked intervals.
std::vector<std::pair<double, double>> subtract_intervals(
    double lo, double hi, std::vector<std::pair<double, double>> blocked) {
  std::sort(blocked.begin(), blocked.end());
  std::vector<std::pair<double, double>> free;
  double cur = lo;
  for (const auto& [a, b] : blocked) {
    if (b <= cur) continue;
    if (a >= hi) break;
    if (a > cur) free.emplace_back(cur, std::min(a, hi));
    cur = std::max(cur, b);
    if (cur >= hi) break;
  }
  if (cur < hi) free.emplace_back(cur, hi);
  return free;
}

// Try to place one admissible separating plane for regions (i, j). Returns
// false if no axis has room. centers is N x d, extent[a] the per-axis half
// width shared by all regions.
bool place_separating_plane(const std::vector<std::vector<double>>& centers,
                            const std::vector<double>& extent, int d, int ri, int rj,
                            PlaneBuild& pb) {
  int n = int(centers.size());
  // prefer the axis with the widest raw gap
  std::vector<int> axes(d);
  std::iota(axes.begin(), axes.end(), 0);
  std::sort(axes.begin(), axes.end(), [&](int a, int b) {
    double ga = std::fabs(centers[ri][a] - centers[rj][a]);
    double gb = std::fabs(centers[ri][b] - centers[rj][b]);
    if (ga != gb) return ga > gb;
    return a < b;
  });
  for (int a : axes) {
    double ca = centers[ri][a], cb = centers[rj][a];
    double lo = std::min(ca, cb) + extent[a] + kClearanceMargin;
    double hi = std::max(ca, cb) - extent[a] - kClearanceMargin;
    if (hi - lo <= 2.0 * kMinOffsetSep) continue;
    std::vector<std::pair<double, double>> blocked;
    for (int k = 0; k < n; ++k) {
      if (k == ri || k == rj) continue;
      blocked.emplace_back(centers[k][a] - extent[a] - kClearanceMargin,
                           centers[k][a] + extent[a] + kClearanceMargin);
    }
    auto it = pb.offsets_by_axis.find(a);
    if (it != pb.offsets_by_axis.end())
      for (double o : it->second) blocked.emplace_back(o - kMinOffsetSep, o + kMinOffsetSep);
    auto free = subtract_intervals(lo, hi, std::move(blocked));
    // midpoint of the widest free sub-interval; leftmost on ties
    double best_w = 0.0, pos = 0.0;
    bool found = false;
    for (const auto& [flo, fhi] : free) {
      double w = fhi - flo;
      if (w > best_w + 1e-15) {
        best_w = w;
        pos = 0.5 * (flo + fhi);
        found = true;
      }
    }
    if (!found || best_w <= 2.0 * kMinOffsetSep) continue;
    Hyperplane h;
    h.w.assign(d, 0.0);
    h.w[a] = 1.0;
    h.b = pos;
    pb.planes.push_back(std::move(h));
    pb.offsets_by_axis[a].push_back(pos);
    for (int k = 0; k < n; ++k) pb.codes[k].push_back(centers[k][a] > pos ? +1 : -1);
    return true;
  }
  return false;
}

// Build axis-aligned separating planes so that every pair of region codewords
// has Hamming distance >= min_hamming. Returns false when some pair cannot be
// separated with the required clearance.
bool build_planes(const std::vector<std::vector<double>>& centers,
                  const std::vector<double>& extent, int d, int min_hamming, PlaneBuild& pb) {
  int n = int(centers.size());
  pb.planes.clear();
  pb.codes.assign(n, {});
  pb.offsets_by_axis.clear();
  if (n == 1) {
    // a single redundant plane below the region keeps m >= 1
    Hyperplane h;
    h.w.assign(d, 0.0);
    h.w[0] = 1.0;
    h.b = centers[0][0] - extent[0] - 0.1;
    pb.planes.push_back(std::move(h));
    pb.codes[0].push_back(+1);
    return true;
  }
  auto ham = [&](int i, int j) {
    int s = 0;
    for (std::size_t k = 0; k < pb.codes[i].size(); ++k)
      if (pb.codes[i][k] != pb.codes[j][k]) ++s;
    return s;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int guard = 0;
      while (ham(i, j) < min_hamming) {
        if (++guard > 4 * min_hamming + 8) return false;
        if (!place_separating_plane(centers, extent, d, i, j, pb)) return false;
      }
    }
  }
  return true;
}

double region_pair_distance(const ProblemInstance& inst, int i, int j) {
  int d = inst.d;
  const auto& ci = inst.regions[i].center;
  const auto& cj = inst.regions[j].center;
  switch (inst.shape) {
    case RegionShape::ball:
      return std::max(0.0, dist(ci.data(), cj.data(), d) - 2.0 * inst.region_radius);
    case RegionShape::cube: {
      double u = inst.cube_half_side();
      double s = 0.0;
      for (int a = 0; a < d; ++a) {
        double gap = std::fabs(ci[a] - cj[a]) - 2.0 * u;
        if (gap > 0.0) s += gap * gap;
      }
      return std::sqrt(s);
    }
    case RegionShape::patch: {
      std::vector<char> on_patch(d, 0);
      for (int a : inst.patch_axes) on_patch[a] = 1;
      double in2 = 0.0, off2 = 0.0;
      for (int a = 0; a < d; ++a) {
        double t = ci[a] - cj[a];
        if (on_patch[a])
          in2 += t * t;
        else
          off2 += t * t;
      }
      double in_gap = std::max(0.0, std::sqrt(in2) - 2.0 * inst.region_radius);
      return std::sqrt(in_gap * in_gap + off2);
    }
  }
  return 0.0;
}

double region_pair_max_distance(const ProblemInstance& inst, int i, int j) {
  int d = inst.d;
  const auto& ci = inst.regions[i].center;
  const auto& cj = inst.regions[j].center;
  switch (inst.shape) {
    case RegionShape::ball:
      return dist(ci.data(), cj.data(), d) + 2.0 * inst.region_radius;
    case RegionShape::cube: {
      double u = inst.cube_half_side();
      double s = 0.0;
      for (int a = 0; a < d; ++a) {
        double t = std::fabs(ci[a] - cj[a]) + 2.0 * u;
        s += t * t;
      }
      return std::sqrt(s);
    }
    case RegionShape::patch: {
      std::vector<char> on_patch(d, 0);
      for (int a : inst.patch_axes) on_patch[a] = 1;
      double in2 = 0.0, off2 = 0.0;
      for (int a = 0; a < d; ++a) {
        double t = ci[a] - cj[a];
        if (on_patch[a])
          in2 += t * t;
        else
          off2 += t * t;
      }
      double in_max = std::sqrt(in2) + 2.0 * inst.region_radius;
      return std::sqrt(in_max * in_max + off2);
    }
  }
  return 0.0;
}

void finish_ecoc_certificate(ProblemInstance& inst) {
  int n = int(inst.regions.size());
  double min_gap = 0.0, diam = 0.0;
  if (n >= 2) {
    min_gap = 1e300;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        min_gap = std::min(min_gap, region_pair_distance(inst, i, j));
        diam = std::max(diam, region_pair_max_distance(inst, i, j));
      }
  } else {
    diam = 2.0 * inst.region_radius;
  }
  double vol_region = 0.0;
  double sigma0 = inst.region_radius;
  double thickness = 1.0;
  int d = inst.d;
  switch (inst.shape) {
    case RegionShape::ball:
      vol_region = unit_ball_volume(d) * std::pow(inst.region_radius, d);
      break;
    case RegionShape::cube: {
      double u = inst.cube_half_side();
      vol_region = std::pow(2.0 * u, d);
      sigma0 = u;
      thickness = std::sqrt(double(d));
      break;
    }
    case RegionShape::patch: {
      int di = int(inst.patch_axes.size());
      vol_region = unit_ball_volume(di) * std::pow(inst.region_radius, di);
      break;
    }
  }
  auto& c = inst.certified;
  c.margin_g = n >= 2 ? min_gap : 0.0;
  c.beta = 0.0;
  c.support_volume = n * vol_region;
  c.c_lb = c.c_ub = 1.0 / c.support_volume;
  c.diameter = std::max(diam, 2.0 * inst.region_radius);
  c.thickness_C = thickness;
  c.level_lambda0 = c.c_lb;
  c.radius_sigma0 = sigma0;
  c.component_count = n;
}

}  // namespace

ProblemInstance generate_ecoc(int d, int n_components, double g, std::uint64_t seed,
                              RegionShape shape) {
  if (d < 1) throw InvalidInput("generate_ecoc: d must be >= 1");
  if (n_components < 1) throw InvalidInput("generate_ecoc: need at least one component");
  if (g <= 0.0) throw InvalidInput("generate_ecoc: margin g must be positive");
  if (shape == RegionShape::patch)
    throw InvalidInput("generate_ecoc: use generate_ecoc_manifold for patch regions");
  int N = n_components;

  // initial region radius and center layout; shrink until the separating
  // planes have clearance
  double r_max;
  if (N == 1) {
    r_max = std::min(g / 2.0, 0.4);
  } else if (d == 1) {
    r_max = std::min(g / 2.0, (1.0 - (N - 1) * g) / (2.0 * N));
  } else if (N == 2) {
    r_max = std::min(g / 2.0, (1.0 - g) / 4.0);
  } else {
    double s = 2.0 * std::sin(M_PI / N);
    r_max = std::min(g / 2.0, (s / 2.0 - g) / (2.0 + s));
  }
  if (r_max <= 1e-6)
    throw GenerationError("generate_ecoc: " + std::to_string(N) +
                          " regions with gap " + std::to_string(g) +
                          " do not fit in the unit-diameter domain");

  double r = r_max;
  PlaneBuild pb;
  std::vector<std::vector<double>> centers;
  for (int iter = 0;; ++iter) {
    if (iter >= 30 || r <= 1e-6)
      throw GenerationError("generate_ecoc: could not place separating planes with clearance");
    centers.assign(N, std::vector<double>(d, 0.0));
    if (d == 1 || N == 1) {
      double span = N * 2.0 * r + (N - 1) * g;
      for (int k = 0; k < N; ++k) centers[k][0] = -0.5 * span + r + k * (2.0 * r + g);
    } else {
      double rc = N == 2 ? (2.0 * r + g) / 2.0 : (2.0 * r + g) / (2.0 * std::sin(M_PI / N));
      for (int k = 0; k < N; ++k) {
        double phi = 2.0 * M_PI * k / N;
        centers[k][0] = rc * std::cos(phi);
        centers[k][1] = rc * std::sin(phi);
      }
    }
    std::vector<double> extent(d, shape == RegionShape::cube ? r / std::sqrt(double(d)) : r);
    if (build_planes(centers, extent, d, d + 1, pb)) break;
    r *= 0.8;
  }

  ProblemInstance inst;
  inst.kind = InstanceKind::ecoc;
  inst.d = d;
  inst.seed = seed;
  inst.shape = shape;
  inst.region_radius = r;
  inst.regions.resize(N);
  for (int k = 0; k < N; ++k) inst.regions[k].center = centers[k];
  inst.planes = std::move(pb.planes);
  inst.code.rows.resize(N);
  for (int k = 0; k < N; ++k) inst.code.rows[k] = Codeword(pb.codes[k]);
  inst.code.validate();
  finish_ecoc_certificate(inst);
  return inst;
}

ProblemInstance generate_ecoc_manifold(int d_ambient, int d_intrinsic, int n_components, double g,
                                       std::uint64_t seed) {
  if (d_intrinsic < 1 || d_intrinsic > d_ambient)
    throw InvalidInput("generate_ecoc_manifold: need 1 <= d_intrinsic <= d_ambient");
  if (d_intrinsic == d_ambient) return generate_ecoc(d_ambient, n_components, g, seed);
  if (n_components < 1) throw InvalidInput("generate_ecoc_manifold: need >= 1 component");
  if (g <= 0.0) throw InvalidInput("generate_ecoc_manifold: margin g must be positive");
  int N = n_components;
  int d = d_ambient;

  // centers spaced g apart along axis 0; patches span axes 1..d_intrinsic
  double x_max = (N - 1) * g / 2.0;
  if (x_max >= 0.5 - 1e-9)
    throw GenerationError("generate_ecoc_manifold: components do not fit at this gap");
  double r = std::min(g / 2.0, std::sqrt(std::max(0.0, 0.25 - x_max * x_max)));
  if (r <= 1e-6) throw GenerationError("generate_ecoc_manifold: patch radius collapsed");

  std::vector<std::vector<double>> centers(N, std::vector<double>(d, 0.0));
  for (int k = 0; k < N; ++k) centers[k][0] = -x_max + k * g;
  std::vector<int> patch_axes(d_intrinsic);
  std::iota(patch_axes.begin(), patch_axes.end(), 1);
  std::vector<double> extent(d, 0.0);
  for (int a : patch_axes) extent[a] = r;

  PlaneBuild pb;
  if (!build_planes(centers, extent, d, d + 1, pb))
    throw GenerationError("generate_ecoc_manifold: could not place separating planes");

  ProblemInstance inst;
  inst.kind = InstanceKind::ecoc;
  inst.d = d;
  inst.seed = seed;
  inst.shape = RegionShape::patch;
  inst.region_radius = r;
  inst.patch_axes = patch_axes;
  inst.regions.resize(N);
  for (int k = 0; k < N; ++k) inst.regions[k].center = centers[k];
  inst.planes = std::move(pb.planes);
  inst.code.rows.resize(N);
  for (int k = 0; k < N; ++k) inst.code.rows[k] = Codeword(pb.codes[k]);
  inst.code.validate();
  finish_ecoc_certificate(inst);
  inst.certified.doubling_dimension = double(d_intrinsic);
  return inst;
}

namespace {

// L unit directions with the largest min pairwise angle among a few canonical
// families: antipodal pair, regular simplex, +/- axis set.
std::vector<std::vector<double>> canonical_directions(int d, int L) {
  std::vector<std::vector<double>> dirs;
  auto axis = [&](int a, double s) {
    std::vector<double> v(d, 0.0);
    v[a] = s;
    return v;
  };
  if (L == 1) {
    dirs.push_back(axis(0, 1.0));
  } else if (L == 2) {
    dirs.push_back(axis(0, 1.0));
    dirs.push_back(axis(0, -1.0));
  } else if (L <= d + 1) {
    // regular simplex: pairwise dot exactly -1/(L-1)
    double target = -1.0 / double(L - 1);
    std::vector<std::vector<double>> p(L, std::vector<double>(L - 1, 0.0));
    for (int i = 0; i < L - 1; ++i) {
      double s = 0.0;
      for (int j = 0; j < i; ++j) s += p[i][j] * p[i][j];
      p[i][i] = std::sqrt(std::max(0.0, 1.0 - s));
      for (int k = i + 1; k < L; ++k) {
        double acc = 0.0;
        for (int j = 0; j < i; ++j) acc += p[i][j] * p[k][j];
        p[k][i] = (target - acc) / p[i][i];
      }
    }
    for (int i = 0; i < L; ++i) {
      std::vector<double> v(d, 0.0);
      for (int j = 0; j < L - 1; ++j) v[j] = p[i][j];
      double nz = norm(v.data(), d);
      for (auto& x : v) x /= nz;
      dirs.push_back(std::move(v));
    }
  } else if (L <= 2 * d) {
    for (int i = 0; i < L; ++i) dirs.push_back(axis(i / 2, i % 2 == 0 ? 1.0 : -1.0));
  } else {
    throw GenerationError("generate_one_vs_all: cannot place " + std::to_string(L) +
                          " disjoint caps in dimension " + std::to_string(d));
  }
  return dirs;
}

}  // namespace

ProblemInstance generate_one_vs_all(int d, int L, double b_min, std::uint64_t seed) {
  if (d < 2) throw InvalidInput("generate_one_vs_all: d must be >= 2");
  if (L < 1) throw InvalidInput("generate_one_vs_all: L must be >= 1");
  if (b_min <= 0.0 || b_min >= 1.0)
    throw InvalidInput("generate_one_vs_all: b_min must lie in (0, 1)");

  auto dirs = canonical_directions(d, L);
  double theta_min = M_PI;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j)
      theta_min = std::min(theta_min, angle(dirs[i].data(), dirs[j].data(), d));

  const double slack = 0.02;  // radians of angular slack between cap rims
  double b = b_min;
  if (L >= 2) {
    double rho_max = (theta_min - slack) / 2.0;
    if (rho_max <= 1e-4)
      throw GenerationError("generate_one_vs_all: caps cannot be made disjoint");
    b = std::max(b_min, std::cos(rho_max));
    if (b >= 1.0 - 1e-9)
      throw GenerationError("generate_one_vs_all: required offset collapses the caps");
  }

  ProblemInstance inst;
  inst.kind = InstanceKind::one_vs_all;
  inst.d = d;
  inst.seed = seed;
  inst.planes.resize(L);
  for (int i = 0; i < L; ++i) {
    inst.planes[i].w = dirs[i];
    inst.planes[i].b = b;
  }
  inst.code.rows.resize(L);
  for (int i = 0; i < L; ++i) {
    std::vector<int> row(L, -1);
    row[i] = +1;
    inst.code.rows[i] = Codeword(row);
  }
  inst.code.validate();

  double vol = 0.0;
  for (int i = 0; i < L; ++i) vol += solid_cap_volume(d, b);
  // Monte Carlo cross-check of the quadrature volume
  Rng rng(mix_seed(seed, 0x0a01));
  long mc_n = 1000000;
  long hits = 0;
  std::vector<double> p(d);
  for (long t = 0; t < mc_n; ++t) {
    rng.ball_point(d, p.data());
    if (inst.truth_label_or_none(p.data()) >= 0) ++hits;
  }
  double vd = unit_ball_volume(d);
  double frac = double(hits) / double(mc_n);

  auto& c = inst.certified;
  c.b_min = b;
  c.support_volume = vol;
  c.c_lb = c.c_ub = 1.0 / vol;
  c.component_count = L;
  c.vol_mc = vd * frac;
  c.vol_mc_se = vd * std::sqrt(std::max(frac * (1.0 - frac), 1e-12) / double(mc_n));
  double rho = std::acos(clamp_unit(b));
  if (L == 1) {
    c.diameter = std::max(2.0 * std::sqrt(std::max(0.0, 1.0 - b * b)), 1.0 - b);
  } else {
    double worst = 0.0;
    for (std::size_t i = 0; i < dirs.size(); ++i)
      for (std::size_t j = i + 1; j < dirs.size(); ++j)
        worst = std::max(worst, angle(dirs[i].data(), dirs[j].data(), d));
    c.diameter = 2.0 * std::sin(std::min(M_PI, worst + 2.0 * rho) / 2.0);
  }
  return inst;
}

ProblemInstance generate_boundary_features(int d, const std::string& layout_name, double R,
                                           std::uint64_t seed) {
  if (R <= 0.0) throw InvalidInput("generate_boundary_features: R must be positive");
  int cells = 0;
  std::vector<std::vector<int>> empties;
  if (layout_name == "staircase2d") {
    if (d != 2) throw InvalidInput("staircase2d layout requires d = 2");
    cells = 3;
    empties = {{0, 2}, {2, 0}};
  } else if (layout_name == "grid2d") {
    if (d != 2) throw InvalidInput("grid2d layout requires d = 2");
    cells = 5;
    empties = {{0, 0}, {2, 2}, {4, 4}};
  } else if (layout_name == "axis_grid_d") {
    if (d < 1) throw InvalidInput("axis_grid_d layout requires d >= 1");
    cells = 3;
    empties = {std::vector<int>(d, 0), std::vector<int>(d, 2)};
  } else {
    throw InvalidInput("unknown boundary layout: " + layout_name);
  }

  double side = 1.0 / std::sqrt(double(d));
  double w = side / cells;

  // minimum distance between empty cells (their codewords all differ)
  double min_empty_gap = 1e300;
  for (std::size_t i = 0; i < empties.size(); ++i)
    for (std::size_t j = i + 1; j < empties.size(); ++j) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) {
        int gap_cells = std::abs(empties[i][a] - empties[j][a]) - 1;
        if (gap_cells > 0) s += double(gap_cells) * w * double(gap_cells) * w;
      }
      min_empty_gap = std::min(min_empty_gap, std::sqrt(s));
    }
  if (R > w / 2.0 + 1e-12)
    throw GenerationError("generate_boundary_features: R too large for the cell size");
  if (empties.size() >= 2 && R > min_empty_gap + 1e-12)
    throw GenerationError("generate_boundary_features: R exceeds the empty-region separation");

  ProblemInstance inst;
  inst.kind = InstanceKind::boundary_features;
  inst.d = d;
  inst.seed = seed;
  auto& lay = inst.layout;
  lay.name = layout_name;
  lay.cells_per_axis = cells;
  lay.domain_lo.assign(d, 0.0);
  lay.domain_hi.assign(d, side);

  // planes: internal grid lines, axis-major then offset order
  for (int a = 0; a < d; ++a)
    for (int t = 1; t < cells; ++t) {
      Hyperplane h;
      h.w.assign(d, 0.0);
      h.w[a] = 1.0;
      h.b = t * w;
      inst.planes.push_back(std::move(h));
    }

  // occupied cells, lex order
  auto is_empty = [&](const std::vector<int>& cell) {
    return std::find(empties.begin(), empties.end(), cell) != empties.end();
  };
  std::vector<int> cur(d, 0);
  for (;;) {
    if (!is_empty(cur)) lay.occupied.push_back(cur);
    int a = d - 1;
    while (a >= 0 && ++cur[a] == cells) cur[a--] = 0;
    if (a < 0) break;
  }

  // codewords of the occupied cells
  inst.code.rows.resize(lay.occupied.size());
  for (std::size_t k = 0; k < lay.occupied.size(); ++k) {
    std::vector<int> row;
    for (int a = 0; a < d; ++a)
      for (int t = 1; t < cells; ++t) row.push_back(lay.occupied[k][a] >= t ? +1 : -1);
    inst.code.rows[k] = Codeword(row);
  }
  inst.code.validate();

  // a witness per plane: a facet between an occupied and an empty cell
  int plane_idx = 0;
  for (int a = 0; a < d; ++a) {
    for (int t = 1; t < cells; ++t, ++plane_idx) {
      bool found = false;
      std::vector<int> u(d, 0);
      for (;;) {
        if (u[a] == t - 1) {
          std::vector<int> v = u;
          v[a] = t;
          bool eu = is_empty(u), ev = is_empty(v);
          if (eu != ev) {
            std::vector<double> center(d);
            for (int bdim = 0; bdim < d; ++bdim)
              center[bdim] = lay.domain_lo[bdim] + (u[bdim] + 0.5) * w;
            center[a] = lay.domain_lo[a] + t * w;
            lay.witnesses.emplace_back(plane_idx, std::move(center));
            found = true;
            break;
          }
        }
        int bdim = d - 1;
        while (bdim >= 0 && ++u[bdim] == cells) u[bdim--] = 0;
        if (bdim < 0) break;
      }
      if (!found)
        throw GenerationError("generate_boundary_features: plane " + std::to_string(plane_idx) +
                              " has no class/empty witness facet");
    }
  }

  // connected components of the occupied region under facet adjacency
  {
    int n_occ = int(lay.occupied.size());
    std::vector<int> parent(n_occ);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int i = 0; i < n_occ; ++i)
      for (int j = i + 1; j < n_occ; ++j) {
        int diff = 0, axis_diff = 0;
        for (int a = 0; a < d; ++a) {
          int t = std::abs(lay.occupied[i][a] - lay.occupied[j][a]);
          diff += t;
          if (t > 0) ++axis_diff;
        }
        if (diff == 1 && axis_diff == 1) {
          int ri = find(i), rj = find(j);
          if (ri != rj) parent[ri] = rj;
        }
      }
    int comps = 0;
    for (int i = 0; i < n_occ; ++i)
      if (find(i) == i) ++comps;
    inst.certified.component_count = comps;
  }

  auto& c = inst.certified;
  c.scale_R = R;
  c.support_volume = double(lay.occupied.size()) * std::pow(w, d);
  c.c_lb = c.c_ub = 1.0 / c.support_volume;
  c.diameter = 1.0;
  return inst;
}

}  // namespace outcode

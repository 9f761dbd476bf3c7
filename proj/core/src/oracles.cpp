#include "outcode/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "outcode/learners.hpp"
#include "outcode/quadrature.hpp"
#include "outcode/rng.hpp"

namespace outcode {
namespace oracles {

std::string MCReport::summary() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "estimate %.6g +- %.2g (n=%ld) vs target %.6g [%s at %.0f SE]",
                estimate, standard_error, sample_count, target, pass ? "ok" : "off", k_se);
  return buf;
}

namespace {

MCReport finish_indicator_report(long hits, long count, double target, double k_se) {
  MCReport rep;
  rep.sample_count = count;
  rep.estimate = double(hits) / double(count);
  rep.standard_error =
      std::sqrt(std::max(rep.estimate * (1.0 - rep.estimate), 1e-12) / double(count));
  rep.target = target;
  rep.k_se = k_se;
  rep.pass = std::fabs(rep.estimate - target) <= k_se * rep.standard_error;
  return rep;
}

}  // namespace

MCReport mc_ball_slice(int d, double r, double rho, long count, std::uint64_t seed) {
  if (count < 10000) throw InvalidInput("mc_ball_slice: count must be >= 10^4");
  double target = ball_slice_probability(d, r, rho);
  Rng rng(mix_seed(seed, 0xb511));
  std::vector<double> p(d);
  long hits = 0;
  for (long t = 0; t < count; ++t) {
    rng.ball_point(d, p.data());
    double x1 = p[0] * r;
    if (x1 >= 0.0 && x1 <= rho) ++hits;
  }
  return finish_indicator_report(hits, count, target, 4.0);
}

double projected_band_mass(const ProblemInstance& inst, int class_i, double rho1, double rho2) {
  if (inst.kind != InstanceKind::one_vs_all)
    throw InvalidInput("projected_band_mass: instance is not one-vs-all");
  if (rho1 < 0.0 || rho2 < rho1) throw InvalidInput("projected_band_mass: bad band");
  int d = inst.d;
  double b = inst.planes[class_i].b;
  double c = inst.certified.c_lb;
  double z = d == 2 ? M_PI
                    : integrate([d](double t) { return std::pow(std::sin(t), d - 2); }, 0.0, M_PI,
                                1e-11, 60);
  double hi = std::min(rho2, std::acos(clamp_unit(b)));
  if (hi <= rho1) return 0.0;
  auto f = [&](double theta) {
    double q = projected_density_value(d, b, std::cos(theta), c);
    double w = d == 2 ? 1.0 : std::pow(std::sin(theta), d - 2);
    return q * w / z;
  };
  return integrate(f, rho1, hi, 1e-11, 60);
}

MCReport mc_projected_density(const ProblemInstance& inst, int class_i, double rho1, double rho2,
                              long count, std::uint64_t seed) {
  double target = projected_band_mass(inst, class_i, rho1, rho2);
  Sample s = draw_sample(inst, int(count), mix_seed(seed, 0x9d01));
  const double* w = inst.planes[class_i].w.data();
  long hits = 0;
  for (int i = 0; i < s.pts.n; ++i) {
    auto v = normalized(s.pts.row(i), inst.d);
    double ang = std::acos(clamp_unit(dot(w, v.data(), inst.d)));
    if (ang >= rho1 && ang <= rho2) ++hits;
  }
  return finish_indicator_report(hits, count, target, 4.0);
}

double brute_margin(const ProblemInstance& inst, long pair_count, std::uint64_t seed) {
  if (inst.num_classes() < 2) return std::numeric_limits<double>::infinity();
  Rng rng(mix_seed(seed, 0xbb22));
  int pool_n = int(std::min<long>(4000, std::max<long>(200, pair_count)));
  Sample pool = draw_sample(inst, pool_n, mix_seed(seed, 0xbb23));
  std::vector<int> labels(pool_n);
  for (int i = 0; i < pool_n; ++i) labels[i] = inst.truth_label(pool.pts.row(i));
  double best = std::numeric_limits<double>::infinity();
  long done = 0, guard = 0;
  while (done < pair_count && guard < 60 * pair_count) {
    ++guard;
    int i = int(rng.uniform_index(pool_n)), j = int(rng.uniform_index(pool_n));
    if (labels[i] == labels[j]) continue;
    best = std::min(best, dist(pool.pts.row(i), pool.pts.row(j), inst.d));
    ++done;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Cap masses by zonal quadrature
// ---------------------------------------------------------------------------

namespace {

// fraction of the latitude sphere at angle theta from w that lies within
// angular distance s of a probe at angle theta_v from w
double zone_overlap_fraction(int d, double theta, double theta_v, double s) {
  if (theta + theta_v <= s) return 1.0;
  if (std::fabs(theta - theta_v) >= s) return 0.0;
  double st = std::sin(theta) * std::sin(theta_v);
  if (st < 1e-14) return theta + theta_v <= s ? 1.0 : 0.0;
  double t = (std::cos(s) - std::cos(theta) * std::cos(theta_v)) / st;
  return cap_measure(d - 1, std::acos(clamp_unit(t)));
}

}  // namespace

double sphere_cap_mass(const ProblemInstance& inst, const std::vector<double>& v, double s) {
  if (inst.kind != InstanceKind::one_vs_all)
    throw InvalidInput("sphere_cap_mass: instance is not one-vs-all");
  int d = inst.d;
  double c = inst.certified.c_lb;
  double mass = 0.0;
  if (d == 2) {
    // positions on the circle; integrate the density over the probe arc
    double av = std::atan2(v[1], v[0]);
    for (const auto& h : inst.planes) {
      double ai = std::atan2(h.w[1], h.w[0]);
      double rho = std::acos(clamp_unit(h.b));
      auto f = [&](double t) {
        // t is the signed angle from w_i; density at |t|
        double q = projected_density_value(d, h.b, std::cos(t), c);
        double pos = ai + t;
        double delta = std::fabs(std::remainder(pos - av, 2.0 * M_PI));
        return delta <= s ? q : 0.0;
      };
      mass += integrate(f, -rho, rho, 1e-12, 60) / (2.0 * M_PI);
    }
    return mass;
  }
  double z = integrate([d](double t) { return std::pow(std::sin(t), d - 2); }, 0.0, M_PI, 1e-12, 60);
  for (const auto& h : inst.planes) {
    double theta_v = angle(h.w.data(), v.data(), d);
    double rho = std::acos(clamp_unit(h.b));
    double lo = std::max(0.0, theta_v - s);
    double hi = std::min(rho, theta_v + s);
    if (hi <= lo && !(theta_v <= s)) continue;
    lo = std::min(lo, rho);
    auto f = [&](double theta) {
      double q = projected_density_value(d, h.b, std::cos(theta), c);
      double w = std::pow(std::sin(theta), d - 2) / z;
      return q * w * zone_overlap_fraction(d, theta, theta_v, s);
    };
    double a = theta_v <= s ? 0.0 : lo;
    mass += integrate(f, a, hi, 1e-12, 60);
  }
  return mass;
}

// ---------------------------------------------------------------------------
// Clusterability
// ---------------------------------------------------------------------------

bool ClusterabilityReport::all_pass() const {
  for (const auto& p : properties)
    if (!p.pass) return false;
  return true;
}

std::string ClusterabilityReport::to_text() const {
  std::ostringstream os;
  for (const auto& p : properties)
    os << (p.pass ? "[PASS] " : "[FAIL] ") << p.name << " -- " << p.detail << "\n";
  return os.str();
}

namespace {

// probe on the sphere at angle theta from w_i, rotated toward w_j
std::vector<double> rotate_toward(const std::vector<double>& wi, const std::vector<double>& wj,
                                  double theta, int d) {
  // orthonormalize wj against wi; fall back to a canonical axis
  std::vector<double> t(d, 0.0);
  double proj = dot(wi.data(), wj.data(), d);
  for (int a = 0; a < d; ++a) t[a] = wj[a] - proj * wi[a];
  double nz = norm(t.data(), d);
  if (nz < 1e-9) {
    int axis = 0;
    for (int a = 0; a < d; ++a)
      if (std::fabs(wi[a]) < 0.9) {
        axis = a;
        break;
      }
    t.assign(d, 0.0);
    t[axis] = 1.0;
    proj = dot(wi.data(), t.data(), d);
    for (int a = 0; a < d; ++a) t[a] -= proj * wi[a];
    nz = norm(t.data(), d);
  }
  std::vector<double> out(d);
  for (int a = 0; a < d; ++a) out[a] = std::cos(theta) * wi[a] + std::sin(theta) * t[a] / nz;
  return out;
}

}  // namespace

ClusterabilityReport check_clusterability(const ProblemInstance& inst, double eps, double r_c,
                                          double r_a, double tau, double gamma, long mc_budget,
                                          std::uint64_t seed) {
  if (inst.kind != InstanceKind::one_vs_all)
    throw InvalidInput("check_clusterability: instance is not one-vs-all");
  ClusterabilityReport rep;
  int L = int(inst.planes.size());
  int d = inst.d;
  char buf[256];

  // level-set radii
  std::vector<double> radius_eps(L), radius_zero(L);
  bool nonempty = true;
  for (int i = 0; i < L; ++i) {
    radius_zero[i] = cap_radius(inst, i, 0.0, LevelSide::upper);
    try {
      radius_eps[i] = cap_radius(inst, i, eps, LevelSide::upper);
    } catch (const EmptyLevelSet&) {
      nonempty = false;
      radius_eps[i] = 0.0;
    }
  }

  // optional MC estimate of a cap mass when the budget can resolve it
  Sample pool = draw_sample(inst, int(std::min<long>(mc_budget, 300000)), mix_seed(seed, 0xcc01));
  Points proj(pool.pts.n, d);
  for (int i = 0; i < pool.pts.n; ++i) {
    auto v = normalized(pool.pts.row(i), d);
    std::copy(v.begin(), v.end(), proj.row(i));
  }
  auto mc_mass = [&](const std::vector<double>& v, double s) -> std::pair<bool, double> {
    double cos_s = std::cos(std::min(s, M_PI));
    long hits = 0;
    for (int i = 0; i < proj.n; ++i)
      if (clamp_unit(dot(proj.row(i), v.data(), d)) >= cos_s) ++hits;
    double est = double(hits) / double(proj.n);
    return {hits >= 50, est};
  };

  // (1) each A_i is a spherical cap, hence connected and nonempty
  {
    ClusterabilityReport::Property p{"1:connected", nonempty, ""};
    p.detail = nonempty ? "every level-set cap has positive angular radius"
                        : "some level-set cap is empty at this epsilon";
    rep.properties.push_back(p);
  }

  // (2) mass near A_i exceeds tau + gamma
  {
    ClusterabilityReport::Property p{"2:high-mass-near-A", true, ""};
    double worst = 1e300;
    std::string mc_note = "mc unresolvable at this budget";
    for (int i = 0; i < L && nonempty; ++i) {
      for (int j = 0; j < L; ++j) {
        if (L > 1 && j == i) continue;
        auto probe = rotate_toward(inst.planes[i].w, inst.planes[L > 1 ? j : i].w,
                                   radius_eps[i] + r_c / 3.0, d);
        double mass = sphere_cap_mass(inst, probe, r_a);
        if (mass < worst) {
          worst = mass;
          auto [resolved, est] = mc_mass(probe, r_a);
          if (resolved) {
            char mb[64];
            std::snprintf(mb, sizeof mb, "mc %.4g", est);
            mc_note = mb;
          }
        }
        if (L == 1) break;
      }
    }
    p.pass = nonempty && worst > tau + gamma;
    std::snprintf(buf, sizeof buf, "min probe mass %.4g (%s) vs tau+gamma %.4g", worst,
                  mc_note.c_str(), tau + gamma);
    p.detail = buf;
    rep.properties.push_back(p);
  }

  // (3) mass inside A_i exceeds gamma
  {
    ClusterabilityReport::Property p{"3:mass-inside-A", true, ""};
    double worst = 1e300;
    for (int i = 0; i < L && nonempty; ++i) {
      auto probe = rotate_toward(inst.planes[i].w, inst.planes[(i + 1) % L].w, radius_eps[i], d);
      worst = std::min(worst, sphere_cap_mass(inst, probe, r_c / 3.0));
    }
    p.pass = nonempty && worst > gamma;
    std::snprintf(buf, sizeof buf, "min probe mass %.4g vs gamma %.4g", worst, gamma);
    p.detail = buf;
    rep.properties.push_back(p);
  }

  // (4) separation: disjoint rims and r_c covered by two annuli of width r_a
  {
    ClusterabilityReport::Property p{"4:separating-width", true, ""};
    bool ok = r_c <= 2.0 * r_a + 1e-12;
    double min_slack = 1e300;
    for (int i = 0; i < L; ++i)
      for (int j = i + 1; j < L; ++j) {
        double ang_ij = angle(inst.planes[i].w.data(), inst.planes[j].w.data(), d);
        min_slack = std::min(min_slack, ang_ij - radius_zero[i] - radius_zero[j]);
      }
    if (L > 1 && min_slack < -1e-12) ok = false;
    std::snprintf(buf, sizeof buf, "r_c %.4g vs 2 r_a %.4g; min rim slack %.4g", r_c, 2.0 * r_a,
                  L > 1 ? min_slack : 0.0);
    p.pass = ok;
    p.detail = buf;
    rep.properties.push_back(p);
  }

  // (5) mass inside the separating set stays below tau - gamma
  {
    ClusterabilityReport::Property p{"5:low-mass-in-S", true, ""};
    double worst = 0.0;
    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) {
        if (L > 1 && j == i) continue;
        auto probe =
            rotate_toward(inst.planes[i].w, inst.planes[L > 1 ? j : i].w,
                          std::max(0.0, radius_zero[i] - r_a), d);
        // the probe must lie in S for the check to apply
        bool in_S = true;
        for (int k = 0; k < L; ++k)
          if (angle(inst.planes[k].w.data(), probe.data(), d) < radius_zero[k] - r_a - 1e-12)
            in_S = false;
        if (!in_S) continue;
        worst = std::max(worst, sphere_cap_mass(inst, probe, r_a));
        if (L == 1) break;
      }
    }
    p.pass = worst < tau - gamma;
    std::snprintf(buf, sizeof buf, "max probe mass %.4g vs tau-gamma %.4g", worst, tau - gamma);
    p.detail = buf;
    rep.properties.push_back(p);
  }

  return rep;
}

// ---------------------------------------------------------------------------
// Verify battery
// ---------------------------------------------------------------------------

std::vector<CheckResult> run_verify_suite(long mc_budget, std::uint64_t seed) {
  std::vector<CheckResult> out;
  char buf[256];

  // ball-slice bounds, deterministic grid
  {
    bool ok = true;
    for (int d = 1; d <= 10 && ok; ++d)
      for (int k = 1; k <= 12 && ok; ++k) {
        double rho = k / 12.0 / std::sqrt(2.0);
        double p = ball_slice_probability(d, 1.0, rho);
        auto [lo, hi] = ball_slice_bounds(d, 1.0, rho);
        if (p < lo - 1e-9 || p > hi + 1e-9) ok = false;
      }
    out.push_back({"ball-slice-bounds-grid", ok, "d in 1..10, 12 widths up to r/sqrt(2)"});
  }

  // ball-slice Monte Carlo agreement
  for (int d : {2, 3, 5, 8}) {
    long count = std::max<long>(10000, mc_budget);
    auto rep = mc_ball_slice(d, 1.0, 0.5 / std::sqrt(2.0), count, mix_seed(seed, 100 + d));
    out.push_back({"ball-slice-mc-d" + std::to_string(d), rep.pass, rep.summary()});
  }

  // projected-density bands on the canonical one-vs-all instance
  {
    auto inst = generate_one_vs_all(3, 2, 0.5, 7);
    double rho_max = std::acos(0.5);
    bool ok = true;
    std::ostringstream det;
    for (int k = 0; k < 5; ++k) {
      double lo = rho_max * k / 5.0, hi = rho_max * (k + 1) / 5.0;
      auto rep = mc_projected_density(inst, 0, lo, hi, std::max<long>(100000, mc_budget),
                                      mix_seed(seed, 200 + k));
      if (!rep.pass) ok = false;
      det << "band" << k << " " << (rep.pass ? "ok" : "OFF") << " ";
    }
    out.push_back({"projected-density-bands", ok, det.str()});
  }

  // separation margins on generated instances
  {
    bool ok = true;
    double worst = 1e300;
    for (std::uint64_t s = 0; s < 3 && ok; ++s) {
      auto inst = generate_ecoc(2, 2 + int(s), 0.25, s);
      double margin = brute_margin(inst, 20000, mix_seed(seed, 300 + s));
      worst = std::min(worst, margin / inst.certified.margin_g);
      if (margin < inst.certified.margin_g * 0.95) ok = false;
    }
    std::snprintf(buf, sizeof buf, "worst margin ratio %.4f", worst);
    out.push_back({"brute-margin-ecoc", ok, buf});
  }

  // cross-class segments cross every plane on which the codewords disagree
  {
    auto inst = generate_ecoc(2, 3, 0.3, 5);
    Rng rng(mix_seed(seed, 0x5e6));
    Sample pool = draw_sample(inst, 2000, mix_seed(seed, 0x5e7));
    std::vector<int> labels(pool.pts.n);
    for (int i = 0; i < pool.pts.n; ++i) labels[i] = inst.truth_label(pool.pts.row(i));
    bool ok = true;
    long checked = 0;
    for (long t = 0; t < 40000 && checked < 5000; ++t) {
      int i = int(rng.uniform_index(pool.pts.n)), j = int(rng.uniform_index(pool.pts.n));
      if (labels[i] == labels[j]) continue;
      ++checked;
      const auto& ci = inst.code.rows[labels[i]];
      const auto& cj = inst.code.rows[labels[j]];
      for (int k = 0; k < ci.size(); ++k) {
        if (ci.bits[k] == cj.bits[k]) continue;
        double hi = inst.planes[k].eval(pool.pts.row(i));
        double hj = inst.planes[k].eval(pool.pts.row(j));
        if (hi * hj >= 0.0) ok = false;
      }
    }
    std::snprintf(buf, sizeof buf, "%ld cross-class segments checked", checked);
    out.push_back({"segment-crossings", ok, buf});
  }

  // per-kind assumption reports
  {
    auto add_report = [&](const std::string& name, const ProblemInstance& inst) {
      auto rep = verify_assumptions(inst, std::max<long>(20000, mc_budget / 10), seed);
      std::string detail;
      for (const auto& c : rep.checks)
        if (!c.pass) detail += c.name + " failed; ";
      if (detail.empty()) detail = "all assumption checks pass";
      out.push_back({name, rep.all_pass(), detail});
    };
    add_report("assumptions-ecoc", generate_ecoc(2, 3, 0.3, 1));
    add_report("assumptions-manifold", generate_ecoc_manifold(5, 1, 3, 0.3, 2));
    add_report("assumptions-one-vs-all", generate_one_vs_all(3, 3, 0.5, 3));
    add_report("assumptions-boundary", generate_boundary_features(2, "staircase2d", 0.1, 4));
  }

  // clusterability at the radius prescribed by the feasibility constraints
  {
    auto inst = generate_one_vs_all(3, 2, 0.5, 11);
    double eps = 0.15;
    double rc = choose_connection_radius(inst, eps);
    double ra = rc / 2.0;
    double eps_t = inst.certified.c_lb / inst.certified.c_ub * eps;
    double tau = 0.5 * eps_t * cap_measure(inst.d, ra);
    double gamma = 0.25 * eps_t * cap_measure(inst.d, rc / 3.0);
    auto rep = check_clusterability(inst, eps, rc, ra, tau, gamma,
                                    std::max<long>(100000, mc_budget), seed);
    std::string detail;
    for (const auto& p : rep.properties)
      if (!p.pass) detail += p.name + " failed; ";
    if (detail.empty()) detail = "all five clusterability properties hold";
    out.push_back({"clusterability-prescribed", rep.all_pass(), detail});
  }

  return out;
}

}  // namespace oracles
}  // namespace outcode

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "outcode/geometry.hpp"
#include "outcode/points.hpp"

namespace outcode {

enum class InstanceKind { ecoc, one_vs_all, boundary_features };

enum class RegionShape { ball, cube, patch };

std::string to_string(InstanceKind k);
InstanceKind instance_kind_from_string(const std::string& s);

// Parameters the generator certifies about the instance it built.
struct Certified {
  double margin_g = 0.0;      // minimum cross-class distance (0 = not certified)
  double b_min = 0.0;         // smallest plane offset (one-vs-all)
  double scale_R = 0.0;       // boundary-features witness radius
  double beta = 0.0;          // codeword prediction error budget
  double c_lb = 0.0;          // density lower bound on the support
  double c_ub = 0.0;          // density upper bound on the support
  double support_volume = 0.0;
  double diameter = 0.0;
  double thickness_C = 0.0;   // level-set thickness constant
  double level_lambda0 = 0.0;
  double radius_sigma0 = 0.0;
  int component_count = 0;
  std::optional<double> doubling_dimension;
  double vol_mc = 0.0;        // Monte Carlo cross-check of support_volume
  double vol_mc_se = 0.0;
};

// Convex regions used by the ecoc generators. All regions of an instance
// share shape and size. A patch is a flat ball spanning patch_axes.
struct Region {
  std::vector<double> center;
};

// Boundary-features layout description (axis-aligned grid of cells).
struct BoundaryLayout {
  std::string name;                       // staircase2d | grid2d | axis_grid_d
  int cells_per_axis = 0;
  std::vector<double> domain_lo, domain_hi;
  std::vector<std::vector<int>> occupied;  // cell coordinates, lex-sorted; class id = position
  std::vector<std::pair<int, std::vector<double>>> witnesses;  // (plane index, witness center)
};

struct ProblemInstance {
  InstanceKind kind = InstanceKind::ecoc;
  int d = 0;
  std::vector<Hyperplane> planes;
  CodeMatrix code;
  Certified certified;
  std::uint64_t seed = 0;

  // ecoc-family payload
  RegionShape shape = RegionShape::ball;
  double region_radius = 0.0;          // ball radius, cube circumradius, or patch radius
  std::vector<Region> regions;
  std::vector<int> patch_axes;         // for RegionShape::patch

  // boundary-features payload
  BoundaryLayout layout;

  int num_classes() const;
  std::string id() const;

  // ground truth f*; throws NoClassError outside the support
  int truth_label(const double* x) const;
  // -1 outside the support
  int truth_label_or_none(const double* x) const;

  // axis-aligned bounding box of the support domain
  void domain_box(std::vector<double>& lo, std::vector<double>& hi) const;

  double cube_half_side() const;       // RegionShape::cube only
};

// q_l, q_u at a unit vector v for a one-vs-all instance. (0,0) outside every
// cap; throws InstanceInvariantViolation if v lies in two caps.
std::pair<double, double> projected_density_bounds(const ProblemInstance& inst, const double* v);

enum class LevelSide { upper, lower };

// Angular radius of the level set of the upper/lower projected-density bound
// for class i.
double cap_radius(const ProblemInstance& inst, int class_i, double lambda, LevelSide side);

// -------------------------------------------------------------------------
// Generators
// -------------------------------------------------------------------------

ProblemInstance generate_ecoc(int d, int n_components, double g, std::uint64_t seed,
                              RegionShape shape = RegionShape::ball);

ProblemInstance generate_ecoc_manifold(int d_ambient, int d_intrinsic, int n_components, double g,
                                       std::uint64_t seed);

ProblemInstance generate_one_vs_all(int d, int L, double b_min, std::uint64_t seed);

ProblemInstance generate_boundary_features(int d, const std::string& layout, double R,
                                           std::uint64_t seed);

// -------------------------------------------------------------------------
// Sampling and label queries
// -------------------------------------------------------------------------

struct Sample {
  Points pts;
  std::uint64_t seed = 0;
  std::string instance_id;
};

Sample draw_sample(const ProblemInstance& inst, int n, std::uint64_t seed);

struct HeldOutSet {
  Points pts;
  std::vector<int> labels;
};

HeldOutSet draw_held_out(const ProblemInstance& inst, int n, std::uint64_t seed);

class LabeledOracle {
 public:
  LabeledOracle(const ProblemInstance& inst, double eta, std::uint64_t noise_seed,
                std::optional<long> budget = std::nullopt);

  // Label of the point at a stable index. Noise (if eta > 0) is decided once
  // per index, so requerying an index returns the same answer.
  int query(const double* x, long index);

  long query_count() const { return query_count_; }
  double eta() const { return eta_; }
  std::optional<long> budget() const { return budget_; }
  const ProblemInstance& instance() const { return *inst_; }

 private:
  const ProblemInstance* inst_;
  double eta_;
  std::uint64_t noise_seed_;
  std::optional<long> budget_;
  long query_count_ = 0;
};

// -------------------------------------------------------------------------
// Certification
// -------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CertReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  std::string to_text() const;
};

CertReport verify_assumptions(const ProblemInstance& inst, long mc_budget, std::uint64_t seed);

}  // namespace outcode

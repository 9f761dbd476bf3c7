#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "outcode/clustering.hpp"
#include "outcode/instance.hpp"

namespace outcode {

struct LedgerEntry {
  long step = 0;
  long point_index = -1;
  int label = -1;
  std::string purpose;
};

struct QueryLedger {
  std::vector<LedgerEntry> entries;
  std::vector<std::string> notes;

  long total() const { return long(entries.size()); }
  void add(long point_index, int label, const std::string& purpose) {
    entries.push_back({long(entries.size()), point_index, label, purpose});
  }
};

// Thrown when the oracle budget runs out mid-run; carries the queries issued
// so far.
struct PartialResult : Error {
  QueryLedger ledger;
  PartialResult(const std::string& msg, QueryLedger lg) : Error(msg), ledger(std::move(lg)) {}
};

// Candidate hyperplanes found by half-ball detection.
struct PlaneSet {
  struct Entry {
    std::vector<double> center;
    std::vector<double> direction;
    double radius = 0.0;
    long count = 0;  // empirical half-ball count at detection time
  };
  std::vector<Entry> entries;

  int size() const { return int(entries.size()); }
  // sign-vector key of x over the detected planes ('+'/'-' per plane)
  std::string cell_key(const double* x, int d) const;
};

struct Classifier {
  enum class Kind { single_linkage, hierarchical, robust_sphere, plane_detection };

  Kind kind = Kind::single_linkage;
  int d = 0;
  int n_classes = 0;

  // clustering-based predictors
  LabeledClustering lc;

  // plane-detection predictor
  PlaneSet planes;
  std::map<std::string, int> cell_labels;
  std::uint64_t unknown_cell_seed = 0;

  int predict(const double* x) const;
};

struct LearnResult {
  Classifier classifier;
  QueryLedger ledger;
};

// ---------------------------------------------------------------------------
// Learners. majority_mode = false queries the smallest-index member of each
// selected group once; true queries t_per_group seeded random members and
// takes the majority label (ties to the smallest class id).
// ---------------------------------------------------------------------------

LearnResult single_linkage_learn(const Sample& sample, LabeledOracle& oracle, double r_c,
                                 double epsilon, bool majority_mode = false, int t_per_group = 1,
                                 std::uint64_t query_seed = 0);

LearnResult hierarchical_learn(const Sample& sample, LabeledOracle& oracle, int t,
                               std::uint64_t seed, double purity_threshold = 1.0);

LearnResult robust_sphere_learn(const Sample& sample, LabeledOracle& oracle, double r_c,
                                double epsilon, double c_lb, double c_ub,
                                bool majority_mode = false, int t_per_group = 1,
                                std::uint64_t query_seed = 0);

// Largest connection radius permitted by the level-set feasibility
// constraints, evaluated numerically from the exact cap-radius functions.
double choose_connection_radius(const ProblemInstance& inst, double epsilon);

struct PlaneDetectOptions {
  int k_directions = 64;        // random directions tried per center for d >= 3
  std::uint64_t seed = 0;       // direction search / unknown-cell labels
  bool majority_mode = false;
  int t_per_group = 1;
};

struct PlanesLearnResult {
  Classifier classifier;
  QueryLedger ledger;
  PlaneSet planes;
};

PlanesLearnResult plane_detection_learn(const Sample& sample, LabeledOracle& oracle, double r,
                                        double tau, int L_cells, const std::vector<double>& lo,
                                        const std::vector<double>& hi,
                                        const PlaneDetectOptions& opt = {});

// Direction minimizing the number of samples in the open half-ball about
// `center`; exact angular sweep in d = 2, randomized search plus coordinate
// refinement otherwise. Returns the direction and its exact count.
std::pair<std::vector<double>, long> min_halfball_direction(const Points& pts,
                                                            const std::vector<int>& in_ball,
                                                            const double* center, double r,
                                                            int k_directions, std::uint64_t seed);

// Default threshold constant for plane detection derived from the error
// target: alpha(eps) for a d-dimensional problem with m planes, diameter D
// and density lower bound c_lb.
double plane_detection_alpha(int d, int m, double eps, double diameter, double R, double c_lb);

// hbp(r) = c_lb * r^d * v_d / 2, the half-ball mass lower bound.
double half_ball_mass_bound(int d, double r, double c_lb);

enum class BaseAlgo { single_linkage, robust_sphere, plane_detection };

struct BaseParams {
  double rc = 0.0;
  double eps = 0.1;
  double c_lb = 0.0, c_ub = 0.0;   // robust_sphere
  double r = 0.0, tau = 0.0;       // plane_detection
  int L_cells = 0;
  int k_directions = 64;
  std::vector<double> lo, hi;
};

// Majority-vote wrapper: identical unlabeled phase, t_per_group queries per
// selected group.
LearnResult agnostic_wrap(BaseAlgo algo, const Sample& sample, LabeledOracle& oracle,
                          const BaseParams& params, int t_per_group, std::uint64_t seed);

}  // namespace outcode

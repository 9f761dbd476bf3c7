#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "outcode/instance.hpp"
#include "outcode/learners.hpp"

namespace outcode {

// Generator settings for the instance an experiment runs on.
struct InstanceSpec {
  std::string kind;  // ecoc | ecoc_manifold | one_vs_all | boundary_features
  int d = 2;
  int n_components = 2;       // ecoc family
  double g = 0.3;             // ecoc family
  int d_intrinsic = 1;        // ecoc_manifold
  std::string shape = "ball";  // ecoc: ball | cube
  int L = 2;                  // one_vs_all
  double b_min = 0.5;         // one_vs_all
  std::string layout = "staircase2d";  // boundary_features
  double R = 0.1;             // boundary_features
  std::uint64_t seed = 1;

  ProblemInstance build() const;
};

struct ExperimentConfig {
  InstanceSpec instance;
  int n = 1000;
  std::string algorithm;  // sl | hier | sphere | planes
  double rc = 0.0;        // 0 = derive a default
  double eps = 0.1;
  int t = 10;             // hier label count
  double r = 0.0;         // planes: 0 = R/2
  double tau = 0.0;       // planes: 0 = alpha * hbp(r) / 2
  double alpha = 0.0;     // planes: 0 = formula default
  int k_directions = 64;
  double eta = 0.0;
  int t_per_group = 1;
  int heldout = 10000;
  int repetitions = 1;
  std::uint64_t seed_base = 1;
};

struct RunResult {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string kind;
  std::string algorithm;
  int d = 0;
  long n = 0;
  long labels_used = 0;
  double error = 0.0;          // vs f*
  long runtime_ms = 0;         // measured; excluded from the deterministic CSV
  bool ok = true;
  std::string status = "ok";
  std::map<std::string, double> diagnostics;
};

// Misclassified fraction against the ground-truth labels of the held-out set.
double estimate_error(const Classifier& clf, const HeldOutSet& heldout);

std::string config_digest(const ExperimentConfig& cfg);

// One deterministic run per repetition; generation or learner errors are
// recorded per repetition without aborting the rest.
std::vector<RunResult> run_experiment(const ExperimentConfig& cfg);

// Results CSV plus a summary text table. The runtime_ms column in the CSV is
// written as 0 so repeated runs are byte-identical; measured runtimes appear
// in the summary.
void emit_report(const std::vector<RunResult>& results, const std::string& csv_path,
                 const std::string& summary_path);

std::vector<RunResult> load_results_csv(const std::string& csv_path);

std::string summarize(const std::vector<RunResult>& results);

}  // namespace outcode

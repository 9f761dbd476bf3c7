#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "outcode/instance.hpp"

namespace outcode {
namespace oracles {

struct MCReport {
  double estimate = 0.0;
  double standard_error = 0.0;
  long sample_count = 0;
  double target = 0.0;
  double k_se = 4.0;
  bool pass = false;

  std::string summary() const;
};

// Fraction of uniform ball samples whose first coordinate lands in [0, rho],
// compared against ball_slice_probability.
MCReport mc_ball_slice(int d, double r, double rho, long count, std::uint64_t seed);

// Mass of the angular band [rho1, rho2] around class i's direction after
// projecting instance samples to the sphere, compared against quadrature of
// the projected-density formula.
MCReport mc_projected_density(const ProblemInstance& inst, int class_i, double rho1, double rho2,
                              long count, std::uint64_t seed);

// Quadrature of the projected density over an angular band around w_i.
double projected_band_mass(const ProblemInstance& inst, int class_i, double rho1, double rho2);

// Minimum distance over sampled cross-class pairs; +infinity when fewer than
// two classes exist.
double brute_margin(const ProblemInstance& inst, long pair_count, std::uint64_t seed);

// Probability mass of the spherical cap scap(v, s) under the projected
// density of a one-vs-all instance, by zonal quadrature.
double sphere_cap_mass(const ProblemInstance& inst, const std::vector<double>& v, double s);

struct ClusterabilityReport {
  struct Property {
    std::string name;
    bool pass = false;
    std::string detail;
  };
  std::vector<Property> properties;
  bool all_pass() const;
  std::string to_text() const;
};

// Checks the five clusterability conditions for the level-set caps
// A_i = {q_u^i >= eps} at parameters (r_c, r_a, tau, gamma). Mass
// requirements are decided by quadrature; Monte Carlo estimates are attached
// when the budget can resolve them.
ClusterabilityReport check_clusterability(const ProblemInstance& inst, double eps, double r_c,
                                          double r_a, double tau, double gamma, long mc_budget,
                                          std::uint64_t seed);

// The full oracle battery behind the `verify` CLI subcommand.
std::vector<CheckResult> run_verify_suite(long mc_budget, std::uint64_t seed);

}  // namespace oracles
}  // namespace outcode

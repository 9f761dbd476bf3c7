#include "outcode/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "outcode/io.hpp"
#include "outcode/rng.hpp"

namespace outcode {

ProblemInstance InstanceSpec::build() const {
  if (kind == "ecoc") {
    RegionShape rs = shape == "cube" ? RegionShape::cube : RegionShape::ball;
    return generate_ecoc(d, n_components, g, seed, rs);
  }
  if (kind == "ecoc_manifold") return generate_ecoc_manifold(d, d_intrinsic, n_components, g, seed);
  if (kind == "one_vs_all") return generate_one_vs_all(d, L, b_min, seed);
  if (kind == "boundary_features") return generate_boundary_features(d, layout, R, seed);
  throw InvalidInput("unknown instance kind in config: " + kind);
}

double estimate_error(const Classifier& clf, const HeldOutSet& heldout) {
  if (heldout.pts.n == 0) throw InvalidInput("estimate_error: held-out set is empty");
  long wrong = 0;
  for (int i = 0; i < heldout.pts.n; ++i)
    if (clf.predict(heldout.pts.row(i)) != heldout.labels[i]) ++wrong;
  return double(wrong) / double(heldout.pts.n);
}

std::string config_digest(const ExperimentConfig& cfg) {
  std::string text = config_to_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

RunResult run_one(const ExperimentConfig& cfg, const std::string& digest, int rep) {
  RunResult rr;
  rr.config_digest = digest;
  rr.seed = mix_seed(cfg.seed_base, std::uint64_t(rep));
  rr.kind = cfg.instance.kind;
  rr.algorithm = cfg.algorithm;
  rr.n = cfg.n;

  auto t0 = std::chrono::steady_clock::now();
  try {
    ProblemInstance inst = cfg.instance.build();
    rr.d = inst.d;
    std::uint64_t sample_seed = mix_seed(rr.seed, 1);
    std::uint64_t noise_seed = mix_seed(rr.seed, 2);
    std::uint64_t algo_seed = mix_seed(rr.seed, 3);
    std::uint64_t heldout_seed = mix_seed(rr.seed, 4);

    Sample sample = draw_sample(inst, cfg.n, sample_seed);
    LabeledOracle oracle(inst, cfg.eta, noise_seed);
    bool majority = cfg.eta > 0.0 || cfg.t_per_group > 1;

    LearnResult res;
    if (cfg.algorithm == "sl") {
      double rc = cfg.rc > 0.0 ? cfg.rc : inst.certified.margin_g / 2.0;
      if (rc <= 0.0) throw InvalidInput("run: no connection radius available for sl");
      res = single_linkage_learn(sample, oracle, rc, cfg.eps, majority, cfg.t_per_group,
                                 algo_seed);
      rr.diagnostics["cluster_count"] = double(res.classifier.lc.clustering.num_clusters());
    } else if (cfg.algorithm == "hier") {
      double thresh = cfg.eta > 0.0 ? 0.75 : 1.0;
      res = hierarchical_learn(sample, oracle, cfg.t, algo_seed, thresh);
      rr.diagnostics["cluster_count"] = double(res.classifier.lc.clustering.num_clusters());
      // per-component label coverage (level-set components = generator regions)
      if (!inst.regions.empty()) {
        std::vector<char> covered(inst.regions.size(), 0);
        for (const auto& e : res.ledger.entries)
          covered[inst.truth_label(sample.pts.row(int(e.point_index)))] = 1;
        int c = 0;
        for (char v : covered) c += v;
        rr.diagnostics["components_labeled"] = c;
      }
    } else if (cfg.algorithm == "sphere") {
      double rc = cfg.rc > 0.0 ? cfg.rc : choose_connection_radius(inst, cfg.eps);
      rr.diagnostics["rc"] = rc;
      res = robust_sphere_learn(sample, oracle, rc, cfg.eps, inst.certified.c_lb,
                                inst.certified.c_ub, majority, cfg.t_per_group, algo_seed);
      rr.diagnostics["cluster_count"] = double(res.classifier.lc.clustering.num_clusters());
    } else if (cfg.algorithm == "planes") {
      double r = cfg.r > 0.0 ? cfg.r : inst.certified.scale_R / 2.0;
      double alpha = cfg.alpha > 0.0
                         ? cfg.alpha
                         : plane_detection_alpha(inst.d, int(inst.planes.size()), cfg.eps,
                                                 inst.certified.diameter, inst.certified.scale_R,
                                                 inst.certified.c_lb);
      double tau = cfg.tau > 0.0
                       ? cfg.tau
                       : 0.5 * alpha * half_ball_mass_bound(inst.d, r, inst.certified.c_lb);
      std::vector<double> lo, hi;
      inst.domain_box(lo, hi);
      PlaneDetectOptions opt;
      opt.k_directions = cfg.k_directions;
      opt.seed = algo_seed;
      opt.majority_mode = majority;
      opt.t_per_group = cfg.t_per_group;
      auto pres = plane_detection_learn(sample, oracle, r, tau, inst.num_classes(), lo, hi, opt);
      rr.diagnostics["plane_count"] = double(pres.planes.size());
      rr.diagnostics["cell_count"] = double(pres.classifier.cell_labels.size());
      res.classifier = std::move(pres.classifier);
      res.ledger = std::move(pres.ledger);
    } else {
      throw InvalidInput("unknown algorithm: " + cfg.algorithm);
    }

    rr.labels_used = oracle.query_count();
    if (res.ledger.total() != rr.labels_used)
      throw Error("internal: ledger total does not match the oracle meter");

    HeldOutSet heldout = draw_held_out(inst, cfg.heldout, heldout_seed);
    rr.error = estimate_error(res.classifier, heldout);
    if (cfg.eta > 0.0) {
      // error against noisy labels, reported alongside the f* error
      long wrong = 0;
      std::uint64_t noisy_seed = mix_seed(rr.seed, 5);
      for (int i = 0; i < heldout.pts.n; ++i) {
        int y = heldout.labels[i];
        double u = indexed_uniform(noisy_seed, std::uint64_t(i), 0);
        int L = res.classifier.n_classes;
        if (u < cfg.eta && L > 1) {
          double v = indexed_uniform(noisy_seed, std::uint64_t(i), 1);
          int shift = 1 + int(v * (L - 1));
          if (shift > L - 1) shift = L - 1;
          y = (y + shift) % L;
        }
        if (res.classifier.predict(heldout.pts.row(i)) != y) ++wrong;
      }
      rr.diagnostics["error_vs_noisy"] = double(wrong) / double(heldout.pts.n);
    }
  } catch (const std::exception& e) {
    rr.ok = false;
    rr.status = e.what();
    rr.error = std::nan("");
  }
  auto t1 = std::chrono::steady_clock::now();
  rr.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  return rr;
}

}  // namespace

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.repetitions < 1) throw InvalidInput("run_experiment: repetitions must be >= 1");
  std::string digest = config_digest(cfg);
  std::vector<RunResult> out;
  out.reserve(cfg.repetitions);
  for (int rep = 0; rep < cfg.repetitions; ++rep) out.push_back(run_one(cfg, digest, rep));
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void emit_report(const std::vector<RunResult>& results, const std::string& csv_path,
                 const std::string& summary_path) {
  std::ostringstream csv;
  csv << "config_digest,seed,kind,algorithm,d,n,labels_used,error,runtime_ms\n";
  for (const auto& r : results) {
    csv << r.config_digest << ',' << r.seed << ',' << r.kind << ',' << r.algorithm << ',' << r.d
        << ',' << r.n << ',' << r.labels_used << ',' << format_double(r.error) << ",0\n";
  }
  write_text_file(csv_path, csv.str());
  if (!summary_path.empty()) write_text_file(summary_path, summarize(results));
}

std::vector<RunResult> load_results_csv(const std::string& csv_path) {
  std::string text = read_text_file(csv_path);
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);  // header
  std::vector<RunResult> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    RunResult r;
    std::getline(ls, r.config_digest, ',');
    std::getline(ls, tok, ',');
    r.seed = std::stoull(tok);
    std::getline(ls, r.kind, ',');
    std::getline(ls, r.algorithm, ',');
    std::getline(ls, tok, ',');
    r.d = std::stoi(tok);
    std::getline(ls, tok, ',');
    r.n = std::stol(tok);
    std::getline(ls, tok, ',');
    r.labels_used = std::stol(tok);
    std::getline(ls, tok, ',');
    r.error = std::strtod(tok.c_str(), nullptr);
    std::getline(ls, tok, ',');
    r.runtime_ms = std::stol(tok);
    out.push_back(std::move(r));
  }
  return out;
}

std::string summarize(const std::vector<RunResult>& results) {
  // group by config digest
  std::map<std::string, std::vector<const RunResult*>> by_cfg;
  for (const auto& r : results) by_cfg[r.config_digest].push_back(&r);
  std::ostringstream os;
  os << "config_digest      runs  median_error  max_labels  success_fraction  median_runtime_ms\n";
  for (const auto& [digest, rs] : by_cfg) {
    std::vector<double> errs;
    std::vector<long> times;
    long max_labels = 0;
    int ok = 0;
    for (const auto* r : rs) {
      if (r->ok) {
        errs.push_back(r->error);
        ++ok;
      }
      times.push_back(r->runtime_ms);
      max_labels = std::max(max_labels, r->labels_used);
    }
    std::sort(errs.begin(), errs.end());
    std::sort(times.begin(), times.end());
    double med_err = errs.empty() ? std::nan("") : errs[errs.size() / 2];
    long med_time = times.empty() ? 0 : times[times.size() / 2];
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s  %4zu  %12.6g  %10ld  %16.4f  %17ld\n", digest.c_str(),
                  rs.size(), med_err, max_labels, double(ok) / double(rs.size()), med_time);
    os << buf;
  }
  return os.str();
}

}  // namespace outcode

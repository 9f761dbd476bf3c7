#include "outcode/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace outcode {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

namespace {

json certified_to_json(const Certified& c) {
  json j{{"margin_g", c.margin_g},
         {"b_min", c.b_min},
         {"scale_R", c.scale_R},
         {"beta", c.beta},
         {"c_lb", c.c_lb},
         {"c_ub", c.c_ub},
         {"support_volume", c.support_volume},
         {"diameter", c.diameter},
         {"thickness_C", c.thickness_C},
         {"level_lambda0", c.level_lambda0},
         {"radius_sigma0", c.radius_sigma0},
         {"component_count", c.component_count},
         {"vol_mc", c.vol_mc},
         {"vol_mc_se", c.vol_mc_se}};
  if (c.doubling_dimension) j["doubling_dimension"] = *c.doubling_dimension;
  return j;
}

Certified certified_from_json(const json& j) {
  Certified c;
  c.margin_g = j.at("margin_g").get<double>();
  c.b_min = j.at("b_min").get<double>();
  c.scale_R = j.at("scale_R").get<double>();
  c.beta = j.at("beta").get<double>();
  c.c_lb = j.at("c_lb").get<double>();
  c.c_ub = j.at("c_ub").get<double>();
  c.support_volume = j.at("support_volume").get<double>();
  c.diameter = j.at("diameter").get<double>();
  c.thickness_C = j.at("thickness_C").get<double>();
  c.level_lambda0 = j.at("level_lambda0").get<double>();
  c.radius_sigma0 = j.at("radius_sigma0").get<double>();
  c.component_count = j.at("component_count").get<int>();
  if (j.contains("doubling_dimension")) c.doubling_dimension = j["doubling_dimension"].get<double>();
  c.vol_mc = j.value("vol_mc", 0.0);
  c.vol_mc_se = j.value("vol_mc_se", 0.0);
  return c;
}

json planes_to_json(const std::vector<Hyperplane>& planes) {
  json arr = json::array();
  for (const auto& h : planes) arr.push_back(json{{"w", h.w}, {"b", h.b}});
  return arr;
}

std::vector<Hyperplane> planes_from_json(const json& arr) {
  std::vector<Hyperplane> planes;
  for (const auto& jh : arr) {
    Hyperplane h;
    h.w = jh.at("w").get<std::vector<double>>();
    h.b = jh.at("b").get<double>();
    planes.push_back(std::move(h));
  }
  return planes;
}

std::string shape_name(RegionShape s) {
  switch (s) {
    case RegionShape::ball: return "ball";
    case RegionShape::cube: return "cube";
    case RegionShape::patch: return "patch";
  }
  return "ball";
}

RegionShape shape_from_name(const std::string& s) {
  if (s == "ball") return RegionShape::ball;
  if (s == "cube") return RegionShape::cube;
  if (s == "patch") return RegionShape::patch;
  throw IoError("unknown region shape: " + s);
}

}  // namespace

std::string instance_to_json(const ProblemInstance& inst) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = to_string(inst.kind);
  j["d"] = inst.d;
  j["seed"] = inst.seed;
  j["planes"] = planes_to_json(inst.planes);
  json code = json::array();
  for (const auto& row : inst.code.rows) code.push_back(row.bits);
  j["code"] = code;
  j["certified"] = certified_to_json(inst.certified);
  if (inst.kind == InstanceKind::ecoc) {
    json centers = json::array();
    for (const auto& r : inst.regions) centers.push_back(r.center);
    j["regions"] = {{"shape", shape_name(inst.shape)},
                    {"radius", inst.region_radius},
                    {"centers", centers},
                    {"patch_axes", inst.patch_axes}};
  } else if (inst.kind == InstanceKind::boundary_features) {
    json witnesses = json::array();
    for (const auto& [k, c] : inst.layout.witnesses)
      witnesses.push_back(json{{"plane", k}, {"center", c}});
    j["layout"] = {{"name", inst.layout.name},
                   {"cells_per_axis", inst.layout.cells_per_axis},
                   {"domain_lo", inst.layout.domain_lo},
                   {"domain_hi", inst.layout.domain_hi},
                   {"occupied", inst.layout.occupied},
                   {"witnesses", witnesses}};
  }
  return j.dump(2) + "\n";
}

ProblemInstance instance_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("schema_version").get<int>() != 1) throw IoError("unsupported instance schema version");
  ProblemInstance inst;
  inst.kind = instance_kind_from_string(j.at("kind").get<std::string>());
  inst.d = j.at("d").get<int>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.planes = planes_from_json(j.at("planes"));
  for (const auto& row : j.at("code")) inst.code.rows.push_back(Codeword(row.get<std::vector<int>>()));
  inst.code.validate();
  inst.certified = certified_from_json(j.at("certified"));
  if (inst.kind == InstanceKind::ecoc) {
    const auto& jr = j.at("regions");
    inst.shape = shape_from_name(jr.at("shape").get<std::string>());
    inst.region_radius = jr.at("radius").get<double>();
    for (const auto& c : jr.at("centers")) inst.regions.push_back({c.get<std::vector<double>>()});
    inst.patch_axes = jr.at("patch_axes").get<std::vector<int>>();
  } else if (inst.kind == InstanceKind::boundary_features) {
    const auto& jl = j.at("layout");
    inst.layout.name = jl.at("name").get<std::string>();
    inst.layout.cells_per_axis = jl.at("cells_per_axis").get<int>();
    inst.layout.domain_lo = jl.at("domain_lo").get<std::vector<double>>();
    inst.layout.domain_hi = jl.at("domain_hi").get<std::vector<double>>();
    inst.layout.occupied = jl.at("occupied").get<std::vector<std::vector<int>>>();
    for (const auto& w : jl.at("witnesses"))
      inst.layout.witnesses.emplace_back(w.at("plane").get<int>(),
                                         w.at("center").get<std::vector<double>>());
  }
  return inst;
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  write_text_file(path, instance_to_json(inst));
}

ProblemInstance load_instance(const std::string& path) {
  return instance_from_json(read_text_file(path));
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void save_sample_csv(const Sample& sample, const std::string& path,
                     const std::vector<int>* labels) {
  std::ostringstream os;
  for (int a = 0; a < sample.pts.d; ++a) os << (a ? "," : "") << "x" << a;
  if (labels) os << ",label";
  os << "\n";
  for (int i = 0; i < sample.pts.n; ++i) {
    for (int a = 0; a < sample.pts.d; ++a) os << (a ? "," : "") << g17(sample.pts.row(i)[a]);
    if (labels) os << ',' << (*labels)[i];
    os << "\n";
  }
  write_text_file(path, os.str());
}

Points load_points_csv(const std::string& path, std::vector<int>* labels) {
  std::istringstream is(read_text_file(path));
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty CSV: " + path);
  int d = 0;
  bool has_label = false;
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) {
      if (col == "label")
        has_label = true;
      else
        ++d;
    }
  }
  std::vector<double> data;
  std::vector<int> ls;
  int n = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::string tok;
    for (int a = 0; a < d; ++a) {
      if (!std::getline(rs, tok, ',')) throw IoError("short CSV row in " + path);
      data.push_back(std::strtod(tok.c_str(), nullptr));
    }
    if (has_label) {
      if (!std::getline(rs, tok, ',')) throw IoError("missing label in " + path);
      ls.push_back(std::stoi(tok));
    }
    ++n;
  }
  Points pts(n, d);
  pts.a = std::move(data);
  if (labels) *labels = std::move(ls);
  return pts;
}

void save_ledger_csv(const QueryLedger& ledger, const std::string& path) {
  std::ostringstream os;
  os << "step,point_index,label,purpose\n";
  for (const auto& e : ledger.entries)
    os << e.step << ',' << e.point_index << ',' << e.label << ',' << e.purpose << "\n";
  for (const auto& n : ledger.notes) os << "# note: " << n << "\n";
  write_text_file(path, os.str());
}

// ---------------------------------------------------------------------------
// Classifier files
// ---------------------------------------------------------------------------

namespace {

json clustering_to_json(const LabeledClustering& lc) {
  json j;
  j["metric"] = lc.clustering.metric == Metric::angular ? "angular" : "euclidean";
  j["radius"] = lc.clustering.radius;
  j["point_index"] = lc.clustering.point_index;
  j["members"] = lc.clustering.members;
  j["labels"] = lc.labels;
  j["points"] = {{"n", lc.points.n}, {"d", lc.points.d}, {"a", lc.points.a}};
  return j;
}

LabeledClustering clustering_from_json(const json& j) {
  LabeledClustering lc;
  lc.clustering.metric = j.at("metric").get<std::string>() == "angular" ? Metric::angular
                                                                        : Metric::euclidean;
  lc.clustering.radius = j.at("radius").get<double>();
  lc.clustering.point_index = j.at("point_index").get<std::vector<int>>();
  lc.clustering.members = j.at("members").get<std::vector<std::vector<int>>>();
  lc.labels = j.at("labels").get<std::vector<int>>();
  lc.clustering.sizes.clear();
  for (const auto& m : lc.clustering.members) lc.clustering.sizes.push_back(int(m.size()));
  const auto& jp = j.at("points");
  lc.points.n = jp.at("n").get<int>();
  lc.points.d = jp.at("d").get<int>();
  lc.points.a = jp.at("a").get<std::vector<double>>();
  lc.label_queries.assign(lc.clustering.members.size(), {});
  return lc;
}

std::string kind_name(Classifier::Kind k) {
  switch (k) {
    case Classifier::Kind::single_linkage: return "single_linkage";
    case Classifier::Kind::hierarchical: return "hierarchical";
    case Classifier::Kind::robust_sphere: return "robust_sphere";
    case Classifier::Kind::plane_detection: return "plane_detection";
  }
  return "single_linkage";
}

Classifier::Kind kind_from_name(const std::string& s) {
  if (s == "single_linkage") return Classifier::Kind::single_linkage;
  if (s == "hierarchical") return Classifier::Kind::hierarchical;
  if (s == "robust_sphere") return Classifier::Kind::robust_sphere;
  if (s == "plane_detection") return Classifier::Kind::plane_detection;
  throw IoError("unknown classifier kind: " + s);
}

}  // namespace

void save_classifier(const Classifier& clf, const std::string& path) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = kind_name(clf.kind);
  j["d"] = clf.d;
  j["n_classes"] = clf.n_classes;
  if (clf.kind == Classifier::Kind::plane_detection) {
    json planes = json::array();
    for (const auto& e : clf.planes.entries)
      planes.push_back(json{{"center", e.center},
                            {"direction", e.direction},
                            {"radius", e.radius},
                            {"count", e.count}});
    j["planes"] = planes;
    j["cell_labels"] = clf.cell_labels;
    j["unknown_cell_seed"] = clf.unknown_cell_seed;
  } else {
    j["clustering"] = clustering_to_json(clf.lc);
  }
  write_text_file(path, j.dump(2) + "\n");
}

Classifier load_classifier(const std::string& path) {
  json j = json::parse(read_text_file(path));
  Classifier clf;
  clf.kind = kind_from_name(j.at("kind").get<std::string>());
  clf.d = j.at("d").get<int>();
  clf.n_classes = j.at("n_classes").get<int>();
  if (clf.kind == Classifier::Kind::plane_detection) {
    for (const auto& jp : j.at("planes")) {
      PlaneSet::Entry e;
      e.center = jp.at("center").get<std::vector<double>>();
      e.direction = jp.at("direction").get<std::vector<double>>();
      e.radius = jp.at("radius").get<double>();
      e.count = jp.at("count").get<long>();
      clf.planes.entries.push_back(std::move(e));
    }
    clf.cell_labels = j.at("cell_labels").get<std::map<std::string, int>>();
    clf.unknown_cell_seed = j.at("unknown_cell_seed").get<std::uint64_t>();
  } else {
    clf.lc = clustering_from_json(j.at("clustering"));
  }
  return clf;
}

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

namespace {

json instance_spec_to_json(const InstanceSpec& s) {
  return json{{"kind", s.kind},        {"d", s.d},
              {"n_components", s.n_components}, {"g", s.g},
              {"d_intrinsic", s.d_intrinsic},   {"shape", s.shape},
              {"L", s.L},              {"b_min", s.b_min},
              {"layout", s.layout},    {"R", s.R},
              {"seed", s.seed}};
}

InstanceSpec instance_spec_from_json(const json& j) {
  InstanceSpec s;
  s.kind = j.at("kind").get<std::string>();
  s.d = j.value("d", 2);
  s.n_components = j.value("n_components", 2);
  s.g = j.value("g", 0.3);
  s.d_intrinsic = j.value("d_intrinsic", 1);
  s.shape = j.value("shape", std::string("ball"));
  s.L = j.value("L", 2);
  s.b_min = j.value("b_min", 0.5);
  s.layout = j.value("layout", std::string("staircase2d"));
  s.R = j.value("R", 0.1);
  s.seed = j.value("seed", std::uint64_t(1));
  return s;
}

json config_to_json_obj(const ExperimentConfig& cfg) {
  return json{{"schema_version", 1},
              {"instance", instance_spec_to_json(cfg.instance)},
              {"n", cfg.n},
              {"algorithm", cfg.algorithm},
              {"rc", cfg.rc},
              {"eps", cfg.eps},
              {"t", cfg.t},
              {"r", cfg.r},
              {"tau", cfg.tau},
              {"alpha", cfg.alpha},
              {"k_directions", cfg.k_directions},
              {"eta", cfg.eta},
              {"t_per_group", cfg.t_per_group},
              {"heldout", cfg.heldout},
              {"repetitions", cfg.repetitions},
              {"seed_base", cfg.seed_base}};
}

ExperimentConfig config_from_json_obj(const json& j) {
  ExperimentConfig cfg;
  cfg.instance = instance_spec_from_json(j.at("instance"));
  cfg.n = j.value("n", 1000);
  cfg.algorithm = j.at("algorithm").get<std::string>();
  cfg.rc = j.value("rc", 0.0);
  cfg.eps = j.value("eps", 0.1);
  cfg.t = j.value("t", 10);
  cfg.r = j.value("r", 0.0);
  cfg.tau = j.value("tau", 0.0);
  cfg.alpha = j.value("alpha", 0.0);
  cfg.k_directions = j.value("k_directions", 64);
  cfg.eta = j.value("eta", 0.0);
  cfg.t_per_group = j.value("t_per_group", 1);
  cfg.heldout = j.value("heldout", 10000);
  cfg.repetitions = j.value("repetitions", 1);
  cfg.seed_base = j.value("seed_base", std::uint64_t(1));
  return cfg;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
  return config_to_json_obj(cfg).dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  return config_from_json_obj(json::parse(text));
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  write_text_file(path, config_to_json(cfg));
}

ExperimentConfig load_config(const std::string& path) {
  return config_from_json(read_text_file(path));
}

std::vector<ExperimentConfig> load_config_sweep(const std::string& path) {
  json j = json::parse(read_text_file(path));
  std::vector<ExperimentConfig> out;
  if (j.contains("experiments")) {
    for (const auto& je : j.at("experiments")) out.push_back(config_from_json_obj(je));
  } else {
    out.push_back(config_from_json_obj(j));
  }
  return out;
}

}  // namespace outcode

#pragma once

#include <string>
#include <vector>

#include "outcode/harness.hpp"
#include "outcode/instance.hpp"
#include "outcode/learners.hpp"

namespace outcode {

// Instance files: JSON with a schema_version field; numeric fields round-trip
// exactly (shortest-round-trip double formatting).
void save_instance(const ProblemInstance& inst, const std::string& path);
ProblemInstance load_instance(const std::string& path);
std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& text);

// Sample CSV: header x0,...,x{d-1}; labeled files append a label column.
void save_sample_csv(const Sample& sample, const std::string& path,
                     const std::vector<int>* labels = nullptr);
Points load_points_csv(const std::string& path, std::vector<int>* labels = nullptr);

// Ledger CSV: step,point_index,label,purpose.
void save_ledger_csv(const QueryLedger& ledger, const std::string& path);

// Classifier files: kind-tagged JSON sufficient to reload and predict.
void save_classifier(const Classifier& clf, const std::string& path);
Classifier load_classifier(const std::string& path);

// Experiment configs share the instance-file format (JSON).
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
void save_config(const ExperimentConfig& cfg, const std::string& path);
ExperimentConfig load_config(const std::string& path);
std::vector<ExperimentConfig> load_config_sweep(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace outcode

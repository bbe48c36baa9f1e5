#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcsnet/crs.hpp"
#include "fcsnet/coselnet.hpp"
#include "fcsnet/ga.hpp"
#include "fcsnet/subtype.hpp"
#include "fcsnet/synth.hpp"

namespace fcsnet {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Shared stage configuration (JSON file with sections ga / ml / network /
// crs / seed). Unknown keys are rejected so typos fail loudly.
// ---------------------------------------------------------------------------

struct NetworkConfig {
  std::size_t tau_occ = 5;
  double tau_cos = 0.09;
};

struct PipelineConfig {
  GAConfig ga;          // Table-style GA parameters; fitness model filled from ml
  ModelSpec ml;         // hyperparameters for all three model kinds
  NetworkConfig network;
  CRSConfig crs;
  std::uint64_t seed = 0;
};

PipelineConfig parse_pipeline_config(const json& doc);
PipelineConfig load_pipeline_config(const std::string& path);
json pipeline_config_to_json(const PipelineConfig& config);

// ---------------------------------------------------------------------------
// Artifact file schemas.
// ---------------------------------------------------------------------------

struct SubsetRecord {
  std::uint64_t seed = 0;
  double best_fitness = 0.0;
  std::vector<std::string> feature_ids;
  int generations = 0;
  std::size_t evaluations = 0;
};

void write_subsets_jsonl(const std::string& path, const std::vector<SubsetRecord>& records);
std::vector<SubsetRecord> read_subsets_jsonl(const std::string& path);

struct CommunitiesFile {
  std::vector<Community> communities;  // ordered by id
  double modularity = 0.0;
  std::size_t tau_occ = 1;
  double tau_cos = 0.0;
};

void write_communities_json(const std::string& path, const CommunitiesFile& file);
CommunitiesFile read_communities_json(const std::string& path);

struct CrsFile {
  std::vector<std::string> sample_ids;
  std::vector<std::string> columns;
  Matrix scores;
  std::optional<std::vector<std::uint8_t>> labels;
};

void write_crs_tsv(const std::string& path, const CRSMatrix& matrix,
                   const std::vector<std::string>& sample_ids,
                   const std::vector<std::uint8_t>* labels);
CrsFile read_crs_tsv(const std::string& path);

void write_edges_tsv(const std::string& path, const CoSelectionGraph& graph,
                     const std::vector<std::string>& feature_ids);
void write_sweep_tsv(const std::string& path, const std::vector<SweepRow>& rows);

/// Sidecar provenance record at <artifact>.prov.json: tool version, command,
/// seed, config hash, input-file hashes. Deliberately timestamp-free so
/// re-runs stay byte-identical.
void write_provenance(const std::string& artifact_path, const std::string& command,
                      std::uint64_t seed, const json& config,
                      const std::vector<std::string>& input_paths);

// ---------------------------------------------------------------------------
// Composite experiments.
// ---------------------------------------------------------------------------

enum class SimScale { desk, paper };

struct ReproSimOptions {
  SimScale scale = SimScale::desk;
  std::uint64_t seed = 0;
  int n_threads = 0;  // 0 = hardware concurrency
  /// Restrict to one fitness kind ("lr"/"dt"); empty = run both.
  std::string only_fitness;
};

/// Full simulation study: plant a pure two-locus interaction, run the GA
/// batch under each fitness kind, assemble the co-selection statistics for
/// the functional pair, and report co-occurrence, cosine and cosine rank.
json repro_sim(const ReproSimOptions& options);

std::string repro_sim_summary(const json& report);

struct OverfitOptions {
  double test_fraction = 0.2;
  int n_runs = 60;
  GAConfig ga;
  ModelSpec crs_model;
  CRSConfig crs;
  NetworkConfig network;
  std::uint64_t seed = 0;
  int n_threads = 0;
};

/// Holdout split, feature selection and community detection on the training
/// side only, then CRS transfer to the held-out samples with per-community
/// AUC and Welch t against the held-out labels.
json overfit_analysis(const GenotypeDataset& dataset, const OverfitOptions& options);

}  // namespace fcsnet

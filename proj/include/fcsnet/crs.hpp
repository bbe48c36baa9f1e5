#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fcsnet/models.hpp"

namespace fcsnet {

struct CRSConfig {
  int n_resamples = 1000;
  double sample_fraction = 0.8;
  std::size_t min_community_size = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

/// A detected feature community, carried by feature id so CRS computation can
/// bridge datasets with different column orders.
struct Community {
  std::size_t id = 0;
  std::vector<std::string> feature_ids;
};

/// Per-individual community risk scores: column c is the mean predicted
/// disease probability over resample models trained on community c's
/// features. Columns are labelled C1, C2, ... by descending community size.
struct CRSMatrix {
  Matrix scores;  // target samples x included communities, entries in [0,1]
  std::vector<std::string> community_labels;
  std::vector<std::size_t> community_ids;
  std::vector<std::size_t> community_sizes;
  std::string model_kind;
  std::vector<std::size_t> excluded_ids;  // communities under min_community_size
};

/// Train `spec` models on stratified sample_fraction resamples of the
/// training cohort, one model per (community, resample), and average the
/// probabilistic outputs on the target cohort. Deterministic for a fixed
/// seed and independent of worker count.
CRSMatrix compute_crs(const GenotypeDataset& train, const GenotypeDataset& target,
                      const std::vector<Community>& communities, const ModelSpec& spec,
                      const CRSConfig& config, int n_threads = 1);

std::vector<double> max_crs(const CRSMatrix& matrix);

struct CommunityEval {
  std::string label;
  double auc = 0.0;
  double t = 0.0;
  double p = 1.0;
};

/// Per-community AUC and Welch t (cases vs controls) against the target
/// labels, plus the same for the row-maximum column labelled "Max".
std::vector<CommunityEval> evaluate_crs(const CRSMatrix& matrix,
                                        const std::vector<std::uint8_t>& labels);

}  // namespace fcsnet

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fcsnet/common.hpp"

namespace fcsnet {

/// Case-control genotype table. Rows are samples, columns are features,
/// entries are minor-allele counts in {0,1,2}. Immutable after load.
class GenotypeDataset {
 public:
  GenotypeDataset() = default;
  GenotypeDataset(std::vector<std::string> feature_ids, std::vector<std::string> sample_ids,
                  std::vector<std::uint8_t> genotypes, std::vector<std::uint8_t> labels);

  std::size_t n_samples() const { return sample_ids_.size(); }
  std::size_t n_features() const { return feature_ids_.size(); }

  std::uint8_t genotype(std::size_t sample, std::size_t feature) const {
    return genotypes_[sample * feature_ids_.size() + feature];
  }
  std::uint8_t label(std::size_t sample) const { return labels_[sample]; }

  const std::vector<std::string>& feature_ids() const { return feature_ids_; }
  const std::vector<std::string>& sample_ids() const { return sample_ids_; }
  const std::vector<std::uint8_t>& labels() const { return labels_; }
  const std::uint8_t* sample_row(std::size_t sample) const {
    return genotypes_.data() + sample * feature_ids_.size();
  }

  /// Column index for a feature id; throws ValidationError when unknown.
  std::size_t feature_index(const std::string& id) const;

  std::size_t count_label(std::uint8_t value) const;

  /// New dataset restricted to the given sample rows (order preserved).
  GenotypeDataset subset_samples(const std::vector<std::size_t>& rows) const;

 private:
  void validate() const;

  std::vector<std::string> feature_ids_;
  std::vector<std::string> sample_ids_;
  std::vector<std::uint8_t> genotypes_;  // row-major, n_samples x n_features
  std::vector<std::uint8_t> labels_;
};

/// TSV with header: sample_id, label, then one column per feature.
GenotypeDataset load_dataset(const std::string& path);
void save_dataset(const GenotypeDataset& dataset, const std::string& path);

struct FoldSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified k-fold over the label vector. Pure function of
/// (labels, k, seed); fold class proportions are within one sample of the
/// global proportions.
std::vector<FoldSplit> stratified_kfold(const std::vector<std::uint8_t>& labels, int k,
                                        std::uint64_t seed);

struct HoldoutSplit {
  GenotypeDataset train;
  GenotypeDataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

HoldoutSplit holdout_split(const GenotypeDataset& dataset, double test_fraction,
                           std::uint64_t seed, bool stratified = true);

}  // namespace fcsnet

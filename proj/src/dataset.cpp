#include "fcsnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fcsnet {

GenotypeDataset::GenotypeDataset(std::vector<std::string> feature_ids,
                                 std::vector<std::string> sample_ids,
                                 std::vector<std::uint8_t> genotypes,
                                 std::vector<std::uint8_t> labels)
    : feature_ids_(std::move(feature_ids)),
      sample_ids_(std::move(sample_ids)),
      genotypes_(std::move(genotypes)),
      labels_(std::move(labels)) {
  validate();
}

void GenotypeDataset::validate() const {
  if (sample_ids_.size() != labels_.size())
    throw ValidationError("sample_ids and labels length mismatch");
  if (genotypes_.size() != sample_ids_.size() * feature_ids_.size())
    throw ValidationError("genotype matrix shape mismatch");
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] > 1)
      throw ValidationError("label for sample '" + sample_ids_[i] + "' is not 0 or 1");
  for (std::size_t s = 0; s < sample_ids_.size(); ++s)
    for (std::size_t f = 0; f < feature_ids_.size(); ++f)
      if (genotype(s, f) > 2)
        throw ValidationError("genotype at sample '" + sample_ids_[s] + "', feature '" +
                              feature_ids_[f] + "' is not 0, 1, or 2");
  std::unordered_set<std::string> seen;
  for (const auto& id : feature_ids_)
    if (!seen.insert(id).second) throw ValidationError("duplicate feature id: " + id);
  seen.clear();
  for (const auto& id : sample_ids_)
    if (!seen.insert(id).second) throw ValidationError("duplicate sample id: " + id);
}

std::size_t GenotypeDataset::feature_index(const std::string& id) const {
  auto it = std::find(feature_ids_.begin(), feature_ids_.end(), id);
  if (it == feature_ids_.end()) throw ValidationError("unknown feature id: " + id);
  return static_cast<std::size_t>(it - feature_ids_.begin());
}

std::size_t GenotypeDataset::count_label(std::uint8_t value) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), value));
}

GenotypeDataset GenotypeDataset::subset_samples(const std::vector<std::size_t>& rows) const {
  std::vector<std::string> sids;
  std::vector<std::uint8_t> geno;
  std::vector<std::uint8_t> labs;
  sids.reserve(rows.size());
  geno.reserve(rows.size() * n_features());
  labs.reserve(rows.size());
  for (std::size_t r : rows) {
    sids.push_back(sample_ids_[r]);
    labs.push_back(labels_[r]);
    const std::uint8_t* row = sample_row(r);
    geno.insert(geno.end(), row, row + n_features());
  }
  return GenotypeDataset(feature_ids_, std::move(sids), std::move(geno), std::move(labs));
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

GenotypeDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty dataset file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto header = split_tabs(line);
  if (header.size() < 2 || header[0] != "sample_id" || header[1] != "label")
    throw ValidationError("dataset header must start with 'sample_id\\tlabel': " + path);
  std::vector<std::string> feature_ids(header.begin() + 2, header.end());

  std::vector<std::string> sample_ids;
  std::vector<std::uint8_t> labels;
  std::vector<std::uint8_t> genotypes;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_tabs(line);
    if (cells.size() != header.size())
      throw ValidationError("ragged row at line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " columns, got " +
                            std::to_string(cells.size()));
    sample_ids.push_back(cells[0]);
    if (cells[1] == "0")
      labels.push_back(0);
    else if (cells[1] == "1")
      labels.push_back(1);
    else
      throw ValidationError("label at line " + std::to_string(line_no) + " is '" + cells[1] +
                            "', expected 0 or 1");
    for (std::size_t f = 0; f < feature_ids.size(); ++f) {
      const std::string& cell = cells[f + 2];
      if (cell == "0")
        genotypes.push_back(0);
      else if (cell == "1")
        genotypes.push_back(1);
      else if (cell == "2")
        genotypes.push_back(2);
      else
        throw ValidationError("genotype at line " + std::to_string(line_no) + ", feature '" +
                              feature_ids[f] + "' is '" + cell + "', expected 0, 1, or 2");
    }
  }
  if (sample_ids.empty()) throw ValidationError("no samples in dataset file: " + path);
  return GenotypeDataset(std::move(feature_ids), std::move(sample_ids), std::move(genotypes),
                         std::move(labels));
}

void save_dataset(const GenotypeDataset& dataset, const std::string& path) {
  std::ostringstream out;
  out << "sample_id\tlabel";
  for (const auto& id : dataset.feature_ids()) out << '\t' << id;
  out << '\n';
  for (std::size_t s = 0; s < dataset.n_samples(); ++s) {
    out << dataset.sample_ids()[s] << '\t' << static_cast<int>(dataset.label(s));
    const std::uint8_t* row = dataset.sample_row(s);
    for (std::size_t f = 0; f < dataset.n_features(); ++f)
      out << '\t' << static_cast<int>(row[f]);
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<FoldSplit> stratified_kfold(const std::vector<std::uint8_t>& labels, int k,
                                        std::uint64_t seed) {
  if (k < 2) throw ValidationError("k must be >= 2");
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (int c = 0; c < 2; ++c)
    if (by_class[c].size() < static_cast<std::size_t>(k))
      throw ValidationError("class " + std::to_string(c) + " has " +
                            std::to_string(by_class[c].size()) + " samples, fewer than k=" +
                            std::to_string(k));

  Rng rng(derive_seed(seed, hash_string("kfold")));
  std::vector<std::vector<std::size_t>> fold_members(k);
  for (int c = 0; c < 2; ++c) {
    rng.shuffle(by_class[c]);
    for (std::size_t i = 0; i < by_class[c].size(); ++i)
      fold_members[i % k].push_back(by_class[c][i]);
  }

  std::vector<FoldSplit> folds(k);
  for (int f = 0; f < k; ++f) {
    auto& test = fold_members[f];
    std::sort(test.begin(), test.end());
    folds[f].test = test;
    for (int g = 0; g < k; ++g) {
      if (g == f) continue;
      folds[f].train.insert(folds[f].train.end(), fold_members[g].begin(), fold_members[g].end());
    }
    std::sort(folds[f].train.begin(), folds[f].train.end());
  }
  return folds;
}

HoldoutSplit holdout_split(const GenotypeDataset& dataset, double test_fraction,
                           std::uint64_t seed, bool stratified) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ValidationError("test_fraction must be in (0,1)");

  Rng rng(derive_seed(seed, hash_string("holdout")));
  std::vector<std::size_t> test_rows;
  if (stratified) {
    std::vector<std::vector<std::size_t>> by_class(2);
    for (std::size_t i = 0; i < dataset.n_samples(); ++i)
      by_class[dataset.label(i)].push_back(i);
    for (auto& idx : by_class) {
      rng.shuffle(idx);
      auto take = static_cast<std::size_t>(std::llround(test_fraction * idx.size()));
      test_rows.insert(test_rows.end(), idx.begin(), idx.begin() + take);
    }
  } else {
    std::vector<std::size_t> idx(dataset.n_samples());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);
    auto take = static_cast<std::size_t>(std::llround(test_fraction * idx.size()));
    test_rows.assign(idx.begin(), idx.begin() + take);
  }
  std::sort(test_rows.begin(), test_rows.end());

  std::vector<std::size_t> train_rows;
  std::vector<bool> in_test(dataset.n_samples(), false);
  for (std::size_t r : test_rows) in_test[r] = true;
  for (std::size_t i = 0; i < dataset.n_samples(); ++i)
    if (!in_test[i]) train_rows.push_back(i);

  if (test_rows.empty() || train_rows.empty())
    throw ValidationError("holdout split produced an empty side");

  HoldoutSplit split;
  split.train = dataset.subset_samples(train_rows);
  split.test = dataset.subset_samples(test_rows);
  split.train_rows = std::move(train_rows);
  split.test_rows = std::move(test_rows);
  return split;
}

}  // namespace fcsnet

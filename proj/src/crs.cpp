#include "fcsnet/crs.hpp"

#include <algorithm>
#include <cmath>

namespace fcsnet {

void CRSConfig::validate() const {
  if (n_resamples < 1) throw ValidationError("n_resamples must be >= 1");
  if (!(sample_fraction > 0.0 && sample_fraction < 1.0))
    throw ValidationError("sample_fraction must be in (0,1)");
  if (min_community_size < 1) throw ValidationError("min_community_size must be >= 1");
}

namespace {

std::vector<std::size_t> stratified_sample(const std::vector<std::uint8_t>& labels,
                                           double fraction, Rng& rng) {
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::vector<std::size_t> rows;
  for (auto& idx : by_class) {
    if (idx.empty()) continue;
    rng.shuffle(idx);
    auto take = static_cast<std::size_t>(std::llround(fraction * idx.size()));
    take = std::clamp<std::size_t>(take, 1, idx.size());
    rows.insert(rows.end(), idx.begin(), idx.begin() + take);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

CRSMatrix compute_crs(const GenotypeDataset& train, const GenotypeDataset& target,
                      const std::vector<Community>& communities, const ModelSpec& spec,
                      const CRSConfig& config, int n_threads) {
  config.validate();
  spec.validate();
  if (communities.empty()) throw ValidationError("no communities given");
  if (train.count_label(0) == 0 || train.count_label(1) == 0)
    throw ValidationError("training cohort must contain both classes");

  std::vector<const Community*> included;
  CRSMatrix out;
  for (const auto& c : communities) {
    if (c.feature_ids.size() >= config.min_community_size)
      included.push_back(&c);
    else
      out.excluded_ids.push_back(c.id);
  }
  if (included.empty())
    throw ValidationError("no community meets min_community_size = " +
                          std::to_string(config.min_community_size));
  std::sort(included.begin(), included.end(), [](const Community* a, const Community* b) {
    if (a->feature_ids.size() != b->feature_ids.size())
      return a->feature_ids.size() > b->feature_ids.size();
    return a->id < b->id;
  });

  out.model_kind = model_kind_name(spec.kind);
  out.scores = Matrix(target.n_samples(), included.size());

  const auto n_r = static_cast<std::size_t>(config.n_resamples);
  for (std::size_t col = 0; col < included.size(); ++col) {
    const Community& community = *included[col];
    out.community_labels.push_back("C" + std::to_string(col + 1));
    out.community_ids.push_back(community.id);
    out.community_sizes.push_back(community.feature_ids.size());

    std::vector<std::size_t> train_cols, target_cols;
    for (const auto& id : community.feature_ids) {
      train_cols.push_back(train.feature_index(id));
      target_cols.push_back(target.feature_index(id));
    }
    const GenoMatrix Xtrain = extract_columns(train, train_cols);
    const GenoMatrix Xtarget = extract_columns(target, target_cols);

    // one prediction row per resample; summed in resample order afterwards so
    // the result does not depend on the worker count
    Matrix resample_scores(n_r, target.n_samples());
    parallel_for(n_r, n_threads, [&](std::size_t r) {
      const std::uint64_t rs = config.seed + r + 1000003ULL * col;
      Rng rng(derive_seed(rs, hash_string("crs-resample")));
      const auto rows = stratified_sample(train.labels(), config.sample_fraction, rng);
      const GenoMatrix Xr = gather_rows(Xtrain, rows);
      const auto yr = gather(train.labels(), rows);
      FittedModel model = fit(spec, Xr, yr, derive_seed(rs, hash_string("crs-fit")));
      const auto probs = predict_proba(model, Xtarget);
      std::copy(probs.begin(), probs.end(), resample_scores.row(r));
    });

    for (std::size_t i = 0; i < target.n_samples(); ++i) {
      double sum = 0.0;
      for (std::size_t r = 0; r < n_r; ++r) sum += resample_scores.at(r, i);
      out.scores.at(i, col) = sum / static_cast<double>(n_r);
    }
  }
  return out;
}

std::vector<double> max_crs(const CRSMatrix& matrix) {
  if (matrix.scores.cols == 0) throw ValidationError("CRS matrix has no community columns");
  std::vector<double> out(matrix.scores.rows, 0.0);
  for (std::size_t i = 0; i < matrix.scores.rows; ++i) {
    const double* row = matrix.scores.row(i);
    out[i] = *std::max_element(row, row + matrix.scores.cols);
  }
  return out;
}

namespace {

CommunityEval eval_column(const std::string& label, const std::vector<double>& column,
                          const std::vector<std::uint8_t>& labels) {
  std::vector<double> cases, controls;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] ? cases : controls).push_back(column[i]);
  const WelchT welch = t_statistic(cases, controls);
  return {label, auc_roc(column, labels), welch.t, welch.p};
}

}  // namespace

std::vector<CommunityEval> evaluate_crs(const CRSMatrix& matrix,
                                        const std::vector<std::uint8_t>& labels) {
  if (labels.size() != matrix.scores.rows)
    throw ValidationError("label vector does not match CRS row count");
  std::vector<CommunityEval> out;
  std::vector<double> column(matrix.scores.rows);
  for (std::size_t c = 0; c < matrix.scores.cols; ++c) {
    for (std::size_t i = 0; i < matrix.scores.rows; ++i) column[i] = matrix.scores.at(i, c);
    out.push_back(eval_column(matrix.community_labels[c], column, labels));
  }
  out.push_back(eval_column("Max", max_crs(matrix), labels));
  return out;
}

}  // namespace fcsnet

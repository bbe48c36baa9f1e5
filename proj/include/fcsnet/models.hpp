#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fcsnet/dataset.hpp"

namespace fcsnet {

// All models consume additive genotype codes {0,1,2}; no one-hot encoding.

struct GenoMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> data;

  GenoMatrix() = default;
  GenoMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  std::uint8_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::uint8_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const std::uint8_t* row(std::size_t r) const { return data.data() + r * cols; }
};

GenoMatrix extract_columns(const GenotypeDataset& dataset, const std::vector<std::size_t>& cols);
GenoMatrix gather_rows(const GenoMatrix& m, const std::vector<std::size_t>& rows);

template <typename T>
std::vector<T> gather(const std::vector<T>& v, const std::vector<std::size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Model kinds and hyperparameters.
// ---------------------------------------------------------------------------

enum class ModelKind { logistic_regression, decision_tree, random_forest };

ModelKind parse_model_kind(const std::string& name);
std::string model_kind_name(ModelKind kind);

struct LogisticParams {
  double l2_penalty = 1.0;
  int max_iterations = 500;
  double convergence_tol = 1e-6;
};

struct TreeParams {
  int max_depth = 5;          // 0 = single leaf
  int min_samples_leaf = 5;
};

enum class FeatureSubsample { all, sqrt };

struct ForestParams {
  int n_trees = 100;
  TreeParams tree;
  bool bootstrap = true;
  FeatureSubsample subsample = FeatureSubsample::sqrt;
};

struct ModelSpec {
  ModelKind kind = ModelKind::decision_tree;
  LogisticParams lr;
  TreeParams tree;
  ForestParams forest;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Fitted models.
// ---------------------------------------------------------------------------

struct LogisticModel {
  std::vector<double> weights;
  double intercept = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct TreeNode {
  // Internal node: feature >= 0, goes left when x[feature] <= threshold.
  // Leaf: feature == -1, p1 is the training class-1 fraction.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double p1 = 0.0;
  std::size_t n_samples = 0;
  double gini = 0.0;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct ForestModel {
  std::vector<TreeModel> trees;
};

struct FittedModel {
  ModelKind kind = ModelKind::decision_tree;
  /// Dataset column indices the model was trained on, in training order.
  std::vector<std::size_t> feature_index_map;
  /// Single-class training data: fall back to a constant prior predictor.
  bool degenerate = false;
  double prior = 0.0;
  std::variant<LogisticModel, TreeModel, ForestModel> impl;

  /// Dataset column indices that appear in at least one split (trees and
  /// forests); the whole feature_index_map for logistic regression.
  std::vector<std::size_t> used_features() const;
};

FittedModel fit(const ModelSpec& spec, const GenoMatrix& X, const std::vector<std::uint8_t>& y,
                std::uint64_t seed, std::vector<std::size_t> feature_index_map = {});

std::vector<double> predict_proba(const FittedModel& model, const GenoMatrix& X);

// Exposed for the finite-difference gradient oracle: penalized mean logistic
// loss and its analytic gradient. params = (weights..., intercept).
double logistic_objective(const GenoMatrix& X, const std::vector<std::uint8_t>& y,
                          const std::vector<double>& params, double l2_penalty);
std::vector<double> logistic_gradient(const GenoMatrix& X, const std::vector<std::uint8_t>& y,
                                      const std::vector<double>& params, double l2_penalty);

// ---------------------------------------------------------------------------
// Metrics.
// ---------------------------------------------------------------------------

/// Mann-Whitney AUC: P(score_case > score_control) + 0.5 P(tie).
double auc_roc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

struct WelchT {
  double t = 0.0;
  double p = 1.0;
  double df = 0.0;
};

/// Two-sample Welch t statistic with two-sided p-value.
WelchT t_statistic(const std::vector<double>& a, const std::vector<double>& b);

/// Regularized incomplete beta I_x(a, b); backs the t distribution CDF.
double incomplete_beta(double a, double b, double x);

// ---------------------------------------------------------------------------
// Cross-validated fitness.
// ---------------------------------------------------------------------------

struct CvFitness {
  double mean_auc = 0.0;
  std::vector<double> per_fold;
  /// Union of used features across fold models, as dataset column indices.
  std::vector<std::size_t> used_features;
};

/// Mean test AUC over stratified k-fold CV of a model trained on the given
/// feature columns. Folds and per-fold fits derive from the one seed, so the
/// result is a pure function of (dataset, features, spec, k, seed).
CvFitness cv_fitness(const GenotypeDataset& dataset, const std::vector<std::size_t>& features,
                     const ModelSpec& spec, int k, std::uint64_t seed);

}  // namespace fcsnet

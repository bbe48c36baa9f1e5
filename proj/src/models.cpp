#include "fcsnet/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

namespace fcsnet {

GenoMatrix extract_columns(const GenotypeDataset& dataset, const std::vector<std::size_t>& cols) {
  GenoMatrix m(dataset.n_samples(), cols.size());
  for (std::size_t r = 0; r < dataset.n_samples(); ++r) {
    const std::uint8_t* row = dataset.sample_row(r);
    std::uint8_t* out = m.data.data() + r * cols.size();
    for (std::size_t c = 0; c < cols.size(); ++c) out[c] = row[cols[c]];
  }
  return m;
}

GenoMatrix gather_rows(const GenoMatrix& m, const std::vector<std::size_t>& rows) {
  GenoMatrix out(rows.size(), m.cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::uint8_t* src = m.row(rows[r]);
    std::copy(src, src + m.cols, out.data.begin() + r * m.cols);
  }
  return out;
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "lr" || name == "logistic_regression") return ModelKind::logistic_regression;
  if (name == "dt" || name == "decision_tree") return ModelKind::decision_tree;
  if (name == "rf" || name == "random_forest") return ModelKind::random_forest;
  throw ValidationError("unknown model kind: " + name);
}

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic_regression: return "logistic_regression";
    case ModelKind::decision_tree: return "decision_tree";
    case ModelKind::random_forest: return "random_forest";
  }
  return "?";
}

void ModelSpec::validate() const {
  if (lr.l2_penalty < 0.0) throw ValidationError("l2_penalty must be >= 0");
  if (lr.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
  if (!(lr.convergence_tol > 0.0)) throw ValidationError("convergence_tol must be > 0");
  if (tree.max_depth < 0) throw ValidationError("max_depth must be >= 0");
  if (tree.min_samples_leaf < 1) throw ValidationError("min_samples_leaf must be >= 1");
  if (forest.n_trees < 1) throw ValidationError("n_trees must be >= 1");
  if (forest.tree.max_depth < 0 || forest.tree.min_samples_leaf < 1)
    throw ValidationError("invalid forest tree parameters");
}

// ---------------------------------------------------------------------------
// Logistic regression: penalized mean log-loss minimized by gradient descent
// with Armijo backtracking. Objective:
//   f(w,b) = (1/n) sum softplus(z_i) - y_i z_i + (l2/(2n)) |w|^2,  z = Xw + b
// ---------------------------------------------------------------------------

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct ObjGrad {
  double obj;
  std::vector<double> grad;  // (d weights, then intercept)
};

double lr_objective(const GenoMatrix& X, const std::vector<std::uint8_t>& y,
                    const std::vector<double>& params, double l2) {
  const std::size_t n = X.rows, d = X.cols;
  const double b = params[d];
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* xi = X.row(i);
    double z = b;
    for (std::size_t j = 0; j < d; ++j) z += params[j] * xi[j];
    loss += softplus(z) - (y[i] ? z : 0.0);
  }
  double penalty = 0.0;
  for (std::size_t j = 0; j < d; ++j) penalty += params[j] * params[j];
  return loss / static_cast<double>(n) + 0.5 * l2 * penalty / static_cast<double>(n);
}

ObjGrad lr_objective_gradient(const GenoMatrix& X, const std::vector<std::uint8_t>& y,
                              const std::vector<double>& params, double l2) {
  const std::size_t n = X.rows, d = X.cols;
  const double b = params[d];
  const double inv_n = 1.0 / static_cast<double>(n);
  double loss = 0.0;
  std::vector<double> grad(d + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* xi = X.row(i);
    double z = b;
    for (std::size_t j = 0; j < d; ++j) z += params[j] * xi[j];
    loss += softplus(z) - (y[i] ? z : 0.0);
    const double r = sigmoid(z) - (y[i] ? 1.0 : 0.0);
    for (std::size_t j = 0; j < d; ++j) grad[j] += r * xi[j];
    grad[d] += r;
  }
  double penalty = 0.0;
  for (std::size_t j = 0; j < d; ++j) penalty += params[j] * params[j];
  for (std::size_t j = 0; j < d; ++j) grad[j] = grad[j] * inv_n + l2 * inv_n * params[j];
  grad[d] *= inv_n;
  return {loss * inv_n + 0.5 * l2 * penalty * inv_n, std::move(grad)};
}

LogisticModel fit_logistic(const GenoMatrix& X, const std::vector<std::uint8_t>& y,
                           const LogisticParams& p) {
  const std::size_t d = X.cols;
  std::vector<double> params(d + 1, 0.0);
  double step = 1.0;
  LogisticModel model;
  for (int it = 0; it < p.max_iterations; ++it) {
    auto [obj, grad] = lr_objective_gradient(X, y, params, p.l2_penalty);
    double gnorm2 = 0.0;
    for (double g : grad) gnorm2 += g * g;
    const double gnorm = std::sqrt(gnorm2);
    model.iterations = it;
    if (gnorm <= p.convergence_tol) {
      model.converged = true;
      break;
    }
    // backtracking line search on the steepest-descent direction
    std::vector<double> trial(d + 1);
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t j = 0; j <= d; ++j) trial[j] = params[j] - step * grad[j];
      if (lr_objective(X, y, trial, p.l2_penalty) <= obj - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow: numerically at the optimum
    params.swap(trial);
    model.iterations = it + 1;
  }
  model.weights.assign(params.begin(), params.begin() + d);
  model.intercept = params[d];
  return model;
}

// ---------------------------------------------------------------------------
// CART on the {0,1,2} genotype alphabet. Split search is histogram-based:
// candidate thresholds are 0.5 and 1.5 only. Deterministic tie-break: lowest
// weighted child impurity, then lowest feature index, then lowest threshold
// (guaranteed by scan order). Non-pure nodes split even at zero gain.
// ---------------------------------------------------------------------------

struct TreeBuilder {
  const GenoMatrix& X;
  const std::vector<std::uint8_t>& y;
  TreeParams params;
  Rng* feature_rng = nullptr;  // forests sample candidate features per node
  std::size_t n_candidates = 0;

  std::vector<std::size_t> idx;
  std::vector<TreeNode> nodes;
  std::vector<std::size_t> scratch;

  TreeBuilder(const GenoMatrix& x, const std::vector<std::uint8_t>& labels, TreeParams p)
      : X(x), y(labels), params(p) {
    idx.resize(X.rows);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    scratch.resize(X.rows);
  }

  static double weighted_impurity(long nl0, long nl1, long nr0, long nr1) {
    const double nl = static_cast<double>(nl0 + nl1);
    const double nr = static_cast<double>(nr0 + nr1);
    const double il = nl - (static_cast<double>(nl0) * nl0 + static_cast<double>(nl1) * nl1) / nl;
    const double ir = nr - (static_cast<double>(nr0) * nr0 + static_cast<double>(nr1) * nr1) / nr;
    return il + ir;
  }

  std::vector<std::size_t> candidate_features() {
    const std::size_t d = X.cols;
    if (!feature_rng || n_candidates >= d) {
      std::vector<std::size_t> all(d);
      std::iota(all.begin(), all.end(), std::size_t{0});
      return all;
    }
    // partial Fisher-Yates draw of n_candidates distinct features
    std::vector<std::size_t> pool(d);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::vector<std::size_t> picked;
    picked.reserve(n_candidates);
    for (std::size_t i = 0; i < n_candidates; ++i) {
      std::size_t j = i + feature_rng->next_below(d - i);
      std::swap(pool[i], pool[j]);
      picked.push_back(pool[i]);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
  }

  int build(std::size_t begin, std::size_t end, int depth) {
    long n1 = 0;
    for (std::size_t k = begin; k < end; ++k) n1 += y[idx[k]];
    const long n = static_cast<long>(end - begin);
    const long n0 = n - n1;

    TreeNode node;
    node.n_samples = static_cast<std::size_t>(n);
    node.p1 = static_cast<double>(n1) / static_cast<double>(n);
    node.gini =
        1.0 - (static_cast<double>(n0) * n0 + static_cast<double>(n1) * n1) /
                  (static_cast<double>(n) * n);

    const bool pure = (n0 == 0 || n1 == 0);
    const long msl = params.min_samples_leaf;
    if (pure || depth >= params.max_depth || n < 2 * msl) {
      nodes.push_back(node);
      return static_cast<int>(nodes.size() - 1);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = 0.0;
    for (std::size_t f : candidate_features()) {
      long count[3][2] = {{0, 0}, {0, 0}, {0, 0}};
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t i = idx[k];
        ++count[X.at(i, f)][y[i]];
      }
      // threshold 0.5: left = {0}; threshold 1.5: left = {0,1}
      for (int t = 0; t < 2; ++t) {
        long nl0 = count[0][0], nl1 = count[0][1];
        if (t == 1) {
          nl0 += count[1][0];
          nl1 += count[1][1];
        }
        const long nr0 = n0 - nl0, nr1 = n1 - nl1;
        const long nl = nl0 + nl1, nr = nr0 + nr1;
        if (nl < msl || nr < msl) continue;
        const double wi = weighted_impurity(nl0, nl1, nr0, nr1);
        if (best_feature < 0 || wi < best_impurity) {
          best_feature = static_cast<int>(f);
          best_threshold = t == 0 ? 0.5 : 1.5;
          best_impurity = wi;
        }
      }
    }
    if (best_feature < 0) {
      nodes.push_back(node);
      return static_cast<int>(nodes.size() - 1);
    }

    // stable partition preserves in-node sample order for determinism
    std::size_t nl = 0, ns = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t i = idx[k];
      if (X.at(i, static_cast<std::size_t>(best_feature)) <= best_threshold)
        idx[begin + nl++] = i;
      else
        scratch[ns++] = i;
    }
    std::copy(scratch.begin(), scratch.begin() + ns, idx.begin() + begin + nl);

    node.feature = best_feature;
    node.threshold = best_threshold;
    nodes.push_back(node);
    const int self = static_cast<int>(nodes.size() - 1);
    nodes[self].left = build(begin, begin + nl, depth + 1);
    nodes[self].right = build(begin + nl, end, depth + 1);
    return self;
  }
};

TreeModel fit_tree(const GenoMatrix& X, const std::vector<std::uint8_t>& y, const TreeParams& p,
                   Rng* feature_rng = nullptr, std::size_t n_candidates = 0) {
  TreeBuilder builder(X, y, p);
  builder.feature_rng = feature_rng;
  builder.n_candidates = n_candidates;
  builder.build(0, X.rows, 0);
  return TreeModel{std::move(builder.nodes)};
}

double tree_predict_row(const TreeModel& t, const std::uint8_t* row) {
  int node = 0;
  while (t.nodes[node].feature >= 0) {
    const TreeNode& nd = t.nodes[node];
    node = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return t.nodes[node].p1;
}

ForestModel fit_forest(const GenoMatrix& X, const std::vector<std::uint8_t>& y,
                       const ForestParams& p, std::uint64_t seed) {
  ForestModel forest;
  forest.trees.reserve(p.n_trees);
  const std::size_t n_candidates =
      p.subsample == FeatureSubsample::sqrt
          ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(X.cols))))
          : X.cols;
  for (int t = 0; t < p.n_trees; ++t) {
    Rng rng(derive_seed(seed, 0x464f5245u + static_cast<std::uint64_t>(t)));
    GenoMatrix Xt;
    std::vector<std::uint8_t> yt;
    if (p.bootstrap) {
      std::vector<std::size_t> rows(X.rows);
      for (auto& r : rows) r = rng.next_below(X.rows);
      Xt = gather_rows(X, rows);
      yt = gather(y, rows);
    } else {
      Xt = X;
      yt = y;
    }
    forest.trees.push_back(fit_tree(Xt, yt, p.tree,
                                    p.subsample == FeatureSubsample::sqrt ? &rng : nullptr,
                                    n_candidates));
  }
  return forest;
}

void collect_used(const TreeModel& t, std::set<std::size_t>& used) {
  for (const auto& node : t.nodes)
    if (node.feature >= 0) used.insert(static_cast<std::size_t>(node.feature));
}

}  // namespace

std::vector<std::size_t> FittedModel::used_features() const {
  if (degenerate) return {};
  if (kind == ModelKind::logistic_regression) return feature_index_map;
  std::set<std::size_t> local;
  if (const auto* tree = std::get_if<TreeModel>(&impl)) collect_used(*tree, local);
  if (const auto* forest = std::get_if<ForestModel>(&impl))
    for (const auto& t : forest->trees) collect_used(t, local);
  std::vector<std::size_t> out;
  out.reserve(local.size());
  for (std::size_t f : local) out.push_back(feature_index_map[f]);
  return out;
}

FittedModel fit(const ModelSpec& spec, const GenoMatrix& X, const std::vector<std::uint8_t>& y,
                std::uint64_t seed, std::vector<std::size_t> feature_index_map) {
  spec.validate();
  if (X.rows == 0 || X.cols == 0) throw ValidationError("cannot fit on an empty matrix");
  if (y.size() != X.rows) throw ValidationError("label length does not match matrix rows");
  for (auto v : X.data)
    if (v > 2) throw ValidationError("model input values must be genotype codes 0, 1, or 2");
  if (feature_index_map.empty()) {
    feature_index_map.resize(X.cols);
    std::iota(feature_index_map.begin(), feature_index_map.end(), std::size_t{0});
  }
  if (feature_index_map.size() != X.cols)
    throw ValidationError("feature_index_map size does not match matrix columns");

  FittedModel model;
  model.kind = spec.kind;
  model.feature_index_map = std::move(feature_index_map);

  const auto n1 = static_cast<std::size_t>(std::count(y.begin(), y.end(), std::uint8_t{1}));
  if (n1 == 0 || n1 == y.size()) {
    model.degenerate = true;
    model.prior = static_cast<double>(n1) / static_cast<double>(y.size());
    model.impl = LogisticModel{};
    return model;
  }

  switch (spec.kind) {
    case ModelKind::logistic_regression:
      model.impl = fit_logistic(X, y, spec.lr);
      break;
    case ModelKind::decision_tree:
      model.impl = fit_tree(X, y, spec.tree);
      break;
    case ModelKind::random_forest:
      model.impl = fit_forest(X, y, spec.forest, seed);
      break;
  }
  return model;
}

std::vector<double> predict_proba(const FittedModel& model, const GenoMatrix& X) {
  if (X.cols != model.feature_index_map.size())
    throw ValidationError("prediction matrix has " + std::to_string(X.cols) +
                          " columns, model expects " +
                          std::to_string(model.feature_index_map.size()));
  std::vector<double> out(X.rows, model.prior);
  if (model.degenerate) return out;

  if (const auto* lr = std::get_if<LogisticModel>(&model.impl)) {
    for (std::size_t i = 0; i < X.rows; ++i) {
      const std::uint8_t* xi = X.row(i);
      double z = lr->intercept;
      for (std::size_t j = 0; j < X.cols; ++j) z += lr->weights[j] * xi[j];
      out[i] = sigmoid(z);
    }
  } else if (const auto* tree = std::get_if<TreeModel>(&model.impl)) {
    for (std::size_t i = 0; i < X.rows; ++i) out[i] = tree_predict_row(*tree, X.row(i));
  } else if (const auto* forest = std::get_if<ForestModel>(&model.impl)) {
    for (std::size_t i = 0; i < X.rows; ++i) {
      double sum = 0.0;
      for (const auto& t : forest->trees) sum += tree_predict_row(t, X.row(i));
      out[i] = sum / static_cast<double>(forest->trees.size());
    }
  }
  return out;
}

double logistic_objective(const GenoMatrix& X, const std::vector<std::uint8_t>& y,
                          const std::vector<double>& params, double l2_penalty) {
  if (params.size() != X.cols + 1) throw ValidationError("params must have X.cols + 1 entries");
  return lr_objective(X, y, params, l2_penalty);
}

std::vector<double> logistic_gradient(const GenoMatrix& X, const std::vector<std::uint8_t>& y,
                                      const std::vector<double>& params, double l2_penalty) {
  if (params.size() != X.cols + 1) throw ValidationError("params must have X.cols + 1 entries");
  return lr_objective_gradient(X, y, params, l2_penalty).grad;
}

// ---------------------------------------------------------------------------
// Metrics.
// ---------------------------------------------------------------------------

double auc_roc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
  if (scores.size() != labels.size()) throw ValidationError("scores/labels length mismatch");
  const std::size_t n = scores.size();
  std::size_t n1 = 0;
  for (auto l : labels) n1 += l;
  const std::size_t n0 = n - n1;
  if (n1 == 0 || n0 == 0) throw ValidationError("AUC requires both classes present");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // midranks over tied score groups; rank sum of cases gives Mann-Whitney U
  double rank_sum_cases = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]]) rank_sum_cases += midrank;
    i = j;
  }
  const double u =
      rank_sum_cases - 0.5 * static_cast<double>(n1) * (static_cast<double>(n1) + 1.0);
  return u / (static_cast<double>(n1) * static_cast<double>(n0));
}

namespace {

// Lentz's continued fraction for the regularized incomplete beta function.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                       b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

WelchT t_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw ValidationError("t statistic requires at least 2 samples per group");
  auto mean_var = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair<double, double>{mean, ss / (n - 1.0)};
  };
  auto [ma, va] = mean_var(a);
  auto [mb, vb] = mean_var(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double se2 = va / na + vb / nb;

  WelchT result;
  if (se2 == 0.0) {
    if (ma == mb) return {0.0, 1.0, na + nb - 2.0};
    result.t = ma > mb ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
    result.p = 0.0;
    result.df = na + nb - 2.0;
    return result;
  }
  result.t = (ma - mb) / std::sqrt(se2);
  const double denom = (va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0);
  result.df = denom > 0.0 ? se2 * se2 / denom : na + nb - 2.0;
  result.p = incomplete_beta(result.df / 2.0, 0.5,
                             result.df / (result.df + result.t * result.t));
  return result;
}

// ---------------------------------------------------------------------------
// Cross-validated fitness.
// ---------------------------------------------------------------------------

CvFitness cv_fitness(const GenotypeDataset& dataset, const std::vector<std::size_t>& features,
                     const ModelSpec& spec, int k, std::uint64_t seed) {
  if (features.empty()) throw ValidationError("cv_fitness requires a non-empty feature set");
  const GenoMatrix X = extract_columns(dataset, features);
  const auto folds = stratified_kfold(dataset.labels(), k, derive_seed(seed, hash_string("cv")));

  CvFitness result;
  std::set<std::size_t> used;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const GenoMatrix Xtr = gather_rows(X, folds[f].train);
    const auto ytr = gather(dataset.labels(), folds[f].train);
    FittedModel model = fit(spec, Xtr, ytr, derive_seed(seed, 0xf01d0000u + f), features);
    const GenoMatrix Xte = gather_rows(X, folds[f].test);
    const auto yte = gather(dataset.labels(), folds[f].test);
    result.per_fold.push_back(auc_roc(predict_proba(model, Xte), yte));
    for (std::size_t u : model.used_features()) used.insert(u);
  }
  result.mean_auc = std::accumulate(result.per_fold.begin(), result.per_fold.end(), 0.0) /
                    static_cast<double>(result.per_fold.size());
  result.used_features.assign(used.begin(), used.end());
  return result;
}

}  // namespace fcsnet

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fcsnet/common.hpp"

namespace fcsnet {

/// 0/1 matrix over (subset, feature): row i marks the features chosen by the
/// i-th high-performing run. Stored as sorted per-row index lists; subset
/// sizes are tiny next to the feature count.
class SelectionMatrix {
 public:
  SelectionMatrix(std::vector<std::vector<std::size_t>> rows, std::vector<std::string> feature_ids);

  std::size_t n_rows() const { return rows_.size(); }
  std::size_t n_features() const { return feature_ids_.size(); }
  const std::vector<std::string>& feature_ids() const { return feature_ids_; }
  const std::vector<std::size_t>& row(std::size_t i) const { return rows_[i]; }
  bool entry(std::size_t row, std::size_t feature) const;

  /// Column sums: how many subsets selected each feature.
  std::vector<std::size_t> selection_counts() const;

 private:
  std::vector<std::vector<std::size_t>> rows_;
  std::vector<std::string> feature_ids_;
};

SelectionMatrix build_selection_matrix(const std::vector<std::vector<std::size_t>>& subsets,
                                       std::vector<std::string> feature_ids);

/// Sparse symmetric pair-count view of A = M^T M. The diagonal is the
/// per-feature selection count; off-diagonals count joint selections.
class CoSelectionCounts {
 public:
  explicit CoSelectionCounts(const SelectionMatrix& m);

  std::size_t count(std::size_t i, std::size_t j) const;
  double cosine(std::size_t i, std::size_t j) const;
  const std::vector<std::size_t>& diagonal() const { return diag_; }

  struct Pair {
    std::size_t u, v;
    std::size_t count;
  };
  /// All co-selected pairs (u < v, count >= 1) in ascending (u, v) order.
  std::vector<Pair> pairs() const;

 private:
  static std::uint64_t key(std::size_t i, std::size_t j);
  std::unordered_map<std::uint64_t, std::size_t> off_diag_;
  std::vector<std::size_t> diag_;
};

struct Edge {
  std::size_t u, v;        // feature column indices, u < v
  std::size_t occ_count;
  double cosine;
};

/// Thresholded co-selection graph: only features incident to a retained edge
/// remain as nodes.
struct CoSelectionGraph {
  std::vector<std::size_t> nodes;  // feature indices, ascending
  std::vector<Edge> edges;
  std::size_t tau_occ = 1;
  double tau_cos = 0.0;
};

CoSelectionGraph build_graph(const SelectionMatrix& m, std::size_t tau_occ, double tau_cos);

struct CommunityPartition {
  /// node position (into graph.nodes) -> community id, contiguous from 0.
  std::vector<std::size_t> assignment;
  std::size_t n_communities = 0;
  double modularity = 0.0;
};

/// Newman modularity of an unweighted partitioned graph:
/// Q = sum_c [ e_c/m - (d_c/2m)^2 ].
double modularity_of(const CoSelectionGraph& graph, const std::vector<std::size_t>& assignment);

/// Greedy agglomerative modularity maximization: repeatedly merge the
/// community pair with the largest positive delta-Q, ties to the smallest
/// (id, id) pair. Communities never span connected components.
CommunityPartition greedy_communities(const CoSelectionGraph& graph);

std::size_t count_components(const CoSelectionGraph& graph);

struct SweepRow {
  std::size_t tau_occ;
  double tau_cos;
  std::size_t n_nodes;
  std::size_t n_edges;
  std::size_t n_components;
  std::size_t n_communities;
  double modularity;
};

std::vector<SweepRow> threshold_sweep(const SelectionMatrix& m,
                                      const std::vector<std::size_t>& occ_grid,
                                      const std::vector<double>& cos_grid);

}  // namespace fcsnet

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fcsnet/common.hpp"

namespace fcsnet {

/// Agglomerative merge tree. Leaves are numbered 0..n-1; the node created by
/// merge i is numbered n+i. Heights are the Ward criterion values (squared
/// Euclidean convention) and are non-decreasing.
struct Dendrogram {
  struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;  // leaves under the new node
  };
  std::size_t n_leaves = 0;
  std::vector<Merge> merges;
};

/// Ward minimum-variance clustering via Lance-Williams updates on squared
/// Euclidean distances (the distances are fed to the recurrence as-is, not
/// re-squared). Ties break to the smallest (slot, slot) pair, where a merged
/// cluster keeps the smaller slot.
Dendrogram ward_dendrogram(const Matrix& points);

/// Undo the last k-1 merges; cluster ids follow first-leaf appearance order.
std::vector<std::size_t> cut_tree(const Dendrogram& dendrogram, std::size_t k);

struct ClusterStats {
  std::size_t cluster = 0;
  std::size_t size = 0;
  std::vector<std::size_t> members;
  std::vector<double> mean;    // per input dimension
  std::vector<double> median;
  std::vector<double> q1;
  std::vector<double> q3;
};

std::vector<ClusterStats> summarize_clusters(const Matrix& points,
                                             const std::vector<std::size_t>& assignment);

/// Total within-cluster sum of squared deviations from cluster centroids.
double within_cluster_ss(const Matrix& points, const std::vector<std::size_t>& assignment);

}  // namespace fcsnet

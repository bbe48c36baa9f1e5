#include "fcsnet/subtype.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fcsnet {

Dendrogram ward_dendrogram(const Matrix& points) {
  const std::size_t n = points.rows;
  if (n < 2) throw ValidationError("clustering requires at least 2 points");
  for (double v : points.data)
    if (std::isnan(v)) throw ValidationError("clustering input contains NaN");

  // squared Euclidean distances between singleton clusters
  Matrix dist(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      for (std::size_t c = 0; c < points.cols; ++c) {
        const double diff = points.at(i, c) - points.at(j, c);
        d += diff * diff;
      }
      dist.at(i, j) = dist.at(j, i) = d;
    }

  std::vector<bool> alive(n, true);
  std::vector<std::size_t> sizes(n, 1);
  std::vector<std::size_t> node_id(n);  // dendrogram node currently in each slot
  std::iota(node_id.begin(), node_id.end(), std::size_t{0});

  Dendrogram out;
  out.n_leaves = n;
  out.merges.reserve(n - 1);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = 0.0;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j]) continue;
        if (!found || dist.at(i, j) < best) {
          best = dist.at(i, j);
          bi = i;
          bj = j;
          found = true;
        }
      }
    }

    const double ni = static_cast<double>(sizes[bi]);
    const double nj = static_cast<double>(sizes[bj]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == bi || k == bj) continue;
      const double nk = static_cast<double>(sizes[k]);
      const double d = ((ni + nk) * dist.at(bi, k) + (nj + nk) * dist.at(bj, k) - nk * best) /
                       (ni + nj + nk);
      dist.at(bi, k) = dist.at(k, bi) = d;
    }

    out.merges.push_back({node_id[bi], node_id[bj], best, sizes[bi] + sizes[bj]});
    sizes[bi] += sizes[bj];
    node_id[bi] = n + step;
    alive[bj] = false;
  }
  return out;
}

std::vector<std::size_t> cut_tree(const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t n = dendrogram.n_leaves;
  if (k < 1 || k > n) throw ValidationError("cut level k must be in [1, n]");

  // leaves of each internal node, replayed up to the first n-k merges
  std::vector<std::size_t> group(n);
  std::iota(group.begin(), group.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> node_leaves(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) node_leaves[i] = {i};
  for (std::size_t s = 0; s < n - k; ++s) {
    const auto& merge = dendrogram.merges[s];
    auto& dst = node_leaves[n + s];
    dst = node_leaves[merge.left];
    dst.insert(dst.end(), node_leaves[merge.right].begin(), node_leaves[merge.right].end());
    for (std::size_t leaf : dst) group[leaf] = n + s;
  }

  std::vector<std::size_t> assignment(n, SIZE_MAX);
  std::size_t next_id = 0;
  std::vector<std::size_t> group_to_cluster(2 * n - 1, SIZE_MAX);
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    std::size_t g = group[leaf];
    if (group_to_cluster[g] == SIZE_MAX) group_to_cluster[g] = next_id++;
    assignment[leaf] = group_to_cluster[g];
  }
  return assignment;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  // linear interpolation between order statistics (R type 7)
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::vector<ClusterStats> summarize_clusters(const Matrix& points,
                                             const std::vector<std::size_t>& assignment) {
  if (assignment.size() != points.rows)
    throw ValidationError("assignment must cover every point");
  std::size_t n_clusters = 0;
  for (std::size_t c : assignment) n_clusters = std::max(n_clusters, c + 1);

  std::vector<ClusterStats> out(n_clusters);
  for (std::size_t c = 0; c < n_clusters; ++c) out[c].cluster = c;
  for (std::size_t i = 0; i < points.rows; ++i) out[assignment[i]].members.push_back(i);

  for (auto& stats : out) {
    stats.size = stats.members.size();
    stats.mean.resize(points.cols);
    stats.median.resize(points.cols);
    stats.q1.resize(points.cols);
    stats.q3.resize(points.cols);
    std::vector<double> column(stats.members.size());
    for (std::size_t d = 0; d < points.cols; ++d) {
      double sum = 0.0;
      for (std::size_t m = 0; m < stats.members.size(); ++m) {
        column[m] = points.at(stats.members[m], d);
        sum += column[m];
      }
      stats.mean[d] = sum / static_cast<double>(stats.size);
      std::sort(column.begin(), column.end());
      stats.median[d] = quantile_sorted(column, 0.5);
      stats.q1[d] = quantile_sorted(column, 0.25);
      stats.q3[d] = quantile_sorted(column, 0.75);
    }
  }
  return out;
}

double within_cluster_ss(const Matrix& points, const std::vector<std::size_t>& assignment) {
  if (assignment.size() != points.rows)
    throw ValidationError("assignment must cover every point");
  std::size_t n_clusters = 0;
  for (std::size_t c : assignment) n_clusters = std::max(n_clusters, c + 1);

  Matrix centroid(n_clusters, points.cols, 0.0);
  std::vector<std::size_t> counts(n_clusters, 0);
  for (std::size_t i = 0; i < points.rows; ++i) {
    ++counts[assignment[i]];
    for (std::size_t d = 0; d < points.cols; ++d)
      centroid.at(assignment[i], d) += points.at(i, d);
  }
  for (std::size_t c = 0; c < n_clusters; ++c)
    for (std::size_t d = 0; d < points.cols; ++d)
      centroid.at(c, d) /= static_cast<double>(counts[c]);

  double ss = 0.0;
  for (std::size_t i = 0; i < points.rows; ++i)
    for (std::size_t d = 0; d < points.cols; ++d) {
      const double diff = points.at(i, d) - centroid.at(assignment[i], d);
      ss += diff * diff;
    }
  return ss;
}

}  // namespace fcsnet

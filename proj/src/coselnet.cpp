#include "fcsnet/coselnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fcsnet {

SelectionMatrix::SelectionMatrix(std::vector<std::vector<std::size_t>> rows,
                                 std::vector<std::string> feature_ids)
    : rows_(std::move(rows)), feature_ids_(std::move(feature_ids)) {
  if (rows_.empty()) throw ValidationError("selection matrix requires at least one subset");
  for (auto& row : rows_) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (std::size_t f : row)
      if (f >= feature_ids_.size())
        throw ValidationError("subset references feature index " + std::to_string(f) +
                              " beyond feature count " + std::to_string(feature_ids_.size()));
  }
}

bool SelectionMatrix::entry(std::size_t row, std::size_t feature) const {
  const auto& r = rows_[row];
  return std::binary_search(r.begin(), r.end(), feature);
}

std::vector<std::size_t> SelectionMatrix::selection_counts() const {
  std::vector<std::size_t> counts(feature_ids_.size(), 0);
  for (const auto& row : rows_)
    for (std::size_t f : row) ++counts[f];
  return counts;
}

SelectionMatrix build_selection_matrix(const std::vector<std::vector<std::size_t>>& subsets,
                                       std::vector<std::string> feature_ids) {
  return SelectionMatrix(subsets, std::move(feature_ids));
}

std::uint64_t CoSelectionCounts::key(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
}

CoSelectionCounts::CoSelectionCounts(const SelectionMatrix& m) : diag_(m.n_features(), 0) {
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    const auto& row = m.row(r);
    for (std::size_t a = 0; a < row.size(); ++a) {
      ++diag_[row[a]];
      for (std::size_t b = a + 1; b < row.size(); ++b) ++off_diag_[key(row[a], row[b])];
    }
  }
}

std::size_t CoSelectionCounts::count(std::size_t i, std::size_t j) const {
  if (i == j) return diag_[i];
  auto it = off_diag_.find(key(i, j));
  return it == off_diag_.end() ? 0 : it->second;
}

double CoSelectionCounts::cosine(std::size_t i, std::size_t j) const {
  const std::size_t di = diag_[i], dj = diag_[j];
  if (di == 0 || dj == 0) return 0.0;
  return static_cast<double>(count(i, j)) /
         std::sqrt(static_cast<double>(di) * static_cast<double>(dj));
}

std::vector<CoSelectionCounts::Pair> CoSelectionCounts::pairs() const {
  std::vector<Pair> out;
  out.reserve(off_diag_.size());
  for (const auto& [k, c] : off_diag_)
    out.push_back({static_cast<std::size_t>(k >> 32),
                   static_cast<std::size_t>(k & 0xffffffffULL), c});
  std::sort(out.begin(), out.end(), [](const Pair& a, const Pair& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  return out;
}

CoSelectionGraph build_graph(const SelectionMatrix& m, std::size_t tau_occ, double tau_cos) {
  if (tau_occ < 1) throw ValidationError("tau_occ must be >= 1");
  if (!(tau_cos >= 0.0 && tau_cos <= 1.0)) throw ValidationError("tau_cos must be in [0,1]");

  const CoSelectionCounts counts(m);
  CoSelectionGraph graph;
  graph.tau_occ = tau_occ;
  graph.tau_cos = tau_cos;

  std::vector<bool> incident(m.n_features(), false);
  for (const auto& p : counts.pairs()) {
    if (p.count < tau_occ) continue;
    const double cos = counts.cosine(p.u, p.v);
    if (cos < tau_cos) continue;
    graph.edges.push_back({p.u, p.v, p.count, cos});
    incident[p.u] = incident[p.v] = true;
  }
  for (std::size_t f = 0; f < incident.size(); ++f)
    if (incident[f]) graph.nodes.push_back(f);
  return graph;
}

namespace {

// node feature index -> position within graph.nodes
std::vector<std::size_t> node_positions(const CoSelectionGraph& graph) {
  std::vector<std::size_t> pos;
  if (graph.nodes.empty()) return pos;
  pos.assign(graph.nodes.back() + 1, SIZE_MAX);
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) pos[graph.nodes[i]] = i;
  return pos;
}

}  // namespace

double modularity_of(const CoSelectionGraph& graph, const std::vector<std::size_t>& assignment) {
  if (assignment.size() != graph.nodes.size())
    throw ValidationError("assignment must cover every graph node");
  const double m = static_cast<double>(graph.edges.size());
  if (graph.edges.empty()) return 0.0;

  std::size_t n_comm = 0;
  for (std::size_t c : assignment) n_comm = std::max(n_comm, c + 1);
  std::vector<double> intra(n_comm, 0.0), degree(n_comm, 0.0);

  const auto pos = node_positions(graph);
  for (const auto& e : graph.edges) {
    const std::size_t cu = assignment[pos[e.u]], cv = assignment[pos[e.v]];
    if (cu == cv) intra[cu] += 1.0;
    degree[cu] += 1.0;
    degree[cv] += 1.0;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < n_comm; ++c) {
    const double frac_degree = degree[c] / (2.0 * m);
    q += intra[c] / m - frac_degree * frac_degree;
  }
  return q;
}

CommunityPartition greedy_communities(const CoSelectionGraph& graph) {
  if (graph.nodes.empty()) throw ValidationError("community detection on an empty graph");
  const std::size_t n = graph.nodes.size();
  const auto pos = node_positions(graph);
  const long long m = static_cast<long long>(graph.edges.size());

  // between[c] maps community -> edge count E_cd; degree[c] = total degree.
  // delta-Q comparisons stay in exact integers: merging c,d changes Q by
  // (E_cd/m - d_c d_d / (2 m^2)), so compare 2m*E_cd - d_c*d_d.
  std::vector<std::unordered_map<std::size_t, long long>> between(n);
  std::vector<long long> degree(n, 0);
  std::vector<long long> intra(n, 0);
  for (const auto& e : graph.edges) {
    const std::size_t u = pos[e.u], v = pos[e.v];
    ++between[u][v];
    ++between[v][u];
    ++degree[u];
    ++degree[v];
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::vector<bool> alive(n, true);

  for (;;) {
    long long best_score = 0;
    std::size_t best_c = 0, best_d = 0;
    bool found = false;
    for (std::size_t c = 0; c < n; ++c) {
      if (!alive[c]) continue;
      for (const auto& [d, e_cd] : between[c]) {
        if (d <= c || !alive[d]) continue;
        const long long score = 2 * m * e_cd - degree[c] * degree[d];
        if (score > 0 && (!found || score > best_score ||
                          (score == best_score && (c < best_c || (c == best_c && d < best_d))))) {
          best_score = score;
          best_c = c;
          best_d = d;
          found = true;
        }
      }
    }
    if (!found) break;

    // merge best_d into best_c (best_c < best_d)
    intra[best_c] += intra[best_d] + between[best_c][best_d];
    degree[best_c] += degree[best_d];
    between[best_c].erase(best_d);
    for (const auto& [other, cnt] : between[best_d]) {
      if (other == best_c) continue;
      between[best_c][other] += cnt;
      between[other][best_c] += cnt;
      between[other].erase(best_d);
    }
    between[best_d].clear();
    alive[best_d] = false;
    parent[best_d] = best_c;
  }

  auto find_root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };

  // contiguous ids in order of first (smallest) member node
  CommunityPartition part;
  part.assignment.assign(n, SIZE_MAX);
  std::unordered_map<std::size_t, std::size_t> remap;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find_root(i);
    auto [it, inserted] = remap.emplace(root, remap.size());
    part.assignment[i] = it->second;
  }
  part.n_communities = remap.size();
  part.modularity = modularity_of(graph, part.assignment);
  return part;
}

std::size_t count_components(const CoSelectionGraph& graph) {
  const std::size_t n = graph.nodes.size();
  if (n == 0) return 0;
  const auto pos = node_positions(graph);
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : graph.edges) {
    const std::size_t ru = find(pos[e.u]), rv = find(pos[e.v]);
    if (ru != rv) parent[std::max(ru, rv)] = std::min(ru, rv);
  }
  std::size_t components = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (find(i) == i) ++components;
  return components;
}

std::vector<SweepRow> threshold_sweep(const SelectionMatrix& m,
                                      const std::vector<std::size_t>& occ_grid,
                                      const std::vector<double>& cos_grid) {
  if (occ_grid.empty() || cos_grid.empty()) throw ValidationError("sweep grids must be non-empty");
  std::vector<SweepRow> rows;
  rows.reserve(occ_grid.size() * cos_grid.size());
  for (std::size_t occ : occ_grid) {
    for (double cos : cos_grid) {
      const CoSelectionGraph graph = build_graph(m, occ, cos);
      SweepRow row{occ, cos, graph.nodes.size(), graph.edges.size(), count_components(graph), 0,
                   0.0};
      if (!graph.nodes.empty()) {
        const CommunityPartition part = greedy_communities(graph);
        row.n_communities = part.n_communities;
        row.modularity = part.modularity;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace fcsnet

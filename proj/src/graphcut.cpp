#include "npclust/graphcut.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace npclust {

SparseGraph SparseGraph::from_edges(int n, const std::vector<Edge>& edges) {
  if (n < 1) throw std::invalid_argument("graph must have at least one vertex");
  SparseGraph g;
  g.n = n;
  g.adj.resize(n);
  g.degree.assign(n, 0.0);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loops are not allowed");
    if (!(e.w >= 0.0) || !std::isfinite(e.w)) throw std::invalid_argument("edge weights must be non-negative and finite");
    g.edges.push_back(e);
    g.adj[e.u].emplace_back(e.v, e.w);
    g.adj[e.v].emplace_back(e.u, e.w);
    g.degree[e.u] += e.w;
    g.degree[e.v] += e.w;
  }
  for (int i = 0; i < n; ++i)
    if (!(g.degree[i] > 0.0)) throw std::invalid_argument("isolated vertex (zero degree) at index " + std::to_string(i));
  return g;
}

SparseGraph read_edge_list(std::istream& in) {
  std::vector<SparseGraph::Edge> edges;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long u, v;
    double w;
    if (!(ls >> u)) continue;  // blank or comment-only line
    if (!(ls >> v >> w)) throw std::runtime_error("edge list line " + std::to_string(line_no) + ": expected \"i j weight\"");
    std::string rest;
    if (ls >> rest) throw std::runtime_error("edge list line " + std::to_string(line_no) + ": trailing tokens");
    if (u < 0 || v < 0) throw std::runtime_error("edge list line " + std::to_string(line_no) + ": negative vertex index");
    edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
    max_index = std::max<long long>(max_index, std::max(u, v));
  }
  if (edges.empty()) throw std::runtime_error("edge list contains no edges");
  return SparseGraph::from_edges(static_cast<int>(max_index) + 1, edges);
}

SparseGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  return read_edge_list(in);
}

std::pair<KernelMatrix, WeightVector> build_ncut_kernel(const SparseGraph& graph, double shift) {
  if (!(shift >= 0.0) || !std::isfinite(shift)) throw std::invalid_argument("shift must be non-negative and finite");
  int n = graph.n;
  Matrix k(n, n, 0.0);
  for (int i = 0; i < n; ++i) k(i, i) = shift / graph.degree[i];
  for (const auto& e : graph.edges) {
    double v = e.w / (graph.degree[e.u] * graph.degree[e.v]);
    k(e.u, e.v) += v;
    k(e.v, e.u) += v;
  }
  KernelMatrix km{SymmetricMatrix(std::move(k))};
  EigenDecomposition eig = sym_eig(km.gram);
  if (eig.eigenvalues.back() < -km.psd_tolerance)
    throw std::runtime_error("degree-normalized kernel is indefinite; increase the diagonal shift");
  return {std::move(km), WeightVector(graph.degree)};
}

double auto_shift(const SparseGraph& graph) {
  int n = graph.n;
  Matrix norm(n, n, 0.0);
  for (const auto& e : graph.edges) {
    double v = e.w / std::sqrt(graph.degree[e.u] * graph.degree[e.v]);
    norm(e.u, e.v) += v;
    norm(e.v, e.u) += v;
  }
  EigenDecomposition eig = sym_eig(SymmetricMatrix(std::move(norm)));
  return std::max(0.0, -eig.eigenvalues.back()) + 1e-6;
}

double cut_objective(const SparseGraph& graph, const std::vector<int>& assignments) {
  if (static_cast<int>(assignments.size()) != graph.n)
    throw std::invalid_argument("cut_objective: assignment length mismatch");
  int k = 0;
  for (int a : assignments) {
    if (a < 0) throw std::invalid_argument("cut_objective: negative cluster id");
    k = std::max(k, a + 1);
  }
  std::vector<double> escaping(k, 0.0), cluster_degree(k, 0.0);
  for (int i = 0; i < graph.n; ++i) cluster_degree[assignments[i]] += graph.degree[i];
  for (int c = 0; c < k; ++c)
    if (!(cluster_degree[c] > 0.0)) throw std::invalid_argument("cut_objective: empty cluster id referenced");
  for (const auto& e : graph.edges) {
    if (assignments[e.u] != assignments[e.v]) {
      escaping[assignments[e.u]] += e.w;
      escaping[assignments[e.v]] += e.w;
    }
  }
  double total = 0.0;
  for (int c = 0; c < k; ++c) total += escaping[c] / cluster_degree[c];
  return total;
}

double node_to_cluster_distance_sparse(const SparseGraph& graph, double shift, int node,
                                       const std::vector<int>& frozen_assignments, int cluster,
                                       const ClusterSums& sums) {
  double links = 0.0;
  for (const auto& [nbr, w] : graph.adj[node])
    if (frozen_assignments[nbr] == cluster) links += w;
  double deg = graph.degree[node];
  double s = sums.weight_sum;
  double in_cluster = frozen_assignments[node] == cluster ? 1.0 : 0.0;
  return shift / deg - 2.0 * (shift * in_cluster + links / deg) / s +
         (shift * s + sums.internal_links) / (s * s);
}

namespace {

// J(K, W) + lambda * k for the degree-normalized kernel, evaluated from
// adjacency sums: each cluster contributes shift * (|c| - 1) - links_cc / s_c.
double sparse_kernel_objective(const SparseGraph& graph, double shift, double lambda,
                               const std::vector<int>& assignments, int k) {
  std::vector<ClusterSums> sums(k);
  std::vector<int> count(k, 0);
  for (int i = 0; i < graph.n; ++i) {
    sums[assignments[i]].weight_sum += graph.degree[i];
    ++count[assignments[i]];
  }
  for (const auto& e : graph.edges)
    if (assignments[e.u] == assignments[e.v]) sums[assignments[e.u]].internal_links += 2.0 * e.w;
  double j = 0.0;
  for (int c = 0; c < k; ++c) j += shift * (count[c] - 1) - sums[c].internal_links / sums[c].weight_sum;
  return j + lambda * k;
}

// Mirrors the frozen-member-set pass of run_weighted_kernel_dpmeans with
// distances evaluated from adjacency lists and cached cluster sums. A point
// that spawns stays in its old cluster's frozen membership, just as the dense
// route keeps start-of-pass member sets intact.
KernelClustering sparse_spawning_pass(const SparseGraph& graph, double shift, double lambda, int max_iters) {
  int n = graph.n;
  KernelClustering out;
  out.assignments.assign(n, 0);
  out.k = 1;

  for (int pass = 0; pass < max_iters; ++pass) {
    ++out.iterations;
    std::vector<int> prev = out.assignments;
    const std::vector<int> frozen = out.assignments;

    std::vector<ClusterSums> sums(out.k);
    for (int i = 0; i < n; ++i) sums[frozen[i]].weight_sum += graph.degree[i];
    for (const auto& e : graph.edges)
      if (frozen[e.u] == frozen[e.v]) sums[frozen[e.u]].internal_links += 2.0 * e.w;

    int start_k = out.k;
    std::vector<int> spawners;                 // frozen singleton member per spawned cluster
    std::vector<int> spawned_id(n, -1);        // point -> spawned cluster index, this pass
    std::vector<double> links(start_k, 0.0);
    for (int x = 0; x < n; ++x) {
      std::fill(links.begin(), links.end(), 0.0);
      std::vector<double> spawn_links(spawners.size(), 0.0);
      for (const auto& [nbr, w] : graph.adj[x]) {
        links[frozen[nbr]] += w;
        if (spawned_id[nbr] >= 0) spawn_links[spawned_id[nbr]] += w;
      }
      double deg = graph.degree[x];
      double best_d = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < start_k; ++c) {
        double s = sums[c].weight_sum;
        double in_c = frozen[x] == c ? 1.0 : 0.0;
        double d = shift / deg - 2.0 * (shift * in_c + links[c] / deg) / s +
                   (shift * s + sums[c].internal_links) / (s * s);
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      for (std::size_t j = 0; j < spawners.size(); ++j) {
        double s = graph.degree[spawners[j]];
        double d = shift / deg - 2.0 * (spawn_links[j] / deg) / s + shift / s;
        if (d < best_d) {
          best_d = d;
          best_c = start_k + static_cast<int>(j);
        }
      }
      if (deg * best_d > lambda) {
        out.assignments[x] = start_k + static_cast<int>(spawners.size());
        spawned_id[x] = static_cast<int>(spawners.size());
        spawners.push_back(x);
      } else {
        out.assignments[x] = best_c;
      }
    }

    int live_k = start_k + static_cast<int>(spawners.size());
    std::vector<int> count(live_k, 0);
    for (int a : out.assignments) ++count[a];
    std::vector<int> remap(live_k, -1);
    out.k = 0;
    for (int c = 0; c < live_k; ++c)
      if (count[c] > 0) remap[c] = out.k++;
    for (int& a : out.assignments) a = remap[a];

    out.objective = sparse_kernel_objective(graph, shift, lambda, out.assignments, out.k);
    out.objective_trace.push_back(out.objective);
    if (out.assignments == prev) break;
  }
  return out;
}

}  // namespace

NcutResult run_penalized_ncut(const SparseGraph& graph, const NcutConfig& config) {
  if (!(config.lambda_prime > 0.0) || !std::isfinite(config.lambda_prime))
    throw std::invalid_argument("run_penalized_ncut: lambda_prime must be positive and finite");
  double shift = config.shift.value_or(auto_shift(graph));
  double lambda = config.lambda_prime + shift + 1.0;

  NcutResult out;
  out.shift = shift;
  KernelClustering kc;
  if (config.sparse_path) {
    kc = sparse_spawning_pass(graph, shift, lambda, config.max_iters);
  } else {
    auto [k, w] = build_ncut_kernel(graph, shift);
    kc = run_weighted_kernel_dpmeans(k, w, lambda, {}, config.max_iters);
  }
  out.penalized_trace = kc.objective_trace;
  for (double& v : out.penalized_trace) v -= shift * graph.n;
  out.assignments = kc.assignments;
  out.k = kc.k;
  out.iterations = kc.iterations;
  out.penalized_cut = cut_objective(graph, out.assignments) + config.lambda_prime * out.k;
  return out;
}

}  // namespace npclust

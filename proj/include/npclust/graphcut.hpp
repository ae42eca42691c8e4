#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "npclust/core.hpp"
#include "npclust/kernel.hpp"

namespace npclust {

// Undirected weighted graph without self-loops or isolated vertices. Each
// edge is stored once in `edges` and mirrored in the adjacency lists.
struct SparseGraph {
  struct Edge {
    int u = 0;
    int v = 0;
    double w = 0.0;
  };

  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> degree;

  static SparseGraph from_edges(int n, const std::vector<Edge>& edges);
};

// One "i j weight" triple per line, vertices 0-indexed, each undirected edge
// listed once. '#' starts a comment. Vertex count is one past the largest
// index seen.
SparseGraph read_edge_list(std::istream& in);
SparseGraph read_edge_list_file(const std::string& path);

// K_ij = shift * [i == j] / deg_i + A_ij / (deg_i * deg_j), paired with node
// weights w_i = deg_i. Throws when K is indefinite beyond 1e-8.
std::pair<KernelMatrix, WeightVector> build_ncut_kernel(const SparseGraph& graph, double shift);

// Smallest diagonal shift making the kernel positive semidefinite, plus a
// 1e-6 margin.
double auto_shift(const SparseGraph& graph);

// Sum over clusters of (weight escaping the cluster) / (total degree of the
// cluster). Every cluster id in 0..k-1 must be non-empty.
double cut_objective(const SparseGraph& graph, const std::vector<int>& assignments);

struct NcutConfig {
  double lambda_prime = 1.0;
  std::optional<double> shift;  // defaults to auto_shift
  int max_iters = 1000;
  bool sparse_path = false;
};

struct NcutResult {
  std::vector<int> assignments;
  int k = 0;
  double penalized_cut = 0.0;           // cut_objective + lambda_prime * k
  double shift = 0.0;
  std::vector<double> penalized_trace;  // per pass, derived from the kernel objective
  int iterations = 0;
};

// Runs the weighted kernel spawning pass on the degree-normalized kernel with
// lambda = lambda_prime + shift + 1, visiting vertices in id order.
NcutResult run_penalized_ncut(const SparseGraph& graph, const NcutConfig& config);

// Cached per-cluster quantities for the adjacency-only distance evaluation.
struct ClusterSums {
  double weight_sum = 0.0;      // sum of member degrees
  double internal_links = 0.0;  // sum of A_ij over ordered member pairs
};

// Same value as kernel_point_to_cluster_dist on the degree-normalized kernel,
// computed from the node's incident edges and the cached sums. Membership is
// read from `frozen_assignments`.
double node_to_cluster_distance_sparse(const SparseGraph& graph, double shift, int node,
                                       const std::vector<int>& frozen_assignments, int cluster,
                                       const ClusterSums& sums);

}  // namespace npclust

#pragma once

#include <cstdint>
#include <vector>

#include "npclust/core.hpp"

namespace npclust {

// Result of any flat clustering run. Cluster ids are 0..k-1 with no gaps;
// centroids row c is the mean of the points assigned to c.
struct Clustering {
  std::vector<int> assignments;
  Matrix centroids;
  int k = 0;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> objective_trace;  // one entry per completed pass
};

struct DpMeansConfig {
  double lambda = 1.0;
  int max_iters = 1000;
  double objective_tol = 1e-9;
};

// Penalized objective: total within-cluster distortion about the member means
// plus lambda times the number of clusters. Every id in 0..k-1 must be used.
double dpmeans_objective(const PointSet& points, const Clustering& clustering, double lambda);

// Single-pass-per-iteration sequential algorithm: a point further than lambda
// (squared distance, strictly) from every current centroid becomes a new
// singleton cluster whose centroid is immediately visible to later points in
// the same pass. Centroids of existing clusters are refreshed only between
// passes; empty clusters are pruned with ids compacted in creation order.
Clustering run_dpmeans(const PointSet& points, const DpMeansConfig& config);

// Same algorithm with the point order permuted by a seeded shuffle;
// assignments are reported in the original order.
Clustering run_dpmeans_shuffled(const PointSet& points, const DpMeansConfig& config, std::uint64_t seed);

// Lloyd iterations with k fixed. Restart 0 seeds centroids by farthest-first
// traversal; further restarts draw k distinct points at random. An emptied
// cluster is re-seeded with the point currently farthest from its own
// centroid. The best restart by objective wins.
Clustering run_kmeans(const PointSet& points, int k, std::uint64_t seed, int max_iters = 100, int restarts = 1);

// Farthest-first traversal starting from the global mean. round_values[r] is
// the max-min squared distance that justified adding the (r+1)-th point.
struct FarthestFirst {
  std::vector<int> chosen;
  std::vector<double> round_values;
};
FarthestFirst farthest_first(const PointSet& points, int rounds);

// Penalty suggestion for a target cluster count: the round value of the
// k_hint-th farthest-first addition.
double farthest_first_lambda(const PointSet& points, int k_hint);

}  // namespace npclust

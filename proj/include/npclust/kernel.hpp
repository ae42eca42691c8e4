#pragma once

#include <variant>
#include <vector>

#include "npclust/core.hpp"

namespace npclust {

// Gram matrix of a positive-semidefinite kernel. Construction trusts the
// caller; check_psd() runs the eigenvalue diagnostic on demand.
struct KernelMatrix {
  SymmetricMatrix gram;
  double psd_tolerance = 1e-8;

  KernelMatrix() = default;
  explicit KernelMatrix(SymmetricMatrix g, double tol = 1e-8) : gram(std::move(g)), psd_tolerance(tol) {}

  int n() const { return gram.n(); }
  // Throws if the smallest eigenvalue is below -psd_tolerance.
  void check_psd() const;
};

struct WeightVector {
  std::vector<double> w;

  WeightVector() = default;
  explicit WeightVector(std::vector<double> weights);

  int n() const { return static_cast<int>(w.size()); }
};

WeightVector unit_weights(int n);

struct LinearKernel {};
struct GaussianKernel {
  double bandwidth = 1.0;
};
using KernelSpec = std::variant<LinearKernel, GaussianKernel>;

KernelMatrix build_kernel(const PointSet& points, const KernelSpec& spec);

// Squared feature-space distance from point x to the weighted mean of the
// member rows.
double kernel_point_to_cluster_dist(const KernelMatrix& k, const WeightVector& w, int x,
                                    std::span<const int> members);

// Weighted distortion about per-cluster weighted means plus lambda * k.
double weighted_kernel_objective(const KernelMatrix& k, const WeightVector& w,
                                 const std::vector<int>& assignments, double lambda);

struct KernelClustering {
  std::vector<int> assignments;
  int k = 0;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> objective_trace;
};

// The sequential spawning pass over implicit feature-space centroids. Member
// sets are frozen per pass for distance evaluation, mirroring the explicit
// algorithm: a spawned cluster keeps its spawning point as the frozen
// centroid until the pass ends, and refreshed member means take over between
// passes. Point x spawns when w_x times its nearest frozen distance exceeds
// lambda strictly. An empty order means 0..n-1.
KernelClustering run_weighted_kernel_dpmeans(const KernelMatrix& k, const WeightVector& w, double lambda,
                                             const std::vector<int>& order = {}, int max_iters = 1000);

}  // namespace npclust

#pragma once

#include <cstdint>
#include <vector>

#include "npclust/core.hpp"
#include "npclust/dpmeans.hpp"

namespace npclust {

// Collapsed-weights sampler over cluster indicators and cluster means, with
// an isotropic Gaussian likelihood (variance sigma), a zero-centered
// Gaussian mean prior (variance rho), and concentration stored in log space
// so penalty-derived values survive tiny sigma.
struct GibbsConfig {
  double sigma = 1.0;
  double rho = 100.0;
  double log_alpha = 0.0;
  int iterations = 100;
  int burn_in = 10;
  int thinning = 1;
  std::uint64_t seed = 0;
  bool sample_alpha = false;  // gamma-prior concentration resampling
  double alpha_shape = 1.0;
  double alpha_rate = 1.0;
};

// log of (1 + rho / sigma)^(d/2) * exp(-lambda / (2 sigma)).
double log_alpha_from_lambda(double lambda, double sigma, double rho, int dims);
// The same value exponentiated; throws when the log is not finite.
double alpha_from_lambda(double lambda, double sigma, double rho, int dims);

struct GibbsState {
  std::vector<int> assignments;
  Matrix means;  // k x d
  std::vector<int> sizes;
  double log_alpha = 0.0;

  int k() const { return static_cast<int>(sizes.size()); }
};

// Posterior assignment probabilities for point x given a state from which x
// has already been removed: k entries for the existing clusters and a final
// entry for a fresh cluster. Computed by log-sum-exp.
std::vector<double> assignment_distribution(const GibbsState& state, std::span<const double> x,
                                            const GibbsConfig& config);

// Draws a cluster mean from its Gaussian posterior given the member points.
std::vector<double> sample_mean_posterior(const PointSet& points, std::span<const int> members,
                                          double sigma, double rho, Rng& rng);

// log p(assignments, means, points) under the exchangeable-partition prior,
// the mean prior, and the likelihood.
double complete_data_log_joint(const PointSet& points, const GibbsState& state, const GibbsConfig& config);

struct GibbsResult {
  std::vector<GibbsState> samples;      // post burn-in, thinned
  std::vector<double> sample_log_joints;
  std::vector<int> k_trace;             // k after every sweep
  Clustering point_estimate;            // emitted sample with the best log joint
  double best_log_joint = 0.0;
};

// Sweeps: per-point removal and reassignment (possibly to a fresh cluster
// whose mean is drawn from its single-point posterior), then a mean redraw
// per cluster, then optionally a concentration redraw.
GibbsResult run_gibbs(const PointSet& points, const GibbsConfig& config);

}  // namespace npclust

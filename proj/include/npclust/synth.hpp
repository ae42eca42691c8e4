#pragma once

#include <cstdint>
#include <vector>

#include "npclust/core.hpp"
#include "npclust/hdpmeans.hpp"

namespace npclust {

struct LabeledDataset {
  PointSet points;
  std::vector<int> labels;
};

// Isotropic Gaussian mixture: counts[c] draws around means row c with the
// shared per-coordinate variance. Points are emitted in component order.
struct MixtureSpec {
  Matrix means;
  double variance = 1.0;
  std::vector<int> counts;
  std::uint64_t seed = 0;
};

LabeledDataset gen_gaussian_mixture(const MixtureSpec& spec);

// Three components on an equilateral triangle with side separation * std.
MixtureSpec three_gaussian_spec(std::uint64_t seed, int points_per_component = 50,
                                double separation = 16.0, double stddev = 1.0);

// Grouped benchmark: shared_components isotropic Gaussians (variance 0.01)
// with means uniform on the unit square; each of n_datasets draws
// components_per_dataset of them without replacement and samples
// points_per_component points from each. Labels are the shared component
// ids.
struct HdpBenchmark {
  DatasetCollection data;
  std::vector<std::vector<int>> labels;
};

HdpBenchmark gen_hdp_benchmark(std::uint64_t seed, int n_datasets = 50, int shared_components = 15,
                               int components_per_dataset = 5, int points_per_component = 5);

}  // namespace npclust

#include "npclust/synth.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace npclust {

LabeledDataset gen_gaussian_mixture(const MixtureSpec& spec) {
  const int k = spec.means.rows();
  const int d = spec.means.cols();
  if (k < 1) throw std::invalid_argument("mixture needs at least one component");
  if (static_cast<int>(spec.counts.size()) != k)
    throw std::invalid_argument("counts size must match number of component means");
  if (!(spec.variance > 0.0) || !std::isfinite(spec.variance))
    throw std::invalid_argument("mixture variance must be positive and finite");
  int n = 0;
  for (int c = 0; c < k; ++c) {
    if (spec.counts[c] < 1) throw std::invalid_argument("each component count must be at least 1");
    n += spec.counts[c];
  }
  const double stddev = std::sqrt(spec.variance);
  Rng rng(spec.seed);
  Matrix pts(n, d);
  std::vector<int> labels(n);
  int row = 0;
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < spec.counts[c]; ++i, ++row) {
      for (int j = 0; j < d; ++j) pts(row, j) = spec.means(c, j) + stddev * rng.normal();
      labels[row] = c;
    }
  }
  return {PointSet(std::move(pts)), std::move(labels)};
}

MixtureSpec three_gaussian_spec(std::uint64_t seed, int points_per_component, double separation,
                                double stddev) {
  if (points_per_component < 1) throw std::invalid_argument("points_per_component must be positive");
  if (!(separation > 0.0) || !(stddev > 0.0))
    throw std::invalid_argument("separation and stddev must be positive");
  const double side = separation * stddev;
  // Equilateral triangle with side `side`, centered at the origin.
  const double h = side * std::sqrt(3.0) / 2.0;
  MixtureSpec spec;
  spec.means = Matrix(3, 2);
  spec.means(0, 0) = -side / 2.0;
  spec.means(0, 1) = -h / 3.0;
  spec.means(1, 0) = side / 2.0;
  spec.means(1, 1) = -h / 3.0;
  spec.means(2, 0) = 0.0;
  spec.means(2, 1) = 2.0 * h / 3.0;
  spec.variance = stddev * stddev;
  spec.counts = {points_per_component, points_per_component, points_per_component};
  spec.seed = seed;
  return spec;
}

HdpBenchmark gen_hdp_benchmark(std::uint64_t seed, int n_datasets, int shared_components,
                               int components_per_dataset, int points_per_component) {
  if (n_datasets < 1 || shared_components < 1 || components_per_dataset < 1 ||
      points_per_component < 1)
    throw std::invalid_argument("benchmark sizes must be positive");
  if (components_per_dataset > shared_components)
    throw std::invalid_argument("cannot draw more components per dataset than exist");
  Rng rng(seed);
  Matrix means(shared_components, 2);
  for (int c = 0; c < shared_components; ++c) {
    means(c, 0) = rng.uniform();
    means(c, 1) = rng.uniform();
  }
  const double stddev = 0.1;
  HdpBenchmark bench;
  std::vector<PointSet> datasets;
  datasets.reserve(n_datasets);
  std::vector<int> pool(shared_components);
  for (int j = 0; j < n_datasets; ++j) {
    for (int c = 0; c < shared_components; ++c) pool[c] = c;
    // Partial Fisher-Yates: the first components_per_dataset entries become
    // this dataset's components.
    for (int i = 0; i < components_per_dataset; ++i) {
      const int pick = i + rng.uniform_int(shared_components - i);
      std::swap(pool[i], pool[pick]);
    }
    const int nj = components_per_dataset * points_per_component;
    Matrix pts(nj, 2);
    std::vector<int> labels(nj);
    int row = 0;
    for (int i = 0; i < components_per_dataset; ++i) {
      const int c = pool[i];
      for (int p = 0; p < points_per_component; ++p, ++row) {
        pts(row, 0) = means(c, 0) + stddev * rng.normal();
        pts(row, 1) = means(c, 1) + stddev * rng.normal();
        labels[row] = c;
      }
    }
    datasets.emplace_back(std::move(pts));
    bench.labels.push_back(std::move(labels));
  }
  bench.data = DatasetCollection(std::move(datasets));
  return bench;
}

}  // namespace npclust

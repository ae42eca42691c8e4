#pragma once

#include <vector>

#include "npclust/core.hpp"
#include "npclust/graphcut.hpp"

namespace npclust {

// Label-pair contingency counts after compacting each labeling to 0..r-1 /
// 0..s-1 in order of first appearance.
struct ContingencyTable {
  std::vector<std::vector<long>> counts;
  int n = 0;
};

ContingencyTable contingency(const std::vector<int>& a, const std::vector<int>& b);

// Mutual information over the joint label distribution divided by the
// geometric mean of the two entropies (natural logs). Both labelings
// constant: 1. Exactly one entropy zero: 0.
double nmi(const std::vector<int>& a, const std::vector<int>& b);

// Visits every set partition of {0..n-1} as a restricted-growth assignment
// vector. Returns false once exhausted.
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(int n);
  const std::vector<int>& assignment() const { return a_; }
  int block_count() const { return max_ + 1; }
  bool next();

 private:
  std::vector<int> a_;
  std::vector<int> prefix_max_;
  int max_ = 0;
};

struct BruteForceResult {
  double objective = 0.0;
  std::vector<int> assignments;
};

// Exact minimum of distortion + lambda * k over all set partitions (n <= 12).
BruteForceResult brute_force_optimum(const PointSet& points, double lambda);

// Exact minimum of the penalized cut over all set partitions (n <= 10).
BruteForceResult brute_force_penalized_cut(const SparseGraph& graph, double lambda_prime);

}  // namespace npclust

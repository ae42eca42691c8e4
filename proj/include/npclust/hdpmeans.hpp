#pragma once

#include <functional>
#include <vector>

#include "npclust/core.hpp"

namespace npclust {

// D >= 1 point sets sharing one dimension.
struct DatasetCollection {
  std::vector<PointSet> datasets;

  DatasetCollection() = default;
  explicit DatasetCollection(std::vector<PointSet> ds);

  int size() const { return static_cast<int>(datasets.size()); }
  int dim() const { return datasets.front().dim(); }
  int total_points() const;
};

struct HdpConfig {
  double lambda_local = 1.0;
  double lambda_global = 1.0;
  int max_iters = 1000;
  double objective_tol = 1e-9;
};

// Two-level hard clustering state: point i of dataset j sits in local cluster
// local_assignments[j][i], and local cluster c of dataset j is associated to
// global cluster associations[j][c]. Global centroids are means over every
// point associated to them, across datasets.
struct HdpState {
  std::vector<std::vector<int>> local_assignments;
  std::vector<std::vector<int>> associations;
  Matrix global_centroids;
  int g = 0;
  std::vector<int> k_per_dataset;
  double objective = 0.0;
  int iterations = 0;
  std::vector<double> objective_trace;
  int step5_changes = 0;  // association moves plus mean-spawned globals, whole run
};

// Optional record of every per-point decision: the penalty-adjusted distance
// to each global at decision time and which global won.
struct HdpStepLog {
  struct PointDecision {
    int dataset = 0;
    int point = 0;
    std::vector<double> adjusted_dists;
    std::vector<char> associated;
    int chosen_global = -1;  // -1 when a fresh global was spawned
  };
  std::vector<PointDecision> step4;
};

// Total distortion about the global member means plus lambda_local * (total
// local cluster count) plus lambda_global * g.
double hdp_objective(const DatasetCollection& data, const HdpState& state, double lambda_local,
                     double lambda_global);

// One iteration = a per-point pass (globals not associated to the point's
// dataset cost lambda_local extra; beyond lambda_local + lambda_global the
// point spawns a fresh local-global pair at itself), a per-local-cluster
// re-association pass (a local mean spawns a global when every summed
// distance exceeds lambda_global plus the cluster's own distortion), then a
// global mean refresh with empty locals and globals pruned and ids compacted
// in creation order.
HdpState run_hard_hdp(const DatasetCollection& data, const HdpConfig& config, HdpStepLog* log = nullptr,
                      const std::function<void(const HdpState&)>& on_iteration = {});

struct HdpPenalties {
  double lambda_local = 0.0;
  double lambda_global = 0.0;
};

// lambda_local: mean over datasets of the per-dataset farthest-first value at
// k_hint rounds. lambda_global: farthest-first over the pooled collection
// where a candidate's score is its whole dataset's summed min-distance to T;
// each round adds the farthest point of the winning dataset, and the round
// g_hint score is rescaled by k_hint over the mean dataset size (the score
// sums over whole datasets, but the penalty gates sums over one local
// cluster's worth of points).
HdpPenalties select_hdp_penalties(const DatasetCollection& data, int k_hint, int g_hint);

}  // namespace npclust

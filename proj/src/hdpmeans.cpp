#include "npclust/hdpmeans.hpp"

#include "npclust/dpmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace npclust {

DatasetCollection::DatasetCollection(std::vector<PointSet> ds) : datasets(std::move(ds)) {
  if (datasets.empty()) throw std::invalid_argument("dataset collection must hold at least one dataset");
  for (const PointSet& p : datasets)
    if (p.dim() != datasets.front().dim())
      throw std::invalid_argument("datasets must share one dimension");
}

int DatasetCollection::total_points() const {
  int t = 0;
  for (const PointSet& p : datasets) t += p.n();
  return t;
}

double hdp_objective(const DatasetCollection& data, const HdpState& state, double lambda_local,
                     double lambda_global) {
  int d = data.dim();
  int total_local = 0;
  std::vector<std::vector<double>> sums(state.g, std::vector<double>(d, 0.0));
  std::vector<int> count(state.g, 0);
  for (int j = 0; j < data.size(); ++j) {
    const PointSet& ps = data.datasets[j];
    if (static_cast<int>(state.local_assignments[j].size()) != ps.n())
      throw std::invalid_argument("hdp_objective: assignment length mismatch");
    int kj = static_cast<int>(state.associations[j].size());
    total_local += kj;
    std::vector<int> local_count(kj, 0);
    for (int i = 0; i < ps.n(); ++i) {
      int c = state.local_assignments[j][i];
      if (c < 0 || c >= kj) throw std::invalid_argument("hdp_objective: local cluster id out of range");
      ++local_count[c];
      int p = state.associations[j][c];
      if (p < 0 || p >= state.g) throw std::invalid_argument("hdp_objective: dangling association");
      ++count[p];
      auto row = ps.point(i);
      for (int t = 0; t < d; ++t) sums[p][t] += row[t];
    }
    for (int c = 0; c < kj; ++c)
      if (local_count[c] == 0) throw std::invalid_argument("hdp_objective: empty local cluster");
  }
  for (int p = 0; p < state.g; ++p) {
    if (count[p] == 0) throw std::invalid_argument("hdp_objective: global cluster with no members");
    for (int t = 0; t < d; ++t) sums[p][t] /= static_cast<double>(count[p]);
  }
  double distortion = 0.0;
  for (int j = 0; j < data.size(); ++j) {
    const PointSet& ps = data.datasets[j];
    for (int i = 0; i < ps.n(); ++i) {
      int p = state.associations[j][state.local_assignments[j][i]];
      distortion += sq_dist(ps.point(i), sums[p]);
    }
  }
  return distortion + lambda_local * total_local + lambda_global * state.g;
}

namespace {

struct Workspace {
  std::vector<std::vector<double>> centroids;     // global id -> centroid
  std::vector<std::vector<int>> z;                // dataset -> point -> local id
  std::vector<std::vector<int>> assoc;            // dataset -> local id -> global id, -1 when dead
  std::vector<std::vector<int>> local_count;      // dataset -> local id -> member count
};

HdpState snapshot(const Workspace& ws, int dims) {
  HdpState s;
  s.local_assignments = ws.z;
  s.g = static_cast<int>(ws.centroids.size());
  s.global_centroids = Matrix(s.g, dims);
  for (int p = 0; p < s.g; ++p)
    std::copy(ws.centroids[p].begin(), ws.centroids[p].end(), s.global_centroids.row(p).begin());
  s.associations = ws.assoc;
  for (const auto& a : s.associations) s.k_per_dataset.push_back(static_cast<int>(a.size()));
  return s;
}

}  // namespace

HdpState run_hard_hdp(const DatasetCollection& data, const HdpConfig& config, HdpStepLog* log,
                      const std::function<void(const HdpState&)>& on_iteration) {
  if (!(config.lambda_local > 0.0) || !(config.lambda_global > 0.0) ||
      !std::isfinite(config.lambda_local) || !std::isfinite(config.lambda_global))
    throw std::invalid_argument("run_hard_hdp: penalties must be positive and finite");
  if (config.max_iters < 1) throw std::invalid_argument("run_hard_hdp: max_iters must be >= 1");

  int dims = data.dim();
  int nd = data.size();

  Workspace ws;
  {
    std::vector<double> grand(dims, 0.0);
    for (const PointSet& ps : data.datasets)
      for (int i = 0; i < ps.n(); ++i) {
        auto row = ps.point(i);
        for (int t = 0; t < dims; ++t) grand[t] += row[t];
      }
    for (double& v : grand) v /= static_cast<double>(data.total_points());
    ws.centroids.push_back(grand);
  }
  ws.z.resize(nd);
  ws.assoc.resize(nd);
  ws.local_count.resize(nd);
  for (int j = 0; j < nd; ++j) {
    ws.z[j].assign(data.datasets[j].n(), 0);
    ws.assoc[j] = {0};
    ws.local_count[j] = {data.datasets[j].n()};
  }

  HdpState out;
  double prev_objective = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> prev_z;
  std::vector<std::vector<int>> prev_assoc;

  for (int pass = 0; pass < config.max_iters; ++pass) {
    ++out.iterations;

    // Per-point pass. Fresh global clusters are visible to every later point.
    for (int j = 0; j < nd; ++j) {
      const PointSet& ps = data.datasets[j];
      for (int i = 0; i < ps.n(); ++i) {
        int g = static_cast<int>(ws.centroids.size());
        std::vector<char> associated(g, 0);
        for (int p : ws.assoc[j])
          if (p >= 0) associated[p] = 1;

        auto x = ps.point(i);
        double best_d = std::numeric_limits<double>::infinity();
        int best_p = -1;
        std::vector<double> dists(g, 0.0);
        for (int p = 0; p < g; ++p) {
          double d = sq_dist(x, ws.centroids[p]);
          if (!associated[p]) d += config.lambda_local;
          dists[p] = d;
          if (d < best_d) {
            best_d = d;
            best_p = p;
          }
        }

        int old_c = ws.z[j][i];
        int new_c;
        bool spawned = best_d > config.lambda_local + config.lambda_global;
        if (spawned) {
          ws.centroids.emplace_back(x.begin(), x.end());
          new_c = static_cast<int>(ws.assoc[j].size());
          ws.assoc[j].push_back(g);
          ws.local_count[j].push_back(0);
        } else {
          new_c = -1;
          for (int c = 0; c < static_cast<int>(ws.assoc[j].size()); ++c)
            if (ws.assoc[j][c] == best_p) {
              new_c = c;
              break;
            }
          if (new_c < 0) {
            new_c = static_cast<int>(ws.assoc[j].size());
            ws.assoc[j].push_back(best_p);
            ws.local_count[j].push_back(0);
          }
        }
        if (log) log->step4.push_back({j, i, std::move(dists), std::move(associated), spawned ? -1 : best_p});
        if (new_c != old_c) {
          ws.z[j][i] = new_c;
          ++ws.local_count[j][new_c];
          if (--ws.local_count[j][old_c] == 0) ws.assoc[j][old_c] = -1;  // prune dead local now
        }
      }
    }

    // Per-local-cluster pass: re-associate each local cluster to the global
    // minimizing the summed distance, or promote its mean to a fresh global.
    for (int j = 0; j < nd; ++j) {
      const PointSet& ps = data.datasets[j];
      for (int c = 0; c < static_cast<int>(ws.assoc[j].size()); ++c) {
        if (ws.assoc[j][c] < 0) continue;
        std::vector<int> members;
        for (int i = 0; i < ps.n(); ++i)
          if (ws.z[j][i] == c) members.push_back(i);
        std::vector<double> local_mean = mean_of(ps, members);
        double local_distortion = 0.0;
        for (int i : members) local_distortion += sq_dist(ps.point(i), local_mean);

        double best_d = std::numeric_limits<double>::infinity();
        int best_p = 0;
        for (int p = 0; p < static_cast<int>(ws.centroids.size()); ++p) {
          double d = 0.0;
          for (int i : members) d += sq_dist(ps.point(i), ws.centroids[p]);
          if (d < best_d) {
            best_d = d;
            best_p = p;
          }
        }
        if (best_d > config.lambda_global + local_distortion) {
          ws.centroids.push_back(local_mean);
          ws.assoc[j][c] = static_cast<int>(ws.centroids.size()) - 1;
          ++out.step5_changes;
        } else if (best_p != ws.assoc[j][c]) {
          ws.assoc[j][c] = best_p;
          ++out.step5_changes;
        }
      }
    }

    // Refresh global means over their associated points; prune empty globals
    // and dead locals, compacting ids in creation order.
    {
      int g = static_cast<int>(ws.centroids.size());
      std::vector<std::vector<double>> sums(g, std::vector<double>(dims, 0.0));
      std::vector<int> count(g, 0);
      for (int j = 0; j < nd; ++j) {
        const PointSet& ps = data.datasets[j];
        for (int i = 0; i < ps.n(); ++i) {
          int p = ws.assoc[j][ws.z[j][i]];
          ++count[p];
          auto row = ps.point(i);
          for (int t = 0; t < dims; ++t) sums[p][t] += row[t];
        }
      }
      std::vector<int> remap(g, -1);
      int fresh = 0;
      for (int p = 0; p < g; ++p)
        if (count[p] > 0) remap[p] = fresh++;
      std::vector<std::vector<double>> centroids(fresh, std::vector<double>(dims, 0.0));
      for (int p = 0; p < g; ++p) {
        if (count[p] == 0) continue;
        for (int t = 0; t < dims; ++t) centroids[remap[p]][t] = sums[p][t] / count[p];
      }
      ws.centroids = std::move(centroids);
      for (int j = 0; j < nd; ++j) {
        std::vector<int> local_remap(ws.assoc[j].size(), -1);
        std::vector<int> assoc, local_count;
        for (int c = 0; c < static_cast<int>(ws.assoc[j].size()); ++c) {
          if (ws.assoc[j][c] < 0) continue;
          local_remap[c] = static_cast<int>(assoc.size());
          assoc.push_back(remap[ws.assoc[j][c]]);
          local_count.push_back(ws.local_count[j][c]);
        }
        for (int& zi : ws.z[j]) zi = local_remap[zi];
        ws.assoc[j] = std::move(assoc);
        ws.local_count[j] = std::move(local_count);
      }
    }

    HdpState snap = snapshot(ws, dims);
    snap.iterations = out.iterations;
    snap.step5_changes = out.step5_changes;
    double objective = hdp_objective(data, snap, config.lambda_local, config.lambda_global);
    out.objective_trace.push_back(objective);
    out.objective = objective;
    snap.objective = objective;
    snap.objective_trace = out.objective_trace;
    if (on_iteration) on_iteration(snap);

    if (ws.z == prev_z && ws.assoc == prev_assoc) break;
    prev_z = ws.z;
    prev_assoc = ws.assoc;
    if (prev_objective - objective < config.objective_tol) break;
    prev_objective = objective;
  }

  HdpState final_state = snapshot(ws, dims);
  final_state.iterations = out.iterations;
  final_state.step5_changes = out.step5_changes;
  final_state.objective = out.objective;
  final_state.objective_trace = out.objective_trace;
  return final_state;
}

HdpPenalties select_hdp_penalties(const DatasetCollection& data, int k_hint, int g_hint) {
  if (k_hint < 1 || g_hint < 1) throw std::invalid_argument("select_hdp_penalties: hints must be >= 1");
  for (const PointSet& ps : data.datasets)
    if (k_hint > ps.n()) throw std::invalid_argument("select_hdp_penalties: k_hint exceeds a dataset size");
  if (g_hint > data.total_points()) throw std::invalid_argument("select_hdp_penalties: g_hint exceeds the pooled size");

  HdpPenalties out;
  for (const PointSet& ps : data.datasets) out.lambda_local += farthest_first_lambda(ps, k_hint);
  out.lambda_local /= static_cast<double>(data.size());

  std::vector<double> grand(data.dim(), 0.0);
  for (const PointSet& ps : data.datasets)
    for (int i = 0; i < ps.n(); ++i) {
      auto row = ps.point(i);
      for (int t = 0; t < data.dim(); ++t) grand[t] += row[t];
    }
  for (double& v : grand) v /= static_cast<double>(data.total_points());

  std::vector<std::vector<double>> min_d(data.size());
  for (int j = 0; j < data.size(); ++j) {
    const PointSet& ps = data.datasets[j];
    min_d[j].resize(ps.n());
    for (int i = 0; i < ps.n(); ++i) min_d[j][i] = sq_dist(ps.point(i), grand);
  }
  for (int round = 0; round < g_hint; ++round) {
    int best_j = 0;
    double best_score = -1.0;
    for (int j = 0; j < data.size(); ++j) {
      double score = std::accumulate(min_d[j].begin(), min_d[j].end(), 0.0);
      if (score > best_score) {
        best_score = score;
        best_j = j;
      }
    }
    out.lambda_global = best_score;
    int best_i = 0;
    for (int i = 1; i < data.datasets[best_j].n(); ++i)
      if (min_d[best_j][i] > min_d[best_j][best_i]) best_i = i;
    auto added = data.datasets[best_j].point(best_i);
    for (int j = 0; j < data.size(); ++j)
      for (int i = 0; i < data.datasets[j].n(); ++i)
        min_d[j][i] = std::min(min_d[j][i], sq_dist(data.datasets[j].point(i), added));
  }
  // The round score sums residuals over a whole dataset (mean size n-bar),
  // but the algorithm compares lambda_global against sums over one local
  // cluster of roughly n-bar / k_hint points; rescale to align the two.
  const double mean_size = static_cast<double>(data.total_points()) / data.size();
  out.lambda_global *= static_cast<double>(k_hint) / mean_size;
  return out;
}

}  // namespace npclust

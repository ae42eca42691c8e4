#include "npclust/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace npclust {

void KernelMatrix::check_psd() const {
  EigenDecomposition eig = sym_eig(gram);
  double min_e = eig.eigenvalues.back();
  if (min_e < -psd_tolerance)
    throw std::runtime_error("kernel matrix is not positive semidefinite within tolerance");
}

WeightVector::WeightVector(std::vector<double> weights) : w(std::move(weights)) {
  if (w.empty()) throw std::invalid_argument("weight vector must be non-empty");
  for (double v : w)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("weights must be positive and finite");
}

WeightVector unit_weights(int n) { return WeightVector(std::vector<double>(n, 1.0)); }

KernelMatrix build_kernel(const PointSet& points, const KernelSpec& spec) {
  int n = points.n();
  Matrix g(n, n);
  if (std::holds_alternative<LinearKernel>(spec)) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = dot(points.point(i), points.point(j));
        g(i, j) = v;
        g(j, i) = v;
      }
  } else {
    double b = std::get<GaussianKernel>(spec).bandwidth;
    if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("gaussian kernel bandwidth must be positive");
    for (int i = 0; i < n; ++i) {
      g(i, i) = 1.0;
      for (int j = i + 1; j < n; ++j) {
        double v = std::exp(-sq_dist(points.point(i), points.point(j)) / (2.0 * b * b));
        g(i, j) = v;
        g(j, i) = v;
      }
    }
  }
  return KernelMatrix(SymmetricMatrix(std::move(g)));
}

double kernel_point_to_cluster_dist(const KernelMatrix& k, const WeightVector& w, int x,
                                    std::span<const int> members) {
  if (members.empty()) throw std::invalid_argument("kernel_point_to_cluster_dist: empty cluster");
  if (w.n() != k.n()) throw std::invalid_argument("kernel_point_to_cluster_dist: weight length mismatch");
  if (x < 0 || x >= k.n()) throw std::out_of_range("kernel_point_to_cluster_dist: point index out of range");
  const Matrix& g = k.gram.m;
  double s = 0.0, cross = 0.0, inner = 0.0;
  for (int i : members) {
    if (i < 0 || i >= k.n()) throw std::out_of_range("kernel_point_to_cluster_dist: member index out of range");
    s += w.w[i];
    cross += w.w[i] * g(x, i);
    double row = 0.0;
    for (int j : members) row += w.w[j] * g(i, j);
    inner += w.w[i] * row;
  }
  return g(x, x) - 2.0 * cross / s + inner / (s * s);
}

double weighted_kernel_objective(const KernelMatrix& k, const WeightVector& w,
                                 const std::vector<int>& assignments, double lambda) {
  if (static_cast<int>(assignments.size()) != k.n())
    throw std::invalid_argument("weighted_kernel_objective: assignment length mismatch");
  int nc = 0;
  for (int a : assignments) nc = std::max(nc, a + 1);
  std::vector<std::vector<int>> members(nc);
  for (int i = 0; i < k.n(); ++i) {
    if (assignments[i] < 0) throw std::invalid_argument("weighted_kernel_objective: negative cluster id");
    members[assignments[i]].push_back(i);
  }
  const Matrix& g = k.gram.m;
  double j_total = 0.0;
  int live = 0;
  for (const auto& c : members) {
    if (c.empty()) throw std::invalid_argument("weighted_kernel_objective: empty cluster id referenced");
    ++live;
    double s = 0.0, diag = 0.0, inner = 0.0;
    for (int i : c) {
      s += w.w[i];
      diag += w.w[i] * g(i, i);
      double row = 0.0;
      for (int j : c) row += w.w[j] * g(i, j);
      inner += w.w[i] * row;
    }
    j_total += diag - inner / s;
  }
  return j_total + lambda * static_cast<double>(live);
}

KernelClustering run_weighted_kernel_dpmeans(const KernelMatrix& k, const WeightVector& w, double lambda,
                                             const std::vector<int>& order, int max_iters) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("run_weighted_kernel_dpmeans: lambda must be positive and finite");
  int n = k.n();
  if (w.n() != n) throw std::invalid_argument("run_weighted_kernel_dpmeans: weight length mismatch");
  std::vector<int> visit = order;
  if (visit.empty()) {
    visit.resize(n);
    std::iota(visit.begin(), visit.end(), 0);
  }
  if (static_cast<int>(visit.size()) != n) throw std::invalid_argument("run_weighted_kernel_dpmeans: order must visit every point once");
  {
    std::vector<char> seen(n, 0);
    for (int i : visit) {
      if (i < 0 || i >= n || seen[i]) throw std::invalid_argument("run_weighted_kernel_dpmeans: order must visit every point once");
      seen[i] = 1;
    }
  }

  const Matrix& g = k.gram.m;
  KernelClustering out;
  out.assignments.assign(n, 0);
  out.k = 1;

  for (int pass = 0; pass < max_iters; ++pass) {
    ++out.iterations;
    std::vector<int> prev = out.assignments;

    // Frozen view of the clusters for this pass.
    std::vector<std::vector<int>> frozen(out.k);
    for (int i = 0; i < n; ++i) frozen[out.assignments[i]].push_back(i);
    std::vector<double> weight_sum(out.k, 0.0), inner(out.k, 0.0);
    for (int c = 0; c < out.k; ++c) {
      for (int i : frozen[c]) {
        weight_sum[c] += w.w[i];
        double row = 0.0;
        for (int j : frozen[c]) row += w.w[j] * g(i, j);
        inner[c] += w.w[i] * row;
      }
    }

    int live_k = out.k;
    for (int x : visit) {
      double best_d = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < live_k; ++c) {
        double cross = 0.0;
        for (int i : frozen[c]) cross += w.w[i] * g(x, i);
        double d = g(x, x) - 2.0 * cross / weight_sum[c] + inner[c] / (weight_sum[c] * weight_sum[c]);
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      if (w.w[x] * best_d > lambda) {
        frozen.push_back({x});
        weight_sum.push_back(w.w[x]);
        inner.push_back(w.w[x] * w.w[x] * g(x, x));
        out.assignments[x] = live_k;
        ++live_k;
      } else {
        out.assignments[x] = best_c;
      }
    }

    // Compact ids of surviving clusters in creation order.
    std::vector<int> count(live_k, 0);
    for (int a : out.assignments) ++count[a];
    std::vector<int> remap(live_k, -1);
    out.k = 0;
    for (int c = 0; c < live_k; ++c)
      if (count[c] > 0) remap[c] = out.k++;
    for (int& a : out.assignments) a = remap[a];

    out.objective = weighted_kernel_objective(k, w, out.assignments, lambda);
    out.objective_trace.push_back(out.objective);
    if (out.assignments == prev) break;
  }
  return out;
}

}  // namespace npclust

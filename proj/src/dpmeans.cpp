#include "npclust/dpmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace npclust {

namespace {

// Drops unused cluster ids (preserving relative order), renumbers the
// assignments, and recomputes centroids as member means.
void rebuild_clusters(const PointSet& points, std::vector<int>& assignments, Matrix& centroids, int& k) {
  std::vector<int> count(k, 0);
  for (int a : assignments) ++count[a];
  std::vector<int> remap(k, -1);
  int next = 0;
  for (int c = 0; c < k; ++c)
    if (count[c] > 0) remap[c] = next++;
  Matrix fresh(next, points.dim(), 0.0);
  std::vector<int> fresh_count(next, 0);
  for (int i = 0; i < points.n(); ++i) {
    int c = remap[assignments[i]];
    assignments[i] = c;
    ++fresh_count[c];
    auto row = points.point(i);
    for (int j = 0; j < points.dim(); ++j) fresh(c, j) += row[j];
  }
  for (int c = 0; c < next; ++c)
    for (int j = 0; j < points.dim(); ++j) fresh(c, j) /= static_cast<double>(fresh_count[c]);
  centroids = std::move(fresh);
  k = next;
}

double distortion(const PointSet& points, const std::vector<int>& assignments, const Matrix& centroids) {
  double s = 0.0;
  for (int i = 0; i < points.n(); ++i) s += sq_dist(points.point(i), centroids.row(assignments[i]));
  return s;
}

// Index of the nearest centroid, ties to the smallest id.
int nearest(std::span<const double> x, const Matrix& centroids, double* dist_out) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < centroids.rows(); ++c) {
    double d = sq_dist(x, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  *dist_out = best_d;
  return best;
}

}  // namespace

double dpmeans_objective(const PointSet& points, const Clustering& clustering, double lambda) {
  if (static_cast<int>(clustering.assignments.size()) != points.n())
    throw std::invalid_argument("dpmeans_objective: assignment length mismatch");
  int k = clustering.k;
  std::vector<int> count(k, 0);
  for (int a : clustering.assignments) {
    if (a < 0 || a >= k) throw std::invalid_argument("dpmeans_objective: assignment id out of range");
    ++count[a];
  }
  for (int c = 0; c < k; ++c)
    if (count[c] == 0) throw std::invalid_argument("dpmeans_objective: empty cluster id referenced");
  Matrix means(k, points.dim(), 0.0);
  for (int i = 0; i < points.n(); ++i) {
    auto row = points.point(i);
    for (int j = 0; j < points.dim(); ++j) means(clustering.assignments[i], j) += row[j];
  }
  for (int c = 0; c < k; ++c)
    for (int j = 0; j < points.dim(); ++j) means(c, j) /= static_cast<double>(count[c]);
  return distortion(points, clustering.assignments, means) + lambda * static_cast<double>(k);
}

Clustering run_dpmeans(const PointSet& points, const DpMeansConfig& config) {
  if (!(config.lambda > 0.0) || !std::isfinite(config.lambda))
    throw std::invalid_argument("run_dpmeans: lambda must be positive and finite");
  if (config.max_iters < 1) throw std::invalid_argument("run_dpmeans: max_iters must be >= 1");

  int n = points.n();
  Clustering out;
  out.assignments.assign(n, 0);
  out.k = 1;
  out.centroids = Matrix(1, points.dim());
  {
    auto gm = mean_of(points);
    std::copy(gm.begin(), gm.end(), out.centroids.row(0).begin());
  }

  double prev_objective = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < config.max_iters; ++pass) {
    ++out.iterations;
    std::vector<int> prev_assignments = out.assignments;
    for (int i = 0; i < n; ++i) {
      double d;
      int c = nearest(points.point(i), out.centroids, &d);
      if (d > config.lambda) {
        Matrix grown(out.k + 1, points.dim());
        for (int r = 0; r < out.k; ++r)
          std::copy(out.centroids.row(r).begin(), out.centroids.row(r).end(), grown.row(r).begin());
        auto x = points.point(i);
        std::copy(x.begin(), x.end(), grown.row(out.k).begin());
        out.centroids = std::move(grown);
        out.assignments[i] = out.k;
        ++out.k;
      } else {
        out.assignments[i] = c;
      }
    }
    rebuild_clusters(points, out.assignments, out.centroids, out.k);
    double objective = distortion(points, out.assignments, out.centroids) + config.lambda * out.k;
    out.objective_trace.push_back(objective);
    out.objective = objective;
    if (out.assignments == prev_assignments) break;
    if (prev_objective - objective < config.objective_tol) break;
    prev_objective = objective;
  }
  return out;
}

Clustering run_dpmeans_shuffled(const PointSet& points, const DpMeansConfig& config, std::uint64_t seed) {
  std::vector<int> perm(points.n());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  Clustering shuffled = run_dpmeans(select_rows(points, perm), config);
  Clustering out = shuffled;
  for (int i = 0; i < points.n(); ++i) out.assignments[perm[i]] = shuffled.assignments[i];
  return out;
}

FarthestFirst farthest_first(const PointSet& points, int rounds) {
  if (rounds < 1 || rounds > points.n())
    throw std::invalid_argument("farthest_first: rounds must be in [1, n]");
  FarthestFirst ff;
  auto gm = mean_of(points);
  std::vector<double> min_d(points.n());
  for (int i = 0; i < points.n(); ++i) min_d[i] = sq_dist(points.point(i), gm);
  for (int r = 0; r < rounds; ++r) {
    int best = 0;
    for (int i = 1; i < points.n(); ++i)
      if (min_d[i] > min_d[best]) best = i;
    ff.round_values.push_back(min_d[best]);
    ff.chosen.push_back(best);
    for (int i = 0; i < points.n(); ++i)
      min_d[i] = std::min(min_d[i], sq_dist(points.point(i), points.point(best)));
  }
  return ff;
}

double farthest_first_lambda(const PointSet& points, int k_hint) {
  return farthest_first(points, k_hint).round_values.back();
}

Clustering run_kmeans(const PointSet& points, int k, std::uint64_t seed, int max_iters, int restarts) {
  int n = points.n();
  if (k < 1 || k > n) throw std::invalid_argument("run_kmeans: k must be in [1, n]");
  if (max_iters < 1 || restarts < 1) throw std::invalid_argument("run_kmeans: max_iters and restarts must be >= 1");

  Rng rng(seed);
  Clustering best;
  bool have_best = false;
  for (int restart = 0; restart < restarts; ++restart) {
    std::vector<int> seeds;
    if (restart == 0) {
      seeds = farthest_first(points, k).chosen;
    } else {
      std::vector<int> pool(n);
      std::iota(pool.begin(), pool.end(), 0);
      for (int c = 0; c < k; ++c) std::swap(pool[c], pool[c + rng.uniform_int(n - c)]);
      seeds.assign(pool.begin(), pool.begin() + k);
    }

    Clustering cur;
    cur.k = k;
    cur.centroids = Matrix(k, points.dim());
    for (int c = 0; c < k; ++c) {
      auto x = points.point(seeds[c]);
      std::copy(x.begin(), x.end(), cur.centroids.row(c).begin());
    }
    cur.assignments.assign(n, 0);

    for (int pass = 0; pass < max_iters; ++pass) {
      ++cur.iterations;
      std::vector<int> prev = cur.assignments;
      std::vector<int> count(k, 0);
      for (int i = 0; i < n; ++i) {
        double d;
        cur.assignments[i] = nearest(points.point(i), cur.centroids, &d);
        ++count[cur.assignments[i]];
      }
      // Re-seed each empty cluster with the point farthest from its current
      // centroid, taken from a cluster that can spare one.
      for (int c = 0; c < k; ++c) {
        if (count[c] > 0) continue;
        int far = -1;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          if (count[cur.assignments[i]] < 2) continue;
          double d = sq_dist(points.point(i), cur.centroids.row(cur.assignments[i]));
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        --count[cur.assignments[far]];
        cur.assignments[far] = c;
        ++count[c];
      }
      cur.centroids = Matrix(k, points.dim(), 0.0);
      for (int i = 0; i < n; ++i) {
        auto row = points.point(i);
        for (int j = 0; j < points.dim(); ++j) cur.centroids(cur.assignments[i], j) += row[j];
      }
      for (int c = 0; c < k; ++c)
        for (int j = 0; j < points.dim(); ++j) cur.centroids(c, j) /= static_cast<double>(count[c]);
      cur.objective = distortion(points, cur.assignments, cur.centroids);
      cur.objective_trace.push_back(cur.objective);
      if (cur.assignments == prev) break;
    }
    if (!have_best || cur.objective < best.objective) {
      best = cur;
      have_best = true;
    }
  }
  return best;
}

}  // namespace npclust

// Release gate: one self-contained check per shipping guarantee, each printed
// as a single PASS/FAIL line. Exits nonzero when any check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "npclust/core.hpp"
#include "npclust/dpmeans.hpp"
#include "npclust/eval.hpp"
#include "npclust/gibbs.hpp"
#include "npclust/graphcut.hpp"
#include "npclust/hdpmeans.hpp"
#include "npclust/io.hpp"
#include "npclust/kernel.hpp"
#include "npclust/spectral.hpp"
#include "npclust/synth.hpp"

using namespace npclust;

namespace {

struct Outcome {
  bool pass = false;
  std::string details;
};

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

PointSet random_points(Rng& rng, int n, int d, double cluster_offset = 6.0) {
  Matrix m(n, d);
  for (int i = 0; i < n; ++i) {
    bool shifted = rng.uniform() < 0.5;
    for (int j = 0; j < d; ++j) m(i, j) = rng.uniform(-3.0, 3.0) + (shifted ? cluster_offset : 0.0);
  }
  return PointSet{std::move(m)};
}

DatasetCollection random_collection(Rng& rng, int max_datasets = 4) {
  int n_datasets = 1 + rng.uniform_int(max_datasets);
  int d = 1 + rng.uniform_int(3);
  std::vector<PointSet> ds;
  for (int j = 0; j < n_datasets; ++j) ds.push_back(random_points(rng, 3 + rng.uniform_int(18), d));
  return DatasetCollection(std::move(ds));
}

// Path through all vertices plus random extra edges, so the graph is
// connected with no isolated vertex.
SparseGraph random_graph(Rng& rng, int n) {
  std::vector<SparseGraph::Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, rng.uniform(0.2, 2.0)});
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (rng.uniform() < 0.4) edges.push_back({i, j, rng.uniform(0.2, 2.0)});
  return SparseGraph::from_edges(n, edges);
}

std::vector<int> random_partition(Rng& rng, int n) {
  std::vector<int> a(n);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    int pick = rng.uniform_int(next + 1);
    if (pick == next) {
      a[i] = next;
      ++next;
    } else {
      a[i] = pick;
    }
  }
  return a;
}

// ---------------------------------------------------------------------------

Outcome criterion_1() {
  Timer timer;
  int traces = 0;
  int violations = 0;
  auto scan = [&](const std::vector<double>& trace, double tol) {
    ++traces;
    for (std::size_t t = 1; t < trace.size(); ++t)
      if (trace[t] > trace[t - 1] + tol) ++violations;
  };

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    PointSet pts = random_points(rng, 5 + rng.uniform_int(60), 1 + rng.uniform_int(3));
    DpMeansConfig config;
    config.lambda = rng.uniform(0.5, 40.0);
    scan(run_dpmeans(pts, config).objective_trace, 1e-9);
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(200 + seed);
    DatasetCollection data = random_collection(rng);
    HdpConfig config;
    config.lambda_local = rng.uniform(0.5, 10.0);
    config.lambda_global = rng.uniform(0.5, 20.0);
    scan(run_hard_hdp(data, config).objective_trace, 1e-9);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(400 + seed);
    PointSet pts = random_points(rng, 5 + rng.uniform_int(25), 1 + rng.uniform_int(3));
    KernelSpec spec = (seed % 2 == 0) ? KernelSpec(LinearKernel{})
                                      : KernelSpec(GaussianKernel{rng.uniform(0.5, 3.0)});
    KernelMatrix k = build_kernel(pts, spec);
    std::vector<double> w(pts.n());
    for (double& x : w) x = rng.uniform(0.5, 2.0);
    double lambda = (seed % 2 == 0) ? rng.uniform(1.0, 30.0) : rng.uniform(0.2, 3.0);
    scan(run_weighted_kernel_dpmeans(k, WeightVector(w), lambda).objective_trace, 1e-9);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(600 + seed);
    SparseGraph g = random_graph(rng, 4 + rng.uniform_int(12));
    NcutConfig config;
    config.lambda_prime = rng.uniform(0.1, 2.0);
    config.sparse_path = (seed % 2 == 1);
    scan(run_penalized_ncut(g, config).penalized_trace, 1e-8);
  }

  double elapsed = timer.seconds();
  Outcome out;
  out.pass = violations == 0 && elapsed < 60.0;
  out.details = std::to_string(traces) + " traces, " + std::to_string(violations) +
                " monotonicity violations, " + fmt(elapsed) + "s";
  return out;
}

Outcome criterion_2() {
  Timer timer;
  int k3 = 0;
  int max_passes = 0;
  double nmi_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    LabeledDataset d = gen_gaussian_mixture(three_gaussian_spec(seed));
    DpMeansConfig config;
    config.lambda = farthest_first_lambda(d.points, 3);
    Clustering c = run_dpmeans(d.points, config);
    if (c.k == 3) ++k3;
    max_passes = std::max(max_passes, c.iterations);
    nmi_sum += nmi(c.assignments, d.labels);
  }
  double mean_nmi = nmi_sum / 100.0;
  double elapsed = timer.seconds();
  Outcome out;
  out.pass = k3 >= 90 && max_passes <= 15 && mean_nmi >= 0.85 && elapsed < 30.0;
  out.details = "k=3 in " + std::to_string(k3) + "/100, max passes " + std::to_string(max_passes) +
                ", mean NMI " + fmt(mean_nmi) + ", " + fmt(elapsed) + "s";
  return out;
}

Outcome criterion_3() {
  LabeledDataset d = gen_gaussian_mixture(three_gaussian_spec(1));
  int longest = 0;
  int run = 0;
  double run_start = 0.0, best_start = 0.0, best_end = 0.0;
  for (int i = 0; i < 50; ++i) {
    double lambda = 5.0 * (i + 1);
    DpMeansConfig config;
    config.lambda = lambda;
    Clustering c = run_dpmeans(d.points, config);
    if (c.k == 3) {
      if (run == 0) run_start = lambda;
      ++run;
      if (run > longest) {
        longest = run;
        best_start = run_start;
        best_end = lambda;
      }
    } else {
      run = 0;
    }
  }
  Outcome out;
  out.pass = longest >= 5;
  out.details = "longest k=3 plateau " + std::to_string(longest) + " grid values (lambda " +
                fmt(best_start) + ".." + fmt(best_end) + ")";
  return out;
}

double mean_per_dataset_nmi(const std::vector<std::vector<int>>& found,
                            const std::vector<std::vector<int>>& truth) {
  double sum = 0.0;
  for (std::size_t j = 0; j < truth.size(); ++j) sum += nmi(found[j], truth[j]);
  return sum / static_cast<double>(truth.size());
}

std::vector<std::vector<int>> slice_like(const std::vector<int>& flat,
                                         const std::vector<std::vector<int>>& shape) {
  std::vector<std::vector<int>> out;
  std::size_t pos = 0;
  for (const auto& group : shape) {
    out.emplace_back(flat.begin() + pos, flat.begin() + pos + group.size());
    pos += group.size();
  }
  return out;
}

Outcome criterion_4() {
  Timer timer;
  double hdp_sum = 0.0, dp_sum = 0.0, km_sum = 0.0, g_sum = 0.0;
  const int seeds = 10;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    HdpBenchmark bench = gen_hdp_benchmark(seed);
    HdpPenalties pen = select_hdp_penalties(bench.data, 5, 15);
    HdpConfig config;
    config.lambda_local = pen.lambda_local;
    config.lambda_global = pen.lambda_global;
    HdpState state = run_hard_hdp(bench.data, config);
    g_sum += state.g;

    std::vector<std::vector<int>> hdp_labels(bench.data.size());
    for (int j = 0; j < bench.data.size(); ++j)
      for (int i = 0; i < bench.data.datasets[j].n(); ++i)
        hdp_labels[j].push_back(state.associations[j][state.local_assignments[j][i]]);
    hdp_sum += mean_per_dataset_nmi(hdp_labels, bench.labels);

    int total = bench.data.total_points();
    Matrix pooled_m(total, bench.data.dim());
    int row = 0;
    for (const PointSet& ds : bench.data.datasets)
      for (int i = 0; i < ds.n(); ++i, ++row)
        for (int j = 0; j < bench.data.dim(); ++j) pooled_m(row, j) = ds.point(i)[j];
    PointSet pooled{std::move(pooled_m)};

    DpMeansConfig dp_config;
    dp_config.lambda = farthest_first_lambda(pooled, 15);
    Clustering dp = run_dpmeans(pooled, dp_config);
    dp_sum += mean_per_dataset_nmi(slice_like(dp.assignments, bench.labels), bench.labels);

    Clustering km = run_kmeans(pooled, 15, seed, 100, 3);
    km_sum += mean_per_dataset_nmi(slice_like(km.assignments, bench.labels), bench.labels);
  }
  double hdp_nmi = hdp_sum / seeds, dp_nmi = dp_sum / seeds, km_nmi = km_sum / seeds;
  double mean_g = g_sum / seeds;
  double elapsed = timer.seconds();
  Outcome out;
  out.pass = hdp_nmi >= dp_nmi + 0.02 && hdp_nmi >= km_nmi + 0.02 && mean_g >= 13.0 &&
             mean_g <= 25.0 && elapsed < 60.0;
  out.details = "NMI " + fmt(hdp_nmi) + " vs pooled dpmeans " + fmt(dp_nmi) + " / pooled kmeans " +
                fmt(km_nmi) + ", mean g " + fmt(mean_g) + ", " + fmt(elapsed) + "s";
  return out;
}

Outcome criterion_5() {
  std::ostringstream details;
  bool pass = true;

  // (a) hard objective == tr(K) - trace objective, every partition.
  // (b) relaxed value dominates every partition and matches the spectrum sum.
  {
    double worst_identity = 0.0;
    double worst_gap = 0.0;  // positive when some partition beats the relaxation
    double worst_spectrum = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(900 + seed);
      int n = 3 + rng.uniform_int(6);
      PointSet pts = random_points(rng, n, 1 + rng.uniform_int(2));
      double lambda = rng.uniform(0.2, 10.0);
      KernelMatrix k = build_kernel(pts, LinearKernel{});
      double trace_k = 0.0;
      for (int i = 0; i < n; ++i) trace_k += k.gram.m(i, i);

      RelaxedSolution relaxed = relax(k, lambda);
      EigenDecomposition eig = sym_eig(k.gram);
      double expected = 0.0;
      for (double e : eig.eigenvalues)
        if (e - lambda > 1e-10) expected += e - lambda;
      worst_spectrum = std::max(worst_spectrum, std::abs(relaxed.value - expected));

      PartitionEnumerator parts(n);
      do {
        Clustering cl;
        cl.assignments = parts.assignment();
        cl.k = parts.block_count();
        double hard = dpmeans_objective(pts, cl, lambda);
        Matrix y = indicator_matrix(cl.assignments, cl.k);
        double tr = trace_objective(k, y, lambda);
        worst_identity = std::max(worst_identity, std::abs(hard - (trace_k - tr)));
        worst_gap = std::max(worst_gap, tr - relaxed.value);
      } while (parts.next());
    }
    bool ok = worst_identity <= 1e-8 && worst_gap <= 1e-8 && worst_spectrum <= 1e-10;
    pass = pass && ok;
    details << "(a) identity residual " << fmt(worst_identity) << (ok ? "" : " FAIL")
            << "; (b) relaxation slack " << fmt(worst_gap) << ", spectrum residual "
            << fmt(worst_spectrum);
  }

  // (c) graph kernel affine identity for every partition.
  {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(950 + seed);
      int n = 4 + rng.uniform_int(5);
      SparseGraph g = random_graph(rng, n);
      double lambda_prime = rng.uniform(0.1, 2.0);
      double shift = auto_shift(g);
      auto [k, w] = build_ncut_kernel(g, shift);
      double lambda = lambda_prime + shift + 1.0;
      PartitionEnumerator parts(n);
      do {
        const std::vector<int>& a = parts.assignment();
        double kernel_side = weighted_kernel_objective(k, w, a, lambda) - shift * n;
        double cut_side = cut_objective(g, a) + lambda_prime * parts.block_count();
        worst = std::max(worst, std::abs(kernel_side - cut_side));
      } while (parts.next());
    }
    pass = pass && worst <= 1e-8;
    details << "; (c) affine residual " << fmt(worst) << (worst <= 1e-8 ? "" : " FAIL");
  }

  // (d) the sequential algorithm never beats the exact optimum.
  {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(1000 + seed);
      PointSet pts = random_points(rng, 3 + rng.uniform_int(6), 1 + rng.uniform_int(2));
      DpMeansConfig config;
      config.lambda = rng.uniform(0.2, 12.0);
      Clustering c = run_dpmeans(pts, config);
      BruteForceResult brute = brute_force_optimum(pts, config.lambda);
      worst = std::max(worst, brute.objective - c.objective);
    }
    pass = pass && worst <= 1e-9;
    details << "; (d) optimum excess " << fmt(worst) << (worst <= 1e-9 ? "" : " FAIL");
  }

  // (e) penalized cut dominates brute force, with equality on the fixtures.
  {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(1050 + seed);
      SparseGraph g = random_graph(rng, 4 + rng.uniform_int(5));
      NcutConfig config;
      config.lambda_prime = rng.uniform(0.1, 2.0);
      NcutResult r = run_penalized_ncut(g, config);
      BruteForceResult brute = brute_force_penalized_cut(g, config.lambda_prime);
      worst = std::max(worst, brute.objective - r.penalized_cut);
    }
    bool ok = worst <= 1e-9;

    double fixture_gap = 0.0;
    {
      SparseGraph triangles = read_edge_list_file(TEST_DATA_DIR "/triangles.graph");
      NcutConfig config;
      config.lambda_prime = 0.5;
      fixture_gap = std::max(fixture_gap,
                             std::abs(run_penalized_ncut(triangles, config).penalized_cut -
                                      brute_force_penalized_cut(triangles, 0.5).objective));
      SparseGraph barbell = read_edge_list_file(TEST_DATA_DIR "/barbell.graph");
      config.lambda_prime = 0.25;
      fixture_gap = std::max(fixture_gap,
                             std::abs(run_penalized_ncut(barbell, config).penalized_cut -
                                      brute_force_penalized_cut(barbell, 0.25).objective));
    }
    ok = ok && fixture_gap <= 1e-9;
    pass = pass && ok;
    details << "; (e) cut excess " << fmt(worst) << ", fixture gap " << fmt(fixture_gap)
            << (ok ? "" : " FAIL");
  }

  return {pass, details.str()};
}

Outcome criterion_6() {
  GibbsConfig config;
  config.sigma = 1e-6;
  config.rho = 100.0;

  int cases = 0;
  int concentrated = 0;
  std::uint64_t seed = 0;
  while (cases < 1000) {
    Rng rng(2000 + seed++);
    int d = 1 + rng.uniform_int(3);
    int k = 1 + rng.uniform_int(5);
    GibbsState state;
    state.means = Matrix(k, d);
    for (int c = 0; c < k; ++c) {
      for (int j = 0; j < d; ++j) state.means(c, j) = rng.uniform(-5.0, 5.0);
      state.sizes.push_back(1 + rng.uniform_int(9));
    }
    std::vector<double> x(d);
    for (double& v : x) v = rng.uniform(-6.0, 6.0);
    double lambda = rng.uniform(0.5, 30.0);

    std::vector<double> options;
    for (int c = 0; c < k; ++c) options.push_back(sq_dist(x, state.means.row(c)));
    options.push_back(lambda);
    std::vector<double> sorted = options;
    std::sort(sorted.begin(), sorted.end());
    if (sorted[1] - sorted[0] < 1e-3) continue;  // decision too close to call
    int winner = static_cast<int>(std::min_element(options.begin(), options.end()) -
                                  options.begin());

    config.log_alpha = log_alpha_from_lambda(lambda, config.sigma, config.rho, d);
    state.log_alpha = config.log_alpha;
    std::vector<double> probs = assignment_distribution(state, x, config);
    ++cases;
    if (probs[winner] >= 0.999) ++concentrated;
  }

  double worst_mean_err = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(3000 + s);
    PointSet pts = random_points(rng, 4 + rng.uniform_int(26), 1 + rng.uniform_int(3));
    int m = 1 + rng.uniform_int(pts.n());
    std::vector<int> members(pts.n());
    std::iota(members.begin(), members.end(), 0);
    rng.shuffle(members);
    members.resize(m);
    Rng draw_rng(4000 + s);
    std::vector<double> draw = sample_mean_posterior(pts, members, 1e-12, 100.0, draw_rng);
    std::vector<double> mean = mean_of(pts, members);
    for (int j = 0; j < pts.dim(); ++j)
      worst_mean_err = std::max(worst_mean_err, std::abs(draw[j] - mean[j]));
  }

  Outcome out;
  out.pass = concentrated == cases && worst_mean_err <= 1e-3;
  out.details = std::to_string(concentrated) + "/" + std::to_string(cases) +
                " cases at >= 0.999 mass, posterior mean error " + fmt(worst_mean_err);
  return out;
}

Outcome criterion_7() {
  int matched = 0;
  double worst_obj = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(5000 + seed);
    PointSet pts = random_points(rng, 5 + rng.uniform_int(35), 1 + rng.uniform_int(3));
    double lambda = rng.uniform(1.0, 50.0);

    DpMeansConfig config;
    config.lambda = lambda;
    config.objective_tol = 0.0;  // assignment-fixpoint stopping on both sides
    Clustering explicit_run = run_dpmeans(pts, config);

    KernelMatrix k = build_kernel(pts, LinearKernel{});
    KernelClustering kernel_run = run_weighted_kernel_dpmeans(k, unit_weights(pts.n()), lambda);

    if (kernel_run.assignments == explicit_run.assignments)
      ++matched;
    worst_obj = std::max(worst_obj, std::abs(kernel_run.objective - explicit_run.objective));
  }

  double worst_dist = 0.0;
  for (int n : {10, 30, 50}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      Rng rng(6000 + 10 * n + seed);
      SparseGraph g = random_graph(rng, n);
      double shift = auto_shift(g);
      auto [k, w] = build_ncut_kernel(g, shift);
      for (int rep = 0; rep < 3; ++rep) {
        std::vector<int> a = random_partition(rng, n);
        int blocks = *std::max_element(a.begin(), a.end()) + 1;
        std::vector<std::vector<int>> members(blocks);
        std::vector<ClusterSums> sums(blocks);
        for (int i = 0; i < n; ++i) {
          members[a[i]].push_back(i);
          sums[a[i]].weight_sum += g.degree[i];
        }
        for (const auto& e : g.edges)
          if (a[e.u] == a[e.v]) sums[a[e.u]].internal_links += 2.0 * e.w;
        for (int i = 0; i < n; ++i)
          for (int c = 0; c < blocks; ++c) {
            double dense = kernel_point_to_cluster_dist(k, w, i, members[c]);
            double sparse = node_to_cluster_distance_sparse(g, shift, i, a, c, sums[c]);
            worst_dist = std::max(worst_dist, std::abs(dense - sparse));
          }
      }
    }
  }

  Outcome out;
  out.pass = matched == 20 && worst_obj <= 1e-9 && worst_dist <= 1e-10;
  out.details = std::to_string(matched) + "/20 assignment matches, objective gap " + fmt(worst_obj) +
                ", sparse/dense distance gap " + fmt(worst_dist);
  return out;
}

Outcome criterion_8() {
  LabeledDataset iris = read_labeled_points_file(BUNDLED_DATA_DIR "/iris.csv");
  DpMeansConfig config;
  config.lambda = farthest_first_lambda(iris.points, 3);
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Clustering c = run_dpmeans_shuffled(iris.points, config, seed);
    sum += nmi(c.assignments, iris.labels);
  }
  double mean_nmi = sum / 10.0;
  Outcome out;
  out.pass = mean_nmi >= 0.60 && mean_nmi <= 0.90;
  out.details = "mean NMI " + fmt(mean_nmi) + " over 10 shuffles, lambda " + fmt(config.lambda);
  return out;
}

Outcome criterion_9() {
  Matrix m(3, 1);
  m(0, 0) = 0.0;
  m(1, 0) = 1.0;
  m(2, 0) = 10.0;
  PointSet pts{std::move(m)};

  DpMeansConfig config;
  config.lambda = 4.0;
  Clustering c = run_dpmeans(pts, config);
  bool ok = c.k == 2 && std::abs(c.objective - 8.5) <= 1e-12 &&
            c.assignments == std::vector<int>{0, 0, 1} &&
            std::abs(c.centroids(0, 0) - 0.5) <= 1e-12 && std::abs(c.centroids(1, 0) - 10.0) <= 1e-12;
  double ff = farthest_first_lambda(pts, 2);
  ok = ok && std::abs(ff - 121.0 / 9.0) <= 1e-12;

  Outcome out;
  out.pass = ok;
  out.details = "k=" + std::to_string(c.k) + ", objective " + fmt(c.objective) +
                ", suggested lambda " + fmt(ff);
  return out;
}

}  // namespace

int main() {
  Outcome results[] = {criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(),
                       criterion_6(), criterion_7(), criterion_8(), criterion_9()};
  int failures = 0;
  for (std::size_t i = 0; i < std::size(results); ++i) {
    const Outcome& r = results[i];
    std::printf("criterion %zu %s — %s\n", i + 1, r.pass ? "PASS" : "FAIL", r.details.c_str());
    if (!r.pass) ++failures;
  }
  std::printf("acceptance: %zu/%zu criteria passed\n", std::size(results) - failures,
              std::size(results));
  return failures == 0 ? 0 : 1;
}

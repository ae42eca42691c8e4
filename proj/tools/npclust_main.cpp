// Command-line front end: one subcommand per algorithm, plus evaluation,
// data generation, and the benchmark reproductions.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

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

using nlohmann::json;
using namespace npclust;

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void emit_json(const json& doc, const std::string& output) {
  if (output.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(output);
  if (!out) throw std::runtime_error(output + ": cannot open for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw std::runtime_error(output + ": write failed");
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json clustering_json(const Clustering& c) {
  return json{{"assignments", c.assignments},
              {"centroids", matrix_json(c.centroids)},
              {"k", c.k},
              {"objective", c.objective},
              {"iterations", c.iterations},
              {"objective_trace", c.objective_trace}};
}

void print_summary(const std::string& name, int k, double objective, int passes, double secs) {
  std::printf("%s: k=%d objective=%s passes=%d wall_time_s=%.3f\n", name.c_str(), k,
              format_double(objective).c_str(), passes, secs);
}

// Input loading shared by the point-based subcommands: with `labeled` the
// trailing column is split off as ground truth for an NMI report.
struct LoadedPoints {
  PointSet points;
  std::vector<int> labels;  // empty unless labeled
};

LoadedPoints load_points(const std::string& path, bool labeled) {
  if (!labeled) return {read_points_file(path), {}};
  LabeledDataset ld = read_labeled_points_file(path);
  return {std::move(ld.points), std::move(ld.labels)};
}

void attach_truth_nmi(json& doc, const std::vector<int>& labels, const std::vector<int>& assignments) {
  if (!labels.empty()) doc["nmi_vs_labels"] = nmi(assignments, labels);
}

int worker_count(int jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  int workers = static_cast<int>(hw);
  if (const char* env = std::getenv("NPCLUST_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) workers = static_cast<int>(v);
  }
  return std::min(workers, jobs);
}

// Runs fn(i) for i in [0, jobs) on a small worker pool; results must be
// written to pre-sized slots so thread order cannot matter.
void parallel_for(int jobs, const std::function<void(int)>& fn) {
  const int workers = worker_count(jobs);
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// dpmeans

struct DpOpts {
  std::string input;
  std::string output;
  double lambda = 0.0;
  bool have_lambda = false;
  int k_hint = 0;
  int max_iters = 1000;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  bool shuffle = false;
  bool labeled = false;
};

void run_dpmeans_cmd(const DpOpts& o) {
  Timer timer;
  const LoadedPoints in = load_points(o.input, o.labeled);
  DpMeansConfig config;
  config.max_iters = o.max_iters;
  config.objective_tol = o.tol;
  config.lambda = o.have_lambda ? o.lambda : farthest_first_lambda(in.points, o.k_hint);
  const Clustering result =
      o.shuffle ? run_dpmeans_shuffled(in.points, config, o.seed) : run_dpmeans(in.points, config);
  const double secs = timer.seconds();
  json doc = clustering_json(result);
  doc["command"] = "dpmeans";
  doc["input"] = o.input;
  doc["config"] = {{"lambda", config.lambda},     {"k_hint", o.have_lambda ? json() : json(o.k_hint)},
                   {"max_iters", o.max_iters},    {"tol", o.tol},
                   {"shuffle", o.shuffle},        {"seed", o.seed},
                   {"labeled", o.labeled}};
  doc["wall_time_s"] = secs;
  attach_truth_nmi(doc, in.labels, result.assignments);
  print_summary("dpmeans", result.k, result.objective, result.iterations, secs);
  emit_json(doc, o.output);
}

// ---------------------------------------------------------------------------
// kmeans

struct KmOpts {
  std::string input;
  std::string output;
  int k = 0;
  std::uint64_t seed = 0;
  int max_iters = 100;
  int restarts = 1;
  bool labeled = false;
};

void run_kmeans_cmd(const KmOpts& o) {
  Timer timer;
  const LoadedPoints in = load_points(o.input, o.labeled);
  const Clustering result = run_kmeans(in.points, o.k, o.seed, o.max_iters, o.restarts);
  const double secs = timer.seconds();
  json doc = clustering_json(result);
  doc["command"] = "kmeans";
  doc["input"] = o.input;
  doc["config"] = {{"k", o.k},
                   {"seed", o.seed},
                   {"max_iters", o.max_iters},
                   {"restarts", o.restarts},
                   {"labeled", o.labeled}};
  doc["wall_time_s"] = secs;
  attach_truth_nmi(doc, in.labels, result.assignments);
  print_summary("kmeans", result.k, result.objective, result.iterations, secs);
  emit_json(doc, o.output);
}

// ---------------------------------------------------------------------------
// hdpmeans

struct HdpOpts {
  std::string input;
  std::string output;
  double lambda_local = 0.0;
  double lambda_global = 0.0;
  bool have_local = false;
  bool have_global = false;
  int k_hint = 0;
  int g_hint = 0;
  int max_iters = 1000;
  double tol = 1e-9;
  bool labeled = false;
};

void run_hdpmeans_cmd(const HdpOpts& o) {
  Timer timer;
  DatasetCollection data;
  std::vector<std::vector<int>> truth;
  std::vector<long long> ids;
  if (o.labeled) {
    GroupedLabeled gl = read_grouped_labeled_points_file(o.input);
    data = std::move(gl.data);
    truth = std::move(gl.labels);
    ids = std::move(gl.ids);
  } else {
    GroupedDataset gd = read_grouped_points_file(o.input);
    data = std::move(gd.data);
    ids = std::move(gd.ids);
  }
  HdpConfig config;
  config.max_iters = o.max_iters;
  config.objective_tol = o.tol;
  if (o.have_local != o.have_global)
    throw std::runtime_error("give both --lambda-local and --lambda-global or neither");
  if (o.have_local) {
    config.lambda_local = o.lambda_local;
    config.lambda_global = o.lambda_global;
  } else {
    const HdpPenalties p = select_hdp_penalties(data, o.k_hint, o.g_hint);
    config.lambda_local = p.lambda_local;
    config.lambda_global = p.lambda_global;
  }
  const HdpState result = run_hard_hdp(data, config);
  const double secs = timer.seconds();

  // Per-point global labels, dataset by dataset.
  json global_assignments = json::array();
  std::vector<std::vector<int>> pointwise(data.size());
  for (int j = 0; j < data.size(); ++j) {
    pointwise[j].resize(data.datasets[j].n());
    for (int i = 0; i < data.datasets[j].n(); ++i)
      pointwise[j][i] = result.associations[j][result.local_assignments[j][i]];
    global_assignments.push_back(pointwise[j]);
  }
  json doc{{"command", "hdpmeans"},
           {"input", o.input},
           {"config",
            {{"lambda_local", config.lambda_local},
             {"lambda_global", config.lambda_global},
             {"k_hint", o.have_local ? json() : json(o.k_hint)},
             {"g_hint", o.have_local ? json() : json(o.g_hint)},
             {"max_iters", o.max_iters},
             {"tol", o.tol},
             {"labeled", o.labeled}}},
           {"dataset_ids", ids},
           {"g", result.g},
           {"k_per_dataset", result.k_per_dataset},
           {"local_assignments", result.local_assignments},
           {"associations", result.associations},
           {"global_assignments", global_assignments},
           {"global_centroids", matrix_json(result.global_centroids)},
           {"objective", result.objective},
           {"iterations", result.iterations},
           {"objective_trace", result.objective_trace},
           {"wall_time_s", secs}};
  if (!truth.empty()) {
    double total = 0.0;
    for (int j = 0; j < data.size(); ++j) total += nmi(pointwise[j], truth[j]);
    doc["mean_dataset_nmi_vs_labels"] = total / data.size();
  }
  std::printf("hdpmeans: g=%d total_local=%d objective=%s passes=%d wall_time_s=%.3f\n", result.g,
              [&] {
                int t = 0;
                for (int kj : result.k_per_dataset) t += kj;
                return t;
              }(),
              format_double(result.objective).c_str(), result.iterations, secs);
  emit_json(doc, o.output);
}

// ---------------------------------------------------------------------------
// kernel-dpmeans

struct KernOpts {
  std::string input;
  std::string output;
  std::string kernel = "linear";
  double bandwidth = 1.0;
  std::string weights_path;
  double lambda = 0.0;
  int max_iters = 1000;
  bool labeled = false;
};

KernelSpec kernel_spec_from(const std::string& kernel, double bandwidth) {
  if (kernel == "linear") return LinearKernel{};
  if (kernel == "gaussian") return GaussianKernel{bandwidth};
  throw std::runtime_error("unknown kernel '" + kernel + "'");
}

void run_kernel_cmd(const KernOpts& o) {
  Timer timer;
  const LoadedPoints in = load_points(o.input, o.labeled);
  const KernelMatrix k = build_kernel(in.points, kernel_spec_from(o.kernel, o.bandwidth));
  WeightVector w = unit_weights(in.points.n());
  if (!o.weights_path.empty()) {
    const std::vector<int> raw = read_labels_any(o.weights_path);
    // Integer weights are the common case for replicated points; a dedicated
    // numeric reader would only duplicate the label loader.
    std::vector<double> wd(raw.begin(), raw.end());
    w = WeightVector(std::move(wd));
    if (w.n() != in.points.n()) throw std::runtime_error("weight count must match point count");
  }
  const KernelClustering result = run_weighted_kernel_dpmeans(k, w, o.lambda, {}, o.max_iters);
  const double secs = timer.seconds();
  json doc{{"command", "kernel-dpmeans"},
           {"input", o.input},
           {"config",
            {{"kernel", o.kernel},
             {"bandwidth", o.kernel == "gaussian" ? json(o.bandwidth) : json()},
             {"lambda", o.lambda},
             {"weights", o.weights_path.empty() ? json() : json(o.weights_path)},
             {"max_iters", o.max_iters},
             {"labeled", o.labeled}}},
           {"assignments", result.assignments},
           {"k", result.k},
           {"objective", result.objective},
           {"iterations", result.iterations},
           {"objective_trace", result.objective_trace},
           {"wall_time_s", secs}};
  attach_truth_nmi(doc, in.labels, result.assignments);
  print_summary("kernel-dpmeans", result.k, result.objective, result.iterations, secs);
  emit_json(doc, o.output);
}

// ---------------------------------------------------------------------------
// spectral

struct SpectralOpts {
  std::string input;
  std::string output;
  std::string kernel = "linear";
  double bandwidth = 1.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  bool labeled = false;
};

void run_spectral_cmd(const SpectralOpts& o) {
  Timer timer;
  const LoadedPoints in = load_points(o.input, o.labeled);
  const KernelMatrix k = build_kernel(in.points, kernel_spec_from(o.kernel, o.bandwidth));
  const RelaxedSolution relaxed = relax(k, o.lambda);
  const Clustering rounded = round_relaxed(relaxed.y, o.seed);
  const double rounded_objective =
      weighted_kernel_objective(k, unit_weights(in.points.n()), rounded.assignments, o.lambda);
  const double secs = timer.seconds();
  json doc{{"command", "spectral"},
           {"input", o.input},
           {"config",
            {{"kernel", o.kernel},
             {"bandwidth", o.kernel == "gaussian" ? json(o.bandwidth) : json()},
             {"lambda", o.lambda},
             {"seed", o.seed},
             {"labeled", o.labeled}}},
           {"kept_eigenvalues", relaxed.eigenvalues},
           {"kept_count", static_cast<int>(relaxed.eigenvalues.size())},
           {"boundary_count", relaxed.boundary_count},
           {"relaxed_value", relaxed.value},
           {"assignments", rounded.assignments},
           {"k", rounded.k},
           {"objective", rounded_objective},
           {"wall_time_s", secs}};
  attach_truth_nmi(doc, in.labels, rounded.assignments);
  std::printf("spectral: kept=%d k=%d relaxed_value=%s objective=%s wall_time_s=%.3f\n",
              static_cast<int>(relaxed.eigenvalues.size()), rounded.k,
              format_double(relaxed.value).c_str(), format_double(rounded_objective).c_str(), secs);
  emit_json(doc, o.output);
}

// ---------------------------------------------------------------------------
// ncut

struct NcutOpts {
  std::string graph;
  std::string output;
  double lambda_prime = 1.0;
  std::string shift = "auto";
  int max_iters = 1000;
  bool sparse = false;
};

void run_ncut_cmd(const NcutOpts& o) {
  Timer timer;
  const SparseGraph graph = read_edge_list_file(o.graph);
  NcutConfig config;
  config.lambda_prime = o.lambda_prime;
  config.max_iters = o.max_iters;
  config.sparse_path = o.sparse;
  if (o.shift != "auto") {
    char* end = nullptr;
    const double v = std::strtod(o.shift.c_str(), &end);
    if (!end || *end != '\0' || !std::isfinite(v))
      throw std::runtime_error("--shift expects 'auto' or a number, got '" + o.shift + "'");
    config.shift = v;
  }
  const NcutResult result = run_penalized_ncut(graph, config);
  const double secs = timer.seconds();
  json doc{{"command", "ncut"},
           {"graph", o.graph},
           {"config",
            {{"lambda_prime", o.lambda_prime},
             {"shift", result.shift},
             {"shift_mode", o.shift},
             {"max_iters", o.max_iters},
             {"sparse", o.sparse}}},
           {"assignments", result.assignments},
           {"k", result.k},
           {"penalized_cut", result.penalized_cut},
           {"penalized_trace", result.penalized_trace},
           {"iterations", result.iterations},
           {"wall_time_s", secs}};
  print_summary("ncut", result.k, result.penalized_cut, result.iterations, secs);
  emit_json(doc, o.output);
}

// ---------------------------------------------------------------------------
// gibbs

struct GibbsOpts {
  std::string input;
  std::string output;
  double sigma = 1.0;
  double rho = 100.0;
  double alpha = 0.0;
  bool have_alpha = false;
  double lambda = 0.0;
  bool have_lambda = false;
  int iters = 100;
  int burn_in = 10;
  int thin = 1;
  std::uint64_t seed = 0;
  bool sample_alpha = false;
  double alpha_shape = 1.0;
  double alpha_rate = 1.0;
  bool labeled = false;
};

void run_gibbs_cmd(const GibbsOpts& o) {
  Timer timer;
  const LoadedPoints in = load_points(o.input, o.labeled);
  GibbsConfig config;
  config.sigma = o.sigma;
  config.rho = o.rho;
  config.iterations = o.iters;
  config.burn_in = o.burn_in;
  config.thinning = o.thin;
  config.seed = o.seed;
  config.sample_alpha = o.sample_alpha;
  config.alpha_shape = o.alpha_shape;
  config.alpha_rate = o.alpha_rate;
  if (o.have_alpha == o.have_lambda)
    throw std::runtime_error("give exactly one of --alpha and --alpha-from-lambda");
  if (o.have_alpha) {
    if (!(o.alpha > 0.0)) throw std::runtime_error("--alpha must be positive");
    config.log_alpha = std::log(o.alpha);
  } else {
    config.log_alpha = log_alpha_from_lambda(o.lambda, o.sigma, o.rho, in.points.dim());
  }
  const GibbsResult result = run_gibbs(in.points, config);
  const double secs = timer.seconds();
  json doc{{"command", "gibbs"},
           {"input", o.input},
           {"config",
            {{"sigma", o.sigma},
             {"rho", o.rho},
             {"log_alpha", config.log_alpha},
             {"alpha_from_lambda", o.have_lambda ? json(o.lambda) : json()},
             {"iterations", o.iters},
             {"burn_in", o.burn_in},
             {"thinning", o.thin},
             {"seed", o.seed},
             {"sample_alpha", o.sample_alpha},
             {"alpha_shape", o.alpha_shape},
             {"alpha_rate", o.alpha_rate},
             {"labeled", o.labeled}}},
           {"point_estimate", clustering_json(result.point_estimate)},
           {"best_log_joint", result.best_log_joint},
           {"sample_log_joints", result.sample_log_joints},
           {"k_trace", result.k_trace},
           {"samples_kept", static_cast<int>(result.samples.size())},
           {"wall_time_s", secs}};
  attach_truth_nmi(doc, in.labels, result.point_estimate.assignments);
  std::printf("gibbs: k=%d best_log_joint=%s sweeps=%d wall_time_s=%.3f\n",
              result.point_estimate.k, format_double(result.best_log_joint).c_str(), o.iters, secs);
  emit_json(doc, o.output);
}

// ---------------------------------------------------------------------------
// nmi

struct NmiOpts {
  std::string a;
  std::string b;
  std::string output;
};

void run_nmi_cmd(const NmiOpts& o) {
  const std::vector<int> a = read_labels_any(o.a);
  const std::vector<int> b = read_labels_any(o.b);
  const double value = nmi(a, b);
  std::string text = format_double(value);
  if (text.find('.') == std::string::npos && text.find('e') == std::string::npos) text += ".0";
  std::printf("%s\n", text.c_str());
  if (!o.output.empty())
    emit_json(json{{"command", "nmi"}, {"a", o.a}, {"b", o.b}, {"nmi", value}}, o.output);
}

// ---------------------------------------------------------------------------
// synth

struct SynthGaussOpts {
  std::string output;
  std::uint64_t seed = 0;
  int per_component = 50;
  double separation = 16.0;
  double stddev = 1.0;
  bool labeled = false;
  std::string labels_path;
};

void run_synth_gaussians(const SynthGaussOpts& o) {
  const LabeledDataset data =
      gen_gaussian_mixture(three_gaussian_spec(o.seed, o.per_component, o.separation, o.stddev));
  write_points_csv(o.output, data.points, o.labeled ? &data.labels : nullptr);
  if (!o.labels_path.empty()) {
    std::ofstream out(o.labels_path);
    if (!out) throw std::runtime_error(o.labels_path + ": cannot open for writing");
    for (int lab : data.labels) out << lab << '\n';
  }
  std::printf("synth gaussians: wrote %d points to %s\n", data.points.n(), o.output.c_str());
}

struct SynthHdpOpts {
  std::string output;
  std::uint64_t seed = 0;
  int datasets = 50;
  int components = 15;
  int per_dataset = 5;
  int per_component = 5;
  bool labeled = false;
};

void run_synth_hdp(const SynthHdpOpts& o) {
  const HdpBenchmark bench =
      gen_hdp_benchmark(o.seed, o.datasets, o.components, o.per_dataset, o.per_component);
  write_grouped_csv(o.output, bench.data, o.labeled ? &bench.labels : nullptr);
  std::printf("synth hdp-benchmark: wrote %d datasets (%d points) to %s\n", bench.data.size(),
              bench.data.total_points(), o.output.c_str());
}

// ---------------------------------------------------------------------------
// repro fig2

struct ReproOpts {
  std::string output;
  std::uint64_t seed = 0;
  int seeds = 100;
  int per_component = 50;
  double separation = 16.0;
};

void run_repro_fig2(const ReproOpts& o) {
  Timer timer;
  struct Row {
    int k = 0;
    int passes = 0;
    double nmi_value = 0.0;
    double lambda = 0.0;
  };
  std::vector<Row> rows(o.seeds);
  parallel_for(o.seeds, [&](int i) {
    const LabeledDataset data = gen_gaussian_mixture(
        three_gaussian_spec(o.seed + static_cast<std::uint64_t>(i), o.per_component, o.separation, 1.0));
    DpMeansConfig config;
    config.lambda = farthest_first_lambda(data.points, 3);
    const Clustering result = run_dpmeans(data.points, config);
    rows[i] = {result.k, result.iterations, nmi(result.assignments, data.labels), config.lambda};
  });
  int k3 = 0, max_passes = 0;
  double nmi_sum = 0.0;
  for (const Row& r : rows) {
    if (r.k == 3) ++k3;
    max_passes = std::max(max_passes, r.passes);
    nmi_sum += r.nmi_value;
  }
  const double mean_nmi = nmi_sum / o.seeds;

  // Penalty sweep on the first seed's data: 40 log-spaced values between the
  // smallest nonzero pairwise squared distance and the largest squared
  // distance to the global mean.
  const LabeledDataset sweep_data =
      gen_gaussian_mixture(three_gaussian_spec(o.seed, o.per_component, o.separation, 1.0));
  const PointSet& pts = sweep_data.points;
  double lo = 0.0, hi = 0.0;
  bool have_lo = false;
  for (int i = 0; i < pts.n(); ++i)
    for (int j = i + 1; j < pts.n(); ++j) {
      const double d = sq_dist(pts.point(i), pts.point(j));
      if (d > 0.0 && (!have_lo || d < lo)) {
        lo = d;
        have_lo = true;
      }
    }
  const std::vector<double> gmean = mean_of(pts);
  for (int i = 0; i < pts.n(); ++i)
    hi = std::max(hi, sq_dist(pts.point(i), std::span<const double>(gmean)));
  if (!have_lo) throw std::runtime_error("all points coincide; no sweep range");
  const int grid = 40;
  std::vector<double> lambdas(grid);
  std::vector<int> sweep_k(grid);
  for (int t = 0; t < grid; ++t)
    lambdas[t] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * t / (grid - 1));
  parallel_for(grid, [&](int t) {
    DpMeansConfig config;
    config.lambda = lambdas[t];
    sweep_k[t] = run_dpmeans(pts, config).k;
  });
  int best_run = 0, cur = 0;
  for (int t = 0; t < grid; ++t) {
    cur = sweep_k[t] == 3 ? cur + 1 : 0;
    best_run = std::max(best_run, cur);
  }
  const double secs = timer.seconds();

  std::printf("three-Gaussian benchmark, %d seeds (base %llu):\n", o.seeds,
              static_cast<unsigned long long>(o.seed));
  std::printf("  %-6s %-3s %-7s %-9s %s\n", "seed", "k", "passes", "nmi", "lambda");
  for (int i = 0; i < o.seeds; ++i)
    std::printf("  %-6llu %-3d %-7d %-9.4f %.4f\n",
                static_cast<unsigned long long>(o.seed) + i, rows[i].k, rows[i].passes,
                rows[i].nmi_value, rows[i].lambda);
  std::printf("summary: k=3 in %d/%d runs, max passes %d, mean nmi %.4f\n", k3, o.seeds, max_passes,
              mean_nmi);
  std::printf("penalty sweep (%d values in [%.5g, %.5g]):\n", grid, lo, hi);
  std::printf("  %-12s %s\n", "lambda", "k");
  for (int t = 0; t < grid; ++t) std::printf("  %-12.5g %d\n", lambdas[t], sweep_k[t]);
  std::printf("longest k=3 plateau: %d consecutive values\n", best_run);
  std::printf("wall_time_s=%.3f\n", secs);

  if (!o.output.empty()) {
    json seed_rows = json::array();
    for (int i = 0; i < o.seeds; ++i)
      seed_rows.push_back({{"seed", o.seed + static_cast<std::uint64_t>(i)},
                           {"k", rows[i].k},
                           {"passes", rows[i].passes},
                           {"nmi", rows[i].nmi_value},
                           {"lambda", rows[i].lambda}});
    json sweep_rows = json::array();
    for (int t = 0; t < grid; ++t)
      sweep_rows.push_back({{"lambda", lambdas[t]}, {"k", sweep_k[t]}});
    emit_json(json{{"command", "repro fig2"},
                   {"config",
                    {{"seeds", o.seeds},
                     {"base_seed", o.seed},
                     {"points_per_component", o.per_component},
                     {"separation", o.separation}}},
                   {"seed_runs", seed_rows},
                   {"summary",
                    {{"k3_runs", k3}, {"max_passes", max_passes}, {"mean_nmi", mean_nmi}}},
                   {"sweep", sweep_rows},
                   {"k3_plateau", best_run},
                   {"wall_time_s", secs}},
              o.output);
  }
}

// ---------------------------------------------------------------------------
// repro hdp-bench

struct ReproHdpOpts {
  std::string output;
  std::uint64_t seed = 0;
  int seeds = 10;
};

struct HdpBenchRow {
  int g = 0;
  double hdp_nmi = 0.0;
  double dp_nmi = 0.0;
  double km_nmi = 0.0;
};

double mean_dataset_nmi(const std::vector<std::vector<int>>& pred,
                        const std::vector<std::vector<int>>& truth) {
  double total = 0.0;
  for (std::size_t j = 0; j < truth.size(); ++j) total += nmi(pred[j], truth[j]);
  return total / static_cast<double>(truth.size());
}

HdpBenchRow hdp_bench_one(std::uint64_t seed) {
  const HdpBenchmark bench = gen_hdp_benchmark(seed);
  const int D = bench.data.size();

  const HdpPenalties penalties = select_hdp_penalties(bench.data, 5, 15);
  HdpConfig config;
  config.lambda_local = penalties.lambda_local;
  config.lambda_global = penalties.lambda_global;
  const HdpState state = run_hard_hdp(bench.data, config);
  std::vector<std::vector<int>> hdp_pred(D);
  for (int j = 0; j < D; ++j) {
    hdp_pred[j].resize(bench.data.datasets[j].n());
    for (int i = 0; i < bench.data.datasets[j].n(); ++i)
      hdp_pred[j][i] = state.associations[j][state.local_assignments[j][i]];
  }

  // Pooled baselines: concatenate every dataset and slice the flat
  // assignment back per dataset.
  int total = bench.data.total_points();
  Matrix pooled(total, bench.data.dim());
  int row = 0;
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < bench.data.datasets[j].n(); ++i, ++row)
      for (int c = 0; c < bench.data.dim(); ++c) pooled(row, c) = bench.data.datasets[j].point(i)[c];
  const PointSet pooled_points(std::move(pooled));

  DpMeansConfig dp_config;
  dp_config.lambda = farthest_first_lambda(pooled_points, 15);
  const Clustering dp = run_dpmeans(pooled_points, dp_config);
  const Clustering km = run_kmeans(pooled_points, 15, seed);

  std::vector<std::vector<int>> dp_pred(D), km_pred(D);
  row = 0;
  for (int j = 0; j < D; ++j) {
    const int nj = bench.data.datasets[j].n();
    dp_pred[j].assign(dp.assignments.begin() + row, dp.assignments.begin() + row + nj);
    km_pred[j].assign(km.assignments.begin() + row, km.assignments.begin() + row + nj);
    row += nj;
  }
  return {state.g, mean_dataset_nmi(hdp_pred, bench.labels), mean_dataset_nmi(dp_pred, bench.labels),
          mean_dataset_nmi(km_pred, bench.labels)};
}

void run_repro_hdp(const ReproHdpOpts& o) {
  Timer timer;
  std::vector<HdpBenchRow> rows(o.seeds);
  parallel_for(o.seeds, [&](int i) { rows[i] = hdp_bench_one(o.seed + static_cast<std::uint64_t>(i)); });
  double hdp_sum = 0.0, dp_sum = 0.0, km_sum = 0.0, g_sum = 0.0;
  for (const HdpBenchRow& r : rows) {
    hdp_sum += r.hdp_nmi;
    dp_sum += r.dp_nmi;
    km_sum += r.km_nmi;
    g_sum += r.g;
  }
  const double secs = timer.seconds();
  std::printf("shared-component benchmark, %d seeds (base %llu):\n", o.seeds,
              static_cast<unsigned long long>(o.seed));
  std::printf("  %-6s %-4s %-9s %-12s %s\n", "seed", "g", "hdp_nmi", "dpmeans_nmi", "kmeans_nmi");
  for (int i = 0; i < o.seeds; ++i)
    std::printf("  %-6llu %-4d %-9.4f %-12.4f %.4f\n",
                static_cast<unsigned long long>(o.seed) + i, rows[i].g, rows[i].hdp_nmi,
                rows[i].dp_nmi, rows[i].km_nmi);
  std::printf("summary: mean g %.1f, mean nmi hdp %.4f vs dpmeans %.4f vs kmeans %.4f\n",
              g_sum / o.seeds, hdp_sum / o.seeds, dp_sum / o.seeds, km_sum / o.seeds);
  std::printf("wall_time_s=%.3f\n", secs);
  if (!o.output.empty()) {
    json out_rows = json::array();
    for (int i = 0; i < o.seeds; ++i)
      out_rows.push_back({{"seed", o.seed + static_cast<std::uint64_t>(i)},
                          {"g", rows[i].g},
                          {"hdp_nmi", rows[i].hdp_nmi},
                          {"dpmeans_nmi", rows[i].dp_nmi},
                          {"kmeans_nmi", rows[i].km_nmi}});
    emit_json(json{{"command", "repro hdp-bench"},
                   {"config", {{"seeds", o.seeds}, {"base_seed", o.seed}}},
                   {"rows", out_rows},
                   {"summary",
                    {{"mean_g", g_sum / o.seeds},
                     {"mean_hdp_nmi", hdp_sum / o.seeds},
                     {"mean_dpmeans_nmi", dp_sum / o.seeds},
                     {"mean_kmeans_nmi", km_sum / o.seeds}}},
                   {"wall_time_s", secs}},
              o.output);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonparametric hard clustering toolkit"};
  app.require_subcommand(1);

  DpOpts dp;
  CLI::App* dp_cmd = app.add_subcommand("dpmeans", "penalized clustering with data-driven cluster count");
  dp_cmd->add_option("--input", dp.input, "points CSV")->required()->check(CLI::ExistingFile);
  CLI::Option* dp_lambda = dp_cmd->add_option("--lambda", dp.lambda, "cluster penalty");
  CLI::Option* dp_hint =
      dp_cmd->add_option("--k-hint", dp.k_hint, "target cluster count for the penalty heuristic")
          ->check(CLI::PositiveNumber);
  dp_lambda->excludes(dp_hint);
  dp_hint->excludes(dp_lambda);
  dp_cmd->add_option("--max-iters", dp.max_iters)->check(CLI::PositiveNumber);
  dp_cmd->add_option("--tol", dp.tol, "objective-decrease stopping tolerance");
  dp_cmd->add_option("--seed", dp.seed, "shuffle seed");
  dp_cmd->add_flag("--shuffle", dp.shuffle, "visit points in seeded shuffled order");
  dp_cmd->add_flag("--labeled", dp.labeled, "input has a trailing label column");
  dp_cmd->add_option("--output", dp.output, "JSON result path");
  dp_cmd->callback([&] {
    dp.have_lambda = dp_lambda->count() > 0;
    if (!dp.have_lambda && dp_hint->count() == 0)
      throw CLI::RequiredError("one of --lambda and --k-hint");
    run_dpmeans_cmd(dp);
  });

  KmOpts km;
  CLI::App* km_cmd = app.add_subcommand("kmeans", "fixed-k Lloyd iterations");
  km_cmd->add_option("--input", km.input)->required()->check(CLI::ExistingFile);
  km_cmd->add_option("--k", km.k)->required()->check(CLI::PositiveNumber);
  km_cmd->add_option("--seed", km.seed);
  km_cmd->add_option("--max-iters", km.max_iters)->check(CLI::PositiveNumber);
  km_cmd->add_option("--restarts", km.restarts)->check(CLI::PositiveNumber);
  km_cmd->add_flag("--labeled", km.labeled, "input has a trailing label column");
  km_cmd->add_option("--output", km.output);
  km_cmd->callback([&] { run_kmeans_cmd(km); });

  HdpOpts hdp;
  CLI::App* hdp_cmd =
      app.add_subcommand("hdpmeans", "shared clusters across grouped datasets");
  hdp_cmd->add_option("--input", hdp.input, "grouped CSV: dataset id, coordinates")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* hdp_ll = hdp_cmd->add_option("--lambda-local", hdp.lambda_local);
  CLI::Option* hdp_lg = hdp_cmd->add_option("--lambda-global", hdp.lambda_global);
  CLI::Option* hdp_kh =
      hdp_cmd->add_option("--k-hint", hdp.k_hint, "per-dataset cluster hint")->check(CLI::PositiveNumber);
  CLI::Option* hdp_gh =
      hdp_cmd->add_option("--g-hint", hdp.g_hint, "global cluster hint")->check(CLI::PositiveNumber);
  hdp_ll->excludes(hdp_kh)->excludes(hdp_gh);
  hdp_lg->excludes(hdp_kh)->excludes(hdp_gh);
  hdp_cmd->add_option("--max-iters", hdp.max_iters)->check(CLI::PositiveNumber);
  hdp_cmd->add_option("--tol", hdp.tol);
  hdp_cmd->add_flag("--labeled", hdp.labeled, "rows end with a label column");
  hdp_cmd->add_option("--output", hdp.output);
  hdp_cmd->callback([&] {
    hdp.have_local = hdp_ll->count() > 0;
    hdp.have_global = hdp_lg->count() > 0;
    if (!hdp.have_local && hdp_kh->count() == 0)
      throw CLI::RequiredError("either --lambda-local/--lambda-global or --k-hint/--g-hint");
    if (hdp_kh->count() > 0 && hdp_gh->count() == 0)
      throw CLI::RequiredError("--g-hint (when --k-hint is given)");
    run_hdpmeans_cmd(hdp);
  });

  KernOpts kern;
  CLI::App* kern_cmd = app.add_subcommand("kernel-dpmeans", "penalized clustering in kernel space");
  kern_cmd->add_option("--input", kern.input)->required()->check(CLI::ExistingFile);
  kern_cmd->add_option("--kernel", kern.kernel)->check(CLI::IsMember({"linear", "gaussian"}));
  kern_cmd->add_option("--bandwidth", kern.bandwidth)->check(CLI::PositiveNumber);
  kern_cmd->add_option("--weights", kern.weights_path, "one integer weight per line")
      ->check(CLI::ExistingFile);
  kern_cmd->add_option("--lambda", kern.lambda)->required();
  kern_cmd->add_option("--max-iters", kern.max_iters)->check(CLI::PositiveNumber);
  kern_cmd->add_flag("--labeled", kern.labeled);
  kern_cmd->add_option("--output", kern.output);
  kern_cmd->callback([&] { run_kernel_cmd(kern); });

  SpectralOpts sp;
  CLI::App* sp_cmd = app.add_subcommand("spectral", "eigenvector relaxation and rounding");
  sp_cmd->add_option("--input", sp.input)->required()->check(CLI::ExistingFile);
  sp_cmd->add_option("--kernel", sp.kernel)->check(CLI::IsMember({"linear", "gaussian"}));
  sp_cmd->add_option("--bandwidth", sp.bandwidth)->check(CLI::PositiveNumber);
  sp_cmd->add_option("--lambda", sp.lambda)->required();
  sp_cmd->add_option("--seed", sp.seed, "rounding seed");
  sp_cmd->add_flag("--labeled", sp.labeled);
  sp_cmd->add_option("--output", sp.output);
  sp_cmd->callback([&] { run_spectral_cmd(sp); });

  NcutOpts nc;
  CLI::App* nc_cmd = app.add_subcommand("ncut", "penalized normalized graph cut");
  nc_cmd->add_option("--graph", nc.graph, "edge list: i j weight")->required()->check(CLI::ExistingFile);
  nc_cmd->add_option("--lambda-prime", nc.lambda_prime)->required();
  nc_cmd->add_option("--shift", nc.shift, "'auto' or a diagonal shift value");
  nc_cmd->add_option("--max-iters", nc.max_iters)->check(CLI::PositiveNumber);
  nc_cmd->add_flag("--sparse", nc.sparse, "adjacency-only distance path");
  nc_cmd->add_option("--output", nc.output);
  nc_cmd->callback([&] { run_ncut_cmd(nc); });

  GibbsOpts gb;
  CLI::App* gb_cmd = app.add_subcommand("gibbs", "collapsed sampler for the mixture posterior");
  gb_cmd->add_option("--input", gb.input)->required()->check(CLI::ExistingFile);
  gb_cmd->add_option("--sigma", gb.sigma)->check(CLI::PositiveNumber);
  gb_cmd->add_option("--rho", gb.rho)->check(CLI::PositiveNumber);
  CLI::Option* gb_alpha = gb_cmd->add_option("--alpha", gb.alpha, "concentration value");
  CLI::Option* gb_lambda =
      gb_cmd->add_option("--alpha-from-lambda", gb.lambda, "derive concentration from a penalty");
  gb_alpha->excludes(gb_lambda);
  gb_lambda->excludes(gb_alpha);
  gb_cmd->add_option("--iters", gb.iters)->check(CLI::PositiveNumber);
  gb_cmd->add_option("--burn-in", gb.burn_in)->check(CLI::NonNegativeNumber);
  gb_cmd->add_option("--thin", gb.thin)->check(CLI::PositiveNumber);
  gb_cmd->add_option("--seed", gb.seed);
  gb_cmd->add_flag("--sample-alpha", gb.sample_alpha, "resample the concentration each sweep");
  gb_cmd->add_option("--alpha-shape", gb.alpha_shape)->check(CLI::PositiveNumber);
  gb_cmd->add_option("--alpha-rate", gb.alpha_rate)->check(CLI::PositiveNumber);
  gb_cmd->add_flag("--labeled", gb.labeled);
  gb_cmd->add_option("--output", gb.output);
  gb_cmd->callback([&] {
    gb.have_alpha = gb_alpha->count() > 0;
    gb.have_lambda = gb_lambda->count() > 0;
    if (!gb.have_alpha && !gb.have_lambda)
      throw CLI::RequiredError("one of --alpha and --alpha-from-lambda");
    run_gibbs_cmd(gb);
  });

  NmiOpts nm;
  CLI::App* nm_cmd = app.add_subcommand("nmi", "normalized mutual information of two labelings");
  nm_cmd->add_option("a", nm.a, "label file")->required()->check(CLI::ExistingFile);
  nm_cmd->add_option("b", nm.b, "label file")->required()->check(CLI::ExistingFile);
  nm_cmd->add_option("--output", nm.output);
  nm_cmd->callback([&] { run_nmi_cmd(nm); });

  CLI::App* synth_cmd = app.add_subcommand("synth", "synthetic dataset generators");
  synth_cmd->require_subcommand(1);
  SynthGaussOpts sg;
  CLI::App* sg_cmd = synth_cmd->add_subcommand("gaussians", "three separated spherical components");
  sg_cmd->add_option("--output", sg.output)->required();
  sg_cmd->add_option("--seed", sg.seed);
  sg_cmd->add_option("--points-per-component", sg.per_component)->check(CLI::PositiveNumber);
  sg_cmd->add_option("--separation", sg.separation, "component distance in units of stddev")
      ->check(CLI::PositiveNumber);
  sg_cmd->add_option("--stddev", sg.stddev)->check(CLI::PositiveNumber);
  sg_cmd->add_flag("--labeled", sg.labeled, "append the component as a label column");
  sg_cmd->add_option("--labels", sg.labels_path, "write labels to a separate file");
  sg_cmd->callback([&] { run_synth_gaussians(sg); });

  SynthHdpOpts sh;
  CLI::App* sh_cmd = synth_cmd->add_subcommand("hdp-benchmark", "grouped datasets sharing components");
  sh_cmd->add_option("--output", sh.output)->required();
  sh_cmd->add_option("--seed", sh.seed);
  sh_cmd->add_option("--datasets", sh.datasets)->check(CLI::PositiveNumber);
  sh_cmd->add_option("--components", sh.components)->check(CLI::PositiveNumber);
  sh_cmd->add_option("--components-per-dataset", sh.per_dataset)->check(CLI::PositiveNumber);
  sh_cmd->add_option("--points-per-component", sh.per_component)->check(CLI::PositiveNumber);
  sh_cmd->add_flag("--labeled", sh.labeled, "append the shared component as a label column");
  sh_cmd->callback([&] { run_synth_hdp(sh); });

  CLI::App* repro_cmd = app.add_subcommand("repro", "benchmark reproductions");
  repro_cmd->require_subcommand(1);
  ReproOpts rf;
  CLI::App* rf_cmd = repro_cmd->add_subcommand("fig2", "three-Gaussian seeds table and penalty sweep");
  rf_cmd->add_option("--seed", rf.seed, "base seed");
  rf_cmd->add_option("--seeds", rf.seeds, "number of runs")->check(CLI::PositiveNumber);
  rf_cmd->add_option("--points-per-component", rf.per_component)->check(CLI::PositiveNumber);
  rf_cmd->add_option("--separation", rf.separation)->check(CLI::PositiveNumber);
  rf_cmd->add_option("--output", rf.output);
  rf_cmd->callback([&] { run_repro_fig2(rf); });

  ReproHdpOpts rh;
  CLI::App* rh_cmd = repro_cmd->add_subcommand("hdp-bench", "grouped benchmark against pooled baselines");
  rh_cmd->add_option("--seed", rh.seed, "base seed");
  rh_cmd->add_option("--seeds", rh.seeds, "number of runs")->check(CLI::PositiveNumber);
  rh_cmd->add_option("--output", rh.output);
  rh_cmd->callback([&] { run_repro_hdp(rh); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

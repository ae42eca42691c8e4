#include "npclust/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace npclust {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate(const GibbsConfig& c) {
  if (!(c.sigma > 0.0) || !std::isfinite(c.sigma)) throw std::invalid_argument("sigma must be positive and finite");
  if (!(c.rho > 0.0) || !std::isfinite(c.rho)) throw std::invalid_argument("rho must be positive and finite");
  if (!std::isfinite(c.log_alpha)) throw std::invalid_argument("log_alpha must be finite");
  if (c.iterations < 1 || c.burn_in < 0 || c.thinning < 1)
    throw std::invalid_argument("iterations must be >= 1, burn_in >= 0, thinning >= 1");
}

// lgamma(exp(log_x)) that stays finite when exp underflows: for x -> 0,
// lgamma(x) = -log x - gamma_euler * x + O(x^2).
double lgamma_from_log(double log_x) {
  if (log_x < -30.0) return -log_x;
  return std::lgamma(std::exp(log_x));
}

}  // namespace

double log_alpha_from_lambda(double lambda, double sigma, double rho, int dims) {
  if (!(sigma > 0.0) || !(rho > 0.0) || dims < 1)
    throw std::invalid_argument("log_alpha_from_lambda: sigma, rho must be positive and dims >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("log_alpha_from_lambda: lambda must be non-negative and finite");
  double v = 0.5 * dims * std::log1p(rho / sigma) - lambda / (2.0 * sigma);
  if (!std::isfinite(v)) throw std::overflow_error("log_alpha_from_lambda: value is not finite even in log space");
  return v;
}

double alpha_from_lambda(double lambda, double sigma, double rho, int dims) {
  return std::exp(log_alpha_from_lambda(lambda, sigma, rho, dims));
}

std::vector<double> assignment_distribution(const GibbsState& state, std::span<const double> x,
                                            const GibbsConfig& config) {
  validate(config);
  int k = state.k();
  int dims = static_cast<int>(x.size());
  if (k > 0 && state.means.cols() != dims)
    throw std::invalid_argument("assignment_distribution: dimension mismatch");
  std::vector<double> log_mass(k + 1);
  for (int c = 0; c < k; ++c) {
    if (state.sizes[c] < 1) throw std::invalid_argument("assignment_distribution: cluster with no members");
    log_mass[c] = std::log(static_cast<double>(state.sizes[c])) - 0.5 * dims * std::log(kTwoPi * config.sigma) -
                  sq_dist(x, state.means.row(c)) / (2.0 * config.sigma);
  }
  double spread = config.rho + config.sigma;
  double xsq = dot(x, x);
  log_mass[k] = state.log_alpha - 0.5 * dims * std::log(kTwoPi * spread) - xsq / (2.0 * spread);

  double top = *std::max_element(log_mass.begin(), log_mass.end());
  if (!std::isfinite(top)) throw std::runtime_error("assignment_distribution: all masses vanished");
  double total = 0.0;
  std::vector<double> probs(k + 1);
  for (int c = 0; c <= k; ++c) {
    probs[c] = std::exp(log_mass[c] - top);
    total += probs[c];
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::vector<double> sample_mean_posterior(const PointSet& points, std::span<const int> members,
                                          double sigma, double rho, Rng& rng) {
  std::vector<double> mean = mean_of(points, members);
  double nc = static_cast<double>(members.size());
  double shrink = 1.0 / (1.0 + sigma / (rho * nc));
  double stddev = std::sqrt(sigma * rho / (sigma + rho * nc));
  for (double& v : mean) v = shrink * v + stddev * rng.normal();
  return mean;
}

double complete_data_log_joint(const PointSet& points, const GibbsState& state, const GibbsConfig& config) {
  int n = points.n();
  int dims = points.dim();
  int k = state.k();
  // Exchangeable partition prior: alpha^k Gamma(alpha) / Gamma(alpha + n)
  // times the product of (n_c - 1)!.
  double lp = k * state.log_alpha + lgamma_from_log(state.log_alpha);
  if (state.log_alpha < -30.0)
    lp -= std::lgamma(static_cast<double>(n));  // Gamma(alpha + n) -> Gamma(n)
  else
    lp -= std::lgamma(std::exp(state.log_alpha) + n);
  for (int c = 0; c < k; ++c) lp += std::lgamma(static_cast<double>(state.sizes[c]));
  for (int c = 0; c < k; ++c) {
    auto mu = state.means.row(c);
    lp += -0.5 * dims * std::log(kTwoPi * config.rho) - dot(mu, mu) / (2.0 * config.rho);
  }
  for (int i = 0; i < n; ++i)
    lp += -0.5 * dims * std::log(kTwoPi * config.sigma) -
          sq_dist(points.point(i), state.means.row(state.assignments[i])) / (2.0 * config.sigma);
  return lp;
}

GibbsResult run_gibbs(const PointSet& points, const GibbsConfig& config) {
  validate(config);
  int n = points.n();
  int dims = points.dim();
  Rng rng(config.seed);

  GibbsState state;
  state.log_alpha = config.log_alpha;
  state.assignments.assign(n, 0);
  state.sizes = {n};
  state.means = Matrix(1, dims);
  {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    auto mu = sample_mean_posterior(points, all, config.sigma, config.rho, rng);
    std::copy(mu.begin(), mu.end(), state.means.row(0).begin());
  }

  GibbsResult out;
  bool have_best = false;
  for (int sweep = 1; sweep <= config.iterations; ++sweep) {
    for (int i = 0; i < n; ++i) {
      int c = state.assignments[i];
      if (--state.sizes[c] == 0) {
        // Collapse the emptied cluster.
        state.sizes.erase(state.sizes.begin() + c);
        Matrix shrunk(state.k(), dims);
        for (int r = 0, src = 0; src < state.k() + 1; ++src) {
          if (src == c) continue;
          std::copy(state.means.row(src).begin(), state.means.row(src).end(), shrunk.row(r++).begin());
        }
        state.means = std::move(shrunk);
        for (int& a : state.assignments) {
          if (a > c) --a;
        }
      }
      std::vector<double> probs = assignment_distribution(state, points.point(i), config);
      double u = rng.uniform();
      int pick = 0;
      double acc = 0.0;
      for (; pick < static_cast<int>(probs.size()) - 1; ++pick) {
        acc += probs[pick];
        if (u < acc) break;
      }
      if (pick == state.k()) {
        std::vector<int> solo = {i};
        auto mu = sample_mean_posterior(points, solo, config.sigma, config.rho, rng);
        Matrix grown(state.k() + 1, dims);
        for (int r = 0; r < state.k(); ++r)
          std::copy(state.means.row(r).begin(), state.means.row(r).end(), grown.row(r).begin());
        std::copy(mu.begin(), mu.end(), grown.row(state.k()).begin());
        state.means = std::move(grown);
        state.sizes.push_back(1);
        state.assignments[i] = state.k() - 1;
      } else {
        ++state.sizes[pick];
        state.assignments[i] = pick;
      }
    }

    // Redraw every cluster mean from its posterior.
    {
      std::vector<std::vector<int>> members(state.k());
      for (int i = 0; i < n; ++i) members[state.assignments[i]].push_back(i);
      for (int c = 0; c < state.k(); ++c) {
        auto mu = sample_mean_posterior(points, members[c], config.sigma, config.rho, rng);
        std::copy(mu.begin(), mu.end(), state.means.row(c).begin());
      }
    }

    if (config.sample_alpha) {
      // Auxiliary-variable concentration update under a gamma prior.
      double alpha = std::exp(std::min(state.log_alpha, 700.0));
      if (alpha <= 0.0) alpha = std::numeric_limits<double>::min();
      double eta = rng.beta(alpha + 1.0, static_cast<double>(n));
      int k = state.k();
      double rate = config.alpha_rate - std::log(eta);
      double odds = (config.alpha_shape + k - 1.0) / (n * rate);
      double shape = (rng.uniform() < odds / (1.0 + odds)) ? config.alpha_shape + k
                                                           : config.alpha_shape + k - 1.0;
      state.log_alpha = std::log(rng.gamma(shape, rate));
    }

    out.k_trace.push_back(state.k());
    if (sweep > config.burn_in && (sweep - config.burn_in) % config.thinning == 0) {
      double lj = complete_data_log_joint(points, state, config);
      out.samples.push_back(state);
      out.sample_log_joints.push_back(lj);
      if (!have_best || lj > out.best_log_joint) {
        out.best_log_joint = lj;
        have_best = true;
        out.point_estimate.assignments = state.assignments;
        out.point_estimate.k = state.k();
        out.point_estimate.centroids = state.means;
        out.point_estimate.objective = lj;
      }
    }
  }
  if (!have_best) throw std::runtime_error("run_gibbs: no samples emitted; lower burn_in or raise iterations");
  out.point_estimate.iterations = config.iterations;
  return out;
}

}  // namespace npclust

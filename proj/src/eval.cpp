#include "npclust/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace npclust {

ContingencyTable contingency(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("contingency: label vectors differ in length");
  if (a.empty()) throw std::invalid_argument("contingency: empty labelings");
  // Compact labels in order of first appearance.
  std::map<int, int> amap, bmap;
  int ra = 0, rb = 0;
  for (int v : a)
    if (amap.emplace(v, ra).second) ++ra;
  for (int v : b)
    if (bmap.emplace(v, rb).second) ++rb;
  ContingencyTable t;
  t.n = static_cast<int>(a.size());
  t.counts.assign(ra, std::vector<long>(rb, 0));
  for (std::size_t i = 0; i < a.size(); ++i) ++t.counts[amap[a[i]]][bmap[b[i]]];
  return t;
}

double nmi(const std::vector<int>& a, const std::vector<int>& b) {
  ContingencyTable t = contingency(a, b);
  int ra = static_cast<int>(t.counts.size());
  int rb = static_cast<int>(t.counts[0].size());
  if (ra == 1 && rb == 1) return 1.0;
  double n = static_cast<double>(t.n);
  std::vector<double> pa(ra, 0.0), pb(rb, 0.0);
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < rb; ++j) {
      pa[i] += t.counts[i][j];
      pb[j] += t.counts[i][j];
    }
  double ha = 0.0, hb = 0.0;
  for (double v : pa)
    if (v > 0) ha -= (v / n) * std::log(v / n);
  for (double v : pb)
    if (v > 0) hb -= (v / n) * std::log(v / n);
  if (ha == 0.0 || hb == 0.0) return 0.0;
  double info = 0.0;
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < rb; ++j) {
      double pij = t.counts[i][j] / n;
      if (pij > 0) info += pij * std::log(pij * n * n / (pa[i] * pb[j]));
    }
  return std::clamp(info / std::sqrt(ha * hb), 0.0, 1.0);
}

PartitionEnumerator::PartitionEnumerator(int n) {
  if (n < 1) throw std::invalid_argument("PartitionEnumerator: n must be >= 1");
  a_.assign(n, 0);
  prefix_max_.assign(n, 0);
}

bool PartitionEnumerator::next() {
  int n = static_cast<int>(a_.size());
  // Restricted growth strings: a[i] <= 1 + max(a[0..i-1]).
  for (int i = n - 1; i > 0; --i) {
    if (a_[i] <= prefix_max_[i - 1]) {
      ++a_[i];
      prefix_max_[i] = std::max(prefix_max_[i - 1], a_[i]);
      for (int j = i + 1; j < n; ++j) {
        a_[j] = 0;
        prefix_max_[j] = prefix_max_[j - 1];
      }
      max_ = prefix_max_[n - 1];
      return true;
    }
  }
  return false;
}

BruteForceResult brute_force_optimum(const PointSet& points, double lambda) {
  int n = points.n();
  if (n > 12) throw std::invalid_argument("brute_force_optimum: n must be <= 12");
  if (!(lambda >= 0.0)) throw std::invalid_argument("brute_force_optimum: lambda must be non-negative");
  int d = points.dim();
  std::vector<double> sq_norm(n, 0.0);
  for (int i = 0; i < n; ++i) sq_norm[i] = dot(points.point(i), points.point(i));

  BruteForceResult best;
  bool have = false;
  PartitionEnumerator pe(n);
  do {
    const std::vector<int>& z = pe.assignment();
    int k = pe.block_count();
    std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
    std::vector<int> count(k, 0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      ++count[z[i]];
      total += sq_norm[i];
      auto row = points.point(i);
      for (int j = 0; j < d; ++j) sums[z[i]][j] += row[j];
    }
    for (int c = 0; c < k; ++c) {
      double s2 = 0.0;
      for (int j = 0; j < d; ++j) s2 += sums[c][j] * sums[c][j];
      total -= s2 / count[c];
    }
    double obj = total + lambda * k;
    if (!have || obj < best.objective) {
      best.objective = obj;
      best.assignments = z;
      have = true;
    }
  } while (pe.next());
  return best;
}

BruteForceResult brute_force_penalized_cut(const SparseGraph& graph, double lambda_prime) {
  if (graph.n > 10) throw std::invalid_argument("brute_force_penalized_cut: n must be <= 10");
  BruteForceResult best;
  bool have = false;
  PartitionEnumerator pe(graph.n);
  do {
    double obj = cut_objective(graph, pe.assignment()) + lambda_prime * pe.block_count();
    if (!have || obj < best.objective) {
      best.objective = obj;
      best.assignments = pe.assignment();
      have = true;
    }
  } while (pe.next());
  return best;
}

}  // namespace npclust

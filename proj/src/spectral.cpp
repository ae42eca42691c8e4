#include "npclust/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace npclust {

Matrix indicator_matrix(const std::vector<int>& assignments, int k) {
  if (k < 1) throw std::invalid_argument("indicator_matrix: k must be >= 1");
  int n = static_cast<int>(assignments.size());
  std::vector<int> count(k, 0);
  for (int a : assignments) {
    if (a < 0 || a >= k) throw std::invalid_argument("indicator_matrix: assignment id out of range");
    ++count[a];
  }
  for (int c = 0; c < k; ++c)
    if (count[c] == 0) throw std::invalid_argument("indicator_matrix: empty cluster id referenced");
  Matrix y(n, k, 0.0);
  for (int i = 0; i < n; ++i) y(i, assignments[i]) = 1.0 / std::sqrt(static_cast<double>(count[assignments[i]]));
  return y;
}

double trace_objective(const KernelMatrix& k, const Matrix& y, double lambda) {
  if (y.rows() != k.n()) throw std::invalid_argument("trace_objective: row count must match the kernel size");
  int m = y.cols();
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      double g = 0.0;
      for (int i = 0; i < y.rows(); ++i) g += y(i, a) * y(i, b);
      if (std::abs(g - (a == b ? 1.0 : 0.0)) > 1e-8)
        throw std::invalid_argument("trace_objective: columns are not orthonormal");
    }
  double total = 0.0;
  std::vector<double> col(y.rows());
  for (int c = 0; c < m; ++c) {
    for (int i = 0; i < y.rows(); ++i) col[i] = y(i, c);
    std::vector<double> kc = matvec(k.gram.m, col);
    total += dot(col, kc);
  }
  return total - lambda * m;
}

RelaxedSolution relax(const KernelMatrix& k, double lambda) {
  EigenDecomposition eig = sym_eig(k.gram);
  RelaxedSolution out;
  std::vector<int> kept;
  for (int i = 0; i < static_cast<int>(eig.eigenvalues.size()); ++i) {
    double gap = eig.eigenvalues[i] - lambda;
    if (std::abs(gap) <= 1e-10) {
      ++out.boundary_count;
    } else if (gap > 0.0) {
      kept.push_back(i);
      out.eigenvalues.push_back(eig.eigenvalues[i]);
      out.value += gap;
    }
  }
  out.y = Matrix(k.n(), static_cast<int>(kept.size()));
  for (int c = 0; c < static_cast<int>(kept.size()); ++c)
    for (int i = 0; i < k.n(); ++i) out.y(i, c) = eig.eigenvectors(i, kept[c]);
  return out;
}

Clustering round_relaxed(const Matrix& y, std::uint64_t seed) {
  int n = y.rows();
  int m = y.cols();
  if (m == 0) {
    Clustering single;
    single.assignments.assign(n, 0);
    single.k = 1;
    single.centroids = Matrix(1, 1, 0.0);
    single.iterations = 0;
    return single;
  }
  Matrix rows(n, m);
  for (int i = 0; i < n; ++i) {
    double norm = std::sqrt(dot(y.row(i), y.row(i)));
    for (int j = 0; j < m; ++j) rows(i, j) = norm > 0.0 ? y(i, j) / norm : 0.0;
  }
  return run_kmeans(PointSet(std::move(rows)), m, seed, 100, 10);
}

}  // namespace npclust

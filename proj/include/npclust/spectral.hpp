#pragma once

#include <cstdint>
#include <vector>

#include "npclust/core.hpp"
#include "npclust/dpmeans.hpp"
#include "npclust/kernel.hpp"

namespace npclust {

// Normalized cluster indicator: column c carries 1/sqrt(n_c) on the members
// of cluster c, so the columns are orthonormal.
Matrix indicator_matrix(const std::vector<int>& assignments, int k);

// tr(Y^T (K - lambda I) Y) for any matrix with orthonormal columns. Throws
// when the columns are not orthonormal within 1e-8.
double trace_objective(const KernelMatrix& k, const Matrix& y, double lambda);

struct RelaxedSolution {
  Matrix y;                        // eigenvectors with eigenvalue > lambda
  std::vector<double> eigenvalues; // the kept eigenvalues, descending
  double value = 0.0;              // sum of (eigenvalue - lambda) over kept
  int boundary_count = 0;          // eigenvalues within 1e-10 of lambda, excluded
};

// Unconstrained maximizer of the trace objective over orthonormal columns:
// keep exactly the eigenvectors whose eigenvalue exceeds lambda strictly
// (values within 1e-10 of lambda are excluded and counted).
RelaxedSolution relax(const KernelMatrix& k, double lambda);

// Rounds a relaxed solution to a hard clustering: rows are normalized to
// unit length (zero rows stay at the origin) and clustered by k-means with
// k = column count over 10 restarts. Zero columns falls back to one cluster.
Clustering round_relaxed(const Matrix& y, std::uint64_t seed);

}  // namespace npclust

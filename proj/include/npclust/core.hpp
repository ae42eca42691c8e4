#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "npclust/matrix.hpp"

namespace npclust {

// n points of dimension d, one per row. Construction rejects empty or
// non-finite data.
struct PointSet {
  Matrix data;

  PointSet() = default;
  explicit PointSet(Matrix m);

  int n() const { return data.rows(); }
  int dim() const { return data.cols(); }
  std::span<const double> point(int i) const { return data.row(i); }
};

// Square matrix checked for exact symmetry at construction.
struct SymmetricMatrix {
  Matrix m;

  SymmetricMatrix() = default;
  explicit SymmetricMatrix(Matrix sq);

  int n() const { return m.rows(); }
};

// Eigenvalues sorted descending; eigenvectors() column j pairs with
// eigenvalue j.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

// Deterministic seeded generator. The variate algorithms are spelled out here
// (rather than delegating to std distributions) so a seed pins the exact
// stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform on {0, ..., n - 1}.
  int uniform_int(int n);

  // Standard normal via Box-Muller; the paired variate is cached.
  double normal();

  // Gamma(shape, rate) via Marsaglia-Tsang squeeze.
  double gamma(double shape, double rate);

  double beta(double a, double b);

  // In-place Fisher-Yates.
  void shuffle(std::vector<int>& v);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

double sq_dist(std::span<const double> a, std::span<const double> b);

// Coordinate-wise mean of the selected rows; members must be non-empty and
// in range.
std::vector<double> mean_of(const PointSet& points, std::span<const int> members);
std::vector<double> mean_of(const PointSet& points);

PointSet select_rows(const PointSet& points, std::span<const int> rows);

// Cyclic Jacobi rotations; sweeps until every off-diagonal magnitude falls
// below 1e-12 times the Frobenius norm of the input.
EigenDecomposition sym_eig(const SymmetricMatrix& a);

}  // namespace npclust

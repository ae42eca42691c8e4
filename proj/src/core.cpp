#include "npclust/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace npclust {

PointSet::PointSet(Matrix m) : data(std::move(m)) {
  if (data.rows() < 1 || data.cols() < 1) throw std::invalid_argument("point set must have n >= 1 and d >= 1");
  if (!data.all_finite()) throw std::invalid_argument("point set contains non-finite values");
}

SymmetricMatrix::SymmetricMatrix(Matrix sq) : m(std::move(sq)) {
  if (m.rows() != m.cols()) throw std::invalid_argument("symmetric matrix must be square");
  if (!m.all_finite()) throw std::invalid_argument("symmetric matrix contains non-finite values");
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) throw std::invalid_argument("matrix is not exactly symmetric");
}

int Rng::uniform_int(int n) {
  if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
  return static_cast<int>(uniform() * n);
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

double Rng::gamma(double shape, double rate) {
  if (shape <= 0.0 || rate <= 0.0) throw std::invalid_argument("gamma: shape and rate must be positive");
  if (shape < 1.0) {
    // Boost to shape + 1 and scale back.
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = uniform();
    while (u <= 0.0) u = uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v / rate;
  }
}

double Rng::beta(double a, double b) {
  double x = gamma(a, 1.0);
  double y = gamma(b, 1.0);
  return x / (x + y);
}

void Rng::shuffle(std::vector<int>& v) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
    int j = uniform_int(i + 1);
    std::swap(v[i], v[j]);
  }
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sq_dist: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

std::vector<double> mean_of(const PointSet& points, std::span<const int> members) {
  if (members.empty()) throw std::invalid_argument("mean_of: empty member set");
  std::vector<double> m(points.dim(), 0.0);
  for (int idx : members) {
    if (idx < 0 || idx >= points.n()) throw std::out_of_range("mean_of: member index out of range");
    auto row = points.point(idx);
    for (int j = 0; j < points.dim(); ++j) m[j] += row[j];
  }
  for (double& v : m) v /= static_cast<double>(members.size());
  return m;
}

std::vector<double> mean_of(const PointSet& points) {
  std::vector<int> all(points.n());
  std::iota(all.begin(), all.end(), 0);
  return mean_of(points, all);
}

PointSet select_rows(const PointSet& points, std::span<const int> rows) {
  if (rows.empty()) throw std::invalid_argument("select_rows: empty selection");
  Matrix m(static_cast<int>(rows.size()), points.dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= points.n()) throw std::out_of_range("select_rows: index out of range");
    auto src = points.point(rows[i]);
    std::copy(src.begin(), src.end(), m.row(static_cast<int>(i)).begin());
  }
  return PointSet(std::move(m));
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition sym_eig(const SymmetricMatrix& a) {
  int n = a.n();
  if (n == 0) throw std::invalid_argument("sym_eig: empty matrix");
  Matrix w = a.m;
  Matrix v(n, n, 0.0);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  double threshold = 1e-12 * a.m.frobenius_norm();
  const int max_sweeps = 128;
  for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(w) > threshold; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (w(p, q) == 0.0) continue;
        double theta = (w(q, q) - w(p, p)) / (2.0 * w(p, q));
        double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double tau = s / (1.0 + c);
        double wpq = w(p, q);
        w(p, p) -= t * wpq;
        w(q, q) += t * wpq;
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i != p && i != q) {
            double wip = w(i, p);
            double wiq = w(i, q);
            w(i, p) = wip - s * (wiq + tau * wip);
            w(p, i) = w(i, p);
            w(i, q) = wiq + s * (wip - tau * wiq);
            w(q, i) = w(i, q);
          }
          double vip = v(i, p);
          double viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return w(i, i) > w(j, j); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = w(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

}  // namespace npclust

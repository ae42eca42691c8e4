#pragma once

#include <span>
#include <vector>

namespace npclust {

// Dense row-major matrix of doubles. Sized once at construction; entries are
// mutable through operator() and row().
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::span<double> row(int i) { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }
  std::span<const double> row(int i) const { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool all_finite() const;
  double frobenius_norm() const;

  bool operator==(const Matrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);

// y = M x
std::vector<double> matvec(const Matrix& m, std::span<const double> x);

}  // namespace npclust

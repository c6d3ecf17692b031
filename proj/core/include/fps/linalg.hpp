#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fps {

// Square system A x = b, A stored row-major.
class DenseSystem {
 public:
  explicit DenseSystem(std::size_t n) : n_(n), matrix_(n * n, 0.0), rhs_(n, 0.0) {}
  DenseSystem(std::size_t n, std::vector<double> matrix, std::vector<double> rhs);

  std::size_t size() const { return n_; }

  double& at(std::size_t row, std::size_t col) { return matrix_[row * n_ + col]; }
  double at(std::size_t row, std::size_t col) const { return matrix_[row * n_ + col]; }
  std::span<double> row(std::size_t r) { return {matrix_.data() + r * n_, n_}; }
  std::span<const double> row(std::size_t r) const { return {matrix_.data() + r * n_, n_}; }

  std::vector<double>& rhs() { return rhs_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<double>& matrix() const { return matrix_; }

 private:
  std::size_t n_;
  std::vector<double> matrix_;
  std::vector<double> rhs_;
};

// LU with partial pivoting. Throws SingularSystem when a pivot falls below
// 1e-12 * max|A_ij| or when A has non-finite entries.
std::vector<double> solve_dense_linear(DenseSystem system);

// max_i |(A x - b)_i|
double residual_inf_norm(const DenseSystem& system, std::span<const double> x);

}  // namespace fps

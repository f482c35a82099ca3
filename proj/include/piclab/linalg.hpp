#pragma once

#include <cstddef>
#include <vector>

namespace piclab::linalg {

// Dense row-major matrix. Alphabets in this library are small, so no attempt
// is made at blocking or sparsity.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);

// Kronecker product, row-major over (i,j) index pairs.
Matrix kron(const Matrix& a, const Matrix& b);

struct Svd {
  Matrix u;                    // m x r, orthonormal columns
  std::vector<double> sigma;   // r singular values, descending
  Matrix v;                    // n x r, orthonormal columns
};

// Thin SVD of a dense matrix by one-sided Jacobi rotations, r = min(m, n).
// Rotations stop once every column pair satisfies
// |a_p . a_q| <= tol * ||a_p|| * ||a_q||. Columns with vanishing norm are
// completed to an orthonormal basis deterministically.
Svd jacobi_svd(const Matrix& a, double tol = 1e-12, int max_sweeps = 100);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k pairs with values[k]
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
SymmetricEigen jacobi_eigen(const Matrix& a, double tol = 1e-12, int max_sweeps = 100);

}  // namespace piclab::linalg

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rcgap {

/// Dense row-major real matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static Matrix identity(int n);
};

Matrix matmul(const Matrix& x, const Matrix& y);
Matrix transpose(const Matrix& x);
double max_abs_diff(const Matrix& x, const Matrix& y);

/// Sparse row-list matrix; entries within a row are kept sorted by column.
struct SparseMatrix {
  struct Entry {
    int col;
    double v;
  };
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<Entry>> row;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c), row(r) {}

  void add(int i, int j, double v);
  Matrix dense() const;
};

SparseMatrix sparse_matmul(const SparseMatrix& x, const SparseMatrix& y);
double max_abs_diff(const SparseMatrix& x, const SparseMatrix& y);

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending. Deterministic for a fixed input.
std::vector<double> jacobi_eigenvalues(Matrix s, double tol = 1e-12, int max_sweeps = 100);

/// As above but also returns eigenvectors (columns of *vectors).
std::vector<double> jacobi_eigen(Matrix s, Matrix* vectors, double tol = 1e-12,
                                 int max_sweeps = 100);

struct ExtremeEigs {
  double min = 0.0;
  double max = 0.0;
};

using MatVec = std::function<void(const double* x, double* y)>;

/// Extreme eigenvalues of a symmetric operator by Lanczos iteration with
/// full reorthogonalization. `deflate` vectors (orthonormal) are projected
/// out of the Krylov space. Deterministic: fixed start vector.
ExtremeEigs lanczos_extreme_eigenvalues(const MatVec& apply, int n,
                                        const std::vector<std::vector<double>>& deflate = {},
                                        int max_iter = 600, double tol = 1e-13);

}  // namespace rcgap

#include "rcgap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rcgap/graph.hpp"

namespace rcgap {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw Error("matmul: dimension mismatch");
  Matrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      double xv = x(i, k);
      if (xv == 0.0) continue;
      const double* yr = &y.a[static_cast<std::size_t>(k) * y.cols];
      double* zr = &z.a[static_cast<std::size_t>(i) * z.cols];
      for (int j = 0; j < y.cols; ++j) zr[j] += xv * yr[j];
    }
  return z;
}

Matrix transpose(const Matrix& x) {
  Matrix t(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) t(j, i) = x(i, j);
  return t;
}

double max_abs_diff(const Matrix& x, const Matrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw Error("max_abs_diff: shape mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::abs(x.a[i] - y.a[i]));
  return d;
}

void SparseMatrix::add(int i, int j, double v) {
  if (v == 0.0) return;
  auto& r = row[i];
  auto it = std::lower_bound(r.begin(), r.end(), j,
                             [](const Entry& e, int c) { return e.col < c; });
  if (it != r.end() && it->col == j)
    it->v += v;
  else
    r.insert(it, Entry{j, v});
}

Matrix SparseMatrix::dense() const {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (const Entry& e : row[i]) m(i, e.col) = e.v;
  return m;
}

SparseMatrix sparse_matmul(const SparseMatrix& x, const SparseMatrix& y) {
  if (x.cols != y.rows) throw Error("sparse_matmul: dimension mismatch");
  SparseMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (const auto& ex : x.row[i])
      for (const auto& ey : y.row[ex.col]) z.add(i, ey.col, ex.v * ey.v);
  return z;
}

double max_abs_diff(const SparseMatrix& x, const SparseMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw Error("max_abs_diff: shape mismatch");
  double d = 0.0;
  for (int i = 0; i < x.rows; ++i) {
    std::size_t a = 0, b = 0;
    const auto& rx = x.row[i];
    const auto& ry = y.row[i];
    while (a < rx.size() || b < ry.size()) {
      if (b >= ry.size() || (a < rx.size() && rx[a].col < ry[b].col))
        d = std::max(d, std::abs(rx[a++].v));
      else if (a >= rx.size() || ry[b].col < rx[a].col)
        d = std::max(d, std::abs(ry[b++].v));
      else {
        d = std::max(d, std::abs(rx[a].v - ry[b].v));
        ++a;
        ++b;
      }
    }
  }
  return d;
}

std::vector<double> jacobi_eigen(Matrix s, Matrix* vectors, double tol, int max_sweeps) {
  const int n = s.rows;
  if (s.cols != n) throw Error("jacobi: matrix must be square");
  if (vectors) *vectors = Matrix::identity(n);
  auto off_norm = [&]() {
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) sum += 2.0 * s(i, j) * s(i, j);
    return std::sqrt(sum);
  };
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(s(i, j)));
  if (scale == 0.0) scale = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tol * scale * n) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = s(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;
        for (int k = 0; k < n; ++k) {
          double skp = s(k, p), skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (int k = 0; k < n; ++k) {
          double spk = s(p, k), sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
        if (vectors)
          for (int k = 0; k < n; ++k) {
            double vkp = (*vectors)(k, p), vkq = (*vectors)(k, q);
            (*vectors)(k, p) = c * vkp - sn * vkq;
            (*vectors)(k, q) = sn * vkp + c * vkq;
          }
      }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = s(i, i);
  if (vectors) {
    // sort eigenpairs ascending
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return eig[a] < eig[b]; });
    Matrix sorted(n, n);
    std::vector<double> eig_sorted(n);
    for (int j = 0; j < n; ++j) {
      eig_sorted[j] = eig[order[j]];
      for (int i = 0; i < n; ++i) sorted(i, j) = (*vectors)(i, order[j]);
    }
    *vectors = std::move(sorted);
    return eig_sorted;
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::vector<double> jacobi_eigenvalues(Matrix s, double tol, int max_sweeps) {
  return jacobi_eigen(std::move(s), nullptr, tol, max_sweeps);
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Eigenvalues of a symmetric tridiagonal matrix via Jacobi on the dense form
// (the tridiagonal stays small: k x k with k = iteration count).
std::vector<double> tridiag_eigenvalues(const std::vector<double>& alpha,
                                        const std::vector<double>& beta) {
  int k = static_cast<int>(alpha.size());
  Matrix t(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < k) {
      t(i, i + 1) = beta[i];
      t(i + 1, i) = beta[i];
    }
  }
  return jacobi_eigenvalues(std::move(t));
}

}  // namespace

ExtremeEigs lanczos_extreme_eigenvalues(const MatVec& apply, int n,
                                        const std::vector<std::vector<double>>& deflate,
                                        int max_iter, double tol) {
  if (n <= 0) throw Error("lanczos: empty operator");
  max_iter = std::min(max_iter, n);

  auto project_out = [&](std::vector<double>& v) {
    for (const auto& d : deflate) axpy(-dot(d, v), d, v);
  };

  // deterministic start vector
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::cos(1.0 + i);
  project_out(v);
  double nrm = std::sqrt(dot(v, v));
  if (nrm < 1e-14) {
    for (int i = 0; i < n; ++i) v[i] = std::sin(2.0 + 3.0 * i);
    project_out(v);
    nrm = std::sqrt(dot(v, v));
    if (nrm < 1e-14) return {0.0, 0.0};  // deflated space is everything
  }
  for (double& x : v) x /= nrm;

  std::vector<std::vector<double>> basis;
  basis.push_back(v);
  std::vector<double> alpha, beta;
  std::vector<double> w(n);
  ExtremeEigs prev{1e300, -1e300};

  for (int it = 0; it < max_iter; ++it) {
    apply(basis.back().data(), w.data());
    project_out(w);
    double a = dot(basis.back(), w);
    alpha.push_back(a);
    axpy(-a, basis.back(), w);
    if (basis.size() >= 2) axpy(-beta.back(), basis[basis.size() - 2], w);
    // full reorthogonalization (twice for stability)
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) axpy(-dot(b, w), b, w);
    double bnorm = std::sqrt(dot(w, w));

    if ((it + 1) % 10 == 0 || bnorm < 1e-14 || it + 1 == max_iter) {
      auto eig = tridiag_eigenvalues(alpha, beta);
      ExtremeEigs cur{eig.front(), eig.back()};
      if ((std::abs(cur.min - prev.min) <= tol * (1.0 + std::abs(cur.min)) &&
           std::abs(cur.max - prev.max) <= tol * (1.0 + std::abs(cur.max))) ||
          bnorm < 1e-14 || it + 1 == max_iter)
        return cur;
      prev = cur;
    }
    beta.push_back(bnorm);
    for (double& x : w) x /= bnorm;
    basis.push_back(w);
  }
  auto eig = tridiag_eigenvalues(alpha, beta);
  return {eig.front(), eig.back()};
}

}  // namespace rcgap

#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace smm {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  /// Duplicate entries are summed; explicit zeros are kept (stable pattern).
  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);
  static SparseMatrix identity(int n);
  static SparseMatrix from_eigen(const Eigen::SparseMatrix<double>& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }
  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Entry (r,c), zero when not stored.
  double at(int r, int c) const;
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;
  SparseMatrix transpose() const;
  void scale_row(int r, double s);
  double max_abs() const;
  /// max |A - A^T| over all entries.
  double asymmetry() const;

  Eigen::SparseMatrix<double> to_eigen() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Preconditioner contract: setup once per matrix, then apply z = M^{-1} r.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual void setup(const SparseMatrix& a) = 0;
  virtual void apply(std::span<const double> r, std::span<double> z) const = 0;
  virtual std::string name() const = 0;
};

class IdentityPreconditioner : public Preconditioner {
 public:
  void setup(const SparseMatrix&) override {}
  void apply(std::span<const double> r, std::span<double> z) const override;
  std::string name() const override { return "none"; }
};

class JacobiPreconditioner : public Preconditioner {
 public:
  void setup(const SparseMatrix& a) override;
  void apply(std::span<const double> r, std::span<double> z) const override;
  std::string name() const override { return "jacobi"; }

 private:
  std::vector<double> inv_diag_;
};

/// One forward and one backward Gauss-Seidel sweep. Keeps a reference to the
/// matrix passed to setup().
class SgsPreconditioner : public Preconditioner {
 public:
  void setup(const SparseMatrix& a) override;
  void apply(std::span<const double> r, std::span<double> z) const override;
  std::string name() const override { return "sgs"; }

 private:
  const SparseMatrix* a_ = nullptr;
  std::vector<double> diag_;
};

/// Incomplete Cholesky with threshold fill (Eigen).
class IncompleteCholeskyPreconditioner : public Preconditioner {
 public:
  IncompleteCholeskyPreconditioner();
  ~IncompleteCholeskyPreconditioner() override;
  void setup(const SparseMatrix& a) override;
  void apply(std::span<const double> r, std::span<double> z) const override;
  std::string name() const override { return "ichol"; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Complete sparse Cholesky factorization used as a preconditioner; CG then
/// converges in one or two iterations. Useful when the mesh is small enough.
class CholeskyPreconditioner : public Preconditioner {
 public:
  CholeskyPreconditioner();
  ~CholeskyPreconditioner() override;
  void setup(const SparseMatrix& a) override;
  void apply(std::span<const double> r, std::span<double> z) const override;
  std::string name() const override { return "cholesky"; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Factory for "none", "jacobi", "sgs", "ichol", "cholesky".
std::unique_ptr<Preconditioner> make_preconditioner(const std::string& name);

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;  // final ||b - Ax|| / ||b||
};

class CgNotConverged : public std::runtime_error {
 public:
  CgNotConverged(std::vector<double> best, double residual, int iterations);
  std::vector<double> best;
  double residual;
  int iterations;
};

/// Preconditioned conjugate gradients for SPD A. Stops when ||b - Ax|| <= tol ||b||.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const Preconditioner& m,
                  double tol, std::span<const double> x0 = {}, int max_iters = 10000);

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, int pivot) : std::runtime_error(what), pivot(pivot) {}
  int pivot;
};

/// Sparse direct solver (Eigen supernodal-free SparseLU with COLAMD ordering),
/// factor once and solve many right-hand sides with iterative refinement.
class SparseLu {
 public:
  SparseLu();
  explicit SparseLu(const SparseMatrix& a);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;

  void factorize(const SparseMatrix& a);
  /// Solves to ||b - Ax|| <= 1e-10 ||b|| using up to a few refinement steps.
  std::vector<double> solve(std::span<const double> b) const;
  bool factorized() const { return impl_ != nullptr; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SparseMatrix a_;
};

std::vector<double> lu_solve(const SparseMatrix& a, std::span<const double> b);

using Block8 = Eigen::Matrix<double, 8, 8>;

class SingularBlockError : public std::runtime_error {
 public:
  SingularBlockError(const std::string& what, int block) : std::runtime_error(what), block(block) {}
  int block;
};

/// Inverses of the 8x8 diagonal blocks of an element-blocked matrix. Throws if
/// any entry couples two blocks or a block is singular.
std::vector<Block8> block_diag_invert(const SparseMatrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace smm

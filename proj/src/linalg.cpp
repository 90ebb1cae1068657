#include "smm/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace smm {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
  for (const auto& t : entries)
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::out_of_range("triplet index outside matrix");
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const int r = entries[k].row, c = entries[k].col;
    double v = 0.0;
    for (; k < entries.size() && entries[k].row == r && entries[k].col == c; ++k) v += entries[k].value;
    m.col_idx_.push_back(c);
    m.values_.push_back(v);
    ++m.row_ptr_[r + 1];
  }
  for (int r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

SparseMatrix SparseMatrix::from_eigen(const Eigen::SparseMatrix<double>& m) {
  const Eigen::SparseMatrix<double, Eigen::RowMajor> r(m);
  SparseMatrix out(static_cast<int>(r.rows()), static_cast<int>(r.cols()));
  for (int i = 0; i < r.outerSize(); ++i) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(r, i); it; ++it) {
      out.col_idx_.push_back(static_cast<int>(it.col()));
      out.values_.push_back(it.value());
    }
    out.row_ptr_[i + 1] = static_cast<int>(out.values_.size());
  }
  return out;
}

double SparseMatrix::at(int r, int c) const {
  const auto first = col_idx_.begin() + row_ptr_[r], last = col_idx_.begin() + row_ptr_[r + 1];
  const auto it = std::lower_bound(first, last, c);
  return (it != last && *it == c) ? values_[it - col_idx_.begin()] : 0.0;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[r] = s;
  }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (int c : col_idx_) ++t.row_ptr_[c + 1];
  for (int r = 0; r < cols_; ++r) t.row_ptr_[r + 1] += t.row_ptr_[r];
  t.col_idx_.resize(values_.size());
  t.values_.resize(values_.size());
  std::vector<int> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int dst = next[col_idx_[k]]++;
      t.col_idx_[dst] = r;
      t.values_[dst] = values_[k];
    }
  return t;
}

void SparseMatrix::scale_row(int r, double s) {
  for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) values_[k] *= s;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::asymmetry() const {
  double m = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      m = std::max(m, std::abs(values_[k] - at(col_idx_[k], r)));
  return m;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size());
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) t.emplace_back(r, col_idx_[k], values_[k]);
  Eigen::SparseMatrix<double> m(rows_, cols_);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void IdentityPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  std::copy(r.begin(), r.end(), z.begin());
}

void JacobiPreconditioner::setup(const SparseMatrix& a) {
  inv_diag_.resize(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    const double d = a.at(i, i);
    inv_diag_[i] = d != 0.0 ? 1.0 / d : 1.0;
  }
}

void JacobiPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  if (r.size() != inv_diag_.size()) throw std::logic_error("jacobi preconditioner: setup() not called for this size");
  for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv_diag_[i] * r[i];
}

void SgsPreconditioner::setup(const SparseMatrix& a) {
  a_ = &a;
  diag_.resize(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    diag_[i] = a.at(i, i);
    if (diag_[i] == 0.0) throw std::invalid_argument("sgs preconditioner: zero diagonal");
  }
}

void SgsPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const auto& rp = a_->row_ptr();
  const auto& ci = a_->col_idx();
  const auto& v = a_->values();
  const int n = a_->rows();
  std::fill(z.begin(), z.end(), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = r[i];
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      if (ci[k] != i) s -= v[k] * z[ci[k]];
    z[i] = s / diag_[i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = r[i];
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      if (ci[k] != i) s -= v[k] * z[ci[k]];
    z[i] = s / diag_[i];
  }
}

struct IncompleteCholeskyPreconditioner::Impl {
  Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>> ic;
};

IncompleteCholeskyPreconditioner::IncompleteCholeskyPreconditioner() : impl_(std::make_unique<Impl>()) {}
IncompleteCholeskyPreconditioner::~IncompleteCholeskyPreconditioner() = default;

void IncompleteCholeskyPreconditioner::setup(const SparseMatrix& a) {
  impl_->ic.compute(a.to_eigen());
  if (impl_->ic.info() != Eigen::Success)
    throw std::runtime_error("incomplete Cholesky factorization failed");
}

void IncompleteCholeskyPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  Eigen::Map<const Eigen::VectorXd> rv(r.data(), r.size());
  Eigen::Map<Eigen::VectorXd>(z.data(), z.size()) = impl_->ic.solve(rv);
}

struct CholeskyPreconditioner::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

CholeskyPreconditioner::CholeskyPreconditioner() : impl_(std::make_unique<Impl>()) {}
CholeskyPreconditioner::~CholeskyPreconditioner() = default;

void CholeskyPreconditioner::setup(const SparseMatrix& a) {
  impl_->llt.compute(a.to_eigen());
  if (impl_->llt.info() != Eigen::Success)
    throw std::runtime_error("Cholesky preconditioner: matrix is not positive definite");
}

void CholeskyPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  Eigen::Map<const Eigen::VectorXd> rv(r.data(), r.size());
  Eigen::Map<Eigen::VectorXd>(z.data(), z.size()) = impl_->llt.solve(rv);
}

std::unique_ptr<Preconditioner> make_preconditioner(const std::string& name) {
  if (name == "none") return std::make_unique<IdentityPreconditioner>();
  if (name == "jacobi") return std::make_unique<JacobiPreconditioner>();
  if (name == "sgs") return std::make_unique<SgsPreconditioner>();
  if (name == "ichol") return std::make_unique<IncompleteCholeskyPreconditioner>();
  if (name == "cholesky") return std::make_unique<CholeskyPreconditioner>();
  throw std::invalid_argument("unknown preconditioner '" + name +
                              "' (expected none, jacobi, sgs, ichol, cholesky)");
}

CgNotConverged::CgNotConverged(std::vector<double> best, double residual, int iterations)
    : std::runtime_error("CG did not converge: relative residual " + std::to_string(residual) +
                         " after " + std::to_string(iterations) + " iterations"),
      best(std::move(best)),
      residual(residual),
      iterations(iterations) {}

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, const Preconditioner& m,
                  double tol, std::span<const double> x0, int max_iters) {
  const std::size_t n = b.size();
  CgResult res;
  res.x.assign(n, 0.0);
  if (!x0.empty()) std::copy(x0.begin(), x0.end(), res.x.begin());

  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(res.x.begin(), res.x.end(), 0.0);
    return res;
  }
  std::vector<double> r(n), z(n), p(n), ap(n);
  a.multiply(res.x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rnorm = norm2(r);
  res.residual = rnorm / bnorm;
  if (res.residual <= tol) return res;

  m.apply(r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iters; ++it) {
    a.multiply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw CgNotConverged(res.x, res.residual, it - 1);
    const double step = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      res.x[i] += step * p[i];
      r[i] -= step * ap[i];
    }
    res.iterations = it;
    res.residual = norm2(r) / bnorm;
    if (res.residual <= tol) return res;
    m.apply(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw CgNotConverged(res.x, res.residual, max_iters);
}

struct SparseLu::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

SparseLu::SparseLu() = default;
SparseLu::SparseLu(const SparseMatrix& a) { factorize(a); }
SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

void SparseLu::factorize(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("lu: matrix is not square");
  auto impl = std::make_unique<Impl>();
  const auto m = a.to_eigen();
  impl->lu.analyzePattern(m);
  impl->lu.factorize(m);
  if (impl->lu.info() != Eigen::Success) {
    // Eigen reports "THE MATRIX IS STRUCTURALLY SINGULAR ... COLUMN k" style messages
    const std::string msg = impl->lu.lastErrorMessage();
    int pivot = -1;
    const auto pos = msg.find_last_of(' ');
    if (pos != std::string::npos) {
      try {
        pivot = std::stoi(msg.substr(pos + 1));
      } catch (...) {
      }
    }
    throw SingularMatrixError("lu: singular matrix (" + msg + ")", pivot);
  }
  impl_ = std::move(impl);
  a_ = a;
}

std::vector<double> SparseLu::solve(std::span<const double> b) const {
  if (!impl_) throw std::logic_error("lu: solve before factorize");
  const Eigen::Map<const Eigen::VectorXd> bv(b.data(), b.size());
  Eigen::VectorXd x = impl_->lu.solve(bv);
  const double bnorm = bv.norm();
  std::vector<double> xs(x.data(), x.data() + x.size()), r(b.size());
  for (int step = 0; step < 3 && bnorm > 0.0; ++step) {
    a_.multiply(xs, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    if (norm2(r) <= 1e-14 * bnorm) break;
    const Eigen::VectorXd dx = impl_->lu.solve(Eigen::Map<const Eigen::VectorXd>(r.data(), r.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] += dx[i];
  }
  return xs;
}

std::vector<double> lu_solve(const SparseMatrix& a, std::span<const double> b) {
  SparseLu lu(a);
  auto x = lu.solve(b);
  std::vector<double> r(b.size());
  a.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const double bnorm = norm2(b);
  if (bnorm > 0.0 && norm2(r) > 1e-10 * bnorm)
    throw SingularMatrixError("lu: residual " + std::to_string(norm2(r) / bnorm) +
                                  " exceeds 1e-10 after refinement",
                              -1);
  return x;
}

std::vector<Block8> block_diag_invert(const SparseMatrix& m) {
  if (m.rows() != m.cols() || m.rows() % 8 != 0)
    throw std::invalid_argument("block_diag_invert: dimension must be a multiple of 8");
  const int nb = m.rows() / 8;
  std::vector<Block8> inv(nb);
  const auto& rp = m.row_ptr();
  const auto& ci = m.col_idx();
  const auto& v = m.values();
  for (int blk = 0; blk < nb; ++blk) {
    Block8 a = Block8::Zero();
    for (int i = 0; i < 8; ++i) {
      const int r = 8 * blk + i;
      for (int k = rp[r]; k < rp[r + 1]; ++k) {
        const int c = ci[k] - 8 * blk;
        if (c < 0 || c >= 8) {
          if (v[k] != 0.0)
            throw std::invalid_argument("block_diag_invert: entry couples blocks " +
                                        std::to_string(blk) + " and " + std::to_string(ci[k] / 8));
          continue;
        }
        a(i, c) = v[k];
      }
    }
    Eigen::FullPivLU<Block8> lu(a);
    if (!lu.isInvertible())
      throw SingularBlockError("block_diag_invert: singular block " + std::to_string(blk), blk);
    inv[blk] = lu.inverse();
  }
  return inv;
}

}  // namespace smm

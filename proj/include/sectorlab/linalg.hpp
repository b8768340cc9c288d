// Dense complex linear algebra: LU solves, Hermitian eigendecomposition
// (cyclic Jacobi), weighted l^p vector norms and p->p operator norms.
#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sectorlab/errors.hpp"

namespace sectorlab {

using cplx = std::complex<double>;
using cvector = std::vector<cplx>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cplx(0.0)) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix diagonal(std::span<const cplx> d);
  // Symmetric tridiagonal with constant bands (off, diag, off).
  static ComplexMatrix tridiagonal(std::size_t n, double off, double diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  const std::vector<cplx>& entries() const { return a_; }
  std::vector<cplx>& entries() { return a_; }

  ComplexMatrix adjoint() const;
  double frobenius_norm() const;
  double max_abs() const;
  // ||A - A^H||_F relative to ||A||_F (0 for the zero matrix).
  double hermitian_defect() const;
  bool all_finite() const;

  cvector apply(std::span<const cplx> x) const;

  ComplexMatrix& operator+=(const ComplexMatrix& b);
  ComplexMatrix& operator-=(const ComplexMatrix& b);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Finite-dimensional weighted l^p model space. p = infinity is the plain
// sup-norm (weights ignored there).
struct ModelSpace {
  double p = 2.0;
  std::size_t dim = 0;
  std::vector<double> weights;  // empty means all ones

  static constexpr double inf = std::numeric_limits<double>::infinity();

  ModelSpace() = default;
  ModelSpace(double p_, std::size_t dim_) : p(p_), dim(dim_) {}
  ModelSpace(double p_, std::size_t dim_, std::vector<double> w)
      : p(p_), dim(dim_), weights(std::move(w)) {}

  bool is_hilbert() const { return p == 2.0; }
  double weight(std::size_t j) const { return weights.empty() ? 1.0 : weights[j]; }
  void validate() const;
};

struct EigDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary, columns match eigenvalues
};

// LU factorization with partial pivoting, reusable for many right-hand sides.
class LuFactorization {
 public:
  explicit LuFactorization(const ComplexMatrix& a);
  cvector solve(std::span<const cplx> b) const;
  ComplexMatrix solve(const ComplexMatrix& b) const;

 private:
  std::size_t n_ = 0;
  ComplexMatrix lu_;
  std::vector<std::size_t> perm_;
};

// Solves A x = b; one step of iterative refinement keeps the residual near
// roundoff. Throws SingularMatrixError below the relative pivot threshold.
cvector solve(const ComplexMatrix& a, std::span<const cplx> b);
ComplexMatrix solve_matrix(const ComplexMatrix& a, const ComplexMatrix& b);

// Cyclic Jacobi for Hermitian matrices. Eigenvalues ascending.
EigDecomposition hermitian_eig(const ComplexMatrix& a);

double pnorm(std::span<const cplx> x, const ModelSpace& space);

struct OperatorNormEstimate {
  double value = 0.0;
  bool exact = false;
};

// p -> p operator norm on the given space. Exact for p in {1, 2, inf};
// otherwise a certified lower bound from a dual-norm ascent iteration
// (50 restarts by default).
OperatorNormEstimate operator_pnorm(const ComplexMatrix& t, const ModelSpace& space,
                                    int restarts = 50, std::uint64_t seed = 1);

// Ascent path regardless of p (needs 1 < p < inf); consistency oracle for
// the closed-form branches.
OperatorNormEstimate operator_pnorm_lower_bound(const ComplexMatrix& t, const ModelSpace& space,
                                                int restarts = 50, std::uint64_t seed = 1);

// Largest singular value (operator 2-norm on the unweighted l^2 space).
double spectral_norm(const ComplexMatrix& t);

namespace vec {
cvector zeros(std::size_t n);
cvector basis(std::size_t n, std::size_t j);
double norm2(std::span<const cplx> x);
cplx dot(std::span<const cplx> x, std::span<const cplx> y);  // conj(x).y
cvector axpy(cplx a, std::span<const cplx> x, std::span<const cplx> y);
}  // namespace vec

}  // namespace sectorlab

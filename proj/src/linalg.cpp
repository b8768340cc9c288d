#include "sectorlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sectorlab/rng.hpp"

namespace sectorlab {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::tridiagonal(std::size_t n, double off, double diag) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = diag;
    if (i + 1 < n) {
      m(i, i + 1) = off;
      m(i + 1, i) = off;
    }
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double s = 0.0;
  for (const cplx& z : a_) s = std::max(s, std::abs(z));
  return s;
}

double ComplexMatrix::hermitian_defect() const {
  if (!square()) return 1.0;
  double num = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      num += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
  const double den = frobenius_norm();
  return den == 0.0 ? 0.0 : std::sqrt(num) / den;
}

bool ComplexMatrix::all_finite() const {
  for (const cplx& z : a_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

cvector ComplexMatrix::apply(std::span<const cplx> x) const {
  if (x.size() != cols_) throw DimensionMismatchError("matrix-vector size mismatch");
  cvector y(rows_, cplx(0.0));
  for (std::size_t i = 0; i < rows_; ++i) {
    cplx acc = 0.0;
    const cplx* row = a_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& b) {
  if (rows_ != b.rows_ || cols_ != b.cols_)
    throw DimensionMismatchError("matrix addition size mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += b.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& b) {
  if (rows_ != b.rows_ || cols_ != b.cols_)
    throw DimensionMismatchError("matrix subtraction size mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= b.a_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& z : a_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatchError("matrix product size mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

void ModelSpace::validate() const {
  if (p < 1.0) throw InvalidSpecError("model space exponent must satisfy p >= 1");
  if (dim == 0) throw InvalidSpecError("model space dimension must be positive");
  if (!weights.empty()) {
    if (weights.size() != dim)
      throw DimensionMismatchError("weight vector does not match space dimension");
    for (double w : weights)
      if (!(w > 0.0)) throw InvalidSpecError("model space weights must be positive");
  }
}

namespace vec {

cvector zeros(std::size_t n) { return cvector(n, cplx(0.0)); }

cvector basis(std::size_t n, std::size_t j) {
  cvector e(n, cplx(0.0));
  e[j] = 1.0;
  return e;
}

double norm2(std::span<const cplx> x) {
  double s = 0.0;
  for (const cplx& z : x) s += std::norm(z);
  return std::sqrt(s);
}

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

cvector axpy(cplx a, std::span<const cplx> x, std::span<const cplx> y) {
  cvector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + y[i];
  return r;
}

}  // namespace vec

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

LuFactorization::LuFactorization(const ComplexMatrix& a) {
  if (!a.square()) throw DimensionMismatchError("solve requires a square matrix");
  n_ = a.rows();
  lu_ = a;
  perm_.resize(n_);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  const double pivot_floor = 1e-13 * a.max_abs();

  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= pivot_floor)
      throw SingularMatrixError("pivot below threshold at column " + std::to_string(k));
    if (piv != k) {
      for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(piv, j));
      std::swap(perm_[k], perm_[piv]);
    }
    const cplx inv_piv = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n_; ++i) {
      const cplx m = lu_(i, k) * inv_piv;
      lu_(i, k) = m;
      if (m == cplx(0.0)) continue;
      for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= m * lu_(k, j);
    }
  }
}

cvector LuFactorization::solve(std::span<const cplx> b) const {
  if (b.size() != n_) throw DimensionMismatchError("rhs length does not match matrix");
  cvector x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 1; i < n_; ++i) {
    cplx acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    cplx acc = x[ii];
    for (std::size_t j = ii + 1; j < n_; ++j) acc -= lu_(ii, j) * x[j];
    x[ii] = acc / lu_(ii, ii);
  }
  return x;
}

ComplexMatrix LuFactorization::solve(const ComplexMatrix& b) const {
  if (b.rows() != n_) throw DimensionMismatchError("rhs rows do not match matrix");
  ComplexMatrix x(n_, b.cols());
  cvector col(n_);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < n_; ++i) col[i] = b(i, j);
    cvector xc = solve(col);
    for (std::size_t i = 0; i < n_; ++i) x(i, j) = xc[i];
  }
  return x;
}

cvector solve(const ComplexMatrix& a, std::span<const cplx> b) {
  LuFactorization lu(a);
  cvector x = lu.solve(b);
  // one refinement pass
  cvector r(b.size());
  cvector ax = a.apply(x);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - ax[i];
  cvector dx = lu.solve(r);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  return x;
}

ComplexMatrix solve_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
  LuFactorization lu(a);
  ComplexMatrix x = lu.solve(b);
  ComplexMatrix r = b - a * x;
  x += lu.solve(r);
  return x;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition, cyclic Jacobi with complex rotations
// ---------------------------------------------------------------------------

namespace {

double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigDecomposition hermitian_eig(const ComplexMatrix& input) {
  if (!input.square()) throw DimensionMismatchError("hermitian_eig requires a square matrix");
  if (input.hermitian_defect() > 1e-12)
    throw NotHermitianError("matrix asymmetry exceeds the 1e-12 relative threshold");

  const std::size_t n = input.rows();
  ComplexMatrix a = input;
  // enforce exact Hermitian symmetry before iterating
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = m;
      a(j, i) = std::conj(m);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double fro = std::max(a.frobenius_norm(), 1e-300);
  const double tol = 1e-15 * fro;

  for (int sweep = 0; sweep < 60 && offdiag_norm(a) > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double abs_apq = std::abs(apq);
        if (abs_apq < 1e-300) continue;
        const cplx phase = apq / abs_apq;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * abs_apq);
        const double sgn = tau >= 0.0 ? 1.0 : -1.0;
        const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        const cplx sp = sn * phase;             // sn e^{i phi}
        const cplx spc = sn * std::conj(phase); // sn e^{-i phi}

        for (std::size_t i = 0; i < n; ++i) {  // A <- A U
          const cplx aip = a(i, p), aiq = a(i, q);
          a(i, p) = cs * aip - spc * aiq;
          a(i, q) = sp * aip + cs * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {  // A <- U^H A
          const cplx apj = a(p, j), aqj = a(q, j);
          a(p, j) = cs * apj - sp * aqj;
          a(q, j) = spc * apj + cs * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {  // V <- V U
          const cplx vip = v(i, p), viq = v(i, q);
          v(i, p) = cs * vip - spc * viq;
          v(i, q) = sp * vip + cs * viq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigDecomposition d;
  d.eigenvalues.resize(n);
  d.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    d.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) d.eigenvectors(i, k) = v(i, order[k]);
  }
  return d;
}

// ---------------------------------------------------------------------------
// vector and operator p-norms
// ---------------------------------------------------------------------------

double pnorm(std::span<const cplx> x, const ModelSpace& space) {
  space.validate();
  if (x.size() != space.dim) throw DimensionMismatchError("vector length does not match space");
  if (space.p == ModelSpace::inf) {
    double m = 0.0;
    for (const cplx& z : x) m = std::max(m, std::abs(z));
    return m;
  }
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j)
    s += space.weight(j) * std::pow(std::abs(x[j]), space.p);
  return std::pow(s, 1.0 / space.p);
}

double spectral_norm(const ComplexMatrix& t) {
  const ComplexMatrix g = t.adjoint() * t;
  EigDecomposition d = hermitian_eig(g);
  const double top = d.eigenvalues.empty() ? 0.0 : d.eigenvalues.back();
  return std::sqrt(std::max(0.0, top));
}

namespace {

// x / ||x||_p after replacing each entry by |x|^{p-1} sgn(x); the p'-dual
// direction used by the ascent iteration.
cvector dual_direction(const cvector& y, double p) {
  const double q = p / (p - 1.0);
  cvector d(y.size(), cplx(0.0));
  double np = 0.0;
  for (const cplx& z : y) np += std::pow(std::abs(z), p);
  np = std::pow(np, 1.0 / p);
  if (np == 0.0) return d;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double az = std::abs(y[j]);
    if (az == 0.0) continue;
    d[j] = std::pow(az / np, p - 1.0) * (y[j] / az);
  }
  // normalize in the dual norm
  double nq = 0.0;
  for (const cplx& z : d) nq += std::pow(std::abs(z), q);
  nq = std::pow(nq, 1.0 / q);
  if (nq > 0.0)
    for (cplx& z : d) z /= nq;
  return d;
}

double plain_pnorm(const cvector& x, double p) {
  double s = 0.0;
  for (const cplx& z : x) s += std::pow(std::abs(z), p);
  return std::pow(s, 1.0 / p);
}

// Higham-style fixed point ascent for ||T||_{p->p}; monotone, so the best
// iterate is a valid lower bound.
double pnorm_ascent(const ComplexMatrix& t, double p, const cvector& start, int max_iter) {
  const double q = p / (p - 1.0);
  cvector x = start;
  const double nx = plain_pnorm(x, p);
  if (nx == 0.0) return 0.0;
  for (cplx& z : x) z /= nx;
  double best = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    cvector y = t.apply(x);
    const double ny = plain_pnorm(y, p);
    best = std::max(best, ny);
    if (ny == 0.0) break;
    cvector z = t.adjoint().apply(dual_direction(y, p));
    const double nz = plain_pnorm(z, q);
    const double inner = std::real(vec::dot(z, x));
    if (nz <= inner * (1.0 + 1e-12) + 1e-15) break;  // stationary point
    x = dual_direction(z, q);
  }
  return best;
}

}  // namespace

namespace {

// l^p_w is isometric to plain l^p via x -> W^{1/p} x
ComplexMatrix reduce_weights(const ComplexMatrix& t, const ModelSpace& space) {
  const std::size_t n = space.dim;
  const double p = space.p;
  ComplexMatrix tw = t;
  if (!space.weights.empty() && p != ModelSpace::inf) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ri = std::pow(space.weights[i], 1.0 / p);
      for (std::size_t j = 0; j < n; ++j)
        tw(i, j) = t(i, j) * ri / std::pow(space.weights[j], 1.0 / p);
    }
  }
  return tw;
}

}  // namespace

OperatorNormEstimate operator_pnorm_lower_bound(const ComplexMatrix& t, const ModelSpace& space,
                                                int restarts, std::uint64_t seed) {
  space.validate();
  if (!t.square() || t.rows() != space.dim)
    throw DimensionMismatchError("operator dimension does not match space");
  const double p = space.p;
  if (!(p > 1.0) || p == ModelSpace::inf)
    throw InvalidSpecError("ascent path needs 1 < p < inf");
  const ComplexMatrix tw = reduce_weights(t, space);
  const std::size_t n = space.dim;
  CounterRng rng(seed, 0x70);
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    cvector x0(n);
    if (r < static_cast<int>(n)) {
      x0 = vec::basis(n, static_cast<std::size_t>(r));
    } else {
      for (cplx& z : x0) z = rng.next_complex_normal();
    }
    best = std::max(best, pnorm_ascent(tw, p, x0, 120));
  }
  return {best, false};
}

OperatorNormEstimate operator_pnorm(const ComplexMatrix& t, const ModelSpace& space,
                                    int restarts, std::uint64_t seed) {
  space.validate();
  if (!t.square() || t.rows() != space.dim)
    throw DimensionMismatchError("operator dimension does not match space");
  const std::size_t n = space.dim;
  const double p = space.p;
  const ComplexMatrix tw = reduce_weights(t, space);

  if (p == 1.0) {
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += std::abs(tw(i, j));
      best = std::max(best, s);
    }
    return {best, true};
  }
  if (p == ModelSpace::inf) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += std::abs(tw(i, j));
      best = std::max(best, s);
    }
    return {best, true};
  }
  if (p == 2.0) return {spectral_norm(tw), true};
  return operator_pnorm_lower_bound(t, space, restarts, seed);
}

}  // namespace sectorlab

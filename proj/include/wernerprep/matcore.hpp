#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "wernerprep/error.hpp"

namespace wernerprep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double default_tol = 1e-8;
inline constexpr Complex I_unit{0.0, 1.0};

inline void require_finite(const ComplexMatrix& m) {
  if (!m.allFinite()) fail(ErrorKind::domain, "matrix has non-finite entries");
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols())
    fail(ErrorKind::shape, std::string(what) + ": matrix is not square");
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

// Tr(a^dagger b)
inline Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    fail(ErrorKind::shape, "hs_inner: operands must share one square shape");
  return (a.conjugate().cwiseProduct(b)).sum();
}

// Column stacking: column j of x occupies entries [j*n, (j+1)*n).
// With this convention vec(A X B) = (B^T kron A) vec(X).
inline ComplexVector vectorize(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

inline ComplexMatrix devectorize(const ComplexVector& v) {
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) fail(ErrorKind::shape, "devectorize: length is not a square");
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

inline ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

inline double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - identity(u.cols())).norm();
}

// Unit norm, first entry above the noise floor rotated to the positive real axis.
inline void fix_phase(Eigen::Ref<ComplexVector> v) {
  const double nrm = v.norm();
  if (nrm == 0.0) return;
  v /= nrm;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

struct EigenDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;  // one unit column per eigenvalue
};

inline EigenDecomposition eig(const ComplexMatrix& m) {
  require_square(m, "eig");
  require_finite(m);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
  if (solver.info() != Eigen::Success) fail(ErrorKind::solver, "eig: eigensolver did not converge");
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Index j = 0; j < out.eigenvectors.cols(); ++j) fix_phase(out.eigenvectors.col(j));
  return out;
}

inline ComplexVector eigenvalues(const ComplexMatrix& m) {
  require_square(m, "eigenvalues");
  require_finite(m);
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) fail(ErrorKind::solver, "eigenvalues: eigensolver did not converge");
  return solver.eigenvalues();
}

inline Eigen::VectorXd singular_values(const ComplexMatrix& m) {
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

inline Index numerical_rank(const ComplexMatrix& m, double threshold) {
  const Eigen::VectorXd s = singular_values(m);
  return static_cast<Index>((s.array() > threshold).count());
}

// Orthonormal columns spanning {v : m v = 0}, singular values <= tol counted as zero.
inline ComplexMatrix null_space(const ComplexMatrix& m, double tol = default_tol) {
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<Index> keep;
  for (Index j = 0; j < m.cols(); ++j)
    if (j >= s.size() || s(j) <= tol) keep.push_back(j);
  ComplexMatrix out(m.cols(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Index>(k)) = svd.matrixV().col(keep[k]);
  return out;
}

// Orthonormal basis of the column span.
inline ComplexMatrix orthonormal_span(const ComplexMatrix& m, double tol = default_tol) {
  if (m.cols() == 0) return ComplexMatrix(m.rows(), 0);
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
  Index r = 0;
  while (r < s.size() && s(r) > tol * scale) ++r;
  return svd.matrixU().leftCols(r);
}

// Principal angles between the spans of two matrices with orthonormal columns.
// Computed from sines so tiny angles keep their precision. Requires b.cols() <= a.cols().
inline std::vector<double> principal_angles(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) fail(ErrorKind::shape, "principal_angles: ambient dimensions differ");
  if (b.cols() > a.cols()) return principal_angles(b, a);
  if (b.cols() == 0) return {};
  const ComplexMatrix residual = b - a * (a.adjoint() * b);
  const Eigen::VectorXd s = singular_values(residual);
  std::vector<double> out;
  for (Index i = 0; i < s.size(); ++i) out.push_back(std::asin(std::min(1.0, s(i))));
  for (Index i = s.size(); i < b.cols(); ++i) out.push_back(0.0);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace wernerprep

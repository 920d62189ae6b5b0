#pragma once

#include <random>
#include <vector>

#include "wernerprep/matcore.hpp"

namespace wernerprep {

using Rng = std::mt19937_64;

struct WernerKit {
  int d = 0;
  ComplexMatrix flip;
  ComplexMatrix sym;
  ComplexMatrix asym;
  // diagonal states, then symmetric pairs, then antisymmetric pairs (i<j, lexicographic)
  std::vector<ComplexVector> basis;

  Index sym_rank() const { return d * (d + 1) / 2; }
  Index asym_rank() const { return d * (d - 1) / 2; }
};

inline Index pair_index(int d, int i, int j) { return static_cast<Index>(i) * d + j; }

inline WernerKit make_kit(int d) {
  if (d < 2) fail(ErrorKind::dimension, "make_kit: d must be at least 2");
  const Index n = static_cast<Index>(d) * d;
  WernerKit kit;
  kit.d = d;
  kit.flip = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) kit.flip(pair_index(d, j, i), pair_index(d, i, j)) = 1.0;
  kit.sym = (identity(n) + kit.flip) / 2.0;
  kit.asym = (identity(n) - kit.flip) / 2.0;

  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    ComplexVector v = ComplexVector::Zero(n);
    v(pair_index(d, i, i)) = 1.0;
    kit.basis.push_back(v);
  }
  for (int sign : {1, -1}) {
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        ComplexVector v = ComplexVector::Zero(n);
        v(pair_index(d, i, j)) = r;
        v(pair_index(d, j, i)) = sign * r;
        kit.basis.push_back(v);
      }
    }
  }
  return kit;
}

struct WernerState {
  int d = 0;
  double p = 0.0;
  ComplexMatrix rho;
};

inline WernerState werner_state(int d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::domain, "werner_state: p must lie in [0,1]");
  const WernerKit kit = make_kit(d);
  const double dd = d;
  WernerState s{d, p, ComplexMatrix()};
  s.rho = p * 2.0 / (dd * (dd + 1.0)) * kit.sym;
  s.rho += (1.0 - p) * 2.0 / (dd * (dd - 1.0)) * kit.asym;
  return s;
}

// Closed-form twirl of a d^2 x d^2 operator.
inline ComplexMatrix twirl(const WernerKit& kit, const ComplexMatrix& x) {
  const double dd = kit.d;
  return hs_inner(kit.sym, x) * (2.0 / (dd * (dd + 1.0))) * kit.sym
       + hs_inner(kit.asym, x) * (2.0 / (dd * (dd - 1.0))) * kit.asym;
}

// Superoperator matrix (d^4 x d^4) of the twirl in the column-stacking convention.
inline ComplexMatrix twirl_projector(int d) {
  const WernerKit kit = make_kit(d);
  const double dd = d;
  const ComplexVector s = vectorize(kit.sym);
  const ComplexVector a = vectorize(kit.asym);
  return (2.0 / (dd * (dd + 1.0))) * s * s.adjoint() + (2.0 / (dd * (dd - 1.0))) * a * a.adjoint();
}

// QR of a complex Ginibre matrix, with R's diagonal phases moved into Q.
inline ComplexMatrix haar_sample(int d, Rng& rng) {
  if (d < 1) fail(ErrorKind::dimension, "haar_sample: d must be positive");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix z(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) z(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

inline ComplexMatrix mc_twirl(const ComplexMatrix& x, long n_samples, Rng& rng) {
  require_square(x, "mc_twirl");
  const auto d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(x.rows()))));
  if (static_cast<Index>(d) * d != x.rows()) fail(ErrorKind::shape, "mc_twirl: operator is not bipartite d x d");
  if (n_samples < 1) fail(ErrorKind::domain, "mc_twirl: need at least one sample");
  ComplexMatrix acc = ComplexMatrix::Zero(x.rows(), x.cols());
  for (long k = 0; k < n_samples; ++k) {
    const ComplexMatrix u = haar_sample(d, rng);
    const ComplexMatrix l = kron(u, u);
    acc.noalias() += l * x * l.adjoint();
  }
  return acc / static_cast<double>(n_samples);
}

} // namespace wernerprep

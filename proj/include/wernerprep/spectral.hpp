#pragma once

#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "wernerprep/channels.hpp"
#include "wernerprep/werner.hpp"

namespace wernerprep {

enum class Tristate { no, yes, undetermined };

inline const char* to_string(Tristate t) {
  switch (t) {
    case Tristate::no: return "false";
    case Tristate::yes: return "true";
    case Tristate::undetermined: return "undetermined";
  }
  return "undetermined";
}

inline constexpr double cluster_tol = 1e-7;

// A superoperator restricted to an invariant subspace: M * embedding = embedding * matrix.
// Embedding columns are orthonormal in the vectorized operator space.
struct SpectralBlock {
  ComplexMatrix matrix;
  ComplexMatrix embedding;
  bool hermitian_closed = false;  // matrix acts on vec(Y), Y square, and maps Y^dagger to T(Y)^dagger
  int conjugate_of = -1;          // index of a block whose spectrum is the complex conjugate of this one
};

namespace detail {

// Orthonormal bases (columns) of the symmetric and antisymmetric subspaces of C^d kron C^d.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> swap_eigenbases(Index d) {
  Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(d * d, d * (d + 1) / 2), asym = Eigen::MatrixXd::Zero(d * d, d * (d - 1) / 2);
  const double r = 1.0 / std::sqrt(2.0);
  Index s = 0, a = 0;
  for (Index i = 0; i < d; ++i) sym(i * d + i, s++) = 1.0;
  for (Index i = 0; i < d; ++i)
    for (Index j = i + 1; j < d; ++j) {
      sym(i * d + j, s) = r;
      sym(j * d + i, s++) = r;
      asym(i * d + j, a) = r;
      asym(j * d + i, a++) = -r;
    }
  return {sym, asym};
}

// Lifted Kraus operators L = W kron W commute with the swap, so X -> P_a X P_b
// (a, b in {sym, asym}) are invariant. With X = Q_a Y Q_b^dagger the restriction
// is Y -> sum_k p_k L_a Y L_b^dagger, L_a = Q_a^dagger L Q_a.
inline std::vector<SpectralBlock> swap_blocks(const RandomUnitaryOperation& t) {
  const Index d = t.factors().front().rows();
  const auto [sym, asym] = swap_eigenbases(d);
  const std::vector<double> weights = t.weights();
  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> parts;  // (L_sym, L_asym) per Kraus
  for (const auto& w : t.factors()) {
    const ComplexMatrix l = kron(w, w);
    parts.emplace_back(sym.transpose() * l * sym, asym.transpose() * l * asym);
  }
  std::vector<SpectralBlock> blocks;
  for (int a : {0, 1})
    for (int b : {0, 1}) {
      const Eigen::MatrixXd& qa = a == 0 ? sym : asym;
      const Eigen::MatrixXd& qb = b == 0 ? sym : asym;
      SpectralBlock blk{ComplexMatrix::Zero(qa.cols() * qb.cols(), qa.cols() * qb.cols()),
                        kron(qb.cast<Complex>(), qa.cast<Complex>()), a == b, a == 1 && b == 0 ? 1 : -1};
      for (std::size_t k = 0; k < parts.size(); ++k) {
        const ComplexMatrix& la = a == 0 ? parts[k].first : parts[k].second;
        const ComplexMatrix& lb = b == 0 ? parts[k].first : parts[k].second;
        blk.matrix += weights[k] * kron(lb.conjugate(), la);
      }
      blocks.push_back(std::move(blk));
    }
  return blocks;
}

// Unitary change of basis from real coordinates over Hermitian n x n matrices to vec space.
inline ComplexMatrix hermitian_basis(Index n) {
  ComplexMatrix c = ComplexMatrix::Zero(n * n, n * n);
  const double r = 1.0 / std::sqrt(2.0);
  Index col = 0;
  for (Index k = 0; k < n; ++k) c(k * n + k, col++) = 1.0;
  for (Index j = 0; j < n; ++j)
    for (Index k = j + 1; k < n; ++k) {
      c(k * n + j, col) = r;
      c(j * n + k, col++) = r;
      c(k * n + j, col) = Complex(0.0, r);
      c(j * n + k, col++) = Complex(0.0, -r);
    }
  return c;
}

// Hermiticity-preserving maps are real in a Hermitian basis; real eigensolvers are much cheaper.
inline ComplexVector hermitian_closed_eigenvalues(const ComplexMatrix& m) {
  require_finite(m);
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(m.rows()))));
  const ComplexMatrix c = hermitian_basis(n);
  const Eigen::MatrixXd real = (c.adjoint() * m * c).real();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(real, false);
  // real Francis iterations can stall on highly symmetric inputs; the complex solver does not
  if (solver.info() != Eigen::Success) return eigenvalues(m);
  return solver.eigenvalues();
}

// Single-linkage groups of values closer than tol; groups ordered by first member.
inline std::vector<std::vector<Index>> cluster(const std::vector<Complex>& values, double tol) {
  const auto n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= tol) {
        const auto ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
  std::vector<std::vector<Index>> groups;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(static_cast<Index>(i));
  }
  return groups;
}

inline Complex mean_of(const std::vector<Complex>& values, const std::vector<Index>& group) {
  Complex s = 0.0;
  for (Index i : group) s += values[static_cast<std::size_t>(i)];
  return s / static_cast<double>(group.size());
}

// Orthonormal basis (columns, in vec space) of ker(M - lambda) for |lambda| = 1.
// lambda^* M is a contraction, so its fixed vectors are exactly the top eigenvectors
// of its Hermitian part; this avoids rank decisions on a non-normal matrix.
inline ComplexMatrix peripheral_space(const std::vector<SpectralBlock>& blocks, Complex lambda, double tol) {
  std::vector<ComplexVector> cols;
  for (const auto& blk : blocks) {
    const ComplexMatrix rotated = std::conj(lambda) * blk.matrix;
    const ComplexMatrix herm = (rotated + rotated.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm);
    if (solver.info() != Eigen::Success) fail(ErrorKind::solver, "hermitian eigensolver did not converge");
    for (Index j = 0; j < herm.rows(); ++j)
      if (solver.eigenvalues()(j) >= 1.0 - tol) cols.push_back(blk.embedding * solver.eigenvectors().col(j));
  }
  ComplexMatrix out(blocks.front().embedding.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = cols[j];
  return out;
}

} // namespace detail

inline std::vector<SpectralBlock> spectral_blocks(const RandomUnitaryOperation& t) {
  if (t.is_lifted()) return detail::swap_blocks(t);
  const Superoperator s = to_superoperator(t);
  return {SpectralBlock{s.matrix, identity(s.matrix.rows()), true}};
}

struct BlockSpectrum {
  std::vector<SpectralBlock> blocks;
  std::vector<ComplexVector> eigenvalues;  // per block
  std::vector<Complex> all() const {
    std::vector<Complex> out;
    for (const auto& ev : eigenvalues)
      for (Index i = 0; i < ev.size(); ++i) out.push_back(ev(i));
    return out;
  }
};

inline BlockSpectrum block_spectrum(const RandomUnitaryOperation& t) {
  BlockSpectrum out{spectral_blocks(t), {}};
  for (const auto& blk : out.blocks) {
    if (blk.conjugate_of >= 0) out.eigenvalues.push_back(out.eigenvalues[static_cast<std::size_t>(blk.conjugate_of)].conjugate());
    else if (blk.hermitian_closed) out.eigenvalues.push_back(detail::hermitian_closed_eigenvalues(blk.matrix));
    else out.eigenvalues.push_back(eigenvalues(blk.matrix));
  }
  return out;
}

inline bool on_unit_circle(Complex z, double unit_tol) { return std::abs(z) >= 1.0 - unit_tol; }

inline std::vector<Complex> unit_circle_eigenvalues(const RandomUnitaryOperation& t, double unit_tol = default_tol) {
  std::vector<Complex> out;
  for (Complex z : block_spectrum(t).all())
    if (on_unit_circle(z, unit_tol)) out.push_back(z);
  return out;
}

struct SpectralReport {
  std::vector<Complex> eigenvalues;
  std::vector<Complex> sigma1;
  double lambda_max = 0.0;
  bool stationary = true;
  Tristate diagonalizable = Tristate::undetermined;
  Index fixed_space_dim = 0;
};

inline double lambda_max_of(const std::vector<Complex>& ev, double unit_tol) {
  double lm = 0.0;
  for (Complex z : ev)
    if (!on_unit_circle(z, unit_tol)) lm = std::max(lm, std::abs(z));
  return lm;
}

// Optimization-mode value: 1 when more than two eigenvalues (with multiplicity)
// sit on the unit circle, otherwise lambda_max.
inline double penalized_lambda_max(const RandomUnitaryOperation& t, double unit_tol = default_tol) {
  const std::vector<Complex> ev = block_spectrum(t).all();
  std::size_t unit = 0;
  for (Complex z : ev) unit += on_unit_circle(z, unit_tol) ? 1 : 0;
  if (unit > 2) return 1.0;
  return lambda_max_of(ev, unit_tol);
}

// Clustered eigenvalues are compared with the geometric multiplicity read off the
// singular values of (B - mu). Unital RUOs are Hilbert-Schmidt contractions fixing
// the identity, so the superoperator's spectral norm is 1 and the threshold is absolute.
inline Tristate diagonalizability(const BlockSpectrum& spec, double rank_tol = default_tol) {
  bool deficit = false, unsure = false;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    std::vector<Complex> ev(spec.eigenvalues[b].data(), spec.eigenvalues[b].data() + spec.eigenvalues[b].size());
    for (const auto& group : detail::cluster(ev, cluster_tol)) {
      if (group.size() < 2) continue;
      const Complex mu = detail::mean_of(ev, group);
      const ComplexMatrix& m = spec.blocks[b].matrix;
      const Eigen::VectorXd s = singular_values(m - mu * identity(m.rows()));
      Index geometric = 0;
      for (Index i = 0; i < s.size(); ++i) {
        if (s(i) <= rank_tol) ++geometric;
        if (s(i) >= rank_tol / 10.0 && s(i) <= rank_tol * 10.0) unsure = true;
      }
      if (geometric < static_cast<Index>(group.size())) deficit = true;
    }
  }
  if (deficit) return Tristate::no;
  return unsure ? Tristate::undetermined : Tristate::yes;
}

inline Index fixed_dimension(const std::vector<SpectralBlock>& blocks, double tol) {
  return detail::peripheral_space(blocks, 1.0, tol).cols();
}

inline SpectralReport analyze(const RandomUnitaryOperation& t, double unit_tol = default_tol) {
  const BlockSpectrum spec = block_spectrum(t);
  SpectralReport r;
  r.eigenvalues = spec.all();
  for (Complex z : r.eigenvalues)
    if (on_unit_circle(z, unit_tol)) {
      r.sigma1.push_back(z);
      if (std::abs(z - 1.0) > unit_tol) r.stationary = false;
    }
  r.lambda_max = lambda_max_of(r.eigenvalues, unit_tol);
  r.diagonalizable = diagonalizability(spec);
  r.fixed_space_dim = fixed_dimension(spec.blocks, unit_tol);
  return r;
}

// Orthonormal (Hilbert-Schmidt) basis of ker(T - 1).
inline std::vector<ComplexMatrix> fixed_space(const RandomUnitaryOperation& t, double tol = default_tol) {
  const ComplexMatrix basis = detail::peripheral_space(spectral_blocks(t), 1.0, tol);
  std::vector<ComplexMatrix> out;
  for (Index j = 0; j < basis.cols(); ++j) out.push_back(devectorize(basis.col(j)));
  return out;
}

struct WernerCheck {
  bool stationary = false;
  Index fixed_dim = 0;
  double sym_residual = 1.0;
  double asym_residual = 1.0;
  bool passes(double tol) const {
    return stationary && fixed_dim == 2 && sym_residual <= tol && asym_residual <= tol;
  }
};

inline WernerCheck werner_check(const RandomUnitaryOperation& t, const WernerKit& kit) {
  if (t.dim() != static_cast<Index>(kit.d) * kit.d)
    fail(ErrorKind::dimension, "werner_check: RUO does not act on d x d");
  const BlockSpectrum spec = block_spectrum(t);
  WernerCheck c;
  c.stationary = true;
  for (Complex z : spec.all())
    if (on_unit_circle(z, default_tol) && std::abs(z - 1.0) > default_tol) c.stationary = false;
  const ComplexMatrix basis = detail::peripheral_space(spec.blocks, 1.0, default_tol);
  c.fixed_dim = basis.cols();
  auto residual = [&](const ComplexMatrix& p) {
    const ComplexVector v = vectorize(p) / p.norm();
    return (v - basis * (basis.adjoint() * v)).norm();
  };
  c.sym_residual = residual(kit.sym);
  c.asym_residual = residual(kit.asym);
  return c;
}

inline bool is_werner_preparing(const RandomUnitaryOperation& t, const WernerKit& kit, double tol = 1e-7) {
  return werner_check(t, kit).passes(tol);
}

struct AsymptoticPair {
  Complex eigenvalue;
  ComplexMatrix eigenvector;
  ComplexMatrix dual;  // equals the eigenvector for random unitary operations
};

struct AsymptoticDecomposition {
  std::vector<AsymptoticPair> pairs;
};

inline AsymptoticDecomposition asymptotic_decomposition(const RandomUnitaryOperation& t, double unit_tol = default_tol) {
  const BlockSpectrum spec = block_spectrum(t);
  std::vector<Complex> unit;
  for (Complex z : spec.all())
    if (on_unit_circle(z, unit_tol)) unit.push_back(z);
  AsymptoticDecomposition out;
  for (const auto& group : detail::cluster(unit, cluster_tol)) {
    Complex lambda = detail::mean_of(unit, group);
    lambda /= std::abs(lambda);
    const ComplexMatrix basis = detail::peripheral_space(spec.blocks, lambda, unit_tol);
    for (Index j = 0; j < basis.cols(); ++j) {
      const ComplexMatrix x = devectorize(basis.col(j));
      out.pairs.push_back({lambda, x, x});
    }
  }
  return out;
}

inline ComplexMatrix x_infinity(const AsymptoticDecomposition& dec, const ComplexMatrix& x0, long n) {
  ComplexMatrix out = ComplexMatrix::Zero(x0.rows(), x0.cols());
  for (const auto& p : dec.pairs)
    out += std::pow(p.eigenvalue, static_cast<double>(n)) * hs_inner(p.dual, x0) * p.eigenvector;
  return out;
}

inline ComplexMatrix x_infinity(const RandomUnitaryOperation& t, const ComplexMatrix& x0, long n) {
  if (x0.rows() != t.dim() || x0.cols() != t.dim()) fail(ErrorKind::shape, "x_infinity: operand has the wrong shape");
  return x_infinity(asymptotic_decomposition(t), x0, n);
}

inline double attractor_residual(const RandomUnitaryOperation& t, const ComplexMatrix& x, Complex lambda) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-6) fail(ErrorKind::domain, "attractor_residual: |lambda| must be 1");
  if (x.rows() != t.dim() || x.cols() != t.dim()) fail(ErrorKind::shape, "attractor_residual: operand has the wrong shape");
  double worst = 0.0;
  for (const auto& k : t.kraus())
    worst = std::max(worst, (k.unitary * x * k.unitary.adjoint() - lambda * x).norm());
  return worst;
}

inline double bound_prefactor(int d) {
  if (d < 2) fail(ErrorKind::dimension, "bound_prefactor: d must be at least 2");
  const double dd = d;
  return dd * dd * (dd * dd * dd * dd - 2.0);
}

inline double convergence_bound(int d, double lambda_max, long n) {
  if (!(lambda_max >= 0.0 && lambda_max < 1.0)) fail(ErrorKind::domain, "convergence_bound: lambda_max must lie in [0,1)");
  return bound_prefactor(d) * std::pow(lambda_max, static_cast<double>(n));
}

inline int subsystem_dimension(const RandomUnitaryOperation& t) {
  const auto d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(t.dim()))));
  if (static_cast<Index>(d) * d != t.dim()) fail(ErrorKind::dimension, "RUO does not act on a d x d system");
  return d;
}

// ||T^n - P||_HS for n = 0..n_max, by powering the superoperator.
inline std::vector<double> distance_series(const RandomUnitaryOperation& t, long n_max) {
  if (n_max < 0) fail(ErrorKind::domain, "distance_series: negative step count");
  const int d = subsystem_dimension(t);
  const ComplexMatrix m = to_superoperator(t).matrix;
  const ComplexMatrix proj = twirl_projector(d);
  std::vector<double> out;
  ComplexMatrix power = identity(m.rows());
  for (long k = 0; k <= n_max; ++k) {
    out.push_back(std::max((power - proj).norm(), 1e-300));
    power = m * power;
  }
  return out;
}

inline double distance_to_twirl(const RandomUnitaryOperation& t, long n) {
  return distance_series(t, n).back();
}

// Number of distinct eigenvalues strictly inside the unit circle.
inline Index decaying_eigenvalue_count(const RandomUnitaryOperation& t, double unit_tol = default_tol) {
  std::vector<Complex> inside;
  for (Complex z : block_spectrum(t).all())
    if (!on_unit_circle(z, unit_tol)) inside.push_back(z);
  return static_cast<Index>(detail::cluster(inside, cluster_tol).size());
}

inline double diag_bound(const RandomUnitaryOperation& t, const ComplexMatrix& x0, long n) {
  const SpectralReport r = analyze(t);
  if (r.diagonalizable != Tristate::yes) fail(ErrorKind::not_diagonalizable, "diag_bound: superoperator is not diagonalizable");
  const double decay = std::pow(r.lambda_max, static_cast<double>(n)) * x0.norm();
  const ComplexMatrix m = to_superoperator(t).matrix;
  const double scale = (m * m.adjoint() - m.adjoint() * m).norm();
  if (scale <= 1e-10) return static_cast<double>(decaying_eigenvalue_count(t)) * decay;
  const EigenDecomposition dec = eig(m);
  const ComplexMatrix duals = dec.eigenvectors.inverse();
  double weight = 0.0;
  for (Index i = 0; i < dec.eigenvalues.size(); ++i)
    if (!on_unit_circle(dec.eigenvalues(i), default_tol)) weight += duals.row(i).norm();
  return weight * decay;
}

} // namespace wernerprep

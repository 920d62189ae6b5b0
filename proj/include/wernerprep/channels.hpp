#pragma once

#include <utility>
#include <vector>

#include "wernerprep/matcore.hpp"

namespace wernerprep {

inline constexpr double weight_tol = 1e-10;

struct KrausTerm {
  double weight = 0.0;
  ComplexMatrix unitary;
};

inline ComplexMatrix lift_otimes(const ComplexMatrix& u) {
  require_square(u, "lift_otimes");
  return kron(u, u);
}

// X -> sum_i p_i U_i X U_i^dagger. When built from single-particle factors W_i
// (U_i = W_i kron W_i) the factors are kept for structured spectral work.
class RandomUnitaryOperation {
public:
  explicit RandomUnitaryOperation(std::vector<KrausTerm> terms)
    : terms_(std::move(terms)) { validate(); }

  static RandomUnitaryOperation lifted(const std::vector<double>& weights,
                                       const std::vector<ComplexMatrix>& factors) {
    if (weights.size() != factors.size())
      fail(ErrorKind::dimension, "lifted RUO: weight and factor counts differ");
    std::vector<KrausTerm> terms;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      require_square(factors[i], "lifted RUO");
      terms.push_back({weights[i], lift_otimes(factors[i])});
    }
    RandomUnitaryOperation t(std::move(terms));
    t.factors_ = factors;
    return t;
  }

  Index dim() const { return terms_.front().unitary.rows(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<KrausTerm>& kraus() const { return terms_; }
  bool is_lifted() const { return !factors_.empty(); }
  const std::vector<ComplexMatrix>& factors() const { return factors_; }
  std::vector<double> weights() const {
    std::vector<double> w;
    for (const auto& k : terms_) w.push_back(k.weight);
    return w;
  }

private:
  void validate() const {
    if (terms_.empty()) fail(ErrorKind::domain, "RUO needs at least one Kraus operator");
    const Index n = terms_.front().unitary.rows();
    double total = 0.0;
    for (const auto& k : terms_) {
      if (k.unitary.rows() != n || k.unitary.cols() != n)
        fail(ErrorKind::dimension, "RUO: Kraus operators have mismatched dimensions");
      require_finite(k.unitary);
      if (!(k.weight > 0.0 && k.weight <= 1.0 + weight_tol))
        fail(ErrorKind::weights, "RUO: weights must lie in (0,1]");
      if (unitarity_defect(k.unitary) > default_tol)
        fail(ErrorKind::unitarity, "RUO: Kraus operator is not unitary");
      total += k.weight;
    }
    if (std::abs(total - 1.0) > weight_tol)
      fail(ErrorKind::weights, "RUO: weights sum to " + std::to_string(total) + ", not 1");
  }

  std::vector<KrausTerm> terms_;
  std::vector<ComplexMatrix> factors_;
};

inline RandomUnitaryOperation make_ruo(Index dim, std::vector<KrausTerm> terms) {
  for (const auto& k : terms)
    if (k.unitary.rows() != dim || k.unitary.cols() != dim)
      fail(ErrorKind::dimension, "make_ruo: Kraus operator does not act on the declared dimension");
  return RandomUnitaryOperation(std::move(terms));
}

struct Superoperator {
  Index n = 0;  // dimension of the underlying Hilbert space
  ComplexMatrix matrix;  // n^2 x n^2
};

inline ComplexMatrix apply(const RandomUnitaryOperation& t, const ComplexMatrix& x) {
  if (x.rows() != t.dim() || x.cols() != t.dim()) fail(ErrorKind::shape, "apply: operand has the wrong shape");
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& k : t.kraus()) out.noalias() += k.weight * (k.unitary * x * k.unitary.adjoint());
  return out;
}

inline Superoperator to_superoperator(const RandomUnitaryOperation& t) {
  const Index n = t.dim();
  Superoperator s{n, ComplexMatrix::Zero(n * n, n * n)};
  for (const auto& k : t.kraus()) s.matrix += k.weight * kron(k.unitary.conjugate(), k.unitary);
  return s;
}

inline ComplexMatrix iterate(const RandomUnitaryOperation& t, const ComplexMatrix& x0, long n) {
  if (n < 0) fail(ErrorKind::domain, "iterate: negative step count");
  ComplexMatrix x = x0;
  for (long i = 0; i < n; ++i) x = wernerprep::apply(t, x);
  return x;
}

namespace detail {

template <class F>
RandomUnitaryOperation transform_terms(const RandomUnitaryOperation& t, F&& f) {
  std::vector<double> w;
  std::vector<ComplexMatrix> mats;
  const bool lifted = t.is_lifted();
  for (std::size_t i = 0; i < t.size(); ++i)
    f(t.kraus()[i].weight, lifted ? t.factors()[i] : t.kraus()[i].unitary, w, mats);
  if (lifted) return RandomUnitaryOperation::lifted(w, mats);
  std::vector<KrausTerm> terms;
  for (std::size_t i = 0; i < w.size(); ++i) terms.push_back({w[i], mats[i]});
  return RandomUnitaryOperation(std::move(terms));
}

} // namespace detail

inline RandomUnitaryOperation adjoint(const RandomUnitaryOperation& t) {
  return detail::transform_terms(t, [](double p, const ComplexMatrix& u, auto& w, auto& m) {
    w.push_back(p);
    m.push_back(u.adjoint());
  });
}

// Weight p/2 on U and p/2 on U^dagger: the superoperator becomes Hermitian.
inline RandomUnitaryOperation symmetrize(const RandomUnitaryOperation& t) {
  return detail::transform_terms(t, [](double p, const ComplexMatrix& u, auto& w, auto& m) {
    w.push_back(p / 2.0);
    m.push_back(u);
    w.push_back(p / 2.0);
    m.push_back(u.adjoint());
  });
}

inline RandomUnitaryOperation augment_identity(const RandomUnitaryOperation& t, double p0) {
  if (!(p0 > 0.0 && p0 < 1.0)) fail(ErrorKind::domain, "augment_identity: p0 must lie in (0,1)");
  const bool lifted = t.is_lifted();
  std::vector<double> w{p0};
  std::vector<ComplexMatrix> m{identity(lifted ? t.factors().front().rows() : t.dim())};
  for (std::size_t i = 0; i < t.size(); ++i) {
    w.push_back(t.kraus()[i].weight * (1.0 - p0));
    m.push_back(lifted ? t.factors()[i] : t.kraus()[i].unitary);
  }
  if (lifted) return RandomUnitaryOperation::lifted(w, m);
  std::vector<KrausTerm> terms;
  for (std::size_t i = 0; i < w.size(); ++i) terms.push_back({w[i], m[i]});
  return RandomUnitaryOperation(std::move(terms));
}

} // namespace wernerprep

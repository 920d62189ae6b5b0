#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wernerprep/constructions.hpp"
#include "wernerprep/spectral.hpp"

namespace wernerprep {

// Elements are stored once each; lookup hashes entries rounded to 6 decimals and
// confirms entrywise equality within tol.
class FiniteMatrixGroup {
public:
  FiniteMatrixGroup(Index dim, std::vector<ComplexMatrix> generators, double tol)
    : dim_(dim), generators_(std::move(generators)), tol_(tol) {}

  Index dim() const { return dim_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const std::vector<ComplexMatrix>& generators() const { return generators_; }
  const ComplexMatrix& operator[](std::size_t i) const { return elements_[i]; }

  std::optional<std::size_t> index_of(const ComplexMatrix& m) const {
    if (m.rows() != dim_ || m.cols() != dim_) return std::nullopt;
    const auto it = buckets_.find(key(m));
    if (it == buckets_.end()) return std::nullopt;
    for (std::size_t i : it->second)
      if ((elements_[i] - m).cwiseAbs().maxCoeff() <= tol_) return i;
    return std::nullopt;
  }

  // Returns the index and whether m was new.
  std::pair<std::size_t, bool> insert(const ComplexMatrix& m) {
    if (auto i = index_of(m)) return {*i, false};
    elements_.push_back(m);
    buckets_[key(m)].push_back(elements_.size() - 1);
    return {elements_.size() - 1, true};
  }

  // table[i * order + j] = index of elements[i] * elements[j]
  const std::vector<std::uint32_t>& cayley() const {
    if (cayley_.empty() && !elements_.empty()) {
      const std::size_t n = order();
      cayley_.resize(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const auto k = index_of(elements_[i] * elements_[j]);
          if (!k) fail(ErrorKind::domain, "group is not closed under products");
          cayley_[i * n + j] = static_cast<std::uint32_t>(*k);
        }
    }
    return cayley_;
  }

  std::size_t identity_index() const {
    const auto i = index_of(identity(dim_));
    if (!i) fail(ErrorKind::domain, "group lacks the identity");
    return *i;
  }

private:
  static std::string key(const ComplexMatrix& m) {
    std::string k;
    k.reserve(static_cast<std::size_t>(m.size()) * 2 * sizeof(std::int64_t));
    for (Index i = 0; i < m.size(); ++i) {
      for (double part : {m.data()[i].real(), m.data()[i].imag()}) {
        const auto r = static_cast<std::int64_t>(std::llround(part * 1e6));
        k.append(reinterpret_cast<const char*>(&r), sizeof(r));
      }
    }
    return k;
  }

  Index dim_;
  std::vector<ComplexMatrix> generators_;
  double tol_;
  std::vector<ComplexMatrix> elements_;
  std::unordered_map<std::string, std::vector<std::size_t>> buckets_;
  mutable std::vector<std::uint32_t> cayley_;
};

// Breadth-first product closure; nullopt when more than cap elements appear.
inline std::optional<FiniteMatrixGroup> closure(const std::vector<ComplexMatrix>& generators,
                                                std::size_t cap = 100000, double tol = default_tol) {
  if (generators.empty()) fail(ErrorKind::domain, "closure: no generators");
  const Index dim = generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != dim || g.cols() != dim) fail(ErrorKind::dimension, "closure: generators differ in dimension");
    if (unitarity_defect(g) > tol) fail(ErrorKind::unitarity, "closure: generator is not unitary");
  }
  FiniteMatrixGroup group(dim, generators, tol);
  group.insert(identity(dim));
  for (std::size_t next = 0; next < group.order(); ++next) {
    const ComplexMatrix current = group[next];
    for (const auto& g : generators) {
      group.insert(current * g);
      if (group.order() > cap) return std::nullopt;
    }
  }
  return group;
}

// Size of the subgroup generated by the given element indices.
inline std::size_t generated_order(const FiniteMatrixGroup& g, const std::vector<std::size_t>& tuple) {
  const auto& table = g.cayley();
  const std::size_t n = g.order();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> queue{g.identity_index()};
  seen[queue.front()] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (std::size_t t : tuple) {
      const std::size_t k = table[queue[head] * n + t];
      if (!seen[k]) {
        seen[k] = 1;
        queue.push_back(k);
      }
    }
  return queue.size();
}

inline bool generates(const FiniteMatrixGroup& g, const std::vector<std::size_t>& tuple) {
  return generated_order(g, tuple) == g.order();
}

inline bool generates(const std::vector<ComplexMatrix>& tuple, const FiniteMatrixGroup& g) {
  std::vector<std::size_t> idx;
  for (const auto& m : tuple) {
    const auto i = g.index_of(m);
    if (!i) fail(ErrorKind::domain, "generates: element is not in the group");
    idx.push_back(*i);
  }
  return generates(g, idx);
}

struct CensusRecord {
  std::vector<std::size_t> tuple;
  bool generates = false;
  std::optional<bool> stationary;
  std::optional<Tristate> diagonalizable;
  std::optional<double> optimal_lambda_max;
};

struct CensusSummary {
  std::size_t tuples = 0;
  std::size_t generating = 0;
  std::size_t stationary = 0;
  std::size_t nonstationary = 0;
  std::size_t diagonalizable = 0;
  std::size_t undetermined = 0;
};

enum class TupleMode {
  subsets,  // distinct elements, increasing indices
  ordered,  // every ordered tuple, repetition allowed
};

namespace detail {

inline bool next_tuple(std::vector<std::size_t>& t, std::size_t n, TupleMode mode) {
  const std::size_t k = t.size();
  for (std::size_t pos = k; pos-- > 0;) {
    const std::size_t top = mode == TupleMode::ordered ? n - 1 : n - k + pos;
    if (t[pos] < top) {
      ++t[pos];
      for (std::size_t q = pos + 1; q < k; ++q) t[q] = mode == TupleMode::ordered ? 0 : t[q - 1] + 1;
      return true;
    }
  }
  return false;
}

} // namespace detail

// Generating tuples are lifted to W kron W Kraus operators with equal weights and analysed.
inline std::vector<CensusRecord> census(const FiniteMatrixGroup& g, int tuple_size,
                                        TupleMode mode = TupleMode::subsets) {
  if (tuple_size < 1 || tuple_size > 3) fail(ErrorKind::domain, "census: tuple size must be 1, 2 or 3");
  const std::size_t n = g.order();
  const auto k = static_cast<std::size_t>(tuple_size);
  if (mode == TupleMode::subsets && k > n) return {};
  double total = 1.0;
  for (std::size_t i = 0; i < k; ++i) total *= static_cast<double>(n);
  if (total > 1e5) fail(ErrorKind::capacity, "census: too many tuples");
  std::vector<CensusRecord> out;
  std::vector<std::size_t> tuple(k);
  for (std::size_t i = 0; i < k; ++i) tuple[i] = mode == TupleMode::ordered ? 0 : i;
  const std::vector<double> weights(k, 1.0 / static_cast<double>(k));
  do {
    CensusRecord r{tuple, generates(g, tuple), {}, {}, {}};
    if (r.generates) {
      std::vector<ComplexMatrix> factors;
      for (std::size_t i : tuple) factors.push_back(g[i]);
      const auto t = RandomUnitaryOperation::lifted(weights, factors);
      const BlockSpectrum spec = block_spectrum(t);
      bool stationary = true;
      for (Complex z : spec.all())
        if (on_unit_circle(z, default_tol) && std::abs(z - 1.0) > default_tol) stationary = false;
      r.stationary = stationary;
      r.diagonalizable = diagonalizability(spec);
    }
    out.push_back(std::move(r));
  } while (detail::next_tuple(tuple, n, mode));
  return out;
}

inline CensusSummary summarize(const std::vector<CensusRecord>& records) {
  CensusSummary s;
  for (const auto& r : records) {
    ++s.tuples;
    if (!r.generates) continue;
    ++s.generating;
    if (*r.stationary) ++s.stationary; else ++s.nonstationary;
    if (*r.diagonalizable == Tristate::yes) ++s.diagonalizable;
    if (*r.diagonalizable == Tristate::undetermined) ++s.undetermined;
  }
  return s;
}

inline bool normalizes(const ComplexMatrix& u, const FiniteMatrixGroup& h) {
  for (const auto& e : h.elements())
    if (!h.index_of(u * e * u.adjoint())) return false;
  return true;
}

inline ComplexMatrix finite_twirl(const FiniteMatrixGroup& g, const ComplexMatrix& x, bool lift) {
  const Index n = lift ? g.dim() * g.dim() : g.dim();
  if (x.rows() != n || x.cols() != n) fail(ErrorKind::dimension, "finite_twirl: operand dimension mismatch");
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (const auto& e : g.elements()) {
    const ComplexMatrix l = lift ? kron(e, e) : e;
    acc.noalias() += l * x * l.adjoint();
  }
  return acc / static_cast<double>(g.order());
}

inline FiniteMatrixGroup quaternion_group() {
  const QubitGenerators q = qubit_sl23();
  return *closure({q.h1, q.h2});
}

inline FiniteMatrixGroup sl23_group() {
  const QubitGenerators q = qubit_sl23();
  return *closure({q.h1, q.h2, q.u});
}

// <h, U V> in d = 2 with alpha = beta = 1/sqrt2, phi = 0.
inline FiniteMatrixGroup order192_group() {
  ParamPoint p;
  p.alpha_abs = 1.0 / std::sqrt(2.0);
  const auto g = closure({h_general(2), u_cycle(2) * v_general(2, p)});
  if (!g) fail(ErrorKind::capacity, "order192_group: closure did not terminate");
  return *g;
}

} // namespace wernerprep

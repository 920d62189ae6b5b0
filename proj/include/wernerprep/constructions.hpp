#pragma once

#include <cctype>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wernerprep/channels.hpp"

namespace wernerprep {

// phi, |alpha|, arg alpha, arg beta and the first k-1 Kraus weights (the last is implied).
struct ParamPoint {
  double phi = 0.0;
  double alpha_abs = 1.0;
  double alpha_arg = 0.0;
  double beta_arg = 0.0;
  std::vector<double> weights;

  Complex alpha() const { return std::polar(alpha_abs, alpha_arg); }
  Complex beta() const {
    return std::polar(std::sqrt(std::max(0.0, 1.0 - alpha_abs * alpha_abs)), beta_arg);
  }
  double theta() const { return std::acos(std::clamp(alpha().real(), -1.0, 1.0)); }

  std::vector<double> full_weights() const {
    std::vector<double> w = weights;
    double rest = 1.0;
    for (double p : weights) rest -= p;
    w.push_back(rest);
    return w;
  }
};

inline void require_feasible(const ParamPoint& p, std::size_t kraus_count) {
  for (double a : {p.phi, p.alpha_arg, p.beta_arg})
    if (!std::isfinite(a)) fail(ErrorKind::infeasible, "parameters: angles must be finite");
  if (!(p.alpha_abs >= 0.0 && p.alpha_abs <= 1.0))
    fail(ErrorKind::infeasible, "parameters: |alpha| must lie in [0,1]");
  if (p.weights.size() + 1 != kraus_count)
    fail(ErrorKind::infeasible, "parameters: need " + std::to_string(kraus_count - 1) + " weights, got "
                                    + std::to_string(p.weights.size()));
  double sum = 0.0;
  for (double w : p.weights) {
    if (!(w > 0.0)) fail(ErrorKind::infeasible, "parameters: weights must be positive");
    sum += w;
  }
  if (!(sum < 1.0)) fail(ErrorKind::infeasible, "parameters: weights must sum to less than 1");
}

// Where e^{i phi} multiplies V: the whole of A (+) 1, or the A block only.
enum class PhaseConvention { global, block };
// U|k> = |k-1> (descending) or U|k> = |k+1> (ascending), indices mod d.
enum class ShiftDirection { descending, ascending };

struct QubitGenerators {
  ComplexMatrix h1;
  ComplexMatrix h2;
  ComplexMatrix u;
};

inline QubitGenerators qubit_sl23() {
  QubitGenerators g{ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2), ComplexMatrix(2, 2)};
  g.h1(0, 0) = I_unit;
  g.h1(1, 1) = -I_unit;
  g.h2(0, 1) = -1.0;
  g.h2(1, 0) = 1.0;
  g.u << Complex(1, 1), Complex(1, 1), Complex(-1, 1), Complex(1, -1);
  g.u /= 2.0;
  return g;
}

inline ComplexMatrix h_general(int d) {
  if (d < 2) fail(ErrorKind::dimension, "h_general: d must be at least 2");
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (int k = 1; k <= d; ++k) h(k - 1, k - 1) = std::polar(1.0, std::numbers::pi * std::ldexp(1.0, k - d));
  return h;
}

inline ComplexMatrix u_cycle(int d, ShiftDirection dir = ShiftDirection::descending) {
  if (d < 2) fail(ErrorKind::dimension, "u_cycle: d must be at least 2");
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  const int step = dir == ShiftDirection::descending ? d - 1 : 1;
  for (int k = 0; k < d; ++k) u((k + step) % d, k) = 1.0;
  return u;
}

inline ComplexMatrix v_general(int d, const ParamPoint& p, PhaseConvention conv = PhaseConvention::global) {
  if (d < 2) fail(ErrorKind::dimension, "v_general: d must be at least 2");
  if (!(p.alpha_abs >= 0.0 && p.alpha_abs <= 1.0)) fail(ErrorKind::infeasible, "v_general: |alpha| must lie in [0,1]");
  const Complex a = p.alpha(), b = p.beta();
  const Complex phase = std::polar(1.0, p.phi);
  ComplexMatrix v = identity(d);
  v(0, 0) = a;
  v(0, 1) = b;
  v(1, 0) = -std::conj(b);
  v(1, 1) = std::conj(a);
  if (conv == PhaseConvention::global) return phase * v;
  v.topLeftCorner(2, 2) *= phase;
  return v;
}

struct Factor {
  char symbol = 'h';
  int exponent = 1;
};

struct GeneratorWord {
  std::vector<Factor> factors;
  std::optional<std::vector<int>> kappa;

  std::string text() const {
    std::string s;
    for (const auto& f : factors) {
      s += f.symbol;
      if (f.exponent != 1) s += "^" + std::to_string(f.exponent);
    }
    return s;
  }
};

// word := term+ ; term := ('h'|'U'|'V') ('^' signed-int)?
inline GeneratorWord parse_word(std::string_view text) {
  if (text.empty()) throw ParseError(1, "empty word");
  GeneratorWord w;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != 'h' && c != 'U' && c != 'V') throw ParseError(i + 1, std::string("unexpected '") + c + "'");
    Factor f{c, 1};
    ++i;
    if (i < text.size() && text[i] == '^') {
      ++i;
      int sign = 1;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) sign = text[i++] == '-' ? -1 : 1;
      const std::size_t start = i;
      long value = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + (text[i] - '0');
        if (value > 1'000'000) throw ParseError(start + 1, "exponent too large");
        ++i;
      }
      if (i == start) throw ParseError(i + 1, "expected exponent");
      f.exponent = sign * static_cast<int>(value);
    }
    w.factors.push_back(f);
  }
  return w;
}

// Comma separated words; column numbers refer to the whole list.
inline std::vector<GeneratorWord> parse_words(std::string_view text) {
  std::vector<GeneratorWord> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    std::size_t offset = start;
    while (!item.empty() && item.front() == ' ') {
      item.remove_prefix(1);
      ++offset;
    }
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    try {
      out.push_back(parse_word(item));
    } catch (const ParseError& e) {
      throw ParseError(offset + e.column(), item.empty() ? "empty word" : "malformed word");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string words_text(const std::vector<GeneratorWord>& words) {
  std::string s;
  for (std::size_t i = 0; i < words.size(); ++i) s += (i ? "," : "") + words[i].text();
  return s;
}

struct Bindings {
  ComplexMatrix h;
  ComplexMatrix u;
  ComplexMatrix v;
};

inline ComplexMatrix power(const ComplexMatrix& m, int e) {
  ComplexMatrix base = e < 0 ? ComplexMatrix(m.adjoint()) : m;
  ComplexMatrix out = identity(m.rows());
  for (int k = 0; k < std::abs(e); ++k) out = out * base;
  return out;
}

// Inverse powers use the adjoint: bindings are unitary.
inline ComplexMatrix realize_word(const GeneratorWord& w, const Bindings& b) {
  ComplexMatrix out = identity(b.h.rows());
  for (const auto& f : w.factors) {
    const ComplexMatrix& m = f.symbol == 'h' ? b.h : f.symbol == 'U' ? b.u : b.v;
    out = out * power(m, f.exponent);
  }
  return out;
}

inline GeneratorWord kappa_word(int k1, int k2) {
  GeneratorWord w;
  if (k1 != 0) w.factors.push_back({'V', k1});
  w.factors.push_back({'h', 1});
  if (k2 != 0) w.factors.push_back({'V', k2});
  w.kappa = std::vector<int>{k1, k2};
  return w;
}

inline int kappa_norm(const GeneratorWord& w) {
  if (!w.kappa) fail(ErrorKind::domain, "kappa_norm: word carries no multiindex");
  int s = 0;
  for (int k : *w.kappa) s += std::abs(k);
  return s;
}

// Which matrices h, U, V denote.
enum class Alphabet {
  construction,  // h_general, u_cycle, v_general
  sl23,          // h = i sigma_3, U = the qubit U, V = -i sigma_2 (parameters unused)
};

struct ConstructionOptions {
  Alphabet alphabet = Alphabet::construction;
  PhaseConvention phase = PhaseConvention::global;
  ShiftDirection shift = ShiftDirection::descending;
};

inline Bindings make_bindings(int d, const ParamPoint& p, const ConstructionOptions& opt = {}) {
  if (opt.alphabet == Alphabet::sl23) {
    if (d != 2) fail(ErrorKind::dimension, "sl23 alphabet is two-dimensional");
    const QubitGenerators g = qubit_sl23();
    return {g.h1, g.u, g.h2};
  }
  return {h_general(d), u_cycle(d, opt.shift), v_general(d, p, opt.phase)};
}

inline RandomUnitaryOperation standard_ruo(int d, const std::vector<GeneratorWord>& words, const ParamPoint& p,
                                           const ConstructionOptions& opt = {}) {
  if (words.empty()) fail(ErrorKind::domain, "standard_ruo: empty word list");
  require_feasible(p, words.size());
  const Bindings b = make_bindings(d, p, opt);
  std::vector<ComplexMatrix> factors;
  for (const auto& w : words) factors.push_back(realize_word(w, b));
  return RandomUnitaryOperation::lifted(p.full_weights(), factors);
}

// Sufficient (not necessary) qubit condition for asymptotic stationarity.
inline bool stationarity_condition_qubit(const ParamPoint& p, double tol = default_tol) {
  const double two_pi = 2.0 * std::numbers::pi;
  auto wrap = [&](double a) {
    a = std::fmod(a, two_pi);
    return a < 0.0 ? a + two_pi : a;
  };
  auto near = [&](double a) {
    const double diff = std::abs(wrap(a) - std::numbers::pi / 2.0);
    return std::min(diff, two_pi - diff) <= tol;
  };
  return !(near(p.phi) || near(p.theta()) || near(2.0 * p.phi) || near(-2.0 * p.phi));
}

} // namespace wernerprep

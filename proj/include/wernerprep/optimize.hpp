#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wernerprep/constructions.hpp"
#include "wernerprep/spectral.hpp"
#include "wernerprep/werner.hpp"

namespace wernerprep {

struct FreeMask {
  bool phi = true;
  bool alpha_abs = true;
  bool alpha_arg = true;
  bool beta_arg = true;
};

struct OptimizationProblem {
  int d = 2;
  std::vector<GeneratorWord> words;
  ConstructionOptions options;
  FreeMask free;
  ParamPoint base;  // values of coordinates that are not free
  double eps = 1e-6;

  std::size_t weight_count() const { return words.size() - 1; }
  bool structural() const { return options.alphabet == Alphabet::construction; }
};

inline double objective(const OptimizationProblem& prob, const ParamPoint& p) {
  return penalized_lambda_max(standard_ruo(prob.d, prob.words, p, prob.options));
}

// Box coordinates uniform; weights uniform on the eps-shrunk open simplex (sorted-uniform spacings).
inline ParamPoint sample_feasible(const OptimizationProblem& prob, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  ParamPoint p = prob.base;
  if (prob.structural()) {
    if (prob.free.phi) p.phi = two_pi * unit(rng);
    if (prob.free.alpha_abs) p.alpha_abs = unit(rng);
    if (prob.free.alpha_arg) p.alpha_arg = two_pi * unit(rng);
    if (prob.free.beta_arg) p.beta_arg = two_pi * unit(rng);
  }
  const std::size_t m = prob.weight_count();
  std::vector<double> cuts(m);
  for (double& c : cuts) c = unit(rng);
  std::sort(cuts.begin(), cuts.end());
  const double scale = 1.0 - static_cast<double>(m + 1) * prob.eps;
  p.weights.assign(m, 0.0);
  double prev = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    p.weights[i] = prob.eps + scale * (cuts[i] - prev);
    prev = cuts[i];
  }
  return p;
}

namespace detail {

struct Encoding {
  std::vector<int> structural;  // 0 phi, 1 |alpha|, 2 arg alpha, 3 arg beta
  std::size_t weights = 0;
  std::size_t size() const { return structural.size() + weights; }
};

inline Encoding encoding(const OptimizationProblem& prob) {
  Encoding e;
  if (prob.structural()) {
    if (prob.free.phi) e.structural.push_back(0);
    if (prob.free.alpha_abs) e.structural.push_back(1);
    if (prob.free.alpha_arg) e.structural.push_back(2);
    if (prob.free.beta_arg) e.structural.push_back(3);
  }
  e.weights = prob.weight_count();
  return e;
}

inline double& coordinate(ParamPoint& p, int which) {
  switch (which) {
    case 0: return p.phi;
    case 1: return p.alpha_abs;
    case 2: return p.alpha_arg;
    default: return p.beta_arg;
  }
}

inline Eigen::VectorXd encode(const Encoding& e, ParamPoint p) {
  Eigen::VectorXd x(static_cast<Index>(e.size()));
  Index k = 0;
  for (int c : e.structural) x(k++) = coordinate(p, c);
  for (std::size_t i = 0; i < e.weights; ++i) x(k++) = p.weights[i];
  return x;
}

// Euclidean projection onto {w >= eps, sum w <= 1 - eps}.
inline void project_weights(Eigen::Ref<Eigen::VectorXd> w, double eps) {
  const Index m = w.size();
  if (m == 0) return;
  Eigen::VectorXd clamped = w.cwiseMax(eps);
  if (clamped.sum() <= 1.0 - eps) {
    w = clamped;
    return;
  }
  // project w - eps onto the simplex of mass 1 - eps - m*eps
  const double mass = 1.0 - eps - static_cast<double>(m) * eps;
  std::vector<double> q(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) q[static_cast<std::size_t>(i)] = w(i) - eps;
  std::vector<double> sorted = q;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cum = 0.0, shift = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cum += sorted[i];
    const double t = (cum - mass) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) shift = t;
  }
  for (Index i = 0; i < m; ++i) w(i) = eps + std::max(0.0, q[static_cast<std::size_t>(i)] - shift);
}

// Clamp |alpha| and project the weights; angles stay unwrapped so the simplex
// keeps its shape across the 2 pi seam.
inline Eigen::VectorXd project(const Encoding& e, Eigen::VectorXd x, double eps) {
  for (std::size_t k = 0; k < e.structural.size(); ++k)
    if (e.structural[k] == 1) x(static_cast<Index>(k)) = std::clamp(x(static_cast<Index>(k)), 0.0, 1.0);
  project_weights(x.tail(static_cast<Index>(e.weights)), eps);
  return x;
}

inline ParamPoint decode(const Encoding& e, const ParamPoint& like, Eigen::VectorXd x, double eps) {
  const double two_pi = 2.0 * std::numbers::pi;
  ParamPoint p = like;
  Index k = 0;
  for (int c : e.structural) {
    double v = x(k++);
    if (c == 1) {
      v = std::clamp(v, 0.0, 1.0);
    } else {
      v = std::fmod(v, two_pi);
      if (v < 0.0) v += two_pi;
    }
    coordinate(p, c) = v;
  }
  auto w = x.tail(static_cast<Index>(e.weights));
  project_weights(w, eps);
  p.weights.assign(w.data(), w.data() + w.size());
  return p;
}

} // namespace detail

struct LocalResult {
  ParamPoint point;
  double value = 1.0;
  long evaluations = 0;
};

// Nelder-Mead over the free coordinates; trial points are projected onto the
// feasible set before evaluation. Restarts with a shrinking simplex until the
// budget is spent or the simplex collapses.
inline LocalResult local_search(const OptimizationProblem& prob, const ParamPoint& x0, long budget = 1500) {
  const detail::Encoding enc = detail::encoding(prob);
  const auto n = static_cast<Index>(enc.size());
  LocalResult best{x0, objective(prob, x0), 1};
  if (n == 0 || budget <= 1) return best;

  auto eval = [&](const Eigen::VectorXd& raw, Eigen::VectorXd& projected) {
    projected = detail::project(enc, raw, prob.eps);
    const ParamPoint p = detail::decode(enc, x0, projected, prob.eps);
    const double f = objective(prob, p);
    ++best.evaluations;
    if (f < best.value) {
      best.value = f;
      best.point = p;
    }
    return f;
  };

  Eigen::VectorXd steps(n);
  for (Index k = 0; k < n; ++k) {
    const bool weight = k >= static_cast<Index>(enc.structural.size());
    const bool modulus = !weight && enc.structural[static_cast<std::size_t>(k)] == 1;
    steps(k) = weight ? 0.05 : modulus ? 0.1 : 0.5;
  }

  while (best.evaluations < budget && steps.maxCoeff() > 1e-9) {
    std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1));
    std::vector<double> f(static_cast<std::size_t>(n + 1));
    simplex[0] = detail::encode(enc, best.point);
    f[0] = best.value;
    for (Index k = 0; k < n; ++k) {
      const auto slot = static_cast<std::size_t>(k + 1);
      Eigen::VectorXd v = simplex[0];
      v(k) += steps(k);
      f[slot] = eval(v, simplex[slot]);
      if ((simplex[slot] - simplex[0]).norm() < 0.5 * steps(k)) {
        v(k) -= 2.0 * steps(k);
        f[slot] = eval(v, simplex[slot]);
      }
    }
    const double start = best.value;
    while (best.evaluations < budget) {
      std::vector<std::size_t> order(simplex.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return f[a] < f[b]; });
      const std::size_t lo = order.front(), hi = order.back(), second = order[order.size() - 2];
      double diameter = 0.0;
      for (const auto& v : simplex) diameter = std::max(diameter, (v - simplex[lo]).cwiseAbs().maxCoeff());
      if (f[hi] - f[lo] <= 1e-13 && diameter <= 1e-9) break;
      if (diameter <= 1e-11) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (std::size_t i = 0; i < simplex.size(); ++i)
        if (i != hi) centroid += simplex[i];
      centroid /= static_cast<double>(n);

      Eigen::VectorXd xr, xe, xc;
      const double fr = eval(centroid + (centroid - simplex[hi]), xr);
      if (fr < f[lo]) {
        const double fe = eval(centroid + 2.0 * (centroid - simplex[hi]), xe);
        if (fe < fr) { simplex[hi] = xe; f[hi] = fe; } else { simplex[hi] = xr; f[hi] = fr; }
      } else if (fr < f[second]) {
        simplex[hi] = xr;
        f[hi] = fr;
      } else {
        const bool outside = fr < f[hi];
        const Eigen::VectorXd target = outside ? xr : simplex[hi];
        const double fc = eval(centroid + 0.5 * (target - centroid), xc);
        if (fc < std::min(fr, f[hi])) {
          simplex[hi] = xc;
          f[hi] = fc;
        } else {
          for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == lo) continue;
            Eigen::VectorXd shrunk;
            f[i] = eval(simplex[lo] + 0.5 * (simplex[i] - simplex[lo]), shrunk);
            simplex[i] = shrunk;
          }
        }
      }
    }
    steps *= best.value < start - 1e-12 ? 0.5 : 0.1;
  }
  return best;
}

struct RestartRecord {
  std::uint64_t seed = 0;
  double best_sample = 1.0;
  double local_value = 1.0;
  long evaluations = 0;
};

struct OptimizationResult {
  double best_lambda_max = 1.0;
  ParamPoint best_point;
  std::vector<RestartRecord> history;
  std::uint64_t seed = 0;
};

inline std::uint64_t restart_seed(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Per repetition: draw n_ran feasible points, locally refine the best one.
inline OptimizationResult multistart(const OptimizationProblem& prob, long n_ran, long n_opt, std::uint64_t seed,
                                     long budget = 1500) {
  if (n_ran < 1 || n_opt < 1) fail(ErrorKind::domain, "multistart: budgets must be at least 1");
  OptimizationResult res;
  res.seed = seed;
  for (long r = 0; r < n_opt; ++r) {
    RestartRecord rec;
    rec.seed = restart_seed(seed, static_cast<std::uint64_t>(r));
    Rng rng(rec.seed);
    ParamPoint start;
    double best = std::numeric_limits<double>::infinity();
    for (long k = 0; k < n_ran; ++k) {
      const ParamPoint p = sample_feasible(prob, rng);
      const double f = objective(prob, p);
      if (f < best) {
        best = f;
        start = p;
      }
    }
    rec.best_sample = best;
    const LocalResult local = local_search(prob, start, budget);
    rec.local_value = local.value;
    rec.evaluations = local.evaluations;
    res.history.push_back(rec);
    if (r == 0 || local.value < res.best_lambda_max) {
      res.best_lambda_max = local.value;
      res.best_point = local.point;
    }
  }
  res.best_lambda_max = objective(prob, res.best_point);
  return res;
}

struct CoordinateRef {
  int structural = -1;  // 0 phi, 1 |alpha|, 2 arg alpha, 3 arg beta; -1 for a weight
  std::size_t weight = 0;
  std::string name;
};

inline CoordinateRef parse_coordinate(const std::string& name, const OptimizationProblem& prob) {
  const std::vector<std::string> names{"phi", "alpha-abs", "alpha-arg", "beta-arg"};
  for (int i = 0; i < 4; ++i)
    if (name == names[static_cast<std::size_t>(i)]) return {i, 0, name};
  if (name.size() > 1 && name[0] == 'p' && std::all_of(name.begin() + 1, name.end(), ::isdigit)) {
    const std::size_t k = std::stoul(name.substr(1));
    if (k >= 1 && k <= prob.weight_count()) return {-1, k - 1, name};
  }
  fail(ErrorKind::domain, "unknown coordinate '" + name + "'");
}

inline ParamPoint with_coordinate(ParamPoint p, const CoordinateRef& c, double value) {
  if (c.structural >= 0) detail::coordinate(p, c.structural) = value;
  else p.weights.at(c.weight) = value;
  return p;
}

struct SweepPoint {
  double value;
  double lambda_max;
};

inline std::vector<SweepPoint> sweep(const OptimizationProblem& prob, const CoordinateRef& c,
                                     const std::vector<double>& grid, const ParamPoint& fixed) {
  if (grid.empty()) fail(ErrorKind::domain, "sweep: empty grid");
  std::vector<SweepPoint> out;
  for (double v : grid) out.push_back({v, objective(prob, with_coordinate(fixed, c, v))});
  return out;
}

struct SweepPoint2 {
  double first;
  double second;
  double lambda_max;
};

// Grid over two coordinates; infeasible combinations (weights summing to 1 or more) are skipped.
inline std::vector<SweepPoint2> sweep2(const OptimizationProblem& prob, const CoordinateRef& a, const CoordinateRef& b,
                                       const std::vector<double>& grid_a, const std::vector<double>& grid_b,
                                       const ParamPoint& fixed) {
  if (grid_a.empty() || grid_b.empty()) fail(ErrorKind::domain, "sweep: empty grid");
  std::vector<SweepPoint2> out;
  for (double u : grid_a)
    for (double v : grid_b) {
      const ParamPoint p = with_coordinate(with_coordinate(fixed, a, u), b, v);
      double sum = 0.0;
      for (double w : p.weights) sum += w;
      if (sum >= 1.0) continue;
      out.push_back({u, v, objective(prob, p)});
    }
  return out;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g;
  if (count == 1) return {lo};
  for (std::size_t i = 0; i < count; ++i)
    g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return g;
}

// Golden-section search along one coordinate inside [lo, hi].
inline SweepPoint golden_minimum(const OptimizationProblem& prob, const CoordinateRef& c, double lo, double hi,
                                 const ParamPoint& fixed, double tol = 1e-10) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double v) { return objective(prob, with_coordinate(fixed, c, v)); };
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - r * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + r * (b - a); f2 = f(x2);
    }
  }
  return f1 <= f2 ? SweepPoint{x1, f1} : SweepPoint{x2, f2};
}

// Grid scan followed by golden-section refinement around the best grid point.
inline SweepPoint refine_minimum(const OptimizationProblem& prob, const CoordinateRef& c,
                                 const std::vector<double>& grid, const ParamPoint& fixed) {
  const auto pts = sweep(prob, c, grid, fixed);
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].lambda_max < pts[best].lambda_max) best = i;
  const double lo = pts[best == 0 ? 0 : best - 1].value;
  const double hi = pts[std::min(best + 1, pts.size() - 1)].value;
  const SweepPoint g = golden_minimum(prob, c, lo, hi, fixed);
  return g.lambda_max <= pts[best].lambda_max ? g : pts[best];
}

} // namespace wernerprep

#include <catch_amalgamated.hpp>

#include "support/oracles.hpp"
#include "support/tables.hpp"

using namespace wernerprep;
using Catch::Matchers::WithinAbs;

namespace {

RandomUnitaryOperation from_row(const fixtures::TableRow& row) {
  return standard_ruo(row.d, parse_words(row.words), row.params);
}

const fixtures::TableRow& find_row(int d, const char* words) {
  for (const auto& r : fixtures::ranked_rows())
    if (r.d == d && std::string(r.words) == words) return r;
  FAIL("row not found");
  return fixtures::ranked_rows().front();
}

RandomUnitaryOperation quaternion_pair(double p = 0.5) {
  const QubitGenerators q = qubit_sl23();
  return RandomUnitaryOperation::lifted({p, 1.0 - p}, {q.h1, q.h2});
}

ParamPoint generic_point(std::size_t weights) {
  ParamPoint p{0.3, 0.8, 0.0, std::numbers::pi / 2.0, {}};
  for (std::size_t i = 0; i < weights; ++i) p.weights.push_back(0.7 / static_cast<double>(weights + 1));
  return p;
}

SpectralBlock bare_block(const ComplexMatrix& m) { return {m, identity(m.rows())}; }

BlockSpectrum spectrum_of(const ComplexMatrix& m) {
  return BlockSpectrum{{bare_block(m)}, {eigenvalues(m)}};
}

} // namespace

TEST_CASE("identity channel report") {
  const auto id = make_ruo(4, {{1.0, identity(4)}});
  const SpectralReport r = analyze(id);
  REQUIRE(r.eigenvalues.size() == 16);
  REQUIRE(r.sigma1.size() == 16);
  for (Complex z : r.eigenvalues) REQUIRE(std::abs(z - 1.0) <= 1e-12);
  REQUIRE(r.lambda_max == 0.0);
  REQUIRE(r.stationary);
  REQUIRE(r.diagonalizable == Tristate::yes);
  REQUIRE(r.fixed_space_dim == 16);
  REQUIRE(penalized_lambda_max(id) == 1.0);
  REQUIRE(fixed_space(id).size() == 16);
}

TEST_CASE("shortcut block spectra match direct eigensolves") {
  Rng rng(79);
  const auto t = RandomUnitaryOperation::lifted({0.3, 0.7}, {haar_sample(3, rng), haar_sample(3, rng)});
  const BlockSpectrum spec = block_spectrum(t);
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    std::vector<Complex> direct;
    const ComplexVector ev = eigenvalues(spec.blocks[b].matrix);
    for (Index i = 0; i < ev.size(); ++i) direct.push_back(ev(i));
    REQUIRE(spec.eigenvalues[b].size() == ev.size());
    for (Index i = 0; i < ev.size(); ++i) {
      auto it = std::min_element(direct.begin(), direct.end(), [&](Complex x, Complex y) {
        return std::abs(x - spec.eigenvalues[b](i)) < std::abs(y - spec.eigenvalues[b](i));
      });
      REQUIRE(std::abs(*it - spec.eigenvalues[b](i)) <= 1e-9);
      direct.erase(it);
    }
  }
  REQUIRE(spec.blocks[0].hermitian_closed);
  REQUIRE(spec.blocks[2].conjugate_of == 1);
}

TEST_CASE("swap blocks reproduce the full superoperator") {
  Rng rng(80);
  for (int d : {2, 3}) {
    std::vector<ComplexMatrix> factors{haar_sample(d, rng), haar_sample(d, rng), haar_sample(d, rng)};
    const auto t = RandomUnitaryOperation::lifted({0.2, 0.3, 0.5}, factors);
    const ComplexMatrix full = to_superoperator(t).matrix;
    const auto blocks = spectral_blocks(t);
    REQUIRE(blocks.size() == 4);
    Index total = 0;
    for (const auto& b : blocks) {
      REQUIRE((full * b.embedding - b.embedding * b.matrix).norm() <= 1e-12);
      REQUIRE((b.embedding.adjoint() * b.embedding - identity(b.matrix.rows())).norm() <= 1e-12);
      total += b.matrix.rows();
    }
    REQUIRE(total == full.rows());

    // same spectrum as the dense matrix
    std::vector<Complex> dense;
    const ComplexVector ev = eigenvalues(full);
    for (Index i = 0; i < ev.size(); ++i) dense.push_back(ev(i));
    auto blockwise = block_spectrum(t).all();
    REQUIRE(blockwise.size() == dense.size());
    for (Complex z : dense) {
      auto it = std::min_element(blockwise.begin(), blockwise.end(),
                                 [&](Complex a, Complex b) { return std::abs(a - z) < std::abs(b - z); });
      REQUIRE(std::abs(*it - z) <= 1e-8);
      blockwise.erase(it);
    }
  }
}

TEST_CASE("two-element qubit optimum") {
  const auto words = parse_words("h^-1,V^-1U^2");
  ConstructionOptions opt;
  opt.alphabet = Alphabet::sl23;
  ParamPoint p;
  p.weights = {0.51705601};
  const SpectralReport r = analyze(standard_ruo(2, words, p, opt));
  REQUIRE_THAT(r.lambda_max, WithinAbs(0.64324745, 1e-6));
  REQUIRE(r.stationary);
  REQUIRE(r.fixed_space_dim == 2);
}

TEST_CASE("d=3 two-generator row") {
  const SpectralReport r = analyze(from_row(find_row(3, "h,UV")));
  REQUIRE_THAT(r.lambda_max, WithinAbs(0.67402461, 1e-6));
  REQUIRE(r.stationary);
  REQUIRE(r.sigma1.size() == 2);
}

TEST_CASE("lambda_max rules") {
  std::vector<Complex> ev{1.0, 1.0, 0.5, Complex(0.0, -0.7)};
  REQUIRE(lambda_max_of(ev, 1e-8) == 0.7);
  REQUIRE(lambda_max_of({1.0, -1.0}, 1e-8) == 0.0);
  REQUIRE(lambda_max_of({1.0, 1.0 - 1e-9, 0.2}, 1e-8) == 0.2);

  // exactly two unit eigenvalues: penalty not triggered
  const auto t = from_row(find_row(3, "h,UV"));
  REQUIRE(penalized_lambda_max(t) == analyze(t).lambda_max);
  // quaternion pair: many unit eigenvalues
  REQUIRE(penalized_lambda_max(quaternion_pair()) == 1.0);
  REQUIRE_FALSE(analyze(quaternion_pair()).stationary);
}

TEST_CASE("diagonalizability decisions") {
  ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
  diag.diagonal() << 0.5, 0.5, 0.2;
  REQUIRE(diagonalizability(spectrum_of(diag)) == Tristate::yes);

  ComplexMatrix jordan = diag;
  jordan(0, 1) = 0.3;
  REQUIRE(diagonalizability(spectrum_of(jordan)) == Tristate::no);

  ComplexMatrix borderline = diag;
  borderline(0, 1) = 5e-9;
  REQUIRE(diagonalizability(spectrum_of(borderline)) == Tristate::undetermined);

  REQUIRE(analyze(symmetrize(from_row(find_row(2, "h,UV")))).diagonalizable == Tristate::yes);
}

TEST_CASE("fixed space of the three-generator family") {
  for (int d : {2, 3}) {
    const WernerKit kit = make_kit(d);
    const auto t = standard_ruo(d, parse_words("h,U,V"), generic_point(2));
    const auto fs = fixed_space(t);
    REQUIRE(fs.size() == 2);
    const ComplexMatrix basis = oracles::as_columns(fs);
    REQUIRE((basis.adjoint() * basis - identity(2)).norm() <= 1e-10);
    for (const auto& x : fs) REQUIRE(attractor_residual(t, x, 1.0) <= 1e-8);
    for (const ComplexMatrix& p : {kit.sym, kit.asym}) {
      const ComplexVector v = vectorize(p) / p.norm();
      REQUIRE((v - basis * (basis.adjoint() * v)).norm() <= 1e-7);
    }
    REQUIRE(oracles::max_angle(basis, oracles::per_kraus_intersection(t, 1.0)) <= 1e-6);
  }
}

TEST_CASE("fixed space of the two-generator family in odd dimension") {
  for (int d : {3, 5}) {
    const WernerKit kit = make_kit(d);
    const auto t = standard_ruo(d, parse_words("h,UV"), generic_point(1));
    const WernerCheck c = werner_check(t, kit);
    REQUIRE(c.fixed_dim == 2);
    REQUIRE(c.sym_residual <= 1e-7);
    REQUIRE(c.asym_residual <= 1e-7);
  }
}

TEST_CASE("is_werner_preparing") {
  const WernerKit kit = make_kit(2);
  const ParamPoint p{0.3, 0.8, 0.0, std::numbers::pi / 2.0, {0.3, 0.3}};
  REQUIRE(std::abs(p.beta() - Complex(0.0, 0.6)) <= 1e-15);
  REQUIRE(is_werner_preparing(standard_ruo(2, parse_words("h,U,V"), p), kit));

  REQUIRE_FALSE(is_werner_preparing(make_ruo(4, {{1.0, identity(4)}}), kit));

  ParamPoint diagonal = p;
  diagonal.alpha_abs = 1.0;  // beta = 0
  for (int d : {2, 3}) {
    const auto t = standard_ruo(d, parse_words("h,U,V"), diagonal);
    const WernerCheck c = werner_check(t, make_kit(d));
    REQUIRE(c.fixed_dim > 2);
    REQUIRE_FALSE(c.passes(1e-7));
    // the extra invariants are genuine: brute force agrees on the dimension
    REQUIRE(oracles::per_kraus_intersection(t, 1.0).cols() == c.fixed_dim);
  }
  REQUIRE_THROWS_AS(werner_check(make_ruo(3, {{1.0, identity(3)}}), kit), Error);
}

TEST_CASE("fixed-space projector equals the twirl") {
  for (int d : {2, 3}) {
    const auto t = standard_ruo(d, parse_words("h,U,V"), generic_point(2));
    const ComplexMatrix basis = oracles::as_columns(fixed_space(t));
    REQUIRE((basis * basis.adjoint() - twirl_projector(d)).norm() <= 1e-6);
  }
}

TEST_CASE("x_infinity for a Werner-preparing channel is the twirl") {
  Rng rng(81);
  const WernerKit kit = make_kit(3);
  const auto t = from_row(find_row(3, "h,UV"));
  const ComplexMatrix x0 = oracles::random_matrix(9, rng);
  for (long n : {0L, 1L, 5L, 40L}) REQUIRE((x_infinity(t, x0, n) - twirl(kit, x0)).norm() <= 1e-8 * x0.norm());
  REQUIRE((x_infinity(t, kit.asym, 3) - kit.asym).norm() <= 1e-10);
  REQUIRE_THROWS_AS(x_infinity(t, identity(4), 1), Error);
}

TEST_CASE("asymptotic pairs are orthonormal") {
  for (const auto& t : {quaternion_pair(0.4), from_row(find_row(2, "h,UV"))}) {
    const auto dec = asymptotic_decomposition(t);
    const auto n = dec.pairs.size();
    REQUIRE(n == analyze(t).sigma1.size());
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(attractor_residual(t, dec.pairs[i].eigenvector, dec.pairs[i].eigenvalue) <= 1e-8);
      for (std::size_t j = 0; j < n; ++j) {
        const Complex g = hs_inner(dec.pairs[i].dual, dec.pairs[j].eigenvector);
        REQUIRE(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("x_infinity tracks oscillating channels") {
  Rng rng(82);
  // quaternion pair: Bell matrix units are eigenvectors with eigenvalues +1, -1 or 0
  const auto q = quaternion_pair();
  const ComplexMatrix x0 = oracles::random_matrix(4, rng);
  for (long n = 1; n <= 6; ++n) REQUIRE((iterate(q, x0, n) - x_infinity(q, x0, n)).norm() <= 1e-10);
  bool has_minus_one = false;
  for (Complex z : analyze(q).sigma1) has_minus_one |= std::abs(z + 1.0) <= 1e-8;
  REQUIRE(has_minus_one);

  // diagonal unitaries: E_01 flips sign, E_02 decays with modulus 1/sqrt2 at equal weights
  ComplexMatrix u1 = identity(3), u2 = identity(3);
  u1(1, 1) = -1.0;
  u2(1, 1) = -1.0;
  u2(2, 2) = I_unit;
  const auto t = make_ruo(3, {{0.5, u1}, {0.5, u2}});
  const SpectralReport r = analyze(t);
  REQUIRE_FALSE(r.stationary);
  REQUIRE_THAT(r.lambda_max, WithinAbs(1.0 / std::sqrt(2.0), 1e-12));
  const ComplexMatrix y0 = oracles::random_matrix(3, rng);
  for (long n = 0; n <= 60; n += 5) {
    const double gap = (iterate(t, y0, n) - x_infinity(t, y0, n)).norm();
    REQUIRE(gap <= y0.norm() * std::pow(r.lambda_max + 0.05, static_cast<double>(n)));
  }
}

TEST_CASE("x_infinity steps by the unit eigenvalues") {
  Rng rng(83);
  const auto t = quaternion_pair(0.3);
  const ComplexMatrix x0 = oracles::random_matrix(4, rng);
  for (long n = 0; n < 4; ++n)
    REQUIRE((x_infinity(t, x0, n + 1) - wernerprep::apply(t, x_infinity(t, x0, n))).norm() <= 1e-10);
}

TEST_CASE("stationary channels converge within the spectral envelope") {
  Rng rng(84);
  for (const auto& t : {from_row(find_row(2, "h,UV")), from_row(find_row(3, "h,UV,U")),
                        standard_ruo(2, parse_words("h,U,V"), generic_point(2))}) {
    const SpectralReport r = analyze(t);
    REQUIRE(r.stationary);
    const ComplexMatrix x0 = oracles::random_matrix(t.dim(), rng);
    for (long n : {60L, 80L, 100L}) {
      const double gap = (iterate(t, x0, n) - x_infinity(t, x0, n)).norm();
      // round-off floor once the envelope drops below double precision
      REQUIRE(gap <= std::pow(r.lambda_max + 0.05, static_cast<double>(n)) + 1e-12 * x0.norm());
    }
  }
}

TEST_CASE("attractor_residual") {
  const WernerKit kit = make_kit(2);
  REQUIRE(attractor_residual(from_row(find_row(2, "h,UV")), kit.sym, 1.0) <= 1e-10);

  const auto bell = oracles::bell_states();
  const QubitGenerators q = qubit_sl23();
  const auto single = RandomUnitaryOperation::lifted({1.0}, {q.h1});
  REQUIRE(attractor_residual(single, bell[0] * bell[2].adjoint(), -1.0) <= 1e-14);
  // both lifted Kraus maps send |Phi+><Psi+| to its negative, but disagree on |Phi+><Phi-|
  REQUIRE(attractor_residual(quaternion_pair(), bell[0] * bell[2].adjoint(), -1.0) <= 1e-14);
  REQUIRE(attractor_residual(quaternion_pair(), bell[0] * bell[1].adjoint(), 1.0) > 1.0);

  REQUIRE_THROWS_AS(attractor_residual(single, kit.sym, 2.0), Error);
  REQUIRE_THROWS_AS(attractor_residual(single, identity(3), 1.0), Error);
}

TEST_CASE("unit eigenvalues are products of Kraus eigenvalues") {
  const QubitGenerators q = qubit_sl23();
  std::vector<RandomUnitaryOperation> cases{quaternion_pair(), RandomUnitaryOperation::lifted({0.5, 0.5}, {q.h1, q.u}),
                                            from_row(find_row(2, "h,UV"))};
  for (const auto& t : cases) {
    for (Complex lambda : analyze(t).sigma1) {
      for (const auto& k : t.kraus()) {
        const ComplexVector mu = eigenvalues(k.unitary);
        double best = 1e9;
        for (Index i = 0; i < mu.size(); ++i)
          for (Index j = 0; j < mu.size(); ++j) best = std::min(best, std::abs(lambda - mu(i) * std::conj(mu(j))));
        REQUIRE(best <= 1e-6);
      }
    }
  }
}

TEST_CASE("peripheral eigenspaces agree with per-Kraus intersections") {
  Rng rng(85);
  const QubitGenerators q = qubit_sl23();
  std::vector<RandomUnitaryOperation> cases{quaternion_pair(), RandomUnitaryOperation::lifted({0.4, 0.6}, {q.h1, q.u})};
  for (int i = 0; i < 4; ++i)
    cases.push_back(RandomUnitaryOperation::lifted({0.5, 0.5}, {haar_sample(2, rng), haar_sample(2, rng)}));
  for (const auto& t : cases) {
    const auto dec = asymptotic_decomposition(t);
    std::vector<Complex> seen;
    for (const auto& p : dec.pairs) {
      if (std::find_if(seen.begin(), seen.end(), [&](Complex z) { return std::abs(z - p.eigenvalue) < 1e-7; }) != seen.end())
        continue;
      seen.push_back(p.eigenvalue);
      std::vector<ComplexMatrix> span;
      for (const auto& r : dec.pairs)
        if (std::abs(r.eigenvalue - p.eigenvalue) < 1e-7) span.push_back(r.eigenvector);
      const ComplexMatrix brute = oracles::per_kraus_intersection(t, p.eigenvalue);
      REQUIRE(brute.cols() == static_cast<Index>(span.size()));
      REQUIRE(oracles::max_angle(oracles::as_columns(span), brute) <= 1e-6);
    }
  }
}

TEST_CASE("bound prefactors") {
  REQUIRE(bound_prefactor(2) == 56.0);
  REQUIRE(bound_prefactor(3) == 711.0);
  REQUIRE(convergence_bound(3, 0.55847203, 0) == 711.0);
  REQUIRE_THAT(convergence_bound(2, 0.5, 3), WithinAbs(7.0, 1e-12));
  REQUIRE_THROWS_AS(convergence_bound(2, 1.0, 3), Error);
  REQUIRE_THROWS_AS(bound_prefactor(1), Error);
}

TEST_CASE("distance to the twirl") {
  const auto t2 = from_row(find_row(2, "h,UV"));
  REQUIRE_THAT(distance_to_twirl(t2, 0), WithinAbs(std::sqrt(14.0), 1e-12));
  const auto t3 = from_row(find_row(3, "h,UV,U"));
  REQUIRE_THAT(distance_to_twirl(t3, 0), WithinAbs(std::sqrt(79.0), 1e-12));

  const auto series = distance_series(t3, 30);
  REQUIRE(series.size() == 31);
  for (long n = 1; n <= 30; ++n) REQUIRE(series[static_cast<std::size_t>(n)] <= convergence_bound(3, 0.55847203, n));

  const auto fast = distance_series(from_row(find_row(2, "hV,UV^-2,V")), 15);
  bool exceeded = false;
  for (long n = 1; n <= 15; ++n) exceeded |= fast[static_cast<std::size_t>(n)] > convergence_bound(2, 0.08044643, n);
  REQUIRE(exceeded);

  const auto id = distance_series(make_ruo(4, {{1.0, identity(4)}}), 400);
  REQUIRE(id.back() == Catch::Approx(std::sqrt(14.0)));
  REQUIRE_THROWS_AS(distance_series(t2, -1), Error);
}

TEST_CASE("diag_bound") {
  Rng rng(86);
  const auto s = symmetrize(from_row(find_row(2, "h,UV")));
  const ComplexMatrix x0 = oracles::random_matrix(4, rng);
  for (long n = 0; n <= 50; ++n) {
    const double measured = (iterate(s, x0, n) - x_infinity(s, x0, n)).norm();
    REQUIRE(measured <= diag_bound(s, x0, n) + 1e-12);
  }

  const auto id = make_ruo(4, {{1.0, identity(4)}});
  REQUIRE(decaying_eigenvalue_count(id) == 0);
  REQUIRE(diag_bound(id, x0, 1) == 0.0);
  REQUIRE(diag_bound(id, x0, 7) == 0.0);

  // a non-normal but diagonalizable channel uses the dual-vector weights
  const auto t = from_row(find_row(3, "h,UV"));
  REQUIRE(analyze(t).diagonalizable == Tristate::yes);
  const ComplexMatrix y0 = oracles::random_matrix(9, rng);
  for (long n : {1L, 5L, 20L}) {
    const double measured = (iterate(t, y0, n) - x_infinity(t, y0, n)).norm();
    REQUIRE(measured <= diag_bound(t, y0, n));
  }
}

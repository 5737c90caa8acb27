#include <doctest.h>

#include <cmath>

#include "cohere/measures.hpp"
#include "cohere/states.hpp"
#include "oracles.hpp"

using namespace cohere;

TEST_CASE("validate_density accepts valid states") {
  CHECK_NOTHROW(validate_density(identity(2) / 2.0, {2}));
  CHECK_NOTHROW(validate_density(ghz(3).matrix(), {2, 2, 2}));
}

TEST_CASE("validate_density reports every violated invariant") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(validate_density(m, {2}), PositivityError);
  const auto check = check_density(m, {2});
  REQUIRE(check.violations.size() == 1);
  CHECK(check.violations[0].kind == Violation::Kind::Positivity);

  ComplexMatrix skew = identity(2) / 2.0;
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(validate_density(skew, {2}), HermiticityError);

  CHECK_THROWS_AS(validate_density(identity(2), {2}), TraceError);

  ComplexMatrix nan = identity(2) / 2.0;
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(validate_density(nan, {2}), NonFiniteError);

  CHECK_THROWS_AS(validate_density(identity(4) / 4.0, {2, 3}), DimensionError);

  // A matrix failing trace and positivity at once lists both.
  ComplexMatrix both = ComplexMatrix::Zero(2, 2);
  both(0, 0) = 2.0;
  both(1, 1) = -0.5;
  try {
    validate_density(both, {2});
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.violations().size() == 2);
  }
}

TEST_CASE("MCS from amplitudes") {
  const auto half = CoherentAmplitudes::normalized({1.0, 1.0});
  CHECK(max_abs(mcs_from_amplitudes(half, 3).matrix() - ghz(3).matrix()) < 1e-15);

  const auto product = mcs_from_amplitudes(CoherentAmplitudes({1.0, 0.0}), 2);
  CHECK(std::abs(product(0, 0) - 1.0) < 1e-15);
  CHECK(max_abs(product.matrix()) == doctest::Approx(1.0));

  const auto mc = mcs_from_amplitudes(CoherentAmplitudes({0.8, 0.6}), 2);
  const oracle::Vec v = oracle::mcs_vector({0.8, 0.6}, 2);
  const oracle::Mat expected = v * v.adjoint();
  CHECK((oracle::Mat(mc.matrix()) - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(mc(0, 3).real() == doctest::Approx(0.48));
}

TEST_CASE("MCS keeps the element multiset and has diagonal pair marginals") {
  Rng rng(21);
  for (std::size_t d = 2; d <= 4; ++d) {
    const auto amps = random_coherent_amplitudes(d, rng);
    const auto single = from_pure(amps.vector(), {d});
    for (std::size_t parties = 2; parties <= 3; ++parties) {
      const auto mc = mcs_from_amplitudes(amps, parties);
      CHECK(is_mcs_form(mc));
      CHECK(max_abs(mcs_core(mc).matrix() - single.matrix()) < 1e-15);
      if (parties == 3) {
        for (const std::vector<std::size_t> keep :
             {std::vector<std::size_t>{0, 1}, {0, 2}, {1, 2}}) {
          const auto pair = reduce(mc, keep).matrix();
          for (Eigen::Index r = 0; r < pair.rows(); ++r) {
            for (Eigen::Index c = 0; c < pair.cols(); ++c) {
              if (r != c) CHECK(std::abs(pair(r, c)) < 1e-15);
            }
          }
        }
      }
    }
  }
  CHECK_FALSE(is_mcs_form(w3()));
  CHECK_THROWS_AS(mcs_core(w3()), NotMCSError);
}

TEST_CASE("CoherentAmplitudes normalization") {
  CHECK_THROWS_AS(CoherentAmplitudes({1.0, 1.0}), NormalizationError);
  CHECK_NOTHROW(CoherentAmplitudes({0.6, cplx(0.0, 0.8)}));
  CHECK_THROWS_AS(CoherentAmplitudes::normalized({0.0, 0.0}), NormalizationError);
}

TEST_CASE("named states") {
  const auto psi2 = maximally_coherent(2);
  CHECK(max_abs(psi2.matrix() - ComplexMatrix::Constant(2, 2, 0.5)) < 1e-15);
  CHECK(max_abs(standard_state("ghz", {3}).matrix() -
                mcs_from_amplitudes(CoherentAmplitudes::normalized({1.0, 1.0}), 3).matrix()) <
        1e-15);
  CHECK(max_abs(standard_state("plus").matrix() - psi2.matrix()) < 1e-15);
  CHECK(standard_state("basis", {3, 2})(2, 2) == cplx(1.0, 0.0));
  CHECK(standard_state("maximally_mixed", {4})(3, 3) == cplx(0.25, 0.0));
  CHECK_THROWS_AS(standard_state("cat"), UnknownStateError);

  // Every pair of W3 has concurrence 2/3.
  for (const std::vector<std::size_t> keep : {std::vector<std::size_t>{0, 1}, {0, 2}, {1, 2}}) {
    const oracle::Mat pair = oracle::partial_trace(w3().matrix(), {2, 2, 2}, keep);
    CHECK(oracle::concurrence(pair) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(concurrence(reduce(w3(), keep)) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("random sampling is deterministic and valid") {
  CHECK(random_pure(2, std::uint64_t{42}) == random_pure(2, std::uint64_t{42}));
  CHECK(random_pure(3, std::uint64_t{42}) != random_pure(3, std::uint64_t{43}));
  CHECK_NOTHROW(random_density(4, 4, std::uint64_t{7}));
  CHECK(max_abs(random_density(4, 2, std::uint64_t{7}).matrix() -
                random_density(4, 2, std::uint64_t{7}).matrix()) == 0.0);
  const auto r1 = random_density(4, 1, std::uint64_t{8});
  CHECK(is_pure(r1));

  Rng rng(22);
  const auto u = random_unitary(4, rng);
  CHECK(max_abs(u.adjoint() * u - identity(4)) < 1e-12);

  CHECK(substream_seed(9, 0) == 9);
  CHECK(substream_seed(9, 3) == (9 ^ (kGoldenGamma * 3)));
  Rng a = substream(9, 3), b = substream(9, 3);
  CHECK(a() == b());
}

// Hilbert-Schmidt qubit states are uniform on the Bloch ball, so the mean
// purity is (1 + 3/5) / 2 = 0.8.
TEST_CASE("mean purity of random qubit density matrices") {
  Rng rng(23);
  double acc = 0.0;
  const int samples = 1000;
  for (int i = 0; i < samples; ++i) acc += purity(random_density(2, 2, rng));
  const double mean = acc / samples;
  const double reference = oracle::bloch_ball_mean_purity(10 * samples, 24);
  CHECK(std::abs(mean - reference) < 0.02);
  CHECK(std::abs(mean - 0.8) < 0.02);
}

TEST_CASE("pure_vector and reduce") {
  const auto g = ghz(3);
  const auto psi = pure_vector(g);
  CHECK(std::abs(std::abs(psi(0)) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK_THROWS_AS(pure_vector(standard_state("maximally_mixed", {2})), DomainError);
  CHECK(reduce(g, {2}).dims() == Dims{2});
  CHECK_THROWS_AS(reduce(g, {3}), DimensionError);
}

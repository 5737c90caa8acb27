#include <doctest.h>

#include <cmath>

#include "cohere/channels.hpp"
#include "cohere/measures.hpp"
#include "oracles.hpp"

using namespace cohere;

namespace {

DensityMatrix noisy_qubit(double alpha, double p) {
  StateVector psi(2);
  psi << alpha, std::sqrt(1.0 - alpha * alpha);
  return depolarize(from_pure(psi, {2}), p);
}

DensityMatrix noisy_mcs(double alpha, double p) {
  StateVector psi(2);
  psi << alpha, std::sqrt(1.0 - alpha * alpha);
  return depolarize(mcs_from_density(from_pure(psi, {2}), 3), p);
}

DensityMatrix werner(double p) {
  const ComplexMatrix m = p * bell_phi_plus().matrix() + (1.0 - p) * identity(4) / 4.0;
  return validate_density(m, {2, 2});
}

std::vector<cplx> as_vector(const CoherentAmplitudes& a) {
  std::vector<cplx> out;
  for (Eigen::Index i = 0; i < a.vector().size(); ++i) out.push_back(a.vector()(i));
  return out;
}

}  // namespace

TEST_CASE("bipartitions") {
  const auto cut = Bipartition::parse("A|BC", 3);
  CHECK(cut.left() == std::vector<std::size_t>{0});
  CHECK(cut.right() == std::vector<std::size_t>{1, 2});
  CHECK(Bipartition::parse("0|1,2", 3) == cut);
  CHECK(cut.to_string() == "A|BC");
  CHECK_THROWS_AS(Bipartition::parse("A|B", 3), DimensionError);
  CHECK_THROWS_AS(Bipartition::parse("ABC|", 3), DimensionError);
  CHECK_THROWS_AS(Bipartition::parse("AB", 3), DimensionError);
  CHECK(all_bipartitions(3).size() == 3);
  CHECK(all_bipartitions(4).size() == 7);
}

TEST_CASE("make_result clamps negatives") {
  const auto tiny = make_result(-1e-12, MeasureKind::Exact, "x");
  CHECK(tiny.value == 0.0);
  CHECK(tiny.warning.empty());
  const auto big = make_result(-1e-6, MeasureKind::Exact, "x");
  CHECK(big.value == 0.0);
  CHECK_FALSE(big.warning.empty());
  CHECK(parse_measure_kind(to_string(MeasureKind::HeuristicUpperBound)) ==
        MeasureKind::HeuristicUpperBound);
}

TEST_CASE("coherence measures") {
  CHECK(c_d(maximally_coherent(2)).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c_d(dephase(maximally_coherent(3))).value == doctest::Approx(0.0));
  CHECK(c_d(noisy_qubit(1.0 / std::sqrt(2.0), 0.2)).value == doctest::Approx(0.531004).epsilon(1e-6));
  CHECK(c_d(noisy_qubit(1.0 / std::sqrt(2.0), 0.2)).value ==
        doctest::Approx(1.0 - oracle::h2(0.1)).epsilon(1e-12));

  CHECK(c_f(maximally_coherent(2)).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c_f(basis_state(2, 1)).value == 0.0);
  const auto cf = c_f(noisy_qubit(1.0 / std::sqrt(2.0), 0.2));
  CHECK(cf.is_exact());
  CHECK(cf.value == doctest::Approx(0.721928).epsilon(1e-6));

  Rng rng(41);
  for (int i = 0; i < 20; ++i) {
    for (std::size_t d : {2, 3, 4}) {
      const auto rho = random_density(d, 2, rng);
      CHECK(std::abs(c_d(rho).value - oracle::c_d(rho.matrix())) < 1e-9);
    }
    const auto q = random_density(2, 2, rng);
    CHECK(std::abs(c_f(q).value - oracle::c_f_qubit(q.matrix())) < 1e-12);
  }
}

TEST_CASE("c_d vanishes exactly on incoherent states") {
  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    const auto rho = random_density(3, 3, rng);
    const bool incoherent = max_abs(dephase(rho).matrix() - rho.matrix()) < 1e-9;
    CHECK((c_d(rho).value < 1e-9) == incoherent);
    CHECK(c_d(dephase(rho)).value < 1e-9);
  }
}

TEST_CASE("convex-roof search agrees with closed forms") {
  Rng rng(43);
  ConvexRoofOptions opts;
  opts.restarts = 40;
  const PureStateCost dephased_entropy = [](const StateVector& psi) {
    std::vector<double> p;
    for (Eigen::Index i = 0; i < psi.size(); ++i) p.push_back(std::norm(psi(i)));
    return oracle::shannon(p);
  };
  for (int i = 0; i < 3; ++i) {
    const auto rho = random_density(2, 2, rng);
    const double closed = oracle::c_f_qubit(rho.matrix());
    const double found = convex_roof_search(rho, dephased_entropy, opts);
    CHECK(found >= closed - 1e-9);
    CHECK(found - closed < 1e-3);
  }

  const PureStateCost entanglement = [](const StateVector& psi) {
    return oracle::reduced_entropy(psi, {2, 2}, {0});
  };
  for (double p : {0.5, 0.8}) {
    const auto rho = werner(p);
    const double wootters = oracle::e_f_from_concurrence(oracle::concurrence(rho.matrix()));
    const double found = convex_roof_search(rho, entanglement, ConvexRoofOptions{});
    CHECK(found >= wootters - 1e-9);
    CHECK(found - wootters < 1e-3);
  }

  // Mixed qutrits only get a heuristic bound, which must stay above C_d.
  const auto q3 = random_density(3, 2, rng);
  const auto h = c_f(q3, opts);
  CHECK(h.kind == MeasureKind::HeuristicUpperBound);
  CHECK(h.value >= c_d(q3).value - 1e-9);
}

TEST_CASE("concurrence and entanglement of formation") {
  CHECK(concurrence(bell_phi_plus()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence(dephase(bell_phi_plus())) == doctest::Approx(0.0));
  for (double p : {0.2, 1.0 / 3.0, 0.6, 0.9}) {
    CHECK(concurrence(werner(p)) == doctest::Approx(std::max(0.0, (3.0 * p - 1.0) / 2.0)).epsilon(1e-10));
  }
  Rng rng(44);
  for (int i = 0; i < 20; ++i) {
    const auto rho = random_density(4, 3, rng);
    const auto r = validate_density(rho.matrix(), {2, 2});
    CHECK(std::abs(concurrence(r) - oracle::concurrence(r.matrix())) < 1e-9);
    const auto cut = Bipartition::parse("A|B", 2);
    const auto ef = e_f(r, cut);
    CHECK(ef.is_exact());
    CHECK(std::abs(ef.value - oracle::e_f_from_concurrence(oracle::concurrence(r.matrix()))) < 1e-9);
    CHECK(e_f_lower_bound(r, cut) <= ef.value + 1e-9);
  }
  CHECK_THROWS_AS(concurrence(maximally_coherent(4)), DimensionError);

  const auto ab = Bipartition::parse("A|B", 2);
  CHECK(e_f(bell_phi_plus(), ab).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e_f(dephase(bell_phi_plus()), ab).value == doctest::Approx(0.0));

  const auto mc = mcs_from_amplitudes(CoherentAmplitudes({0.8, 0.6}), 3);
  for (const auto& cut : all_bipartitions(3)) {
    const auto r = e_f(mc, cut);
    CHECK(r.is_exact());
    CHECK(r.value == doctest::Approx(0.942683).epsilon(1e-6));
    CHECK(r.value == doctest::Approx(oracle::h2(0.64)).epsilon(1e-12));
  }
}

TEST_CASE("distillable entanglement and log-negativity") {
  const auto ghz3 = ghz(3);
  const auto e = e_d(ghz3, Bipartition::parse("A|BC", 3));
  CHECK(e.is_exact());
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));

  const auto ppt = e_d(dephase(bell_phi_plus()), Bipartition::parse("A|B", 2));
  CHECK(ppt.value == doctest::Approx(0.0));

  const auto noisy = noisy_mcs(1.0 / std::sqrt(2.0), 0.1);
  const auto cut = Bipartition::parse("A|BC", 3);
  const auto ub = e_d(noisy, cut);
  CHECK(ub.kind == MeasureKind::UpperBound);
  CHECK(ub.value == doctest::Approx(0.906891).epsilon(1e-6));
  const double lam = oracle::trace_norm(oracle::partial_transpose(noisy.matrix(), {2, 2, 2}, 0));
  CHECK(ub.value == doctest::Approx(std::log2(lam)).epsilon(1e-10));

  CHECK(log_negativity(bell_phi_plus(), Bipartition::parse("A|B", 2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(log_negativity(from_pure(kron(random_pure(2, std::uint64_t{1}), random_pure(2, std::uint64_t{2})), {2, 2}),
                       Bipartition::parse("A|B", 2)) == doctest::Approx(0.0).epsilon(1e-10));
  const auto mc = mcs_from_amplitudes(CoherentAmplitudes({0.8, 0.6}), 2);
  CHECK(log_negativity(mc, Bipartition::parse("A|B", 2)) == doctest::Approx(0.970854).epsilon(1e-6));
  CHECK(log_negativity(mc, Bipartition::parse("A|B", 2)) == doctest::Approx(std::log2(1.96)).epsilon(1e-12));
}

TEST_CASE("partial-transpose lower bound on E_f") {
  const auto ab = Bipartition::parse("A|B", 2);
  CHECK(e_f_lower_bound(bell_phi_plus(), ab) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e_f_lower_bound(dephase(bell_phi_plus()), ab) == doctest::Approx(0.0));

  const auto noisy = noisy_mcs(1.0 / std::sqrt(2.0), 0.2);
  const double lam = std::clamp(
      oracle::trace_norm(oracle::partial_transpose(noisy.matrix(), {2, 2, 2}, 0)), 1.0, 2.0);
  const double root = std::sqrt(lam) + std::sqrt(2.0 - lam);
  CHECK(e_f_lower_bound(noisy, Bipartition::parse("A|BC", 3)) ==
        doctest::Approx(oracle::h2(root * root / 4.0)).epsilon(1e-10));

  const auto big = maximally_coherent(9);
  const auto qutrits = validate_density(big.matrix(), {3, 3});
  CHECK_THROWS_AS(e_f_lower_bound(qutrits, Bipartition::parse("A|B", 2)), DimensionError);
}

TEST_CASE("genuine multipartite entanglement") {
  const auto g = e_gme_pure(pure_vector(ghz(3)), {2, 2, 2}, GmeBase::Formation);
  CHECK(g.result.value == doctest::Approx(1.0).epsilon(1e-12));

  StateVector zero(2);
  zero << 1.0, 0.0;
  StateVector bell(4);
  bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  const auto prod = e_gme_pure(kron(zero, bell), {2, 2, 2}, GmeBase::Distillable);
  CHECK(prod.result.value == doctest::Approx(0.0));
  CHECK(prod.argmin.left() == std::vector<std::size_t>{0});

  const auto amps = std::vector<cplx>{0.8, 0.6};
  const oracle::Vec v = oracle::mcs_vector(amps, 3);
  double oracle_min = 1e9;
  for (const std::vector<std::size_t> keep : {std::vector<std::size_t>{0}, {1}, {2}}) {
    oracle_min = std::min(oracle_min, oracle::reduced_entropy(v, {2, 2, 2}, keep));
  }
  CHECK(e_gme_pure(v, {2, 2, 2}, GmeBase::Formation).result.value == doctest::Approx(oracle_min).epsilon(1e-10));
  CHECK(oracle_min == doctest::Approx(0.942683).epsilon(1e-6));

  StateVector unnormalized = v * 2.0;
  CHECK_THROWS_AS(e_gme_pure(unnormalized, {2, 2, 2}, GmeBase::Formation), NormalizationError);

  CHECK(e_r_m_mcs(ghz(3)).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e_f_gme_mcs(ghz(3)).value == doctest::Approx(1.0).epsilon(1e-12));
  const auto product = mcs_from_amplitudes(CoherentAmplitudes({1.0, 0.0}), 3);
  CHECK(e_r_m_mcs(product).value == 0.0);
  CHECK(e_f_gme_mcs(product).value == 0.0);
  const auto mc = mcs_from_amplitudes(CoherentAmplitudes({0.8, 0.6}), 3);
  CHECK(e_r_m_mcs(mc).value == doctest::Approx(oracle::h2(0.64)).epsilon(1e-12));
  // Pure amplitude state: C_f = S(Delta(psi)) = h(0.64), matching the
  // closed form h((1 + sqrt(1 - 4 |0.48|^2)) / 2).
  CHECK(e_f_gme_mcs(mc).value ==
        doctest::Approx(oracle::h2((1.0 + std::sqrt(1.0 - 4.0 * 0.48 * 0.48)) / 2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(e_r_m_mcs(w3()), NotMCSError);
  CHECK_THROWS_AS(e_f_gme_mcs(w3()), NotMCSError);
}

TEST_CASE("MCS saturation identities") {
  Rng rng(45);
  for (std::size_t d = 2; d <= 3; ++d) {
    for (int i = 0; i < 5; ++i) {
      const auto amps = random_coherent_amplitudes(d, rng);
      const auto single = from_pure(amps.vector(), {d});
      for (std::size_t parties = 2; parties <= 3; ++parties) {
        const auto mc = mcs_from_amplitudes(amps, parties);
        const oracle::Mat m = oracle::mcs_vector(as_vector(amps), parties) *
                              oracle::mcs_vector(as_vector(amps), parties).adjoint();
        const double cd = oracle::c_d(m);
        CHECK(std::abs(c_d(mc).value - oracle::c_d(single.matrix())) < 1e-9);
        CHECK(std::abs(c_d(mc).value - cd) < 1e-9);
        for (const auto& cut : all_bipartitions(parties)) {
          const auto ed = e_d(mc, cut);
          const auto ef = e_f(mc, cut);
          CHECK(ed.is_exact());
          CHECK(ef.is_exact());
          CHECK(std::abs(ed.value - cd) < 1e-9);
          CHECK(std::abs(ef.value - c_f(single).value) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("quantum-incoherent relative entropy") {
  CHECK(qi_relative_entropy(bell_phi_plus(), 0).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(qi_relative_entropy(ghz(3), 0).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(qi_relative_entropy(dephase(ghz(3)), 0).value == doctest::Approx(0.0));
  CHECK(qi_relative_entropy(ghz(3), 0).kind == MeasureKind::ClosedForm);

  // |+>|0> is product, so the QI relative entropy is the coherence of |+>.
  StateVector plus_zero(4);
  plus_zero << 1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0), 0.0;
  CHECK(qi_relative_entropy(from_pure(plus_zero, {2, 2}), 0).value ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Direct minimization over QI states on two qubits.
  const double bell_search = oracle::qi_relative_entropy_search(bell_phi_plus().matrix(), 7);
  CHECK(std::abs(bell_search - 1.0) < 1e-3);
  Rng rng(46);
  for (int i = 0; i < 3; ++i) {
    const auto rho = validate_density(random_density(4, 2, rng).matrix(), {2, 2});
    const double closed = qi_relative_entropy(rho, 0).value;
    const double search = oracle::qi_relative_entropy_search(rho.matrix(), 100 + static_cast<std::uint64_t>(i));
    CHECK(search >= closed - 1e-9);
    CHECK(std::abs(search - closed) < 1e-3);
  }

  for (std::size_t d = 2; d <= 3; ++d) {
    const auto mc = mcs_from_amplitudes(random_coherent_amplitudes(d, rng), 3);
    CHECK(qi_relative_entropy(mc, 0).value >= c_d(reduce(mc, {0})).value - 1e-9);
  }
}

TEST_CASE("monogamy indicators") {
  const auto tm = tau_med(ghz(3));
  const auto tf = tau_mef(ghz(3));
  CHECK(tm.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tf.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tau_med(validate_density(basis_state(8, 0).matrix(), {2, 2, 2})).value == doctest::Approx(0.0));
  CHECK(tau_mef(validate_density(basis_state(8, 0).matrix(), {2, 2, 2})).value == doctest::Approx(0.0));

  const auto noisy = noisy_mcs(1.0 / std::sqrt(2.0), 0.2);
  const auto ub = tau_med_ub(noisy);
  CHECK(ub.value == doctest::Approx(0.807355).epsilon(1e-6));
  CHECK(ub.value == doctest::Approx(std::log2(1.75)).epsilon(1e-10));
  CHECK(ub.kind == MeasureKind::UpperBound);
  CHECK(tau_mef_lb(noisy).kind == MeasureKind::LowerBound);
  CHECK_THROWS_AS(tau_med(maximally_coherent(3)), DimensionError);

  Rng rng(47);
  const auto a_bc = Bipartition::parse("A|BC", 3);
  for (int i = 0; i < 50; ++i) {
    const auto psi = random_pure(8, rng);
    const auto rho = from_pure(psi, {2, 2, 2});
    const double whole = oracle::reduced_entropy(psi, {2, 2, 2}, {0});
    const oracle::Mat rho_m = psi * psi.adjoint();
    const double ef_ab = oracle::e_f_from_concurrence(oracle::concurrence(oracle::partial_trace(rho_m, {2, 2, 2}, {0, 1})));
    const double ef_ac = oracle::e_f_from_concurrence(oracle::concurrence(oracle::partial_trace(rho_m, {2, 2, 2}, {0, 2})));
    const double gap_f = whole * whole - ef_ab * ef_ab - ef_ac * ef_ac;
    CHECK(gap_f >= -1e-9);
    CHECK(std::abs(e_f(rho, a_bc).value - whole) < 1e-9);
    const auto mef = tau_mef(rho);
    CHECK(std::abs(mef.value - std::sqrt(std::max(0.0, gap_f))) < 1e-5);
  }
}

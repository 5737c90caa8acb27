#include "cohere/protocols.hpp"

#include <cmath>

namespace cohere {

Conversion convert(const DensityMatrix& rho_a, std::size_t n_ancillas,
                   const ConvexRoofOptions& options) {
  if (rho_a.parties() != 1) throw DimensionError("convert expects a single-party input");
  if (n_ancillas == 0) throw DimensionError("convert needs at least one ancilla");
  const std::size_t d = rho_a.dim();
  const std::size_t n_total = n_ancillas + 1;

  ComplexMatrix ancilla = ComplexMatrix::Zero(1, 1);
  ancilla(0, 0) = 1.0;
  for (std::size_t k = 0; k < n_ancillas; ++k) {
    ComplexMatrix zero = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    zero(0, 0) = 1.0;
    ancilla = kron(ancilla, zero);
  }
  const auto joint = validate_density(kron(rho_a.matrix(), ancilla), Dims(n_total, d));
  auto out = apply_unitary(u_mcn(d, n_ancillas), joint);

  ConversionReport report;
  report.c_d = c_d(rho_a);
  report.c_f = c_f(rho_a, options);
  for (const auto& cut : all_bipartitions(n_total)) {
    CutMeasures cm{cut, e_d(out, cut), e_f(out, cut, options), 0.0, 0.0};
    cm.residual_d = std::abs(cm.e_d.value - report.c_d.value);
    cm.residual_f = std::abs(cm.e_f.value - report.c_f.value);
    report.max_residual = std::max({report.max_residual, cm.residual_d, cm.residual_f});
    report.cuts.push_back(std::move(cm));
  }
  return Conversion{std::move(out), std::move(report)};
}

namespace {

void check_parties(const DensityMatrix& rho, std::size_t measured, std::size_t correction) {
  if (measured >= rho.parties() || correction >= rho.parties()) {
    throw DimensionError("LICC party index out of range");
  }
  if (measured == correction) throw DimensionError("measured and correction parties must differ");
}

struct Branch {
  ComplexMatrix unnormalized;
  double probability;
};

Branch branch(const DensityMatrix& rho, std::size_t measured, std::size_t correction,
              const MeasurementInstrument& inst, std::size_t j) {
  const auto& dims = rho.dims();
  const ComplexMatrix k = embed(inst.kraus.operators()[j], dims, measured);
  const ComplexMatrix u = embed(inst.corrections[j], dims, correction);
  const ComplexMatrix op = u * k;
  ComplexMatrix out = op * rho.matrix() * op.adjoint();
  return Branch{out, out.trace().real()};
}

LiccOutcome finish(const DensityMatrix& rho, std::size_t measured, Branch b, std::size_t j) {
  b.unnormalized /= b.probability;
  b.unnormalized = (b.unnormalized + b.unnormalized.adjoint().eval()) / 2.0;
  std::vector<std::size_t> keep;
  Dims kept;
  for (std::size_t k = 0; k < rho.parties(); ++k) {
    if (k == measured) continue;
    keep.push_back(k);
    kept.push_back(rho.dims()[k]);
  }
  auto reduced = partial_trace(b.unnormalized, rho.dims(), keep);
  return LiccOutcome{validate_density(std::move(reduced), std::move(kept)), j, b.probability};
}

MeasurementInstrument instrument_for(const DensityMatrix& rho, std::size_t measured) {
  return licc_instrument(rho.dims()[measured]);
}

}  // namespace

LiccOutcome licc_step(const DensityMatrix& rho, std::size_t measured, std::size_t correction,
                      std::size_t outcome) {
  check_parties(rho, measured, correction);
  if (!is_mcs_form(rho)) throw NotMCSError("LICC step expects a maximally correlated state");
  const auto inst = instrument_for(rho, measured);
  if (outcome >= inst.corrections.size()) throw DomainError("outcome index out of range");
  auto b = branch(rho, measured, correction, inst, outcome);
  if (b.probability <= 1e-15) throw DomainError("forced outcome has zero probability");
  return finish(rho, measured, std::move(b), outcome);
}

LiccOutcome licc_step(const DensityMatrix& rho, std::size_t measured, std::size_t correction,
                      Rng& rng) {
  check_parties(rho, measured, correction);
  if (!is_mcs_form(rho)) throw NotMCSError("LICC step expects a maximally correlated state");
  const auto inst = instrument_for(rho, measured);
  std::vector<Branch> branches;
  for (std::size_t j = 0; j < inst.corrections.size(); ++j) {
    branches.push_back(branch(rho, measured, correction, inst, j));
  }
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::size_t pick = branches.size() - 1;
  for (std::size_t j = 0; j < branches.size(); ++j) {
    acc += branches[j].probability;
    if (u < acc && branches[j].probability > 1e-15) {
      pick = j;
      break;
    }
  }
  while (branches[pick].probability <= 1e-15 && pick > 0) --pick;
  return finish(rho, measured, std::move(branches[pick]), pick);
}

KrausChannel licc_channel(const Dims& dims, std::size_t measured, std::size_t correction,
                          const MeasurementInstrument& instrument) {
  if (measured >= dims.size() || correction >= dims.size()) {
    throw DimensionError("LICC party index out of range");
  }
  if (measured == correction) throw DimensionError("measured and correction parties must differ");
  std::vector<ComplexMatrix> ops;
  for (std::size_t j = 0; j < instrument.corrections.size(); ++j) {
    ops.push_back(embed(instrument.corrections[j], dims, correction) *
                  embed(instrument.kraus.operators()[j], dims, measured));
  }
  return KrausChannel(std::move(ops), dims);
}

namespace {

void log_coherence(ProtocolStep& step, const ConvexRoofOptions& options) {
  step.measures.emplace("C_d", c_d(step.state));
  step.measures.emplace("C_f", c_f(step.state, options));
}

bool all_qubits(const DensityMatrix& rho) {
  for (auto d : rho.dims()) {
    if (d != 2) return false;
  }
  return true;
}

}  // namespace

ProtocolTrace cyclic(const DensityMatrix& rho_a, std::uint64_t seed,
                     const ConvexRoofOptions& options) {
  if (rho_a.parties() != 1) throw DimensionError("cyclic expects a single-party input");
  ProtocolTrace trace;
  trace.seed = seed;
  Rng rng(seed);

  ProtocolStep input{"input", rho_a, std::nullopt, std::nullopt, {}};
  log_coherence(input, options);
  trace.steps.push_back(input);

  auto conv = convert(rho_a, 2, options);
  ProtocolStep mcs{"convert", conv.state, std::nullopt, std::nullopt, {}};
  log_coherence(mcs, options);
  mcs.measures.emplace("E_r^M", e_r_m_mcs(mcs.state));
  mcs.measures.emplace("E_f^GME", e_f_gme_mcs(mcs.state));
  const auto cut = one_vs_rest(0, 3);
  mcs.measures.emplace("E_d(A|BC)", e_d(mcs.state, cut));
  mcs.measures.emplace("E_f(A|BC)", e_f(mcs.state, cut, options));
  if (all_qubits(mcs.state)) {
    mcs.measures.emplace("tau_MED", tau_med(mcs.state));
    mcs.measures.emplace("tau_MEF", tau_mef(mcs.state));
  }
  trace.steps.push_back(mcs);

  // Measure C, correct B: entanglement moves to AB.
  auto first = licc_step(mcs.state, 2, 1, rng);
  ProtocolStep pair{"measure C, correct B", first.state, first.outcome, first.probability, {}};
  log_coherence(pair, options);
  const auto pair_cut = one_vs_rest(0, 2);
  pair.measures.emplace("E_d(A|B)", e_d(pair.state, pair_cut));
  pair.measures.emplace("E_f(A|B)", e_f(pair.state, pair_cut, options));
  trace.steps.push_back(pair);

  // Measure B, correct A: coherence restored on A.
  auto second = licc_step(pair.state, 1, 0, rng);
  ProtocolStep restored{"measure B, correct A", second.state, second.outcome,
                        second.probability, {}};
  log_coherence(restored, options);
  trace.steps.push_back(restored);

  const auto& in = trace.steps.front().measures;
  const auto& out = trace.steps.back().measures;
  trace.loss_cd = std::abs(in.at("C_d").value - out.at("C_d").value);
  trace.loss_cf = std::abs(in.at("C_f").value - out.at("C_f").value);
  return trace;
}

}  // namespace cohere

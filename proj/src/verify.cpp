#include "cohere/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cohere/channels.hpp"
#include "cohere/parallel.hpp"
#include "cohere/protocols.hpp"

namespace cohere {

CheckOutcome check_geq(const MeasureResult& big, const MeasureResult& small, double tol) {
  const double margin = small.lower() - big.upper();
  if (margin > tol) return {CheckStatus::Violated, margin};
  if (small.upper() <= big.lower() + tol) return {CheckStatus::Certified, margin};
  return {CheckStatus::Inconclusive, margin};
}

CheckOutcome check_equal(const MeasureResult& a, const MeasureResult& b, double tol) {
  if (!a.is_exact() || !b.is_exact()) {
    // Bounds can still refute equality when the intervals are disjoint.
    const double gap = std::max(a.lower() - b.upper(), b.lower() - a.upper());
    if (gap > tol) return {CheckStatus::Violated, gap};
    return {CheckStatus::Inconclusive, gap};
  }
  const double diff = std::abs(a.value - b.value);
  return {diff > tol ? CheckStatus::Violated : CheckStatus::Certified, diff};
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids{
      "T1", "C1", "T2", "T3", "T4", "T5", "T5-indicators", "UMCN-saturation", "W-exclusion"};
  return ids;
}

namespace {

const std::vector<std::string>& statements() {
  static const std::vector<std::string> text{
      "C_d(rho_A) >= E_d and C_f(rho_A) >= E_f of the channel output across every cut",
      "C_d >= E_d^GME and C_f >= E_f^GME for pure outputs",
      "C_d(rho_A) >= E_r^M and C_f(rho_A) >= E_f^GME of the channel output",
      "C_d(rho_A) >= tau_MED and C_f(rho_A) >= tau_MEF for qubit registers",
      "E_d(cut) <= E_r^M <= C_d and E_f^GME <= E_f(cut) <= C_f, with equality on MCS",
      "MCS entanglement >= C(LICC output) >= C(restored party)",
      "tau_MED(MCS) >= C_d and tau_MEF(MCS) >= C_f of the restored party",
      "U_mcn output saturates every cut, E_r^M, E_f^GME and the indicators",
      "incoherent unitaries on qubit (x) |0..0> never produce W-type support"};
  return text;
}

constexpr double kSupportTolerance = 1e-12;

struct Record {
  std::size_t report;
  std::string check;
  CheckOutcome outcome;
};

struct SampleLog {
  std::vector<Record> records;
};

class Sample {
public:
  Sample(const VerifyConfig& cfg, std::size_t index, const std::vector<bool>& enabled)
      : cfg_(cfg), rng_(substream(cfg.seed, index)), enabled_(enabled) {
    roof_.restarts = 8;
    roof_.refine_steps = 150;
    roof_.seed = substream_seed(cfg.seed, index);
  }

  SampleLog run() {
    const auto rho_a = draw_input();
    if (on(0) || on(1) || on(2) || on(3)) channel_checks(rho_a);
    if (on(7)) saturation_checks(rho_a);
    if (on(4)) mcs_identity_checks();
    if (on(5) || on(6)) licc_checks();
    if (on(8)) w_exclusion_check();
    return std::move(log_);
  }

private:
  bool on(std::size_t report) const { return enabled_[report]; }
  std::size_t parties() const { return cfg_.n + 1; }
  Dims register_dims() const { return Dims(parties(), cfg_.d); }
  bool qubits() const { return cfg_.d == 2; }

  void geq(std::size_t report, const std::string& name, const MeasureResult& big,
           const MeasureResult& small) {
    if (on(report)) log_.records.push_back({report, name, check_geq(big, small, cfg_.tolerance)});
  }
  void eq(std::size_t report, const std::string& name, const MeasureResult& a,
          const MeasureResult& b) {
    if (on(report)) log_.records.push_back({report, name, check_equal(a, b, cfg_.tolerance)});
  }

  // Mixed inputs only for qubits, where C_f has a closed form.
  DensityMatrix draw_input() {
    const bool mixed = qubits() && std::uniform_int_distribution<int>(0, 1)(rng_) == 1;
    if (mixed) return random_density(cfg_.d, cfg_.d, rng_);
    return from_pure(random_pure(cfg_.d, rng_), {cfg_.d});
  }

  MeasureResult cf(const DensityMatrix& rho) {
    if (auto exact = c_f_exact(rho)) return *exact;
    return c_f(rho, roof_);
  }

  // E_f across a cut, or the partial-transpose lower bound, or nothing known.
  MeasureResult ef_interval(const DensityMatrix& rho, const Bipartition& cut) {
    if (auto exact = e_f_exact(rho, cut)) return *exact;
    std::size_t dl = 1, dr = 1;
    for (auto k : cut.left()) dl *= rho.dims()[k];
    for (auto k : cut.right()) dr *= rho.dims()[k];
    if (dl == 2 || dr == 2) {
      return make_result(e_f_lower_bound(rho, cut), MeasureKind::LowerBound, "pt-lower-bound");
    }
    return make_result(0.0, MeasureKind::LowerBound, "trivial");
  }

  MeasureResult erm_interval(const DensityMatrix& rho) {
    if (is_mcs_form(rho)) return e_r_m_mcs(rho);
    // E_r^M dominates the relative entropy of entanglement of every cut,
    // which dominates E_d.
    double lb = 0.0;
    for (const auto& cut : all_bipartitions(rho.parties())) lb = std::max(lb, e_d(rho, cut).lower());
    return make_result(lb, MeasureKind::LowerBound, "max-cut-e_d");
  }

  MeasureResult gme_f_interval(const DensityMatrix& rho) {
    if (is_pure(rho)) return e_gme_pure(pure_vector(rho), rho.dims(), GmeBase::Formation).result;
    if (is_mcs_form(rho)) {
      if (auto exact = c_f_exact(mcs_core(rho))) return *exact;
    }
    return make_result(0.0, MeasureKind::LowerBound, "trivial");
  }

  void channel_checks(const DensityMatrix& rho_a) {
    const std::size_t n_ops = std::uniform_int_distribution<std::size_t>(1, cfg_.max_ops)(rng_);
    const auto channel = random_incoherent_channel(register_dims(), n_ops, rng_);
    ComplexMatrix ancilla = ComplexMatrix::Zero(1, 1);
    ancilla(0, 0) = 1.0;
    for (std::size_t k = 0; k < cfg_.n; ++k) {
      ComplexMatrix zero = ComplexMatrix::Zero(static_cast<Eigen::Index>(cfg_.d),
                                               static_cast<Eigen::Index>(cfg_.d));
      zero(0, 0) = 1.0;
      ancilla = kron(ancilla, zero);
    }
    const auto joint = validate_density(kron(rho_a.matrix(), ancilla), register_dims());
    const auto out = apply_channel(channel, joint);
    const auto cd = c_d(rho_a);
    const auto cf_in = cf(rho_a);

    for (const auto& cut : all_bipartitions(parties())) {
      const auto label = cut.to_string();
      geq(0, "C_d >= E_d " + label, cd, e_d(out, cut));
      geq(0, "C_f >= E_f " + label, cf_in, ef_interval(out, cut));
    }
    if (on(1) && is_pure(out)) {
      const auto psi = pure_vector(out);
      geq(1, "C_d >= E_d^GME", cd, e_gme_pure(psi, out.dims(), GmeBase::Distillable).result);
      geq(1, "C_f >= E_f^GME", cf_in, e_gme_pure(psi, out.dims(), GmeBase::Formation).result);
    }
    geq(2, "C_d >= E_r^M", cd, erm_interval(out));
    geq(2, "C_f >= E_f^GME", cf_in, gme_f_interval(out));
    if (on(3) && qubits()) {
      geq(3, "C_d >= tau_MED", cd, tau_med(out));
      try {
        geq(3, "C_f >= tau_MEF", cf_in, tau_mef(out));
      } catch (const NegativeRadicandError& e) {
        log_.records.push_back({3, "E_f^2 monogamy", {CheckStatus::Violated, -e.radicand()}});
      }
    }
  }

  void saturation_checks(const DensityMatrix& rho_a) {
    const auto conv = convert(rho_a, cfg_.n, roof_);
    const auto& out = conv.state;
    const auto cd = c_d(rho_a);
    const auto cf_in = cf(rho_a);
    for (const auto& cut : all_bipartitions(parties())) {
      const auto label = cut.to_string();
      eq(7, "E_d = C_d " + label, e_d(out, cut), cd);
      eq(7, "E_f = C_f " + label, ef_interval(out, cut), cf_in);
    }
    eq(7, "E_r^M = C_d", e_r_m_mcs(out), cd);
    eq(7, "E_f^GME = C_f", gme_f_interval(out), cf_in);
    if (qubits() && cfg_.n >= 2) {
      eq(7, "tau_MED = C_d", tau_med(out), cd);
      eq(7, "tau_MEF = C_f", tau_mef(out), cf_in);
    }
  }

  void mcs_identity_checks() {
    const auto amps = random_coherent_amplitudes(cfg_.d, rng_);
    const auto mc = mcs_from_amplitudes(amps, parties());
    const auto cd = c_d(mc);
    const auto cf_mc = cf(mc);
    const auto erm = e_r_m_mcs(mc);
    const auto gme = gme_f_interval(mc);
    eq(4, "MCS E_r^M = C_d", erm, cd);
    eq(4, "MCS E_f^GME = C_f", gme, cf_mc);
    for (const auto& cut : all_bipartitions(parties())) {
      const auto label = cut.to_string();
      eq(4, "MCS E_d = C_d " + label, e_d(mc, cut), cd);
      eq(4, "MCS E_f = C_f " + label, ef_interval(mc, cut), cf_mc);
    }

    // Generic pure register: the chains hold as inequalities.
    const auto psi = random_pure(total_dim(register_dims()), rng_);
    const auto rho = from_pure(psi, register_dims());
    const auto cd_psi = c_d(rho);
    const auto cf_psi = cf(rho);
    const auto gme_psi = e_gme_pure(psi, rho.dims(), GmeBase::Formation).result;
    for (const auto& cut : all_bipartitions(parties())) {
      const auto label = cut.to_string();
      const auto ef_cut = ef_interval(rho, cut);
      geq(4, "C_d >= E_d " + label, cd_psi, e_d(rho, cut));
      geq(4, "C_f >= E_f " + label, cf_psi, ef_cut);
      geq(4, "E_f >= E_f^GME " + label, ef_cut, gme_psi);
    }
  }

  PhaseTable random_mub_phases() {
    // Fourier basis with a random diagonal phase; still orthonormal.
    auto phases = fourier_phases(cfg_.d);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> offset(cfg_.d);
    for (auto& t : offset) t = angle(rng_);
    for (auto& row : phases) {
      for (std::size_t k = 0; k < cfg_.d; ++k) row[k] += offset[k];
    }
    return phases;
  }

  void licc_checks() {
    DensityMatrix mc = [&] {
      if (qubits() && std::uniform_int_distribution<int>(0, 1)(rng_) == 1) {
        return mcs_from_density(random_density(cfg_.d, cfg_.d, rng_), parties());
      }
      return mcs_from_amplitudes(random_coherent_amplitudes(cfg_.d, rng_), parties());
    }();
    const auto cd_mc = c_d(mc);
    const auto cf_mc = cf(mc);
    const auto ed_mc = e_d(mc, one_vs_rest(0, parties()));

    const std::size_t max_depth = std::min<std::size_t>(3, parties() - 1);
    const std::size_t depth = std::uniform_int_distribution<std::size_t>(1, max_depth)(rng_);
    std::uniform_int_distribution<std::size_t> party(0, parties() - 1);
    DensityMatrix state = mc;
    std::size_t restored = 0;
    for (std::size_t step = 0; step < depth; ++step) {
      const std::size_t measured = party(rng_);
      std::size_t correction = party(rng_);
      while (correction == measured) correction = party(rng_);
      const auto inst = licc_instrument(cfg_.d, random_mub_phases());
      state = apply_channel(licc_channel(state.dims(), measured, correction, inst), state);
      restored = correction;
    }
    if (std::uniform_int_distribution<int>(0, 1)(rng_) == 1) {
      const std::size_t k = party(rng_);
      const ComplexMatrix u = embed(random_incoherent_unitary(cfg_.d, rng_), state.dims(), k);
      state = apply_unitary(u, state);
    }
    const auto reduced = reduce(state, {restored});
    const auto cd_out = c_d(state);
    const auto cf_out = cf(state);
    const auto cd_r = c_d(reduced);
    const auto cf_r = cf(reduced);

    geq(5, "C_d(MCS) >= C_d(LICC)", cd_mc, cd_out);
    geq(5, "E_d(MCS) >= C_d(LICC)", ed_mc, cd_out);
    geq(5, "C_d(LICC) >= C_d(restored)", cd_out, cd_r);
    geq(5, "C_f(MCS) >= C_f(LICC)", cf_mc, cf_out);
    geq(5, "C_f(LICC) >= C_f(restored)", cf_out, cf_r);
    if (on(6) && qubits() && parties() >= 3) {
      geq(6, "tau_MED(MCS) >= C_d(restored)", tau_med(mc), cd_r);
      geq(6, "tau_MEF(MCS) >= C_f(restored)", tau_mef(mc), cf_r);
    }
  }

  void w_exclusion_check() {
    const auto psi_a = random_pure(cfg_.d, rng_);
    StateVector joint = StateVector::Zero(static_cast<Eigen::Index>(total_dim(register_dims())));
    // |psi_A>|0...0>: amplitude a_i sits at index i * d^n.
    const std::size_t stride = total_dim(register_dims()) / cfg_.d;
    for (std::size_t i = 0; i < cfg_.d; ++i) {
      joint(static_cast<Eigen::Index>(i * stride)) = psi_a(static_cast<Eigen::Index>(i));
    }
    const auto u = random_incoherent_unitary(total_dim(register_dims()), rng_);
    const StateVector out = u * joint;
    std::size_t support = 0;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      if (std::abs(out(i)) > kSupportTolerance) ++support;
    }
    const double margin = static_cast<double>(support) - static_cast<double>(cfg_.d);
    log_.records.push_back({8, "support <= d",
                            {margin > 0 ? CheckStatus::Violated : CheckStatus::Certified, margin}});
  }

  const VerifyConfig& cfg_;
  Rng rng_;
  const std::vector<bool>& enabled_;
  ConvexRoofOptions roof_;
  SampleLog log_;
};

}  // namespace

std::vector<TheoremReport> verify_theorems(const VerifyConfig& config) {
  if (config.d < 2 || config.d > 4) throw ConfigError("verify needs 2 <= d <= 4");
  if (config.n < 1 || config.n > 3) throw ConfigError("verify needs 1 <= n <= 3 ancillas");
  if (config.samples == 0) throw ConfigError("verify needs at least one sample");
  if (config.max_ops == 0) throw ConfigError("max_ops must be positive");
  if (!(config.tolerance >= 0.0)) throw ConfigError("tolerance must be nonnegative");

  const auto& ids = theorem_ids();
  std::vector<bool> enabled(ids.size(), config.only.empty());
  for (const auto& name : config.only) {
    const auto it = std::find(ids.begin(), ids.end(), name);
    if (it == ids.end()) throw ConfigError("unknown theorem id: " + name);
    enabled[static_cast<std::size_t>(it - ids.begin())] = true;
  }

  std::vector<SampleLog> logs(config.samples);
  parallel_for(config.samples, config.threads, [&](std::size_t i) {
    logs[i] = Sample(config, i, enabled).run();
  });

  std::vector<TheoremReport> reports;
  std::vector<std::size_t> slot(ids.size(), ids.size());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (!enabled[r]) continue;
    slot[r] = reports.size();
    TheoremReport report;
    report.id = ids[r];
    report.statement = statements()[r];
    report.samples = config.samples;
    reports.push_back(std::move(report));
  }
  for (std::size_t i = 0; i < logs.size(); ++i) {
    for (const auto& rec : logs[i].records) {
      auto& report = reports[slot[rec.report]];
      ++report.checks;
      report.max_margin = std::max(report.max_margin, rec.outcome.margin);
      switch (rec.outcome.status) {
        case CheckStatus::Certified: ++report.certified; break;
        case CheckStatus::Inconclusive: ++report.inconclusive; break;
        case CheckStatus::Violated:
          report.violations.push_back({substream_seed(config.seed, i), i, rec.check,
                                       rec.outcome.margin});
          break;
      }
    }
  }
  return reports;
}

}  // namespace cohere

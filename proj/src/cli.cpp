#include "cohere/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "cohere/dynamics.hpp"
#include "cohere/io.hpp"
#include "cohere/multilevel.hpp"
#include "cohere/protocols.hpp"
#include "cohere/verify.hpp"

namespace cohere {

namespace {

constexpr double kDefaultTolerance = 1e-9;

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 1;
  double tolerance = kDefaultTolerance;
  std::string tolerance_source = "default";
  std::size_t samples = 100;
  std::string format;
  std::string out;

  std::string state;
  std::string named;
  std::string amps;
  std::size_t ancillas = 2;
  std::optional<std::size_t> measure;
  std::optional<std::size_t> correct;
  std::optional<std::size_t> outcome;
  std::vector<std::string> cuts;
  std::size_t d = 2;
  std::size_t n = 2;
  std::size_t max_ops = 4;
  std::vector<std::string> theorems;
  std::size_t threads = 0;
  std::size_t alpha_steps = 51;
  std::size_t p_steps = 51;
};

struct UsageError : Error {
  using Error::Error;
};

Json config_json(const RunConfig& c) {
  Json j{{"subcommand", c.subcommand},
         {"seed", c.seed},
         {"tolerance", c.tolerance},
         {"tolerance_source", c.tolerance_source},
         {"format", c.format},
         {"out", c.out.empty() ? Json(nullptr) : Json(c.out)},
         {"rng", kRngName}};
  auto input = [&] {
    j["state"] = c.state.empty() ? Json(nullptr) : Json(c.state);
    j["named"] = c.named.empty() ? Json(nullptr) : Json(c.named);
    j["amps"] = c.amps.empty() ? Json(nullptr) : Json(c.amps);
  };
  const auto& s = c.subcommand;
  if (s == "convert") {
    input();
    j["ancillas"] = c.ancillas;
  } else if (s == "licc") {
    input();
    j["measure"] = c.measure ? Json(*c.measure) : Json(nullptr);
    j["correct"] = c.correct ? Json(*c.correct) : Json(nullptr);
    j["outcome"] = c.outcome ? Json(*c.outcome) : Json(nullptr);
  } else if (s == "cyclic" || s == "multilevel") {
    input();
  } else if (s == "measures") {
    input();
    j["cuts"] = c.cuts;
  } else if (s == "verify") {
    j["samples"] = c.samples;
    j["d"] = c.d;
    j["n"] = c.n;
    j["max_ops"] = c.max_ops;
    j["theorems"] = c.theorems;
    j["threads"] = c.threads;
  } else if (s == "dynamics") {
    j["alpha_steps"] = c.alpha_steps;
    j["p_steps"] = c.p_steps;
    j["threads"] = c.threads;
  }
  return j;
}

std::vector<std::size_t> parse_params(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(static_cast<std::size_t>(std::stoul(tok)));
  }
  return out;
}

DensityMatrix load_state(const RunConfig& c) {
  const int given = !c.state.empty() + !c.named.empty() + !c.amps.empty();
  if (given != 1) throw UsageError("give exactly one of --state, --named, --amps");
  if (!c.state.empty()) {
    std::ifstream in(c.state);
    if (!in) throw UsageError("cannot open state file " + c.state);
    return state_from_json(Json::parse(in));
  }
  if (!c.named.empty()) {
    const auto colon = c.named.find(':');
    if (colon == std::string::npos) return standard_state(c.named);
    return standard_state(c.named.substr(0, colon), parse_params(c.named.substr(colon + 1)));
  }
  Json list = Json::array();
  std::stringstream ss(c.amps);
  std::string tok;
  while (std::getline(ss, tok, ',')) list.push_back(std::stod(tok));
  return state_from_json(list);
}

struct Output {
  Json result;
  int exit = kExitOk;
};

Output cmd_convert(const RunConfig& c) {
  const auto rho = load_state(c);
  auto conv = convert(rho, c.ancillas);
  Output o;
  o.result = Json{{"state", state_to_json(conv.state)}, {"report", to_json(conv.report)}};
  // Only equality-kind pairs can witness a saturation failure.
  for (const auto& cut : conv.report.cuts) {
    const bool bad_d = conv.report.c_d.is_exact() && cut.e_d.is_exact() &&
                       cut.residual_d > c.tolerance;
    const bool bad_f = conv.report.c_f.is_exact() && cut.e_f.is_exact() &&
                       cut.residual_f > c.tolerance;
    if (bad_d || bad_f) o.exit = kExitFinding;
  }
  return o;
}

Output cmd_licc(const RunConfig& c) {
  const auto rho = load_state(c);
  if (rho.parties() < 2) throw UsageError("licc needs a state with at least two parties");
  const std::size_t measured = c.measure.value_or(rho.parties() - 1);
  const std::size_t correction = c.correct.value_or(measured == 0 ? 1 : measured - 1);
  Rng rng(c.seed);
  const auto step = c.outcome ? licc_step(rho, measured, correction, *c.outcome)
                              : licc_step(rho, measured, correction, rng);
  // The correlated block must survive unchanged.
  const auto before = mcs_core(rho);
  double residual = 0.0;
  if (step.state.parties() >= 2) {
    residual = max_abs(mcs_core(step.state).matrix() - before.matrix());
  } else {
    residual = max_abs(step.state.matrix() - before.matrix());
  }
  Output o;
  o.result = Json{{"measured", measured},
                  {"correction", correction},
                  {"outcome", step.outcome},
                  {"probability", step.probability},
                  {"state", state_to_json(step.state)},
                  {"C_d_before", to_json(c_d(rho))},
                  {"C_d_after", to_json(c_d(step.state))},
                  {"element_residual", residual}};
  if (residual > c.tolerance) o.exit = kExitFinding;
  return o;
}

Output cmd_cyclic(const RunConfig& c) {
  const auto trace = cyclic(load_state(c), c.seed);
  Output o;
  o.result = to_json(trace);
  if (trace.loss_cd > c.tolerance || trace.loss_cf > c.tolerance) o.exit = kExitFinding;
  return o;
}

Output cmd_measures(const RunConfig& c) {
  const auto rho = load_state(c);
  Output o;
  Json r{{"dims", rho.dims()}, {"C_d", to_json(c_d(rho))}, {"C_f", to_json(c_f(rho))}};
  if (rho.parties() >= 2) {
    std::vector<Bipartition> cuts;
    if (c.cuts.empty()) {
      cuts = all_bipartitions(rho.parties());
    } else {
      for (const auto& text : c.cuts) cuts.push_back(Bipartition::parse(text, rho.parties()));
    }
    Json per_cut = Json::array();
    for (const auto& cut : cuts) {
      per_cut.push_back(Json{{"cut", cut.to_string()},
                             {"E_d", to_json(e_d(rho, cut))},
                             {"E_f", to_json(e_f(rho, cut))},
                             {"log_negativity", log_negativity(rho, cut)}});
    }
    r["cuts"] = per_cut;
    r["QI_relative_entropy"] = to_json(qi_relative_entropy(rho, 0));
    if (is_pure(rho)) {
      const auto psi = pure_vector(rho);
      const auto gd = e_gme_pure(psi, rho.dims(), GmeBase::Distillable);
      const auto gf = e_gme_pure(psi, rho.dims(), GmeBase::Formation);
      r["E_d^GME"] = to_json(gd.result);
      r["E_d^GME"]["argmin"] = gd.argmin.to_string();
      r["E_f^GME"] = to_json(gf.result);
      r["E_f^GME"]["argmin"] = gf.argmin.to_string();
    } else if (is_mcs_form(rho)) {
      r["E_f^GME"] = to_json(e_f_gme_mcs(rho));
    }
    if (is_mcs_form(rho)) r["E_r^M"] = to_json(e_r_m_mcs(rho));
    bool qubits = true;
    for (auto d : rho.dims()) qubits = qubits && d == 2;
    if (qubits) {
      r["tau_MED"] = to_json(tau_med(rho));
      try {
        r["tau_MEF"] = to_json(tau_mef(rho));
      } catch (const NegativeRadicandError& e) {
        r["tau_MEF"] = Json{{"error", e.what()}, {"radicand", e.radicand()}};
        o.exit = kExitFinding;
      }
    }
  }
  o.result = std::move(r);
  return o;
}

Output cmd_verify(const RunConfig& c) {
  VerifyConfig v;
  v.samples = c.samples;
  v.d = c.d;
  v.n = c.n;
  v.seed = c.seed;
  v.tolerance = c.tolerance;
  v.max_ops = c.max_ops;
  v.threads = c.threads;
  v.only = c.theorems;
  const auto reports = verify_theorems(v);
  Output o;
  Json list = Json::array();
  std::size_t violations = 0;
  for (const auto& r : reports) {
    list.push_back(to_json(r));
    violations += r.violations.size();
  }
  o.result = Json{{"reports", list}, {"violations", violations}};
  if (violations > 0) o.exit = kExitFinding;
  return o;
}

Output cmd_multilevel(const RunConfig& c) {
  const auto rho = load_state(c);
  const auto psi = pure_vector(rho);
  Output o;
  if (rho.parties() == 1 && rho.dim() == 4) {
    std::vector<cplx> values(psi.data(), psi.data() + psi.size());
    const auto amps = CoherentAmplitudes::normalized(std::move(values));
    const auto obs = observation1(amps);
    const auto mcs = convert(rho, 1).state;
    const auto kraft = kraft_decomposable(pure_vector(mcs));
    o.result = Json{{"observation1", to_json(obs)},
                    {"kraft", to_json(kraft)},
                    {"agree", obs.decomposable == kraft.decomposable}};
    if (obs.decomposable != kraft.decomposable) o.exit = kExitFinding;
  } else {
    o.result = to_json(multilevel_report(psi, rho.dims()));
  }
  return o;
}

std::string cmd_dynamics(const RunConfig& c, int& exit) {
  const auto points = sweep(unit_grid(c.alpha_steps), unit_grid(c.p_steps), c.threads);
  for (const auto& pt : points) {
    if (pt.max_discrepancy() > c.tolerance) exit = kExitFinding;
  }
  if (c.format == "csv") return sweep_csv(points);
  Json list = Json::array();
  for (const auto& pt : points) {
    list.push_back(Json{{"alpha", pt.alpha},
                        {"p", pt.p},
                        {"c_d", pt.c_d},
                        {"c_f", pt.c_f},
                        {"tau_med_ub", pt.tau_med_ub},
                        {"tau_mef_lb", pt.tau_mef_lb},
                        {"zeta", pt.zeta},
                        {"omega", pt.omega},
                        {"omega_num", pt.omega_num},
                        {"c_d_num", pt.c_d_num},
                        {"c_f_num", pt.c_f_num},
                        {"tau_med_ub_num", pt.tau_med_ub_num},
                        {"tau_mef_lb_num", pt.tau_mef_lb_num},
                        {"esd", pt.esd}});
  }
  return list.dump(2);
}

int exit_for(const Error& e) {
  if (dynamic_cast<const NegativeRadicandError*>(&e)) return kExitFinding;
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const NormalizationError*>(&e) ||
      dynamic_cast<const CompletenessError*>(&e) || dynamic_cast<const CompletionError*>(&e)) {
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv(kToleranceEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(tol > 0.0) || !std::isfinite(tol)) {
      err << "error: " << kToleranceEnv << " must be a positive number, got '" << env << "'\n";
      return kExitUsage;
    }
    cfg.tolerance = tol;
    cfg.tolerance_source = "env";
  }

  CLI::App app{"Coherence and multipartite entanglement conversion toolkit", "cohere"};
  app.set_version_flag("--version", std::string("cohere ") + kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(std::string("Environment:\n  ") + kToleranceEnv +
             "  default numerical tolerance (overridden by --tolerance)\n"
             "Exit codes: 0 ok, 1 usage error, 2 violation finding, 3 numerical validation failure");

  auto* tol_opt = app.add_option("--tolerance", cfg.tolerance, "Numerical tolerance")
                      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Base RNG seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Sample count for verify")->capture_default_str();
  app.add_option("--out", cfg.out, "Write output to this file instead of stdout");
  app.add_option("--format", cfg.format, "Output format (json or csv; csv for dynamics only)")
      ->check(CLI::IsMember({"json", "csv"}));

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--state", cfg.state, "State JSON file (density matrix or amplitudes)");
    sub->add_option("--named", cfg.named, "Named state, e.g. plus, ghz:3, max_coherent:4");
    sub->add_option("--amps", cfg.amps, "Comma-separated real amplitudes, normalized on load");
  };

  auto* convert_cmd = app.add_subcommand("convert", "Coherence to MCS via U_mcn with |0> ancillas");
  add_input(convert_cmd);
  convert_cmd->add_option("--ancillas", cfg.ancillas, "Number of ancillas")->capture_default_str();

  auto* licc_cmd = app.add_subcommand("licc", "One LICC transfer step on an MCS");
  add_input(licc_cmd);
  licc_cmd->add_option("--measure", cfg.measure, "Measured party (default: last)");
  licc_cmd->add_option("--correct", cfg.correct, "Correction party (default: measured - 1)");
  licc_cmd->add_option("--outcome", cfg.outcome, "Force this outcome instead of sampling");

  auto* cyclic_cmd = app.add_subcommand("cyclic", "Coherence -> entanglement -> coherence cycle");
  add_input(cyclic_cmd);

  auto* measures_cmd = app.add_subcommand("measures", "Coherence and entanglement measures");
  add_input(measures_cmd);
  measures_cmd->add_option("--cut", cfg.cuts, "Bipartition such as A|BC or 0|1,2 (repeatable)");

  auto* verify_cmd = app.add_subcommand("verify", "Sampled witness checks of the inequalities");
  verify_cmd->add_option("--d", cfg.d, "Local dimension (2-4)")->capture_default_str();
  verify_cmd->add_option("--n", cfg.n, "Ancilla count (1-3)")->capture_default_str();
  verify_cmd->add_option("--max-ops", cfg.max_ops, "Max Kraus operators per random channel")
      ->capture_default_str();
  verify_cmd->add_option("--theorem", cfg.theorems, "Restrict to report id (repeatable)");
  verify_cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

  auto* multilevel_cmd =
      app.add_subcommand("multilevel", "Genuine multi-level entanglement verdicts");
  add_input(multilevel_cmd);

  auto* dynamics_cmd = app.add_subcommand("dynamics", "Depolarizing sweep over (alpha, p)");
  dynamics_cmd->add_option("--alpha-steps", cfg.alpha_steps, "Grid points over alpha in [0,1]")
      ->capture_default_str();
  dynamics_cmd->add_option("--p-steps", cfg.p_steps, "Grid points over p in [0,1]")
      ->capture_default_str();
  dynamics_cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (tol_opt->count() > 0) cfg.tolerance_source = "flag";
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.format.empty()) cfg.format = cfg.subcommand == "dynamics" ? "csv" : "json";
  if (cfg.format == "csv" && cfg.subcommand != "dynamics") {
    err << "error: --format csv is only available for dynamics\n";
    return kExitUsage;
  }

  std::string body;
  int exit = kExitOk;
  try {
    const Json header{{"tool", "cohere"}, {"version", kVersion}, {"config", config_json(cfg)}};
    if (cfg.subcommand == "dynamics") {
      const std::string table = cmd_dynamics(cfg, exit);
      if (cfg.format == "csv") {
        body = std::string("# cohere ") + kVersion + "\n# config: " + header["config"].dump() +
               "\n" + table;
      } else {
        Json doc = header;
        doc["result"] = Json::parse(table);
        body = doc.dump(2) + "\n";
      }
    } else {
      Output o;
      const auto& s = cfg.subcommand;
      if (s == "convert") o = cmd_convert(cfg);
      else if (s == "licc") o = cmd_licc(cfg);
      else if (s == "cyclic") o = cmd_cyclic(cfg);
      else if (s == "measures") o = cmd_measures(cfg);
      else if (s == "verify") o = cmd_verify(cfg);
      else o = cmd_multilevel(cfg);
      Json doc = header;
      doc["result"] = std::move(o.result);
      body = doc.dump(2) + "\n";
      exit = o.exit;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (dynamic_cast<const UsageError*>(&e)) err << app.get_subcommands().front()->help();
    return exit_for(e);
  } catch (const Json::exception& e) {
    err << "error: bad JSON input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: bad numeric argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: numeric argument out of range: " << e.what() << "\n";
    return kExitUsage;
  }

  if (cfg.out.empty()) {
    out << body;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << cfg.out << "\n";
      return kExitUsage;
    }
    file << body;
  }
  return exit;
}

}  // namespace cohere

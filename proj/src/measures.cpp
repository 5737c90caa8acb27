#include "cohere/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cohere/channels.hpp"

namespace cohere {

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Exact: return "exact";
    case MeasureKind::ClosedForm: return "closed_form";
    case MeasureKind::UpperBound: return "upper_bound";
    case MeasureKind::LowerBound: return "lower_bound";
    case MeasureKind::HeuristicUpperBound: return "heuristic_upper_bound";
  }
  return "unknown";
}

MeasureKind parse_measure_kind(const std::string& text) {
  for (auto kind : {MeasureKind::Exact, MeasureKind::ClosedForm, MeasureKind::UpperBound,
                    MeasureKind::LowerBound, MeasureKind::HeuristicUpperBound}) {
    if (to_string(kind) == text) return kind;
  }
  throw DomainError("unknown measure kind: " + text);
}

double MeasureResult::lower() const {
  switch (kind) {
    case MeasureKind::Exact:
    case MeasureKind::ClosedForm:
    case MeasureKind::LowerBound:
      return value;
    default:
      return 0.0;
  }
}

double MeasureResult::upper() const {
  if (kind == MeasureKind::LowerBound) return std::numeric_limits<double>::infinity();
  return value;
}

MeasureResult make_result(double value, MeasureKind kind, std::string method) {
  MeasureResult r{value, kind, std::move(method), {}};
  if (r.value < 0.0) {
    if (r.value < -kPsdTolerance) {
      std::ostringstream msg;
      msg << "clamped negative value " << r.value;
      r.warning = msg.str();
    }
    r.value = 0.0;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Bipartitions

Bipartition Bipartition::from_left(std::vector<std::size_t> left, std::size_t n_parties) {
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  if (left.empty() || left.size() >= n_parties) {
    throw DimensionError("bipartition needs both sides nonempty");
  }
  if (left.back() >= n_parties) throw DimensionError("bipartition party index out of range");
  std::vector<std::size_t> right;
  for (std::size_t k = 0; k < n_parties; ++k) {
    if (!std::binary_search(left.begin(), left.end(), k)) right.push_back(k);
  }
  return Bipartition(std::move(left), std::move(right), n_parties);
}

namespace {

std::vector<std::size_t> parse_side(const std::string& side) {
  std::vector<std::size_t> out;
  if (side.find(',') != std::string::npos ||
      (!side.empty() && std::isdigit(static_cast<unsigned char>(side.front())))) {
    std::stringstream ss(side);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      out.push_back(static_cast<std::size_t>(std::stoul(tok)));
    }
    return out;
  }
  for (char ch : side) {
    if (ch < 'A' || ch > 'Z') throw DimensionError(std::string("bad party label '") + ch + "'");
    out.push_back(static_cast<std::size_t>(ch - 'A'));
  }
  return out;
}

}  // namespace

Bipartition Bipartition::parse(const std::string& text, std::size_t n_parties) {
  const auto bar = text.find('|');
  if (bar == std::string::npos) throw DimensionError("cut must contain '|': " + text);
  auto left = parse_side(text.substr(0, bar));
  auto right = parse_side(text.substr(bar + 1));
  auto cut = from_left(left, n_parties);
  std::sort(right.begin(), right.end());
  if (right != cut.right()) {
    throw DimensionError("cut sides must partition all " + std::to_string(n_parties) +
                         " parties: " + text);
  }
  return cut;
}

std::string Bipartition::to_string() const {
  std::string out;
  auto label = [](std::size_t k) {
    return k < 26 ? std::string(1, static_cast<char>('A' + k)) : "[" + std::to_string(k) + "]";
  };
  for (auto k : left_) out += label(k);
  out += '|';
  for (auto k : right_) out += label(k);
  return out;
}

std::vector<Bipartition> all_bipartitions(std::size_t n_parties) {
  if (n_parties < 2) throw DimensionError("bipartitions need at least two parties");
  std::vector<Bipartition> cuts;
  const std::size_t others = n_parties - 1;
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << others); ++mask) {
    std::vector<std::size_t> left{0};
    for (std::size_t k = 0; k < others; ++k) {
      if (mask & (std::size_t{1} << k)) left.push_back(k + 1);
    }
    cuts.push_back(Bipartition::from_left(std::move(left), n_parties));
  }
  return cuts;
}

Bipartition one_vs_rest(std::size_t party, std::size_t n_parties) {
  return Bipartition::from_left({party}, n_parties);
}

namespace {

void check_cut(const DensityMatrix& rho, const Bipartition& cut) {
  if (cut.n_parties() != rho.parties()) {
    throw DimensionError("cut " + cut.to_string() + " does not match a " +
                         std::to_string(rho.parties()) + "-party state");
  }
}

std::size_t side_dim(const Dims& dims, const std::vector<std::size_t>& side) {
  std::size_t d = 1;
  for (auto k : side) d *= dims[k];
  return d;
}

// The state as a d_left x d_right matrix with left parties as row digits.
Eigen::MatrixXcd cut_matrix(const StateVector& psi, const Dims& dims, const Bipartition& cut) {
  const std::size_t dl = side_dim(dims, cut.left());
  const std::size_t dr = side_dim(dims, cut.right());
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dl), static_cast<Eigen::Index>(dr));
  for (std::size_t i = 0; i < static_cast<std::size_t>(psi.size()); ++i) {
    const auto digits = unflatten(i, dims);
    std::size_t r = 0, c = 0;
    for (auto k : cut.left()) r = r * dims[k] + digits[k];
    for (auto k : cut.right()) c = c * dims[k] + digits[k];
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = psi(static_cast<Eigen::Index>(i));
  }
  return m;
}

bool is_diagonal(const DensityMatrix& rho, double tol = 1e-14) {
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (r != c && std::abs(m(r, c)) > tol) return false;
    }
  }
  return true;
}

// Two-qubit state ordered as (left, right) across the cut.
DensityMatrix as_two_qubit(const DensityMatrix& rho, const Bipartition& cut) {
  std::vector<std::size_t> order = cut.left();
  order.insert(order.end(), cut.right().begin(), cut.right().end());
  auto m = permute_parties(rho.matrix(), rho.dims(), order);
  return validate_density(std::move(m), {2, 2});
}

RealVector diagonal_probabilities(const StateVector& psi) {
  return psi.cwiseAbs2();
}

}  // namespace

double entanglement_entropy(const StateVector& psi, const Dims& dims, const Bipartition& cut) {
  if (cut.n_parties() != dims.size()) throw DimensionError("cut does not match dims");
  if (static_cast<std::size_t>(psi.size()) != total_dim(dims)) {
    throw DimensionError("state length does not match dims");
  }
  const auto m = cut_matrix(psi, dims, cut);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return shannon_entropy(svd.singularValues().cwiseAbs2());
}

// ---------------------------------------------------------------------------
// Coherence

MeasureResult c_d(const DensityMatrix& rho) {
  const double value = vn_entropy(dephase(rho).matrix()) - vn_entropy(rho.matrix());
  return make_result(value, MeasureKind::Exact, "relative-entropy-of-coherence");
}

std::optional<MeasureResult> c_f_exact(const DensityMatrix& rho) {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    if (rho(i, i).real() > 1e-13) support.push_back(i);
  }
  if (support.size() <= 1 || is_diagonal(rho)) {
    return make_result(0.0, MeasureKind::Exact, "incoherent");
  }
  const auto eig = hermitian_eig(rho.matrix());
  if (eig.values(0) >= 1.0 - 1e-10) {
    const StateVector psi = eig.vectors.col(0);
    return make_result(shannon_entropy(diagonal_probabilities(psi / psi.norm())),
                       MeasureKind::Exact, "pure-dephased-entropy");
  }
  if (support.size() == 2) {
    // Qubit supported on two basis states: h((1 + sqrt(1 - 4|rho_01|^2)) / 2).
    const double off = std::abs(rho(support[0], support[1]));
    const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * off * off));
    return make_result(binary_entropy((1.0 + root) / 2.0), MeasureKind::ClosedForm,
                       "qubit-closed-form");
  }
  return std::nullopt;
}

MeasureResult c_f(const DensityMatrix& rho, const ConvexRoofOptions& options) {
  if (auto exact = c_f_exact(rho)) return *exact;
  // Compress onto the occupied basis states; the embedding is an incoherent
  // isometry in both directions, so the coherence of formation is unchanged.
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    if (rho(i, i).real() > 1e-13) support.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(support.size());
  ComplexMatrix core(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) core(a, b) = rho(support[static_cast<std::size_t>(a)], support[static_cast<std::size_t>(b)]);
  }
  core /= core.trace().real();
  const auto compressed = validate_density(std::move(core), {support.size()});
  const PureStateCost cost = [](const StateVector& psi) {
    return shannon_entropy(psi.cwiseAbs2());
  };
  return make_result(convex_roof_search(compressed, cost, options),
                     MeasureKind::HeuristicUpperBound, "convex-roof-search");
}

// ---------------------------------------------------------------------------
// Bipartite entanglement

double concurrence(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) throw DimensionError("concurrence needs a two-qubit state");
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  // sigma_y (x) sigma_y
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const auto eig = hermitian_eig(rho.matrix());
  // Eigenvalues at rounding level are dropped: their square roots would
  // otherwise leak ~1e-8 noise into the lambdas of rank-deficient states.
  Eigen::Matrix4cd sqrt_rho = Eigen::Matrix4cd::Zero();
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double lam = eig.values(k);
    if (lam <= 1e-13) continue;
    const Eigen::Vector4cd v = eig.vectors.col(k);
    sqrt_rho += std::sqrt(lam) * v * v.adjoint();
  }
  // The lambdas are the singular values of sqrt(rho) (Y x Y) sqrt(rho)^*.
  const Eigen::Matrix4cd product = sqrt_rho * yy * sqrt_rho.conjugate();
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(product);
  double lambda[4];
  for (int k = 0; k < 4; ++k) lambda[k] = svd.singularValues()(k);
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double log_negativity(const DensityMatrix& rho, const Bipartition& cut) {
  check_cut(rho, cut);
  const auto pt = partial_transpose(rho.matrix(), rho.dims(), cut.left());
  return std::max(0.0, std::log2(trace_norm(pt)));
}

double e_f_lower_bound(const DensityMatrix& rho, const Bipartition& cut) {
  check_cut(rho, cut);
  if (side_dim(rho.dims(), cut.left()) != 2 && side_dim(rho.dims(), cut.right()) != 2) {
    throw DimensionError("E_f lower bound needs a qubit on one side of " + cut.to_string());
  }
  const auto pt = partial_transpose(rho.matrix(), rho.dims(), cut.left());
  const double lambda = std::clamp(trace_norm(pt), 1.0, 2.0);
  const double x = lambda - 1.0;
  return binary_entropy((1.0 + std::sqrt(std::max(0.0, 1.0 - x * x))) / 2.0);
}

std::optional<MeasureResult> e_f_exact(const DensityMatrix& rho, const Bipartition& cut) {
  check_cut(rho, cut);
  if (is_diagonal(rho)) return make_result(0.0, MeasureKind::Exact, "incoherent-separable");
  const auto eig = hermitian_eig(rho.matrix());
  if (eig.values(0) >= 1.0 - 1e-10) {
    const StateVector psi = eig.vectors.col(0);
    return make_result(entanglement_entropy(psi / psi.norm(), rho.dims(), cut),
                       MeasureKind::Exact, "pure-reduced-entropy");
  }
  if (side_dim(rho.dims(), cut.left()) == 2 && side_dim(rho.dims(), cut.right()) == 2) {
    const double c = concurrence(as_two_qubit(rho, cut));
    const double root = std::sqrt(std::max(0.0, 1.0 - c * c));
    return make_result(binary_entropy((1.0 + root) / 2.0), MeasureKind::ClosedForm, "wootters");
  }
  if (is_mcs_form(rho)) {
    if (auto cf = c_f_exact(mcs_core(rho))) {
      cf->method = "mcs-coherence-of-formation";
      return cf;
    }
  }
  return std::nullopt;
}

MeasureResult e_f(const DensityMatrix& rho, const Bipartition& cut,
                  const ConvexRoofOptions& options) {
  if (auto exact = e_f_exact(rho, cut)) return *exact;
  if (is_mcs_form(rho)) {
    auto cf = c_f(mcs_core(rho), options);
    cf.method = "mcs-coherence-of-formation";
    return cf;
  }
  const Dims dims = rho.dims();
  const PureStateCost cost = [&](const StateVector& psi) {
    return entanglement_entropy(psi, dims, cut);
  };
  return make_result(convex_roof_search(rho, cost, options), MeasureKind::HeuristicUpperBound,
                     "convex-roof-search");
}

MeasureResult e_d(const DensityMatrix& rho, const Bipartition& cut) {
  check_cut(rho, cut);
  if (is_diagonal(rho)) return make_result(0.0, MeasureKind::Exact, "incoherent-separable");
  const auto eig = hermitian_eig(rho.matrix());
  if (eig.values(0) >= 1.0 - 1e-10) {
    const StateVector psi = eig.vectors.col(0);
    return make_result(entanglement_entropy(psi / psi.norm(), rho.dims(), cut),
                       MeasureKind::Exact, "pure-reduced-entropy");
  }
  if (is_mcs_form(rho)) {
    auto r = c_d(rho);
    r.method = "mcs-relative-entropy";
    return r;
  }
  const double ln = log_negativity(rho, cut);
  if (ln <= 1e-12) return make_result(0.0, MeasureKind::Exact, "ppt");
  return make_result(ln, MeasureKind::UpperBound, "log-negativity");
}

// ---------------------------------------------------------------------------
// Genuine multipartite entanglement

GmeResult e_gme_pure(const StateVector& psi, const Dims& dims, GmeBase base) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    throw NormalizationError("GME input norm " + std::to_string(norm) + " differs from 1");
  }
  if (static_cast<std::size_t>(psi.size()) != total_dim(dims)) {
    throw DimensionError("state length does not match dims");
  }
  const auto cuts = all_bipartitions(dims.size());
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double v = entanglement_entropy(psi, dims, cuts[i]);
    if (v < best_value - 1e-15) {
      best_value = v;
      best = i;
    }
  }
  const std::string method = base == GmeBase::Distillable ? "min-cut-distillable"
                                                          : "min-cut-formation";
  return GmeResult{make_result(best_value, MeasureKind::Exact, method), cuts[best]};
}

MeasureResult e_f_gme_mcs(const DensityMatrix& rho) {
  auto r = c_f(mcs_core(rho));
  r.method = "mcs-coherence-of-formation";
  return r;
}

MeasureResult e_r_m_mcs(const DensityMatrix& rho) {
  if (!is_mcs_form(rho)) throw NotMCSError("state is not of maximally correlated form");
  auto r = c_d(rho);
  r.method = "mcs-relative-entropy";
  return r;
}

MeasureResult qi_relative_entropy(const DensityMatrix& rho, std::size_t target_party) {
  if (target_party >= rho.parties()) throw DimensionError("target party out of range");
  const double value =
      vn_entropy(dephase(rho, {target_party}).matrix()) - vn_entropy(rho.matrix());
  return make_result(value, MeasureKind::ClosedForm, "target-dephasing");
}

// ---------------------------------------------------------------------------
// Monogamy indicators

namespace {

void check_qubits(const DensityMatrix& rho) {
  if (rho.parties() < 2) throw DimensionError("monogamy indicators need at least two qubits");
  for (auto d : rho.dims()) {
    if (d != 2) throw DimensionError("monogamy indicators need all local dimensions 2");
  }
}

std::vector<DensityMatrix> focus_pairs(const DensityMatrix& rho) {
  std::vector<DensityMatrix> pairs;
  for (std::size_t i = 1; i < rho.parties(); ++i) pairs.push_back(reduce(rho, {0, i}));
  return pairs;
}

const Bipartition& pair_cut() {
  static const Bipartition cut = Bipartition::from_left({0}, 2);
  return cut;
}

// sqrt(max(0, focus^2 - sum pairs^2)) with bound directions tracked: the
// result is exact when every input is, an upper bound when the focus term is
// an upper bound, and a lower bound when only pair terms are bounded above.
MeasureResult combine_med(const MeasureResult& focus, const std::vector<MeasureResult>& pairs,
                          const std::string& method) {
  bool pairs_exact = true;
  double sum_lo = 0.0, sum_hi = 0.0;
  for (const auto& p : pairs) {
    pairs_exact = pairs_exact && p.is_exact();
    sum_lo += p.lower() * p.lower();
    sum_hi += p.upper() * p.upper();
  }
  if (focus.is_exact() && pairs_exact) {
    return make_result(std::sqrt(std::max(0.0, focus.value * focus.value - sum_lo)),
                       MeasureKind::Exact, method);
  }
  if (!focus.is_exact()) {
    const double hi = focus.upper();
    return make_result(std::sqrt(std::max(0.0, hi * hi - sum_lo)), MeasureKind::UpperBound,
                       method + "-ub");
  }
  return make_result(std::sqrt(std::max(0.0, focus.value * focus.value - sum_hi)),
                     MeasureKind::LowerBound, method + "-lb");
}

}  // namespace

MeasureResult tau_med(const DensityMatrix& rho) {
  check_qubits(rho);
  const auto focus = e_d(rho, one_vs_rest(0, rho.parties()));
  std::vector<MeasureResult> pairs;
  for (const auto& pair : focus_pairs(rho)) pairs.push_back(e_d(pair, pair_cut()));
  return combine_med(focus, pairs, "tau-med");
}

MeasureResult tau_med_ub(const DensityMatrix& rho) {
  check_qubits(rho);
  const auto focus = make_result(log_negativity(rho, one_vs_rest(0, rho.parties())),
                                 MeasureKind::UpperBound, "log-negativity");
  std::vector<MeasureResult> pairs;
  for (const auto& pair : focus_pairs(rho)) pairs.push_back(e_d(pair, pair_cut()));
  return combine_med(focus, pairs, "tau-med");
}

namespace {

double pair_formation_sum(const DensityMatrix& rho) {
  double sum = 0.0;
  for (const auto& pair : focus_pairs(rho)) {
    const double ef = e_f_exact(pair, pair_cut())->value;
    sum += ef * ef;
  }
  return sum;
}

}  // namespace

MeasureResult tau_mef(const DensityMatrix& rho) {
  check_qubits(rho);
  const auto cut = one_vs_rest(0, rho.parties());
  const double pairs = pair_formation_sum(rho);
  if (auto focus = e_f_exact(rho, cut)) {
    const double radicand = focus->value * focus->value - pairs;
    if (radicand < -kPsdTolerance) {
      throw NegativeRadicandError(
          "negative E_f monogamy residual " + std::to_string(radicand), radicand);
    }
    return make_result(std::sqrt(std::max(0.0, radicand)), MeasureKind::Exact, "tau-mef");
  }
  const double lb = e_f_lower_bound(rho, cut);
  return make_result(std::sqrt(std::max(0.0, lb * lb - pairs)), MeasureKind::LowerBound,
                     "tau-mef-lb");
}

MeasureResult tau_mef_lb(const DensityMatrix& rho) {
  check_qubits(rho);
  const double lb = e_f_lower_bound(rho, one_vs_rest(0, rho.parties()));
  const double pairs = pair_formation_sum(rho);
  return make_result(std::sqrt(std::max(0.0, lb * lb - pairs)), MeasureKind::LowerBound,
                     "tau-mef-lb");
}

}  // namespace cohere

#include "cohere/multilevel.hpp"

#include <algorithm>
#include <cmath>

namespace cohere {

namespace {

constexpr double kRankTolerance = 1e-10;

DecomposabilityVerdict verdict_from(std::vector<double> s, double tol) {
  std::stable_sort(s.begin(), s.end(), std::greater<>());
  DecomposabilityVerdict v;
  v.det_s = s[0] * s[3] - s[1] * s[2];
  v.criterion_residual = std::abs(v.det_s);
  v.decomposable = v.criterion_residual <= tol;
  v.schmidt_coeffs = std::move(s);
  return v;
}

// Amplitudes reordered so the left side of the cut forms the row index.
StateVector reorder(const StateVector& psi, const Dims& dims, const Bipartition& cut) {
  std::vector<std::size_t> order = cut.left();
  order.insert(order.end(), cut.right().begin(), cut.right().end());
  Dims permuted;
  for (auto k : order) permuted.push_back(dims[k]);
  StateVector out(psi.size());
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t i = 0; i < static_cast<std::size_t>(psi.size()); ++i) {
    const auto src = unflatten(i, dims);
    for (std::size_t k = 0; k < order.size(); ++k) digits[k] = src[order[k]];
    out(static_cast<Eigen::Index>(flatten(digits, permuted))) = psi(static_cast<Eigen::Index>(i));
  }
  return out;
}

}  // namespace

std::string to_string(CutVerdict verdict) {
  switch (verdict) {
    case CutVerdict::Decomposable: return "decomposable";
    case CutVerdict::Genuine: return "genuine";
    case CutVerdict::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

DecomposabilityVerdict kraft_decomposable(const StateVector& psi, double tol) {
  if (psi.size() != 16) throw DimensionError("two-ququart state needs 16 amplitudes");
  const auto form = schmidt(psi, 4, 4);
  std::vector<double> s(form.coefficients.data(), form.coefficients.data() + 4);
  return verdict_from(std::move(s), tol);
}

DecomposabilityVerdict observation1(const CoherentAmplitudes& amps, double tol) {
  if (amps.dim() != 4) throw DimensionError("Observation 1 needs four amplitudes");
  std::vector<double> moduli;
  for (const auto& a : amps.values()) moduli.push_back(std::abs(a));
  return verdict_from(std::move(moduli), tol);
}

MultilevelReport multilevel_report(const StateVector& psi, const Dims& dims, double tol) {
  if (dims.size() < 2) throw DimensionError("multilevel report needs at least two parties");
  if (static_cast<std::size_t>(psi.size()) != total_dim(dims)) {
    throw DimensionError("state length does not match dims");
  }
  MultilevelReport report;
  bool applicable = false;
  bool any_decomposable = false;
  for (const auto& cut : all_bipartitions(dims.size())) {
    std::size_t dl = 1;
    for (auto k : cut.left()) dl *= dims[k];
    const auto form = schmidt(reorder(psi, dims, cut), dl, total_dim(dims) / dl);
    CutReport cr{cut, 0, {}, CutVerdict::NotApplicable, std::nullopt};
    for (Eigen::Index i = 0; i < form.coefficients.size(); ++i) {
      if (form.coefficients(i) > kRankTolerance) {
        ++cr.schmidt_rank;
        cr.schmidt_coeffs.push_back(form.coefficients(i));
      }
    }
    if (cr.schmidt_rank == 1) {
      cr.verdict = CutVerdict::Decomposable;
    } else if (cr.schmidt_rank == 4) {
      cr.detail = verdict_from(cr.schmidt_coeffs, tol);
      cr.verdict = cr.detail->decomposable ? CutVerdict::Decomposable : CutVerdict::Genuine;
    }
    if (cr.verdict != CutVerdict::NotApplicable) {
      applicable = true;
      any_decomposable = any_decomposable || cr.verdict == CutVerdict::Decomposable;
    }
    report.cuts.push_back(std::move(cr));
  }
  report.genuine_multilevel = applicable && !any_decomposable;
  return report;
}

}  // namespace cohere

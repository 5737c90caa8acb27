#include "cohere/io.hpp"

#include <cmath>

namespace cohere {

namespace {

Json matrix_part(const ComplexMatrix& m, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(imag ? m(r, c).imag() : m(r, c).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from(const Json& re, const Json* im) {
  if (!re.is_array() || re.empty()) throw DimensionError("matrix \"re\" must be a nonempty array");
  const auto rows = static_cast<Eigen::Index>(re.size());
  const auto cols = static_cast<Eigen::Index>(re.at(0).size());
  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = re.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw DimensionError("matrix rows must have equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  if (im != nullptr) {
    if (!im->is_array() || static_cast<Eigen::Index>(im->size()) != rows) {
      throw DimensionError("matrix \"im\" shape differs from \"re\"");
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& row = im->at(static_cast<std::size_t>(r));
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw DimensionError("matrix \"im\" shape differs from \"re\"");
      }
      for (Eigen::Index c = 0; c < cols; ++c) {
        m(r, c) += cplx(0.0, row.at(static_cast<std::size_t>(c)).get<double>());
      }
    }
  }
  return m;
}

Json optional_double(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

Json state_to_json(const DensityMatrix& rho) {
  return Json{{"dims", rho.dims()},
              {"re", matrix_part(rho.matrix(), false)},
              {"im", matrix_part(rho.matrix(), true)}};
}

std::vector<cplx> amplitudes_from_json(const Json& j) {
  const Json& list = j.is_object() ? j.at("amps") : j;
  if (!list.is_array() || list.empty()) throw DimensionError("amplitude list must be nonempty");
  std::vector<cplx> amps;
  for (const auto& a : list) {
    if (a.is_number()) {
      amps.emplace_back(a.get<double>(), 0.0);
    } else if (a.is_array() && a.size() == 2) {
      amps.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    } else {
      throw DimensionError("amplitudes must be numbers or [re, im] pairs");
    }
  }
  return amps;
}

DensityMatrix state_from_json(const Json& j) {
  if (j.is_object() && j.contains("re")) {
    auto m = matrix_from(j.at("re"), j.contains("im") ? &j.at("im") : nullptr);
    Dims dims = j.contains("dims") ? j.at("dims").get<Dims>()
                                   : Dims{static_cast<std::size_t>(m.rows())};
    return validate_density(std::move(m), std::move(dims));
  }
  auto amps = CoherentAmplitudes::normalized(amplitudes_from_json(j));
  Dims dims = (j.is_object() && j.contains("dims")) ? j.at("dims").get<Dims>() : Dims{amps.dim()};
  return from_pure(amps.vector(), std::move(dims));
}

Json channel_to_json(const KrausChannel& ch) {
  Json ops = Json::array();
  for (const auto& k : ch.operators()) {
    ops.push_back(Json{{"re", matrix_part(k, false)}, {"im", matrix_part(k, true)}});
  }
  return Json{{"dims_in", ch.input_dims()}, {"dims_out", ch.output_dims()}, {"operators", ops}};
}

KrausChannel channel_from_json(const Json& j) {
  std::vector<ComplexMatrix> ops;
  for (const auto& op : j.at("operators")) {
    ops.push_back(matrix_from(op.at("re"), op.contains("im") ? &op.at("im") : nullptr));
  }
  if (ops.empty()) throw DimensionError("channel needs at least one operator");
  Dims in = j.contains("dims_in") ? j.at("dims_in").get<Dims>()
                                  : Dims{static_cast<std::size_t>(ops.front().cols())};
  Dims out = j.contains("dims_out") ? j.at("dims_out").get<Dims>()
                                    : Dims{static_cast<std::size_t>(ops.front().rows())};
  return KrausChannel(std::move(ops), std::move(in), std::move(out));
}

Json to_json(const MeasureResult& r) {
  Json j{{"value", r.value}, {"kind", to_string(r.kind)}, {"method", r.method}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

Json to_json(const ConversionReport& r) {
  Json cuts = Json::array();
  for (const auto& c : r.cuts) {
    cuts.push_back(Json{{"cut", c.cut.to_string()},
                        {"E_d", to_json(c.e_d)},
                        {"E_f", to_json(c.e_f)},
                        {"residual_d", c.residual_d},
                        {"residual_f", c.residual_f}});
  }
  return Json{{"C_d", to_json(r.c_d)},
              {"C_f", to_json(r.c_f)},
              {"cuts", cuts},
              {"max_residual", r.max_residual}};
}

Json to_json(const ProtocolTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json measures = Json::object();
    for (const auto& [name, value] : s.measures) measures[name] = to_json(value);
    Json step{{"label", s.label}, {"state", state_to_json(s.state)}, {"measures", measures}};
    if (s.outcome) step["outcome"] = *s.outcome;
    if (s.probability) step["probability"] = *s.probability;
    steps.push_back(std::move(step));
  }
  return Json{{"seed", t.seed}, {"steps", steps}, {"loss_cd", t.loss_cd}, {"loss_cf", t.loss_cf}};
}

Json to_json(const TheoremReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back(
        Json{{"seed", v.seed}, {"index", v.index}, {"check", v.check}, {"margin", v.margin}});
  }
  return Json{{"id", r.id},
              {"statement", r.statement},
              {"samples", r.samples},
              {"checks", r.checks},
              {"certified", r.certified},
              {"inconclusive", r.inconclusive},
              {"violations", violations},
              {"max_margin", optional_double(r.max_margin)}};
}

Json to_json(const DecomposabilityVerdict& v) {
  return Json{{"decomposable", v.decomposable},
              {"det_s", v.det_s},
              {"schmidt_coeffs", v.schmidt_coeffs},
              {"criterion_residual", v.criterion_residual}};
}

Json to_json(const MultilevelReport& r) {
  Json cuts = Json::array();
  for (const auto& c : r.cuts) {
    Json cut{{"cut", c.cut.to_string()},
             {"schmidt_rank", c.schmidt_rank},
             {"schmidt_coeffs", c.schmidt_coeffs},
             {"verdict", to_string(c.verdict)}};
    if (c.detail) cut["detail"] = to_json(*c.detail);
    cuts.push_back(std::move(cut));
  }
  return Json{{"cuts", cuts}, {"genuine_multilevel", r.genuine_multilevel}};
}

}  // namespace cohere

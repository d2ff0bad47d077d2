#include "slungload/report.hpp"

#include <fstream>

#include "slungload/error.hpp"
#include "slungload/plot.hpp"

namespace slungload {
namespace {

double number(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number()) {
    throw AnalysisError(std::string("certificate: missing numeric field '") + key + "'");
  }
  return doc[key].get<double>();
}

}  // namespace

nlohmann::json bounds_to_json(const DisturbanceBounds& b) {
  return {{"c1", b.c1}, {"c2", b.c2}, {"c3", b.c3}, {"sum", b.sum()}};
}

nlohmann::json containment_to_json(const ContainmentStats& s, double cutoff) {
  nlohmann::json series = nlohmann::json::array();
  for (std::size_t i : thin_indices(s.times.size())) {
    series.push_back({s.times[i], s.levels[i]});
  }
  return {{"cutoff", cutoff},
          {"samples", s.samples},
          {"containment_fraction", s.containment_fraction},
          {"lyapunov_samples", s.lyapunov_samples},
          {"lyapunov_violation_rate", s.lyapunov_violation_rate},
          {"level_series", series}};
}

nlohmann::json certificate_to_json(const EllipsoidCertificate& cert,
                                   const DisturbanceBounds& bounds,
                                   const std::string& bounds_source,
                                   const ScenarioConfig& config,
                                   const std::optional<ContainmentStats>& containment) {
  nlohmann::json P = nlohmann::json::array();
  for (int r = 0; r < cert.P.rows(); ++r) {
    std::vector<double> row(cert.P.cols());
    for (int c = 0; c < cert.P.cols(); ++c) row[c] = cert.P(r, c);
    P.push_back(row);
  }
  nlohmann::json doc = {
      {"schema_version", 1},
      {"feasible", true},
      {"vehicle_count", config.vehicle_count()},
      {"alpha", cert.alpha},
      {"epsilon", cert.epsilon},
      {"beta", cert.beta},
      {"radius_sq", cert.radius_sq},
      {"trace_metric", cert.trace_metric},
      {"lambda_max", cert.lambda_max},
      {"disturbance_bounds", bounds_to_json(bounds)},
      {"bounds_source", bounds_source},
      {"gains", to_json(config)["gains"]},
      {"P", P},
  };
  if (containment) {
    doc["containment"] = containment_to_json(*containment, config.output.analysis_cutoff);
  }
  return doc;
}

EllipsoidCertificate certificate_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw AnalysisError("certificate: not a JSON object");
  EllipsoidCertificate c;
  c.alpha = number(doc, "alpha");
  c.epsilon = number(doc, "epsilon");
  c.beta = number(doc, "beta");
  c.radius_sq = doc.contains("radius_sq") ? number(doc, "radius_sq") : c.beta / c.alpha;
  c.trace_metric = doc.contains("trace_metric") ? number(doc, "trace_metric") : 0.0;
  c.lambda_max = doc.contains("lambda_max") ? number(doc, "lambda_max") : 0.0;
  if (!(c.alpha > 0.0) || !(c.beta >= 0.0)) {
    throw AnalysisError("certificate: need alpha > 0 and beta >= 0");
  }
  if (!doc.contains("P") || !doc["P"].is_array()) {
    throw AnalysisError("certificate: missing matrix 'P'");
  }
  const auto& rows = doc["P"];
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw AnalysisError("certificate: P is empty");
  c.P.resize(n, n);
  for (int r = 0; r < n; ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n) {
      throw AnalysisError("certificate: P row " + std::to_string(r) + " is not of length " +
                          std::to_string(n));
    }
    for (int k = 0; k < n; ++k) {
      if (!rows[r][k].is_number()) throw AnalysisError("certificate: P has a non-number");
      c.P(r, k) = rows[r][k].get<double>();
    }
  }
  if ((c.P - c.P.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + c.P.cwiseAbs().maxCoeff())) {
    throw AnalysisError("certificate: P is not symmetric");
  }
  return c;
}

EllipsoidCertificate load_certificate(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw AnalysisError("cannot open certificate " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw AnalysisError("certificate " + path.string() + ": " + e.what());
  }
  return certificate_from_json(doc);
}

}  // namespace slungload

#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "slungload/analysis.hpp"
#include "slungload/scenario.hpp"

namespace slungload {

/// certificate.json: α, ε, β, λ_max(W_L), radius β/α, trace metric, P, the
/// disturbance bounds used and an echo of the gains. `containment` is added
/// when the certificate was checked against a log.
nlohmann::json certificate_to_json(const EllipsoidCertificate& cert,
                                   const DisturbanceBounds& bounds,
                                   const std::string& bounds_source,
                                   const ScenarioConfig& config,
                                   const std::optional<ContainmentStats>& containment);

/// Reads back P, α, ε, β and the derived fields. Throws AnalysisError on a
/// malformed document (missing keys, non-square or asymmetric P).
EllipsoidCertificate certificate_from_json(const nlohmann::json& doc);
EllipsoidCertificate load_certificate(const std::filesystem::path& path);

nlohmann::json bounds_to_json(const DisturbanceBounds& bounds);

/// Containment report of the analyze command. The level series is thinned
/// to at most 2000 points.
nlohmann::json containment_to_json(const ContainmentStats& stats, double cutoff);

}  // namespace slungload

#pragma once

#include <stdexcept>
#include <string>

namespace slungload {

/// Invalid configuration document or parameter set. `path()` names the
/// offending field in dotted/indexed form, e.g. `load.mass` or
/// `vehicles[2].cable_length`.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// The plant left the region where the model can be integrated: degenerate
/// cable geometry, an ill-conditioned tension system, non-finite values or a
/// constraint residual beyond the divergence threshold.
class DynamicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrust direction pointing (almost) straight down, where the zero-yaw
/// attitude parameterization is undefined.
class SingularityError : public DynamicsError {
 public:
  using DynamicsError::DynamicsError;
};

/// Certificate analysis errors (non-Hurwitz error dynamics, eigensolver
/// failure, inconsistent log/certificate dimensions).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHurwitzError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

/// No point of the certificate search grid satisfied W_L <= 0.
class InfeasibleError : public AnalysisError {
 public:
  InfeasibleError(const std::string& message, double best_lambda_max)
      : AnalysisError(message), best_lambda_max_(best_lambda_max) {}

  double best_lambda_max() const { return best_lambda_max_; }

 private:
  double best_lambda_max_;
};

/// Malformed or truncated log.csv.
class LogFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slungload

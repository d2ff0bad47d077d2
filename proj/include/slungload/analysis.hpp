#pragma once

#include <vector>

#include <Eigen/Dense>

#include "slungload/controller.hpp"
#include "slungload/dynamics.hpp"
#include "slungload/log.hpp"

namespace slungload {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// χ̇ = Ã χ + B̃ ζ with χ = [∫x_e, x_e, ẋ_e, ∫x_e1, x_e1, ẋ_e1, ...] and
/// ζ = [ζ_L1, ζ_1, α̈_1d, ..., ζ_Ln, ζ_n, α̈_nd].
struct ErrorStateMatrices {
  MatrixXd A_tilde;
  MatrixXd B_tilde;
  /// Size of the diagonal blocks of Ã (9 for the physical system). The
  /// certificate search solves one Lyapunov equation per block.
  int block_size = 9;
};

/// Triple-integrator chain A (9×9) and input matrix B (9×3).
MatrixXd integrator_chain();
MatrixXd input_matrix();

/// A + K/m for one body, K with last block row [-k_i, -k_p, -k_d].
MatrixXd error_block(const PidGains& gains, double mass);

/// Under the u_L = Σ T_id α_id convention the load row carries -B/m_L in the
/// ζ_Li columns; vehicle row i carries B/m_i, B/m_i and L_i B.
ErrorStateMatrices build_error_matrices(const SystemParams& params,
                                        const ControllerGains& gains);

/// W_L = [PÃ + ÃᵀP + αP, PB̃; B̃ᵀP, -εI].
MatrixXd build_WL(const ErrorStateMatrices& m, const MatrixXd& P, double alpha,
                  double epsilon);

struct Feasibility {
  bool feasible = false;
  double lambda_max = 0.0;
};

inline constexpr double kFeasibilityTolerance = 1e-9;

/// feasible ⇔ λ_max(W) <= tolerance. Throws AnalysisError if the
/// eigensolver fails.
Feasibility check_feasibility(const MatrixXd& W,
                              double tolerance = kFeasibilityTolerance);

/// Largest real part of the spectrum.
double spectral_abscissa(const MatrixXd& A);

/// Solves AᵀP + PA = -Q through the Kronecker form. Throws AnalysisError if
/// the equation is singular.
MatrixXd solve_lyapunov(const MatrixXd& A, const MatrixXd& Q);

/// Per-vehicle bounds on ‖ζ_i‖², ‖α̈_id‖², ‖ζ_Li‖².
struct DisturbanceBounds {
  std::vector<double> c1;
  std::vector<double> c2;
  std::vector<double> c3;

  static DisturbanceBounds Unit(int n);
  double sum() const;
};

struct CertificateSearchOptions {
  double alpha_min = 1e-3;
  double alpha_max = 10.0;
  int bisection_iterations = 40;
  double epsilon_min = 1e-2;
  double epsilon_max = 1e3;
  int epsilon_points = 25;
  double tolerance = kFeasibilityTolerance;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct EllipsoidCertificate {
  MatrixXd P;
  double alpha = 0.0;
  double epsilon = 0.0;
  double beta = 0.0;
  double radius_sq = 0.0;  // β/α
  double trace_metric = 0.0;  // tr((β/α) P⁻¹)
  double lambda_max = 0.0;    // of W_L at the returned point
};

/// Grid over ε, bisection over α. For each candidate P solves
/// (Ã + α/2 I)ᵀP + P(Ã + α/2 I) = -I and W_L is checked with the symmetric
/// eigensolver. Returns the feasible point of least trace metric (ties: smaller
/// ε, then smaller α). Throws NotHurwitzError if Ã is not Hurwitz and
/// InfeasibleError if nothing on the grid is feasible.
EllipsoidCertificate search_certificate(const ErrorStateMatrices& m,
                                        const DisturbanceBounds& bounds,
                                        const CertificateSearchOptions& options = {});

/// Maximum squared norms over samples with t >= cutoff; α̈_id by central
/// differences of the logged α_id. Throws AnalysisError if no sample
/// (or, for α̈_id, no interior sample) lies past the cutoff.
DisturbanceBounds estimate_disturbance_bounds(const SimLog& log,
                                              double transient_cutoff);

struct Membership {
  bool inside = false;
  double level = 0.0;  // χᵀPχ α/β
};

Membership ellipsoid_membership(const VectorXd& chi,
                                const EllipsoidCertificate& cert);

/// Accumulates ∫x_e and ∫x_ei trapezoidally over the log. Element k holds χ
/// at records[k]; the integrals start at zero on the first record.
std::vector<VectorXd> chi_series(const SimLog& log);

/// χ for a single record given the integrals accumulated up to it.
VectorXd build_chi(const LogRecord& record, const Vec3& load_integral,
                   const std::vector<Vec3>& vehicle_integrals);

struct ContainmentStats {
  std::vector<double> times;
  std::vector<double> levels;
  double containment_fraction = 0.0;  // over t >= cutoff
  long samples = 0;
  /// Fraction of post-cutoff steps violating
  /// V(t+h) - V(t) <= (-αV + β)h + 0.01βh + 1e-12.
  double lyapunov_violation_rate = 0.0;
  long lyapunov_samples = 0;
};

/// Throws AnalysisError if the certificate dimension does not match the log.
ContainmentStats containment_stats(const SimLog& log,
                                   const EllipsoidCertificate& cert,
                                   double cutoff);

}  // namespace slungload

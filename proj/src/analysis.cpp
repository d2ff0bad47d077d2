#include "slungload/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include "slungload/error.hpp"

namespace slungload {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Candidate {
  bool feasible = false;
  double lambda_max = kInf;
  MatrixXd P;
};

// Solves the shifted Lyapunov equation block by block (Ã is block-diagonal)
// and checks W_L. Returns an infeasible candidate when the shifted matrix is
// not Hurwitz, since P then cannot be positive definite.
Candidate evaluate(const ErrorStateMatrices& m, double alpha, double epsilon,
                   double tolerance) {
  const int dim = static_cast<int>(m.A_tilde.rows());
  const int bs = m.block_size;
  Candidate c;
  c.P = MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; k += bs) {
    const MatrixXd block = m.A_tilde.block(k, k, bs, bs) +
                           0.5 * alpha * MatrixXd::Identity(bs, bs);
    if (spectral_abscissa(block) >= 0.0) return c;
    c.P.block(k, k, bs, bs) = solve_lyapunov(block, MatrixXd::Identity(bs, bs));
  }
  const Feasibility f = check_feasibility(build_WL(m, c.P, alpha, epsilon), tolerance);
  c.feasible = f.feasible;
  c.lambda_max = f.lambda_max;
  return c;
}

struct GridResult {
  bool feasible = false;
  double best_lambda = kInf;
  EllipsoidCertificate cert;
};

GridResult search_epsilon(const ErrorStateMatrices& m, double epsilon,
                          double bound_sum, const CertificateSearchOptions& o) {
  GridResult r;
  auto note = [&](const Candidate& c) {
    r.best_lambda = std::min(r.best_lambda, c.lambda_max);
  };

  Candidate lo = evaluate(m, o.alpha_min, epsilon, o.tolerance);
  note(lo);
  if (!lo.feasible) return r;
  double a_lo = o.alpha_min;
  Candidate hi = evaluate(m, o.alpha_max, epsilon, o.tolerance);
  note(hi);
  if (hi.feasible) {
    lo = std::move(hi);
    a_lo = o.alpha_max;
  } else {
    // The trace metric falls as α grows (P increases in the Loewner order),
    // so the largest feasible α is the best point for this ε.
    double a_hi = o.alpha_max;
    for (int it = 0; it < o.bisection_iterations; ++it) {
      const double mid = 0.5 * (a_lo + a_hi);
      Candidate c = evaluate(m, mid, epsilon, o.tolerance);
      note(c);
      if (c.feasible) {
        a_lo = mid;
        lo = std::move(c);
      } else {
        a_hi = mid;
      }
    }
  }

  r.feasible = true;
  EllipsoidCertificate& cert = r.cert;
  cert.P = std::move(lo.P);
  cert.alpha = a_lo;
  cert.epsilon = epsilon;
  cert.beta = epsilon * bound_sum;
  cert.radius_sq = cert.beta / cert.alpha;
  cert.trace_metric = cert.radius_sq * cert.P.inverse().trace();
  cert.lambda_max = lo.lambda_max;
  return r;
}

bool better(const EllipsoidCertificate& a, const EllipsoidCertificate& b) {
  if (a.trace_metric != b.trace_metric) return a.trace_metric < b.trace_metric;
  if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
  return a.alpha < b.alpha;
}

}  // namespace

MatrixXd integrator_chain() {
  MatrixXd A = MatrixXd::Zero(9, 9);
  A.block(0, 3, 3, 3).setIdentity();
  A.block(3, 6, 3, 3).setIdentity();
  return A;
}

MatrixXd input_matrix() {
  MatrixXd B = MatrixXd::Zero(9, 3);
  B.block(6, 0, 3, 3).setIdentity();
  return B;
}

MatrixXd error_block(const PidGains& gains, double mass) {
  MatrixXd block = integrator_chain();
  block.block(6, 0, 3, 3) -= Mat3(gains.ki.asDiagonal()) / mass;
  block.block(6, 3, 3, 3) -= Mat3(gains.kp.asDiagonal()) / mass;
  block.block(6, 6, 3, 3) -= Mat3(gains.kd.asDiagonal()) / mass;
  return block;
}

ErrorStateMatrices build_error_matrices(const SystemParams& params,
                                        const ControllerGains& gains) {
  const int n = params.vehicle_count();
  if (static_cast<int>(gains.vehicles.size()) != n) {
    throw AnalysisError("gain set has " + std::to_string(gains.vehicles.size()) +
                        " vehicles, parameters have " + std::to_string(n));
  }
  ErrorStateMatrices m;
  m.A_tilde = MatrixXd::Zero(9 * (n + 1), 9 * (n + 1));
  m.B_tilde = MatrixXd::Zero(9 * (n + 1), 9 * n);
  const MatrixXd B = input_matrix();
  m.A_tilde.block(0, 0, 9, 9) = error_block(gains.load, params.load_mass);
  for (int i = 0; i < n; ++i) {
    const int row = 9 * (i + 1);
    const int col = 9 * i;
    const double mi = params.vehicles[i].mass;
    m.A_tilde.block(row, row, 9, 9) = error_block(gains.vehicles[i].position, mi);
    m.B_tilde.block(0, col, 9, 3) = -B / params.load_mass;
    m.B_tilde.block(row, col, 9, 3) = B / mi;
    m.B_tilde.block(row, col + 3, 9, 3) = B / mi;
    m.B_tilde.block(row, col + 6, 9, 3) = params.vehicles[i].cable_length * B;
  }
  return m;
}

MatrixXd build_WL(const ErrorStateMatrices& m, const MatrixXd& P, double alpha,
                  double epsilon) {
  const auto nx = m.A_tilde.rows();
  const auto nz = m.B_tilde.cols();
  MatrixXd W(nx + nz, nx + nz);
  const MatrixXd PA = P * m.A_tilde;
  const MatrixXd PB = P * m.B_tilde;
  W.topLeftCorner(nx, nx) = PA + PA.transpose() + alpha * P;
  W.topRightCorner(nx, nz) = PB;
  W.bottomLeftCorner(nz, nx) = PB.transpose();
  W.bottomRightCorner(nz, nz) = -epsilon * MatrixXd::Identity(nz, nz);
  // Symmetrize the (1,1) block exactly; PA + (PA)ᵀ is symmetric up to the
  // αP term when P itself carries roundoff asymmetry.
  W.topLeftCorner(nx, nx) =
      (0.5 * (W.topLeftCorner(nx, nx) + W.topLeftCorner(nx, nx).transpose())).eval();
  return W;
}

Feasibility check_feasibility(const MatrixXd& W, double tolerance) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(W, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw AnalysisError("symmetric eigensolver failed on W_L");
  }
  Feasibility f;
  f.lambda_max = solver.eigenvalues().maxCoeff();
  f.feasible = f.lambda_max <= tolerance;
  return f;
}

double spectral_abscissa(const MatrixXd& A) {
  Eigen::EigenSolver<MatrixXd> solver(A, false);
  if (solver.info() != Eigen::Success) {
    throw AnalysisError("eigensolver failed");
  }
  return solver.eigenvalues().real().maxCoeff();
}

MatrixXd solve_lyapunov(const MatrixXd& A, const MatrixXd& Q) {
  const auto k = A.rows();
  // vec(AᵀP + PA) = (I ⊗ Aᵀ + Aᵀ ⊗ I) vec(P), column-major vec.
  const MatrixXd I = MatrixXd::Identity(k, k);
  MatrixXd L = MatrixXd::Zero(k * k, k * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      L.block(i * k, j * k, k, k) += I(i, j) * A.transpose();
      L.block(i * k, j * k, k, k) += A(j, i) * I;
    }
  }
  Eigen::PartialPivLU<MatrixXd> lu(L);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) throw AnalysisError("Lyapunov equation is singular");
  const VectorXd q = -Eigen::Map<const VectorXd>(Q.data(), k * k);
  const VectorXd p = lu.solve(q);
  MatrixXd P = Eigen::Map<const MatrixXd>(p.data(), k, k);
  return 0.5 * (P + P.transpose());
}

DisturbanceBounds DisturbanceBounds::Unit(int n) {
  return {std::vector<double>(n, 1.0), std::vector<double>(n, 1.0),
          std::vector<double>(n, 1.0)};
}

double DisturbanceBounds::sum() const {
  double s = 0.0;
  for (double c : c1) s += c;
  for (double c : c2) s += c;
  for (double c : c3) s += c;
  return s;
}

EllipsoidCertificate search_certificate(const ErrorStateMatrices& m,
                                        const DisturbanceBounds& bounds,
                                        const CertificateSearchOptions& o) {
  const auto dim = m.A_tilde.rows();
  if (m.A_tilde.cols() != dim || m.B_tilde.rows() != dim || m.block_size <= 0 ||
      dim % m.block_size != 0) {
    throw AnalysisError("inconsistent error-state matrix dimensions");
  }
  for (Eigen::Index k = 0; k < dim; k += m.block_size) {
    const double abscissa =
        spectral_abscissa(m.A_tilde.block(k, k, m.block_size, m.block_size));
    if (abscissa >= 0.0) {
      std::ostringstream msg;
      msg << "gains do not stabilize nominal error dynamics (not Hurwitz: block "
          << k / m.block_size << " has an eigenvalue with real part " << abscissa
          << ")";
      throw NotHurwitzError(msg.str());
    }
  }
  const double bound_sum = bounds.sum();

  std::vector<double> grid(o.epsilon_points);
  for (int k = 0; k < o.epsilon_points; ++k) {
    const double frac = o.epsilon_points == 1 ? 0.0 : double(k) / (o.epsilon_points - 1);
    grid[k] = o.epsilon_min * std::pow(o.epsilon_max / o.epsilon_min, frac);
  }

  unsigned threads = o.threads ? o.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, grid.size()));
  std::vector<GridResult> results(grid.size());
  std::vector<std::future<void>> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < grid.size(); k += threads) {
        results[k] = search_epsilon(m, grid[k], bound_sum, o);
      }
    }));
  }
  for (auto& w : workers) w.get();

  // Reduction in grid order keeps the result independent of scheduling.
  const EllipsoidCertificate* best = nullptr;
  double best_lambda = kInf;
  for (const GridResult& r : results) {
    best_lambda = std::min(best_lambda, r.best_lambda);
    if (r.feasible && (!best || better(r.cert, *best))) best = &r.cert;
  }
  if (!best) {
    std::ostringstream msg;
    msg << "no feasible (alpha, epsilon) on the search grid; best lambda_max(W_L) = "
        << best_lambda;
    throw InfeasibleError(msg.str(), best_lambda);
  }
  return *best;
}

DisturbanceBounds estimate_disturbance_bounds(const SimLog& log,
                                              double transient_cutoff) {
  const int n = log.vehicle_count;
  const auto& rec = log.records;
  if (rec.empty() || rec.back().t < transient_cutoff) {
    std::ostringstream msg;
    msg << "log ends at t = " << (rec.empty() ? 0.0 : rec.back().t)
        << " s, before the transient cutoff " << transient_cutoff << " s";
    throw AnalysisError(msg.str());
  }
  DisturbanceBounds b{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                      std::vector<double>(n, 0.0)};
  bool interior = false;
  for (std::size_t k = 0; k < rec.size(); ++k) {
    if (rec[k].t < transient_cutoff) continue;
    const bool central = k > 0 && k + 1 < rec.size();
    interior = interior || central;
    for (int i = 0; i < n; ++i) {
      const VehicleRecord& v = rec[k].vehicles[i];
      b.c1[i] = std::max(b.c1[i], v.zeta.squaredNorm());
      b.c3[i] = std::max(b.c3[i], v.zeta_L.squaredNorm());
      if (central) {
        const double h1 = rec[k].t - rec[k - 1].t;
        const double h2 = rec[k + 1].t - rec[k].t;
        const Vec3& a0 = rec[k - 1].vehicles[i].direction_desired;
        const Vec3& a1 = v.direction_desired;
        const Vec3& a2 = rec[k + 1].vehicles[i].direction_desired;
        // Second difference on a possibly non-uniform grid.
        const Vec3 acc = 2.0 * ((a2 - a1) / h2 - (a1 - a0) / h1) / (h1 + h2);
        b.c2[i] = std::max(b.c2[i], acc.squaredNorm());
      }
    }
  }
  if (!interior) {
    throw AnalysisError("no interior log sample after the cutoff to differentiate");
  }
  return b;
}

Membership ellipsoid_membership(const VectorXd& chi,
                                const EllipsoidCertificate& cert) {
  const double v = chi.dot(cert.P * chi);
  Membership m;
  if (cert.beta > 0.0) {
    m.level = v * cert.alpha / cert.beta;
  } else {
    m.level = v == 0.0 ? 0.0 : kInf;
  }
  m.inside = m.level <= 1.0;
  return m;
}

VectorXd build_chi(const LogRecord& r, const Vec3& load_integral,
                   const std::vector<Vec3>& vehicle_integrals) {
  const int n = static_cast<int>(r.vehicles.size());
  VectorXd chi(9 * (n + 1));
  chi.segment<3>(0) = load_integral;
  chi.segment<3>(3) = r.load_error;
  chi.segment<3>(6) = r.load_velocity - r.ref_velocity;
  for (int i = 0; i < n; ++i) {
    const VehicleRecord& v = r.vehicles[i];
    const int o = 9 * (i + 1);
    chi.segment<3>(o) = vehicle_integrals[i];
    chi.segment<3>(o + 3) = v.position - v.position_desired;
    chi.segment<3>(o + 6) = v.velocity - v.velocity_desired;
  }
  return chi;
}

std::vector<VectorXd> chi_series(const SimLog& log) {
  const int n = log.vehicle_count;
  std::vector<VectorXd> out;
  out.reserve(log.records.size());
  Vec3 load_int = Vec3::Zero();
  std::vector<Vec3> veh_int(n, Vec3::Zero());
  for (std::size_t k = 0; k < log.records.size(); ++k) {
    const LogRecord& r = log.records[k];
    if (k > 0) {
      const LogRecord& p = log.records[k - 1];
      const double h = r.t - p.t;
      load_int += 0.5 * h * (p.load_error + r.load_error);
      for (int i = 0; i < n; ++i) {
        veh_int[i] += 0.5 * h *
                      ((p.vehicles[i].position - p.vehicles[i].position_desired) +
                       (r.vehicles[i].position - r.vehicles[i].position_desired));
      }
    }
    out.push_back(build_chi(r, load_int, veh_int));
  }
  return out;
}

ContainmentStats containment_stats(const SimLog& log,
                                   const EllipsoidCertificate& cert,
                                   double cutoff) {
  const auto dim = 9 * (log.vehicle_count + 1);
  if (cert.P.rows() != dim || cert.P.cols() != dim) {
    std::ostringstream msg;
    msg << "certificate is " << cert.P.rows() << "x" << cert.P.cols()
        << " but the log has " << log.vehicle_count << " vehicles (expected "
        << dim << "x" << dim << ")";
    throw AnalysisError(msg.str());
  }
  const auto chis = chi_series(log);
  ContainmentStats s;
  long inside = 0;
  long violations = 0;
  std::vector<double> V(chis.size());
  for (std::size_t k = 0; k < chis.size(); ++k) {
    V[k] = chis[k].dot(cert.P * chis[k]);
    const Membership m = ellipsoid_membership(chis[k], cert);
    s.times.push_back(log.records[k].t);
    s.levels.push_back(m.level);
    if (log.records[k].t >= cutoff) {
      ++s.samples;
      if (m.inside) ++inside;
    }
  }
  for (std::size_t k = 0; k + 1 < chis.size(); ++k) {
    if (log.records[k].t < cutoff) continue;
    const double h = log.records[k + 1].t - log.records[k].t;
    const double tol = 0.01 * cert.beta * h + 1e-12;
    ++s.lyapunov_samples;
    if (V[k + 1] - V[k] > (-cert.alpha * V[k] + cert.beta) * h + tol) ++violations;
  }
  s.containment_fraction = s.samples ? double(inside) / s.samples : 0.0;
  s.lyapunov_violation_rate =
      s.lyapunov_samples ? double(violations) / s.lyapunov_samples : 0.0;
  return s;
}

}  // namespace slungload

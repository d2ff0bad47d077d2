#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "slungload/analysis.hpp"
#include "slungload/error.hpp"
#include "slungload/log.hpp"
#include "slungload/plot.hpp"
#include "slungload/report.hpp"
#include "slungload/scenario.hpp"
#include "slungload/simulation.hpp"

namespace slungload::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct SimulateArgs {
  std::string config;
  std::string out = "out";
  std::optional<double> duration;
  std::optional<double> dt;
  std::optional<int> decimate;
  bool plots = false;
  std::string batch;
};

struct CertifyArgs {
  std::string config;
  std::string log;
  std::optional<double> cutoff;
  std::string out = "certificate.json";
  unsigned threads = 0;
};

struct AnalyzeArgs {
  std::string log;
  std::string cert;
  double cutoff = 5.0;
  std::string out;
};

struct PlotArgs {
  std::string log;
  std::string out = "plots";
};

// Reserved for future stochastic features; must parse as an integer when set.
void check_seed() {
  const char* seed = std::getenv("SLUNGLOAD_SEED");
  if (!seed) return;
  const std::string s(seed);
  long long value = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("SLUNGLOAD_SEED", "must be an integer, got '" + s + "'");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

ScenarioConfig config_from(const std::string& path) {
  return path.empty() ? ScenarioConfig::Default() : load_config_file(path);
}

// Applies command-line overrides and revalidates through the document path
// so range errors name the same fields as a config file would.
ScenarioConfig with_overrides(ScenarioConfig c, const SimulateArgs& a) {
  if (a.duration) c.duration = *a.duration;
  if (a.dt) c.dt = *a.dt;
  if (a.decimate) c.output.decimate = *a.decimate;
  if (a.plots) c.output.plots = true;
  return load_config(to_json(c));
}

int simulate_one(const ScenarioConfig& config, const fs::path& dir, std::ostream& out) {
  fs::create_directories(dir);
  const SimulationResult result = simulate(config);
  write_log_csv(dir / "log.csv", result.log);
  const json summary = summarize(config, result);
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  write_text(dir / "config.json", to_json(config).dump(2) + "\n");
  if (config.output.plots) write_plots(result.log, dir);
  out << "wrote " << (dir / "log.csv").string() << " (" << result.log.records.size()
      << " records)\n"
      << "final |x_e| = " << summary["load_error"]["final"].get<double>()
      << " m, max constraint residual = " << result.max_constraint_residual
      << " m, slack steps = " << result.slack_events
      << ", runtime = " << std::setprecision(3) << result.wall_time << " s\n";
  return kOk;
}

int code_for(const std::exception_ptr& e, std::ostream& err) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError& x) {
    err << "config error: " << x.what() << "\n";
    return kUsage;
  } catch (const DynamicsError& x) {
    err << "dynamics error: " << x.what() << "\n";
    return kDivergence;
  } catch (const InfeasibleError& x) {
    err << "infeasible: " << x.what() << " (best lambda_max = " << x.best_lambda_max()
        << ")\n";
    return kInfeasible;
  } catch (const NotHurwitzError& x) {
    err << "error: " << x.what() << "\n";
    return kUsage;
  } catch (const LogFormatError& x) {
    err << "log error: " << x.what() << "\n";
    return kUsage;
  } catch (const AnalysisError& x) {
    err << "analysis error: " << x.what() << "\n";
    return kUsage;
  } catch (const std::exception& x) {
    err << "error: " << x.what() << "\n";
    return kUsage;
  }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.batch.empty()) {
    return simulate_one(with_overrides(config_from(a.config), a), a.out, out);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.batch)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("--batch", "no *.json configs in " + a.batch);

  std::vector<int> codes(files.size(), kOk);
  std::vector<std::string> logs(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) {
      std::ostringstream o, e;
      try {
        codes[i] = simulate_one(with_overrides(load_config_file(files[i]), a),
                                fs::path(a.out) / files[i].stem(), o);
      } catch (...) {
        codes[i] = code_for(std::current_exception(), e);
      }
      logs[i] = "[" + files[i].stem().string() + "] " + o.str() + e.str();
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(files.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  int worst = kOk;
  for (std::size_t i = 0; i < files.size(); ++i) {
    (codes[i] == kOk ? out : err) << logs[i];
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  ScenarioConfig config = config_from(a.config);
  if (a.cutoff) config.output.analysis_cutoff = *a.cutoff;
  const int n = config.vehicle_count();
  const ErrorStateMatrices m = build_error_matrices(config.params, config.gains);

  std::optional<SimLog> log;
  DisturbanceBounds bounds = DisturbanceBounds::Unit(n);
  std::string source = "unit";
  if (!a.log.empty()) {
    log = read_log_csv(fs::path(a.log));
    if (log->vehicle_count != n) {
      throw AnalysisError("log has " + std::to_string(log->vehicle_count) +
                          " vehicles, config has " + std::to_string(n));
    }
    bounds = estimate_disturbance_bounds(*log, config.output.analysis_cutoff);
    source = "log";
  }
  CertificateSearchOptions options;
  options.threads = a.threads;
  const EllipsoidCertificate cert = search_certificate(m, bounds, options);
  std::optional<ContainmentStats> stats;
  if (log) stats = containment_stats(*log, cert, config.output.analysis_cutoff);

  const json doc = certificate_to_json(cert, bounds, source, config, stats);
  write_text(a.out, doc.dump(2) + "\n");
  out << "certificate feasible\n"
      << "  alpha = " << cert.alpha << "\n  epsilon = " << cert.epsilon
      << "\n  beta = " << cert.beta << "\n  lambda_max(W_L) = " << cert.lambda_max
      << "\n  radius beta/alpha = " << cert.radius_sq
      << "\n  trace metric = " << cert.trace_metric << "\n  bounds: " << source
      << " (sum " << bounds.sum() << ")\n";
  if (stats) {
    out << "  containment after " << config.output.analysis_cutoff
        << " s = " << 100.0 * stats->containment_fraction << " % of " << stats->samples
        << " samples\n";
  }
  out << "wrote " << a.out << "\n";
  return kOk;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const SimLog log = read_log_csv(fs::path(a.log));
  const EllipsoidCertificate cert = load_certificate(a.cert);
  const ContainmentStats stats = containment_stats(log, cert, a.cutoff);
  json doc = containment_to_json(stats, a.cutoff);
  try {
    doc["disturbance_bounds"] = bounds_to_json(estimate_disturbance_bounds(log, a.cutoff));
  } catch (const AnalysisError& e) {
    doc["disturbance_bounds"] = nullptr;
    out << "disturbance bounds unavailable: " << e.what() << "\n";
  }
  out << "containment after " << a.cutoff << " s: " << 100.0 * stats.containment_fraction
      << " % of " << stats.samples << " samples\n"
      << "Lyapunov decrease violations: " << 100.0 * stats.lyapunov_violation_rate
      << " % of " << stats.lyapunov_samples << " steps\n";
  if (!doc["disturbance_bounds"].is_null()) {
    const auto& b = doc["disturbance_bounds"];
    for (const char* k : {"c1", "c2", "c3"}) out << k << " = " << b[k].dump() << "\n";
  }
  if (!a.out.empty()) {
    write_text(a.out, doc.dump(2) + "\n");
    out << "wrote " << a.out << "\n";
  }
  return kOk;
}

int cmd_plot(const PlotArgs& a, std::ostream& out) {
  const SimLog log = read_log_csv(fs::path(a.log));
  const auto files = write_plots(log, a.out);
  out << "wrote " << files.size() << " files to " << a.out << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cable-suspended load transport by n quadrotors: simulate, certify, analyze"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "run a closed-loop simulation");
  s->add_option("--config", sim.config, "scenario JSON (defaults when omitted)");
  s->add_option("--out", sim.out, "output directory")->capture_default_str();
  s->add_option("--duration", sim.duration, "override duration (s)");
  s->add_option("--dt", sim.dt, "override integrator step (s)");
  s->add_option("--decimate", sim.decimate, "log every k-th step");
  s->add_flag("--plots", sim.plots, "write SVG and .dat plots");
  s->add_option("--batch", sim.batch, "run every *.json in this directory concurrently");

  CertifyArgs cert;
  auto* c = app.add_subcommand("certify", "search an attractive-ellipsoid certificate");
  c->add_option("--config", cert.config, "scenario JSON (defaults when omitted)");
  c->add_option("--log", cert.log, "log.csv used for disturbance bounds and containment");
  c->add_option("--cutoff", cert.cutoff, "transient cutoff (s)");
  c->add_option("--out", cert.out, "certificate path")->capture_default_str();
  c->add_option("--threads", cert.threads, "worker threads (0 = all cores)");

  AnalyzeArgs an;
  auto* z = app.add_subcommand("analyze", "check a log against a certificate");
  z->add_option("--log", an.log, "log.csv")->required();
  z->add_option("--cert", an.cert, "certificate.json")->required();
  z->add_option("--cutoff", an.cutoff, "transient cutoff (s)")->capture_default_str();
  z->add_option("--out", an.out, "write the report as JSON");

  PlotArgs pl;
  auto* p = app.add_subcommand("plot", "render plots from a log");
  p->add_option("--log", pl.log, "log.csv")->required();
  p->add_option("--out", pl.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    check_seed();
    if (*s) return cmd_simulate(sim, out, err);
    if (*c) return cmd_certify(cert, out);
    if (*z) return cmd_analyze(an, out);
    if (*p) return cmd_plot(pl, out);
  } catch (...) {
    return code_for(std::current_exception(), err);
  }
  return kUsage;
}

}  // namespace slungload::cli

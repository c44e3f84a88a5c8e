#include "wsnd/app.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsnd/errors.hpp"
#include "wsnd/format.hpp"
#include "wsnd/montecarlo.hpp"
#include "wsnd/quantize.hpp"
#include "wsnd/solver_central.hpp"
#include "wsnd/solver_dist.hpp"
#include "wsnd/version.hpp"

namespace wsnd::app {

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

PowerAllocation optimal_powers(const ExperimentConfig& cfg, const Scenario& sc) {
  if (cfg.power_method == "distributed") return solve_distributed(sc).allocation;
  return solve_centralized(sc);
}

const char* kResultsHeader =
    "scheme,Pt,N,M,pfa_target,pfa_hat,pd_hat,pd_analytic,trials,sigma_binomial\n";
const char* kDiagnosticsHeader =
    "scheme,Pt,N,transmitting,zero_bit_active,clip_rate_h0,clip_rate_h1,quant_offset,"
    "pfa_bias\n";

void write_result_row(std::ostream& os, const DetectionEstimate& e, const Scenario& sc) {
  os << to_string(e.scheme) << ',' << format_double(sc.Pt) << ',' << sc.N() << ',' << sc.M()
     << ',' << format_double(e.pfa_target) << ',' << format_double(e.pfa_hat) << ','
     << format_double(e.pd_hat) << ',' << format_double(e.pd_analytic) << ',' << e.trials << ','
     << format_double(e.sigma_pd) << '\n';
}

void write_diag_row(std::ostream& os, Scheme s, const Scenario& sc, const TrialDiagnostics& d,
                    double pfa_bias) {
  os << to_string(s) << ',' << format_double(sc.Pt) << ',' << sc.N() << ',' << d.transmitting
     << ',' << d.zero_bit_active << ',' << format_double(d.clip_rate_h0) << ','
     << format_double(d.clip_rate_h1) << ',' << format_double(d.quant_offset) << ','
     << format_double(pfa_bias) << '\n';
}

} // namespace

Method parse_method(const std::string& s) {
  if (s == "central") return Method::kCentral;
  if (s == "distributed") return Method::kDistributed;
  if (s == "both") return Method::kBoth;
  throw UsageError("unknown method '" + s + "'");
}

Sweep parse_sweep(const std::string& s) {
  if (s == "pt") return Sweep::kPt;
  if (s == "pfa") return Sweep::kPfa;
  if (s == "n") return Sweep::kN;
  throw UsageError("unknown sweep '" + s + "'");
}

RunOutput run_allocate(const ExperimentConfig& cfg, Method method, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const Scenario sc = build_scenario(cfg);
  RunOutput out;
  std::optional<PowerAllocation> central;
  std::optional<PowerAllocation> dist;
  if (method != Method::kDistributed) central = solve_centralized(sc);
  if (method != Method::kCentral) {
    try {
      auto r = solve_distributed(sc);
      dist = r.allocation;
      const auto path = out_dir / "trace.csv";
      auto os = open_out(path);
      write_trace_csv(os, r.trace);
      out.files.push_back(path);
    } catch (const DistributedConvergenceError& e) {
      const auto path = out_dir / "trace_failed.csv";
      auto os = open_out(path);
      write_trace_csv(os, e.trace());
      throw;
    }
  }

  const auto path = out_dir / "allocation.csv";
  auto os = open_out(path);
  os << "i,h_i,sigma2_i,xi_i,p_central,p_distributed,bits_real,bits_int,censored\n";
  const PowerAllocation& primary = dist ? *dist : *central;
  for (int i = 0; i < sc.M(); ++i) {
    const auto& s = sc.sensors[i];
    const auto q = make_quant_spec(primary.p[i], s.h(), s.zeta(), sc.U);
    os << i + 1 << ',' << format_double(s.h()) << ',' << format_double(s.sigma2()) << ','
       << format_double(s.xi()) << ',' << (central ? format_double(central->p[i]) : "") << ','
       << (dist ? format_double(dist->p[i]) : "") << ',' << format_double(q.bits_real) << ','
       << q.bits_int << ',' << (q.censored ? 1 : 0) << '\n';
  }
  out.files.push_back(path);

  std::ostringstream summary;
  if (central) summary << "central lambda0=" << format_double(central->lambda0) << ' ';
  if (dist) summary << "distributed lambda0=" << format_double(dist->lambda0) << ' ';
  if (central && dist) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < sc.M(); ++i) {
      num += (dist->p[i] - central->p[i]) * (dist->p[i] - central->p[i]);
      den += central->p[i] * central->p[i];
    }
    summary << "relative_difference=" << format_double(std::sqrt(num / den));
  }
  out.summary = summary.str();
  return out;
}

RunOutput run_detect(const ExperimentConfig& cfg, Sweep sweep, std::optional<long> trials,
                     int workers, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  TrialOptions opts;
  opts.trials = trials.value_or(cfg.trials);
  opts.workers = workers;
  opts.threshold = cfg.threshold;
  const auto schemes = cfg.schemes.empty() ? all_schemes() : cfg.schemes;

  std::string tag;
  std::vector<std::pair<int, double>> points; // (N, Pt)
  switch (sweep) {
  case Sweep::kPt:
    tag = "pt";
    if (cfg.sweep_pt.empty()) throw ConfigError("config: 'sweep_pt' is required for --sweep pt");
    for (double pt : cfg.sweep_pt) points.emplace_back(cfg.samples, pt);
    break;
  case Sweep::kN:
    tag = "n";
    if (cfg.sweep_n.empty()) throw ConfigError("config: 'sweep_n' is required for --sweep n");
    for (int n : cfg.sweep_n) points.emplace_back(n, cfg.Pt);
    break;
  case Sweep::kPfa:
    tag = "pfa";
    if (cfg.sweep_pfa.empty()) throw ConfigError("config: 'sweep_pfa' is required for --sweep pfa");
    if (cfg.sweep_n.empty()) {
      points.emplace_back(cfg.samples, cfg.Pt);
    } else {
      for (int n : cfg.sweep_n) points.emplace_back(n, cfg.Pt);
    }
    break;
  }

  const auto path = out_dir / ("detect_" + tag + ".csv");
  const auto diag_path = out_dir / ("detect_" + tag + "_diagnostics.csv");
  auto os = open_out(path);
  auto ds = open_out(diag_path);
  os << kResultsHeader;
  ds << kDiagnosticsHeader;
  // Raw statistics depend on N but not on Pt or the scheme.
  std::optional<int> raw_n;
  RawSet raw;
  for (const auto& [n, pt] : points) {
    const Scenario sc = build_scenario(cfg, n, pt);
    if (raw_n != n) {
      raw = simulate_raw(sc, opts);
      raw_n = n;
    }
    const PowerAllocation opt = optimal_powers(cfg, sc);
    for (Scheme s : schemes) {
      const auto setup = setup_scheme(sc, s, opt);
      const auto samples = fuse_raw(raw, sc, setup);
      if (sweep == Sweep::kPfa) {
        for (double pfa : cfg.sweep_pfa) {
          write_result_row(os, evaluate(samples, setup, pfa, opts.threshold), sc);
        }
        const auto e = evaluate(samples, setup, sc.Pfa, opts.threshold);
        write_diag_row(ds, s, sc, samples.diagnostics, e.pfa_hat - e.pfa_target);
      } else {
        const auto e = evaluate(samples, setup, sc.Pfa, opts.threshold);
        write_result_row(os, e, sc);
        write_diag_row(ds, s, sc, samples.diagnostics, e.pfa_hat - e.pfa_target);
      }
    }
  }
  RunOutput out;
  out.files = {path, diag_path};
  out.summary = "wrote " + path.string();
  return out;
}

RunOutput run_trace(const ExperimentConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const Scenario sc = build_scenario(cfg);
  RunOutput out;
  const auto path = out_dir / "trace.csv";
  DistributedResult r;
  try {
    r = solve_distributed(sc);
  } catch (const DistributedConvergenceError& e) {
    auto os = open_out(path);
    write_trace_csv(os, e.trace());
    throw;
  }
  {
    auto os = open_out(path);
    write_trace_csv(os, r.trace);
  }
  std::ostringstream summary;
  summary << "iterations=" << r.trace.rows.size()
          << " final_rel_step=" << format_double(r.trace.rows.back().rel_step)
          << " consensus_rounds=" << r.trace.total_consensus_rounds()
          << " lambda0=" << format_double(r.allocation.lambda0);
  const auto sum_path = out_dir / "trace_summary.txt";
  {
    auto os = open_out(sum_path);
    os << summary.str() << '\n';
  }
  out.files = {path, sum_path};
  out.summary = summary.str();
  return out;
}

fs::path write_manifest(const ExperimentConfig& cfg, const std::string& command,
                        const std::vector<fs::path>& files, double seconds,
                        const fs::path& out_dir) {
  nlohmann::json j;
  j["command"] = command;
  j["scenario"] = cfg.name;
  j["scenario_digest"] = config_digest(cfg);
  j["versions"] = {{"wsnd", kVersion}, {"schema_version", cfg.schema_version}};
  j["outputs"] = nlohmann::json::array();
  for (const auto& f : files) {
    j["outputs"].push_back({{"path", f.filename().string()}, {"bytes", fs::file_size(f)}});
  }
  j["wall_seconds"] = seconds;
  const auto path = out_dir / "manifest.json";
  auto os = open_out(path);
  os << j.dump(2) << '\n';
  return path;
}

int main(int argc, char** argv) {
  CLI::App cli{"Decentralized detection: power allocation and Monte Carlo experiments"};
  cli.require_subcommand(1);

  const char* env_out = std::getenv("WSND_OUT_DIR");
  std::string default_out = env_out ? env_out : "out";

  std::string config_path;
  std::string method = "both";
  std::string sweep = "pt";
  std::string out_dir = default_out;
  long trials = 0;
  int workers = 1;

  auto* allocate = cli.add_subcommand("allocate", "Solve the power allocation");
  allocate->add_option("config", config_path, "Scenario config file")->required();
  allocate->add_option("--method", method, "central | distributed | both")
      ->check(CLI::IsMember({"central", "distributed", "both"}));
  allocate->add_option("--out", out_dir, "Output directory (default $WSND_OUT_DIR or ./out)");

  auto* detect = cli.add_subcommand("detect", "Run Monte Carlo detection sweeps");
  detect->add_option("config", config_path, "Scenario config file")->required();
  detect->add_option("--sweep", sweep, "pt | pfa | n")->check(CLI::IsMember({"pt", "pfa", "n"}));
  detect->add_option("--trials", trials, "Trials per point (overrides config)")
      ->check(CLI::PositiveNumber);
  detect->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  detect->add_option("--out", out_dir, "Output directory (default $WSND_OUT_DIR or ./out)");

  auto* trace = cli.add_subcommand("trace", "Export the dual-ascent trace");
  trace->add_option("config", config_path, "Scenario config file")->required();
  trace->add_option("--out", out_dir, "Output directory (default $WSND_OUT_DIR or ./out)");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other command-line mistake is a usage error.
    return cli.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    RunOutput out;
    std::string command;
    if (allocate->parsed()) {
      command = "allocate";
      out = run_allocate(cfg, parse_method(method), out_dir);
    } else if (detect->parsed()) {
      command = "detect";
      out = run_detect(cfg, parse_sweep(sweep), trials > 0 ? std::optional<long>(trials) : std::nullopt,
                       workers, out_dir);
    } else {
      command = "trace";
      out = run_trace(cfg, out_dir);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(cfg, command, out.files, secs, out_dir);
    std::cout << out.summary << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UsageError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TopologyError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DistributedConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "; trace written to "
              << (fs::path(out_dir) / (allocate->parsed() ? "trace_failed.csv" : "trace.csv")).string()
              << '\n';
    return kExitConvergence;
  } catch (const NoSignalError& e) {
    std::cerr << "convergence error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

} // namespace wsnd::app

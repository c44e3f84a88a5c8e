#include "wsnd/solver_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "wsnd/consensus.hpp"
#include "wsnd/errors.hpp"
#include "wsnd/format.hpp"

namespace wsnd {

double step_size(StepRule rule, double lambda0_k, int k) {
  switch (rule) {
  case StepRule::kLambdaOverK:
    return k == 0 ? lambda0_k : lambda0_k / k;
  }
  throw UsageError("step_size: unknown rule");
}

double dual_update(double lambda0_k, double mean_power, int M, double Pt, double eps_k,
                   double lambda_min) {
  if (!(eps_k > 0.0)) throw UsageError("dual_update: step must be positive");
  return std::max(lambda0_k + eps_k * (M * mean_power - Pt), lambda_min);
}

long DualAscentTrace::total_consensus_rounds() const {
  long n = 0;
  for (const auto& r : rows) n += r.consensus_iters;
  return n;
}

void write_trace_csv(std::ostream& os, const DualAscentTrace& trace) {
  const std::size_t m = trace.rows.empty() ? 0 : trace.rows.front().p.size();
  os << "k,lambda0";
  for (std::size_t i = 1; i <= m; ++i) os << ",p_" << i;
  os << ",consensus_iters,rel_step\n";
  for (const auto& r : trace.rows) {
    os << r.k << ',' << format_double(r.lambda0);
    for (double p : r.p) os << ',' << format_double(p);
    os << ',' << r.consensus_iters << ',' << format_double(r.rel_step) << '\n';
  }
}

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

} // namespace

DistributedResult solve_distributed(const Scenario& scenario) {
  scenario.validate();
  const int m = scenario.M();
  const auto& cfg = scenario.solver;

  ConsensusOptions copts;
  copts.tol = cfg.consensus_tol;
  copts.max_iter = cfg.consensus_max_iter > 0 ? cfg.consensus_max_iter : 10 * m * m;
  copts.stop = cfg.consensus_stop;
  copts.window = cfg.consensus_window;

  std::vector<double> lambda(m, cfg.lambda0_init);
  std::vector<double> p(m), p_next(m);
  std::vector<double> mean_estimate(m);
  DualAscentTrace trace;
  double lambda_used = cfg.lambda0_init;

  // One round of the protocol: local primal step, consensus on the powers,
  // local dual step. Returns the consensus rounds used.
  auto round = [&](int k, std::vector<double>& out) {
    for (int i = 0; i < m; ++i) out[i] = local_power_update(lambda[i], scenario.sensors[i], scenario.U);
    ConsensusResult cr;
    // Early iterates can be many orders above the budget, so the consensus
    // tolerance is taken relative to the largest power once that exceeds 1.
    ConsensusOptions step_opts = copts;
    step_opts.tol = cfg.consensus_tol * std::max(1.0, *std::max_element(out.begin(), out.end()));
    try {
      cr = consensus_average(scenario.topology, out, step_opts);
    } catch (const ConsensusError& e) {
      throw DistributedConvergenceError(std::string("solve_distributed: ") + e.what(), trace);
    }
    mean_estimate = cr.values;
    lambda_used = lambda[0];
    for (int i = 0; i < m; ++i) {
      const double eps = step_size(cfg.step_rule, lambda[i], k);
      lambda[i] = dual_update(lambda[i], mean_estimate[i], m, scenario.Pt, eps, cfg.lambda_min);
    }
    return cr.iterations;
  };

  auto record = [&](int k, const std::vector<double>& powers, int iters, double rel) {
    const auto [lo, hi] = std::minmax_element(lambda.begin(), lambda.end());
    trace.rows.push_back({k, lambda[0], *hi - *lo, powers, iters, rel});
  };

  // k = 0: initialize, first primal step, consensus, first dual step.
  int iters = round(0, p);
  record(1, p, iters, std::numeric_limits<double>::quiet_NaN());

  bool converged = false;
  for (int k = 1; k < cfg.outer_max_iter; ++k) {
    iters = round(k, p_next);
    const double base = norm(p);
    double rel = std::numeric_limits<double>::infinity();
    if (base > 0.0) {
      double d = 0.0;
      for (int i = 0; i < m; ++i) d += (p_next[i] - p[i]) * (p_next[i] - p[i]);
      rel = std::sqrt(d) / base;
    }
    p.swap(p_next);
    record(k + 1, p, iters, rel);
    if (rel <= cfg.kappa) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw DistributedConvergenceError("solve_distributed: relative step did not reach kappa within " +
                                          std::to_string(cfg.outer_max_iter) + " iterations",
                                      std::move(trace));
  }

  // Each sensor knows the network mean power from the last consensus; if the
  // budget is exceeded it scales its own power back onto the budget.
  for (int i = 0; i < m; ++i) {
    const double network_total = m * mean_estimate[i];
    if (network_total > scenario.Pt) p[i] *= scenario.Pt / network_total;
  }

  DistributedResult result;
  result.allocation.p = p;
  result.allocation.lambda0 = lambda_used;
  result.trace = std::move(trace);
  return result;
}

} // namespace wsnd

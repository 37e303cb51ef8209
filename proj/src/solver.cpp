#include "spdeconv/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "spdeconv/errors.hpp"

namespace spdeconv {

namespace {

constexpr double kFeasibleObjectiveTol = -1e-9;
constexpr int kMaxArmijoTrials = 60;

Index support_count(const CoefVec& a, double threshold) {
  return (a.array().abs() >= threshold).count();
}

void check_finite_iterate(const CoefVec& a, int iteration) {
  if (!a.array().isFinite().all()) {
    std::ostringstream os;
    os << "solver diverged: non-finite iterate at iteration " << iteration;
    throw NumericalError(os.str());
  }
}

double record_objective(const FidelityModel& m, const Penalty& p, double lambda,
                        const CoefVec& a, int iteration, std::vector<double>* history) {
  double value;
  try {
    value = objective(m, p, lambda, a).finite_part;
  } catch (const std::exception&) {
    value = std::numeric_limits<double>::quiet_NaN();
  }
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "solver diverged: non-finite objective at iteration " << iteration;
    throw NumericalError(os.str());
  }
  if (history) history->push_back(value);
  return value;
}

void finalize_report(const FidelityModel& m, const SolverConfig& cfg, double mu_for_support,
                     SolverReport& report) {
  report.restored = m.dict().synthesize(report.coefficients);
  report.mu_used = mu_for_support;
  report.support_size = support_count(report.coefficients, cfg.lambda * mu_for_support);
}

} // namespace

double ObjectiveValue::total() const {
  return feasible ? finite_part : std::numeric_limits<double>::infinity();
}

ObjectiveValue objective(const FidelityModel& m, const Penalty& p, double lambda,
                         const CoefVec& a) {
  ObjectiveValue v;
  double penalty = 0.0;
  for (Index i = 0; i < a.size(); ++i) penalty += p.value(a[i]);
  v.finite_part = fidelity_value(m, a) + lambda * penalty;
  v.feasible = m.dict().synthesize(a).minCoeff() >= kFeasibleObjectiveTol;
  return v;
}

double auto_step_size(const FidelityModel& m) { return 0.9 * m.step_supremum(); }

SolverReport solve_fb(const FidelityModel& m, const Penalty& p, const SolverConfig& cfg,
                      const CoefVec& a0) {
  if (cfg.algo != Algo::fb) throw std::invalid_argument("solve_fb: cfg.algo must be fb");
  if (cfg.lambda < 0) throw std::invalid_argument("solve_fb: lambda must be >= 0");
  if (!(cfg.beta > 0.0 && cfg.beta <= 1.0))
    throw std::invalid_argument("solve_fb: beta must lie in (0, 1]");
  if (a0.size() != m.dict().num_coefficients())
    throw std::invalid_argument("solve_fb: a0 length mismatch");

  SolverReport report;
  const double mu = cfg.mu.value_or(auto_step_size(m));
  if (!(mu > 0)) throw std::invalid_argument("solve_fb: mu must be > 0");
  if (mu >= m.step_supremum()) {
    std::ostringstream os;
    os << "step size " << mu << " is at or above the admissible supremum "
       << m.step_supremum() << "; convergence is not guaranteed";
    report.warnings.push_back(os.str());
  }

  CoefVec a = a0;
  if (cfg.record_history) {
    record_objective(m, p, cfg.lambda, a, 0, &report.objective_history);
    report.support_history.push_back(support_count(a, cfg.lambda * mu));
    report.mu_history.push_back(mu);
    report.step_norms.push_back(0.0);
  }

  int t = 0;
  for (; t < cfg.n_fb; ++t) {
    const CoefVec grad = fidelity_gradient(m, a);
    const CoefVec forward = a - mu * grad;
    const CoefVec prox = prox_f2(m.dict(), p, cfg.lambda * mu, forward, cfg.dr);
    const CoefVec a_next = a + cfg.beta * (prox - a);
    check_finite_iterate(a_next, t + 1);

    const double step_norm = (a_next - a).norm();
    const double base_norm = a.norm();
    a = a_next;

    if (cfg.record_history) {
      record_objective(m, p, cfg.lambda, a, t + 1, &report.objective_history);
      report.support_history.push_back(support_count(a, cfg.lambda * mu));
      report.mu_history.push_back(mu);
      report.step_norms.push_back(step_norm);
    }
    if (cfg.tol > 0 && step_norm <= cfg.tol * std::max(base_norm, 1.0)) {
      ++t;
      break;
    }
  }

  report.coefficients = std::move(a);
  report.iterations_run = t;
  finalize_report(m, cfg, mu, report);
  return report;
}

SolverReport solve_tseng(const FidelityModel& m, const Penalty& p, const SolverConfig& cfg,
                         const CoefVec& a0) {
  if (cfg.algo != Algo::tseng)
    throw std::invalid_argument("solve_tseng: cfg.algo must be tseng");
  if (cfg.lambda < 0) throw std::invalid_argument("solve_tseng: lambda must be >= 0");
  if (a0.size() != m.dict().num_coefficients())
    throw std::invalid_argument("solve_tseng: a0 length mismatch");
  const TsengParams& ts = cfg.tseng;
  if (!(ts.tau > 0 && ts.tau < 1) || !(ts.theta > 0 && ts.theta < 1) || !(ts.sigma > 0))
    throw std::invalid_argument("solve_tseng: need tau, theta in (0,1) and sigma > 0");

  SolverReport report;
  // The iteration assumes a feasible start.
  CoefVec a = project_positive_coefs(m.dict(), a0);
  double mu = ts.sigma;

  if (cfg.record_history) {
    record_objective(m, p, cfg.lambda, a, 0, &report.objective_history);
    report.support_history.push_back(support_count(a, 0.0));
    report.mu_history.push_back(0.0);
    report.step_norms.push_back(0.0);
  }

  int t = 0;
  for (; t < cfg.n_fb; ++t) {
    const CoefVec grad = fidelity_gradient(m, a);

    CoefVec a_half, grad_half;
    mu = ts.sigma;
    bool accepted = false;
    for (int trial = 0; trial < kMaxArmijoTrials; ++trial) {
      a_half = prox_penalty(p, cfg.lambda * mu, a - mu * grad);
      grad_half = fidelity_gradient(m, a_half);
      const double lhs = mu * (grad_half - grad).norm();
      const double rhs = ts.theta * (a_half - a).norm();
      if (lhs <= rhs) {
        accepted = true;
        break;
      }
      mu *= ts.tau;
    }
    if (!accepted) {
      std::ostringstream os;
      os << "Armijo line search failed after " << kMaxArmijoTrials
         << " reductions at iteration " << t + 1;
      throw NumericalError(os.str());
    }

    const CoefVec a_next =
        project_positive_coefs(m.dict(), a_half - mu * (grad_half - grad));
    check_finite_iterate(a_next, t + 1);

    const double step_norm = (a_next - a).norm();
    const double base_norm = a.norm();
    a = a_next;

    if (cfg.record_history) {
      record_objective(m, p, cfg.lambda, a, t + 1, &report.objective_history);
      report.support_history.push_back(support_count(a, cfg.lambda * mu));
      report.mu_history.push_back(mu);
      report.step_norms.push_back(step_norm);
    }
    if (cfg.tol > 0 && step_norm <= cfg.tol * std::max(base_norm, 1.0)) {
      ++t;
      break;
    }
  }

  report.coefficients = std::move(a);
  report.iterations_run = t;
  finalize_report(m, cfg, mu, report);
  return report;
}

SolverReport solve(const FidelityModel& m, const Penalty& p, const SolverConfig& cfg,
                   const CoefVec& a0) {
  return cfg.algo == Algo::fb ? solve_fb(m, p, cfg, a0) : solve_tseng(m, p, cfg, a0);
}

} // namespace spdeconv

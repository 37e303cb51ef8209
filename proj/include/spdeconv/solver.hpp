#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spdeconv/fidelity.hpp"
#include "spdeconv/prox.hpp"
#include "spdeconv/types.hpp"

namespace spdeconv {

enum class Algo { fb, tseng };

/// Armijo backtracking constants for the adaptive-step algorithm: step
/// candidates sigma, tau*sigma, tau^2*sigma, ... accepted when
/// mu*||grad difference|| <= theta*||iterate difference||.
struct TsengParams {
  double tau = 0.5;
  double theta = 0.9;
  double sigma = 1.0;
};

struct SolverConfig {
  Algo algo = Algo::fb;
  double lambda = 0.0;
  std::optional<double> mu;  // empty = auto (0.9 * step supremum)
  int n_fb = 200;
  double beta = 1.0;         // relaxation in (0, 1]
  DrConfig dr{};
  TsengParams tseng{};
  double tol = 0.0;          // relative-change stop; 0 disables
  bool record_history = true;
};

struct ObjectiveValue {
  double finite_part = 0.0;  // fidelity + lambda * sum psi(a_i)
  bool feasible = true;      // min(Phi a) >= -1e-9
  double total() const;      // +inf when infeasible
};

/// J(a) = fidelity + indicator of positivity + lambda * sum psi(a_i).
ObjectiveValue objective(const FidelityModel& m, const Penalty& p,
                         double lambda, const CoefVec& a);

struct SolverReport {
  CoefVec coefficients;
  Image restored;                      // synthesize(coefficients)
  std::vector<double> objective_history;
  std::vector<double> mu_history;
  std::vector<double> step_norms;
  std::vector<Index> support_history;
  Index support_size = 0;              // count of |a_i| >= lambda * mu_used
  int iterations_run = 0;
  double mu_used = 0.0;                // last accepted step for tseng
  std::vector<std::string> warnings;
};

/// 0.9 * step_supremum, strictly inside the admissible range.
double auto_step_size(const FidelityModel& m);

/// Forward-backward iteration
///   a <- a + beta * (prox_{mu f2}(a - mu * grad f1(a)) - a),
/// where prox_{mu f2} is prox_f2 with the penalty scaled to lambda*mu.
SolverReport solve_fb(const FidelityModel& m, const Penalty& p,
                      const SolverConfig& cfg, const CoefVec& a0);

/// Adaptive-step forward-backward-forward iteration with Armijo search:
///   a_half = prox_{lambda*mu psi}(a - mu * grad f1(a))
///   a_next = P(a_half - mu * (grad f1(a_half) - grad f1(a)))
/// with P the positivity prox. The start point is projected feasible.
SolverReport solve_tseng(const FidelityModel& m, const Penalty& p,
                         const SolverConfig& cfg, const CoefVec& a0);

/// Dispatch on cfg.algo.
SolverReport solve(const FidelityModel& m, const Penalty& p,
                   const SolverConfig& cfg, const CoefVec& a0);

} // namespace spdeconv

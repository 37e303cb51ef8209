#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spdeconv/solver.hpp"

namespace spdeconv {

struct GcvPoint {
  double lambda = 0.0;
  double gcv = std::numeric_limits<double>::infinity();
  Index df = 0;
  double residual_ss = 0.0;
  std::optional<double> mae;  // vs reference, when one is supplied
  std::optional<double> mse;
  bool failed = false;
  std::string error;
};

/// Support-count estimate of the effective degrees of freedom:
/// Card{i : |a_i| >= lambda * mu}.
Index degrees_of_freedom(const CoefVec& a, double lambda, double mu);

/// GCV(lambda) = ||z - 2*sqrt(max(H Phi a*, 0) + offset)||^2 / (n - df)^2,
/// with +inf when df >= n.
GcvPoint gcv(const FidelityModel& m, const SolverReport& report,
             double lambda, double mu);

/// count log-spaced values spanning [lo, hi] times a data-driven scale: the
/// max abs entry of the fidelity gradient at zero coefficients, so the top
/// of the grid suppresses every coefficient.
std::vector<double> default_lambda_grid(const FidelityModel& m, int count = 12,
                                        double lo = 1e-3, double hi = 1.0);

struct SweepResult {
  std::vector<GcvPoint> points;   // ordered by lambda ascending
  int best_index = -1;            // argmin of gcv over non-failed points
  double best_lambda = std::numeric_limits<double>::quiet_NaN();
};

/// Runs the forward-backward solver at each grid value (grid must be
/// nonempty, positive, sorted ascending). A failing grid point is marked
/// failed instead of aborting the sweep. When `reference` is given, the
/// per-point mae/mse of the restored image are filled in.
SweepResult sweep_lambda(const FidelityModel& m, const Penalty& p,
                         const SolverConfig& base_cfg,
                         const std::vector<double>& grid,
                         const Image* reference = nullptr);

/// Columns: lambda, gcv, df, residual_ss, mae, mse (empty cells when no
/// reference was supplied).
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

} // namespace spdeconv

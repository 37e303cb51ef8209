#include "spdeconv/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "spdeconv/image.hpp"

namespace spdeconv {

Index degrees_of_freedom(const CoefVec& a, double lambda, double mu) {
  const double threshold = lambda * mu;
  if (!(threshold >= 0))
    throw std::invalid_argument("degrees_of_freedom: lambda*mu must be >= 0");
  return (a.array().abs() >= threshold).count();
}

GcvPoint gcv(const FidelityModel& m, const SolverReport& report, double lambda,
             double mu) {
  GcvPoint pt;
  pt.lambda = lambda;
  pt.df = degrees_of_freedom(report.coefficients, lambda, mu);

  const Image eta = m.conv().apply(m.dict().synthesize(report.coefficients)).max(0.0);
  pt.residual_ss = (m.stabilized() - 2.0 * (eta + m.offset()).sqrt()).square().sum();

  const Index n = m.dict().num_pixels();
  if (pt.df >= n) {
    pt.gcv = std::numeric_limits<double>::infinity();
  } else {
    const double denom = static_cast<double>(n - pt.df);
    pt.gcv = pt.residual_ss / (denom * denom);
  }
  return pt;
}

std::vector<double> default_lambda_grid(const FidelityModel& m, int count, double lo,
                                        double hi) {
  if (count < 1) throw std::invalid_argument("default_lambda_grid: count must be >= 1");
  if (!(lo > 0 && hi >= lo))
    throw std::invalid_argument("default_lambda_grid: need 0 < lo <= hi");
  const CoefVec zero = CoefVec::Zero(m.dict().num_coefficients());
  const double scale = fidelity_gradient(m, zero).array().abs().maxCoeff();
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = hi * scale;
    return grid;
  }
  const double log_lo = std::log(lo * scale), log_hi = std::log(hi * scale);
  for (int i = 0; i < count; ++i)
    grid[i] = std::exp(log_lo + (log_hi - log_lo) * i / (count - 1));
  return grid;
}

SweepResult sweep_lambda(const FidelityModel& m, const Penalty& p,
                         const SolverConfig& base_cfg, const std::vector<double>& grid,
                         const Image* reference) {
  if (grid.empty()) throw std::invalid_argument("sweep_lambda: empty grid");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0)) throw std::invalid_argument("sweep_lambda: grid must be positive");
    if (i > 0 && grid[i] < grid[i - 1])
      throw std::invalid_argument("sweep_lambda: grid must be sorted ascending");
  }

  SweepResult result;
  result.points.reserve(grid.size());
  for (double lambda : grid) {
    SolverConfig cfg = base_cfg;
    cfg.algo = Algo::fb;  // the sweep always uses the fixed-step iteration
    cfg.lambda = lambda;
    GcvPoint pt;
    pt.lambda = lambda;
    try {
      const CoefVec a0 = CoefVec::Zero(m.dict().num_coefficients());
      const SolverReport report = solve_fb(m, p, cfg, a0);
      pt = gcv(m, report, lambda, report.mu_used);
      if (reference) {
        const MetricReport mr = metrics(*reference, report.restored);
        pt.mae = mr.mae;
        pt.mse = mr.mse;
      }
    } catch (const std::exception& e) {
      pt.failed = true;
      pt.error = e.what();
    }
    result.points.push_back(std::move(pt));
  }

  for (size_t i = 0; i < result.points.size(); ++i) {
    const auto& pt = result.points[i];
    if (pt.failed || !std::isfinite(pt.gcv)) continue;
    if (result.best_index < 0 || pt.gcv < result.points[result.best_index].gcv)
      result.best_index = static_cast<int>(i);
  }
  if (result.best_index >= 0)
    result.best_lambda = result.points[result.best_index].lambda;
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "lambda,gcv,df,residual_ss,mae,mse\n";
  out.precision(17);
  for (const auto& pt : sweep.points) {
    out << pt.lambda << ',';
    if (pt.failed)
      out << "failed";
    else
      out << pt.gcv;
    out << ',' << pt.df << ',' << pt.residual_ss << ',';
    if (pt.mae) out << *pt.mae;
    out << ',';
    if (pt.mse) out << *pt.mse;
    out << '\n';
  }
}

} // namespace spdeconv

#include "spdeconv/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace spdeconv {

namespace {
// Round-off slack for the feasibility test Phi a >= 0.
constexpr double kFeasTol = -1e-12;
constexpr double kBisectTol = 1e-10;
} // namespace

Penalty Penalty::l1() {
  Penalty p;
  p.value_ = [](double t) { return std::abs(t); };
  p.derivative_ = [](double) { return 1.0; };
  p.slope_at_zero_ = 1.0;
  p.is_l1_ = true;
  return p;
}

Penalty Penalty::custom(std::function<double(double)> value,
                        std::function<double(double)> derivative,
                        double slope_at_zero) {
  if (!value || !derivative)
    throw std::invalid_argument("Penalty: missing value/derivative");
  if (!(slope_at_zero > 0))
    throw std::invalid_argument("Penalty: psi'_+(0) must be > 0");
  Penalty p;
  p.value_ = std::move(value);
  p.derivative_ = std::move(derivative);
  p.slope_at_zero_ = slope_at_zero;
  return p;
}

double Penalty::value(double t) const { return value_(t); }
double Penalty::derivative(double t) const { return derivative_(t); }

double prox_penalty(const Penalty& p, double delta, double g) {
  if (!(delta >= 0) || !std::isfinite(delta))
    throw std::invalid_argument("prox_penalty: delta must be finite and >= 0");
  const double mag = std::abs(g);
  if (mag <= delta * p.slope_at_zero()) return 0.0;
  if (p.is_l1()) return std::copysign(mag - delta, g);

  // Unique root of u + delta*psi'(u) = |g| on (0, |g|); the left side is
  // increasing, so bisection converges unconditionally.
  double lo = 0.0, hi = mag;
  while (hi - lo > kBisectTol * std::max(1.0, mag)) {
    const double mid = 0.5 * (lo + hi);
    if (mid + delta * p.derivative(mid) < mag)
      lo = mid;
    else
      hi = mid;
  }
  const double u = 0.5 * (lo + hi);
  return std::copysign(u, g);
}

CoefVec prox_penalty(const Penalty& p, double delta, const CoefVec& g) {
  CoefVec out(g.size());
  if (p.is_l1()) {
    out = g.array().sign() * (g.array().abs() - delta).max(0.0);
    return out;
  }
  for (Index i = 0; i < g.size(); ++i) out[i] = prox_penalty(p, delta, g[i]);
  return out;
}

CoefVec project_positive_coefs(const Dictionary& dict, const CoefVec& a) {
  const Image x = dict.synthesize(a);
  // a - c^{-1} Phi^T min(Phi a, 0)
  return a - dict.analyze(x.min(0.0)) / dict.frame_constant();
}

CoefVec prox_f2(const Dictionary& dict, const Penalty& p, double lambda,
                const CoefVec& a, const DrConfig& cfg) {
  if (!(lambda >= 0)) throw std::invalid_argument("prox_f2: lambda must be >= 0");
  if (cfg.n_iter < 1) throw std::invalid_argument("prox_f2: n_iter must be >= 1");
  if (!(cfg.relaxation > 0.0 && cfg.relaxation < 1.0))
    throw std::invalid_argument("prox_f2: relaxation must lie in (0, 1)");

  if (dict.synthesize(a).minCoeff() >= kFeasTol)
    return prox_penalty(p, lambda, a);

  const double nu = cfg.relaxation;
  CoefVec gamma = cfg.init == DrInit::from_input ? a : CoefVec(CoefVec::Zero(a.size()));
  for (int t = 0; t < cfg.n_iter; ++t) {
    const CoefVec proj = project_positive_coefs(dict, gamma);
    const CoefVec reflected = 2.0 * proj - gamma;
    const CoefVec prox_g = prox_penalty(p, 0.5 * lambda, 0.5 * (a + reflected));
    // gamma + nu*(rprox_g(rprox_iota(gamma)) - gamma)
    gamma += nu * (2.0 * prox_g - reflected - gamma);
  }
  return project_positive_coefs(dict, gamma);
}

} // namespace spdeconv

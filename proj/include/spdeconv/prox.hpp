#pragma once

#include <functional>

#include "spdeconv/dictionary.hpp"
#include "spdeconv/types.hpp"

namespace spdeconv {

/// Sparsity penalty psi: convex, even, nondecreasing on [0, inf), psi(0) = 0,
/// with a positive right derivative at zero. l1 is |.|; custom penalties
/// supply psi, psi' on (0, inf), and psi'_+(0).
class Penalty {
 public:
  static Penalty l1();
  static Penalty custom(std::function<double(double)> value,
                        std::function<double(double)> derivative,
                        double slope_at_zero);

  double value(double t) const;
  double derivative(double t) const;
  double slope_at_zero() const { return slope_at_zero_; }
  bool is_l1() const { return is_l1_; }

 private:
  Penalty() = default;
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
  double slope_at_zero_ = 1.0;
  bool is_l1_ = false;
};

/// Componentwise proximity map of delta*psi: 0 where |g| <= delta*psi'_+(0),
/// else the unique solution of u + delta*psi'(u) = |g| with the sign of g.
/// For l1 this is soft-thresholding; otherwise solved by monotone bisection.
double prox_penalty(const Penalty& p, double delta, double g);
CoefVec prox_penalty(const Penalty& p, double delta, const CoefVec& g);

/// Proximity map of the positivity constraint composed with synthesis:
/// c^{-1} Phi^T P_C(Phi a) + (a - c^{-1} Phi^T Phi a), with P_C the clamp of
/// negatives to zero. For orthobases this is the metric projection onto
/// {a : Phi a >= 0}; for redundant frames it is the prox of the composed
/// indicator, which is not idempotent in general.
CoefVec project_positive_coefs(const Dictionary& dict, const CoefVec& a);

enum class DrInit { from_input, zero };

/// Douglas-Rachford sub-iteration controls for prox_f2.
struct DrConfig {
  int n_iter = 1;            // >= 1
  double relaxation = 0.5;   // in (0, 1)
  DrInit init = DrInit::from_input;
};

/// Proximity operator of f2 = iota_{Phi a >= 0} + lambda * sum psi(a_i).
///
/// If Phi a >= 0 (tolerance -1e-12), returns prox of lambda*psi directly.
/// Otherwise runs n_iter Douglas-Rachford steps
///   gamma <- gamma + nu * (rprox_g o rprox_{iota} - I)(gamma),
/// where g = lambda*Psi + ||. - a||^2 / 2 has prox
/// u -> prox_{(lambda/2) psi}((a + u) / 2), and returns the positivity prox
/// of the final gamma.
CoefVec prox_f2(const Dictionary& dict, const Penalty& p, double lambda,
                const CoefVec& a, const DrConfig& cfg = {});

} // namespace spdeconv

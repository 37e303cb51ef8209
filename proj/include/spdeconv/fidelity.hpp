#pragma once

#include <memory>

#include "spdeconv/conv_operator.hpp"
#include "spdeconv/dictionary.hpp"
#include "spdeconv/types.hpp"

namespace spdeconv {

inline constexpr double kAnscombeOffset = 3.0 / 8.0;
inline constexpr double kAnscombeOffsetBiasCorrected = 1.0 / 8.0;

/// Variance-stabilizing transform z_i = 2*sqrt(y_i + offset) for Poisson
/// counts y >= 0; the stabilized values have approximately unit variance.
Image anscombe(const Image& counts, double offset = kAnscombeOffset);

/// Data-fidelity term for a stabilized observation z:
///   F(H Phi a) = sum_i (z_i - 2*sqrt(eta_i + offset))^2 / 2,
/// with eta = max(H Phi a, 0). The clamp keeps the square root defined for
/// slightly infeasible iterates and coincides with the model on the
/// feasible set.
class FidelityModel {
 public:
  FidelityModel(Image stabilized, std::shared_ptr<const ConvOperator> conv,
                DictionaryPtr dict, double offset = kAnscombeOffset);

  /// Applies the VST to raw counts first.
  static FidelityModel from_counts(const Image& counts,
                                   std::shared_ptr<const ConvOperator> conv,
                                   DictionaryPtr dict,
                                   double offset = kAnscombeOffset);

  const Image& stabilized() const { return z_; }
  const ConvOperator& conv() const { return *conv_; }
  const Dictionary& dict() const { return *dict_; }
  std::shared_ptr<const ConvOperator> conv_ptr() const { return conv_; }
  DictionaryPtr dict_ptr() const { return dict_; }

  double offset() const { return offset_; }
  double z_inf() const { return z_inf_; }

  /// Upper bound on the Lipschitz constant of the fidelity gradient:
  /// (c * ||H||_2^2 * ||z||_inf / 2) * offset^(-3/2).
  double lipschitz_bound() const { return kappa_bound_; }

  /// Supremum of admissible fixed step sizes, 2 / lipschitz_bound; equals
  /// (3/2)^(3/2) / (2 c ||H||_2^2 ||z||_inf) at the default offset.
  double step_supremum() const { return 2.0 / kappa_bound_; }

 private:
  Image z_;
  std::shared_ptr<const ConvOperator> conv_;
  DictionaryPtr dict_;
  double offset_;
  double z_inf_;
  double kappa_bound_;
};

double fidelity_value(const FidelityModel& m, const CoefVec& a);

/// Gradient Phi^T H^T gradF(H Phi a) with (gradF(eta))_i =
/// -z_i / sqrt(eta_i + offset) + 2.
CoefVec fidelity_gradient(const FidelityModel& m, const CoefVec& a);

} // namespace spdeconv

#include "spdeconv/fidelity.hpp"

#include <cmath>
#include <stdexcept>

namespace spdeconv {

Image anscombe(const Image& counts, double offset) {
  if ((counts < 0).any())
    throw std::invalid_argument("anscombe: negative count");
  return 2.0 * (counts + offset).sqrt();
}

FidelityModel::FidelityModel(Image stabilized, std::shared_ptr<const ConvOperator> conv,
                             DictionaryPtr dict, double offset)
    : z_(std::move(stabilized)), conv_(std::move(conv)), dict_(std::move(dict)),
      offset_(offset) {
  if (!conv_ || !dict_) throw std::invalid_argument("FidelityModel: null operator");
  if (!(offset > 0)) throw std::invalid_argument("FidelityModel: offset must be > 0");
  if (z_.rows() != conv_->height() || z_.cols() != conv_->width() ||
      z_.rows() != dict_->height() || z_.cols() != dict_->width())
    throw std::invalid_argument("FidelityModel: dimension mismatch");
  if (!z_.isFinite().all())
    throw std::invalid_argument("FidelityModel: non-finite stabilized data");
  z_inf_ = z_.abs().maxCoeff();
  const double h2 = conv_->spectral_norm();
  kappa_bound_ = 0.5 * dict_->frame_constant() * h2 * h2 * z_inf_ *
                 std::pow(offset_, -1.5);
}

FidelityModel FidelityModel::from_counts(const Image& counts,
                                         std::shared_ptr<const ConvOperator> conv,
                                         DictionaryPtr dict, double offset) {
  return FidelityModel(anscombe(counts, offset), std::move(conv), std::move(dict), offset);
}

double fidelity_value(const FidelityModel& m, const CoefVec& a) {
  const Image eta = m.conv().apply(m.dict().synthesize(a)).max(0.0);
  const double v = 0.5 * (m.stabilized() - 2.0 * (eta + m.offset()).sqrt()).square().sum();
  if (!std::isfinite(v))
    throw std::invalid_argument("fidelity_value: non-finite result (invalid iterate)");
  return v;
}

CoefVec fidelity_gradient(const FidelityModel& m, const CoefVec& a) {
  const Image eta = m.conv().apply(m.dict().synthesize(a)).max(0.0);
  const Image grad_f = 2.0 - m.stabilized() / (eta + m.offset()).sqrt();
  CoefVec g = m.dict().analyze(m.conv().apply_adjoint(grad_f));
  if (!g.array().isFinite().all())
    throw std::invalid_argument("fidelity_gradient: non-finite gradient entries");
  return g;
}

} // namespace spdeconv

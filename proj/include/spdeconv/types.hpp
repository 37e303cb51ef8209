#pragma once

#include <Eigen/Core>

namespace spdeconv {

template <typename Scalar>
using ImageOf = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 2-D raster, row-major storage. width = cols(), height = rows().
using Image = ImageOf<double>;

template <typename Scalar>
using CoefVecOf = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Coefficient vector in a dictionary domain. Its subband layout is owned by
/// the dictionary that produced it (see Dictionary::subbands()).
using CoefVec = CoefVecOf<double>;

using Index = Eigen::Index;

} // namespace spdeconv

#pragma once

#include <Eigen/Core>

namespace v2n::neural {

/// Dense row-major real matrix; batches are stacked along rows.
using Tensor2D = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline bool all_finite(const Tensor2D& t) { return t.allFinite(); }

}  // namespace v2n::neural

#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace hdm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Tolerance for membership of a point on the hyperboloid sheet,
/// |<x,x>_H + 1| <= kTolNorm.
inline constexpr double kTolNorm = 1e-9;

/// Window below 1 inside which acosh arguments are clamped up to 1.
/// Larger deviations are treated as errors, not silently clamped.
inline constexpr double kTolClamp = 1e-9;

}  // namespace hdm

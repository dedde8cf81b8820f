#pragma once

#include <vector>

#include "torque/core.hpp"

namespace torque {

/// Two coordinates per sample for plotting. Data with d <= 2 passes through
/// (d == 1 gets a zero second axis); wider data is projected onto its top two
/// principal components: mean-centred, covariance eigenvectors, each
/// component's sign chosen so its largest-magnitude loading is positive.
/// Returns n x 2, row-major.
std::vector<double> project_2d(const Dataset& data);

}  // namespace torque

#include "torque/projection.hpp"

#include <Eigen/Dense>

namespace torque {

std::vector<double> project_2d(const Dataset& data) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  std::vector<double> out(n * 2, 0.0);
  if (d <= 2) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) out[i * 2 + k] = data(i, k);
    }
    return out;
  }

  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMatrix> x(data.values().data(), static_cast<Eigen::Index>(n),
                                      static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centred = x.rowwise() - mean;
  const double scale = n > 1 ? 1.0 / static_cast<double>(n - 1) : 1.0;
  const Eigen::MatrixXd covariance = (centred.transpose() * centred) * scale;

  // Eigenvalues come back ascending; the last two columns are the top pair.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  Eigen::MatrixXd components(d, 2);
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(d) - 1 - c);
    Eigen::Index largest = 0;
    v.cwiseAbs().maxCoeff(&largest);
    if (v(largest) < 0.0) v = -v;
    components.col(c) = v;
  }
  const Eigen::MatrixXd scores = centred * components;
  for (std::size_t i = 0; i < n; ++i) {
    out[i * 2] = scores(static_cast<Eigen::Index>(i), 0);
    out[i * 2 + 1] = scores(static_cast<Eigen::Index>(i), 1);
  }
  return out;
}

}  // namespace torque

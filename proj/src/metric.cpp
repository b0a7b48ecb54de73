#include "ehk/metric.hpp"

namespace ehk {

Metric::Metric(const Eigen::MatrixXd& g, int orientation) : g_(g), orientation_(orientation) {
    const int n = static_cast<int>(g.rows());
    if (g.cols() != n || n < 1 || n > 8) throw DimensionError("Metric: need square matrix, dim 1..8");
    if (orientation != 1 && orientation != -1) throw MetricError("Metric: orientation must be +1 or -1");
    if (!g.allFinite()) throw MetricError("Metric: non-finite entries");

    const double scale = g.cwiseAbs().maxCoeff();
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, scale))
        throw MetricError("Metric: not symmetric");
    g_ = 0.5 * (g + g.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g_);
    if (es.eigenvalues().minCoeff() <= 0.0) throw MetricError("Metric: not positive definite");

    ginv_ = g_.inverse();
    det_ = g_.determinant();
    if (det_ <= 0.0) throw MetricError("Metric: non-positive determinant");
    sqrt_det_ = std::sqrt(det_);

    if ((g_ * ginv_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
        throw MetricError("Metric: inverse check failed");
}

Metric Metric::euclidean(int dim, int orientation) {
    return Metric(Eigen::MatrixXd::Identity(dim, dim), orientation);
}

}  // namespace ehk

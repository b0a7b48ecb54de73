#pragma once

// Symmetric positive-definite bilinear form with cached inverse, determinant
// and an orientation sign that fixes which ordered basis is positive.

#include <Eigen/Dense>

#include "ehk/errors.hpp"
#include "ehk/kform.hpp"

namespace ehk {

class Metric {
  public:
    explicit Metric(const Eigen::MatrixXd& g, int orientation = +1);

    static Metric euclidean(int dim, int orientation = +1);

    int dim() const { return static_cast<int>(g_.rows()); }
    const Eigen::MatrixXd& g() const { return g_; }
    const Eigen::MatrixXd& ginv() const { return ginv_; }
    double det() const { return det_; }
    double sqrt_det() const { return sqrt_det_; }
    int orientation() const { return orientation_; }

    double inner(const Vec& u, const Vec& v) const { return u.dot(g_ * v); }
    double norm2(const Vec& u) const { return inner(u, u); }
    double norm(const Vec& u) const { return std::sqrt(norm2(u)); }

    // |u ^ v|^2 = |u|^2 |v|^2 - <u,v>^2
    double wedge_norm2(const Vec& u, const Vec& v) const {
        double c = inner(u, v);
        return norm2(u) * norm2(v) - c * c;
    }

    // volume form: orientation * sqrt(det g) * e^{1..n}
    KForm vol() const {
        KForm v(dim(), dim());
        v.add(maskops::full(dim()), orientation_ * sqrt_det_);
        return v;
    }

    Metric with_orientation(int o) const { return Metric(g_, o); }

  private:
    Eigen::MatrixXd g_;
    Eigen::MatrixXd ginv_;
    double det_;
    double sqrt_det_;
    int orientation_;
};

}  // namespace ehk

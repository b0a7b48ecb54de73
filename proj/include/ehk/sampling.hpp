#pragma once

// deterministic random inputs for the identity suites and tests

#include <random>

#include "ehk/exterior.hpp"

namespace ehk {

class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}

    std::mt19937_64& gen() { return gen_; }

    double uniform(double lo = -1.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    Vec vector(int n, double scale = 1.0) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = scale * uniform();
        return v;
    }

    Vec unit_vector(int n) {
        Vec v = vector(n);
        while (v.norm() < 1e-3) v = vector(n);
        return v / v.norm();
    }

    KForm kform(int n, int k, double scale = 1.0) {
        KForm f(n, k);
        for (Mask m : basis_masks(n, k)) f.add(m, scale * uniform());
        return f;
    }

    // well-conditioned SPD matrix with eigenvalues in [0.5, 2]
    Metric spd_metric(int n) {
        Eigen::MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = uniform();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
        Eigen::MatrixXd Q = qr.householderQ();
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) d[i] = uniform(0.5, 2.0);
        return Metric(Q * d.asDiagonal() * Q.transpose());
    }

    // invertible matrix with singular values in [lo, hi] and a random
    // orientation sign
    Eigen::MatrixXd gl_matrix(int n, double lo = 0.5, double hi = 1.5) {
        Eigen::MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = uniform();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::VectorXd s(n);
        for (int i = 0; i < n; ++i) s[i] = uniform(lo, hi);
        return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
    }

  private:
    std::mt19937_64 gen_;
};

inline double rel_residual(const KForm& a, const KForm& b) {
    return (a - b).sup() / std::max({1.0, a.sup(), b.sup()});
}

}  // namespace ehk

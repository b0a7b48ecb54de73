#include "ehk/models.hpp"

#include <cmath>

namespace ehk {

namespace {

// Re and Im of (dz^1 ^ ... ^ dz^m) for dz^j = dx^{xs[j]} + i dy^{ys[j]}
std::pair<KForm, KForm> holomorphic_volume(int dim, const std::vector<int>& xs,
                                           const std::vector<int>& ys) {
    const int m = static_cast<int>(xs.size());
    KForm re(dim, m), im(dim, m);
    for (int bits = 0; bits < (1 << m); ++bits) {
        std::vector<int> labels(m);
        for (int j = 0; j < m; ++j) labels[j] = ((bits >> j) & 1) ? ys[j] : xs[j];
        KForm mono = KForm::monomial(dim, labels);
        switch (__builtin_popcount(static_cast<unsigned>(bits)) % 4) {
            case 0: re += mono; break;
            case 1: im += mono; break;
            case 2: re -= mono; break;
            case 3: im -= mono; break;
        }
    }
    return {re, im};
}

}  // namespace

KForm embed7(const KForm& a) {
    KForm out(8, a.degree());
    for (auto& [m, c] : a.terms()) out.add(static_cast<Mask>(m << 1), c);
    return out;
}

ModelStructure cy3_s1() {
    // axes: 1,2,3 = x^j ; 4 = theta ; 5,6,7 = y^j
    auto [re, im] = holomorphic_volume(7, {1, 2, 3}, {5, 6, 7});
    KForm omega(7, 2);
    omega += KForm::monomial(7, {1, 5});
    omega += KForm::monomial(7, {2, 6});
    omega += KForm::monomial(7, {3, 7});
    KForm dtheta = KForm::monomial(7, {4});
    KForm phi = re + wedge(dtheta, omega);

    ModelStructure m;
    m.name = "cy3_s1";
    m.dim = 7;
    m.g2 = G2Structure(phi);
    m.ingredients = {{"re_omega", re}, {"im_omega", im}, {"omega", omega}, {"dtheta", dtheta}};
    m.flow7 = [re, im, dtheta, omega](const Vec& w, double t) {
        // generator must be a multiple of d/dtheta; phase advances by w_theta t
        for (int i = 0; i < 7; ++i)
            if (i != 3 && std::abs(w[i]) > 1e-14)
                throw NormError("cy3_s1 flow: generator must be a multiple of d/dtheta");
        const double s = w[3] * t;
        return std::cos(s) * re - std::sin(s) * im + wedge(dtheta, omega);
    };
    return m;
}

ModelStructure t4_hk_t3() {
    // axes: 1,2,3 = theta^j ; 4,5,6,7 = y^0..y^3
    KForm o1 = KForm::monomial(7, {4, 5}) + KForm::monomial(7, {6, 7});
    KForm o2 = KForm::monomial(7, {4, 6}) + KForm::monomial(7, {7, 5});
    KForm o3 = KForm::monomial(7, {4, 7}) + KForm::monomial(7, {5, 6});
    KForm t123 = KForm::monomial(7, {1, 2, 3});
    KForm phi = t123 - wedge(KForm::monomial(7, {1}), o1) - wedge(KForm::monomial(7, {2}), o2) -
                wedge(KForm::monomial(7, {3}), o3);

    ModelStructure m;
    m.name = "t4_hk_t3";
    m.dim = 7;
    m.g2 = G2Structure(phi);
    m.ingredients = {{"omega1", o1}, {"omega2", o2}, {"omega3", o3}, {"theta123", t123}};
    m.flow7 = [o1, o2, o3, t123](const Vec& w, double t) {
        Eigen::Vector3d a(w[0], w[1], w[2]);
        for (int i = 3; i < 7; ++i)
            if (std::abs(w[i]) > 1e-14) throw NormError("t4_hk_t3 flow: generator must lie in the T^3 axes");
        if (std::abs(a.norm() - 1.0) > 1e-12) throw NormError("t4_hk_t3 flow: axis vector must be unit");
        // rotation of the 2-form triple about the axis a by angle t; the sign
        // convention is pinned by the printed w = d/dtheta^1 case
        Eigen::Matrix3d K;
        K << 0, -a[2], a[1], a[2], 0, -a[0], -a[1], a[0], 0;
        Eigen::Matrix3d R = Eigen::Matrix3d::Identity() + std::sin(t) * K +
                            (1.0 - std::cos(t)) * (K * K);
        const KForm* om[3] = {&o1, &o2, &o3};
        KForm phi_t = t123;
        for (int i = 0; i < 3; ++i) {
            KForm oi(7, 2);
            for (int j = 0; j < 3; ++j) oi += R(j, i) * (*om[j]);
            phi_t -= wedge(KForm::monomial(7, {i + 1}), oi);
        }
        return phi_t;
    };
    return m;
}

ModelStructure cy4() {
    // axes: 0,1,2,3 = x^j ; 4,5,6,7 = y^j
    auto [re, im] = holomorphic_volume(8, {0, 1, 2, 3}, {4, 5, 6, 7});
    KForm omega(8, 2);
    for (int j = 0; j < 4; ++j) omega += KForm::monomial(8, {j, j + 4});
    KForm Phi = re + 0.5 * wedge(omega, omega);

    ModelStructure m;
    m.name = "cy4";
    m.dim = 8;
    m.spin7 = Spin7Structure(Phi);
    m.ingredients = {{"re_omega", re}, {"im_omega", im}, {"omega", omega}};
    // pinned generator pair: (d/dx1, d/dy1); pi_7(v^ ^ w^) is proportional to
    // omega and B Phi = -Im(Omega) with |v ^ w| = 1
    m.generator_v = basis_vector(8, 0);
    m.generator_w = basis_vector(8, 4);
    Vec gv = m.generator_v, gw = m.generator_w;
    m.flow8 = [re, im, omega, gv, gw](const Vec& v, const Vec& w, double t) {
        if ((v - gv).cwiseAbs().maxCoeff() > 1e-14 || (w - gw).cwiseAbs().maxCoeff() > 1e-14)
            throw NormError("cy4 flow: generators must be the pinned pair");
        return std::cos(t) * re - std::sin(t) * im + 0.5 * wedge(omega, omega);
    };
    return m;
}

ModelStructure g2_times_s1(const G2Structure& S7) {
    KForm Phi = wedge(KForm::monomial(8, {0}), embed7(S7.phi())) + embed7(S7.star_phi());
    Eigen::MatrixXd g8 = Eigen::MatrixXd::Identity(8, 8);
    g8.block(1, 1, 7, 7) = S7.metric().g();

    ModelStructure m;
    m.name = "g2_s1";
    m.dim = 8;
    m.spin7 = Spin7Structure(Phi, Metric(g8, S7.orientation()));
    m.ingredients = {{"phi7", embed7(S7.phi())}, {"star7_phi", embed7(S7.star_phi())}};
    G2Structure S = S7;
    m.generator_v = basis_vector(8, 0);
    m.flow8 = [S](const Vec& v, const Vec& w, double t) {
        if ((v - basis_vector(8, 0)).cwiseAbs().maxCoeff() > 1e-14 || std::abs(w[0]) > 1e-14)
            throw NormError("g2_s1 flow: v must be d/dtheta and w tangent to the 7-manifold factor");
        Vec w7(7);
        for (int i = 0; i < 7; ++i) w7[i] = w[i + 1];
        FlowStateG2 fs = flow_state(S, w7, t);
        G2Structure St(fs.phi_t, S.metric());
        return wedge(KForm::monomial(8, {0}), embed7(fs.phi_t)) + embed7(St.star_phi());
    };
    return m;
}

ModelStructure model_by_name(const std::string& name) {
    if (name == "cy3_s1") return cy3_s1();
    if (name == "t4_hk_t3") return t4_hk_t3();
    if (name == "cy4") return cy4();
    if (name == "g2_s1") return g2_times_s1(G2Structure::standard());
    throw ParseError("unknown model fixture: " + name);
}

std::vector<std::string> model_names() { return {"cy3_s1", "t4_hk_t3", "cy4", "g2_s1"}; }

}  // namespace ehk

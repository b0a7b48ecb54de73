#include "ehk/g2.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ehk {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd intrinsic_gram(const KForm& phi) {
    // B_ij = coefficient of e^{1..7} in (e_i .| phi) ^ (e_j .| phi) ^ phi
    std::vector<KForm> ip;
    ip.reserve(7);
    for (int i = 0; i < 7; ++i) {
        Vec e = Vec::Zero(7);
        e[i] = 1.0;
        ip.push_back(interior(e, phi));
    }
    Eigen::MatrixXd B(7, 7);
    for (int i = 0; i < 7; ++i) {
        for (int j = i; j < 7; ++j) {
            double c = wedge(wedge(ip[i], ip[j]), phi).top();
            B(i, j) = c;
            B(j, i) = c;
        }
    }
    return B;
}

// relative residual between two forms
double rel(const KForm& a, const KForm& b) {
    return (a - b).sup() / std::max({1.0, a.sup(), b.sup()});
}

}  // namespace

std::pair<KForm, KForm> standard_phi() {
    KForm phi(7, 3);
    auto add3 = [&phi](int i, int j, int k, double c) {
        phi += KForm::monomial(7, {i, j, k}, c);
    };
    add3(1, 2, 3, 1.0);
    add3(1, 6, 7, -1.0);
    add3(5, 2, 7, -1.0);
    add3(5, 6, 3, -1.0);
    add3(4, 1, 5, 1.0);
    add3(4, 2, 6, 1.0);
    add3(4, 3, 7, 1.0);

    KForm sphi(7, 4);
    auto add4 = [&sphi](int i, int j, int k, int l, double c) {
        sphi += KForm::monomial(7, {i, j, k, l}, c);
    };
    add4(4, 5, 6, 7, 1.0);
    add4(4, 5, 2, 3, -1.0);
    add4(4, 1, 6, 3, -1.0);
    add4(4, 1, 2, 7, -1.0);
    add4(2, 6, 3, 7, 1.0);
    add4(1, 5, 3, 7, 1.0);
    add4(1, 5, 2, 6, 1.0);
    return {phi, sphi};
}

G2MetricResult g2_metric(const KForm& phi) {
    if (phi.dim() != 7) throw DimensionError("g2_metric: need dim 7");
    if (phi.degree() != 3) throw DegreeError("g2_metric: need a 3-form");

    Eigen::MatrixXd B = intrinsic_gram(phi);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    const Vec ev = es.eigenvalues();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);

    int orientation;
    if (ev.minCoeff() > 1e-12 * scale) {
        orientation = +1;
    } else if (ev.maxCoeff() < -1e-12 * scale) {
        orientation = -1;
        B = -B;
    } else {
        throw NotPositiveError("g2_metric: intrinsic Gram matrix is not definite");
    }

    const double detB = B.determinant();
    // B = 6 g sqrt(det g) forces g = B / (6^{2/9} det(B)^{1/9})
    Eigen::MatrixXd g = B / (std::pow(6.0, 2.0 / 9.0) * std::pow(detB, 1.0 / 9.0));
    Metric m(g, orientation);
    return {m, m.vol()};
}

PositivityVerdict is_positive_3form(const KForm& phi) {
    PositivityVerdict v;
    if (phi.dim() != 7) throw DimensionError("is_positive_3form: need dim 7");
    if (phi.degree() != 3) throw DegreeError("is_positive_3form: need a 3-form");
    Eigen::MatrixXd B = intrinsic_gram(phi);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    const Vec ev = es.eigenvalues();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    for (int i = 0; i < 7; ++i) {
        if (ev[i] > 1e-12 * scale)
            ++v.n_pos;
        else if (ev[i] < -1e-12 * scale)
            ++v.n_neg;
        else
            ++v.n_zero;
    }
    if (v.n_pos == 7 || v.n_neg == 7) {
        v.positive = true;
        v.metric = g2_metric(phi).metric;
    } else {
        v.reason = "intrinsic Gram matrix is indefinite or singular";
    }
    return v;
}

G2Structure::G2Structure(const KForm& phi) : G2Structure(phi, g2_metric(phi).metric) {}

G2Structure::G2Structure(const KForm& phi, const Metric& metric)
    : phi_(phi), metric_(metric), vol_(metric.vol()), star_phi_(hodge(phi, metric)) {
    if (phi.dim() != 7 || phi.degree() != 3) throw DimensionError("G2Structure: need a 3-form on R^7");
}

const G2Structure& G2Structure::standard() {
    static const G2Structure S(standard_phi().first, Metric::euclidean(7));
    return S;
}

Vec cross(const G2Structure& S, const Vec& u, const Vec& v) {
    if (u.size() != 7 || v.size() != 7) throw DimensionError("cross: need dim 7");
    return S.sharp1(interior(v, interior(u, S.phi())));
}

Vec cross_double(const G2Structure& S, const Vec& u, const Vec& v, const Vec& w) {
    return cross(S, u, cross(S, v, w));
}

Vec cross_double_rhs(const G2Structure& S, const Vec& u, const Vec& v, const Vec& w) {
    const Metric& m = S.metric();
    // The contraction term carries a plus sign: expanding through
    // pi7(v^ ^ w^) = (v^ ^ w^ + *(phi ^ v^ ^ w^))/3 gives
    // u x (v x w) = -<u,v> w + <u,w> v + (u .| v .| w .| *phi)#.
    KForm contraction = interior(u, interior(v, interior(w, S.star_phi())));
    return -m.inner(u, v) * w + m.inner(u, w) * v + S.sharp1(contraction);
}

G2Projection2 project2(const G2Structure& S, const KForm& beta) {
    if (beta.dim() != 7 || beta.degree() != 2) throw DegreeError("project2: need a 2-form on R^7");
    KForm L = S.star(wedge(S.phi(), beta));
    G2Projection2 out{(beta + L) / 3.0, (2.0 * beta - L) / 3.0};
    return out;
}

G2Projection3 project3(const G2Structure& S, const KForm& eta) {
    if (eta.dim() != 7 || eta.degree() != 3) throw DegreeError("project3: need a 3-form on R^7");
    G2Projection3 out{KForm(7, 3), KForm(7, 3), KForm(7, 3), Vec::Zero(7), 0.0};
    out.f1 = S.inner(eta, S.phi()) / 7.0;
    out.w7 = S.sharp1(S.star(wedge(S.phi(), eta)) * (-0.25));
    out.p1 = out.f1 * S.phi();
    out.p7 = interior(out.w7, S.star_phi());
    out.p27 = eta - out.p1 - out.p7;
    return out;
}

G2Projection4 project4(const G2Structure& S, const KForm& sigma) {
    if (sigma.dim() != 7 || sigma.degree() != 4) throw DegreeError("project4: need a 4-form on R^7");
    // the decomposition respects the star: Lambda^4_l = * Lambda^3_l
    G2Projection3 p = project3(S, S.star(sigma));
    return {S.star(p.p1), S.star(p.p7), S.star(p.p27)};
}

G2Projection5 project5(const G2Structure& S, const KForm& gamma) {
    if (gamma.dim() != 7 || gamma.degree() != 5) throw DegreeError("project5: need a 5-form on R^7");
    KForm M = wedge(S.phi(), S.star(gamma));
    return {(gamma + M) / 3.0, (2.0 * gamma - M) / 3.0};
}

std::pair<G2Structure, std::vector<Check>> conformal_scale(const G2Structure& S, double c) {
    if (c == 0.0) throw DegenerateScaleError("conformal_scale: scale must be non-zero");
    const double c2 = c * c;
    const int new_orient = (c > 0.0) ? S.orientation() : -S.orientation();
    G2Structure T(std::pow(c, 3) * S.phi(), Metric(c2 * S.metric().g(), new_orient));

    std::vector<Check> checks;
    // g~ = c^2 g
    checks.push_back(make_check("metric_scale", "conformal metric law g~ = f^2 g",
                                (T.metric().g() - c2 * S.metric().g()).cwiseAbs().maxCoeff() /
                                    std::max(1.0, S.metric().g().cwiseAbs().maxCoeff()),
                                1e-10));
    // vol~ = c^7 vol (orientation flip for negative c is folded into the form)
    checks.push_back(make_check("volume_scale", "conformal volume law vol~ = f^7 vol",
                                rel(T.vol(), std::pow(c, 7) * S.vol()), 1e-10));
    // *~ phi~ = c^4 * phi
    checks.push_back(make_check("star_phi_scale", "conformal dual law *~phi~ = f^4 *phi",
                                rel(T.star_phi(), std::pow(c, 4) * S.star_phi()), 1e-10));
    // *~ alpha = c^{7-2k} * alpha on test forms of every degree
    double worst = 0.0;
    for (int k = 0; k <= 7; ++k) {
        KForm a(7, k);
        int fill = 0;
        for (Mask msk : basis_masks(7, k)) {
            a.add(msk, 0.3 + 0.1 * ((fill * 2654435761u) % 97));  // fixed quasi-random coefficients
            if (++fill >= 5) break;
        }
        worst = std::max(worst, rel(T.star(a), std::pow(c, 7 - 2 * k) * S.star(a)));
    }
    checks.push_back(make_check("star_scale", "conformal star law *~ = f^{7-2k} *", worst, 1e-10));
    // induced metric of the scaled form agrees with c^2 g
    Metric induced = g2_metric(T.phi()).metric;
    checks.push_back(make_check("induced_metric", "metric induced by f^3 phi equals f^2 g",
                                (induced.g() - c2 * S.metric().g()).cwiseAbs().maxCoeff() /
                                    std::max(1.0, c2 * S.metric().g().cwiseAbs().maxCoeff()),
                                1e-10));
    return {T, checks};
}

KForm vf_deform_star(const G2Structure& S, const Vec& w, const KForm& a) {
    const int k = a.degree();
    const double f = std::pow(1.0 + S.metric().norm2(w), (2.0 - k) / 3.0);
    if (k == 0) return f * S.star(a);  // w .| (0-form) = 0
    KForm twisted = interior(w, S.star(interior(w, a)));
    const double sgn = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^{k-1}
    return f * (S.star(a) + sgn * twisted);
}

VfDeformResult vf_deform(const G2Structure& S, const Vec& w) {
    if (w.size() != 7) throw DimensionError("vf_deform: need dim 7");
    const Metric& m = S.metric();
    const double w2 = m.norm2(w);
    const double lam = 1.0 + w2;

    KForm phi_t = S.phi() + interior(w, S.star_phi());

    // closed-formula metric: g~(u,v) = (1+|w|^2)^{-2/3} (<u,v> + <w x u, w x v>)
    Eigen::MatrixXd gt(7, 7);
    std::vector<Vec> wx(7);
    for (int i = 0; i < 7; ++i) {
        Vec e = Vec::Zero(7);
        e[i] = 1.0;
        wx[i] = cross(S, w, e);
    }
    for (int i = 0; i < 7; ++i) {
        Vec ei = Vec::Zero(7);
        ei[i] = 1.0;
        for (int j = i; j < 7; ++j) {
            Vec ej = Vec::Zero(7);
            ej[j] = 1.0;
            double v = (m.inner(ei, ej) + m.inner(wx[i], wx[j])) / std::pow(lam, 2.0 / 3.0);
            gt(i, j) = v;
            gt(j, i) = v;
        }
    }
    Metric mt(gt, S.orientation());
    G2Structure T(phi_t, mt);

    std::vector<Check> checks;
    // (a) closed formula vs the determinant route
    Metric recomputed = g2_metric(phi_t).metric;
    checks.push_back(make_check("metric_closed_vs_determinant",
                                "twisted metric formula matches determinant extraction",
                                (recomputed.g() - gt).cwiseAbs().maxCoeff() /
                                    std::max(1.0, gt.cwiseAbs().maxCoeff()),
                                1e-9));
    // (b) vol~ = (1+|w|^2)^{2/3} vol
    const double vol_ratio = T.vol().top() / S.vol().top();
    const double expected_ratio = std::pow(lam, 2.0 / 3.0);
    checks.push_back(make_check("volume_ratio", "volume law vol~ = (1+|w|^2)^{2/3} vol",
                                std::abs(vol_ratio - expected_ratio) / expected_ratio, 1e-10));
    // (c) inverse-metric formula g~^{ij} = (1+|w|^2)^{-1/3} (g^{ij} + w^i w^j)
    Eigen::MatrixXd ginv_formula = (m.ginv() + w * w.transpose()) / std::pow(lam, 1.0 / 3.0);
    checks.push_back(make_check("inverse_metric", "inverse metric law (g^{ij} + w^i w^j)",
                                (gt * ginv_formula - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff(),
                                1e-9));
    // (d) twisted star squares to the identity and matches the Gram star
    double star_sq = 0.0, star_match = 0.0;
    for (int k = 0; k <= 7; ++k) {
        KForm a(7, k);
        int fill = 0;
        for (Mask msk : basis_masks(7, k)) {
            a.add(msk, 0.2 + 0.15 * ((fill * 40503u + k) % 89));
            if (++fill >= 6) break;
        }
        KForm sa = vf_deform_star(S, w, a);
        star_sq = std::max(star_sq, rel(vf_deform_star(S, w, sa), a));
        star_match = std::max(star_match, rel(sa, T.star(a)));
    }
    checks.push_back(make_check("twisted_star_involution", "twisted star squares to the identity", star_sq, 1e-9));
    checks.push_back(make_check("twisted_star_vs_gram", "twisted star equals the Gram-determinant star",
                                star_match, 1e-9));
    // (e) *~phi~ expansion
    KForm expansion = (S.star_phi() + S.star(interior(w, S.star_phi())) +
                       interior(w, S.star(interior(w, S.phi())))) /
                      std::pow(lam, 1.0 / 3.0);
    checks.push_back(make_check("star_phi_expansion", "dual form expansion (1+|w|^2)^{-1/3}(...)",
                                rel(T.star_phi(), expansion), 1e-9));
    // (f) k-form metric law <a,b>~ = (1+|w|^2)^{-k/3} (<a,b> + <w.|a, w.|b>)
    double kform_metric = 0.0;
    for (int k = 1; k <= 3; ++k) {
        KForm a(7, k), b(7, k);
        int fill = 0;
        for (Mask msk : basis_masks(7, k)) {
            a.add(msk, 0.4 + 0.21 * ((fill * 7919u + k) % 31));
            b.add(msk, -0.3 + 0.17 * ((fill * 104729u + k) % 37));
            if (++fill >= 7) break;
        }
        double lhs = form_inner(a, b, mt);
        double rhs = (form_inner(a, b, m) + form_inner(interior(w, a), interior(w, b), m)) /
                     std::pow(lam, k / 3.0);
        kform_metric = std::max(kform_metric, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    checks.push_back(make_check("kform_metric", "k-form metric law (<a,b> + <w.|a,w.|b>)",
                                kform_metric, 1e-9));

    return {T, vol_ratio, checks};
}

KForm a_operator(const G2Structure& S, const Vec& w, const KForm& eta) {
    if (eta.dim() != 7 || eta.degree() != 3) throw DegreeError("a_operator: need a 3-form on R^7");
    return interior(w, S.star(eta));
}

namespace {

// orthonormalizing change of basis for the monomial basis of k-forms
Eigen::MatrixXd form_gram(const G2Structure& S, const std::vector<Mask>& basis, int degree) {
    const int n = static_cast<int>(basis.size());
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i) {
        KForm a(7, degree);
        a.add(basis[i], 1.0);
        for (int j = i; j < n; ++j) {
            KForm b(7, degree);
            b.add(basis[j], 1.0);
            G(i, j) = G(j, i) = S.inner(a, b);
        }
    }
    return G;
}

}  // namespace

SpectrumReport a_spectrum(const G2Structure& S, const Vec& w) {
    const auto basis = basis_masks(7, 3);
    const int n = static_cast<int>(basis.size());  // 35
    Eigen::MatrixXd M(n, n);
    for (int j = 0; j < n; ++j) {
        KForm e(7, 3);
        e.add(basis[j], 1.0);
        KForm img = a_operator(S, w, e);
        for (int i = 0; i < n; ++i) M(i, j) = img.coeff(basis[i]);
    }
    Eigen::MatrixXd G = form_gram(S, basis, 3);
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    Eigen::MatrixXd L = llt.matrixL();
    // representation of A in an orthonormal basis of Lambda^3
    Eigen::MatrixXd Lt = L.transpose();
    Eigen::MatrixXd Mon = Lt * M * Lt.inverse();

    SpectrumReport rep;
    rep.dim = n;
    rep.antisym_residual = (Mon + Mon.transpose()).cwiseAbs().maxCoeff() /
                           std::max(1.0, Mon.cwiseAbs().maxCoeff());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Mon);
    rep.singular_values.assign(svd.singularValues().data(),
                               svd.singularValues().data() + svd.singularValues().size());
    const double smax = rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
    const double cut = std::max(1e-9, 1e-9 * smax);
    for (double s : rep.singular_values)
        if (s > cut) ++rep.rank;
    rep.kernel_dim = n - rep.rank;
    return rep;
}

FlowStateG2 flow_state(const G2Structure& S0, const Vec& w, double t) {
    if (w.size() != 7) throw DimensionError("flow_state: need dim 7");
    const double wn = S0.metric().norm(w);
    if (wn == 0.0) return {S0.phi(), t, w, std::numeric_limits<double>::infinity()};
    KForm Aphi = a_operator(S0, w, S0.phi());
    KForm A2phi = a_operator(S0, w, Aphi);
    KForm phi_t = S0.phi() + ((1.0 - std::cos(wn * t)) / (wn * wn)) * A2phi +
                  (std::sin(wn * t) / wn) * Aphi;
    return {phi_t, t, w, 2.0 * kPi / wn};
}

namespace {

double simpson(const std::vector<double>& samples, double t) {
    const int n = static_cast<int>(samples.size()) - 1;  // intervals
    if (n == 0) return 0.0;
    const double h = t / n;
    if (n == 1) return 0.5 * h * (samples[0] + samples[1]);
    auto simpson_run = [&](int lo, int hi) {  // even number of intervals
        double s = samples[lo] + samples[hi];
        for (int i = lo + 1; i < hi; ++i) s += samples[i] * ((i - lo) % 2 == 1 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    if (n % 2 == 0) return simpson_run(0, n);
    // odd interval count: Simpson up to n-3, then the 3/8 rule on the tail
    double head = (n > 3) ? simpson_run(0, n - 3) : 0.0;
    double tail = 3.0 * h / 8.0 *
                  (samples[n - 3] + 3.0 * samples[n - 2] + 3.0 * samples[n - 1] + samples[n]);
    return head + tail;
}

}  // namespace

KForm flow_state_timedep(const G2Structure& S0, const Vec& direction,
                         const std::vector<double>& speed_samples, double t) {
    if (direction.size() != 7) throw DimensionError("flow_state_timedep: need dim 7");
    if (std::abs(S0.metric().norm(direction) - 1.0) > 1e-9)
        throw NormError("flow_state_timedep: direction must be a unit vector");
    if (speed_samples.size() < 2) throw ScheduleError("flow_state_timedep: need at least two samples");
    for (double s : speed_samples) {
        if (!(s >= 0.0)) throw ScheduleError("flow_state_timedep: speed samples must be non-negative");
    }
    const double f = simpson(speed_samples, t);
    KForm Aphi = a_operator(S0, direction, S0.phi());
    KForm A2phi = a_operator(S0, direction, Aphi);
    return S0.phi() + (1.0 - std::cos(f)) * A2phi + std::sin(f) * Aphi;
}

G2Torsion torsion_forms_g2(const G2Structure& S, const KForm& dphi, const KForm& dstarphi) {
    if (dphi.dim() != 7 || dphi.degree() != 4) throw DegreeError("torsion_forms_g2: dphi must be a 4-form");
    if (dstarphi.dim() != 7 || dstarphi.degree() != 5)
        throw DegreeError("torsion_forms_g2: dstarphi must be a 5-form");
    G2Torsion out{KForm(7, 6), KForm(7, 1), 0.0, true, 0.0};
    out.mu = wedge(S.star(dphi), S.phi());
    out.theta = S.star(out.mu);
    out.h = S.star(wedge(S.phi(), dphi)).coeff(static_cast<Mask>(0)) / 7.0;
    KForm mu_alt = -1.0 * wedge(S.star(dstarphi), S.star_phi());
    const double scale = std::max({1.0, out.mu.sup(), mu_alt.sup()});
    out.consistency_residual = (out.mu - mu_alt).sup() / scale;
    out.consistent = out.consistency_residual < 1e-8;
    return out;
}

}  // namespace ehk

#include "ehk/spin7.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ehk {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(const KForm& a, const KForm& b) {
    return (a - b).sup() / std::max({1.0, a.sup(), b.sup()});
}

// orthonormal frame of the metric (columns), standard for the Euclidean case
std::vector<Vec> orthonormal_frame(const Metric& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.g());
    Eigen::MatrixXd E = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
    // g-orthonormal columns; keep them close to the standard axes
    std::vector<Vec> out;
    for (int i = 0; i < m.dim(); ++i) out.push_back(E.col(i));
    return out;
}

}  // namespace

KForm standard_Phi() {
    auto [phi7, sphi7] = standard_phi();
    // Phi = dx^0 ^ phi + *7 phi, with the 7-dimensional labels kept as 1..7
    KForm Phi(8, 4);
    for (auto& [m, c] : phi7.terms()) Phi.add(static_cast<Mask>((m << 1) | 1u), c);
    for (auto& [m, c] : sphi7.terms()) Phi.add(static_cast<Mask>(m << 1), c);
    return Phi;
}

double spin7_quartic_length(const KForm& Phi, const Vec& probe) {
    if (Phi.dim() != 8 || Phi.degree() != 4) throw DegreeError("spin7_quartic_length: need a 4-form on R^8");
    if (probe.size() != 8) throw DimensionError("spin7_quartic_length: need dim 8");
    const KForm p = interior(probe, Phi);  // cubic data all comes from v .| Phi
    const Mask full = maskops::full(8);
    const double scale = Phi.sup() * Phi.sup() * std::max(probe.cwiseAbs().maxCoeff(), 1e-300);

    for (int r = 0; r < 8; ++r) {
        const Mask frame_mask = static_cast<Mask>(full & ~(1u << r));
        // A(v) = ((v .| Phi) ^ Phi)(b_1..b_7) with axis r moved into the 0 slot
        double A = 0.0;
        for (auto& [m, c] : p.terms()) {
            const Mask mc = static_cast<Mask>(frame_mask & ~m);
            if (maskops::degree(mc) != 4 || (m & ~frame_mask)) continue;
            A += c * Phi.coeff(mc) * maskops::wedge_sign(m, mc);
        }
        if (std::abs(A) <= 1e-8 * scale) continue;

        std::vector<KForm> q;
        q.reserve(7);
        for (int b = 0; b < 8; ++b) {
            if (b == r) continue;
            Vec e = Vec::Zero(8);
            e[b] = 1.0;
            q.push_back(interior(e, p));
        }
        Eigen::MatrixXd B(7, 7);
        for (int i = 0; i < 7; ++i)
            for (int j = i; j < 7; ++j) B(i, j) = B(j, i) = wedge3_coeff(q[i], q[j], p, frame_mask);
        const double detB = B.determinant();
        return 343.0 / std::pow(6.0, 7.0 / 3.0) * std::cbrt(detB) / (A * A * A);
    }
    throw NotPositiveError("spin7_quartic_length: denominator vanishes for every basis rotation");
}

Spin7MetricResult spin7_metric(const KForm& Phi) {
    if (Phi.dim() != 8 || Phi.degree() != 4) throw DegreeError("spin7_metric: need a 4-form on R^8");
    Eigen::MatrixXd g(8, 8);
    std::array<double, 8> diag{};
    for (int i = 0; i < 8; ++i) {
        Vec e = Vec::Zero(8);
        e[i] = 1.0;
        const double q = spin7_quartic_length(Phi, e);
        if (!(q > 0.0)) throw NotPositiveError("spin7_metric: non-positive |e_i|^4");
        diag[i] = std::sqrt(q);
        g(i, i) = diag[i];
    }
    for (int i = 0; i < 8; ++i) {
        for (int j = i + 1; j < 8; ++j) {
            Vec ep = Vec::Zero(8), em = Vec::Zero(8);
            ep[i] = 1.0;
            ep[j] = 1.0;
            em[i] = 1.0;
            em[j] = -1.0;
            const double qp = spin7_quartic_length(Phi, ep);
            const double qm = spin7_quartic_length(Phi, em);
            if (!(qp > 0.0) || !(qm > 0.0)) throw NotPositiveError("spin7_metric: non-positive pair probe");
            // |e_i + e_j|^2 - |e_i - e_j|^2 = 4 g_ij
            g(i, j) = g(j, i) = (std::sqrt(qp) - std::sqrt(qm)) / 4.0;
        }
    }
    int orientation = +1;
    {
        const double top = wedge(Phi, Phi).top();
        if (top == 0.0) throw NotPositiveError("spin7_metric: Phi ^ Phi vanishes");
        orientation = top > 0.0 ? +1 : -1;
    }
    try {
        Metric m(g, orientation);
        return {m, m.vol()};
    } catch (const MetricError& e) {
        throw NotPositiveError(std::string("spin7_metric: recovered Gram matrix rejected: ") + e.what());
    }
}

PositivityVerdict is_positive_4form(const KForm& Phi) {
    PositivityVerdict v;
    if (Phi.dim() != 8 || Phi.degree() != 4) throw DegreeError("is_positive_4form: need a 4-form on R^8");

    Eigen::MatrixXd g;
    try {
        auto res = spin7_metric(Phi);
        g = res.metric.g();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        for (int i = 0; i < 8; ++i) {
            double ev = es.eigenvalues()[i];
            double s = std::max(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
            if (ev > 1e-12 * s)
                ++v.n_pos;
            else if (ev < -1e-12 * s)
                ++v.n_neg;
            else
                ++v.n_zero;
        }
        const Metric& m = res.metric;

        // (b) polarization consistency on random pairs
        std::mt19937_64 rng(0x51f7u);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        double worst = 0.0;
        for (int s = 0; s < 20; ++s) {
            Vec a(8), b(8);
            for (int i = 0; i < 8; ++i) {
                a[i] = U(rng);
                b[i] = U(rng);
            }
            Vec u = a + b;
            const double lhs = spin7_quartic_length(Phi, u);
            const double gram = m.norm2(u);
            worst = std::max(worst, std::abs(lhs - gram * gram) / std::max(1.0, gram * gram));
        }
        if (worst > 1e-8) {
            v.reason = "polarization consistency failed";
            return v;
        }
        // (c) self-duality under the recovered metric
        if (rel(hodge(Phi, m), Phi) > 1e-8) {
            v.reason = "not self-dual under the recovered metric";
            return v;
        }
        // (d) Phi ^ Phi = 14 vol
        if (rel(wedge(Phi, Phi), 14.0 * m.vol()) > 1e-8) {
            v.reason = "Phi ^ Phi does not equal 14 vol";
            return v;
        }
        v.positive = true;
        v.metric = m;
        return v;
    } catch (const NotPositiveError& e) {
        v.reason = e.what();
        return v;
    }
}

Spin7Structure::Spin7Structure(const KForm& Phi) : Spin7Structure(Phi, spin7_metric(Phi).metric) {
    if (rel(hodge(Phi_, metric_), Phi_) > 1e-8)
        throw NotPositiveError("Spin7Structure: form is not self-dual under its induced metric");
}

Spin7Structure::Spin7Structure(const KForm& Phi, const Metric& metric)
    : Phi_(Phi), metric_(metric), vol_(metric.vol()) {
    if (Phi.dim() != 8 || Phi.degree() != 4) throw DimensionError("Spin7Structure: need a 4-form on R^8");
}

const Spin7Structure& Spin7Structure::standard() {
    static const Spin7Structure S(standard_Phi(), Metric::euclidean(8));
    return S;
}

Vec triple_cross(const Spin7Structure& S, const Vec& u, const Vec& v, const Vec& w) {
    return S.sharp1(interior(w, interior(v, interior(u, S.Phi()))));
}

Vec triple_cross_double(const Spin7Structure& S, const Vec& a, const Vec& b, const Vec& u,
                        const Vec& v, const Vec& w) {
    return triple_cross(S, a, b, triple_cross(S, u, v, w));
}

Vec cross8_iterate_rhs(const Spin7Structure& S, const Vec& a, const Vec& b, const Vec& u,
                       const Vec& v, const Vec& w) {
    const Metric& m = S.metric();
    auto wedge_inner = [&](const Vec& p, const Vec& q, const Vec& r, const Vec& s) {
        return m.inner(p, r) * m.inner(q, s) - m.inner(p, s) * m.inner(q, r);
    };
    auto Phi4 = [&](const Vec& p, const Vec& q, const Vec& r, const Vec& s) {
        return S.Phi()({p, q, r, s});
    };
    Vec out = Vec::Zero(8);
    out += -wedge_inner(a, b, u, v) * w - Phi4(a, b, u, v) * w;
    out += m.inner(b, w) * triple_cross(S, a, u, v) - m.inner(a, w) * triple_cross(S, b, u, v);
    out += -wedge_inner(a, b, v, w) * u - Phi4(a, b, v, w) * u;
    out += m.inner(b, u) * triple_cross(S, a, v, w) - m.inner(a, u) * triple_cross(S, b, v, w);
    out += -wedge_inner(a, b, w, u) * v - Phi4(a, b, w, u) * v;
    out += m.inner(b, v) * triple_cross(S, a, w, u) - m.inner(a, v) * triple_cross(S, b, w, u);
    return out;
}

Vec cross8_iterate_special_rhs(const Spin7Structure& S, const Vec& a, const Vec& b, const Vec& w) {
    const Metric& m = S.metric();
    auto wedge_inner = [&](const Vec& p, const Vec& q, const Vec& r, const Vec& s) {
        return m.inner(p, r) * m.inner(q, s) - m.inner(p, s) * m.inner(q, r);
    };
    return -m.wedge_norm2(a, b) * w + wedge_inner(a, b, w, b) * a + wedge_inner(a, b, a, w) * b;
}

TwoFormPairing two_form_pairings(const Spin7Structure& S, const Vec& a, const Vec& b, const Vec& c,
                                 const Vec& d) {
    const Metric& m = S.metric();
    TwoFormPairing out{0.0, 0.0, KForm(8, 2), KForm(8, 2), 0.0, 0.0, 0.0, {}};
    out.A = m.inner(a, c) * m.inner(b, d) - m.inner(a, d) * m.inner(b, c);
    out.B = S.Phi()({a, b, c, d});

    KForm beta = wedge(S.flat1(a), S.flat1(b));
    auto pb = project2_spin7(S, beta);
    out.beta7 = pb.p7;
    out.beta21 = pb.p21;

    const double voltop = S.vol().top();
    KForm abPhi = interior(a, interior(b, S.Phi()));  // a .| b .| Phi
    KForm cdPhi = interior(c, interior(d, S.Phi()));
    KForm mu = wedge(S.flat1(c), S.flat1(d));
    out.wedge1 = wedge(wedge(abPhi, mu), S.Phi()).top() / voltop;
    out.wedge2 = wedge(wedge(beta, interior(c, S.Phi())), interior(d, S.Phi())).top() / voltop;
    out.wedge3 = wedge(wedge(abPhi, cdPhi), S.Phi()).top() / voltop;

    const double scale = std::max({1.0, std::abs(out.A), std::abs(out.B)});
    out.checks.push_back(make_check("pairing_interior_components",
                                    "a .| b .| Phi = -3 beta7 + beta21",
                                    rel(abPhi, -3.0 * out.beta7 + out.beta21), 1e-10));
    out.checks.push_back(make_check("pairing_star_wedge",
                                    "*((a.|Phi)^(b.|Phi)) = 2 beta7 - 6 beta21",
                                    rel(S.star(wedge(interior(a, S.Phi()), interior(b, S.Phi()))),
                                        2.0 * out.beta7 - 6.0 * out.beta21),
                                    1e-10));
    out.checks.push_back(make_check("pairing_wedge_1", "(-3A - 2B) vol",
                                    std::abs(out.wedge1 - (-3.0 * out.A - 2.0 * out.B)) / scale, 1e-10));
    out.checks.push_back(make_check("pairing_wedge_2", "(-4A + 2B) vol",
                                    std::abs(out.wedge2 - (-4.0 * out.A + 2.0 * out.B)) / scale, 1e-10));
    out.checks.push_back(make_check("pairing_wedge_3", "(6A + 7B) vol",
                                    std::abs(out.wedge3 - (6.0 * out.A + 7.0 * out.B)) / scale, 1e-10));
    auto pm = project2_spin7(S, mu);
    out.checks.push_back(make_check("pairing_inner_7", "<beta7, mu7> = (A + B)/4",
                                    std::abs(S.inner(out.beta7, pm.p7) - (out.A + out.B) / 4.0) / scale,
                                    1e-10));
    out.checks.push_back(make_check("pairing_inner_21", "<beta21, mu21> = (3A - B)/4",
                                    std::abs(S.inner(out.beta21, pm.p21) - (3.0 * out.A - out.B) / 4.0) /
                                        scale,
                                    1e-10));
    return out;
}

Spin7Projection2 project2_spin7(const Spin7Structure& S, const KForm& beta) {
    if (beta.dim() != 8 || beta.degree() != 2) throw DegreeError("project2_spin7: need a 2-form on R^8");
    KForm L = S.star(wedge(S.Phi(), beta));
    return {(beta + L) / 4.0, (3.0 * beta - L) / 4.0};
}

Spin7Projection3 project3_spin7(const Spin7Structure& S, const KForm& eta) {
    if (eta.dim() != 8 || eta.degree() != 3) throw DegreeError("project3_spin7: need a 3-form on R^8");
    // eta ^ Phi = 7 * w^flat on the 8-dimensional summand; the star flips the
    // sign on 7-forms, so the extraction carries a minus sign
    KForm wflat = S.star(wedge(eta, S.Phi())) * (-1.0 / 7.0);
    Spin7Projection3 out{KForm(8, 3), KForm(8, 3), S.sharp1(wflat)};
    out.p8 = interior(out.w, S.Phi());
    out.p48 = eta - out.p8;
    return out;
}

std::vector<KForm> lambda47_basis(const Spin7Structure& S) {
    auto frame = orthonormal_frame(S.metric());
    std::vector<KForm> basis;
    for (int i = 0; i < 8; ++i) {
        for (int j = i + 1; j < 8; ++j) {
            KForm cand = wedge(S.flat1(frame[i]), interior(frame[j], S.Phi())) -
                         wedge(S.flat1(frame[j]), interior(frame[i], S.Phi()));
            const double cand_scale = S.inner(cand, cand);
            for (const KForm& q : basis) cand -= S.inner(cand, q) * q;
            // re-orthogonalize once for numerical cleanliness
            for (const KForm& q : basis) cand -= S.inner(cand, q) * q;
            const double n2 = S.inner(cand, cand);
            if (n2 > 1e-12 * std::max(1.0, cand_scale)) basis.push_back(cand / std::sqrt(n2));
        }
    }
    return basis;
}

Spin7Projection4 project4_spin7(const Spin7Structure& S, const KForm& sigma) {
    if (sigma.dim() != 8 || sigma.degree() != 4) throw DegreeError("project4_spin7: need a 4-form on R^8");
    KForm star_sigma = S.star(sigma);
    Spin7Projection4 out{KForm(8, 4), KForm(8, 4), KForm(8, 4), KForm(8, 4)};
    out.p35 = (sigma - star_sigma) / 2.0;
    KForm sd = (sigma + star_sigma) / 2.0;
    out.p1 = (S.inner(sigma, S.Phi()) / 14.0) * S.Phi();
    out.p7 = KForm(8, 4);
    for (const KForm& q : lambda47_basis(S)) out.p7 += S.inner(sd, q) * q;
    out.p27 = sd - out.p1 - out.p7;
    return out;
}

Spin7Projection5 project5_spin7(const Spin7Structure& S, const KForm& mu) {
    if (mu.dim() != 8 || mu.degree() != 5) throw DegreeError("project5_spin7: need a 5-form on R^8");
    // ** = -1 on 5-forms: mu = -*(p8') - *(p48') for *mu = p8' + p48'
    auto p3 = project3_spin7(S, S.star(mu));
    return {-1.0 * S.star(p3.p8), -1.0 * S.star(p3.p48)};
}

Spin7Projection6 project6_spin7(const Spin7Structure& S, const KForm& mu) {
    if (mu.dim() != 8 || mu.degree() != 6) throw DegreeError("project6_spin7: need a 6-form on R^8");
    KForm M = wedge(S.Phi(), S.star(mu));
    return {(mu + M) / 4.0, (3.0 * mu - M) / 4.0};
}

std::pair<Spin7Structure, std::vector<Check>> conformal_scale_spin7(const Spin7Structure& S, double c) {
    if (c == 0.0) throw DegenerateScaleError("conformal_scale_spin7: scale must be non-zero");
    const double c2 = c * c;
    Spin7Structure T(std::pow(c, 4) * S.Phi(), Metric(c2 * S.metric().g(), S.orientation()));
    std::vector<Check> checks;
    Metric induced = spin7_metric(T.Phi()).metric;
    checks.push_back(make_check("induced_metric", "metric induced by f^4 Phi equals f^2 g",
                                (induced.g() - c2 * S.metric().g()).cwiseAbs().maxCoeff() /
                                    std::max(1.0, c2 * S.metric().g().cwiseAbs().maxCoeff()),
                                1e-9));
    checks.push_back(make_check("volume_scale", "conformal volume law vol~ = f^8 vol",
                                rel(T.vol(), std::pow(c, 8) * S.vol()), 1e-10));
    double worst = 0.0;
    for (int k = 0; k <= 8; ++k) {
        KForm a(8, k);
        int fill = 0;
        for (Mask msk : basis_masks(8, k)) {
            a.add(msk, 0.25 + 0.13 * ((fill * 2654435761u + k) % 101));
            if (++fill >= 5) break;
        }
        worst = std::max(worst, rel(T.star(a), std::pow(c, 8 - 2 * k) * S.star(a)));
    }
    checks.push_back(make_check("star_scale", "conformal star law *~ = f^{8-2k} *", worst, 1e-10));
    return {T, checks};
}

KForm b_operator(const Spin7Structure& S, const Vec& v, const Vec& w, const KForm& sigma) {
    if (sigma.dim() != 8 || sigma.degree() != 4) throw DegreeError("b_operator: need a 4-form on R^8");
    return wedge(S.flat1(v), interior(w, sigma)) - wedge(S.flat1(w), interior(v, sigma));
}

KForm b_operator_star(const Spin7Structure& S, const Vec& v, const Vec& w, const KForm& sigma) {
    if (sigma.dim() != 8 || sigma.degree() != 4) throw DegreeError("b_operator_star: need a 4-form on R^8");
    return interior(w, S.star(interior(v, sigma))) - interior(v, S.star(interior(w, sigma)));
}

SpectrumReport b_spectrum(const Spin7Structure& S, const Vec& v, const Vec& w) {
    const auto basis = basis_masks(8, 4);
    const int n = static_cast<int>(basis.size());  // 70
    Eigen::MatrixXd M(n, n);
    for (int j = 0; j < n; ++j) {
        KForm e(8, 4);
        e.add(basis[j], 1.0);
        KForm img = b_operator(S, v, w, e);
        for (int i = 0; i < n; ++i) M(i, j) = img.coeff(basis[i]);
    }
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i) {
        KForm a(8, 4);
        a.add(basis[i], 1.0);
        for (int j = i; j < n; ++j) {
            KForm b(8, 4);
            b.add(basis[j], 1.0);
            G(i, j) = G(j, i) = S.inner(a, b);
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    Eigen::MatrixXd Lt = Eigen::MatrixXd(llt.matrixL()).transpose();
    Eigen::MatrixXd Mon = Lt * M * Lt.inverse();

    SpectrumReport rep;
    rep.dim = n;
    rep.antisym_residual =
        (Mon + Mon.transpose()).cwiseAbs().maxCoeff() / std::max(1.0, Mon.cwiseAbs().maxCoeff());
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

FlowStateSpin7 flow_state_spin7(const Spin7Structure& S0, const Vec& v, const Vec& w, double t) {
    const double lam = std::sqrt(std::max(0.0, S0.metric().wedge_norm2(v, w)));
    if (lam == 0.0) return {S0.Phi(), t, std::numeric_limits<double>::infinity()};
    KForm B1 = b_operator(S0, v, w, S0.Phi());
    KForm B2 = b_operator(S0, v, w, B1);
    KForm Phi_t =
        S0.Phi() + ((1.0 - std::cos(lam * t)) / (lam * lam)) * B2 + (std::sin(lam * t) / lam) * B1;
    return {Phi_t, t, 2.0 * kPi / lam};
}

Spin7Torsion torsion_forms_spin7(const Spin7Structure& S, const KForm& dPhi) {
    if (dPhi.dim() != 8 || dPhi.degree() != 5) throw DegreeError("torsion_forms_spin7: dPhi must be a 5-form");
    Spin7Torsion out{KForm(8, 7), KForm(8, 1)};
    out.zeta = wedge(S.star(dPhi), S.Phi());
    out.theta = S.star(out.zeta);
    return out;
}

namespace {

// unit-volume oriented frame (h, b_1..b_7) used by the deformation diagnostic
std::vector<Vec> probe_frame(const Spin7Structure& S, const Vec& h) {
    const Metric& m = S.metric();
    const double hn = m.norm(h);
    if (hn == 0.0) throw DimensionError("w47 diagnostic: probe must be non-zero");
    std::vector<Vec> b;
    Vec hu = h / hn;
    for (int i = 0; i < 8 && static_cast<int>(b.size()) < 7; ++i) {
        Vec cand = Vec::Zero(8);
        cand[i] = 1.0;
        cand -= m.inner(cand, hu) * hu;
        for (auto& q : b) cand -= m.inner(cand, q) * q;
        double n2 = m.norm2(cand);
        if (n2 > 1e-12) b.push_back(cand / std::sqrt(n2));
    }
    if (b.size() != 7) throw DimensionError("w47 diagnostic: degenerate probe frame");
    // scale so that the frame (h, b_1..b_7) has unit volume
    const double s = std::pow(hn, -1.0 / 7.0);
    for (auto& q : b) q *= s;
    std::vector<Vec> frame{h};
    frame.insert(frame.end(), b.begin(), b.end());
    if (S.vol()(frame) < 0.0) frame.back() *= -1.0;
    return frame;
}

}  // namespace

W47Diagnostic w47_deform_diagnostics(const Spin7Structure& S, const Vec& v, const Vec& w) {
    Vec h(8);
    h << 0.9, -0.3, 0.7, 0.2, -0.5, 0.4, -0.8, 0.6;  // fixed default probe
    return w47_deform_diagnostics(S, v, w, h);
}

W47Diagnostic w47_deform_diagnostics(const Spin7Structure& S, const Vec& v, const Vec& w,
                                     const Vec& probe_h) {
    const Metric& m = S.metric();
    W47Diagnostic out;
    out.vw_wedge_norm2 = m.wedge_norm2(v, w);
    KForm sigma7 = wedge(S.flat1(v), interior(w, S.Phi())) - wedge(S.flat1(w), interior(v, S.Phi()));
    out.Phi_tilde = S.Phi() + sigma7;

    const double x = out.vw_wedge_norm2;
    out.expected_volume_ratio = 1.0 + (4.0 / 7.0) * x;
    out.volume_ratio = wedge(out.Phi_tilde, out.Phi_tilde).top() / wedge(S.Phi(), S.Phi()).top();

    // A(h) ratio: both 7-forms are proportional
    KForm X0 = wedge(interior(probe_h, S.Phi()), S.Phi());
    KForm X1 = wedge(interior(probe_h, out.Phi_tilde), out.Phi_tilde);
    double x0n = 0.0, dot = 0.0;
    for (auto& [mask, c] : X0.terms()) {
        x0n += c * c;
        dot += c * X1.coeff(mask);
    }
    out.A_ratio = dot / x0n;
    double prop_residual = (X1 - out.A_ratio * X0).sup() / std::max(1.0, X1.sup());

    // B~ in the unit-volume frame (h, b_1..b_7)
    auto frame = probe_frame(S, probe_h);
    std::vector<Vec> eval(frame.begin() + 1, frame.end());
    KForm p = interior(probe_h, out.Phi_tilde);
    out.B_matrix.resize(7, 7);
    std::vector<KForm> q;
    for (int i = 0; i < 7; ++i) q.push_back(interior(frame[i + 1], p));
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) {
            double val = wedge(wedge(q[i], q[j]), p)(eval);
            out.B_matrix(i, j) = out.B_matrix(j, i) = val;
        }
    out.det_B = out.B_matrix.determinant();
    const double hn2 = m.norm2(probe_h);
    out.expected_det_B = std::pow(6.0, 7) * std::pow(hn2, 6) * std::pow(1.0 + x, 6);
    out.implied_conformal = std::sqrt(1.0 + x) / std::pow(1.0 + (4.0 / 7.0) * x, 0.75);

    out.verdict = is_positive_4form(out.Phi_tilde);

    out.checks.push_back(make_check("volume_ratio", "Phi~^2 = (1 + (4/7)|v^w|^2) Phi^2",
                                    std::abs(out.volume_ratio - out.expected_volume_ratio) /
                                        out.expected_volume_ratio,
                                    1e-10));
    out.checks.push_back(make_check("A_ratio", "(h .| Phi~) ^ Phi~ scales by the volume ratio",
                                    std::abs(out.A_ratio - out.expected_volume_ratio) /
                                        out.expected_volume_ratio,
                                    1e-10));
    out.checks.push_back(make_check("A_proportionality", "(h .| Phi~) ^ Phi~ stays proportional",
                                    prop_residual, 1e-10));
    out.checks.push_back(make_check("det_B", "det B~ = 6^7 |h|^12 (1 + |v^w|^2)^6",
                                    std::abs(out.det_B - out.expected_det_B) /
                                        std::max(1.0, std::abs(out.expected_det_B)),
                                    1e-8));
    const bool degenerate = x <= 1e-12;
    const bool verdict_ok = degenerate ? out.verdict.positive : !out.verdict.positive;
    out.checks.push_back(make_check("positivity_verdict",
                                    "deformed form is positive only when v and w are parallel",
                                    verdict_ok ? 0.0 : 1.0, 0.5));
    // the two candidate conformal factors disagree whenever |v^w| > 0
    const double mismatch = std::abs(std::pow(out.implied_conformal, 8) - out.volume_ratio);
    const bool mismatch_ok = degenerate ? mismatch <= 1e-10 : mismatch > 1e-10;
    out.checks.push_back(make_check("conformal_factor_incompatibility",
                                    "implied conformal factor conflicts with the volume form",
                                    mismatch_ok ? 0.0 : 1.0, 0.5));
    return out;
}

}  // namespace ehk

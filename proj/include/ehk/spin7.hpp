#pragma once

// Pointwise algebra of Spin(7)-structures on R^8: the standard self-dual
// 4-form, quartic metric extraction, triple cross products, projections,
// 2-form pairing relations, conformal deformation, the rank-one 4-form
// deformation diagnostic, and the closed-form flow.

#include <optional>
#include <utility>

#include "ehk/exterior.hpp"
#include "ehk/g2.hpp"
#include "ehk/report.hpp"

namespace ehk {

KForm standard_Phi();

struct Spin7MetricResult {
    Metric metric;
    KForm vol;
};

// |probe|^4 extracted from the quartic determinant/trace expression; probes
// each of the 8 axis rotations until the denominator is usable
double spin7_quartic_length(const KForm& Phi, const Vec& probe);

// full Gram matrix recovered from 8 axis probes and 56 pair probes
Spin7MetricResult spin7_metric(const KForm& Phi);

// four-check certificate: metric driver, polarization consistency,
// self-duality, and the Phi^2 = 14 vol normalization
PositivityVerdict is_positive_4form(const KForm& Phi);

class Spin7Structure {
  public:
    explicit Spin7Structure(const KForm& Phi);
    Spin7Structure(const KForm& Phi, const Metric& metric);

    static const Spin7Structure& standard();

    const KForm& Phi() const { return Phi_; }
    const Metric& metric() const { return metric_; }
    const KForm& vol() const { return vol_; }
    int orientation() const { return metric_.orientation(); }

    KForm star(const KForm& a) const { return hodge(a, metric_); }
    double inner(const KForm& a, const KForm& b) const { return form_inner(a, b, metric_); }
    KForm flat1(const Vec& v) const { return flat(v, metric_); }
    Vec sharp1(const KForm& a) const { return sharp(a, metric_); }

  private:
    KForm Phi_;
    Metric metric_;
    KForm vol_;
};

// (X(u,v,w))^flat = w .| v .| u .| Phi
Vec triple_cross(const Spin7Structure& S, const Vec& u, const Vec& v, const Vec& w);

// X(a, b, X(u,v,w)) via two triple_cross calls
Vec triple_cross_double(const Spin7Structure& S, const Vec& a, const Vec& b, const Vec& u,
                        const Vec& v, const Vec& w);
// the 12-term iteration right-hand side, evaluated independently
Vec cross8_iterate_rhs(const Spin7Structure& S, const Vec& a, const Vec& b, const Vec& u,
                       const Vec& v, const Vec& w);
// special case X(a, b, X(a,b,w)) = -|a^b|^2 w + <a^b, w^b> a + <a^b, a^w> b
Vec cross8_iterate_special_rhs(const Spin7Structure& S, const Vec& a, const Vec& b, const Vec& w);

struct TwoFormPairing {
    double A = 0.0;  // <a^b, c^d>
    double B = 0.0;  // Phi(a,b,c,d)
    KForm beta7, beta21;          // components of a^flat ^ b^flat
    double wedge1 = 0.0;          // (a .| b .| Phi) ^ (c^flat ^ d^flat) ^ Phi   -> (-3A - 2B) vol
    double wedge2 = 0.0;          // (a^flat ^ b^flat) ^ (c .| Phi) ^ (d .| Phi) -> (-4A + 2B) vol
    double wedge3 = 0.0;          // (a .| b .| Phi) ^ (c .| d .| Phi) ^ Phi     -> (6A + 7B) vol
    std::vector<Check> checks;
};
TwoFormPairing two_form_pairings(const Spin7Structure& S, const Vec& a, const Vec& b, const Vec& c,
                                 const Vec& d);

struct Spin7Projection2 {
    KForm p7, p21;
};
Spin7Projection2 project2_spin7(const Spin7Structure& S, const KForm& beta);

struct Spin7Projection3 {
    KForm p8, p48;
    Vec w;  // p8 = w .| Phi
};
Spin7Projection3 project3_spin7(const Spin7Structure& S, const KForm& eta);

struct Spin7Projection4 {
    KForm p1, p7, p27, p35;
};
Spin7Projection4 project4_spin7(const Spin7Structure& S, const KForm& sigma);

struct Spin7Projection5 {
    KForm p8, p48;
};
Spin7Projection5 project5_spin7(const Spin7Structure& S, const KForm& mu);

struct Spin7Projection6 {
    KForm p7, p21;
};
Spin7Projection6 project6_spin7(const Spin7Structure& S, const KForm& mu);

// an orthonormal basis of the 7-dimensional self-dual summand built from the
// rank-two generators v^flat ^ (w .| Phi) - w^flat ^ (v .| Phi)
std::vector<KForm> lambda47_basis(const Spin7Structure& S);

std::pair<Spin7Structure, std::vector<Check>> conformal_scale_spin7(const Spin7Structure& S, double c);

struct W47Diagnostic {
    KForm Phi_tilde;
    double vw_wedge_norm2 = 0.0;        // |v ^ w|^2
    double volume_ratio = 0.0;          // Phi~^2 / Phi^2
    double expected_volume_ratio = 0.0; // 1 + (4/7)|v^w|^2
    double A_ratio = 0.0;               // (h .| Phi~) ^ Phi~ vs (h .| Phi) ^ Phi
    Eigen::MatrixXd B_matrix;           // 7x7, probe frame
    double det_B = 0.0;
    double expected_det_B = 0.0;        // 6^7 |h|^12 (1 + |v^w|^2)^6
    double implied_conformal = 0.0;     // (1+|v^w|^2)^{1/2} / (1+(4/7)|v^w|^2)^{3/4}
    PositivityVerdict verdict;
    std::vector<Check> checks;
};
W47Diagnostic w47_deform_diagnostics(const Spin7Structure& S, const Vec& v, const Vec& w);
W47Diagnostic w47_deform_diagnostics(const Spin7Structure& S, const Vec& v, const Vec& w,
                                     const Vec& probe_h);

// B sigma = v^flat ^ (w .| sigma) - w^flat ^ (v .| sigma)
KForm b_operator(const Spin7Structure& S, const Vec& v, const Vec& w, const KForm& sigma);
// the star-conjugated form w .| *(v .| sigma) - v .| *(w .| sigma); equals
// b_operator on self-dual input and differs by a sign on anti-self-dual input
KForm b_operator_star(const Spin7Structure& S, const Vec& v, const Vec& w, const KForm& sigma);

SpectrumReport b_spectrum(const Spin7Structure& S, const Vec& v, const Vec& w);

struct FlowStateSpin7 {
    KForm Phi_t;
    double t = 0.0;
    double period = 0.0;  // 2 pi / |v ^ w|
};
FlowStateSpin7 flow_state_spin7(const Spin7Structure& S0, const Vec& v, const Vec& w, double t);

struct Spin7Torsion {
    KForm zeta;   // 7-form
    KForm theta;  // 1-form
};
Spin7Torsion torsion_forms_spin7(const Spin7Structure& S, const KForm& dPhi);

}  // namespace ehk

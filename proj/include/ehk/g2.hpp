#pragma once

// Pointwise algebra of G2-structures on R^7: the standard positive 3-form,
// metric extraction, cross products, irreducible projections, conformal and
// vector-field deformations, and the closed-form deformation flow.

#include <optional>
#include <utility>

#include "ehk/exterior.hpp"
#include "ehk/report.hpp"

namespace ehk {

struct PositivityVerdict {
    bool positive = false;
    int n_pos = 0, n_neg = 0, n_zero = 0;  // eigenvalue signature of the intrinsic Gram matrix
    std::optional<Metric> metric;
    std::string reason;  // first failed certificate check when not positive
};

// (phi0, *phi0) with the standard signed unit coefficients
std::pair<KForm, KForm> standard_phi();

struct G2MetricResult {
    Metric metric;
    KForm vol;
};

// metric and volume induced by a positive 3-form; throws NotPositiveError
G2MetricResult g2_metric(const KForm& phi);

PositivityVerdict is_positive_3form(const KForm& phi);

class G2Structure {
  public:
    explicit G2Structure(const KForm& phi);
    G2Structure(const KForm& phi, const Metric& metric);  // trusted metric (cross-checked by callers)

    static const G2Structure& standard();

    const KForm& phi() const { return phi_; }
    const Metric& metric() const { return metric_; }
    const KForm& vol() const { return vol_; }
    const KForm& star_phi() const { return star_phi_; }
    int orientation() const { return metric_.orientation(); }

    KForm star(const KForm& a) const { return hodge(a, metric_); }
    double inner(const KForm& a, const KForm& b) const { return form_inner(a, b, metric_); }
    KForm flat1(const Vec& v) const { return flat(v, metric_); }
    Vec sharp1(const KForm& a) const { return sharp(a, metric_); }

  private:
    KForm phi_;
    Metric metric_;
    KForm vol_;
    KForm star_phi_;
};

// (u x v)^flat = v .| u .| phi
Vec cross(const G2Structure& S, const Vec& u, const Vec& v);

// u x (v x w) via two cross calls
Vec cross_double(const G2Structure& S, const Vec& u, const Vec& v, const Vec& w);
// independent right-hand side: -<u,v> w + <u,w> v - (u .| v .| w .| *phi)#
Vec cross_double_rhs(const G2Structure& S, const Vec& u, const Vec& v, const Vec& w);

struct G2Projection2 {
    KForm p7, p14;
};
G2Projection2 project2(const G2Structure& S, const KForm& beta);

struct G2Projection3 {
    KForm p1, p7, p27;
    Vec w7;       // p7 = w7 .| *phi
    double f1;    // p1 = f1 * phi
};
G2Projection3 project3(const G2Structure& S, const KForm& eta);

struct G2Projection4 {
    KForm p1, p7, p27;
};
G2Projection4 project4(const G2Structure& S, const KForm& sigma);

struct G2Projection5 {
    KForm p7, p14;
};
G2Projection5 project5(const G2Structure& S, const KForm& gamma);

// phi -> c^3 phi; the report verifies the scaling laws for metric, volume,
// star and *phi on random forms
std::pair<G2Structure, std::vector<Check>> conformal_scale(const G2Structure& S, double c);

// phi -> phi + w .| *phi with the closed-formula metric; the report
// cross-checks metric, volume, inverse metric, the twisted star and the
// k-form metric identity
struct VfDeformResult {
    G2Structure structure;
    double vol_ratio = 0.0;
    std::vector<Check> checks;
};
VfDeformResult vf_deform(const G2Structure& S, const Vec& w);

// the twisted Hodge star of the deformed structure, evaluated through the
// closed formula rather than the Gram-determinant star
KForm vf_deform_star(const G2Structure& S, const Vec& w, const KForm& a);

// A eta = w .| * eta on 3-forms
KForm a_operator(const G2Structure& S, const Vec& w, const KForm& eta);

struct SpectrumReport {
    int dim = 0;            // size of the operator matrix
    int rank = 0;
    int kernel_dim = 0;
    double antisym_residual = 0.0;   // in an orthonormal form basis
    std::vector<double> singular_values;  // descending
};
SpectrumReport a_spectrum(const G2Structure& S, const Vec& w);

struct FlowStateG2 {
    KForm phi_t;
    double t = 0.0;
    Vec w;
    double period = 0.0;  // 2 pi / |w|
};
FlowStateG2 flow_state(const G2Structure& S0, const Vec& w, double t);

// time-dependent speed along a fixed unit direction; the schedule is sampled
// uniformly on [0, t] and integrated with composite Simpson quadrature
KForm flow_state_timedep(const G2Structure& S0, const Vec& direction,
                         const std::vector<double>& speed_samples, double t);

struct G2Torsion {
    KForm mu;      // 6-form
    KForm theta;   // 1-form
    double h;
    bool consistent = true;       // *dphi ^ phi vs -*dstarphi ^ *phi
    double consistency_residual = 0.0;
};
G2Torsion torsion_forms_g2(const G2Structure& S, const KForm& dphi, const KForm& dstarphi);

}  // namespace ehk

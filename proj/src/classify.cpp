#include "ehk/classify.hpp"

#include <cmath>

#include "ehk/parallel.hpp"

namespace ehk {

namespace {

struct ClassRow {
    const char* label;
    std::vector<const char*> equations;
};

}  // namespace

FormField star_field_g2(const FormField& phi) {
    if (phi.degree() != 3 || phi.grid().dim() != 7) throw DegreeError("star_field_g2: need a 3-form field on T^7");
    FormField out(phi.grid(), 4);
    std::vector<char> bad(phi.grid().npoints(), 0);
    parallel_for(phi.grid().npoints(), [&](std::size_t p) {
        auto v = is_positive_3form(phi.form_at(p));
        if (!v.positive) {
            bad[p] = 1;
            return;
        }
        out.set_form(p, hodge(phi.form_at(p), *v.metric));
    });
    for (std::size_t p = 0; p < bad.size(); ++p)
        if (bad[p])
            throw NotPositiveError("star_field_g2: form is not positive at grid point " + std::to_string(p));
    return out;
}

FormField star_field_spin7(const FormField& Phi) {
    if (Phi.degree() != 4 || Phi.grid().dim() != 8)
        throw DegreeError("star_field_spin7: need a 4-form field on T^8");
    FormField out(Phi.grid(), 4);
    std::vector<char> bad(Phi.grid().npoints(), 0);
    parallel_for(Phi.grid().npoints(), [&](std::size_t p) {
        auto v = is_positive_4form(Phi.form_at(p));
        if (!v.positive) {
            bad[p] = 1;
            return;
        }
        out.set_form(p, hodge(Phi.form_at(p), *v.metric));
    });
    for (std::size_t p = 0; p < bad.size(); ++p)
        if (bad[p])
            throw NotPositiveError("star_field_spin7: form is not positive at grid point " +
                                   std::to_string(p));
    return out;
}

ClassReport classify_g2_from_data(const FormField& phi, const FormField& dphi,
                                  const FormField& dstarphi, double tolerance) {
    const PeriodicGrid& g = phi.grid();
    const std::size_t np = g.npoints();
    if (dphi.degree() != 4 || dstarphi.degree() != 5)
        throw DegreeError("classify_g2_from_data: dphi/dstarphi degrees must be 4/5");

    ClassReport rep{.class_label = "", .residuals = {}, .theta_field = FormField(g, 1),
                    .h_field = FormField(g, 0), .theta_closed = false, .theta_exact = false,
                    .cohomology_rep = {}, .tolerance = tolerance};

    // pointwise structures and torsion quantities
    std::vector<G2Structure> S;
    S.reserve(np);
    for (std::size_t p = 0; p < np; ++p) {
        auto v = is_positive_3form(phi.form_at(p));
        if (!v.positive)
            throw NotPositiveError("classify_g2: form is not positive at grid point " + std::to_string(p));
        S.emplace_back(phi.form_at(p), *v.metric);
    }
    const double scale = dphi.sup_norm() + dstarphi.sup_norm() + 1.0;

    std::map<std::string, double> eq;
    for (const char* name : {"dphi", "dstarphi", "dphi_wedge_phi", "theta", "integrable",
                             "pi27_vanishes", "lc_almost", "nearly"})
        eq[name] = 0.0;

    for (std::size_t p = 0; p < np; ++p) {
        const KForm ph = phi.form_at(p);
        const KForm dph = dphi.form_at(p);
        const KForm dsp = dstarphi.form_at(p);
        G2Torsion t = torsion_forms_g2(S[p], dph, dsp);
        rep.theta_field.set_form(p, t.theta);
        rep.h_field->set_form(p, KForm::scalar(7, t.h));

        eq["dphi"] = std::max(eq["dphi"], dph.sup());
        eq["dstarphi"] = std::max(eq["dstarphi"], dsp.sup());
        eq["dphi_wedge_phi"] = std::max(eq["dphi_wedge_phi"], wedge(dph, ph).sup());
        eq["theta"] = std::max(eq["theta"], t.theta.sup());
        eq["integrable"] =
            std::max(eq["integrable"], (dsp + (1.0 / 3.0) * wedge(t.theta, S[p].star_phi())).sup());
        eq["pi27_vanishes"] =
            std::max(eq["pi27_vanishes"],
                     (dph + 0.25 * wedge(t.theta, ph) - t.h * S[p].star_phi()).sup());
        eq["lc_almost"] = std::max(eq["lc_almost"], (dph + 0.25 * wedge(t.theta, ph)).sup());
        eq["nearly"] = std::max(eq["nearly"], (dph - t.h * S[p].star_phi()).sup());
    }
    for (auto& [k, v] : eq) rep.residuals[k] = v / scale;

    // Table rows, smallest class first; the first fully satisfied row wins.
    static const std::vector<ClassRow> rows = {
        {"{0}", {"dphi", "dstarphi"}},
        {"W1", {"nearly", "dstarphi"}},
        {"W7", {"lc_almost", "integrable"}},
        {"W14", {"dphi"}},
        {"W27", {"dphi_wedge_phi", "dstarphi"}},
        {"W1+W7", {"pi27_vanishes", "integrable"}},
        {"W1+W14", {"nearly"}},
        {"W1+W27", {"dstarphi"}},
        {"W7+W14", {"lc_almost"}},
        {"W7+W27", {"dphi_wedge_phi", "integrable"}},
        {"W14+W27", {"dphi_wedge_phi", "theta"}},
        {"W1+W7+W14", {"pi27_vanishes"}},
        {"W1+W7+W27", {"integrable"}},
        {"W1+W14+W27", {"theta"}},
        {"W7+W14+W27", {"dphi_wedge_phi"}},
        {"W1+W7+W14+W27", {}},
    };
    for (const auto& row : rows) {
        bool ok = true;
        for (const char* e : row.equations) ok = ok && rep.residuals.at(e) < tolerance;
        if (ok) {
            rep.class_label = row.label;
            break;
        }
    }

    FormField dtheta = rep.theta_field.d();
    rep.theta_closed = dtheta.sup_norm() / (1.0 + rep.theta_field.sup_norm()) < tolerance;
    rep.cohomology_rep.resize(7);
    bool exact = true;
    for (int a = 0; a < 7; ++a) {
        rep.cohomology_rep[a] = rep.theta_field.component_mean(a);
        exact = exact && std::abs(rep.cohomology_rep[a]) < tolerance * (1.0 + rep.theta_field.sup_norm());
    }
    rep.theta_exact = exact;
    return rep;
}

ClassReport classify_g2(const FormField& phi, double tolerance) {
    FormField starphi = star_field_g2(phi);
    return classify_g2_from_data(phi, phi.d(), starphi.d(), tolerance);
}

ClassReport classify_spin7_from_data(const FormField& Phi, const FormField& dPhi, double tolerance) {
    const PeriodicGrid& g = Phi.grid();
    const std::size_t np = g.npoints();
    if (dPhi.degree() != 5) throw DegreeError("classify_spin7_from_data: dPhi degree must be 5");

    ClassReport rep{.class_label = "", .residuals = {}, .theta_field = FormField(g, 1),
                    .h_field = std::nullopt, .theta_closed = false, .theta_exact = false,
                    .cohomology_rep = {}, .tolerance = tolerance};

    std::vector<Spin7Structure> S;
    S.reserve(np);
    for (std::size_t p = 0; p < np; ++p) {
        auto v = is_positive_4form(Phi.form_at(p));
        if (!v.positive)
            throw NotPositiveError("classify_spin7: form is not positive at grid point " +
                                   std::to_string(p));
        S.emplace_back(Phi.form_at(p), *v.metric);
    }
    const double scale = dPhi.sup_norm() + 1.0;

    std::map<std::string, double> eq{{"dPhi", 0.0}, {"theta", 0.0}, {"lc", 0.0}};
    for (std::size_t p = 0; p < np; ++p) {
        const KForm Ph = Phi.form_at(p);
        const KForm dPh = dPhi.form_at(p);
        Spin7Torsion t = torsion_forms_spin7(S[p], dPh);
        rep.theta_field.set_form(p, t.theta);
        eq["dPhi"] = std::max(eq["dPhi"], dPh.sup());
        eq["theta"] = std::max(eq["theta"], t.theta.sup());
        eq["lc"] = std::max(eq["lc"], (dPh + (1.0 / 7.0) * wedge(t.theta, Ph)).sup());
    }
    for (auto& [k, v] : eq) rep.residuals[k] = v / scale;

    static const std::vector<ClassRow> rows = {
        {"{0}", {"dPhi"}},
        {"W8", {"lc"}},
        {"W48", {"theta"}},
        {"W8+W48", {}},
    };
    for (const auto& row : rows) {
        bool ok = true;
        for (const char* e : row.equations) ok = ok && rep.residuals.at(e) < tolerance;
        if (ok) {
            rep.class_label = row.label;
            break;
        }
    }

    FormField dtheta = rep.theta_field.d();
    rep.theta_closed = dtheta.sup_norm() / (1.0 + rep.theta_field.sup_norm()) < tolerance;
    rep.cohomology_rep.resize(8);
    bool exact = true;
    for (int a = 0; a < 8; ++a) {
        rep.cohomology_rep[a] = rep.theta_field.component_mean(a);
        exact = exact && std::abs(rep.cohomology_rep[a]) < tolerance * (1.0 + rep.theta_field.sup_norm());
    }
    rep.theta_exact = exact;
    return rep;
}

ClassReport classify_spin7(const FormField& Phi, double tolerance) {
    return classify_spin7_from_data(Phi, Phi.d(), tolerance);
}

namespace {

bool class_within(const std::string& label, const std::vector<std::string>& allowed) {
    for (const auto& a : allowed)
        if (label == a) return true;
    return false;
}

}  // namespace

std::variant<FormField, Obstruction> solve_conformal_factor(const FormField& field,
                                                            ConformalTarget target,
                                                            double tolerance) {
    const int dim = field.grid().dim();
    std::optional<ClassReport> found;
    double divisor;
    if (target == ConformalTarget::G2) {
        if (dim != 7) throw DimensionError("solve_conformal_factor: G2 target needs a T^7 field");
        found = classify_g2(field, tolerance);
        // d(f^3 phi) = 0 requires pi_1(dphi) = pi_27(dphi) = 0, i.e. class within W7+W14
        if (!class_within(found->class_label, {"{0}", "W7", "W14", "W7+W14"}))
            throw ClassError("solve_conformal_factor: class " + found->class_label +
                             " admits no closed conformal rescaling");
        divisor = 12.0;
    } else {
        if (dim != 8) throw DimensionError("solve_conformal_factor: Spin(7) target needs a T^8 field");
        found = classify_spin7(field, tolerance);
        if (!class_within(found->class_label, {"{0}", "W8"}))
            throw ClassError("solve_conformal_factor: class " + found->class_label +
                             " admits no closed conformal rescaling");
        divisor = 28.0;
    }
    const ClassReport& rep = *found;

    const double theta_scale = 1.0 + rep.theta_field.sup_norm();
    for (int a = 0; a < dim; ++a) {
        if (std::abs(rep.cohomology_rep[a]) > tolerance * theta_scale)
            return Obstruction{rep.cohomology_rep};
    }

    OneFormIntegral integral = integrate_exact_one_form(rep.theta_field);
    FormField f(field.grid(), 0);
    for (std::size_t p = 0; p < field.grid().npoints(); ++p)
        f.at(0, p) = std::exp(integral.potential.at(0, p) / divisor);
    return f;
}

namespace {

double law_residual(const FormField& lhs, const FormField& rhs) {
    double scale = std::max({1.0, lhs.sup_norm(), rhs.sup_norm()});
    return (lhs - rhs).sup_norm() / scale;
}

std::vector<Check> verify_g2_laws(const FormField& phi, const FormField& f, double tol) {
    const PeriodicGrid& g = phi.grid();
    const std::size_t np = g.npoints();

    // scaled field and pointwise structures for both
    FormField phit(g, 3), logf(g, 0);
    for (std::size_t p = 0; p < np; ++p) {
        const double fp = f.at(0, p);
        if (!(fp > 0.0)) throw DegenerateScaleError("verify_conformal_theorems: f must be positive");
        phit.set_form(p, std::pow(fp, 3) * phi.form_at(p));
        logf.at(0, p) = std::log(fp);
    }

    FormField star_o = star_field_g2(phi), star_t = star_field_g2(phit);
    FormField dphi_o = phi.d(), dphi_t = phit.d();
    FormField dstar_o = star_o.d(), dstar_t = star_t.d();
    FormField dlogf = logf.d();

    // pointwise torsion quantities
    FormField theta_o(g, 1), theta_t(g, 1), mu_o(g, 6), mu_t(g, 6), h_o(g, 0), h_t(g, 0);
    FormField stardf(g, 6);  // *_o df
    for (std::size_t p = 0; p < np; ++p) {
        G2Structure So(phi.form_at(p));
        G2Structure St(phit.form_at(p));
        G2Torsion to = torsion_forms_g2(So, dphi_o.form_at(p), dstar_o.form_at(p));
        G2Torsion tt = torsion_forms_g2(St, dphi_t.form_at(p), dstar_t.form_at(p));
        theta_o.set_form(p, to.theta);
        theta_t.set_form(p, tt.theta);
        mu_o.set_form(p, to.mu);
        mu_t.set_form(p, tt.mu);
        h_o.at(0, p) = to.h;
        h_t.at(0, p) = tt.h;
        KForm df(7, 1);
        for (int a = 0; a < 7; ++a) df.add(static_cast<Mask>(1u << a), dlogf.at(a, p) * f.at(0, p));
        stardf.set_form(p, So.star(df));
    }

    auto pw = [&](int degree, auto&& fn) {
        FormField out(g, degree);
        for (std::size_t p = 0; p < np; ++p) out.set_form(p, fn(p));
        return out;
    };
    auto powf = [&](std::size_t p, int k) { return std::pow(f.at(0, p), k); };

    std::vector<Check> checks;
    // (a) d*~phi~ + 1/3 theta~ ^ *~phi~ = f^4 (d*phi + 1/3 theta ^ *phi)
    {
        FormField lhs = pw(5, [&](std::size_t p) {
            return dstar_t.form_at(p) + (1.0 / 3.0) * wedge(theta_t.form_at(p), star_t.form_at(p));
        });
        FormField rhs = pw(5, [&](std::size_t p) {
            return powf(p, 4) *
                   (dstar_o.form_at(p) + (1.0 / 3.0) * wedge(theta_o.form_at(p), star_o.form_at(p)));
        });
        checks.push_back(make_check("coclosed_combination", "d*phi + 1/3 theta^*phi scales by f^4",
                                    law_residual(lhs, rhs), tol));
    }
    // (b) dphi~ + 1/4 theta~ ^ phi~ = f^3 (dphi + 1/4 theta ^ phi)
    {
        FormField lhs = pw(4, [&](std::size_t p) {
            return dphi_t.form_at(p) + 0.25 * wedge(theta_t.form_at(p), phit.form_at(p));
        });
        FormField rhs = pw(4, [&](std::size_t p) {
            return powf(p, 3) * (dphi_o.form_at(p) + 0.25 * wedge(theta_o.form_at(p), phi.form_at(p)));
        });
        checks.push_back(make_check("closed_combination", "dphi + 1/4 theta^phi scales by f^3",
                                    law_residual(lhs, rhs), tol));
    }
    // (c) dphi~ ^ phi~ = f^6 (dphi ^ phi)
    {
        FormField lhs = pw(7, [&](std::size_t p) { return wedge(dphi_t.form_at(p), phit.form_at(p)); });
        FormField rhs = pw(7, [&](std::size_t p) {
            return powf(p, 6) * wedge(dphi_o.form_at(p), phi.form_at(p));
        });
        checks.push_back(make_check("dphi_wedge_phi", "dphi ^ phi scales by f^6",
                                    law_residual(lhs, rhs), tol));
    }
    // (d) full 27-component combination scales by f^3
    {
        FormField lhs = pw(4, [&](std::size_t p) {
            G2Structure St(phit.form_at(p));
            return dphi_t.form_at(p) + 0.25 * wedge(theta_t.form_at(p), phit.form_at(p)) -
                   h_t.at(0, p) * St.star_phi();
        });
        FormField rhs = pw(4, [&](std::size_t p) {
            G2Structure So(phi.form_at(p));
            return powf(p, 3) * (dphi_o.form_at(p) + 0.25 * wedge(theta_o.form_at(p), phi.form_at(p)) -
                                 h_o.at(0, p) * So.star_phi());
        });
        checks.push_back(make_check("pi27_combination", "dphi + 1/4 theta^phi - h *phi scales by f^3",
                                    law_residual(lhs, rhs), tol));
    }
    // (e) mu~ = -12 f^4 *df + f^5 mu
    {
        FormField rhs = pw(6, [&](std::size_t p) {
            return -12.0 * powf(p, 4) * stardf.form_at(p) + powf(p, 5) * mu_o.form_at(p);
        });
        checks.push_back(make_check("mu_law", "mu~ = -12 f^4 *df + f^5 mu", law_residual(mu_t, rhs), tol));
    }
    // (f) theta~ = -12 d log f + theta
    {
        FormField rhs = theta_o - 12.0 * dlogf;
        checks.push_back(make_check("theta_law", "theta~ = -12 d log f + theta",
                                    law_residual(theta_t, rhs), tol));
    }
    return checks;
}

std::vector<Check> verify_spin7_laws(const FormField& Phi, const FormField& f, double tol) {
    const PeriodicGrid& g = Phi.grid();
    const std::size_t np = g.npoints();

    FormField Phit(g, 4), logf(g, 0);
    for (std::size_t p = 0; p < np; ++p) {
        const double fp = f.at(0, p);
        if (!(fp > 0.0)) throw DegenerateScaleError("verify_conformal_theorems: f must be positive");
        Phit.set_form(p, std::pow(fp, 4) * Phi.form_at(p));
        logf.at(0, p) = std::log(fp);
    }
    FormField dPhi_o = Phi.d(), dPhi_t = Phit.d(), dlogf = logf.d();

    FormField theta_o(g, 1), theta_t(g, 1), zeta_o(g, 7), zeta_t(g, 7), stardf(g, 7);
    for (std::size_t p = 0; p < np; ++p) {
        Spin7Structure So(Phi.form_at(p));
        Spin7Structure St(Phit.form_at(p));
        Spin7Torsion to = torsion_forms_spin7(So, dPhi_o.form_at(p));
        Spin7Torsion tt = torsion_forms_spin7(St, dPhi_t.form_at(p));
        theta_o.set_form(p, to.theta);
        theta_t.set_form(p, tt.theta);
        zeta_o.set_form(p, to.zeta);
        zeta_t.set_form(p, tt.zeta);
        KForm df(8, 1);
        for (int a = 0; a < 8; ++a) df.add(static_cast<Mask>(1u << a), dlogf.at(a, p) * f.at(0, p));
        stardf.set_form(p, So.star(df));
    }

    auto pw = [&](int degree, auto&& fn) {
        FormField out(g, degree);
        for (std::size_t p = 0; p < np; ++p) out.set_form(p, fn(p));
        return out;
    };
    auto powf = [&](std::size_t p, int k) { return std::pow(f.at(0, p), k); };

    std::vector<Check> checks;
    // dPhi~ + 1/7 theta~ ^ Phi~ = f^4 (dPhi + 1/7 theta ^ Phi)
    {
        FormField lhs = pw(5, [&](std::size_t p) {
            return dPhi_t.form_at(p) + (1.0 / 7.0) * wedge(theta_t.form_at(p), Phit.form_at(p));
        });
        FormField rhs = pw(5, [&](std::size_t p) {
            return powf(p, 4) *
                   (dPhi_o.form_at(p) + (1.0 / 7.0) * wedge(theta_o.form_at(p), Phi.form_at(p)));
        });
        checks.push_back(make_check("lc_combination", "dPhi + 1/7 theta^Phi scales by f^4",
                                    law_residual(lhs, rhs), tol));
    }
    // zeta~ = -28 f^5 *df + f^6 zeta
    {
        FormField rhs = pw(7, [&](std::size_t p) {
            return -28.0 * powf(p, 5) * stardf.form_at(p) + powf(p, 6) * zeta_o.form_at(p);
        });
        checks.push_back(make_check("zeta_law", "zeta~ = -28 f^5 *df + f^6 zeta",
                                    law_residual(zeta_t, rhs), tol));
    }
    // theta~ = -28 d log f + theta
    {
        FormField rhs = theta_o - 28.0 * dlogf;
        checks.push_back(make_check("theta_law", "theta~ = -28 d log f + theta",
                                    law_residual(theta_t, rhs), tol));
    }
    return checks;
}

}  // namespace

std::vector<Check> verify_conformal_theorems(const FormField& field, const FormField& f,
                                             double tolerance) {
    if (f.degree() != 0) throw DegreeError("verify_conformal_theorems: f must be a scalar field");
    if (field.grid().dim() == 7 && field.degree() == 3) return verify_g2_laws(field, f, tolerance);
    if (field.grid().dim() == 8 && field.degree() == 4) return verify_spin7_laws(field, f, tolerance);
    throw DegreeError("verify_conformal_theorems: need a 3-form field on T^7 or a 4-form field on T^8");
}

}  // namespace ehk

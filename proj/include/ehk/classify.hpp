#pragma once

// Torsion computation and class verdicts for structure-valued fields on flat
// tori, plus the conformal-factor solver and the transformation-law checks
// that involve the exterior derivative.

#include <map>
#include <optional>
#include <variant>

#include "ehk/g2.hpp"
#include "ehk/grid.hpp"
#include "ehk/report.hpp"
#include "ehk/spin7.hpp"

namespace ehk {

struct ClassReport {
    std::string class_label;
    std::map<std::string, double> residuals;  // defining equation -> scaled sup residual
    FormField theta_field;                    // 1-form field
    std::optional<FormField> h_field;         // degree-0 field (only for dim 7)
    bool theta_closed = false;
    bool theta_exact = false;
    std::vector<double> cohomology_rep;       // per-axis means of theta
    double tolerance = 0.0;
};

// classifier arithmetic on supplied derivative data (used directly by the
// manufactured-solution tests; the field entry points below compute the
// derivatives spectrally)
ClassReport classify_g2_from_data(const FormField& phi, const FormField& dphi,
                                  const FormField& dstarphi, double tolerance = 1e-6);
ClassReport classify_spin7_from_data(const FormField& Phi, const FormField& dPhi,
                                     double tolerance = 1e-6);

ClassReport classify_g2(const FormField& phi, double tolerance = 1e-6);
ClassReport classify_spin7(const FormField& Phi, double tolerance = 1e-6);

// pointwise Hodge dual field (the star of each gridpoint's induced structure)
FormField star_field_g2(const FormField& phi);
FormField star_field_spin7(const FormField& Phi);

struct Obstruction {
    std::vector<double> cohomology_rep;
};

enum class ConformalTarget { G2, Spin7 };

// solve 12 d log f = theta (G2) or 28 d log f = theta (Spin(7)); returns the
// positive factor field f, or the obstruction when theta has a harmonic part
std::variant<FormField, Obstruction> solve_conformal_factor(const FormField& field,
                                                            ConformalTarget target,
                                                            double tolerance = 1e-6);

// evaluate both sides of every displayed conformal transformation law on the
// grid; dispatches on the field dimension (7 or 8)
std::vector<Check> verify_conformal_theorems(const FormField& field, const FormField& f,
                                             double tolerance = 1e-8);

}  // namespace ehk

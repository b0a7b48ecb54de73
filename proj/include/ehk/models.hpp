#pragma once

// Flat model structures with analytically known flow behavior: the product
// of a complex 3-fold model with a circle, the flat hyperkaehler model times
// a 3-torus, the flat complex 4-fold model, and the 7-dimensional structure
// crossed with a circle.

#include <functional>
#include <map>
#include <string>

#include "ehk/g2.hpp"
#include "ehk/spin7.hpp"

namespace ehk {

struct ModelStructure {
    std::string name;
    int dim = 0;
    std::optional<G2Structure> g2;
    std::optional<Spin7Structure> spin7;
    std::map<std::string, KForm> ingredients;

    // pinned flow generators for the 8-dimensional models
    Vec generator_v, generator_w;

    // exact flow image; dim-7 models take one generator, dim-8 models two
    std::function<KForm(const Vec&, double)> flow7;
    std::function<KForm(const Vec&, const Vec&, double)> flow8;

    KForm expected_flow(const Vec& w, double t) const {
        if (!flow7) throw DimensionError("expected_flow: not a 7-dimensional model");
        return flow7(w, t);
    }
    KForm expected_flow(const Vec& v, const Vec& w, double t) const {
        if (!flow8) throw DimensionError("expected_flow: not an 8-dimensional model");
        return flow8(v, w, t);
    }
};

// phi = Re(Omega) + dtheta ^ omega on axes (x1,x2,x3,theta,y1,y2,y3)
ModelStructure cy3_s1();

// phi = dtheta^123 - dtheta^1 ^ omega_1 - dtheta^2 ^ omega_2 - dtheta^3 ^ omega_3
// on axes (theta1,theta2,theta3,y0,y1,y2,y3)
ModelStructure t4_hk_t3();

// Phi = Re(Omega) + omega^2/2 on axes (x1,x2,x3,x4,y1,y2,y3,y4)
ModelStructure cy4();

// Phi = dtheta ^ phi + *7 phi with theta on axis 0
ModelStructure g2_times_s1(const G2Structure& S7);

// registry for the CLI: nullptr-free lookup by fixture name
ModelStructure model_by_name(const std::string& name);
std::vector<std::string> model_names();

// embed a form on R^7 (labels 1..7) into R^8 (labels 0..7)
KForm embed7(const KForm& a);

}  // namespace ehk

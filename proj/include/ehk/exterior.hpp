#pragma once

// Pointwise exterior algebra: wedge, interior product, Hodge star, induced
// metric on forms, musical isomorphisms, pullbacks, and the rank-one
// determinant update used by the volume computations.

#include "ehk/kform.hpp"
#include "ehk/metric.hpp"

namespace ehk {

KForm wedge(const KForm& a, const KForm& b);
KForm interior(const Vec& w, const KForm& a);

// beta ^ hodge(alpha) = <beta, alpha> vol for all beta of the same degree
KForm hodge(const KForm& a, const Metric& m);

// Gram-determinant inner product on k-forms (uses the inverse metric)
double form_inner(const KForm& a, const KForm& b, const Metric& m);

KForm flat(const Vec& v, const Metric& m);
Vec sharp(const KForm& a, const Metric& m);

// (A^* alpha)(v_1..v_k) = alpha(A v_1, .., A v_k)
KForm pullback(const Eigen::MatrixXd& A, const KForm& a);

// det(C g_ij + K v_i w_j) with v_i, w_j the lowered components; dense route
double rank_one_det(double C, double K, const Metric& m, const Vec& v, const Vec& w);
// closed form C^n det(g) + C^{n-1} K <v,w> det(g); independent of the dense route
double rank_one_det_closed(double C, double K, const Metric& m, const Vec& v, const Vec& w);

// all basis masks of the given degree, ordered lexicographically by ascending
// label sequence (the order used by serialization and spectrum assembly)
std::vector<Mask> basis_masks(int dim, int degree);

// coefficient of a ^ b ^ c on a single target monomial, without forming the
// full product
double wedge3_coeff(const KForm& a, const KForm& b, const KForm& c, Mask target);

}  // namespace ehk

#include "ehk/exterior.hpp"

#include <algorithm>
#include <functional>

namespace ehk {

namespace {

// determinant of the submatrix M[rows, cols] where rows/cols are bit lists
double minor_det(const Eigen::MatrixXd& M, const std::vector<int>& rows, const std::vector<int>& cols) {
    const int k = static_cast<int>(rows.size());
    switch (k) {
        case 0:
            return 1.0;
        case 1:
            return M(rows[0], cols[0]);
        case 2:
            return M(rows[0], cols[0]) * M(rows[1], cols[1]) - M(rows[0], cols[1]) * M(rows[1], cols[0]);
        case 3: {
            double a = M(rows[0], cols[0]), b = M(rows[0], cols[1]), c = M(rows[0], cols[2]);
            double d = M(rows[1], cols[0]), e = M(rows[1], cols[1]), f = M(rows[1], cols[2]);
            double g = M(rows[2], cols[0]), h = M(rows[2], cols[1]), i = M(rows[2], cols[2]);
            return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
        }
        default: {
            Eigen::MatrixXd S(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) S(i, j) = M(rows[i], cols[j]);
            return S.determinant();
        }
    }
}

}  // namespace

KForm wedge(const KForm& a, const KForm& b) {
    if (a.dim() != b.dim()) throw DimensionError("wedge: dimension mismatch");
    const int k = a.degree() + b.degree();
    KForm out(a.dim(), k);
    if (k > a.dim()) return out;  // zero form
    for (auto& [ma, ca] : a.terms()) {
        for (auto& [mb, cb] : b.terms()) {
            if (ma & mb) continue;
            out.add(static_cast<Mask>(ma | mb), ca * cb * maskops::wedge_sign(ma, mb));
        }
    }
    return out;
}

KForm interior(const Vec& w, const KForm& a) {
    if (w.size() != a.dim()) throw DimensionError("interior: dimension mismatch");
    if (a.degree() == 0) return KForm(a.dim(), 0);
    KForm out(a.dim(), a.degree() - 1);
    for (auto& [m, c] : a.terms()) {
        for (int b = 0; b < a.dim(); ++b) {
            if (!((m >> b) & 1)) continue;
            const double wb = w[b];
            if (wb == 0.0) continue;
            const int sgn = (maskops::bits_below(m, b) & 1) ? -1 : 1;
            out.add(static_cast<Mask>(m & ~(1u << b)), sgn * wb * c);
        }
    }
    return out;
}

std::vector<Mask> basis_masks(int dim, int degree) {
    std::vector<Mask> out;
    std::vector<int> idx(degree);
    // lexicographic combinations of bit positions (labels are monotone in bits)
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == degree) {
            Mask m = 0;
            for (int b : idx) m |= static_cast<Mask>(1u << b);
            out.push_back(m);
            return;
        }
        for (int b = start; b < dim; ++b) {
            idx[depth] = b;
            rec(b + 1, depth + 1);
        }
    };
    rec(0, 0);
    return out;
}

double form_inner(const KForm& a, const KForm& b, const Metric& m) {
    if (a.dim() != b.dim() || a.dim() != m.dim()) throw DimensionError("form_inner: dimension mismatch");
    if (a.degree() != b.degree()) throw DegreeError("form_inner: degree mismatch");
    if (a.degree() == 0) {
        double s = a.coeff(static_cast<Mask>(0)) * b.coeff(static_cast<Mask>(0));
        return s;
    }
    double out = 0.0;
    const Eigen::MatrixXd& gi = m.ginv();
    for (auto& [ma, ca] : a.terms()) {
        auto rows = maskops::bits(ma);
        for (auto& [mb, cb] : b.terms()) {
            out += ca * cb * minor_det(gi, rows, maskops::bits(mb));
        }
    }
    return out;
}

KForm hodge(const KForm& a, const Metric& m) {
    if (a.dim() != m.dim()) throw DimensionError("hodge: dimension mismatch");
    const int n = a.dim();
    const int k = a.degree();
    KForm out(n, n - k);
    const double vol_coeff = m.orientation() * m.sqrt_det();
    const Eigen::MatrixXd& gi = m.ginv();
    const Mask full = maskops::full(n);
    for (Mask K : basis_masks(n, k)) {
        // <e^K, a>
        double inner = 0.0;
        auto rows = maskops::bits(K);
        for (auto& [mi, ci] : a.terms()) inner += ci * minor_det(gi, rows, maskops::bits(mi));
        if (inner == 0.0) continue;
        const Mask J = static_cast<Mask>(full & ~K);
        out.add(J, maskops::wedge_sign(K, J) * vol_coeff * inner);
    }
    return out;
}

KForm flat(const Vec& v, const Metric& m) {
    if (v.size() != m.dim()) throw DimensionError("flat: dimension mismatch");
    Vec lowered = m.g() * v;
    KForm out(m.dim(), 1);
    for (int b = 0; b < m.dim(); ++b) out.add(static_cast<Mask>(1u << b), lowered[b]);
    return out;
}

Vec sharp(const KForm& a, const Metric& m) {
    if (a.dim() != m.dim()) throw DimensionError("sharp: dimension mismatch");
    if (a.degree() != 1) throw DegreeError("sharp: need a 1-form");
    Vec comps = Vec::Zero(m.dim());
    for (auto& [mask, c] : a.terms()) comps[maskops::bits(mask)[0]] = c;
    return m.ginv() * comps;
}

KForm pullback(const Eigen::MatrixXd& A, const KForm& a) {
    if (A.rows() != a.dim() || A.cols() != a.dim()) throw DimensionError("pullback: dimension mismatch");
    const int n = a.dim();
    const int k = a.degree();
    if (k == 0) return a;
    KForm out(n, k);
    for (Mask J : basis_masks(n, k)) {
        auto cols = maskops::bits(J);
        double c = 0.0;
        for (auto& [mi, ci] : a.terms()) c += ci * minor_det(A, maskops::bits(mi), cols);
        if (c != 0.0) out.add(J, c);
    }
    return out;
}

double wedge3_coeff(const KForm& a, const KForm& b, const KForm& c, Mask target) {
    double out = 0.0;
    for (auto& [ma, ca] : a.terms()) {
        if (ma & ~target) continue;
        for (auto& [mb, cb] : b.terms()) {
            if ((mb & ma) || (mb & ~target)) continue;
            const Mask mab = static_cast<Mask>(ma | mb);
            const Mask mc = static_cast<Mask>(target & ~mab);
            const double cc = c.coeff(mc);
            if (cc == 0.0) continue;
            out += ca * cb * cc * maskops::wedge_sign(ma, mb) * maskops::wedge_sign(mab, mc);
        }
    }
    return out;
}

double rank_one_det(double C, double K, const Metric& m, const Vec& v, const Vec& w) {
    if (v.size() != m.dim() || w.size() != m.dim()) throw DimensionError("rank_one_det: dimension mismatch");
    Vec vl = m.g() * v;
    Vec wl = m.g() * w;
    Eigen::MatrixXd B = C * m.g() + K * (vl * wl.transpose());
    return B.determinant();
}

double rank_one_det_closed(double C, double K, const Metric& m, const Vec& v, const Vec& w) {
    if (v.size() != m.dim() || w.size() != m.dim()) throw DimensionError("rank_one_det: dimension mismatch");
    const int n = m.dim();
    return std::pow(C, n) * m.det() + std::pow(C, n - 1) * K * m.inner(v, w) * m.det();
}

}  // namespace ehk

#pragma once

// Sparse exterior algebra over R^n, n <= 8. A basis k-form e^{i1...ik} is
// stored as a bitmask of its axis set; coefficients live in a sorted map so
// iteration order is deterministic. Axis labels follow the coordinate
// conventions used throughout: 1..n for n <= 7 and 0..7 for n = 8.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "ehk/errors.hpp"

namespace ehk {

using Mask = std::uint16_t;
using Vec = Eigen::VectorXd;

inline int axis_label_base(int dim) { return dim == 8 ? 0 : 1; }

namespace maskops {

inline int degree(Mask m) { return __builtin_popcount(static_cast<unsigned>(m)); }

inline Mask full(int dim) { return static_cast<Mask>((1u << dim) - 1u); }

// Number of set bits of m strictly below bit b.
inline int bits_below(Mask m, int b) {
    return degree(static_cast<Mask>(m & ((1u << b) - 1u)));
}

// Sign of e^A wedge e^B for disjoint A, B (count of transpositions needed to
// merge the two ascending sequences).
inline int wedge_sign(Mask a, Mask b) {
    int inversions = 0;
    for (int i = 0; i < 16; ++i) {
        if ((b >> i) & 1) inversions += degree(static_cast<Mask>(a >> (i + 1)));
    }
    return (inversions & 1) ? -1 : 1;
}

inline std::vector<int> bits(Mask m) {
    std::vector<int> out;
    for (int i = 0; i < 16; ++i)
        if ((m >> i) & 1) out.push_back(i);
    return out;
}

}  // namespace maskops

// Ordered multi-index with the sign of the sort permutation recorded, so the
// coefficient of a non-ascending index list is well defined.
class MultiIndex {
  public:
    MultiIndex(int dim, const std::vector<int>& labels) : dim_(dim), sign_(1), mask_(0) {
        if (dim < 0 || dim > 8) throw DimensionError("MultiIndex: dim must be in 0..8");
        const int base = axis_label_base(dim);
        std::vector<int> ls = labels;
        // insertion sort, tracking parity
        for (size_t i = 1; i < ls.size(); ++i) {
            for (size_t j = i; j > 0 && ls[j - 1] > ls[j]; --j) {
                std::swap(ls[j - 1], ls[j]);
                sign_ = -sign_;
            }
        }
        for (size_t i = 0; i < ls.size(); ++i) {
            int bit = ls[i] - base;
            if (bit < 0 || bit >= dim) throw DimensionError("MultiIndex: label out of range");
            if (i > 0 && ls[i] == ls[i - 1]) throw DimensionError("MultiIndex: repeated label");
            mask_ |= static_cast<Mask>(1u << bit);
        }
        labels_ = std::move(ls);
    }

    int dim() const { return dim_; }
    int degree() const { return static_cast<int>(labels_.size()); }
    int sign() const { return sign_; }
    Mask mask() const { return mask_; }
    const std::vector<int>& labels() const { return labels_; }

  private:
    int dim_;
    int sign_;
    Mask mask_;
    std::vector<int> labels_;
};

class KForm {
  public:
    KForm() : dim_(0), degree_(0) {}

    // Degrees above dim are admitted as structurally empty forms, so that
    // wedge keeps its degree bookkeeping even when the product vanishes.
    KForm(int dim, int degree) : dim_(dim), degree_(degree) {
        if (dim < 0 || dim > 8) throw DimensionError("KForm: dim must be in 0..8");
        if (degree < 0 || degree > 16) throw DegreeError("KForm: degree out of range");
    }

    static KForm monomial(int dim, const std::vector<int>& labels, double c = 1.0) {
        MultiIndex idx(dim, labels);
        KForm f(dim, idx.degree());
        f.add(idx.mask(), c * idx.sign());
        return f;
    }

    static KForm scalar(int dim, double c) {
        KForm f(dim, 0);
        f.add(0, c);
        return f;
    }

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    const std::map<Mask, double>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    double coeff(Mask m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? 0.0 : it->second;
    }

    double coeff(const MultiIndex& idx) const {
        if (idx.dim() != dim_) throw DimensionError("coeff: dimension mismatch");
        if (idx.degree() != degree_) throw DegreeError("coeff: degree mismatch");
        return idx.sign() * coeff(idx.mask());
    }

    double coeff(const std::vector<int>& labels) const { return coeff(MultiIndex(dim_, labels)); }

    void add(Mask m, double c) {
        if (c == 0.0) return;
        if (maskops::degree(m) != degree_) throw DegreeError("add: wrong index degree");
        if (!std::isfinite(c)) throw Error("KForm: non-finite coefficient");
        double& slot = terms_[m];
        slot += c;
        if (slot == 0.0) terms_.erase(m);
    }

    void set(Mask m, double c) {
        if (maskops::degree(m) != degree_) throw DegreeError("set: wrong index degree");
        if (c == 0.0)
            terms_.erase(m);
        else
            terms_[m] = c;
    }

    KForm& operator+=(const KForm& o) {
        require_same(o);
        for (auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    KForm& operator-=(const KForm& o) {
        require_same(o);
        for (auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    KForm& operator*=(double s) {
        if (s == 0.0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend KForm operator+(KForm a, const KForm& b) { return a += b; }
    friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
    friend KForm operator*(KForm a, double s) { return a *= s; }
    friend KForm operator*(double s, KForm a) { return a *= s; }
    friend KForm operator/(KForm a, double s) { return a *= (1.0 / s); }
    friend KForm operator-(KForm a) { return a *= -1.0; }

    // max |coefficient|
    double sup() const {
        double m = 0.0;
        for (auto& [k, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    double l2() const {
        double s = 0.0;
        for (auto& [k, c] : terms_) s += c * c;
        return std::sqrt(s);
    }

    // coefficient of the top monomial e^{0..n-1}; only sensible for n-forms
    double top() const {
        if (degree_ != dim_) throw DegreeError("top: not a top-degree form");
        return coeff(maskops::full(dim_));
    }

    // evaluate on degree() many vectors
    double operator()(const std::vector<Vec>& vs) const {
        if (static_cast<int>(vs.size()) != degree_) throw DegreeError("evaluate: wrong arity");
        for (auto& v : vs)
            if (v.size() != dim_) throw DimensionError("evaluate: vector dimension mismatch");
        double out = 0.0;
        Eigen::MatrixXd M(degree_, degree_);
        for (auto& [m, c] : terms_) {
            auto rows = maskops::bits(m);
            for (int i = 0; i < degree_; ++i)
                for (int j = 0; j < degree_; ++j) M(i, j) = vs[j][rows[i]];
            out += c * M.determinant();
        }
        return out;
    }

    // drop coefficients below `eps` in absolute value
    KForm pruned(double eps) const {
        KForm f(dim_, degree_);
        for (auto& [m, c] : terms_)
            if (std::abs(c) > eps) f.add(m, c);
        return f;
    }

  private:
    void require_same(const KForm& o) const {
        if (o.dim_ != dim_) throw DimensionError("KForm: dimension mismatch");
        if (o.degree_ != degree_) throw DegreeError("KForm: degree mismatch");
    }

    int dim_;
    int degree_;
    std::map<Mask, double> terms_;
};

inline Vec basis_vector(int dim, int axis_label) {
    const int base = axis_label_base(dim);
    int bit = axis_label - base;
    if (bit < 0 || bit >= dim) throw DimensionError("basis_vector: label out of range");
    Vec v = Vec::Zero(dim);
    v[bit] = 1.0;
    return v;
}

}  // namespace ehk

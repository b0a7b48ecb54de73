#pragma once

// KForm-valued fields on flat periodic grids with spectrally exact exterior
// derivative. Grids may be anisotropic: a size of 1 marks an axis the field
// is constant along; every other size is a power of two >= 8.

#include <functional>
#include <string>
#include <vector>

#include "ehk/exterior.hpp"

namespace ehk {

class PeriodicGrid {
  public:
    PeriodicGrid(int dim, std::vector<int> sizes, std::vector<double> periods);

    int dim() const { return dim_; }
    const std::vector<int>& sizes() const { return sizes_; }
    const std::vector<double>& periods() const { return periods_; }
    std::size_t npoints() const { return npoints_; }
    const std::vector<std::size_t>& strides() const { return strides_; }  // row-major C

    std::vector<double> point(std::size_t flat) const;  // coordinates of the grid node
    std::vector<int> unravel(std::size_t flat) const;

    bool operator==(const PeriodicGrid& o) const {
        return dim_ == o.dim_ && sizes_ == o.sizes_ && periods_ == o.periods_;
    }

  private:
    int dim_;
    std::vector<int> sizes_;
    std::vector<double> periods_;
    std::vector<std::size_t> strides_;
    std::size_t npoints_;
};

class FormField {
  public:
    FormField(const PeriodicGrid& grid, int degree);

    static FormField sample(const PeriodicGrid& grid, int degree,
                            const std::function<KForm(const std::vector<double>&)>& fn);
    static FormField constant(const PeriodicGrid& grid, const KForm& value);

    const PeriodicGrid& grid() const { return grid_; }
    int degree() const { return degree_; }
    const std::vector<Mask>& comps() const { return comps_; }
    const std::vector<int>& band_limit() const { return band_limit_; }
    void set_band_limit(const std::vector<int>& b);

    KForm form_at(std::size_t p) const;
    void set_form(std::size_t p, const KForm& f);
    double& at(std::size_t comp, std::size_t p) { return data_[comp * grid_.npoints() + p]; }
    double at(std::size_t comp, std::size_t p) const { return data_[comp * grid_.npoints() + p]; }
    const std::vector<double>& raw() const { return data_; }
    std::vector<double>& raw() { return data_; }

    // spectral exterior derivative; throws AliasError when the declared band
    // limit reaches the Nyquist frequency on a varying axis
    FormField d() const;

    // pointwise wedge; the product is computed on a grid refined enough to
    // hold the summed band limits (automatic zero-padded transform)
    FormField wedge_with(const FormField& other) const;

    // spectral zero-padding interpolation onto a finer grid
    FormField resampled(const std::vector<int>& new_sizes) const;

    FormField& operator+=(const FormField& o);
    FormField& operator-=(const FormField& o);
    FormField& operator*=(double s);
    friend FormField operator+(FormField a, const FormField& b) { return a += b; }
    friend FormField operator-(FormField a, const FormField& b) { return a -= b; }
    friend FormField operator*(FormField a, double s) { return a *= s; }
    friend FormField operator*(double s, FormField a) { return a *= s; }

    double sup_norm() const;
    double component_mean(std::size_t comp) const;

  private:
    PeriodicGrid grid_;
    int degree_;
    std::vector<Mask> comps_;
    std::vector<int> band_limit_;
    std::vector<double> data_;  // component-major, row-major-C grid layout
};

// spectral derivative of one scalar plane along one axis (exact on
// band-limited trigonometric polynomials)
void spectral_derivative_axis(const PeriodicGrid& grid, int axis, const double* in, double* out);

// least-squares spectral inversion of d on exact 1-forms: theta = d u with
// mean(u) = 0. Also returns the harmonic part (per-axis means of theta).
struct OneFormIntegral {
    FormField potential;                 // degree-0 field u
    std::vector<double> harmonic_part;   // axis means of theta
    double exactness_residual = 0.0;     // sup |theta - d u| relative
};
OneFormIntegral integrate_exact_one_form(const FormField& theta);

// field file format: JSON header + little-endian float64 payload
void write_field(const FormField& f, const std::string& header_path);
FormField read_field(const std::string& header_path);

}  // namespace ehk

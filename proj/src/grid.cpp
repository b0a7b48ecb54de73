#include "ehk/grid.hpp"

#include <bit>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <fftw3.h>
#include <nlohmann/json.hpp>

#include "ehk/parallel.hpp"

namespace ehk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

PeriodicGrid::PeriodicGrid(int dim, std::vector<int> sizes, std::vector<double> periods)
    : dim_(dim), sizes_(std::move(sizes)), periods_(std::move(periods)) {
    if (dim != 7 && dim != 8) throw DimensionError("PeriodicGrid: dim must be 7 or 8");
    if (static_cast<int>(sizes_.size()) != dim || static_cast<int>(periods_.size()) != dim)
        throw DimensionError("PeriodicGrid: sizes/periods length mismatch");
    for (int s : sizes_) {
        if (s != 1 && (s < 8 || !power_of_two(s)))
            throw DimensionError("PeriodicGrid: sizes must be 1 or a power of two >= 8");
    }
    for (double p : periods_)
        if (!(p > 0.0)) throw DimensionError("PeriodicGrid: periods must be positive");
    strides_.assign(dim, 1);
    for (int a = dim - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * sizes_[a + 1];
    npoints_ = strides_[0] * sizes_[0];
}

std::vector<double> PeriodicGrid::point(std::size_t flat) const {
    std::vector<double> x(dim_);
    for (int a = 0; a < dim_; ++a) {
        std::size_t idx = (flat / strides_[a]) % sizes_[a];
        x[a] = periods_[a] * static_cast<double>(idx) / sizes_[a];
    }
    return x;
}

std::vector<int> PeriodicGrid::unravel(std::size_t flat) const {
    std::vector<int> idx(dim_);
    for (int a = 0; a < dim_; ++a) idx[a] = static_cast<int>((flat / strides_[a]) % sizes_[a]);
    return idx;
}

void spectral_derivative_axis(const PeriodicGrid& grid, int axis, const double* in, double* out) {
    const int s = grid.sizes()[axis];
    const std::size_t np = grid.npoints();
    if (s == 1) {
        std::memset(out, 0, np * sizeof(double));
        return;
    }
    const std::size_t stride = grid.strides()[axis];
    const double k0 = kTwoPi / grid.periods()[axis];

    std::vector<double> line(s);
    std::vector<std::complex<double>> spec(s / 2 + 1);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(s, line.data(),
                                         reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_c2r_1d(s, reinterpret_cast<fftw_complex*>(spec.data()),
                                         line.data(), FFTW_ESTIMATE);

    // iterate all lines along `axis`: bases are points whose index on `axis` is 0
    for (std::size_t base = 0; base < np; ++base) {
        if ((base / stride) % s != 0) continue;
        for (int j = 0; j < s; ++j) line[j] = in[base + j * stride];
        fftw_execute(fwd);
        for (int f = 0; f <= s / 2; ++f) {
            const double k = (f == s / 2) ? 0.0 : f * k0;  // drop the unmatched Nyquist mode
            spec[f] = std::complex<double>(0.0, k) * spec[f] / static_cast<double>(s);
        }
        fftw_execute(bwd);
        for (int j = 0; j < s; ++j) out[base + j * stride] = line[j];
    }
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
}

namespace {

// upsample one axis to new_size by zero-padding the spectrum
std::vector<double> upsample_axis(const PeriodicGrid& grid, int axis, int new_size,
                                  const std::vector<double>& in, const PeriodicGrid& out_grid) {
    const int s = grid.sizes()[axis];
    std::vector<double> out(out_grid.npoints());
    if (s == new_size) {
        return in;
    }
    const std::size_t stride = grid.strides()[axis];
    const std::size_t out_stride = out_grid.strides()[axis];
    const int S = new_size;

    std::vector<double> line(s), oline(S);
    std::vector<std::complex<double>> spec(s / 2 + 1), ospec(S / 2 + 1);
    fftw_plan fwd = fftw_plan_dft_r2c_1d(s, line.data(),
                                         reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
    fftw_plan bwd = fftw_plan_dft_c2r_1d(S, reinterpret_cast<fftw_complex*>(ospec.data()),
                                         oline.data(), FFTW_ESTIMATE);

    for (std::size_t base = 0; base < grid.npoints(); ++base) {
        if ((base / stride) % s != 0) continue;
        // map the base point into the fine grid (indices off `axis` are unchanged,
        // but strides differ, so rebuild the flat index)
        auto idx = grid.unravel(base);
        std::size_t obase = 0;
        for (int a = 0; a < grid.dim(); ++a) obase += static_cast<std::size_t>(idx[a]) * out_grid.strides()[a];

        for (int j = 0; j < s; ++j) line[j] = in[base + j * stride];
        fftw_execute(fwd);
        std::fill(ospec.begin(), ospec.end(), std::complex<double>(0.0, 0.0));
        for (int f = 0; f <= s / 2; ++f) {
            std::complex<double> c = spec[f] / static_cast<double>(s);
            if (f == s / 2) c *= 0.5;  // split the Nyquist bin across +/- frequencies
            ospec[f] = c;
        }
        fftw_execute(bwd);
        for (int j = 0; j < S; ++j) out[obase + j * out_stride] = oline[j];
    }
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    return out;
}

}  // namespace

FormField::FormField(const PeriodicGrid& grid, int degree)
    : grid_(grid), degree_(degree), comps_(basis_masks(grid.dim(), degree)),
      band_limit_(grid.dim(), 0), data_(comps_.size() * grid.npoints(), 0.0) {
    if (degree < 0 || degree > grid.dim()) throw DegreeError("FormField: degree out of range");
    for (int a = 0; a < grid.dim(); ++a)
        band_limit_[a] = grid.sizes()[a] == 1 ? 0 : grid.sizes()[a] / 2 - 1;
}

FormField FormField::sample(const PeriodicGrid& grid, int degree,
                            const std::function<KForm(const std::vector<double>&)>& fn) {
    FormField f(grid, degree);
    for (std::size_t p = 0; p < grid.npoints(); ++p) {
        KForm v = fn(grid.point(p));
        if (v.dim() != grid.dim() || v.degree() != degree)
            throw DegreeError("FormField::sample: sampled form has wrong dim/degree");
        f.set_form(p, v);
    }
    return f;
}

FormField FormField::constant(const PeriodicGrid& grid, const KForm& value) {
    FormField f(grid, value.degree());
    for (std::size_t p = 0; p < grid.npoints(); ++p) f.set_form(p, value);
    std::fill(f.band_limit_.begin(), f.band_limit_.end(), 0);
    return f;
}

void FormField::set_band_limit(const std::vector<int>& b) {
    if (static_cast<int>(b.size()) != grid_.dim()) throw DimensionError("set_band_limit: length mismatch");
    band_limit_ = b;
}

KForm FormField::form_at(std::size_t p) const {
    KForm f(grid_.dim(), degree_);
    for (std::size_t c = 0; c < comps_.size(); ++c) {
        double v = at(c, p);
        if (v != 0.0) f.add(comps_[c], v);
    }
    return f;
}

void FormField::set_form(std::size_t p, const KForm& f) {
    for (std::size_t c = 0; c < comps_.size(); ++c) at(c, p) = f.coeff(comps_[c]);
}

FormField FormField::d() const {
    for (int a = 0; a < grid_.dim(); ++a) {
        if (grid_.sizes()[a] > 1 && band_limit_[a] >= grid_.sizes()[a] / 2)
            throw AliasError("exterior derivative: band limit reaches the Nyquist frequency");
    }
    FormField out(grid_, degree_ + 1);
    out.band_limit_ = band_limit_;
    const std::size_t np = grid_.npoints();
    std::vector<double> deriv(np);
    for (std::size_t c = 0; c < comps_.size(); ++c) {
        const Mask I = comps_[c];
        for (int a = 0; a < grid_.dim(); ++a) {
            if (grid_.sizes()[a] == 1) continue;
            const Mask abit = static_cast<Mask>(1u << a);
            if (I & abit) continue;  // e^a ^ e^I = 0
            spectral_derivative_axis(grid_, a, data_.data() + c * np, deriv.data());
            const int sgn = maskops::wedge_sign(abit, I);
            const Mask J = static_cast<Mask>(I | abit);
            // locate output component
            std::size_t oc = 0;
            while (out.comps_[oc] != J) ++oc;
            double* dst = out.data_.data() + oc * np;
            for (std::size_t p = 0; p < np; ++p) dst[p] += sgn * deriv[p];
        }
    }
    return out;
}

FormField FormField::resampled(const std::vector<int>& new_sizes) const {
    if (static_cast<int>(new_sizes.size()) != grid_.dim())
        throw DimensionError("resampled: sizes length mismatch");
    PeriodicGrid cur = grid_;
    std::vector<double> data = data_;
    FormField out(PeriodicGrid(grid_.dim(), new_sizes, grid_.periods()), degree_);
    // resample axis by axis
    for (int a = 0; a < grid_.dim(); ++a) {
        if (new_sizes[a] == cur.sizes()[a]) continue;
        if (new_sizes[a] < cur.sizes()[a])
            throw AliasError("resampled: refusing to downsample");
        std::vector<int> next_sizes = cur.sizes();
        next_sizes[a] = new_sizes[a];
        PeriodicGrid next(grid_.dim(), next_sizes, grid_.periods());
        std::vector<double> ndata(comps_.size() * next.npoints());
        for (std::size_t c = 0; c < comps_.size(); ++c) {
            std::vector<double> plane(data.begin() + c * cur.npoints(),
                                      data.begin() + (c + 1) * cur.npoints());
            // constant axes blow up to the new size by replication through the
            // same spectral path (a size-1 axis has only the zero mode)
            std::vector<double> oplane;
            if (cur.sizes()[a] == 1) {
                oplane.assign(next.npoints(), 0.0);
                for (std::size_t p = 0; p < next.npoints(); ++p) {
                    auto idx = next.unravel(p);
                    idx[a] = 0;
                    std::size_t q = 0;
                    for (int b = 0; b < grid_.dim(); ++b)
                        q += static_cast<std::size_t>(idx[b]) * cur.strides()[b];
                    oplane[p] = plane[q];
                }
            } else {
                oplane = upsample_axis(cur, a, new_sizes[a], plane, next);
            }
            std::copy(oplane.begin(), oplane.end(), ndata.begin() + c * next.npoints());
        }
        cur = next;
        data = std::move(ndata);
    }
    out.data_ = std::move(data);
    out.band_limit_ = band_limit_;
    return out;
}

FormField FormField::wedge_with(const FormField& other) const {
    if (!(grid_ == other.grid_)) throw DimensionError("wedge_with: grids differ");
    // pad when the summed band limits alias on some varying axis
    std::vector<int> sizes = grid_.sizes();
    bool pad = false;
    for (int a = 0; a < grid_.dim(); ++a) {
        if (sizes[a] == 1) continue;
        if (band_limit_[a] + other.band_limit_[a] >= sizes[a] / 2) {
            sizes[a] *= 2;
            pad = true;
        }
    }
    const FormField& A = pad ? resampled(sizes) : *this;
    const FormField B = pad ? other.resampled(sizes) : other;
    FormField out(A.grid(), degree_ + other.degree_);
    for (std::size_t p = 0; p < A.grid().npoints(); ++p)
        out.set_form(p, wedge(A.form_at(p), B.form_at(p)));
    for (int a = 0; a < grid_.dim(); ++a)
        out.band_limit_[a] = std::min(out.grid().sizes()[a] == 1 ? 0 : out.grid().sizes()[a] / 2 - 1,
                                      band_limit_[a] + other.band_limit_[a]);
    return out;
}

FormField& FormField::operator+=(const FormField& o) {
    if (!(grid_ == o.grid_) || degree_ != o.degree_) throw DegreeError("FormField: incompatible operands");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    for (int a = 0; a < grid_.dim(); ++a) band_limit_[a] = std::max(band_limit_[a], o.band_limit_[a]);
    return *this;
}

FormField& FormField::operator-=(const FormField& o) {
    if (!(grid_ == o.grid_) || degree_ != o.degree_) throw DegreeError("FormField: incompatible operands");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    for (int a = 0; a < grid_.dim(); ++a) band_limit_[a] = std::max(band_limit_[a], o.band_limit_[a]);
    return *this;
}

FormField& FormField::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

double FormField::sup_norm() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double FormField::component_mean(std::size_t comp) const {
    const std::size_t np = grid_.npoints();
    double s = 0.0;
    for (std::size_t p = 0; p < np; ++p) s += at(comp, p);
    return s / static_cast<double>(np);
}

OneFormIntegral integrate_exact_one_form(const FormField& theta) {
    if (theta.degree() != 1) throw DegreeError("integrate_exact_one_form: need a 1-form field");
    const PeriodicGrid& g = theta.grid();
    const int n = g.dim();
    const std::size_t np = g.npoints();

    OneFormIntegral out{FormField(g, 0), std::vector<double>(n, 0.0), 0.0};
    for (int a = 0; a < n; ++a) out.harmonic_part[a] = theta.component_mean(a);

    // full complex DFT over the varying axes
    std::vector<int> vaxes;
    for (int a = 0; a < n; ++a)
        if (g.sizes()[a] > 1) vaxes.push_back(a);

    std::vector<std::vector<std::complex<double>>> spec(n);
    std::vector<std::complex<double>> buf(np);
    auto run_fft = [&](std::vector<std::complex<double>>& io, int sign) {
        if (vaxes.empty()) return;
        std::vector<int> dims;
        for (int a : vaxes) dims.push_back(g.sizes()[a]);
        fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                                       reinterpret_cast<fftw_complex*>(io.data()),
                                       reinterpret_cast<fftw_complex*>(io.data()),
                                       sign, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    };
    for (int a = 0; a < n; ++a) {
        for (std::size_t p = 0; p < np; ++p) buf[p] = theta.at(a, p);
        run_fft(buf, FFTW_FORWARD);
        spec[a] = buf;
    }

    // least-squares u_hat(k) = sum_a conj(i kappa_a) theta_a(k) / sum kappa^2
    std::vector<std::complex<double>> uhat(np, std::complex<double>(0.0, 0.0));
    for (std::size_t p = 0; p < np; ++p) {
        auto idx = g.unravel(p);
        double ksum = 0.0;
        std::complex<double> num(0.0, 0.0);
        for (int a = 0; a < n; ++a) {
            if (g.sizes()[a] == 1) continue;
            int f = idx[a];
            if (f > g.sizes()[a] / 2) f -= g.sizes()[a];
            if (f == g.sizes()[a] / 2) f = 0;  // unmatched Nyquist mode carries no derivative
            const double kappa = kTwoPi * f / g.periods()[a];
            ksum += kappa * kappa;
            num += std::complex<double>(0.0, -kappa) * spec[a][p];
        }
        uhat[p] = (ksum > 0.0) ? num / ksum : std::complex<double>(0.0, 0.0);
    }
    run_fft(uhat, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(std::max<std::size_t>(1, np));
    for (std::size_t p = 0; p < np; ++p) out.potential.at(0, p) = uhat[p].real() * scale;

    FormField du = out.potential.d();
    double resid = 0.0;
    for (int a = 0; a < n; ++a)
        for (std::size_t p = 0; p < np; ++p)
            resid = std::max(resid, std::abs(theta.at(a, p) - out.harmonic_part[a] - du.at(a, p)));
    out.exactness_residual = resid / std::max(1.0, theta.sup_norm());
    return out;
}

void write_field(const FormField& f, const std::string& header_path) {
    namespace fs = std::filesystem;
    fs::path hp(header_path);
    fs::path bp = hp;
    bp.replace_extension(".bin");

    nlohmann::json j;
    j["dim"] = f.grid().dim();
    j["degree"] = f.degree();
    j["sizes"] = f.grid().sizes();
    j["periods"] = f.grid().periods();
    j["band_limit"] = f.band_limit();
    j["layout"] = "row-major-c";
    j["payload"] = bp.filename().string();

    std::ofstream hout(hp);
    if (!hout) throw ParseError("write_field: cannot open " + header_path);
    hout << j.dump(2) << "\n";

    std::ofstream bout(bp, std::ios::binary);
    if (!bout) throw ParseError("write_field: cannot open " + bp.string());
    static_assert(std::endian::native == std::endian::little, "payload is little-endian");
    bout.write(reinterpret_cast<const char*>(f.raw().data()),
               static_cast<std::streamsize>(f.raw().size() * sizeof(double)));
}

FormField read_field(const std::string& header_path) {
    namespace fs = std::filesystem;
    std::ifstream hin(header_path);
    if (!hin) throw ParseError("read_field: cannot open " + header_path);
    nlohmann::json j;
    try {
        hin >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("read_field: bad header: ") + e.what());
    }
    try {
        PeriodicGrid grid(j.at("dim").get<int>(), j.at("sizes").get<std::vector<int>>(),
                          j.at("periods").get<std::vector<double>>());
        FormField f(grid, j.at("degree").get<int>());
        if (j.contains("band_limit")) f.set_band_limit(j.at("band_limit").get<std::vector<int>>());
        if (j.at("layout").get<std::string>() != "row-major-c")
            throw ParseError("read_field: unsupported layout");
        fs::path bp = fs::path(header_path).parent_path() / j.at("payload").get<std::string>();
        std::ifstream bin(bp, std::ios::binary);
        if (!bin) throw ParseError("read_field: cannot open payload " + bp.string());
        bin.read(reinterpret_cast<char*>(f.raw().data()),
                 static_cast<std::streamsize>(f.raw().size() * sizeof(double)));
        if (static_cast<std::size_t>(bin.gcount()) != f.raw().size() * sizeof(double))
            throw ParseError("read_field: truncated payload");
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("read_field: bad header: ") + e.what());
    }
}

}  // namespace ehk

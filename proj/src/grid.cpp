#include "disperse/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace disperse {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Plans are cached per size and created FFTW_UNALIGNED so they can execute
// on arbitrary caller buffers via fftw_execute_dft. Planner access is
// serialized; execution is thread-safe.
std::mutex g_plan_mutex;

fftw_plan cached_plan(std::size_t n, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<complex_t> tmp(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n),
                                   reinterpret_cast<fftw_complex*>(tmp.data()),
                                   reinterpret_cast<fftw_complex*>(tmp.data()),
                                   sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, p);
    return p;
}

void fft_inplace(complex_t* data, std::size_t n, int sign) {
    fftw_plan p = cached_plan(n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

// One forward/inverse pass along a contiguous length-n slice, mapping the
// centered physical layout to the transform's standard order.
//
// Forward: F(xi_j) = dx * (-1)^j * X_{j mod n},  X_k = sum_p f_p e^{-2pi i kp/n},
// which equals dx * sum_p f_p e^{-i x_p xi_j} for x_p = -L + p dx,
// xi_j = pi j / L. Inverse is the exact round-trip partner including the
// (2 pi)^{-1} d(xi) measure.
void axis_forward(complex_t* data, std::size_t n, double dx, std::vector<complex_t>& scratch) {
    scratch.assign(data, data + n);
    fft_inplace(scratch.data(), n, FFTW_FORWARD);
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
        const std::ptrdiff_t jc = static_cast<std::ptrdiff_t>(i) - half;
        const std::size_t k = static_cast<std::size_t>((jc + static_cast<std::ptrdiff_t>(n)) %
                                                       static_cast<std::ptrdiff_t>(n));
        const double parity = (jc & 1) ? -1.0 : 1.0;
        data[i] = dx * parity * scratch[k];
    }
}

void axis_inverse(complex_t* data, std::size_t n, double dx, std::vector<complex_t>& scratch) {
    scratch.assign(n, complex_t{0.0, 0.0});
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
        const std::ptrdiff_t jc = static_cast<std::ptrdiff_t>(i) - half;
        const std::size_t k = static_cast<std::size_t>((jc + static_cast<std::ptrdiff_t>(n)) %
                                                       static_cast<std::ptrdiff_t>(n));
        const double parity = (jc & 1) ? -1.0 : 1.0;
        scratch[k] = parity * data[i];
    }
    fft_inplace(scratch.data(), n, FFTW_BACKWARD);
    const double scale = 1.0 / (static_cast<double>(n) * dx);
    for (std::size_t i = 0; i < n; ++i) data[i] = scale * scratch[i];
}

} // namespace

Grid1D make_grid(double half_width, std::size_t n) {
    if (!(half_width > 0.0))
        throw ArgumentError("make_grid: half_width must be positive, got " +
                            std::to_string(half_width));
    if (n < 8 || !is_pow2(n))
        throw ArgumentError("make_grid: n must be a power of two >= 8, got " +
                            std::to_string(n));
    Grid1D g;
    g.half_width = half_width;
    g.n = n;
    g.dx = 2.0 * half_width / static_cast<double>(n);
    g.freqs.resize(n);
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t i = 0; i < n; ++i)
        g.freqs[i] = M_PI * static_cast<double>(static_cast<std::ptrdiff_t>(i) - half) / half_width;
    return g;
}

Field1D make_field(const Grid1D& g, const std::function<complex_t(double)>& f) {
    Field1D out{g, std::vector<complex_t>(g.n)};
    for (std::size_t i = 0; i < g.n; ++i) out.v[i] = f(g.point(i));
    return out;
}

Field2D make_field(const Grid2D& g, const std::function<complex_t(double, double)>& f) {
    Field2D out{g, std::vector<complex_t>(g.size())};
    for (std::size_t it = 0; it < g.t_axis.n; ++it) {
        const double t = g.t_axis.point(it);
        for (std::size_t ix = 0; ix < g.x_axis.n; ++ix)
            out.at(it, ix) = f(t, g.x_axis.point(ix));
    }
    return out;
}

Field1D zero_field(const Grid1D& g) { return Field1D{g, std::vector<complex_t>(g.n)}; }
Field2D zero_field(const Grid2D& g) { return Field2D{g, std::vector<complex_t>(g.size())}; }

Field1D dft_forward(const Field1D& f) {
    Field1D out = f;
    std::vector<complex_t> scratch;
    axis_forward(out.v.data(), out.grid.n, out.grid.dx, scratch);
    check_finite(out, "dft_forward");
    return out;
}

Field1D dft_inverse(const Field1D& F) {
    Field1D out = F;
    std::vector<complex_t> scratch;
    axis_inverse(out.v.data(), out.grid.n, out.grid.dx, scratch);
    check_finite(out, "dft_inverse");
    return out;
}

namespace {

template <typename AxisOp>
void transform_2d(Field2D& f, AxisOp&& op) {
    const std::size_t nt = f.grid.t_axis.n;
    const std::size_t nx = f.grid.x_axis.n;
    std::vector<complex_t> scratch, col(nt);
    // along x (contiguous rows)
    for (std::size_t it = 0; it < nt; ++it)
        op(&f.v[it * nx], nx, f.grid.x_axis.dx, scratch);
    // along t (strided columns)
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t it = 0; it < nt; ++it) col[it] = f.v[it * nx + ix];
        op(col.data(), nt, f.grid.t_axis.dx, scratch);
        for (std::size_t it = 0; it < nt; ++it) f.v[it * nx + ix] = col[it];
    }
}

} // namespace

Field2D dft_forward(const Field2D& f) {
    Field2D out = f;
    transform_2d(out, [](complex_t* d, std::size_t n, double dx, std::vector<complex_t>& s) {
        axis_forward(d, n, dx, s);
    });
    check_finite(out, "dft_forward");
    return out;
}

Field2D dft_inverse(const Field2D& F) {
    Field2D out = F;
    transform_2d(out, [](complex_t* d, std::size_t n, double dx, std::vector<complex_t>& s) {
        axis_inverse(d, n, dx, s);
    });
    check_finite(out, "dft_inverse");
    return out;
}

namespace {

double lp_norm_impl(const std::vector<complex_t>& v, double cell, double p) {
    if (p == kInfNorm) {
        double mx = 0.0;
        for (const auto& z : v) mx = std::max(mx, std::abs(z));
        return mx;
    }
    if (!(p >= 1.0)) throw ArgumentError("lp_norm: p must be >= 1 or infinity");
    double acc = 0.0;
    if (p == 2.0) {
        for (const auto& z : v) acc += std::norm(z);
    } else {
        for (const auto& z : v) acc += std::pow(std::abs(z), p);
    }
    return std::pow(acc * cell, 1.0 / p);
}

} // namespace

double lp_norm(const Field1D& f, double p) { return lp_norm_impl(f.v, f.grid.dx, p); }
double lp_norm(const Field2D& f, double p) { return lp_norm_impl(f.v, f.grid.cell(), p); }

void check_finite(const Field1D& f, const char* where) {
    for (const auto& z : f.v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalError(std::string(where) + ": non-finite sample");
}

void check_finite(const Field2D& f, const char* where) {
    for (const auto& z : f.v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalError(std::string(where) + ": non-finite sample");
}

} // namespace disperse

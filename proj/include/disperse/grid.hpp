#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "disperse/errors.hpp"

namespace disperse {

using complex_t = std::complex<double>;

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Uniform sampling of [-half_width, half_width) with the matched discrete
/// frequency lattice xi_j = pi*j/half_width, j = -n/2 .. n/2-1 (centered
/// order). n must be a power of two.
struct Grid1D {
    double half_width = 0.0;
    std::size_t n = 0;
    double dx = 0.0;
    std::vector<double> freqs;

    double point(std::size_t i) const { return -half_width + static_cast<double>(i) * dx; }
    double dfreq() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
    bool same_as(const Grid1D& o) const { return half_width == o.half_width && n == o.n; }
};

Grid1D make_grid(double half_width, std::size_t n);

/// Tensor product time x space grid; cell measure dt*dx.
struct Grid2D {
    Grid1D t_axis;
    Grid1D x_axis;
    double cell() const { return t_axis.dx * x_axis.dx; }
    std::size_t size() const { return t_axis.n * x_axis.n; }
};

/// Complex samples over a Grid1D.
struct Field1D {
    Grid1D grid;
    std::vector<complex_t> v;
};

/// Complex samples over a Grid2D, row-major with time slowest:
/// v[it * nx + ix].
struct Field2D {
    Grid2D grid;
    std::vector<complex_t> v;

    complex_t& at(std::size_t it, std::size_t ix) { return v[it * grid.x_axis.n + ix]; }
    const complex_t& at(std::size_t it, std::size_t ix) const { return v[it * grid.x_axis.n + ix]; }
};

Field1D make_field(const Grid1D& g, const std::function<complex_t(double)>& f);
Field2D make_field(const Grid2D& g, const std::function<complex_t(double, double)>& f);
Field1D zero_field(const Grid1D& g);
Field2D zero_field(const Grid2D& g);

/// Forward transform approximating the continuum integral
/// F(xi) = \int e^{-i x xi} f(x) dx (dx cell measure included).
Field1D dft_forward(const Field1D& f);
Field2D dft_forward(const Field2D& f);

/// Inverse transform with (2 pi)^{-1} per-dimension normalization.
Field1D dft_inverse(const Field1D& F);
Field2D dft_inverse(const Field2D& F);

/// Discrete L^p norm with cell measure; p = kInfNorm gives max |f|.
double lp_norm(const Field1D& f, double p);
double lp_norm(const Field2D& f, double p);

void check_finite(const Field1D& f, const char* where);
void check_finite(const Field2D& f, const char* where);

} // namespace disperse

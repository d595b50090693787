#include "disperse/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace disperse {

namespace {

double pow_int(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

struct LinFit {
    double a = 0.0;   // intercept
    double c = 0.0;   // slope against x^p
    double sse = 0.0;
};

// Least squares of g ~ a + c * x^p for fixed p.
LinFit profile_fit(const std::vector<double>& x, const std::vector<double>& g,
                   const std::vector<char>& keep, double p) {
    double s1 = 0, sb = 0, sbb = 0, sg = 0, sbg = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!keep[i]) continue;
        const double b = std::pow(x[i], p);
        s1 += 1.0;
        sb += b;
        sbb += b * b;
        sg += g[i];
        sbg += b * g[i];
    }
    LinFit out;
    const double det = s1 * sbb - sb * sb;
    if (s1 < 3.0 || std::abs(det) < 1e-14 * std::max(1.0, s1 * sbb))
        throw NumericalError("fit_decay: degenerate least squares system");
    out.c = (s1 * sbg - sb * sg) / det;
    out.a = (sg - out.c * sb) / s1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!keep[i]) continue;
        const double r = g[i] - out.a - out.c * std::pow(x[i], p);
        out.sse += r * r;
    }
    return out;
}

double best_exponent(const std::vector<double>& x, const std::vector<double>& g,
                     const std::vector<char>& keep) {
    // golden-section search for the p minimizing the profiled SSE
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.6, hi = 3.2;
    double m1 = hi - invphi * (hi - lo);
    double m2 = lo + invphi * (hi - lo);
    double f1 = profile_fit(x, g, keep, m1).sse;
    double f2 = profile_fit(x, g, keep, m2).sse;
    while (hi - lo > 1e-5) {
        if (f1 <= f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - invphi * (hi - lo);
            f1 = profile_fit(x, g, keep, m1).sse;
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + invphi * (hi - lo);
            f2 = profile_fit(x, g, keep, m2).sse;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

Field1D kernel(const SemigroupParams& params, const Grid1D& grid) {
    if (params.m < 1) throw ArgumentError("kernel: m must be >= 1");
    if (!(params.z.real() > 0.0))
        throw DomainError("kernel: Re z must be positive, got " +
                          std::to_string(params.z.real()));
    const double xi_max = M_PI / grid.dx;
    const double top = params.z.real() * pow_int(xi_max, 2 * params.m);
    if (std::exp(-top) > 1e-14) {
        // report the n that would push the symbol below threshold
        std::size_t need = grid.n;
        while (true) {
            need *= 2;
            const double xm = M_PI * static_cast<double>(need) / (2.0 * grid.half_width);
            if (std::exp(-params.z.real() * pow_int(xm, 2 * params.m)) <= 1e-14) break;
            if (need > (std::size_t{1} << 30))
                throw ResolutionError("kernel: symbol cannot be resolved at any sane n");
        }
        throw ResolutionError("kernel: grid under-resolves the symbol; need n >= " +
                              std::to_string(need));
    }
    Field1D symbol = zero_field(grid);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double xi2m = pow_int(grid.freqs[i], 2 * params.m);
        symbol.v[i] = std::exp(-params.z * xi2m);
    }
    return dft_inverse(symbol);
}

namespace {

// Phase exponent from dip positions. Near-zeros of an oscillatory kernel sit
// at equally spaced phase values, so the dip abscissas x_k satisfy
// w*x_k^p + phi = k*pi; the p making the x_k^p ladder equispaced is found by
// golden section on the least-squares misfit.
struct PhaseFit {
    double p = 0.0;
    double w = 0.0;
};

PhaseFit fit_phase(const std::vector<double>& dips) {
    const auto misfit = [&](double p, double* w_out) {
        double s1 = 0, su = 0, suu = 0, sy = 0, suy = 0;
        for (std::size_t k = 0; k < dips.size(); ++k) {
            const double u = std::pow(dips[k], p);
            const double y = M_PI * static_cast<double>(k);
            s1 += 1.0;
            su += u;
            suu += u * u;
            sy += y;
            suy += u * y;
        }
        const double det = s1 * suu - su * su;
        const double w = (s1 * suy - su * sy) / det;
        const double b = (sy - w * su) / s1;
        double sse = 0.0;
        for (std::size_t k = 0; k < dips.size(); ++k) {
            const double r = w * std::pow(dips[k], p) + b - M_PI * static_cast<double>(k);
            sse += r * r;
        }
        if (w_out) *w_out = w;
        return sse;
    };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.6, hi = 3.2;
    double m1 = hi - invphi * (hi - lo);
    double m2 = lo + invphi * (hi - lo);
    double f1 = misfit(m1, nullptr);
    double f2 = misfit(m2, nullptr);
    while (hi - lo > 1e-6) {
        if (f1 <= f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - invphi * (hi - lo);
            f1 = misfit(m1, nullptr);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + invphi * (hi - lo);
            f2 = misfit(m2, nullptr);
        }
    }
    PhaseFit out;
    out.p = 0.5 * (lo + hi);
    misfit(out.p, &out.w);
    if (!(out.w > 0.0)) throw NumericalError("fit_decay: phase fit gave nonpositive frequency");
    return out;
}

// Least squares of y ~ a + d*log(x) + c*x^p for fixed p. The log term
// absorbs the algebraic prefactor of the far-field envelope; without it the
// fitted exponent is biased low on windows of moderate width.
struct EnvFit {
    double a = 0.0;
    double d = 0.0;
    double c = 0.0;
    double sse = 0.0;
};

EnvFit envelope_fit(const std::vector<double>& x, const std::vector<double>& y, double p) {
    double M[3][3] = {};
    double rhs[3] = {};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double col[3] = {1.0, std::log(x[i]), std::pow(x[i], p)};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += col[r] * y[i];
            for (int cix = 0; cix < 3; ++cix) M[r][cix] += col[r] * col[cix];
        }
    }
    // Gaussian elimination with partial pivoting on the 3x3 normal equations
    for (int k = 0; k < 3; ++k) {
        int piv = k;
        for (int r = k + 1; r < 3; ++r)
            if (std::abs(M[r][k]) > std::abs(M[piv][k])) piv = r;
        if (std::abs(M[piv][k]) < 1e-300)
            throw NumericalError("fit_decay: singular envelope system");
        std::swap(M[k], M[piv]);
        std::swap(rhs[k], rhs[piv]);
        for (int r = k + 1; r < 3; ++r) {
            const double f = M[r][k] / M[k][k];
            for (int cix = k; cix < 3; ++cix) M[r][cix] -= f * M[k][cix];
            rhs[r] -= f * rhs[k];
        }
    }
    double sol[3];
    for (int k = 2; k >= 0; --k) {
        double s = rhs[k];
        for (int cix = k + 1; cix < 3; ++cix) s -= M[k][cix] * sol[cix];
        sol[k] = s / M[k][k];
    }
    EnvFit out;
    out.a = sol[0];
    out.d = sol[1];
    out.c = sol[2];
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - out.a - out.d * std::log(x[i]) - out.c * std::pow(x[i], p);
        out.sse += r * r;
    }
    return out;
}

double r_squared_of(const std::vector<double>& y, double sse) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double sst = 0.0;
    for (double v : y) sst += (v - mean) * (v - mean);
    return sst > 0.0 ? std::max(0.0, 1.0 - sse / sst) : 0.0;
}

} // namespace

DecayFit fit_decay(const Field1D& K, double window_lo, double window_hi) {
    if (!(window_lo < window_hi))
        throw ArgumentError("fit_decay: window_lo must be below window_hi");
    if (window_hi > K.grid.half_width)
        throw ArgumentError("fit_decay: window exceeds the grid");
    if (!(window_lo > 0.0))
        throw ArgumentError("fit_decay: window must sit in the far field x > 0");

    const Grid1D& grid = K.grid;
    std::vector<double> mag(grid.n);
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        mag[i] = std::abs(K.v[i]);
        max_re = std::max(max_re, std::abs(K.v[i].real()));
        max_im = std::max(max_im, std::abs(K.v[i].imag()));
    }

    std::vector<double> x, g;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double xi = grid.point(i);
        if (xi <= window_lo || xi >= window_hi) continue;
        if (mag[i] <= 1e-13) continue;   // round-off dominated, skip
        x.push_back(xi);
        g.push_back(-std::log(mag[i]));
        idx.push_back(i);
    }
    if (x.size() < 8)
        throw NumericalError("fit_decay: fewer than 8 usable samples in window");

    // Dip hunt over an extended range. A real kernel with sign changes has
    // near-zeros whose positions carry the decay exponent far more cleanly
    // than the heavily modulated magnitude does.
    std::vector<double> dips;
    if (max_im < 1e-10 * max_re) {
        const double lo_x = 0.7 * window_lo;
        const double hi_x = std::min(3.0 * window_hi, 0.95 * grid.half_width);
        const std::size_t rad = std::max<std::size_t>(8,
            static_cast<std::size_t>(std::lround(1.5 / grid.dx)));
        for (std::size_t i = 2; i + 2 < grid.n; ++i) {
            const double xi = grid.point(i);
            if (xi < lo_x || xi > hi_x) continue;
            if (mag[i] <= 1e-12) continue;
            if (!(mag[i] <= mag[i - 1] && mag[i] < mag[i + 1])) continue;
            const std::size_t l = i > rad ? i - rad : 0;
            const std::size_t r = std::min(grid.n, i + rad);
            double local_max = 0.0;
            for (std::size_t j = l; j < r; ++j) local_max = std::max(local_max, mag[j]);
            if (mag[i] < 0.2 * local_max) dips.push_back(xi);
        }
        // the first dip sits closest to the core and is the least asymptotic
        if (dips.size() >= 5) dips.erase(dips.begin());
    }

    DecayFit fit;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;

    if (dips.size() >= 3) {
        const PhaseFit ph = fit_phase(dips);
        // quadrature reconstruction: with the local phase w*p*x^(p-1) known,
        // the conjugate component v follows from K and its derivative, and
        // sqrt(K^2 + v^2) is the smooth envelope
        Field1D spec = dft_forward(K);
        for (std::size_t i = 0; i < grid.n; ++i)
            spec.v[i] *= complex_t{0.0, grid.freqs[i]};
        const Field1D Kd = dft_inverse(spec);

        double c = 0.2, beta = 0.0;
        EnvFit ef;
        std::vector<double> y(x.size());
        for (int round = 0; round < 4; ++round) {
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double xp1 = std::pow(x[j], ph.p - 1.0);
                const double h_re = beta / x[j] - c * ph.p * xp1;
                const double h_im = ph.w * ph.p * xp1;
                const double kv = K.v[idx[j]].real();
                const double v = (h_re * kv - Kd.v[idx[j]].real()) / h_im;
                const double env = std::sqrt(kv * kv + v * v);
                y[j] = -std::log(std::max(env, 1e-300));
            }
            ef = envelope_fit(x, y, ph.p);
            beta = -ef.d;
            c = ef.c;
        }
        fit.exponent = ph.p;
        fit.coefficient = ef.c;
        fit.prefactor = std::exp(-ef.a);
        fit.r_squared = r_squared_of(y, ef.sse);
        return fit;
    }

    // Monotone profile: fit -log|K| ~ a + c*x^p directly, trimming samples
    // that sit far above the trend (isolated dips that escaped detection).
    std::vector<char> keep(x.size(), 1);
    double p = best_exponent(x, g, keep);
    for (int round = 0; round < 2; ++round) {
        LinFit lf = profile_fit(x, g, keep, p);
        std::vector<double> res;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (keep[i]) res.push_back(g[i] - lf.a - lf.c * std::pow(x[i], p));
        std::vector<double> ab(res);
        for (auto& r : ab) r = std::abs(r);
        std::nth_element(ab.begin(), ab.begin() + ab.size() / 2, ab.end());
        const double mad = ab[ab.size() / 2];
        const double thresh = std::max(5.0 * mad, 0.25);
        std::size_t kept = 0, j = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!keep[i]) continue;
            if (res[j] > thresh) keep[i] = 0;
            ++j;
            kept += keep[i];
        }
        if (kept < 8) throw NumericalError("fit_decay: trimming left too few samples");
        p = best_exponent(x, g, keep);
    }

    LinFit lf = profile_fit(x, g, keep, p);
    std::vector<double> kept_y;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (keep[i]) kept_y.push_back(g[i]);

    fit.exponent = p;
    fit.coefficient = lf.c;
    fit.prefactor = std::exp(-lf.a);
    fit.r_squared = r_squared_of(kept_y, lf.sse);
    return fit;
}

Field1D sharpness_solution(double t, int m, const Grid1D& grid) {
    SemigroupParams p;
    p.m = m;
    p.z = complex_t{1.0, t};
    return kernel(p, grid);
}

} // namespace disperse

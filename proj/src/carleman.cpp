#include "disperse/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace disperse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow_int(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// D v = i^{-1} v', applied spectrally
Field1D apply_D(const Field1D& v) {
    Field1D F = dft_forward(v);
    for (std::size_t i = 0; i < F.grid.n; ++i) F.v[i] *= F.grid.freqs[i];
    return dft_inverse(F);
}

// L v = D v - (i/2)(a + b x) v, the conjugated first-order factor
Field1D apply_L(const Field1D& v, double a, double b) {
    Field1D out = apply_D(v);
    const complex_t half_i{0.0, 0.5};
    for (std::size_t i = 0; i < v.grid.n; ++i)
        out.v[i] -= half_i * (a + b * v.grid.point(i)) * v.v[i];
    return out;
}

// apply the real-coefficient polynomial poly to the operator L by Horner-free
// monomial composition: sum_j c_j L^j v
Field1D apply_poly_L(const std::vector<double>& poly, const Field1D& v, double a, double b) {
    Field1D acc = zero_field(v.grid);
    Field1D power = v;   // L^0 v
    for (std::size_t j = 0; j < poly.size(); ++j) {
        if (j > 0) power = apply_L(power, a, b);
        if (poly[j] == 0.0) continue;
        for (std::size_t i = 0; i < acc.grid.n; ++i) acc.v[i] += poly[j] * power.v[i];
    }
    return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& poly, int k) {
    std::vector<double> out = poly;
    for (int d = 0; d < k; ++d) {
        if (out.size() <= 1) return {0.0};
        std::vector<double> next(out.size() - 1);
        for (std::size_t j = 1; j < out.size(); ++j)
            next[j - 1] = out[j] * static_cast<double>(j);
        out = std::move(next);
    }
    return out;
}

} // namespace

double treves_check(const Field1D& u, const QuadraticWeight& Q,
                    const std::vector<double>& P_coeffs) {
    if (P_coeffs.empty()) throw ArgumentError("treves_check: empty polynomial");
    const std::size_t n = u.grid.n;
    for (std::size_t i = 0; i < 4; ++i)
        if (std::abs(u.v[i]) >= 1e-14 || std::abs(u.v[n - 1 - i]) >= 1e-14)
            throw ArgumentError("treves_check: u does not vanish near the boundary");

    auto Qat = [&](double x) { return Q.a * x + 0.5 * Q.b * x * x + Q.c; };
    double shift = -kInf;
    for (std::size_t i = 0; i < n; ++i) shift = std::max(shift, Qat(u.grid.point(i)));

    // LHS: int e^{Q-S} |P(D)u|^2
    Field1D Pu = zero_field(u.grid);
    {
        Field1D F = dft_forward(u);
        for (std::size_t i = 0; i < n; ++i) {
            double sym = 0.0;
            for (std::size_t j = P_coeffs.size(); j-- > 0;)
                sym = sym * F.grid.freqs[i] + P_coeffs[j];
            F.v[i] *= sym;
        }
        Pu = dft_inverse(F);
    }
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        lhs += std::exp(Qat(u.grid.point(i)) - shift) * std::norm(Pu.v[i]);
    lhs *= u.grid.dx;

    // RHS: sum_k b^k/k! int |P^{(k)}(L) v|^2 with v = e^{(Q-S)/2} u
    Field1D v = u;
    for (std::size_t i = 0; i < n; ++i)
        v.v[i] *= std::exp(0.5 * (Qat(u.grid.point(i)) - shift));

    double rhs = 0.0;
    double bk_over_kfact = 1.0;
    const int deg = static_cast<int>(P_coeffs.size()) - 1;
    for (int k = 0; k <= deg; ++k) {
        if (k > 0) bk_over_kfact *= Q.b / static_cast<double>(k);
        if (bk_over_kfact == 0.0) break;
        std::vector<double> pk = poly_derivative(P_coeffs, k);
        Field1D term = apply_poly_L(pk, v, Q.a, Q.b);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm2 += std::norm(term.v[i]);
        rhs += bk_over_kfact * norm2 * u.grid.dx;
    }

    const double big = std::max(std::abs(lhs), std::abs(rhs));
    if (big == 0.0) return 0.0;
    return std::abs(lhs - rhs) / big;
}

CarlemanReport carleman_l2_check(const Field2D& u, const CarlemanWeight& w,
                                 const std::vector<double>& gamma_list) {
    if (gamma_list.empty()) throw ArgumentError("carleman_l2_check: empty gamma list");
    if (!std::is_sorted(gamma_list.begin(), gamma_list.end()))
        throw ArgumentError("carleman_l2_check: gamma list must be increasing");
    if (!(gamma_list.front() > 0.0))
        throw ArgumentError("carleman_l2_check: gammas must be positive");
    if (w.m < 1) throw ArgumentError("carleman_l2_check: m must be >= 1");
    if (!(w.R > 0.0) || !(w.d1 < w.d2) || !(w.d1 > 0.0))
        throw ArgumentError("carleman_l2_check: bad weight geometry");

    const double p = 2.0 * w.m / (2.0 * w.m - 1.0);
    const double gamma0 = gamma_list.front();
    const double R_min = std::pow(w.d1 * w.d1 * gamma0, -1.0 / p);
    if (w.R < R_min)
        throw ArgumentError("carleman_l2_check: R below the admissible floor " +
                            std::to_string(R_min));

    const std::size_t nt = u.grid.t_axis.n;
    const std::size_t nx = u.grid.x_axis.n;

    // support checks: strictly interior in (0,1) in time, inside the annulus
    double umax = 0.0;
    for (const auto& z : u.v) umax = std::max(umax, std::abs(z));
    if (umax == 0.0) {
        CarlemanReport rep;
        rep.skipped = true;
        return rep;
    }
    // The operator is local, so Lu shares u's support; integrating over the
    // full annulus would let the e^{gamma q} weight amplify spectral noise
    // where u vanishes. Restrict both integrals to the support of u.
    std::string offenders;
    int n_off = 0;
    std::vector<char> mask(u.grid.size(), 0);
    std::vector<double> qshape(u.grid.size(), 0.0);   // (x/R + phi(t))^2
    for (std::size_t it = 0; it < nt; ++it) {
        const double t = u.grid.t_axis.point(it);
        const double ph = w.phi(t);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = u.grid.x_axis.point(ix);
            const double s = std::abs(x / w.R + ph);
            const std::size_t idx = it * nx + ix;
            qshape[idx] = s * s;
            const bool inside = (s >= w.d1 && s <= w.d2);
            if (std::abs(u.v[idx]) > 1e-13 * umax) {
                mask[idx] = 1;
                const bool t_ok = (t > 0.0 && t < 1.0);
                if (!inside || !t_ok) {
                    if (n_off < 5)
                        offenders += " (t=" + std::to_string(t) + ", x=" + std::to_string(x) + ")";
                    ++n_off;
                }
            }
        }
    }
    if (n_off > 0)
        throw ArgumentError("carleman_l2_check: " + std::to_string(n_off) +
                            " samples violate the support annulus:" + offenders);

    // L u = D_t u + D_x^{2m} u, spectrally on the 2-D grid
    Field2D F = dft_forward(u);
    for (std::size_t it = 0; it < nt; ++it) {
        const double tau = u.grid.t_axis.freqs[it];
        for (std::size_t ix = 0; ix < nx; ++ix)
            F.at(it, ix) *= tau + pow_int(u.grid.x_axis.freqs[ix], 2 * w.m);
    }
    Field2D Lu = dft_inverse(F);

    CarlemanReport rep;
    const double Rp = std::pow(w.R, p);
    for (double gamma : gamma_list) {
        const double alpha = 2.0 * gamma * Rp;
        // log-shifted integrals over the annulus
        double s_num = -kInf, s_den = -kInf;
        for (std::size_t idx = 0; idx < mask.size(); ++idx) {
            if (!mask[idx]) continue;
            const double q = alpha * qshape[idx];
            const double an = std::abs(Lu.v[idx]);
            const double ad = std::abs(u.v[idx]);
            if (an > 0.0) s_num = std::max(s_num, q + 2.0 * std::log(an));
            if (ad > 0.0) s_den = std::max(s_den, q + 2.0 * std::log(ad));
        }
        if (s_den == -kInf)
            throw NumericalError("carleman_l2_check: empty weighted denominator");
        double num = 0.0, den = 0.0;
        for (std::size_t idx = 0; idx < mask.size(); ++idx) {
            if (!mask[idx]) continue;
            const double q = alpha * qshape[idx];
            const double an = std::abs(Lu.v[idx]);
            const double ad = std::abs(u.v[idx]);
            if (an > 0.0) num += std::exp(q + 2.0 * std::log(an) - s_num);
            if (ad > 0.0) den += std::exp(q + 2.0 * std::log(ad) - s_den);
        }
        const double log_ratio = (s_num + std::log(num)) - (s_den + std::log(den)) -
                                 (4.0 * w.m - 1.0) * std::log(gamma) - std::log(Rp);
        rep.gammas.push_back(gamma);
        rep.ratios.push_back(std::exp(log_ratio));
    }
    rep.min_ratio = *std::min_element(rep.ratios.begin(), rep.ratios.end());
    return rep;
}

} // namespace disperse

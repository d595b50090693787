#include "disperse/multiplier.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace disperse {

namespace {

double pow_int(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> out(c.size() - 1);
    for (std::size_t j = 1; j < c.size(); ++j) out[j - 1] = c[j] * static_cast<double>(j);
    return out;
}

// quintic smoothstep, C^2 at both ends
double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double ols_slope(const std::vector<double>& lx, const std::vector<double>& ly) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

double eval_poly(const std::vector<double>& coeffs, double x) {
    double r = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) r = r * x + coeffs[j];
    return r;
}

complex_t eval_poly(const std::vector<double>& coeffs, complex_t x) {
    complex_t r = 0.0;
    for (std::size_t j = coeffs.size(); j-- > 0;) r = r * x + coeffs[j];
    return r;
}

std::vector<double> poly_shift(const std::vector<double>& coeffs, double x0) {
    // p(x0 + y) by repeated synthetic division: each division by (x - x0)
    // peels off the next Taylor coefficient as the remainder
    std::vector<double> c = coeffs;
    std::vector<double> out(coeffs.size(), 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const std::size_t d = c.size() - 1;
        if (d == 0) {
            out[k] = c[0];
            break;
        }
        std::vector<double> b(d);
        b[d - 1] = c[d];
        for (std::size_t j = d - 1; j >= 1; --j) b[j - 1] = c[j] + x0 * b[j];
        out[k] = c[0] + x0 * b[0];
        c = std::move(b);
    }
    return out;
}

MultiplierParams pq_split(int m, double b) {
    if (m < 1) throw ArgumentError("pq_split: m must be >= 1");
    MultiplierParams p;
    p.m = m;
    p.b = b;
    p.p_leb = (4.0 * m + 2.0) / (4.0 * m + 1.0);
    p.pprime_leb = 4.0 * m + 2.0;
    const int deg = 2 * m;
    p.P_coeffs.assign(deg + 1, 0.0);
    p.Qb_coeffs.assign(deg, 0.0);
    // binomial row of (xi + i)^{2m}
    double binom = 1.0;
    for (int j = deg; j >= 0; --j) {
        // coefficient of xi^j is C(2m, j) * i^{2m-j}
        const int r = (deg - j) % 4;
        const double re = (r == 0) ? 1.0 : (r == 2) ? -1.0 : 0.0;
        const double im = (r == 1) ? 1.0 : (r == 3) ? -1.0 : 0.0;
        p.P_coeffs[j] += binom * re;
        if (j < deg) p.Qb_coeffs[j] += binom * im;
        binom = binom * j / static_cast<double>(deg - j + 1);
    }
    p.Qb_coeffs[0] += b;
    return p;
}

RootDecomposition qb_roots(const MultiplierParams& params, int k_max) {
    const int d = 2 * params.m - 1;
    const std::vector<double>& q = params.Qb_coeffs;
    for (double c : q)
        if (!std::isfinite(c)) throw ArgumentError("qb_roots: non-finite coefficient");

    RootDecomposition rd;
    if (d == 1) {
        rd.roots.push_back(complex_t{-q[0] / q[1], 0.0});
    } else {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
        for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < d; ++i) comp(i, d - 1) = -q[i] / q[d];
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
        for (int i = 0; i < d; ++i)
            rd.roots.push_back(complex_t{es.eigenvalues()[i].real(), es.eigenvalues()[i].imag()});
    }
    std::sort(rd.roots.begin(), rd.roots.end(), [](complex_t a, complex_t b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (complex_t r : rd.roots) {
        const double res = std::abs(eval_poly(q, r));
        const double bound = 1e-8 * std::pow(1.0 + std::abs(r), static_cast<double>(d));
        if (res > bound)
            throw NumericalError("qb_roots: root residual " + std::to_string(res) +
                                 " exceeds bound " + std::to_string(bound));
        rd.a_sorted.push_back(r.real());
    }
    std::sort(rd.a_sorted.begin(), rd.a_sorted.end());

    const double a1 = rd.a_sorted.front();
    const double aL = rd.a_sorted.back();
    rd.center.kind = CutoffDescriptor::Kind::center;
    rd.center.lo = a1 - std::abs(a1) / 2.0;
    rd.center.hi = aL + std::abs(aL) / 2.0;
    rd.center.degenerate = !(rd.center.lo < rd.center.hi);

    for (int k = 1; k <= k_max; ++k) {
        CutoffDescriptor cp;
        cp.kind = CutoffDescriptor::Kind::plus_k;
        cp.k = k;
        cp.lo = aL + std::ldexp(std::abs(aL), k - 2);
        cp.hi = aL + std::ldexp(std::abs(aL), k - 1);
        cp.degenerate = (std::abs(aL) == 0.0);
        rd.plus.push_back(cp);

        CutoffDescriptor cm;
        cm.kind = CutoffDescriptor::Kind::minus_k;
        cm.k = k;
        cm.lo = a1 - std::ldexp(std::abs(a1), k - 1);
        cm.hi = a1 - std::ldexp(std::abs(a1), k - 2);
        cm.degenerate = (std::abs(a1) == 0.0);
        rd.minus.push_back(cm);
    }

    // interior refinement of the center piece
    std::vector<double> a_ext;
    a_ext.push_back(a1 - std::abs(a1));
    for (double a : rd.a_sorted) a_ext.push_back(a);
    a_ext.push_back(aL + std::abs(aL));
    for (int nu = 1; nu <= d; ++nu) {
        CutoffDescriptor ci;
        ci.kind = CutoffDescriptor::Kind::center_nu;
        ci.nu = nu;
        ci.lo = 0.5 * (a_ext[nu - 1] + a_ext[nu]);
        ci.hi = 0.5 * (a_ext[nu] + a_ext[nu + 1]);
        ci.degenerate = (a_ext[nu] == a_ext[nu - 1] && a_ext[nu] == a_ext[nu + 1]);
        rd.interior.push_back(ci);
    }
    return rd;
}

int partition_count(const RootDecomposition& rd, double xi) {
    int count = rd.center.contains(xi) ? 1 : 0;
    for (const auto& c : rd.plus) count += c.contains(xi) ? 1 : 0;
    for (const auto& c : rd.minus) count += c.contains(xi) ? 1 : 0;
    return count;
}

int interior_partition_count(const RootDecomposition& rd, double xi) {
    int count = 0;
    for (const auto& c : rd.interior) count += c.contains(xi) ? 1 : 0;
    return count;
}

double phi_plus(double s) {
    if (s <= 0.5 || s >= 2.5) return 0.0;
    if (s < 1.0) return smoothstep((s - 0.5) / 0.5);
    if (s <= 2.0) return 1.0;
    return 1.0 - smoothstep((s - 2.0) / 0.5);
}

AnchoredFrame anchored_frame(const MultiplierParams& params, std::size_t n) {
    RootDecomposition rd = qb_roots(params, 2);
    complex_t anchor = rd.roots.front();
    for (complex_t r : rd.roots)
        if (std::abs(r.imag()) < std::abs(anchor.imag())) anchor = r;
    AnchoredFrame fr;
    fr.xi0 = anchor.real();

    const std::vector<double> Pp = poly_derivative(params.P_coeffs);
    const std::vector<double> Ppp = poly_derivative(Pp);
    const std::vector<double> Qp = poly_derivative(params.Qb_coeffs);
    const double a_loc = std::max(std::abs(eval_poly(Ppp, fr.xi0)) / 2.0, 1.0);
    const double q_loc = std::max(std::abs(eval_poly(Qp, fr.xi0)), 1.0);
    const double beta = std::abs(eval_poly(params.Qb_coeffs, fr.xi0));
    fr.sigma = (q_loc + std::sqrt(q_loc * q_loc + 4.0 * a_loc * beta)) / (2.0 * a_loc);
    fr.T = a_loc * fr.sigma * fr.sigma + q_loc * fr.sigma + beta;

    fr.grid.t_axis = make_grid(16.0 / fr.T, n);
    fr.grid.x_axis = make_grid(16.0 / fr.sigma, n);
    // half a tau cell keeps the lattice off the singular curve at the anchor
    fr.tau_off = 0.5 * fr.grid.t_axis.dfreq();
    fr.shear = true;
    return fr;
}

std::vector<Field2D> standard_ensemble(const Grid2D& grid, unsigned seed, bool real_even) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jit(0.9, 1.1);
    const double Lt = grid.t_axis.half_width;
    const double Lx = grid.x_axis.half_width;

    std::vector<Field2D> out;
    auto gaussian = [&](double st, double sx, auto&& extra) {
        return make_field(grid, [&](double t, double x) -> complex_t {
            const double env = std::exp(-0.5 * (t * t) / (st * st) - 0.5 * (x * x) / (sx * sx));
            return env * extra(t, x);
        });
    };
    auto one = [](double, double) -> complex_t { return 1.0; };

    const double wfrac[3] = {1.0 / 16.0, 1.0 / 10.0, 1.0 / 6.0};
    for (double f : wfrac) out.push_back(gaussian(Lt * f * jit(rng), Lx * f * jit(rng), one));

    for (double kappa : {2.0, 5.0}) {
        const double st = Lt / 10.0 * jit(rng), sx = Lx / 10.0 * jit(rng);
        const double kk = kappa * jit(rng);
        out.push_back(gaussian(st, sx, [&](double, double x) -> complex_t {
            const double ph = kk * (x / sx) * (x / sx);
            if (real_even) return std::cos(ph);
            return std::exp(complex_t{0.0, ph});
        }));
    }

    const double modes[3][2] = {{0.0, 4.0}, {4.0, 0.0}, {3.0, 3.0}};
    for (const auto& md : modes) {
        const double st = Lt / 10.0 * jit(rng), sx = Lx / 10.0 * jit(rng);
        const double wt = md[0] / st * jit(rng), wx = md[1] / sx * jit(rng);
        out.push_back(gaussian(st, sx, [&](double t, double x) -> complex_t {
            if (real_even) return std::cos(wt * t) * std::cos(wx * x);
            return std::exp(complex_t{0.0, wt * t + wx * x});
        }));
    }
    return out;
}

Field2D apply_Mb(const Field2D& f, const MultiplierParams& params,
                 const CutoffDescriptor* cutoff, const AnchoredFrame* frame) {
    Field2D F = dft_forward(f);
    const std::size_t nt = F.grid.t_axis.n;
    const std::size_t nx = F.grid.x_axis.n;

    // per-xi pieces of the denominator (and the physical xi for the cutoff)
    std::vector<complex_t> xi_part(nx);
    std::vector<double> xi_phys(nx);
    if (frame) {
        std::vector<double> dP = poly_shift(params.P_coeffs, frame->xi0);
        dP[0] = 0.0;
        if (frame->shear && dP.size() > 1) dP[1] = 0.0;
        const std::vector<double> Qs = poly_shift(params.Qb_coeffs, frame->xi0);
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double xip = F.grid.x_axis.freqs[ix];
            xi_phys[ix] = frame->xi0 + xip;
            xi_part[ix] = complex_t{frame->tau_off + eval_poly(dP, xip), eval_poly(Qs, xip)};
        }
    } else {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double xi = F.grid.x_axis.freqs[ix];
            xi_phys[ix] = xi;
            xi_part[ix] = complex_t{eval_poly(params.P_coeffs, xi),
                                    eval_poly(params.Qb_coeffs, xi)};
        }
    }

    for (std::size_t it = 0; it < nt; ++it) {
        const double tau = F.grid.t_axis.freqs[it];
        for (std::size_t ix = 0; ix < nx; ++ix) {
            if (cutoff && !cutoff->contains(xi_phys[ix])) {
                F.at(it, ix) = 0.0;
                continue;
            }
            const complex_t den = tau + xi_part[ix];
            if (std::abs(den) < 1e-8)
                throw SingularityError("apply_Mb: near-singular denominator at tau' = " +
                                       std::to_string(tau) + ", xi = " +
                                       std::to_string(xi_phys[ix]));
            F.at(it, ix) /= den;
        }
    }
    return dft_inverse(F);
}

double empirical_pq_norm(const MultiplierParams& params,
                         const std::vector<Field2D>& ensemble,
                         const CutoffDescriptor* cutoff, const AnchoredFrame* frame) {
    if (ensemble.empty()) throw ArgumentError("empirical_pq_norm: empty ensemble");
    double best = 0.0;
    bool any = false;
    for (const Field2D& f : ensemble) {
        double den;
        if (cutoff) {
            // chi(D_x) f: zero the xi columns outside the cutoff
            Field2D F = dft_forward(f);
            const std::size_t nt = F.grid.t_axis.n, nx = F.grid.x_axis.n;
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const double xi = (frame ? frame->xi0 : 0.0) + F.grid.x_axis.freqs[ix];
                if (!cutoff->contains(xi))
                    for (std::size_t it = 0; it < nt; ++it) F.at(it, ix) = 0.0;
            }
            den = lp_norm(dft_inverse(F), params.p_leb);
        } else {
            den = lp_norm(f, params.p_leb);
        }
        if (den <= 1e-14 * lp_norm(f, params.p_leb)) continue;   // member misses the band
        const double num = lp_norm(apply_Mb(f, params, cutoff, frame), params.pprime_leb);
        best = std::max(best, num / den);
        any = true;
    }
    if (!any) throw ArgumentError("empirical_pq_norm: every member filtered to zero");
    return best;
}

double frozen_resolvent_norm(int m, complex_t z, unsigned seed, std::size_t n) {
    if (m < 1) throw ArgumentError("frozen_resolvent_norm: m must be >= 1");
    if (z.imag() == 0.0) throw DomainError("frozen_resolvent_norm: Im z must be nonzero");
    const MultiplierParams params = pq_split(m, 0.0);
    const double beta = std::abs(z.imag());
    const double lambda = std::pow(beta, 1.0 / (2.0 * m));

    // scale-critical grid; Re z drops out exactly (time modulation)
    Grid2D grid;
    grid.t_axis = make_grid(8.0 / beta, n);
    grid.x_axis = make_grid(8.0 / lambda, n);
    const std::vector<Field2D> ensemble = standard_ensemble(grid, seed, true);

    double best = 0.0;
    for (const Field2D& f : ensemble) {
        Field2D F = dft_forward(f);
        for (std::size_t it = 0; it < n; ++it) {
            const double tau = grid.t_axis.freqs[it];
            for (std::size_t ix = 0; ix < n; ++ix) {
                const complex_t den{tau + eval_poly(params.P_coeffs, grid.x_axis.freqs[ix]),
                                    z.imag()};
                F.at(it, ix) /= den;
            }
        }
        const double num = lp_norm(dft_inverse(F), params.pprime_leb);
        const double den = lp_norm(f, params.p_leb);
        best = std::max(best, num / den);
    }
    return best;
}

namespace {

// one pass of the smoothly truncated oscillatory quadrature
double vdc_integral(int m, double x, double s, double h, double c1, double c2) {
    const std::size_t N = static_cast<std::size_t>(std::ceil(2.0 * c2 / h));
    const double step = 2.0 * c2 / static_cast<double>(N);
    complex_t acc = 0.0;
    for (std::size_t i = 0; i <= N; ++i) {
        const double xi = -c2 + step * static_cast<double>(i);
        const double a = std::abs(xi);
        double w;
        if (a <= c1)
            w = 1.0;
        else if (a >= c2)
            w = 0.0;
        else
            w = 1.0 - smoothstep((a - c1) / (c2 - c1));
        if (w == 0.0) continue;
        const double phase = -s * pow_int(xi, 2 * m) + x * xi;
        const double wgt = (i == 0 || i == N) ? 0.5 : 1.0;
        acc += wgt * w * std::exp(complex_t{0.0, phase});
    }
    return std::abs(acc) * step;
}

} // namespace

VdcReport vdc_decay(int m, double x, const std::vector<double>& s_list) {
    if (m < 1) throw ArgumentError("vdc_decay: m must be >= 1");
    if (s_list.size() < 3) throw ArgumentError("vdc_decay: need at least 3 s values");
    for (double s : s_list)
        if (!(s > 0.0)) throw ArgumentError("vdc_decay: s values must be positive");
    const auto [smin, smax] = std::minmax_element(s_list.begin(), s_list.end());
    if (*smax / *smin < 99.99)
        throw ArgumentError("vdc_decay: s_list must span at least two decades");

    const double K2 = (m == 1) ? 8.0 : (m == 2) ? 5.0 : 3.8;
    VdcReport rep;
    std::vector<double> lx, ly;
    for (double s : s_list) {
        const double xi_stat = std::pow(std::abs(x) / (2.0 * m * s), 1.0 / (2.0 * m - 1.0));
        const double c1 = std::max({1.5 * xi_stat,
                                    std::pow(300.0 / (2.0 * m * s), 1.0 / (2.0 * m - 1.0)),
                                    K2 * std::pow(s, -1.0 / (2.0 * m))});
        const double c2 = 1.6 * c1;
        const double h = 0.5 / (2.0 * m * s * pow_int(c2, 2 * m - 1) + std::abs(x) + 1.0);
        const double coarse = vdc_integral(m, x, s, h, c1, c2);
        const double fine = vdc_integral(m, x, s, 0.5 * h, c1, c2);
        if (std::abs(fine - coarse) > 0.01 * std::abs(fine))
            throw NumericalError("vdc_decay: quadrature not converged at s = " +
                                 std::to_string(s));
        rep.s_values.push_back(s);
        rep.magnitudes.push_back(fine);
        lx.push_back(std::log(s));
        ly.push_back(std::log(fine));
    }
    rep.slope = ols_slope(lx, ly);
    return rep;
}

double dispersive_norm(double s, int m, const std::vector<Field1D>& ensemble) {
    if (s == 0.0) throw DomainError("dispersive_norm: s must be nonzero");
    if (m < 1) throw ArgumentError("dispersive_norm: m must be >= 1");
    if (ensemble.empty()) throw ArgumentError("dispersive_norm: empty ensemble");
    const double p = (4.0 * m + 2.0) / (4.0 * m + 1.0);
    const double pp = 4.0 * m + 2.0;
    double best = 0.0;
    for (const Field1D& f : ensemble) {
        Field1D F = dft_forward(f);
        for (std::size_t i = 0; i < F.grid.n; ++i)
            F.v[i] *= std::exp(complex_t{0.0, -s * pow_int(F.grid.freqs[i], 2 * m)});
        const double num = lp_norm(dft_inverse(F), pp);
        const double den = lp_norm(f, p);
        if (den == 0.0) continue;
        best = std::max(best, num / den);
    }
    return best;
}

SlopeReport dispersive_slope(int m, const std::vector<double>& s_list, unsigned seed) {
    if (s_list.size() < 3) throw ArgumentError("dispersive_slope: need at least 3 s values");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jit(0.95, 1.05);
    // one jitter per dilation slot, reused for every s so the family is
    // exactly self-similar across the sweep
    const double mus[5] = {0.25, 0.5, 1.0, 2.0, 4.0};
    double jits[5];
    for (double& j : jits) j = jit(rng);

    SlopeReport rep;
    std::vector<double> lx, ly;
    for (double s : s_list) {
        if (!(s > 0.0)) throw DomainError("dispersive_slope: s values must be positive");
        double sig_max = 0.0, spread = 0.0;
        double sigmas[5];
        for (int j = 0; j < 5; ++j) {
            sigmas[j] = std::pow(s * mus[j] * jits[j], 1.0 / (2.0 * m));
            sig_max = std::max(sig_max, sigmas[j]);
            spread = std::max(spread,
                              2.0 * m * s * std::pow(1.0 / sigmas[j], 2.0 * m - 1.0));
        }
        const Grid1D grid = make_grid(8.0 * (sig_max + spread), 4096);
        std::vector<Field1D> ensemble;
        for (int j = 0; j < 5; ++j) {
            const double sg = sigmas[j];
            ensemble.push_back(make_field(grid, [sg](double xx) -> complex_t {
                return std::exp(-0.5 * xx * xx / (sg * sg));
            }));
        }
        const double r = dispersive_norm(s, m, ensemble);
        rep.s_values.push_back(s);
        rep.ratios.push_back(r);
        lx.push_back(std::log(s));
        ly.push_back(std::log(r));
    }
    rep.slope = ols_slope(lx, ly);
    return rep;
}

} // namespace disperse

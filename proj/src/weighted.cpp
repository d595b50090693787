#include "disperse/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "disperse/evolve.hpp"

namespace disperse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// squared norms above DBL_MAX/2 are reported as the +inf sentinel
const double kLogOverflow = std::log(std::numeric_limits<double>::max() / 2.0);

} // namespace

WeightParams make_weight(int m, double gamma) {
    if (m < 1) throw ArgumentError("make_weight: m must be >= 1");
    if (!(gamma > 0.0)) throw ArgumentError("make_weight: gamma must be positive");
    WeightParams w;
    w.m = m;
    w.gamma = gamma;
    w.p_dec = 2.0 * m / (2.0 * m - 1.0);
    return w;
}

double weighted_log_sq_norm(const Field1D& u, const WeightParams& w) {
    const double logdx = std::log(u.grid.dx);
    double shift = -kInf;
    std::vector<double> terms;
    terms.reserve(u.grid.n);
    for (std::size_t i = 0; i < u.grid.n; ++i) {
        const double mag = std::abs(u.v[i]);
        if (mag == 0.0) {
            terms.push_back(-kInf);
            continue;
        }
        const double x = u.grid.point(i);
        const double e = 2.0 * w.gamma * std::pow(std::abs(x), w.p_dec) +
                         2.0 * std::log(mag) + logdx;
        terms.push_back(e);
        shift = std::max(shift, e);
    }
    if (shift == -kInf) return -kInf;   // zero field
    double acc = 0.0;
    for (double e : terms)
        if (e != -kInf) acc += std::exp(e - shift);
    const double logsq = shift + std::log(acc);
    return logsq > kLogOverflow ? kInf : logsq;
}

double weighted_norm(const Field1D& u, const WeightParams& w) {
    const double logsq = weighted_log_sq_norm(u, w);
    if (logsq == -kInf) return 0.0;
    if (logsq == kInf) return kInf;
    return std::exp(0.5 * logsq);
}

double theta(double A, double B, double gamma, int m, double N2) {
    if (!(A > 0.0)) throw DomainError("theta: A must be positive");
    if (!(gamma > 0.0)) throw ArgumentError("theta: gamma must be positive");
    if (!(N2 > 0.0)) throw ArgumentError("theta: N2 must be positive");
    if (m < 1) throw ArgumentError("theta: m must be >= 1");
    const double q = 2.0 * m - 1.0;
    const double inner = 1.0 + N2 * A * std::pow(1.0 + B * B / (A * A), m) * std::pow(gamma, q);
    return gamma / std::pow(inner, 1.0 / q);
}

TransferReport smoothing_weight_transfer_check(const Field1D& f, double gamma, int m,
                                               double A, double B,
                                               std::optional<double> N2) {
    const WeightParams wg = make_weight(m, gamma);
    const double rhs_w = weighted_norm(f, wg);
    TransferReport rep;
    if (rhs_w == 0.0) return rep;   // 0/0 convention: ratio 0
    if (rhs_w == kInf)
        throw ArgumentError("smoothing_weight_transfer_check: gamma-weighted norm of f is infinite");

    const Field1D evolved = analytic_propagate(f, A, B, m);
    const double rhs = std::sqrt(1.0 + B * B / (A * A)) * rhs_w;

    auto ratio_for = [&](double n2) {
        const double th = theta(A, B, gamma, m, n2);
        WeightParams wt = make_weight(m, th);
        const double lhs = weighted_norm(evolved, wt);
        TransferReport r;
        r.ratio = lhs / rhs;
        r.n2 = n2;
        r.theta_val = th;
        return r;
    };

    if (N2) return ratio_for(*N2);

    // fit: smallest N2 on a half-decade log grid keeping the ratio order one
    for (double n2 = 1e-2; n2 <= 1e4 * 1.001; n2 *= std::sqrt(10.0)) {
        TransferReport r = ratio_for(n2);
        if (std::isfinite(r.ratio) && r.ratio <= 10.0) return r;
    }
    throw NumericalError("smoothing_weight_transfer_check: no N2 on the grid keeps the ratio finite");
}

namespace {

// log of the subordination integrand at lambda, for exponent q and point x
double sub_exponent(double lam, double x, double q) {
    const double a = std::abs(lam);
    double e = lam * x - std::pow(a, q) / q;
    const double w = (q - 2.0) / 2.0;
    if (w != 0.0) {
        if (a == 0.0) return -kInf;
        e += w * std::log(a);
    }
    return e;
}

} // namespace

SubordinationReport subordination_check(double p_dec, const std::vector<double>& x_samples) {
    if (!(p_dec > 1.0) || !(p_dec <= 2.0))
        throw ArgumentError("subordination_check: p_dec must lie in (1,2]");
    if (x_samples.empty())
        throw ArgumentError("subordination_check: empty sample list");
    const double q = p_dec / (p_dec - 1.0);

    SubordinationReport rep;
    rep.x_samples = x_samples;
    for (double x : x_samples) {
        if (!std::isfinite(x)) throw ArgumentError("subordination_check: non-finite x");
        // peak of the exponent sits near x^{1/(q-1)} for x > 0
        const double lam_star = x > 0.0 ? std::pow(x, 1.0 / (q - 1.0)) : 1.0;
        double hmax = -kInf;
        for (int i = -400; i <= 400; ++i)
            hmax = std::max(hmax, sub_exponent(0.01 * i * std::max(1.0, lam_star) * 2.0, x, q));
        // expand the window until the integrand is below 1e-18 of its max
        double R = std::max(2.0, 2.0 * lam_star);
        while (sub_exponent(R, x, q) > hmax - 45.0 || sub_exponent(-R, x, q) > hmax - 45.0)
            R *= 1.5;

        auto trapezoid = [&](std::size_t N) {
            const double h = 2.0 * R / static_cast<double>(N);
            double acc = 0.0;
            for (std::size_t i = 0; i <= N; ++i) {
                const double lam = -R + h * static_cast<double>(i);
                const double e = sub_exponent(lam, x, q);
                if (e == -kInf) continue;
                const double wgt = (i == 0 || i == N) ? 0.5 : 1.0;
                acc += wgt * std::exp(e - hmax);
            }
            return acc * h;
        };

        std::size_t N = 8192;
        double prev = trapezoid(N);
        double cur = prev;
        bool converged = false;
        for (int iter = 0; iter < 8; ++iter) {
            N *= 2;
            cur = trapezoid(N);
            if (std::abs(cur - prev) <= 1e-6 * std::abs(cur)) {
                converged = true;
                break;
            }
            prev = cur;
        }
        if (!converged)
            throw NumericalError("subordination_check: quadrature did not converge at x = " +
                                 std::to_string(x));
        const double log_integral = hmax + std::log(cur);
        const double target = std::pow(std::abs(x), p_dec) / p_dec;
        rep.ratios.push_back(std::exp(log_integral - target));
    }
    const auto [lo, hi] = std::minmax_element(rep.ratios.begin(), rep.ratios.end());
    rep.band_width = *hi / *lo;
    return rep;
}

ConvexityReport convexity_check(const std::vector<Field1D>& trajectory, double dt,
                                const WeightParams& w, double v_inf) {
    if (trajectory.size() < 3)
        throw ArgumentError("convexity_check: need at least 3 frames");
    if (!(dt > 0.0)) throw ArgumentError("convexity_check: dt must be positive");
    if (v_inf < 0.0) throw ArgumentError("convexity_check: v_inf must be nonnegative");

    ConvexityReport rep;
    rep.v_inf = v_inf;
    std::size_t n_zero = 0;
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        const double t = dt * static_cast<double>(k);
        const double logH = weighted_log_sq_norm(trajectory[k], w);
        if (logH == kInf)
            throw ArgumentError("convexity_check: weighted norm infinite at frame " +
                                std::to_string(k));
        if (logH == -kInf) ++n_zero;
        rep.times.push_back(t);
        rep.log_weighted_energy.push_back(logH);
    }
    if (n_zero == trajectory.size()) return rep;   // zero trajectory, trivially passing
    if (n_zero > 0)
        throw ArgumentError("convexity_check: trajectory mixes zero and nonzero frames");

    std::vector<double> G(trajectory.size());
    for (std::size_t k = 0; k < G.size(); ++k) {
        const double t = rep.times[k];
        G[k] = rep.log_weighted_energy[k] - 0.5 * t * (1.0 - t) * v_inf * v_inf;
    }
    const std::size_t last = G.size() - 1;
    const double t0 = rep.times[0], t1 = rep.times[last];
    for (std::size_t k = 0; k <= last; ++k) {
        const double s = (rep.times[k] - t0) / (t1 - t0);
        const double chord = (1.0 - s) * G[0] + s * G[last];
        rep.fitted_logC = std::max(rep.fitted_logC, G[k] - chord);
    }
    for (std::size_t k = 1; k < last; ++k) {
        const double second = G[k + 1] - 2.0 * G[k] + G[k - 1];
        rep.max_violation = std::max(rep.max_violation, -second);
    }
    rep.max_violation = std::max(rep.max_violation, 0.0);
    return rep;
}

} // namespace disperse

#pragma once

#include <optional>
#include <vector>

#include "disperse/grid.hpp"

namespace disperse {

/// Weight parameters: e^{gamma |x|^{p_dec}} with p_dec = 2m/(2m-1).
struct WeightParams {
    int m = 1;
    double gamma = 0.0;
    double p_dec = 2.0;
};

WeightParams make_weight(int m, double gamma);

/// || e^{gamma |x|^{p_dec}} u ||_2, accumulated in log space with a max
/// shift. Returns +inf when the squared norm would exceed half the largest
/// finite double.
double weighted_norm(const Field1D& u, const WeightParams& w);

/// log of the squared weighted norm; -inf for the zero field, +inf on
/// overflow. Used by the convexity check so tiny/huge energies stay exact.
double weighted_log_sq_norm(const Field1D& u, const WeightParams& w);

/// Theta_{A,B}(gamma) = gamma / (1 + N2 A (1+A^{-2}B^2)^m gamma^{2m-1})^{1/(2m-1)}
double theta(double A, double B, double gamma, int m, double N2);

struct TransferReport {
    double ratio = 0.0;      // LHS / RHS with N1 = 1
    double n2 = 0.0;         // the N2 used (fitted when not supplied)
    double theta_val = 0.0;
};

/// Checks the weighted smoothing transfer through the free analytic flow
/// e^{-(A+iB) D^{2m}}: the Theta-weighted norm of the evolved field against
/// (1+A^{-2}B^2)^{1/2} times the gamma-weighted norm of f. When N2 is absent
/// the smallest value on a log grid giving a finite ratio is fitted.
TransferReport smoothing_weight_transfer_check(const Field1D& f, double gamma, int m,
                                               double A, double B,
                                               std::optional<double> N2 = std::nullopt);

struct SubordinationReport {
    std::vector<double> x_samples;
    std::vector<double> ratios;   // integral / e^{|x|^p / p}
    double band_width = 0.0;      // max ratio / min ratio
};

/// Quadrature check of the two-sided comparison between e^{|x|^p/p} and the
/// Laplace-type integral of e^{lambda x - |lambda|^q/q} |lambda|^{(q-2)/2},
/// 1/p + 1/q = 1. Throws NumericalError if the quadrature refinement
/// estimate exceeds 1e-6 relative.
SubordinationReport subordination_check(double p_dec, const std::vector<double>& x_samples);

struct ConvexityReport {
    std::vector<double> times;
    std::vector<double> log_weighted_energy;   // log H(t), may hold -inf
    double v_inf = 0.0;
    double max_violation = 0.0;   // positive part of the worst concave second difference of G
    double fitted_logC = 0.0;     // excess of G over its endpoint chord
};

/// Log-convexity diagnostics for G(t) = log H(t) - t(1-t) v_inf^2 / 2 along
/// a trajectory sampled at spacing dt on [0,1].
ConvexityReport convexity_check(const std::vector<Field1D>& trajectory, double dt,
                                const WeightParams& w, double v_inf);

} // namespace disperse

#pragma once

#include <functional>
#include <vector>

#include "disperse/grid.hpp"

namespace disperse {

/// Q(x) = a x + (b/2) x^2 + c
struct QuadraticWeight {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Relative defect |LHS - RHS| / max(LHS, RHS) of the quadratic-weight
/// commutation identity for the constant-coefficient operator with real
/// coefficients P_coeffs (ascending order). u must vanish near the grid
/// boundary. Both sides are evaluated with a common exponential shift so
/// large weights stay representable.
double treves_check(const Field1D& u, const QuadraticWeight& Q,
                    const std::vector<double>& P_coeffs);

/// Weight geometry for the two-sided Carleman quotient:
/// Q(t,x) = 2 gamma R^{p} (x/R + phi(t))^2 with p = 2m/(2m-1), supported on
/// the annulus d1 <= |x/R + phi(t)| <= d2.
struct CarlemanWeight {
    double R = 8.0;
    int m = 1;
    double d1 = 0.25;
    double d2 = 3.25;
    std::function<double(double)> phi = [](double t) {
        return -4.0 * (t - 0.5) * (t - 0.5) + 2.25;
    };
};

struct CarlemanReport {
    std::vector<double> gammas;
    std::vector<double> ratios;
    double min_ratio = 0.0;
    bool skipped = false;   // true for the zero test function
};

/// For each gamma computes
///   ratio = [ int e^Q |D_t u + D_x^{2m} u|^2 ] / [ gamma^{4m-1} R^p int e^Q |u|^2 ]
/// over the annulus, with log-shifted accumulation. u must be supported
/// strictly inside (0,1) in time and inside the annulus in space.
CarlemanReport carleman_l2_check(const Field2D& u, const CarlemanWeight& w,
                                 const std::vector<double>& gamma_list);

} // namespace disperse

#pragma once

#include "disperse/grid.hpp"

namespace disperse {

/// Parameters of the analytic semigroup e^{-z D^{2m}}; requires Re z > 0.
struct SemigroupParams {
    int m = 1;
    complex_t z{1.0, 0.0};
};

/// Result of fitting |K(x)| ~ prefactor * exp(-coefficient * x^exponent)
/// over [window_lo, window_hi].
struct DecayFit {
    double exponent = 0.0;
    double coefficient = 0.0;
    double prefactor = 0.0;
    double r_squared = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

/// Kernel K(z,x), the inverse transform of e^{-z xi^{2m}}.
/// Throws DomainError for Re z <= 0, ResolutionError when the symbol at the
/// grid's top frequency exceeds 1e-14 (aliasing would pollute the far field).
Field1D kernel(const SemigroupParams& params, const Grid1D& grid);

/// Stretched-exponential fit of |K| over x in (window_lo, window_hi).
/// Samples with |K| <= 1e-13 are excluded; a robust refit drops points
/// sitting in oscillation dips before the final exponent is read off.
DecayFit fit_decay(const Field1D& K, double window_lo, double window_hi);

/// The explicit solution K(1+it, x) of the free equation.
Field1D sharpness_solution(double t, int m, const Grid1D& grid);

} // namespace disperse

#pragma once

#include <optional>
#include <vector>

#include "disperse/grid.hpp"

namespace disperse {

/// u(t) = e^{-it D^{2m}} u0, exact on the discrete frequency lattice.
Field1D free_propagate(const Field1D& u0, double t, int m);

/// u_eps(t) = e^{-(eps+it)(D^{2m}+V)} u0 for eps > 0. With no potential this
/// is a single spectral multiplication; with V it is Strang splitting with
/// the complex time partitioned evenly across `steps` substeps.
Field1D analytic_propagate(const Field1D& u0, double eps, double t, int m,
                           const std::optional<Field1D>& V = std::nullopt,
                           std::size_t steps = 64);

/// Strang-splitting trajectory of i u' = D^{2m}u + Vu at times 0, dt, ..,
/// t_final. V must be real valued and dt must divide t_final.
std::vector<Field1D> potential_propagate(const Field1D& u0, double t_final, double dt,
                                         int m, const Field1D& V);

/// Max over interior frames of the discrete PDE defect
///   || i (u_{k+1}-u_{k-1})/(2 dt) - D^{2m} u_k - V u_k ||_2
/// with the derivative applied spectrally. V may be omitted (free equation).
double residual(const std::vector<Field1D>& trajectory, double dt, int m,
                const std::optional<Field1D>& V = std::nullopt);

} // namespace disperse

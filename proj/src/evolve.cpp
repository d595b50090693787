#include "disperse/evolve.hpp"

#include <cmath>
#include <string>

namespace disperse {

namespace {

double pow_int(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

void require_real(const Field1D& V, const char* who) {
    for (const auto& z : V.v)
        if (z.imag() != 0.0)
            throw ArgumentError(std::string(who) + ": potential must be real valued");
}

// spectral factor e^{-z xi^{2m}} applied in place on physical samples
Field1D kinetic_factor(const Field1D& u, complex_t z, int m) {
    Field1D F = dft_forward(u);
    for (std::size_t i = 0; i < F.grid.n; ++i)
        F.v[i] *= std::exp(-z * pow_int(F.grid.freqs[i], 2 * m));
    return dft_inverse(F);
}

} // namespace

Field1D free_propagate(const Field1D& u0, double t, int m) {
    if (m < 1) throw ArgumentError("free_propagate: m must be >= 1");
    return kinetic_factor(u0, complex_t{0.0, t}, m);
}

Field1D analytic_propagate(const Field1D& u0, double eps, double t, int m,
                           const std::optional<Field1D>& V, std::size_t steps) {
    if (!(eps > 0.0)) throw DomainError("analytic_propagate: eps must be positive");
    if (m < 1) throw ArgumentError("analytic_propagate: m must be >= 1");
    const complex_t z{eps, t};
    if (!V) return kinetic_factor(u0, z, m);

    require_real(*V, "analytic_propagate");
    if (!u0.grid.same_as(V->grid))
        throw ArgumentError("analytic_propagate: u0 and V live on different grids");
    if (steps == 0) throw ArgumentError("analytic_propagate: steps must be positive");

    const complex_t dz = z / static_cast<double>(steps);
    Field1D u = u0;
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t i = 0; i < u.grid.n; ++i)
            u.v[i] *= std::exp(-0.5 * dz * V->v[i].real());
        u = kinetic_factor(u, dz, m);
        for (std::size_t i = 0; i < u.grid.n; ++i)
            u.v[i] *= std::exp(-0.5 * dz * V->v[i].real());
    }
    check_finite(u, "analytic_propagate");
    return u;
}

std::vector<Field1D> potential_propagate(const Field1D& u0, double t_final, double dt,
                                         int m, const Field1D& V) {
    if (!(dt > 0.0)) throw ArgumentError("potential_propagate: dt must be positive");
    if (m < 1) throw ArgumentError("potential_propagate: m must be >= 1");
    require_real(V, "potential_propagate");
    if (!u0.grid.same_as(V.grid))
        throw ArgumentError("potential_propagate: u0 and V live on different grids");
    const double ratio = t_final / dt;
    const double nsteps_d = std::round(ratio);
    if (std::abs(ratio - nsteps_d) > 1e-12 * std::max(1.0, std::abs(ratio)) || nsteps_d < 1.0)
        throw ArgumentError("potential_propagate: dt must divide t_final");
    const std::size_t nsteps = static_cast<std::size_t>(nsteps_d);

    // precompute the two Strang factors, both unimodular
    std::vector<complex_t> half_pot(u0.grid.n), kin(u0.grid.n);
    for (std::size_t i = 0; i < u0.grid.n; ++i) {
        half_pot[i] = std::exp(complex_t{0.0, -0.5 * dt * V.v[i].real()});
        kin[i] = std::exp(complex_t{0.0, -dt * pow_int(u0.grid.freqs[i], 2 * m)});
    }

    std::vector<Field1D> traj;
    traj.reserve(nsteps + 1);
    traj.push_back(u0);
    Field1D u = u0;
    for (std::size_t k = 0; k < nsteps; ++k) {
        for (std::size_t i = 0; i < u.grid.n; ++i) u.v[i] *= half_pot[i];
        Field1D F = dft_forward(u);
        for (std::size_t i = 0; i < u.grid.n; ++i) F.v[i] *= kin[i];
        u = dft_inverse(F);
        for (std::size_t i = 0; i < u.grid.n; ++i) u.v[i] *= half_pot[i];
        traj.push_back(u);
    }
    return traj;
}

double residual(const std::vector<Field1D>& trajectory, double dt, int m,
                const std::optional<Field1D>& V) {
    if (trajectory.size() < 3)
        throw ArgumentError("residual: need at least 3 frames");
    if (!(dt > 0.0)) throw ArgumentError("residual: dt must be positive");
    if (V) require_real(*V, "residual");

    double worst = 0.0;
    const complex_t i_unit{0.0, 1.0};
    for (std::size_t k = 1; k + 1 < trajectory.size(); ++k) {
        const Field1D& um = trajectory[k - 1];
        const Field1D& uc = trajectory[k];
        const Field1D& up = trajectory[k + 1];
        Field1D F = dft_forward(uc);
        for (std::size_t j = 0; j < F.grid.n; ++j)
            F.v[j] *= pow_int(F.grid.freqs[j], 2 * m);
        Field1D d2m = dft_inverse(F);
        Field1D r = zero_field(uc.grid);
        for (std::size_t j = 0; j < r.grid.n; ++j) {
            complex_t val = i_unit * (up.v[j] - um.v[j]) / (2.0 * dt) - d2m.v[j];
            if (V) val -= V->v[j].real() * uc.v[j];
            r.v[j] = val;
        }
        worst = std::max(worst, lp_norm(r, 2.0));
    }
    return worst;
}

} // namespace disperse

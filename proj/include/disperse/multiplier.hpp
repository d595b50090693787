#pragma once

#include <vector>

#include "disperse/grid.hpp"

namespace disperse {

/// (xi + i)^{2m} + ib split into real polynomials P + i Q_b, plus the
/// Lebesgue pair p = (4m+2)/(4m+1), p' = 4m+2. Coefficients ascending.
struct MultiplierParams {
    int m = 1;
    double b = 0.0;
    double p_leb = 0.0;
    double pprime_leb = 0.0;
    std::vector<double> P_coeffs;
    std::vector<double> Qb_coeffs;
};

MultiplierParams pq_split(int m, double b);

double eval_poly(const std::vector<double>& coeffs, double x);
complex_t eval_poly(const std::vector<double>& coeffs, complex_t x);

/// coefficients of p(x0 + y) in y (exact Taylor shift)
std::vector<double> poly_shift(const std::vector<double>& coeffs, double x0);

struct CutoffDescriptor {
    enum class Kind { center, plus_k, minus_k, center_nu } kind = Kind::center;
    int k = 0;    // dyadic index for plus_k / minus_k
    int nu = 0;   // interior index for center_nu
    double lo = 0.0;
    double hi = 0.0;          // interval (lo, hi]
    bool degenerate = false;  // identically zero piece

    bool contains(double xi) const { return !degenerate && xi > lo && xi <= hi; }
};

struct RootDecomposition {
    std::vector<complex_t> roots;     // 2m-1 roots of Q_b
    std::vector<double> a_sorted;     // nondecreasing real parts
    CutoffDescriptor center;
    std::vector<CutoffDescriptor> plus;       // k = 1 .. k_max
    std::vector<CutoffDescriptor> minus;      // k = 1 .. k_max
    std::vector<CutoffDescriptor> interior;   // nu = 1 .. 2m-1, partition of center
};

/// Companion-matrix roots of Q_b with residual check, and the dyadic cutoff
/// intervals they anchor.
RootDecomposition qb_roots(const MultiplierParams& params, int k_max = 40);

/// How many of the top-level cutoffs (center, plus_k, minus_k) contain xi.
int partition_count(const RootDecomposition& rd, double xi);
/// Same for the interior refinement of the center piece.
int interior_partition_count(const RootDecomposition& rd, double xi);

/// C^2 bump supported in (1/2, 5/2), identically 1 on [1, 2]; the smooth
/// relative of the sharp dyadic cutoffs.
double phi_plus(double s);

/// Anchored modulation/shear frame: members live on an envelope grid around
/// the physical anchor frequency (tau0 + tau' - shear*xi', xi0 + xi'). The
/// modulation and the shear both preserve every L^r norm, so ratios computed
/// in the envelope equal ratios of the corresponding physical fields.
struct AnchoredFrame {
    double xi0 = 0.0;
    double tau_off = 0.0;   // residual tau offset after cancelling -P(xi0)
    bool shear = true;      // remove the linear part P'(xi0) xi'
    double sigma = 1.0;     // adapted xi scale
    double T = 1.0;         // adapted tau scale
    Grid2D grid;
};

/// Frame anchored at the root of Q_b with least |Im|, scale-adapted so the
/// denominator's variation is resolved on an n x n grid.
AnchoredFrame anchored_frame(const MultiplierParams& params, std::size_t n);

/// Deterministic 8-member test ensemble on the given envelope grid:
/// 3 Gaussians, 2 chirps, 3 modulated bumps, mildly jittered by seed.
/// real_even = true restricts to real members even in t (used for the
/// conjugate-symmetry checks of the frozen resolvent).
std::vector<Field2D> standard_ensemble(const Grid2D& grid, unsigned seed,
                                       bool real_even = false);

/// Multiply f by M_b = 1/(tau + P(xi) + i Q_b(xi)) in frequency, optionally
/// restricted by a sharp cutoff in xi. With a frame the multiplier is
/// evaluated at the mapped physical frequencies. Throws SingularityError if
/// the denominator drops below 1e-8 anywhere the cutoff is active.
Field2D apply_Mb(const Field2D& f, const MultiplierParams& params,
                 const CutoffDescriptor* cutoff = nullptr,
                 const AnchoredFrame* frame = nullptr);

/// Max over the ensemble of |apply_Mb(f)|_{p'} / |chi(D_x) f|_p (full f when
/// no cutoff); an empirical lower bound for the operator norm.
double empirical_pq_norm(const MultiplierParams& params,
                         const std::vector<Field2D>& ensemble,
                         const CutoffDescriptor* cutoff = nullptr,
                         const AnchoredFrame* frame = nullptr);

/// Empirical L^p -> L^{p'} ratio for the resolvent multiplier
/// 1/(tau + P(xi) + z), Im z != 0, on a |Im z|-scale-adapted grid with the
/// seeded real ensemble. Re z is removed exactly by modulation.
double frozen_resolvent_norm(int m, complex_t z, unsigned seed, std::size_t n = 256);

struct VdcReport {
    std::vector<double> s_values;
    std::vector<double> magnitudes;
    double slope = 0.0;
};

/// |I(s)| = |int e^{-i s xi^{2m} + i x xi} dxi| by smoothly truncated
/// quadrature, with the fitted log-log slope (model phase xi^{2m}).
VdcReport vdc_decay(int m, double x, const std::vector<double>& s_list);

/// Max over the 1-D ensemble of |e^{-i s D^{2m}} f|_{p'} / |f|_p.
double dispersive_norm(double s, int m, const std::vector<Field1D>& ensemble);

struct SlopeReport {
    std::vector<double> s_values;
    std::vector<double> ratios;
    double slope = 0.0;
};

/// Envelope of dispersive ratios over a dilated Gaussian family (widths
/// tied to each s so the envelope tracks the operator norm), with slope.
SlopeReport dispersive_slope(int m, const std::vector<double>& s_list, unsigned seed);

} // namespace disperse

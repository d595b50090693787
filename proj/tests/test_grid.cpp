#include <doctest.h>

#include <cmath>
#include <numbers>

#include "disperse/grid.hpp"

using namespace disperse;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("make_grid lattice layout") {
    const Grid1D g = make_grid(kPi, 8);
    CHECK(g.dx == doctest::Approx(kPi / 4.0));
    REQUIRE(g.freqs.size() == 8);
    for (int j = 0; j < 8; ++j) CHECK(g.freqs[j] == doctest::Approx(j - 4).epsilon(1e-15));

    const Grid1D h = make_grid(1.0, 8);
    double top = 0.0;
    for (double f : h.freqs) top = std::max(top, std::abs(f));
    CHECK(top == doctest::Approx(4.0 * kPi));
    CHECK(h.dx * static_cast<double>(h.n) == doctest::Approx(2.0 * h.half_width));
}

TEST_CASE("make_grid rejects bad construction") {
    CHECK_THROWS_AS(make_grid(0.0, 8), ArgumentError);
    CHECK_THROWS_AS(make_grid(-1.0, 8), ArgumentError);
    CHECK_THROWS_AS(make_grid(1.0, 12), ArgumentError);
    CHECK_THROWS_AS(make_grid(1.0, 4), ArgumentError);
}

TEST_CASE("forward transform of a Gaussian matches the closed form") {
    const Grid1D g = make_grid(20.0, 1024);
    const Field1D f = make_field(g, [](double x) -> complex_t {
        return std::exp(-0.5 * x * x);
    });
    const Field1D F = dft_forward(f);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double xi = g.freqs[j];
        if (std::abs(xi) > 5.0) continue;
        const double expect = std::sqrt(2.0 * kPi) * std::exp(-0.5 * xi * xi);
        CHECK(std::abs(F.v[j] - expect) < 1e-10);
    }
}

TEST_CASE("zero fields transform to zero") {
    const Grid1D g = make_grid(10.0, 64);
    const Field1D z = zero_field(g);
    for (const auto& c : dft_forward(z).v) CHECK(std::abs(c) == 0.0);
    for (const auto& c : dft_inverse(z).v) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("round trip is the identity") {
    const Grid1D g = make_grid(15.0, 512);
    const Field1D f = make_field(g, [](double x) -> complex_t {
        return std::exp(-x * x / 9.0) * complex_t{std::cos(2.0 * x), std::sin(0.7 * x)};
    });
    const Field1D back = dft_inverse(dft_forward(f));
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        worst = std::max(worst, std::abs(back.v[i] - f.v[i]));
        scale = std::max(scale, std::abs(f.v[i]));
    }
    CHECK(worst < 1e-12 * scale);
}

TEST_CASE("inverse transform of a frequency box is a sinc") {
    const Grid1D g = make_grid(200.0, 1u << 16);
    Field1D F = zero_field(g);
    for (std::size_t j = 0; j < g.n; ++j)
        if (std::abs(g.freqs[j]) <= 1.0) F.v[j] = 1.0;
    const Field1D f = dft_inverse(F);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.point(i);
        if (std::abs(x) > 5.0 || std::abs(x) < 1e-9) continue;
        // the sharp box edge limits the lattice quadrature to O(dfreq)
        CHECK(std::abs(f.v[i] - std::sin(x) / (kPi * x)) < 1e-3);
    }
}

TEST_CASE("lp_norm basics") {
    const Grid1D g = make_grid(1.0, 256);
    const Field1D one = make_field(g, [](double) -> complex_t { return 1.0; });
    CHECK(lp_norm(one, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(lp_norm(one, kInfNorm) == doctest::Approx(1.0));
    CHECK_THROWS_AS(lp_norm(one, 0.5), ArgumentError);

    const Field1D f = make_field(g, [](double x) -> complex_t {
        return complex_t{x, -x * x};
    });
    Field1D cf = f;
    for (auto& c : cf.v) c *= complex_t{-3.0, 4.0};
    CHECK(lp_norm(cf, 3.0) == doctest::Approx(5.0 * lp_norm(f, 3.0)).epsilon(1e-13));
}

TEST_CASE("lp_norm is monotone in pointwise magnitude") {
    const Grid1D g = make_grid(5.0, 128);
    const Field1D f = make_field(g, [](double x) -> complex_t {
        return 0.5 * std::exp(-x * x);
    });
    const Field1D h = make_field(g, [](double x) -> complex_t {
        return std::exp(-0.5 * x * x);
    });
    for (double p : {1.0, 2.0, 6.0, kInfNorm}) CHECK(lp_norm(f, p) <= lp_norm(h, p));
}

TEST_CASE("Plancherel identity under the chosen scaling") {
    const Grid1D g = make_grid(25.0, 2048);
    const Field1D f = make_field(g, [](double x) -> complex_t {
        return std::exp(-x * x / 4.0) * complex_t{1.0, 0.3 * std::sin(x)};
    });
    const double lhs = lp_norm(f, 2.0);
    // lp_norm always weighs cells by the grid's dx, so the frequency-side
    // sum has to be remeasured with the lattice spacing dfreq
    const double rhs = lp_norm(dft_forward(f), 2.0) *
                       std::sqrt(g.dfreq() / g.dx / (2.0 * kPi));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("2-D transforms round trip with tensor scaling") {
    Grid2D g;
    g.t_axis = make_grid(1.0, 32);
    g.x_axis = make_grid(8.0, 64);
    const Field2D f = make_field(g, [](double t, double x) -> complex_t {
        return std::exp(-4.0 * t * t - x * x / 4.0) * complex_t{1.0, t * x};
    });
    const Field2D back = dft_inverse(dft_forward(f));
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        worst = std::max(worst, std::abs(back.v[i] - f.v[i]));
        scale = std::max(scale, std::abs(f.v[i]));
    }
    CHECK(worst < 1e-12 * scale);

    // Plancherel in two dimensions picks up one (2 pi) and one cell
    // remeasure per axis
    const double lhs = lp_norm(f, 2.0);
    const double cells = (g.t_axis.dfreq() / g.t_axis.dx) *
                         (g.x_axis.dfreq() / g.x_axis.dx);
    const double rhs = lp_norm(dft_forward(f), 2.0) * std::sqrt(cells) / (2.0 * kPi);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("transforms are deterministic") {
    const Grid1D g = make_grid(12.0, 256);
    const Field1D f = make_field(g, [](double x) -> complex_t {
        return std::exp(-x * x) * std::cos(3.0 * x);
    });
    const Field1D a = dft_forward(f);
    const Field1D b = dft_forward(f);
    for (std::size_t i = 0; i < g.n; ++i) {
        CHECK(a.v[i].real() == b.v[i].real());
        CHECK(a.v[i].imag() == b.v[i].imag());
    }
}

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "disperse/carleman.hpp"
#include "disperse/evolve.hpp"
#include "disperse/experiments.hpp"
#include "disperse/grid.hpp"
#include "disperse/multiplier.hpp"
#include "disperse/semigroup.hpp"
#include "disperse/weighted.hpp"

namespace py = pybind11;
using namespace disperse;

namespace {

Field1D field_from_numpy(const Grid1D& g, py::array_t<std::complex<double>> arr) {
    auto buf = arr.request();
    if (buf.ndim != 1 || static_cast<std::size_t>(buf.shape[0]) != g.n)
        throw ArgumentError("samples must be a 1-D array matching the grid size");
    Field1D f = zero_field(g);
    const auto* src = static_cast<const std::complex<double>*>(buf.ptr);
    std::copy(src, src + g.n, f.v.begin());
    return f;
}

py::array_t<std::complex<double>> to_numpy(const Field1D& f) {
    py::array_t<std::complex<double>> out(f.grid.n);
    std::copy(f.v.begin(), f.v.end(), static_cast<std::complex<double>*>(out.request().ptr));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "pseudospectral verification kernels for a 1-D higher-order "
                "dispersive model";

    py::register_exception<ArgumentError>(mod, "ArgumentError", PyExc_ValueError);
    py::register_exception<NumericalError>(mod, "NumericalError", PyExc_ArithmeticError);

    py::class_<Grid1D>(mod, "Grid1D")
        .def_readonly("half_width", &Grid1D::half_width)
        .def_readonly("n", &Grid1D::n)
        .def_readonly("dx", &Grid1D::dx)
        .def_readonly("freqs", &Grid1D::freqs)
        .def("point", &Grid1D::point);

    mod.def("make_grid", &make_grid, py::arg("half_width"), py::arg("n"));

    mod.def("points", [](const Grid1D& g) {
        py::array_t<double> out(g.n);
        auto* dst = static_cast<double*>(out.request().ptr);
        for (std::size_t i = 0; i < g.n; ++i) dst[i] = g.point(i);
        return out;
    });

    mod.def("dft_forward", [](const Grid1D& g, py::array_t<std::complex<double>> a) {
        return to_numpy(dft_forward(field_from_numpy(g, a)));
    });
    mod.def("dft_inverse", [](const Grid1D& g, py::array_t<std::complex<double>> a) {
        return to_numpy(dft_inverse(field_from_numpy(g, a)));
    });
    mod.def("lp_norm", [](const Grid1D& g, py::array_t<std::complex<double>> a, double p) {
        return lp_norm(field_from_numpy(g, a), p);
    });

    mod.def("kernel", [](int m, std::complex<double> z, const Grid1D& g) {
        SemigroupParams sp;
        sp.m = m;
        sp.z = z;
        return to_numpy(kernel(sp, g));
    });

    py::class_<DecayFit>(mod, "DecayFit")
        .def_readonly("exponent", &DecayFit::exponent)
        .def_readonly("coefficient", &DecayFit::coefficient)
        .def_readonly("prefactor", &DecayFit::prefactor)
        .def_readonly("r_squared", &DecayFit::r_squared);

    mod.def("fit_decay", [](const Grid1D& g, py::array_t<std::complex<double>> a,
                            double lo, double hi) {
        return fit_decay(field_from_numpy(g, a), lo, hi);
    });

    mod.def("free_propagate", [](const Grid1D& g, py::array_t<std::complex<double>> a,
                                 double t, int m) {
        return to_numpy(free_propagate(field_from_numpy(g, a), t, m));
    });

    mod.def("weighted_norm", [](const Grid1D& g, py::array_t<std::complex<double>> a,
                                int m, double gamma) {
        return weighted_norm(field_from_numpy(g, a), make_weight(m, gamma));
    });

    mod.def("theta", &theta, py::arg("A"), py::arg("B"), py::arg("gamma"), py::arg("m"),
            py::arg("N2"));

    mod.def("pq_split", [](int m, double b) {
        const MultiplierParams p = pq_split(m, b);
        return py::make_tuple(p.P_coeffs, p.Qb_coeffs, p.p_leb, p.pprime_leb);
    });

    mod.def("qb_roots", [](int m, double b) {
        const RootDecomposition rd = qb_roots(pq_split(m, b));
        return py::make_tuple(rd.roots, rd.a_sorted);
    });

    mod.def("vdc_decay", [](int m, double x, const std::vector<double>& s_list) {
        const VdcReport rep = vdc_decay(m, x, s_list);
        return py::make_tuple(rep.magnitudes, rep.slope);
    });

    mod.def("dispersive_slope", [](int m, const std::vector<double>& s_list, unsigned seed) {
        const SlopeReport rep = dispersive_slope(m, s_list, seed);
        return py::make_tuple(rep.ratios, rep.slope);
    });

    mod.def("run_experiment", [](const std::string& config_json) {
        return run_experiment(nlohmann::json::parse(config_json)).dump();
    });
}

#include "disperse/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "disperse/carleman.hpp"
#include "disperse/evolve.hpp"
#include "disperse/grid.hpp"
#include "disperse/multiplier.hpp"
#include "disperse/semigroup.hpp"
#include "disperse/weighted.hpp"

namespace disperse {

using nlohmann::json;

namespace {

const json& need(const json& cfg, const std::string& key) {
    if (!cfg.contains(key))
        throw ArgumentError("missing required config key: " + key);
    return cfg.at(key);
}

Grid1D grid_from(const json& g) {
    return make_grid(need(g, "half_width").get<double>(), need(g, "n").get<std::size_t>());
}

// smooth compactly supported bump, = e^{-1/(1-y^2)} inside (-1,1)
double bump(double y) {
    if (std::abs(y) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - y * y));
}

// finitely smooth test function for discretization-order checks
complex_t bump7(double x) {
    const double y = x / 3.0;
    if (std::abs(y) >= 1.0) return 0.0;
    return std::pow(1.0 - y * y, 7) * std::cos(3.0 * x);
}

json exp_kernel_decay(const json& cfg) {
    const int m = need(cfg, "m").get<int>();
    const Grid1D grid = grid_from(need(cfg, "grid"));
    const auto window = need(cfg, "window");
    const double tol = cfg.value("tolerance", 0.05);
    SemigroupParams sp;
    sp.m = m;
    sp.z = complex_t{cfg.value("re_z", 1.0), cfg.value("im_z", 0.0)};
    const Field1D K = kernel(sp, grid);
    const DecayFit fit = fit_decay(K, window.at(0).get<double>(), window.at(1).get<double>());
    const double expected = 2.0 * m / (2.0 * m - 1.0);
    json res;
    res["exponent"] = fit.exponent;
    res["coefficient"] = fit.coefficient;
    res["prefactor"] = fit.prefactor;
    res["r_squared"] = fit.r_squared;
    res["expected_exponent"] = expected;
    res["pass"] = std::abs(fit.exponent - expected) <= tol * expected;
    res["tolerance"] = tol;
    return res;
}

json exp_sharpness(const json& cfg) {
    const int m = need(cfg, "m").get<int>();
    const Grid1D grid = grid_from(need(cfg, "grid"));
    const double dt = cfg.value("dt", 1e-3);
    const double t0 = cfg.value("t0", 0.0);
    const double tol = cfg.value("tolerance", 1e-4);
    std::vector<Field1D> frames;
    for (int k = 0; k < 3; ++k) frames.push_back(sharpness_solution(t0 + k * dt, m, grid));
    const double r = residual(frames, dt, m);
    json res;
    res["residual"] = r;
    res["pass"] = r <= tol;
    res["tolerance"] = tol;
    return res;
}

json exp_convexity(const json& cfg) {
    const int m = need(cfg, "m").get<int>();
    const double gamma = need(cfg, "gamma").get<double>();
    const double dt = need(cfg, "dt").get<double>();
    const Grid1D grid = grid_from(need(cfg, "grid"));
    const double v_amp = cfg.value("v_amp", 0.0);
    const std::string u0_kind = cfg.value("u0", std::string("gauss"));
    const double tol = cfg.value("tolerance", 0.05);

    std::vector<Field1D> traj;
    if (cfg.value("closed_form", false)) {
        // exact free Gaussian trajectory; spectral stepping would leave a
        // round-off tail that the growing weight amplifies
        if (m != 1 || v_amp != 0.0 || u0_kind != "gauss")
            throw ArgumentError("convexity: closed_form needs m=1, v_amp=0, u0=gauss");
        const auto steps = static_cast<std::size_t>(std::lround(1.0 / dt));
        for (std::size_t k = 0; k <= steps; ++k) {
            const complex_t denom{1.0, 4.0 * dt * static_cast<double>(k)};
            traj.push_back(make_field(grid, [&](double x) -> complex_t {
                return std::exp(-x * x / denom) / std::sqrt(denom);
            }));
        }
    } else {
        Field1D u0 = make_field(grid, [&](double x) -> complex_t {
            if (u0_kind == "quartic") return std::exp(-std::pow(x, 4) / 8.0);
            return std::exp(-x * x);
        });
        Field1D V = make_field(grid, [&](double x) -> complex_t {
            return v_amp * std::exp(-x * x);
        });
        traj = potential_propagate(u0, 1.0, dt, m, V);
    }
    const WeightParams w = make_weight(m, gamma);
    const ConvexityReport rep = convexity_check(traj, dt, w, std::abs(v_amp));
    json res;
    res["fitted_logC"] = rep.fitted_logC;
    res["max_violation"] = rep.max_violation;
    res["pass"] = rep.fitted_logC <= tol;
    res["tolerance"] = tol;
    return res;
}

json exp_subordination(const json& cfg) {
    double p_dec;
    if (cfg.contains("p_dec"))
        p_dec = cfg.at("p_dec").get<double>();
    else {
        const int m = need(cfg, "m").get<int>();
        p_dec = 2.0 * m / (2.0 * m - 1.0);
    }
    std::vector<double> xs;
    if (cfg.contains("x_samples"))
        xs = cfg.at("x_samples").get<std::vector<double>>();
    else
        for (int i = 0; i <= 8; ++i) xs.push_back(static_cast<double>(i));
    const double tol = cfg.value("tolerance", 3.0);
    const SubordinationReport rep = subordination_check(p_dec, xs);
    json res;
    res["band_width"] = rep.band_width;
    res["ratios"] = rep.ratios;
    res["pass"] = rep.band_width <= tol;
    res["tolerance"] = tol;
    return res;
}

json exp_theta_transfer(const json& cfg) {
    const int m = need(cfg, "m").get<int>();
    const double gamma = need(cfg, "gamma").get<double>();
    const Grid1D grid = grid_from(need(cfg, "grid"));
    const std::vector<double> As = need(cfg, "A_list").get<std::vector<double>>();
    const std::vector<double> Bs = need(cfg, "B_list").get<std::vector<double>>();
    const double tol = cfg.value("tolerance", 100.0);

    Field1D f = make_field(grid, [&](double x) -> complex_t {
        if (m >= 2) return std::exp(-std::pow(x, 4) / 8.0);
        return std::exp(-x * x);
    });
    // fit a single N2 against the whole sweep: escalate until one value
    // keeps every corner finite and the ratios within the uniformity band.
    // A single-corner fit undershoots because truncation to a finite box
    // hides the divergence that a too-small N2 causes at the other corners.
    double best_n2 = 0.0, best_lo = 0.0, best_hi = 0.0;
    double best_unif = std::numeric_limits<double>::infinity();
    for (double n2 = 1e-2; n2 <= 1e4 * 1.001; n2 *= std::sqrt(10.0)) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        bool ok = true;
        for (double A : As)
            for (double B : Bs) {
                const TransferReport r =
                    smoothing_weight_transfer_check(f, gamma, m, A, B, n2);
                if (!std::isfinite(r.ratio) || r.ratio <= 0.0) { ok = false; break; }
                lo = std::min(lo, r.ratio);
                hi = std::max(hi, r.ratio);
            }
        if (!ok) continue;
        if (hi / lo < best_unif) {
            best_unif = hi / lo;
            best_n2 = n2;
            best_lo = lo;
            best_hi = hi;
        }
        if (hi / lo <= tol) break;
    }
    if (best_n2 == 0.0)
        throw NumericalError("theta-transfer: no N2 keeps the sweep finite");
    json res;
    res["n2"] = best_n2;
    res["max_ratio"] = best_hi;
    res["min_ratio"] = best_lo;
    res["uniformity"] = best_unif;
    res["pass"] = best_unif <= tol;
    res["tolerance"] = tol;
    return res;
}

json exp_treves(const json& cfg) {
    const Grid1D grid = grid_from(need(cfg, "grid"));
    const auto qj = need(cfg, "Q");
    QuadraticWeight Q{need(qj, "a").get<double>(), need(qj, "b").get<double>(),
                      qj.value("c", 0.0)};
    const std::vector<double> P = need(cfg, "P_coeffs").get<std::vector<double>>();
    const std::string ukind = cfg.value("u", std::string("bump"));
    const double bump_power = cfg.value("bump_power", 2.0);
    const double tol = cfg.value("tolerance", 1e-6);

    auto build = [&](const Grid1D& g) {
        return make_field(g, [&](double x) -> complex_t {
            if (ukind == "gauss") return std::exp(-x * x);
            // finitely smooth bump: the spectral tail dominates the defect,
            // so doubling n shrinks it at a measurable rate instead of
            // leaving it at round-off
            const double y = x / 3.0;
            const double core = 1.0 - y * y;
            if (core <= 0.0) return 0.0;
            return std::pow(core, bump_power) * std::cos(3.0 * x);
        });
    };
    const double defect = treves_check(build(grid), Q, P);
    const Grid1D fine = make_grid(grid.half_width, grid.n * 2);
    const double defect_fine = treves_check(build(fine), Q, P);
    json res;
    res["defect"] = defect;
    res["defect_refined"] = defect_fine;
    res["shrink"] = defect_fine > 0.0 ? defect / defect_fine : 1e9;
    res["pass"] = defect <= tol && defect >= 4.0 * defect_fine;
    res["tolerance"] = tol;
    return res;
}

json exp_carleman_l2(const json& cfg) {
    const int m = need(cfg, "m").get<int>();
    const std::vector<double> gammas = need(cfg, "gamma_list").get<std::vector<double>>();
    const double p = 2.0 * m / (2.0 * m - 1.0);
    const double R = cfg.value("R", m == 1 ? 2.2 : 3.0);
    const std::size_t nt = cfg.value("nt", std::size_t{256});
    const std::size_t nx = cfg.value("nx", std::size_t{8192});
    const double s0 = cfg.value("s0", 1.5);
    const double floor = cfg.value("floor", 0.0);
    const double tol = cfg.value("tolerance", 10.0);

    CarlemanWeight w;
    w.R = R;
    w.m = m;
    Grid2D grid;
    grid.t_axis = make_grid(1.0, nt);
    grid.x_axis = make_grid(2.0 * R, nx);
    const double t0 = 0.5;           // phi'(t0) = 0, no time modulation needed
    const double x0 = R * (s0 - w.phi(t0));

    // Near-extremal family, one packet per gamma. After conjugating by the
    // weight the spatial symbol is (xi + i beta)^{2m} with beta the gradient
    // of Q/2 at the packet center; the modulation xi0 sits on the ray where
    // that symbol is real, which is the closest a grid-representable function
    // can get to the operator's null direction (cancelling the remaining real
    // part would take time frequencies ~ beta^{2m}, far beyond any feasible
    // t-grid). Widths follow the weight curvature scale R / sqrt(A).
    std::vector<double> ratios;
    for (double gamma : gammas) {
        const double A = 2.0 * gamma * std::pow(R, p);
        const double beta = A * s0 / R;
        const double xi0 = (m == 1) ? 0.0 : beta / std::tan(M_PI / (2.0 * m));
        // width shrinks a bit faster than the curvature scale R / sqrt(A) so
        // the weight climbs only a few e-folds per envelope sigma; otherwise
        // the far tail of e^Q meets the D_x^{2m}-amplified round-off floor
        const double wx = 0.25 * R / std::pow(A, 0.75);
        const double wt = 0.1 / std::sqrt(gamma);
        // Gaussian envelope: a compactly supported bump has an e^{-c sqrt(xi)}
        // spectral tail whose 4m-th moment swamps the carrier at small gamma
        Field2D u = make_field(grid, [&](double t, double x) -> complex_t {
            const double yt = (t - t0) / wt;
            const double yx = (x - x0) / wx;
            const double env = std::exp(-0.5 * (yt * yt + yx * yx));
            return env * std::exp(complex_t{0.0, xi0 * x});
        });
        const CarlemanReport rep = carleman_l2_check(u, w, {gamma});
        ratios.push_back(rep.ratios.front());
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    json res;
    res["ratios"] = ratios;
    res["min_ratio"] = *lo;
    res["uniformity"] = *hi / *lo;
    res["pass"] = *lo > floor && (*hi / *lo) < tol;
    res["tolerance"] = tol;
    return res;
}

std::vector<double> default_b_list() {
    std::vector<double> bs;
    for (int e = -3; e <= 2; ++e) {
        bs.push_back(-std::pow(10.0, e));
        bs.push_back(std::pow(10.0, e));
    }
    bs.push_back(1e3);
    std::sort(bs.begin(), bs.end());
    return bs;
}

json exp_multiplier_uniformity(const json& cfg) {
    const int m = need(cfg, "m").get<int>();
    std::vector<double> bs = cfg.contains("b_list")
                                 ? cfg.at("b_list").get<std::vector<double>>()
                                 : default_b_list();
    const std::size_t n = cfg.value("n", std::size_t{256});
    const unsigned seed = cfg.value("seed", 12345u);
    const double tol = cfg.value("tolerance", 100.0);

    std::vector<double> ratios;
    for (double b : bs) {
        const MultiplierParams params = pq_split(m, b);
        const AnchoredFrame frame = anchored_frame(params, n);
        const auto ens = standard_ensemble(frame.grid, seed);
        ratios.push_back(empirical_pq_norm(params, ens, nullptr, &frame));
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    json res;
    res["b_values"] = bs;
    res["ratios"] = ratios;
    res["uniformity"] = *hi / *lo;
    res["pass"] = (*hi / *lo) <= tol;
    res["tolerance"] = tol;
    return res;
}

json exp_frozen_resolvent(const json& cfg) {
    const int m = need(cfg, "m").get<int>();
    std::vector<double> imzs;
    if (cfg.contains("imz_list"))
        imzs = cfg.at("imz_list").get<std::vector<double>>();
    else
        for (int e = -2; e <= 2; ++e) {
            imzs.push_back(-std::pow(10.0, e));
            imzs.push_back(std::pow(10.0, e));
        }
    const std::size_t n = cfg.value("n", std::size_t{256});
    const unsigned seed = cfg.value("seed", 12345u);
    const double tol = cfg.value("tolerance", 100.0);

    std::vector<double> ratios;
    for (double im : imzs)
        ratios.push_back(frozen_resolvent_norm(m, complex_t{0.0, im}, seed, n));
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    json res;
    res["imz_values"] = imzs;
    res["ratios"] = ratios;
    res["uniformity"] = *hi / *lo;
    res["pass"] = (*hi / *lo) <= tol;
    res["tolerance"] = tol;
    return res;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    return out;
}

json exp_vdc(const json& cfg) {
    const int m = need(cfg, "m").get<int>();
    const double x = cfg.value("x", 0.0);
    std::vector<double> ss;
    if (cfg.contains("s_list"))
        ss = cfg.at("s_list").get<std::vector<double>>();
    else
        ss = log_spaced(cfg.value("s_min", m == 1 ? 1.0 : 10.0),
                        cfg.value("s_max", m == 1 ? 100.0 : 1e4), 13);
    const double tol = cfg.value("tolerance", m == 1 ? 0.01 : 0.03);
    const VdcReport rep = vdc_decay(m, x, ss);
    const double expected = -1.0 / (2.0 * m);
    json res;
    res["slope"] = rep.slope;
    res["expected_slope"] = expected;
    res["magnitudes"] = rep.magnitudes;
    res["pass"] = std::abs(rep.slope - expected) <= tol * std::abs(expected);
    res["tolerance"] = tol;
    return res;
}

json exp_dispersive(const json& cfg) {
    const int m = need(cfg, "m").get<int>();
    std::vector<double> ss;
    if (cfg.contains("s_list"))
        ss = cfg.at("s_list").get<std::vector<double>>();
    else
        ss = log_spaced(cfg.value("s_min", 1.0), cfg.value("s_max", 100.0), 9);
    const unsigned seed = cfg.value("seed", 12345u);
    const double tol = cfg.value("tolerance", 0.10);
    const SlopeReport rep = dispersive_slope(m, ss, seed);
    const double p = (4.0 * m + 2.0) / (4.0 * m + 1.0);
    const double pp = 4.0 * m + 2.0;
    const double expected = -(1.0 / (2.0 * m)) * (1.0 / p - 1.0 / pp);
    json res;
    res["slope"] = rep.slope;
    res["expected_slope"] = expected;
    res["ratios"] = rep.ratios;
    res["pass"] = std::abs(rep.slope - expected) <= tol * std::abs(expected);
    res["tolerance"] = tol;
    return res;
}

} // namespace

json run_experiment(const json& config) {
    const auto t_start = std::chrono::steady_clock::now();
    const std::string name = need(config, "experiment").get<std::string>();

    json results;
    if (name == "kernel-decay")
        results = exp_kernel_decay(config);
    else if (name == "sharpness")
        results = exp_sharpness(config);
    else if (name == "convexity")
        results = exp_convexity(config);
    else if (name == "subordination")
        results = exp_subordination(config);
    else if (name == "theta-transfer")
        results = exp_theta_transfer(config);
    else if (name == "treves")
        results = exp_treves(config);
    else if (name == "carleman-l2")
        results = exp_carleman_l2(config);
    else if (name == "multiplier-uniformity")
        results = exp_multiplier_uniformity(config);
    else if (name == "frozen-resolvent")
        results = exp_frozen_resolvent(config);
    else if (name == "vdc")
        results = exp_vdc(config);
    else if (name == "dispersive")
        results = exp_dispersive(config);
    else
        throw ArgumentError("unknown experiment: " + name);

    const auto t_end = std::chrono::steady_clock::now();
    json report;
    report["artifact_version"] = "0.1.0";
    report["config"] = config;
    report["experiment"] = name;
    const bool pass = results.at("pass").get<bool>();
    const double tol = results.at("tolerance").get<double>();
    results.erase("pass");
    results.erase("tolerance");
    report["results"] = results;
    report["pass"] = pass;
    report["tolerance"] = tol;
    report["wall_time"] = std::chrono::duration<double>(t_end - t_start).count();
    return report;
}

namespace {

std::size_t thread_cap() {
    if (const char* env = std::getenv("DISPERSE_UC_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

} // namespace

json run_sweep(const json& config, const std::string& axis,
               const std::vector<json>& values) {
    if (values.empty()) throw ArgumentError("sweep: empty value list");

    std::vector<json> rows(values.size());
    const std::size_t cap = std::min(thread_cap(), values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            json cfg = config;
            cfg[axis] = values[i];
            try {
                rows[i] = run_experiment(cfg);
            } catch (const std::exception& e) {
                rows[i] = json{{"config", cfg}, {"error", e.what()}, {"pass", false}};
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < cap; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream csv;
    csv << axis << ",pass,results,error\n";
    bool any_error = false;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json& row = rows[i];
        if (row.contains("error")) {
            any_error = true;
            csv << values[i].dump() << ",false,," << '"'
                << row.at("error").get<std::string>() << '"' << "\n";
            continue;
        }
        std::string flat;
        bool first_scalar = true;
        for (const auto& [k, v] : row.at("results").items()) {
            if (!v.is_number()) continue;
            if (!flat.empty()) flat += ";";
            flat += k + "=" + v.dump();
            // summary tracks the first scalar key (stable: keys are sorted)
            if (first_scalar) {
                const double d = v.get<double>();
                lo = std::min(lo, d);
                hi = std::max(hi, d);
                first_scalar = false;
            }
        }
        csv << values[i].dump() << "," << (row.at("pass").get<bool>() ? "true" : "false")
            << "," << '"' << flat << '"' << ",\n";
    }
    if (std::isfinite(lo))
        csv << "summary,,\"min=" << lo << ";max=" << hi << ";ratio=" << hi / lo << "\",\n";
    json out;
    out["rows"] = rows;
    out["csv"] = csv.str();
    json summary;
    summary["count"] = rows.size();
    summary["errors"] = any_error;
    if (hi > 0.0) {
        summary["min_uniformity"] = lo;
        summary["max_uniformity"] = hi;
    }
    out["summary"] = summary;
    return out;
}

} // namespace disperse

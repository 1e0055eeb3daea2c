#include "dosc/oracles/propagator.hpp"

#include "dosc/errors.hpp"
#include "dosc/solutions.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace dosc::oracles {
namespace {

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

struct PlanDestroy {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

using Buffer = std::unique_ptr<std::complex<double>[], FftwFree>;
using Plan = std::unique_ptr<fftw_plan_s, PlanDestroy>;

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

double edge_ratio(std::span<const std::complex<double>> psi) {
    double peak = 0.0;
    for (const auto& v : psi) peak = std::max(peak, std::norm(v));
    if (peak == 0.0) return 0.0;
    return std::sqrt(std::max(std::norm(psi.front()), std::norm(psi.back())) / peak);
}

double discrete_norm2(std::span<const std::complex<double>> psi) {
    double s = 0.0;
    for (const auto& v : psi) s += std::norm(v);
    return s;
}

}  // namespace

GridPotential deformed_grid_potential(const Transform& tr) {
    return [&tr](double t, std::span<const double> xs, std::span<double> out) {
        for (std::size_t j = 0; j < xs.size(); ++j) out[j] = tr.potential(xs[j], t);
    };
}

namespace {

// Largest |b(t)| on [t0, t1]: D = c1 + γ cos φ is smallest at an endpoint or at φ = kπ.
double max_abs_b(const Transform& tr, double t0, double t1) {
    const double c2 = tr.params().c2;
    double best = std::max(std::abs(tr.time_factors(t0).b), std::abs(tr.time_factors(t1).b));
    const double ph0 = 4.0 * t0 + c2;
    const double ph1 = 4.0 * t1 + c2;
    for (double k = std::ceil(ph0 / std::numbers::pi); k * std::numbers::pi <= ph1; k += 1.0) {
        best = std::max(best, std::abs(tr.time_factors((k * std::numbers::pi - c2) / 4.0).b));
    }
    return best;
}

struct CurvatureTable {
    double z_lo = 0.0;
    double h = 0.0;
    std::vector<double> g;

    double operator()(double z) const {
        const double s = (z - z_lo) / h;
        const auto i = static_cast<std::ptrdiff_t>(std::floor(s));
        const double u = s - static_cast<double>(i);
        double sum = 0.0;
        for (int k = -2; k <= 3; ++k) {
            double w = 1.0;
            for (int m = -2; m <= 3; ++m) {
                if (m != k) w *= (u - m) / static_cast<double>(k - m);
            }
            sum += w * g[static_cast<std::size_t>(i + k)];
        }
        return sum;
    }
};

}  // namespace

GridPotential tabulated_grid_potential(const Transform& tr, double x_extent, double t0, double t1, double h,
                                       std::size_t max_nodes) {
    if (!(h > 0.0) || !(x_extent >= 0.0) || !(t1 >= t0)) {
        throw DomainError("tabulated_grid_potential: need h > 0, x_extent >= 0, t1 >= t0");
    }
    const double z_max = max_abs_b(tr, t0, t1) * x_extent;
    const double span = 2.0 * z_max / h + 8.0;
    if (!(span <= static_cast<double>(max_nodes))) return deformed_grid_potential(tr);

    auto table = std::make_shared<CurvatureTable>();
    table->h = h;
    table->z_lo = -z_max - 3.0 * h;
    const auto nodes = static_cast<std::size_t>(std::ceil(span));
    table->g.resize(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        table->g[j] = tr.log_w_curvature(table->z_lo + static_cast<double>(j) * h);
    }
    return [&tr, table](double t, std::span<const double> xs, std::span<double> out) {
        const double b = tr.time_factors(t).b;
        const double b2 = b * b;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            out[j] = xs[j] * xs[j] + 2.0 * b2 - 2.0 * b2 * (*table)(b * xs[j]);
        }
    };
}

GridPotential harmonic_grid_potential() {
    return [](double, std::span<const double> xs, std::span<double> out) {
        for (std::size_t j = 0; j < xs.size(); ++j) out[j] = xs[j] * xs[j];
    };
}

PropagationResult split_step_evolve(const WaveField& initial, const GridPotential& potential,
                                    double t1, const PropagationOptions& opts) {
    const std::size_t n = initial.grid.n;
    if (!power_of_two(n) || initial.values.size() != n) {
        throw DomainError("split_step_evolve: grid size must be a power of two");
    }
    if (!(opts.dt > 0.0 && opts.dt <= 1e-3)) throw DomainError("split_step_evolve: need 0 < dt <= 1e-3");
    const double t0 = initial.t;
    const double span = t1 - t0;
    if (!(span >= 0.0)) throw DomainError("split_step_evolve: t1 must not precede the initial time");

    PropagationResult result;
    result.max_edge_ratio = edge_ratio(initial.values);
    if (result.max_edge_ratio > opts.initial_edge_limit) {
        throw BoundaryLeakError("split_step_evolve: initial state is not negligible at the box edge (" +
                                std::to_string(result.max_edge_ratio) + " of max)");
    }

    const std::size_t steps = span == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(span / opts.dt - 1e-9));
    const double dt = steps == 0 ? 0.0 : span / static_cast<double>(steps);

    Buffer buf(static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n)));
    auto* raw = reinterpret_cast<fftw_complex*>(buf.get());
    Plan forward(fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE));
    Plan backward(fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE));
    std::copy(initial.values.begin(), initial.values.end(), buf.get());
    std::span<std::complex<double>> psi(buf.get(), n);

    const double length = initial.grid.dx * static_cast<double>(n);
    std::vector<std::complex<double>> kinetic(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double m = j < n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
        const double k = 2.0 * std::numbers::pi * m / length;
        kinetic[j] = std::polar(1.0 / static_cast<double>(n), -k * k * dt);
    }

    const std::vector<double> xs = initial.grid.points();
    std::vector<double> v(n);
    std::vector<std::complex<double>> half_kick(n);
    const double norm_start = discrete_norm2(psi);

    for (std::size_t s = 0; s < steps; ++s) {
        const double t_mid = t0 + (static_cast<double>(s) + 0.5) * dt;
        potential(t_mid, xs, v);
        for (std::size_t j = 0; j < n; ++j) half_kick[j] = std::polar(1.0, -0.5 * v[j] * dt);

        for (std::size_t j = 0; j < n; ++j) psi[j] *= half_kick[j];
        fftw_execute(forward.get());
        for (std::size_t j = 0; j < n; ++j) psi[j] *= kinetic[j];
        fftw_execute(backward.get());
        for (std::size_t j = 0; j < n; ++j) psi[j] *= half_kick[j];

        if ((s + 1) % static_cast<std::size_t>(std::max(opts.leak_check_every, 1)) == 0 || s + 1 == steps) {
            const double edge = edge_ratio(psi);
            result.max_edge_ratio = std::max(result.max_edge_ratio, edge);
            if (edge > opts.leak_limit) {
                throw BoundaryLeakError("split_step_evolve: state reached the box edge at t = " +
                                        std::to_string(t0 + (s + 1) * dt));
            }
        }
    }

    result.field = WaveField{initial.grid, t1, std::vector<std::complex<double>>(psi.begin(), psi.end())};
    result.steps = steps;
    result.dt = dt;
    result.norm_drift = norm_start > 0.0 ? std::abs(discrete_norm2(psi) / norm_start - 1.0) : 0.0;
    return result;
}

PropagationResult split_step_evolve(const WaveField& initial, const Transform& tr, double t1,
                                    const PropagationOptions& opts) {
    const Grid& g = initial.grid;
    const double extent = std::max(std::abs(g.x(0)), std::abs(g.x(g.n - 1)));
    return split_step_evolve(initial, tabulated_grid_potential(tr, extent, std::min(initial.t, t1), t1), t1, opts);
}

double l2_relative_error(const WaveField& a, const WaveField& b) {
    if (!(a.grid == b.grid) || a.values.size() != b.values.size()) {
        throw GridMismatchError("l2_relative_error: fields live on different grids");
    }
    WaveField diff{a.grid, a.t, std::vector<std::complex<double>>(a.values.size())};
    for (std::size_t j = 0; j < a.values.size(); ++j) diff.values[j] = a.values[j] - b.values[j];
    const double denom = norm_l2(b);
    if (denom == 0.0) throw DomainError("l2_relative_error: reference field is zero");
    return norm_l2(diff) / denom;
}

}  // namespace dosc::oracles

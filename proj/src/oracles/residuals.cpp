#include "dosc/oracles/residuals.hpp"

#include "dosc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dosc::oracles {
namespace {

using Fn = std::function<std::complex<double>(double)>;

std::complex<double> raw_d1_fourth(const Fn& f, double x, double h) {
    return (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
}

std::complex<double> raw_d2_fourth(const Fn& f, double x, double h) {
    return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) /
           (12.0 * h * h);
}

std::complex<double> raw_d1_second(const Fn& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

Derivative richardson(std::complex<double> coarse, std::complex<double> fine, int order) {
    const double p = std::pow(2.0, order);
    const std::complex<double> extrapolated = (p * fine - coarse) / (p - 1.0);
    return {extrapolated, std::abs(extrapolated - fine)};
}

void check_steps(const FdSteps& s) {
    const auto ok = [](double h) { return h >= 1e-7 && h <= 1e-2; };
    if (!ok(s.h_x) || !ok(s.h_t)) throw DomainError("finite-difference steps must lie in [1e-7, 1e-2]");
}

void guard(const char* what, const Derivative& d, double scale, const FdSteps& s) {
    if (scale > 0.0 && d.disagreement > 10.0 * s.tolerance * scale) {
        throw StepSizeError(std::string(what) + ": Richardson levels disagree (" +
                            std::to_string(d.disagreement / scale) +
                            " relative); sampler not smooth at this step size");
    }
}

}  // namespace

Derivative d1_fourth(const Fn& f, double x, double h) {
    return richardson(raw_d1_fourth(f, x, h), raw_d1_fourth(f, x, 0.5 * h), 4);
}

Derivative d2_fourth(const Fn& f, double x, double h) {
    return richardson(raw_d2_fourth(f, x, h), raw_d2_fourth(f, x, 0.5 * h), 4);
}

Derivative d1_second(const Fn& f, double t, double h) {
    return richardson(raw_d1_second(f, t, h), raw_d1_second(f, t, 0.5 * h), 2);
}

FdResidual fd_tdse_residual(const StateSampler& state, const PotentialSampler& potential,
                            double x, double t, const FdSteps& steps, double scale_floor) {
    check_steps(steps);
    const std::complex<double> i{0.0, 1.0};
    const std::complex<double> psi = state(x, t);
    const Derivative dt = d1_second([&](double tt) { return state(x, tt); }, t, steps.h_t);
    const Derivative dxx = d2_fourth([&](double xx) { return state(xx, t); }, x, steps.h_x);
    const std::complex<double> v_psi = potential(x, t) * psi;

    FdResidual r;
    r.residual = i * dt.value + dxx.value - v_psi;
    r.scale = std::max(std::abs(dt.value) + std::abs(dxx.value) + std::abs(v_psi), scale_floor);
    guard("time derivative", dt, r.scale, steps);
    guard("second x-derivative", dxx, r.scale, steps);
    return r;
}

FdResidual intertwining_residual(const Transform& tr, const StateSampler& g, double x, double t,
                                 const IntertwiningOptions& opts) {
    check_steps(opts.inner);
    check_steps(opts.outer);
    const std::complex<double> i{0.0, 1.0};
    const PotentialSampler v1 = opts.deformed_potential.value_or(
        [&tr](double xx, double tt) { return tr.potential(xx, tt); });

    const auto ell = [&](double tt) { return tr.time_factors(tt).ell; };

    // Base operator applied to g, sampled as a function of (x, t).
    const auto base_applied = [&](double xx, double tt) {
        const auto dt = d1_second([&](double s) { return g(xx, s); }, tt, opts.inner.h_t);
        const auto dxx = d2_fourth([&](double s) { return g(s, tt); }, xx, opts.inner.h_x);
        return i * dt.value + dxx.value - harmonic_potential(xx, tt) * g(xx, tt);
    };
    // L g sampled as a function of (x, t).
    const auto lg = [&](double xx, double tt) {
        const auto dx = d1_fourth([&](double s) { return g(s, tt); }, xx, opts.inner.h_x);
        return ell(tt) * (tr.beta(xx, tt) * g(xx, tt) + dx.value);
    };

    // L[(i∂t + ∂x² − V₀) g]
    const std::complex<double> h0 = base_applied(x, t);
    const Derivative h_x = d1_fourth([&](double s) { return base_applied(s, t); }, x, opts.outer.h_x);
    const std::complex<double> left = ell(t) * (tr.beta(x, t) * h0 + h_x.value);

    // (i∂t + ∂x² − V₁)[L g]
    const std::complex<double> lg0 = lg(x, t);
    const Derivative lg_t = d1_second([&](double s) { return lg(x, s); }, t, opts.outer.h_t);
    const Derivative lg_xx = d2_fourth([&](double s) { return lg(s, t); }, x, opts.outer.h_x);
    const std::complex<double> v_lg = v1(x, t) * lg0;
    const std::complex<double> right = i * lg_t.value + lg_xx.value - v_lg;

    FdResidual r;
    r.residual = left - right;
    r.scale = std::abs(left) + std::abs(lg_t.value) + std::abs(lg_xx.value) + std::abs(v_lg);
    guard("outer time derivative", lg_t, r.scale, opts.outer);
    guard("outer second x-derivative", lg_xx, r.scale, opts.outer);
    return r;
}

}  // namespace dosc::oracles

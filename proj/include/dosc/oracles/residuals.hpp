#pragma once

#include "dosc/transform.hpp"

#include <complex>
#include <functional>
#include <optional>

namespace dosc::oracles {

using StateSampler = std::function<std::complex<double>(double x, double t)>;
using PotentialSampler = std::function<double(double x, double t)>;

/// Finite-difference steps. `tolerance` arms the smoothness guard: when a
/// Richardson-extrapolated derivative differs from its finer raw estimate by
/// more than 10·tolerance (relative to the residual's term scale), the probe
/// throws StepSizeError.
struct FdSteps {
    double h_x = 1e-3;
    double h_t = 1e-4;
    double tolerance = 1e-3;
};

/// A residual together with the magnitude of the terms it balances.
struct FdResidual {
    std::complex<double> residual{};
    double scale = 0.0;

    double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

/// One Richardson level on top of a fixed-order central stencil.
struct Derivative {
    std::complex<double> value{};
    double disagreement = 0.0;  // |extrapolated − finer raw estimate|
};

/// d/dx, fourth-order stencil, extrapolated to sixth order.
Derivative d1_fourth(const std::function<std::complex<double>(double)>& f, double x, double h);
/// d²/dx², fourth-order stencil, extrapolated to sixth order.
Derivative d2_fourth(const std::function<std::complex<double>(double)>& f, double x, double h);
/// d/dt, second-order central difference, extrapolated to fourth order.
Derivative d1_second(const std::function<std::complex<double>(double)>& f, double t, double h);

/// i D_t ψ + D_xx ψ − V ψ at (x, t). h_x, h_t must lie in [1e-7, 1e-2].
/// `scale_floor` bounds the term scale from below, for points where ψ has a
/// node and every term is at roundoff level.
FdResidual fd_tdse_residual(const StateSampler& state, const PotentialSampler& potential,
                            double x, double t, const FdSteps& steps = {},
                            double scale_floor = 0.0);

struct IntertwiningOptions {
    FdSteps inner{1e-3, 1e-5, 1e-3};  // derivatives of the test function
    FdSteps outer{1e-2, 1e-4, 1e-3};  // derivatives of the composite expressions
    /// Replaces V₁ on the deformed side; used for the mismatched-pairing control.
    std::optional<PotentialSampler> deformed_potential;
};

/// [L(i∂t + ∂x² − V₀) − (i∂t + ∂x² − V₁)L] g at (x, t) by nested finite differences.
FdResidual intertwining_residual(const Transform& tr, const StateSampler& g, double x, double t,
                                 const IntertwiningOptions& opts = {});

/// V₀ = x².
inline double harmonic_potential(double x, double /*t*/) { return x * x; }

}  // namespace dosc::oracles

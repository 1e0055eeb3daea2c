#pragma once

#include "dosc/grid.hpp"
#include "dosc/transform.hpp"

#include <functional>
#include <span>

namespace dosc::oracles {

/// Fills `out[j]` with V(xs[j], t).
using GridPotential = std::function<void(double t, std::span<const double> xs, std::span<double> out)>;

/// V₁ evaluated point by point.
GridPotential deformed_grid_potential(const Transform& tr);

/// V₁ through a table of (ln w)″ on a uniform z-mesh of spacing h, covering
/// z = b(t)·x for all t in [t0, t1] and |x| <= x_extent, read back by six-point
/// Lagrange interpolation. Falls back to deformed_grid_potential when the table
/// would exceed max_nodes.
GridPotential tabulated_grid_potential(const Transform& tr, double x_extent, double t0, double t1,
                                       double h = 2.5e-3, std::size_t max_nodes = 4'000'000);

GridPotential harmonic_grid_potential();

struct PropagationOptions {
    double dt = 1e-4;
    double initial_edge_limit = 1e-10;  // boundary/max ratio required of the initial state
    double leak_limit = 1e-6;           // boundary/max ratio tolerated during the run
    int leak_check_every = 100;         // steps between edge checks
};

struct PropagationResult {
    WaveField field;
    std::size_t steps = 0;
    double dt = 0.0;               // actual step, (t1 − t0)/steps
    double norm_drift = 0.0;       // |Σ|ψ|² (end) / Σ|ψ|² (start) − 1|
    double max_edge_ratio = 0.0;
};

/// Strang split-step Fourier propagation of iψ_t = −ψ_xx + V(x, t)ψ on the
/// periodic box spanned by the field's grid:
///   ψ ← e^{−iV(t+dt/2)dt/2} F⁻¹ e^{−ik²dt} F e^{−iV(t+dt/2)dt/2} ψ.
///
/// The grid size must be a power of two and dt <= 1e-3 (the step is shrunk so
/// that a whole number of steps lands on t1). Throws BoundaryLeakError when the
/// state is not negligible at the box edges, initially or during the run.
PropagationResult split_step_evolve(const WaveField& initial, const GridPotential& potential,
                                    double t1, const PropagationOptions& opts = {});

/// Evolution under V₁ of the given transformation, through tabulated_grid_potential.
PropagationResult split_step_evolve(const WaveField& initial, const Transform& tr, double t1,
                                    const PropagationOptions& opts = {});

/// ‖a − b‖ / ‖b‖ by Simpson quadrature. Throws GridMismatchError unless the grids match.
double l2_relative_error(const WaveField& a, const WaveField& b);

}  // namespace dosc::oracles

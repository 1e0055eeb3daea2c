#pragma once

#include "dosc/grid.hpp"
#include "dosc/oracles/propagator.hpp"
#include "dosc/oracles/residuals.hpp"
#include "dosc/solutions.hpp"
#include "dosc/transform.hpp"

#include <map>
#include <string>
#include <vector>

namespace dosc::oracles {

/// How a report's measured value is compared with its tolerance.
enum class CheckMode {
    relative,     // pass iff max_rel <= tolerance
    absolute,     // pass iff max_abs <= tolerance
    must_exceed,  // designed failure: pass iff max_rel > tolerance
};

struct ResidualReport {
    std::string name;
    double max_abs = 0.0;
    double max_rel = 0.0;
    std::string grid_spec;
    double tolerance = 0.0;
    CheckMode mode = CheckMode::relative;
    bool pass = false;
    std::string detail;  // free-form notes (failing point, recorded values)

    /// Sets `pass` from the measured values, tolerance and mode.
    void settle();
};

/// Check name → tolerance. Unknown names fall back to these defaults.
using Tolerances = std::map<std::string, double>;
Tolerances default_tolerances();
double tolerance_for(const Tolerances& tol, const std::string& name);

/// x ∈ [x_min, x_max] by nx points, t ∈ [t_min, t_max] by nt points (closed).
struct ProbeLattice {
    double x_min = -3.0;
    double x_max = 3.0;
    int nx = 21;
    double t_min = 0.0;
    double t_max = 0.7853981633974483;  // π/4
    int nt = 9;

    double x(int i) const;
    double t(int j) const;
    std::string describe() const;
};

/// Steps used for residuals on the probe lattice. h_t = 1e-5 resolves the fast
/// coefficient swing of the presets near t = π/4.
inline constexpr FdSteps kLatticeSteps{1e-3, 1e-5, 1e-3};

/// Closed-form separation ODE residuals at `samples` times over one period.
ResidualReport check_separation(const Transform& tr, int samples, double tol);

/// i u_t + u_xx − x²u relative to the size of its terms.
ResidualReport check_u_equation(const Transform& tr, const ProbeLattice& lattice,
                                const FdSteps& steps, double tol);

/// i ψ_t + ψ_xx − V₁ψ for each state, relative to the size of its terms.
ResidualReport check_deformed_equation(const Transform& tr, const std::vector<StateSpec>& states,
                                       const ProbeLattice& lattice, const FdSteps& steps,
                                       double tol);

/// Intertwining relation on φ₃ and a static Gaussian.
ResidualReport check_intertwining(const Transform& tr, double tol);

/// V₁ against x² − (ln|u|²)ₓₓ by finite differences.
ResidualReport check_v1_cross_form(const Transform& tr, const Grid& grid,
                                   const std::vector<double>& times, double tol);

/// x² + 2βₓ + iℓ̇/ℓ must be real and equal V₁.
ResidualReport check_v1_complex_form(const Transform& tr, const Grid& grid,
                                     const std::vector<double>& times, double tol);

/// Third x-difference of arg u (the reality constraint on ln(u/u*)).
ResidualReport check_reality_phase(const Transform& tr, const Grid& grid,
                                   const std::vector<double>& times, double tol);

/// exp(∫₀ᵗ 4α dt′) against ℓ(t)/ℓ(0) at `samples` times in (0, π/2].
ResidualReport check_ell_integral(const Transform& tr, int samples, double tol);

/// erf form of V₁ (ν = 1/2) against the general formula.
ResidualReport check_mielnik(const Transform& tr, const Grid& grid,
                             const std::vector<double>& times, double tol);

/// The same (k_a, k_b, ν) with c1 = c0² gives a time-independent V₁.
ResidualReport check_static_limit(const TransformParams& p, const Grid& grid,
                                  const std::vector<double>& times, double tol);

/// c0 = c1 = 1, ν = 1/2, k_b = 0 gives V₁ = x² − 2.
ResidualReport check_trivial_limit(const Grid& grid, const std::vector<double>& times, double tol);

/// ‖ψ(·, t)‖ constant across the given times. The missing state is integrated on
/// `wide` since it spreads over ~1/b(t).
ResidualReport check_norm_conservation(const Transform& tr, const std::vector<StateSpec>& states,
                                       const Grid& grid, const Grid& wide,
                                       const std::vector<double>& times, double tol);

/// Production ₁F₁ against the MPFR series on a 200-point set, w ∈ [0, 1300].
ResidualReport check_hyp1f1_oracle(double tol);

/// w₁w₂′ − w₁′w₂ = e^{z²} for z = 0.1..3, ν ∈ {1/2, 2, −0.3}.
ResidualReport check_wronskian(double tol);

/// γ → scale·γ with everything else kept must break the separation ODEs.
ResidualReport check_perturbed_gamma(const TransformParams& p, double scale, double threshold);

/// Intertwining with V₀ in place of V₁ must fail: the largest relative residual
/// exceeds `threshold` and every probe point exceeds `pairing_tol`.
ResidualReport check_mismatched_intertwining(const Transform& tr, double threshold,
                                             double pairing_tol);

/// Evolves the state from `t0` over the checkpoint times and compares with the
/// analytic state at each; max_rel is the worst L² relative error.
struct PropagationRun {
    ResidualReport report;
    std::vector<double> times;
    std::vector<double> errors;
    double norm_drift = 0.0;
    Grid grid;
};

PropagationRun check_propagation(const Transform& tr, StateSpec state, const Grid& grid,
                                 const std::vector<double>& times, double dt, double tol);

/// φ₀ under x² to t1 against the exact stationary phase.
PropagationRun check_propagation_control(const Grid& grid, double t1, double dt, double tol);

/// Error ratio between steps 2·dt and dt, reported as |order − 2|.
ResidualReport check_dt_order(const Transform& tr, StateSpec state, const Grid& grid,
                              double t1, double dt, double tol);

/// Doubles the box (and n, keeping dx) until the state's boundary ratio is
/// below `edge_limit` at every checkpoint. n is first rounded up to a power of two.
Grid propagation_grid(const Transform& tr, StateSpec state, double x_min, double x_max,
                      std::size_t n, const std::vector<double>& times, double edge_limit = 1e-10);

}  // namespace dosc::oracles

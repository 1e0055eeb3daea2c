#pragma once

#include "dosc/log_scaled.hpp"

#include <complex>
#include <optional>

namespace dosc {

/// The six constants that pick one time-dependent Darboux deformation of the
/// oscillator x².
///
/// b(t) = c0/√(c1 + γ cos(4t + c2)) couples x and t through z = b(t)x; k_a and
/// k_b weight the even and odd ₁F₁ solutions; nu is the first ₁F₁ parameter.
struct TransformParams {
    double c0 = 1.0;
    double c1 = 1.0;
    double c2 = 0.0;
    double k_a = 1.0;
    double k_b = 0.0;
    double nu = 0.5;
};

/// Constants fixed by the parameters. `lambda` is NaN in the static limit γ = 0.
struct DerivedConstants {
    double gamma = 0.0;   // √(c1² − c0⁴)
    double kappa = 1.0;   // √((c1 − γ)/(c1 + γ))
    double lambda = 0.0;  // λ² = (c1 − γ)/(2γ)
    double mu = 0.0;      // 1 − 4ν, f″ = (z² − μ) f
};

/// Time-dependent coefficients of u = B(t) e^{a(t)x²} f(b(t)x).
struct TimeFactors {
    double t = 0.0;
    double b = 0.0;
    double alpha = 0.0;      // a(t) = i·alpha
    double ell = 0.0;        // ℓ(t)
    double log_b_mag = 0.0;  // ln|B(t)|
    double theta = 0.0;      // arg B(t), continuous in t
};

/// w(z) = k_a ₁F₁(ν,1/2;z²) + k_b z ₁F₁(ν+1/2,3/2;z²) with its logarithmic derivatives.
struct WCombo {
    LogScaled w;
    double r1 = 0.0;     // w′/w
    double r2 = 0.0;     // w″/w
    double q = 0.0;      // r1 − 2z, log-derivative of e^{−z²} w
    double log_e = 0.0;  // ln|e^{−z²} w|
};

/// A complex number as log-magnitude plus phase.
struct LogComplex {
    double log_mag = 0.0;
    double phase = 0.0;

    std::complex<double> value() const { return std::polar(std::exp(log_mag), phase); }
    /// value() divided by e^{log_ref}, for sampling near a reference point.
    std::complex<double> value_relative_to(double log_ref) const {
        return std::polar(std::exp(log_mag - log_ref), phase);
    }
};

struct NodeCheckResult {
    bool pass = true;
    std::optional<double> z_where;  // location of the first detected node
    double min_relative = 0.0;      // smallest |w| / (|k_a M₁| + |k_b z M₂|) sampled
};

struct SeparationResiduals {
    double riccati = 0.0;             // |i ȧ + 4a² + b⁴ − 1|
    double b_ode = 0.0;               // |ḃ − 4iab|
    std::complex<double> B_ode{};     // i Ḃ/B + 2a − μ b²
};

struct NodeScan {
    double z_max = 12.0;
    int samples = 4096;
};

inline constexpr NodeScan kDefaultNodeScan{};

/// γ, κ, λ, μ. Throws ParameterError when c0 = 0 or c1 < c0².
DerivedConstants derive_constants(const TransformParams& p);

/// Sign scan of w(z) on [−z_max, z_max] with bisection refinement, plus the sign
/// of the leading e^{z²} coefficients for |z| → ∞. Never throws for valid input.
NodeCheckResult node_check(const TransformParams& p, double z_max = kDefaultNodeScan.z_max,
                           int samples = kDefaultNodeScan.samples);

/// A validated, immutable transformation. Every method is a pure function.
class Transform {
public:
    /// Validates the parameters including node freedom of w.
    /// Throws ParameterError or NodeError.
    explicit Transform(const TransformParams& p);

    /// Bypasses validation and uses the given constants verbatim. Intended for
    /// negative controls (e.g. a perturbed γ) that must be detected downstream.
    static Transform with_constants(const TransformParams& p, const DerivedConstants& c);

    const TransformParams& params() const { return params_; }
    const DerivedConstants& constants() const { return constants_; }

    TimeFactors time_factors(double t) const;

    /// Throws NodeError when w(z) = 0.
    WCombo w_combo(double z) const;

    /// u(x, t) in log-magnitude/phase form.
    LogComplex u(double x, double t) const;

    /// β = −(ln u)ₓ.
    std::complex<double> beta(double x, double t) const;

    /// (ln w)″(z) = 4ν − q(2z + q). Throws NodeError when w(z) = 0.
    double log_w_curvature(double z) const;

    /// V₁(x, t) = x² + 2b² − 2b² (ln w)″(b x).
    double potential(double x, double t) const;

    /// Closed form of V₁ for ν = 1/2 through erf. Throws DomainError when ν ≠ 1/2
    /// and ParameterError when 2k_a <= √π|k_b|.
    double mielnik_potential(double x, double t) const;

    /// Closed-form derivatives substituted into the separation ODEs.
    SeparationResiduals separation_residuals(double t) const;

private:
    Transform(const TransformParams& p, const DerivedConstants& c) : params_(p), constants_(c) {}

    TransformParams params_;
    DerivedConstants constants_;
};

/// Continuous branch of arctan(κ tan θ) with A(0) = 0 and A(θ + π) = A(θ) + π.
double unwrapped_arctan(double kappa, double theta);

}  // namespace dosc

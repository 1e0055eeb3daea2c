#include "dosc/transform.hpp"

#include "dosc/errors.hpp"
#include "dosc/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dosc {
namespace {

constexpr double kNodeRelativeFloor = 1e-12;

// The two branches of E(z) = e^{−z²} w(z) and their z-derivatives, each already
// weighted by k_a / k_b. Removing e^{z²} exactly keeps every logarithm O(ln z).
struct WParts {
    LogScaled even;
    LogScaled odd;
    LogScaled even_dz;
    LogScaled odd_dz;

    LogScaled e() const { return even + odd; }
    LogScaled e_dz() const { return even_dz + odd_dz; }
};

WParts w_parts(const TransformParams& p, double z) {
    const double w = z * z;
    const LogScaled ka = LogScaled::from_value(p.k_a);
    const LogScaled kb = LogScaled::from_value(p.k_b);

    WParts parts;
    if (!ka.is_zero()) {
        parts.even = ka * hyp1f1_scaled(p.nu, 0.5, w);
        parts.even_dz = ka * hyp1f1_scaled_dw(p.nu, 0.5, w).scaled(2.0 * z);
    }
    if (!kb.is_zero()) {
        const LogScaled m = hyp1f1_scaled(p.nu + 0.5, 1.5, w);
        parts.odd = kb * m.scaled(z);
        parts.odd_dz = kb * (m + hyp1f1_scaled_dw(p.nu + 0.5, 1.5, w).scaled(2.0 * w));
    }
    return parts;
}

double inverse_gamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    int sign = 1;
    const double lg = ::lgamma_r(x, &sign);
    return sign * std::exp(-lg);
}

LogScaled magnitude(LogScaled v) { return LogScaled::from_log(v.sign == 0 ? 0 : 1, v.log_mag); }

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw ParameterError(field, "must be finite");
}

}  // namespace

double unwrapped_arctan(double kappa, double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return theta + std::atan((kappa - 1.0) * s * c / (c * c + kappa * s * s));
}

DerivedConstants derive_constants(const TransformParams& p) {
    require_finite(p.c0, "c0");
    require_finite(p.c1, "c1");
    require_finite(p.nu, "nu");
    if (p.c0 == 0.0) throw ParameterError("c0", "must be nonzero");
    const double c0sq = p.c0 * p.c0;
    if (p.c1 < c0sq) {
        throw ParameterError("c1", "must satisfy c1 >= c0^2 (c1 = " + std::to_string(p.c1) +
                                       ", c0^2 = " + std::to_string(c0sq) + ")");
    }
    DerivedConstants c;
    c.gamma = std::sqrt((p.c1 - c0sq) * (p.c1 + c0sq));
    // c1 − γ = c0⁴/(c1 + γ) avoids cancellation when γ ≈ c1.
    c.kappa = c0sq / (p.c1 + c.gamma);
    c.lambda = c.gamma > 0.0
                   ? std::sqrt(c0sq * c0sq / ((p.c1 + c.gamma) * 2.0 * c.gamma))
                   : std::numeric_limits<double>::quiet_NaN();
    c.mu = 1.0 - 4.0 * p.nu;
    return c;
}

NodeCheckResult node_check(const TransformParams& p, double z_max, int samples) {
    if (!(z_max >= 10.0) || samples < 1000) {
        throw DomainError("node_check: need z_max >= 10 and at least 1000 samples");
    }
    NodeCheckResult result;
    result.min_relative = std::numeric_limits<double>::infinity();
    if (p.k_a == 0.0 && p.k_b == 0.0) {
        result.pass = false;
        result.z_where = 0.0;
        result.min_relative = 0.0;
        return result;
    }

    const auto fail = [&](double z) {
        result.pass = false;
        result.z_where = z;
        return result;
    };

    const double dz = 2.0 * z_max / (samples - 1);
    int prev_sign = 0;
    double prev_z = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double z = -z_max + j * dz;
        const WParts parts = w_parts(p, z);
        const LogScaled w = parts.e();
        if (w.is_zero()) {
            result.min_relative = 0.0;
            return fail(z);
        }
        const LogScaled scale = magnitude(parts.even) + magnitude(parts.odd);
        const double rel = std::exp(w.log_mag - scale.log_mag);
        result.min_relative = std::min(result.min_relative, rel);
        if (rel < kNodeRelativeFloor) return fail(z);
        if (prev_sign != 0 && w.sign != prev_sign) {
            double lo = prev_z;
            double hi = z;
            for (int it = 0; it < 80 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
                const double mid = 0.5 * (lo + hi);
                const LogScaled wm = w_parts(p, mid).e();
                if (wm.is_zero()) {
                    lo = hi = mid;
                    break;
                }
                if (wm.sign == prev_sign) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return fail(0.5 * (lo + hi));
        }
        prev_sign = w.sign;
        prev_z = z;
    }

    // Beyond the scan w ~ C± e^{z²}|z|^{2ν−1}; a leading coefficient of the wrong
    // sign forces a node further out.
    const double even_coef = p.k_a * inverse_gamma(p.nu);
    const double odd_coef = 0.5 * p.k_b * inverse_gamma(p.nu + 0.5);
    const double c_plus = even_coef + odd_coef;
    const double c_minus = even_coef - odd_coef;
    const int sign_at_edge = prev_sign;
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (c_plus != 0.0 && (c_plus > 0.0 ? 1 : -1) != sign_at_edge) return fail(inf);
    if (c_minus != 0.0 && (c_minus > 0.0 ? 1 : -1) != sign_at_edge) return fail(-inf);
    return result;
}

Transform::Transform(const TransformParams& p) : params_(p), constants_(derive_constants(p)) {
    require_finite(p.c2, "c2");
    require_finite(p.k_a, "k_a");
    require_finite(p.k_b, "k_b");
    if (p.k_a == 0.0 && p.k_b == 0.0) throw ParameterError("k_a", "k_a and k_b cannot both be zero");
    const NodeCheckResult nodes = node_check(p);
    if (!nodes.pass) {
        const double z = nodes.z_where.value_or(0.0);
        throw NodeError(z, "w(z) has a node near z = " + std::to_string(z) +
                               "; choose k_a, k_b, nu so that w has no real zero");
    }
}

Transform Transform::with_constants(const TransformParams& p, const DerivedConstants& c) {
    return Transform(p, c);
}

TimeFactors Transform::time_factors(double t) const {
    const double ph = 4.0 * t + params_.c2;
    const double d = params_.c1 + constants_.gamma * std::cos(ph);
    TimeFactors f;
    f.t = t;
    f.b = params_.c0 / std::sqrt(d);
    f.alpha = -0.5 * constants_.gamma * std::sin(ph) / d;
    f.ell = std::sqrt(d);
    f.log_b_mag = -0.25 * std::log(d);
    f.theta = 0.5 * (4.0 * params_.nu - 1.0) * unwrapped_arctan(constants_.kappa, 0.5 * ph);
    return f;
}

WCombo Transform::w_combo(double z) const {
    const WParts parts = w_parts(params_, z);
    const LogScaled e = parts.e();
    if (e.is_zero()) throw NodeError(z, "w(z) vanishes at z = " + std::to_string(z));
    WCombo out;
    out.w = LogScaled::from_log(e.sign, e.log_mag + z * z);
    out.log_e = e.log_mag;
    out.q = ratio(parts.e_dz(), e);
    out.r1 = 2.0 * z + out.q;
    out.r2 = 2.0 * z * out.r1 + 4.0 * params_.nu;
    return out;
}

LogComplex Transform::u(double x, double t) const {
    const TimeFactors f = time_factors(t);
    const double z = f.b * x;
    const WCombo wc = w_combo(z);
    LogComplex out;
    out.log_mag = f.log_b_mag + 0.5 * z * z + wc.log_e;
    out.phase = f.theta + f.alpha * x * x + (wc.w.sign < 0 ? std::numbers::pi : 0.0);
    return out;
}

std::complex<double> Transform::beta(double x, double t) const {
    const TimeFactors f = time_factors(t);
    const double z = f.b * x;
    const WCombo wc = w_combo(z);
    // z − r1 = −(z + q)
    return {-f.b * (z + wc.q), -2.0 * f.alpha * x};
}

double Transform::log_w_curvature(double z) const {
    const WCombo wc = w_combo(z);
    // r2 − r1²; the 4z² terms cancel analytically
    return 4.0 * params_.nu - wc.q * (2.0 * z + wc.q);
}

double Transform::potential(double x, double t) const {
    const TimeFactors f = time_factors(t);
    const double b2 = f.b * f.b;
    return x * x + 2.0 * b2 - 2.0 * b2 * log_w_curvature(f.b * x);
}

double Transform::mielnik_potential(double x, double t) const {
    if (params_.nu != 0.5) throw DomainError("mielnik_potential: requires nu = 1/2");
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    if (!(2.0 * params_.k_a > sqrt_pi * std::abs(params_.k_b))) {
        throw ParameterError("k_a", "singular potential: need 2 k_a > sqrt(pi) |k_b|");
    }
    const TimeFactors f = time_factors(t);
    const double z = f.b * x;
    const double b2 = f.b * f.b;
    const double gauss = std::exp(-z * z);
    const double denom = 2.0 * params_.k_a + sqrt_pi * params_.k_b * dosc::erf(z);
    // −4 k_b b ∂ₓ[e^{−z²}/denom] with ∂ₓ = b ∂_z
    const double correction = 8.0 * params_.k_b * b2 * gauss * (z * denom + params_.k_b * gauss) /
                              (denom * denom);
    return x * x - 2.0 * b2 + correction;
}

SeparationResiduals Transform::separation_residuals(double t) const {
    const double gamma = constants_.gamma;
    const double kappa = constants_.kappa;
    const double ph = 4.0 * t + params_.c2;
    const double s = std::sin(ph);
    const double c = std::cos(ph);
    const double d = params_.c1 + gamma * c;

    const double alpha = -0.5 * gamma * s / d;
    const double alpha_dot = -2.0 * gamma * (c * d + gamma * s * s) / (d * d);
    const double b = params_.c0 / std::sqrt(d);
    const double b_dot = 2.0 * params_.c0 * gamma * s / (d * std::sqrt(d));

    const double half = 0.5 * ph;
    const double sh = std::sin(half);
    const double ch = std::cos(half);
    const double theta_dot =
        (4.0 * params_.nu - 1.0) * kappa / (ch * ch + kappa * kappa * sh * sh);

    const std::complex<double> i{0.0, 1.0};
    const std::complex<double> a{0.0, alpha};
    const std::complex<double> a_dot{0.0, alpha_dot};
    const std::complex<double> log_B_dot{gamma * s / d, theta_dot};

    SeparationResiduals r;
    r.riccati = std::abs(i * a_dot + 4.0 * a * a + b * b * b * b - 1.0);
    r.b_ode = std::abs(b_dot - 4.0 * i * a * b);
    r.B_ode = i * log_B_dot + 2.0 * a - constants_.mu * b * b;
    return r;
}

}  // namespace dosc

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace dosc {

/// A real number stored as sign · exp(log_mag).
///
/// Used for quantities of order e^{z²} that overflow a double long before the
/// physics gets interesting. Products and quotients only add logarithms, so
/// they stay finite for any |log_mag| up to ~1e300.
struct LogScaled {
    int sign = 0;
    double log_mag = -std::numeric_limits<double>::infinity();

    static LogScaled zero() { return {}; }
    static LogScaled one() { return {1, 0.0}; }

    static LogScaled from_log(int sign, double log_mag) {
        if (sign == 0) return zero();
        return {sign > 0 ? 1 : -1, log_mag};
    }

    static LogScaled from_value(double v) {
        if (v == 0.0) return zero();
        return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
    }

    bool is_zero() const { return sign == 0; }

    /// Plain double; overflows to ±inf when log_mag > ~709.
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }

    LogScaled operator-() const { return {-sign, log_mag}; }

    friend LogScaled operator*(LogScaled a, LogScaled b) {
        if (a.sign == 0 || b.sign == 0) return zero();
        return {a.sign * b.sign, a.log_mag + b.log_mag};
    }

    friend LogScaled operator/(LogScaled a, LogScaled b) {
        if (b.sign == 0) {
            return {a.sign == 0 ? 0 : a.sign, std::numeric_limits<double>::infinity()};
        }
        if (a.sign == 0) return zero();
        return {a.sign * b.sign, a.log_mag - b.log_mag};
    }

    friend LogScaled operator+(LogScaled a, LogScaled b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        if (a.log_mag < b.log_mag) std::swap(a, b);
        // |a| >= |b|
        const double r = std::exp(b.log_mag - a.log_mag);
        if (a.sign == b.sign) return {a.sign, a.log_mag + std::log1p(r)};
        if (r == 1.0) return zero();
        return {a.sign, a.log_mag + std::log1p(-r)};
    }

    friend LogScaled operator-(LogScaled a, LogScaled b) { return a + (-b); }

    LogScaled scaled(double factor) const { return *this * from_value(factor); }
};

/// a / b as a plain double; meaningful whenever the ratio itself is representable.
inline double ratio(LogScaled a, LogScaled b) {
    const LogScaled q = a / b;
    return q.value();
}

}  // namespace dosc

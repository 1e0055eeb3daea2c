#pragma once

#include "dosc/log_scaled.hpp"

#include <boost/multiprecision/mpfr.hpp>

namespace dosc::oracles {

using HighPrecision = boost::multiprecision::mpfr_float;

/// A series value in MPFR arithmetic together with its tail bound.
struct ReferenceValue {
    HighPrecision value;
    HighPrecision error_bound;  // |tail| + accumulated rounding
    int terms = 0;
    int digits = 0;

    double to_double() const { return value.convert_to<double>(); }
};

/// ₁F₁(a, b; w) by direct Maclaurin summation at `digits` significant digits.
///
/// The working precision adds |w|/ln 10 guard digits for negative w, so the
/// alternating series of the Kummer-transformed side is still trustworthy.
/// Requires digits <= 60 and |w| <= 2000; throws ConvergenceError when the tail
/// bound is not met within 10⁴ terms.
ReferenceValue hyp1f1_reference(double a, double b, double w, int digits = 30);

/// erf(x) at `digits` significant digits (MPFR).
HighPrecision erf_reference(double x, int digits = 30);

/// |prod − ref| / |ref| computed without forming prod as a double.
double relative_error(LogScaled prod, const ReferenceValue& ref);

}  // namespace dosc::oracles

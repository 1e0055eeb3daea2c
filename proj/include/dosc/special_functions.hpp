#pragma once

#include "dosc/log_scaled.hpp"

namespace dosc {

/// Evaluation switches for the confluent hypergeometric function.
///
/// `series_limit`: Taylor series for w <= limit, large-w asymptotic expansion
/// beyond. The term caps bound each branch; a branch that cannot reach full
/// double precision within its cap hands over to the log-scaled series.
struct Hyp1f1Tuning {
    double series_limit = 40.0;
    int max_series_terms = 500;
    int max_asymptotic_terms = 20;
    int max_log_series_terms = 20000;
    double max_argument = 1.0e5;
};

inline constexpr Hyp1f1Tuning kHyp1f1Tuning{};

/// ₁F₁(alpha, beta; w) for beta ∈ {1/2, 3/2, 5/2} and 0 <= w <= max_argument.
///
/// Throws DomainError for any other beta or w.
LogScaled hyp1f1(double alpha, double beta, double w);

/// d/dw ₁F₁(alpha, beta; w) = (alpha/beta) ₁F₁(alpha+1, beta+1; w), beta ∈ {1/2, 3/2}.
LogScaled hyp1f1_dw(double alpha, double beta, double w);

/// e^{-w}·₁F₁(alpha, beta; w), with the e^w growth removed exactly rather than
/// subtracted from a large logarithm. Same domain as hyp1f1.
LogScaled hyp1f1_scaled(double alpha, double beta, double w);

/// d/dw of hyp1f1_scaled = ((alpha − beta)/beta)·e^{-w}·₁F₁(alpha, beta+1; w), beta ∈ {1/2, 3/2}.
LogScaled hyp1f1_scaled_dw(double alpha, double beta, double w);

/// Error function, absolute error below 1e-12 for every finite x.
double erf(double x);

/// Physicists' Hermite polynomial Hₙ(x) for 0 <= n <= 50 (three-term recurrence).
double hermite(int n, double x);

}  // namespace dosc

#include "dosc/special_functions.hpp"

#include "dosc/errors.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dosc {
namespace {

constexpr double kSeriesEps = 1e-17;

bool supported_beta(double beta) { return beta == 0.5 || beta == 1.5 || beta == 2.5; }

bool nonpositive_integer(double a) { return a <= 0.0 && a == std::floor(a); }

// log|Γ(x)| with the sign of Γ(x); lgamma_r keeps signgam out of the picture.
std::pair<double, int> log_gamma(double x) {
    int sign = 1;
    const double lg = ::lgamma_r(x, &sign);
    return {lg, sign};
}

struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Terms and sum in extended precision: the k-th term carries ~k roundings from
// the recurrence, which would otherwise cost a few ulps near the peak term.
long double taylor_series(double a, double b, double w, int max_terms) {
    long double sum = 1.0L;
    long double comp = 0.0L;
    long double term = 1.0L;
    for (int k = 0; k < max_terms; ++k) {
        const long double r = (static_cast<long double>(a) + k) * w /
                              ((static_cast<long double>(b) + k) * (k + 1));
        term *= r;
        const long double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        if (term == 0.0L) return sum + comp;
        if (std::abs(r) < 1.0L && std::abs(term) <= 1e-20L * std::abs(sum + comp)) return sum + comp;
    }
    throw ConvergenceError("hyp1f1: Taylor series did not converge within " +
                           std::to_string(max_terms) + " terms");
}

// Two-pass series with every term kept as a logarithm, then summed relative to
// the largest one. Handles polynomial cases and arguments where the
// asymptotic expansion is not accurate enough.
LogScaled log_series(double a, double b, double w, double shift, int max_terms) {
    std::vector<double> logs{0.0};
    std::vector<int> signs{1};
    double log_term = 0.0;
    int sign = 1;
    double max_log = 0.0;
    const double log_eps = std::log(kSeriesEps);
    for (int k = 0;; ++k) {
        if (k >= max_terms) {
            throw ConvergenceError("hyp1f1: log-scaled series exceeded " +
                                   std::to_string(max_terms) + " terms");
        }
        const double r = (a + k) * w / ((b + k) * (k + 1));
        if (r == 0.0) break;
        log_term += std::log(std::abs(r));
        sign *= (r > 0.0) ? 1 : -1;
        logs.push_back(log_term);
        signs.push_back(sign);
        max_log = std::max(max_log, log_term);
        if (std::abs(r) < 1.0 && log_term < max_log + log_eps) break;
    }
    Neumaier acc;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        acc.add(signs[i] * std::exp(logs[i] - max_log));
    }
    const double s = acc.value();
    if (s == 0.0) return LogScaled::zero();
    return LogScaled::from_log(s > 0.0 ? 1 : -1, (max_log - shift) + std::log(std::abs(s)));
}

// ₁F₁(a,b;w) ~ Γ(b)/Γ(a) e^w w^{a-b} Σ (b-a)_k (1-a)_k / (k! w^k).
// Returns nullopt when the subdominant e^{-w} branch is not negligible or the
// series cannot reach double precision before it starts to diverge.
// The result is multiplied by e^{-shift}; shift = w cancels e^w exactly.
std::optional<LogScaled> asymptotic(double a, double b, double w, double shift, int max_terms) {
    const auto [lga, sga] = log_gamma(a);
    const auto [lgb, sgb] = log_gamma(b);
    const double log_w = std::log(w);
    if (!nonpositive_integer(b - a)) {
        const auto [lgba, sgba] = log_gamma(b - a);
        (void)sgba;
        const double log_rel = lga - lgba - w + (b - 2.0 * a) * log_w;
        if (log_rel > std::log(kSeriesEps)) return std::nullopt;
    }
    Neumaier acc;
    acc.add(1.0);
    double term = 1.0;
    bool converged = false;
    for (int k = 0; k < max_terms; ++k) {
        const double next = term * (b - a + k) * (1.0 - a + k) / ((k + 1) * w);
        if (next == 0.0) {
            converged = true;
            break;
        }
        if (std::abs(next) > std::abs(term)) break;
        term = next;
        acc.add(term);
        if (std::abs(term) <= kSeriesEps * std::abs(acc.value())) {
            converged = true;
            break;
        }
    }
    if (!converged) return std::nullopt;
    const double s = acc.value();
    const int sign = sga * sgb * (s > 0.0 ? 1 : -1);
    return LogScaled::from_log(sign, lgb - lga + (w - shift) + (a - b) * log_w + std::log(std::abs(s)));
}

}  // namespace

namespace {

void validate(const char* who, double alpha, double beta, double w) {
    if (!supported_beta(beta)) {
        throw DomainError(std::string(who) + ": beta must be 1/2, 3/2 or 5/2, got " + std::to_string(beta));
    }
    if (!std::isfinite(alpha)) throw DomainError(std::string(who) + ": alpha must be finite");
    if (!(w >= 0.0 && w <= kHyp1f1Tuning.max_argument)) {
        throw DomainError(std::string(who) + ": argument out of range: " + std::to_string(w));
    }
}

// e^{-shift}·₁F₁(alpha, beta; w) for validated input, shift ∈ {0, w}.
LogScaled hyp1f1_shifted(double alpha, double beta, double w, double shift) {
    const Hyp1f1Tuning& cfg = kHyp1f1Tuning;
    if (w == 0.0) return LogScaled::one();
    if (alpha == 0.0) return LogScaled::from_log(1, -shift);
    if (alpha == beta) return LogScaled::from_log(1, w - shift);
    if (nonpositive_integer(alpha)) {
        return log_series(alpha, beta, w, shift, static_cast<int>(2.0 - alpha));
    }
    if (w <= cfg.series_limit) {
        const long double v = taylor_series(alpha, beta, w, cfg.max_series_terms);
        if (v == 0.0L) return LogScaled::zero();
        return LogScaled::from_log(v > 0.0L ? 1 : -1,
                                   static_cast<double>(std::log(std::abs(v)) - shift));
    }
    if (auto r = asymptotic(alpha, beta, w, shift, cfg.max_asymptotic_terms)) return *r;
    return log_series(alpha, beta, w, shift, cfg.max_log_series_terms);
}

}  // namespace

LogScaled hyp1f1(double alpha, double beta, double w) {
    validate("hyp1f1", alpha, beta, w);
    return hyp1f1_shifted(alpha, beta, w, 0.0);
}

LogScaled hyp1f1_scaled(double alpha, double beta, double w) {
    validate("hyp1f1_scaled", alpha, beta, w);
    return hyp1f1_shifted(alpha, beta, w, w);
}

LogScaled hyp1f1_scaled_dw(double alpha, double beta, double w) {
    if (beta != 0.5 && beta != 1.5) {
        throw DomainError("hyp1f1_scaled_dw: beta must be 1/2 or 3/2, got " + std::to_string(beta));
    }
    validate("hyp1f1_scaled_dw", alpha, beta, w);
    if (alpha == beta) return LogScaled::zero();
    return hyp1f1_shifted(alpha, beta + 1.0, w, w).scaled((alpha - beta) / beta);
}

LogScaled hyp1f1_dw(double alpha, double beta, double w) {
    if (beta != 0.5 && beta != 1.5) {
        throw DomainError("hyp1f1_dw: beta must be 1/2 or 3/2, got " + std::to_string(beta));
    }
    if (alpha == 0.0) {
        if (!(w >= 0.0 && w <= kHyp1f1Tuning.max_argument)) {
            throw DomainError("hyp1f1_dw: argument out of range: " + std::to_string(w));
        }
        return LogScaled::zero();
    }
    return hyp1f1(alpha + 1.0, beta + 1.0, w).scaled(alpha / beta);
}

namespace {

// erf(x) = 2x/√π · e^{-x²} · Σ (2x²)^n / (2n+1)!!, all terms positive.
double erf_series(double x) {
    const double x2 = x * x;
    Neumaier acc;
    double term = 1.0;
    acc.add(term);
    for (int n = 1; n < 400; ++n) {
        term *= 2.0 * x2 / (2 * n + 1);
        acc.add(term);
        if (term <= kSeriesEps * acc.value()) break;
    }
    return 2.0 * x / std::sqrt(std::numbers::pi) * std::exp(-x2) * acc.value();
}

// erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz.
double erfc_continued_fraction(double x) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int j = 1; j < 500; ++j) {
        const double a = 0.5 * j;
        d = x + a * d;
        if (d == 0.0) d = tiny;
        d = 1.0 / d;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x * x) / (std::sqrt(std::numbers::pi) * f);
}

}  // namespace

double erf(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return -erf(-x);
    if (x <= 3.0) return erf_series(x);
    if (std::isinf(x)) return 1.0;
    return 1.0 - erfc_continued_fraction(x);
}

double hermite(int n, double x) {
    if (n < 0 || n > 50) {
        throw DomainError("hermite: degree must be in [0, 50], got " + std::to_string(n));
    }
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace dosc

#include "dosc/oracles/reference.hpp"

#include "dosc/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dosc::oracles {
namespace {

constexpr int kMaxTerms = 10000;

// Sets the thread's default MPFR precision for the lifetime of the guard.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits10) : saved_(HighPrecision::default_precision()) {
        HighPrecision::default_precision(digits10);
    }
    ~PrecisionScope() { HighPrecision::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

}  // namespace

ReferenceValue hyp1f1_reference(double a, double b, double w, int digits) {
    if (digits < 1 || digits > 60) throw DomainError("hyp1f1_reference: digits must be in [1, 60]");
    if (!(std::abs(w) <= 2000.0)) throw DomainError("hyp1f1_reference: |w| must be <= 2000");
    if (b <= 0.0 && b == std::floor(b)) throw DomainError("hyp1f1_reference: b is a pole");

    const double cancellation_digits = w < 0.0 ? -w / std::log(10.0) : 0.0;
    const unsigned working =
        static_cast<unsigned>(digits + 25 + std::ceil(cancellation_digits));
    PrecisionScope scope(working);

    const HighPrecision ha(a);
    const HighPrecision hb(b);
    const HighPrecision hw(w);
    HighPrecision sum(1);
    HighPrecision term(1);
    HighPrecision largest(1);
    const HighPrecision target = boost::multiprecision::pow(HighPrecision(10), -(digits + 2));

    for (int k = 0; k < kMaxTerms; ++k) {
        term *= (ha + k) * hw / ((hb + k) * (k + 1));
        sum += term;
        if (term == 0) {
            ReferenceValue out{sum, HighPrecision(0), k + 1, digits};
            return out;
        }
        largest = boost::multiprecision::max(largest, abs(term));
        // Past this point every further ratio is bounded by rho < 1.
        const double kk = k + 1;
        if (kk > std::abs(a) + std::abs(b) + std::abs(w) + 2.0) {
            const double rho = std::abs(w) * (1.0 + std::abs(a - b) / (b + kk)) / (kk + 1.0);
            if (rho < 1.0) {
                const HighPrecision tail = abs(term) * rho / (1.0 - rho);
                if (tail <= target * abs(sum)) {
                    const HighPrecision rounding =
                        largest * (k + 2) * boost::multiprecision::pow(HighPrecision(10),
                                                                       -static_cast<int>(working));
                    return {sum, tail + rounding, k + 1, digits};
                }
            }
        }
    }
    throw ConvergenceError("hyp1f1_reference: tail bound not met within 10^4 terms");
}

HighPrecision erf_reference(double x, int digits) {
    PrecisionScope scope(static_cast<unsigned>(digits + 10));
    return boost::multiprecision::erf(HighPrecision(x));
}

double relative_error(LogScaled prod, const ReferenceValue& ref) {
    const int ref_sign = ref.value > 0 ? 1 : (ref.value < 0 ? -1 : 0);
    if (ref_sign == 0) {
        return prod.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (prod.sign != ref_sign) return std::numeric_limits<double>::infinity();
    PrecisionScope scope(static_cast<unsigned>(ref.digits + 10));
    const HighPrecision log_ref = log(abs(ref.value));
    const double diff = (HighPrecision(prod.log_mag) - log_ref).convert_to<double>();
    return std::abs(std::expm1(diff));
}

}  // namespace dosc::oracles

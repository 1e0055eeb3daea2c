#pragma once

#include "dosc/grid.hpp"
#include "dosc/transform.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dosc {

inline constexpr int kMaxOscillatorLevel = 40;

/// Normalized Hermite function e^{−x²/2} Hₙ(x)/√(2ⁿ n! √π), via the stable
/// normalized recurrence.
double hermite_function(int n, double x);
double hermite_function_dx(int n, double x);

/// Oscillator eigenstate φₙ(x, t) of iφ_t + φ_xx − x²φ = 0, 0 <= n <= 40.
std::complex<double> phi(int n, double x, double t);
std::complex<double> phi_dx(int n, double x, double t);

/// L g = ℓ(t)[β(x, t) g + gₓ] for a function given by its value and x-derivative.
std::complex<double> apply_intertwiner(const Transform& tr, double x, double t,
                                       std::complex<double> value,
                                       std::complex<double> dx_value);

/// L φₖ for any k >= 0.
std::complex<double> intertwined_phi(const Transform& tr, int k, double x, double t);

/// ψₙ = L φₙ₊₁, n >= 0.
std::complex<double> psi(const Transform& tr, int n, double x, double t);

/// ψ₀ = 1/(ℓ u*): the deformed-equation solution not reachable as L φ.
std::complex<double> missing_state(const Transform& tr, double x, double t);

/// Which wavefunction a grid evaluation or propagation refers to.
struct StateSpec {
    enum class Kind { phi, intertwined, missing };

    Kind kind = Kind::missing;
    int index = 0;  // n of φₙ, or k of L φₖ

    static StateSpec oscillator(int n) { return {Kind::phi, n}; }
    static StateSpec intertwined(int k) { return {Kind::intertwined, k}; }
    static StateSpec psi(int n) { return {Kind::intertwined, n + 1}; }
    static StateSpec missing() { return {Kind::missing, 0}; }

    /// "phi2", "Lphi1", "missing"; parse() accepts the same spellings.
    std::string label() const;
    static StateSpec parse(const std::string& label);
};

std::complex<double> evaluate_state(const Transform& tr, StateSpec s, double x, double t);

/// Dense evaluation split over `partitions` worker threads; the result does not
/// depend on the partition count.
WaveField grid_eval(const Transform& tr, StateSpec s, const Grid& grid, double t,
                    std::size_t partitions = 1);
RealField grid_eval_potential(const Transform& tr, const Grid& grid, double t,
                              std::size_t partitions = 1);

/// max(|ψ(x_first)|, |ψ(x_last)|) / max|ψ|.
double boundary_ratio(const WaveField& f);

/// Composite Simpson rule; a trailing odd interval is closed with Simpson's 3/8 rule.
double simpson(std::span<const double> f, double dx);

/// √∫|ψ|² dx by composite Simpson.
double norm_l2(const WaveField& f);

struct Extremum {
    double x = 0.0;
    double value = 0.0;  // |ψ|² at x
};

struct ZeroCensus {
    int count = 0;                       // interior minima of |ψ|² below threshold·max|ψ|²
    std::vector<double> locations;       // where those zeros are
    std::vector<Extremum> minima;        // every refined local minimum
    std::vector<double> maxima;          // local maxima of |ψ|²
    std::optional<int> sign_changes;     // real fields only
    double max_abs2 = 0.0;
};

/// Local minima of |ψ|² are refined on the quadratic interpolant through their
/// neighbours, so zeros between grid points come out at ~0 rather than at
/// (dx·|ψ′|)². A refined minimum below rel_threshold·max|ψ|² counts as a zero
/// when above-threshold samples lie on both sides of it; decayed tails do not count.
ZeroCensus zero_census(const WaveField& f, double rel_threshold = 1e-6);
ZeroCensus zero_census(const RealField& f, double rel_threshold = 1e-6);

}  // namespace dosc

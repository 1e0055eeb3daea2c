#include "dosc/solutions.hpp"

#include "dosc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace dosc {

Grid Grid::closed(double x_min, double x_max, std::size_t n) {
    if (n < 2 || !(x_max > x_min)) throw DomainError("Grid::closed: need n >= 2 and x_max > x_min");
    return {x_min, (x_max - x_min) / static_cast<double>(n - 1), n};
}

Grid Grid::periodic(double x_min, double x_max, std::size_t n) {
    if (n < 2 || !(x_max > x_min)) throw DomainError("Grid::periodic: need n >= 2 and x_max > x_min");
    return {x_min, (x_max - x_min) / static_cast<double>(n), n};
}

std::vector<double> Grid::points() const {
    std::vector<double> xs(n);
    for (std::size_t j = 0; j < n; ++j) xs[j] = x(j);
    return xs;
}

namespace {

void check_level(int n) {
    if (n < 0 || n > kMaxOscillatorLevel) {
        throw DomainError("oscillator level must be in [0, 40], got " + std::to_string(n));
    }
}

// h_n and h_{n−1} together; h_{−1} := 0.
std::pair<double, double> hermite_function_pair(int n, double x) {
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    for (int k = 0; k < n; ++k) {
        const double next =
            std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

std::complex<double> time_phase(int n, double t) { return std::polar(1.0, -(2.0 * n + 1.0) * t); }

}  // namespace

double hermite_function(int n, double x) {
    check_level(n);
    return hermite_function_pair(n, x).first;
}

double hermite_function_dx(int n, double x) {
    check_level(n);
    // φₙ′ = √(2n) φₙ₋₁ − x φₙ
    const auto [h, h_prev] = hermite_function_pair(n, x);
    return std::sqrt(2.0 * n) * h_prev - x * h;
}

std::complex<double> phi(int n, double x, double t) { return hermite_function(n, x) * time_phase(n, t); }

std::complex<double> phi_dx(int n, double x, double t) {
    return hermite_function_dx(n, x) * time_phase(n, t);
}

std::complex<double> apply_intertwiner(const Transform& tr, double x, double t,
                                       std::complex<double> value, std::complex<double> dx_value) {
    const double ell = tr.time_factors(t).ell;
    return ell * (tr.beta(x, t) * value + dx_value);
}

std::complex<double> intertwined_phi(const Transform& tr, int k, double x, double t) {
    check_level(k);
    return apply_intertwiner(tr, x, t, phi(k, x, t), phi_dx(k, x, t));
}

std::complex<double> psi(const Transform& tr, int n, double x, double t) {
    if (n < 0) throw DomainError("psi: index must be >= 0");
    return intertwined_phi(tr, n + 1, x, t);
}

std::complex<double> missing_state(const Transform& tr, double x, double t) {
    const LogComplex u = tr.u(x, t);
    const double ell = tr.time_factors(t).ell;
    // 1/u* = e^{i arg u}/|u|
    return std::polar(std::exp(-u.log_mag) / ell, u.phase);
}

std::string StateSpec::label() const {
    switch (kind) {
        case Kind::phi: return "phi" + std::to_string(index);
        case Kind::intertwined: return "Lphi" + std::to_string(index);
        case Kind::missing: return "missing";
    }
    return "missing";
}

StateSpec StateSpec::parse(const std::string& label) {
    const auto number = [&](std::size_t prefix) {
        const std::string digits = label.substr(prefix);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
            throw DomainError("unknown state label: " + label);
        }
        return std::stoi(digits);
    };
    if (label == "missing" || label == "psi0_missing") return missing();
    if (label.rfind("Lphi", 0) == 0) return intertwined(number(4));
    if (label.rfind("phi", 0) == 0) return oscillator(number(3));
    if (label.rfind("psi", 0) == 0) return psi(number(3));
    throw DomainError("unknown state label: " + label);
}

std::complex<double> evaluate_state(const Transform& tr, StateSpec s, double x, double t) {
    switch (s.kind) {
        case StateSpec::Kind::phi: return phi(s.index, x, t);
        case StateSpec::Kind::intertwined: return intertwined_phi(tr, s.index, x, t);
        case StateSpec::Kind::missing: return missing_state(tr, x, t);
    }
    return {};
}

namespace {

template <class T, class Fn>
std::vector<T> parallel_fill(const Grid& grid, std::size_t partitions, Fn&& fn) {
    std::vector<T> values(grid.n);
    partitions = std::clamp<std::size_t>(partitions, 1, std::max<std::size_t>(grid.n, 1));
    const auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) values[j] = fn(grid.x(j));
    };
    if (partitions == 1) {
        work(0, grid.n);
        return values;
    }
    {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (grid.n + partitions - 1) / partitions;
        for (std::size_t begin = 0; begin < grid.n; begin += chunk) {
            workers.emplace_back(work, begin, std::min(grid.n, begin + chunk));
        }
    }
    return values;
}

}  // namespace

WaveField grid_eval(const Transform& tr, StateSpec s, const Grid& grid, double t,
                    std::size_t partitions) {
    WaveField f{grid, t, {}};
    f.values = parallel_fill<std::complex<double>>(
        grid, partitions, [&](double x) { return evaluate_state(tr, s, x, t); });
    return f;
}

RealField grid_eval_potential(const Transform& tr, const Grid& grid, double t,
                              std::size_t partitions) {
    RealField f{grid, t, {}};
    f.values = parallel_fill<double>(grid, partitions,
                                     [&](double x) { return tr.potential(x, t); });
    return f;
}

double boundary_ratio(const WaveField& f) {
    double peak = 0.0;
    for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0 || f.values.empty()) return 0.0;
    return std::max(std::abs(f.values.front()), std::abs(f.values.back())) / peak;
}

double simpson(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    if (n < 3 || !(dx > 0.0)) throw DomainError("simpson: degenerate grid");
    std::size_t intervals = n - 1;
    double tail = 0.0;
    if (intervals % 2 == 1) {
        if (n < 4) throw DomainError("simpson: degenerate grid");
        const std::size_t k = n - 4;
        tail = 3.0 * dx / 8.0 * (f[k] + 3.0 * f[k + 1] + 3.0 * f[k + 2] + f[k + 3]);
        intervals -= 3;
    }
    double sum = 0.0;
    if (intervals > 0) {
        sum = f[0] + f[intervals];
        for (std::size_t j = 1; j < intervals; ++j) sum += (j % 2 == 1 ? 4.0 : 2.0) * f[j];
        sum *= dx / 3.0;
    }
    return sum + tail;
}

double norm_l2(const WaveField& f) {
    std::vector<double> a2(f.values.size());
    std::transform(f.values.begin(), f.values.end(), a2.begin(),
                   [](const std::complex<double>& v) { return std::norm(v); });
    return std::sqrt(simpson(a2, f.grid.dx));
}

namespace {

// Minimum of |p(s)|² on s ∈ [−1, 1], p the quadratic through ψ_{j−1}, ψ_j, ψ_{j+1}.
std::pair<double, double> refine_minimum(std::complex<double> left, std::complex<double> mid,
                                         std::complex<double> right) {
    const std::complex<double> c1 = 0.5 * (right - left);
    const std::complex<double> c2 = 0.5 * (right - 2.0 * mid + left);
    const auto g = [&](double s) { return std::norm(mid + s * (c1 + s * c2)); };
    constexpr int coarse = 64;
    int best = coarse / 2;
    for (int i = 0; i <= coarse; ++i) {
        if (g(-1.0 + 2.0 * i / coarse) < g(-1.0 + 2.0 * best / coarse)) best = i;
    }
    double lo = -1.0 + 2.0 * std::max(best - 1, 0) / coarse;
    double hi = -1.0 + 2.0 * std::min(best + 1, coarse) / coarse;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    for (int it = 0; it < 80; ++it) {
        if (g(a) < g(b)) {
            hi = b;
        } else {
            lo = a;
        }
        a = hi - inv_phi * (hi - lo);
        b = lo + inv_phi * (hi - lo);
    }
    const double s = 0.5 * (lo + hi);
    return {s, std::min(g(s), std::norm(mid))};
}

ZeroCensus census_impl(const Grid& grid, const std::vector<std::complex<double>>& v,
                       double rel_threshold) {
    ZeroCensus out;
    const std::size_t n = v.size();
    for (const auto& z : v) out.max_abs2 = std::max(out.max_abs2, std::norm(z));
    if (n < 3 || out.max_abs2 == 0.0) return out;
    const double threshold = rel_threshold * out.max_abs2;
    // Tails that decay below the threshold are not nodes; a zero needs
    // above-threshold values on both sides.
    std::size_t first = 0;
    while (std::norm(v[first]) < threshold) ++first;
    std::size_t last = n - 1;
    while (std::norm(v[last]) < threshold) --last;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double l = std::norm(v[j - 1]);
        const double m = std::norm(v[j]);
        const double r = std::norm(v[j + 1]);
        if (m <= l && m < r) {
            const auto [s, value] = refine_minimum(v[j - 1], v[j], v[j + 1]);
            const double x = grid.x(j) + s * grid.dx;
            out.minima.push_back({x, value});
            if (value < threshold && j > first && j < last) {
                ++out.count;
                out.locations.push_back(x);
            }
        } else if (m >= l && m > r) {
            out.maxima.push_back(grid.x(j));
        }
    }
    return out;
}

}  // namespace

ZeroCensus zero_census(const WaveField& f, double rel_threshold) {
    return census_impl(f.grid, f.values, rel_threshold);
}

ZeroCensus zero_census(const RealField& f, double rel_threshold) {
    std::vector<std::complex<double>> v(f.values.begin(), f.values.end());
    ZeroCensus out = census_impl(f.grid, v, rel_threshold);
    int changes = 0;
    int prev = 0;
    for (double x : f.values) {
        const int s = (x > 0.0) - (x < 0.0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    out.sign_changes = changes;
    return out;
}

}  // namespace dosc

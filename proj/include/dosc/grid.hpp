#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace dosc {

/// Uniform grid x_j = x0 + j·dx, j = 0..n−1.
struct Grid {
    double x0 = 0.0;
    double dx = 1.0;
    std::size_t n = 0;

    double x(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }

    /// Both endpoints included: dx = (x_max − x_min)/(n − 1).
    static Grid closed(double x_min, double x_max, std::size_t n);
    /// Periodic box [x_min, x_max): dx = (x_max − x_min)/n.
    static Grid periodic(double x_min, double x_max, std::size_t n);

    std::vector<double> points() const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Samples of a wavefunction (complex) or potential (real) at a fixed time.
template <class T>
struct GridField {
    Grid grid;
    double t = 0.0;
    std::vector<T> values;
};

using WaveField = GridField<std::complex<double>>;
using RealField = GridField<double>;

}  // namespace dosc

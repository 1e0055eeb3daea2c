#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dosc/errors.hpp"
#include "dosc/oracles/checks.hpp"
#include "dosc/oracles/propagator.hpp"
#include "dosc/oracles/reference.hpp"
#include "dosc/oracles/residuals.hpp"
#include "dosc/solutions.hpp"

#include <cmath>
#include <numbers>

using namespace dosc;
using namespace dosc::oracles;

namespace {

constexpr double kPi = std::numbers::pi;

const TransformParams kFig1a{1.0, 10.0, 0.0, 2.0, 5.0, 2.0};
const TransformParams kFig1b{1.0, 10.0, 0.0, 1.3 * std::sqrt(kPi), 2.0, 0.5};

WaveField sample(const Grid& g, double t, int n) {
    WaveField f{g, t, {}};
    for (std::size_t j = 0; j < g.n; ++j) f.values.push_back(phi(n, g.x(j), t));
    return f;
}

}  // namespace

TEST_CASE("reference series: e, pinned value, Kummer transformation") {
    const ReferenceValue e = hyp1f1_reference(0.5, 0.5, 1.0, 30);
    const unsigned saved = HighPrecision::default_precision();
    HighPrecision::default_precision(60);
    const HighPrecision diff = abs(e.value - exp(HighPrecision(1)));
    CHECK(diff.convert_to<double>() < 1e-29);

    CHECK(hyp1f1_reference(2.0, 0.5, 1.0).to_double() == doctest::Approx(12.15039234639352).epsilon(1e-15));

    const ReferenceValue lhs = hyp1f1_reference(2.0, 0.5, 5.0, 30);
    const ReferenceValue rhs = hyp1f1_reference(-1.5, 0.5, -5.0, 30);
    const HighPrecision kummer = exp(HighPrecision(5)) * rhs.value;
    CHECK((abs(lhs.value - kummer) / abs(lhs.value)).convert_to<double>() < 1e-28);
    HighPrecision::default_precision(saved);

    CHECK_THROWS_AS(hyp1f1_reference(1.0, 0.5, 2500.0), DomainError);
    CHECK_THROWS_AS(hyp1f1_reference(1.0, 0.5, 1.0, 80), DomainError);
}

TEST_CASE("erf reference") {
    CHECK(erf_reference(1.0).convert_to<double>() == doctest::Approx(0.8427007929497149).epsilon(1e-16));
}

TEST_CASE("finite-difference derivatives") {
    const auto f = [](double x) { return std::complex<double>(std::sin(x), std::exp(0.5 * x)); };
    const Derivative d1 = d1_fourth(f, 0.4, 1e-2);
    CHECK(std::abs(d1.value - std::complex<double>(std::cos(0.4), 0.5 * std::exp(0.2))) < 1e-12);
    const Derivative d2 = d2_fourth(f, 0.4, 1e-2);
    CHECK(std::abs(d2.value - std::complex<double>(-std::sin(0.4), 0.25 * std::exp(0.2))) < 1e-9);
    const Derivative dt = d1_second(f, 0.4, 1e-3);
    CHECK(std::abs(dt.value - std::complex<double>(std::cos(0.4), 0.5 * std::exp(0.2))) < 1e-11);
}

TEST_CASE("TDSE residual of an oscillator state under x^2") {
    const FdResidual r = fd_tdse_residual([](double x, double t) { return phi(2, x, t); }, harmonic_potential,
                                          0.5, 0.3);
    CHECK(std::abs(r.residual) <= 1e-8);
    CHECK_THROWS_AS(fd_tdse_residual([](double x, double t) { return phi(2, x, t); }, harmonic_potential, 0.5,
                                     0.3, FdSteps{1e-3, 1e-9, 1e-3}),
                    DomainError);
}

TEST_CASE("u and psi_1 solve their equations on the probe lattice") {
    const Transform tr(kFig1a);
    const ResidualReport u = check_u_equation(tr, ProbeLattice{}, kLatticeSteps, 1e-6);
    CHECK(u.pass);
    CHECK(u.max_rel <= 1e-6);
    const ResidualReport psi1 = check_deformed_equation(tr, {StateSpec::psi(1)}, ProbeLattice{}, kLatticeSteps, 1e-5);
    CHECK(psi1.pass);
    CHECK(psi1.max_rel <= 1e-5);
}

TEST_CASE("wrong potential is visible in the TDSE residual") {
    const Transform tr(kFig1a);
    const FdResidual r = fd_tdse_residual([&](double x, double t) { return psi(tr, 1, x, t); }, harmonic_potential,
                                          0.3, 0.5, kLatticeSteps);
    CHECK(r.relative() > 1e-2);
}

TEST_CASE("intertwining relation for phi_3 and a static Gaussian") {
    const Transform tr(kFig1a);
    const FdResidual a = intertwining_residual(tr, [](double x, double t) { return phi(3, x, t); }, 0.8, 0.2);
    CHECK(a.relative() <= 1e-4);
    const FdResidual g = intertwining_residual(
        tr, [](double x, double) { return std::complex<double>(std::exp(-(x - 1) * (x - 1)), 0.0); }, 0.8, 0.2);
    CHECK(g.relative() <= 1e-4);
}

TEST_CASE("intertwining with V0 in place of V1 fails") {
    const Transform tr(kFig1a);
    IntertwiningOptions opts;
    opts.deformed_potential = harmonic_potential;
    // V₁ − V₀ ≈ −3.65 here
    const FdResidual r =
        intertwining_residual(tr, [](double x, double t) { return phi(3, x, t); }, -1.5, 0.6, opts);
    CHECK(r.relative() > 1e-1);
    const ResidualReport control = check_mismatched_intertwining(tr, 1e-1, 1e-4);
    CHECK(control.pass);
    CHECK(control.max_rel > 1e-1);
}

TEST_CASE("l2 relative error") {
    const Grid g = Grid::periodic(-8.0, 8.0, 256);
    const WaveField a = sample(g, 0.0, 0);
    CHECK(l2_relative_error(a, a) == 0.0);
    WaveField twice = a;
    for (auto& v : twice.values) v *= 2.0;
    CHECK(l2_relative_error(a, twice) == doctest::Approx(0.5).epsilon(1e-14));
    const WaveField one = sample(g, 0.0, 1);
    WaveField perturbed = a;
    for (std::size_t j = 0; j < g.n; ++j) perturbed.values[j] += 1e-6 * one.values[j];
    CHECK(l2_relative_error(perturbed, a) == doctest::Approx(1e-6).epsilon(1e-2));

    const WaveField other = sample(Grid::periodic(-8.0, 8.0, 512), 0.0, 0);
    CHECK_THROWS_AS(l2_relative_error(a, other), GridMismatchError);
}

TEST_CASE("split-step: stationary oscillator state") {
    const Grid g = Grid::periodic(-8.0, 8.0, 2048);
    PropagationOptions opts;
    opts.dt = 1e-4;
    const PropagationResult r = split_step_evolve(sample(g, 0.0, 0), harmonic_grid_potential(), kPi / 4, opts);
    CHECK(r.steps == 7854);
    CHECK(l2_relative_error(r.field, sample(g, kPi / 4, 0)) <= 1e-6);
    CHECK(r.norm_drift < 1e-10);
}

TEST_CASE("split-step: deformed state over a short interval, second order in dt") {
    const Transform tr(kFig1b);
    const Grid g = Grid::periodic(-8.0, 8.0, 2048);
    const WaveField start = grid_eval(tr, StateSpec::psi(1), g, 0.0);
    const WaveField exact = grid_eval(tr, StateSpec::psi(1), g, 0.1);
    PropagationOptions fine;
    fine.dt = 2e-4;
    PropagationOptions coarse;
    coarse.dt = 4e-4;
    const double e_fine = l2_relative_error(split_step_evolve(start, tr, 0.1, fine).field, exact);
    const double e_coarse = l2_relative_error(split_step_evolve(start, tr, 0.1, coarse).field, exact);
    CHECK(e_fine <= 1e-4);
    CHECK(std::log2(e_coarse / e_fine) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("tabulated V1 agrees with direct evaluation") {
    for (const TransformParams& p : {kFig1a, kFig1b}) {
        const Transform tr(p);
        const Grid g = Grid::periodic(-32.0, 32.0, 4096);
        const std::vector<double> xs = g.points();
        const GridPotential tab = tabulated_grid_potential(tr, 32.0, 0.0, kPi / 4);
        const GridPotential direct = deformed_grid_potential(tr);
        std::vector<double> a(g.n);
        std::vector<double> b(g.n);
        double worst = 0.0;
        for (double t : {0.0, 0.11, kPi / 8, 0.6, kPi / 4}) {
            tab(t, xs, a);
            direct(t, xs, b);
            for (std::size_t j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(a[j] - b[j]) / (1.0 + std::abs(b[j])));
        }
        CHECK(worst <= 1e-10);
    }
    // a table that would be too large falls back to direct evaluation
    const Transform tr(kFig1b);
    const GridPotential fallback = tabulated_grid_potential(tr, 32.0, 0.0, kPi / 4, 2.5e-3, 100);
    std::vector<double> xs{-3.0, 0.5, 7.0};
    std::vector<double> v(3);
    fallback(0.3, xs, v);
    for (std::size_t j = 0; j < xs.size(); ++j) CHECK(v[j] == tr.potential(xs[j], 0.3));
}

TEST_CASE("split-step preconditions") {
    const WaveField odd = sample(Grid::periodic(-8.0, 8.0, 1000), 0.0, 0);
    CHECK_THROWS_AS(split_step_evolve(odd, harmonic_grid_potential(), 0.1), DomainError);
    const Grid g = Grid::periodic(-8.0, 8.0, 256);
    PropagationOptions big;
    big.dt = 1e-2;
    CHECK_THROWS_AS(split_step_evolve(sample(g, 0.0, 0), harmonic_grid_potential(), 0.1, big), DomainError);
    // φ₀ on [−2, 2) is far from negligible at the edges
    const WaveField cut = sample(Grid::periodic(-2.0, 2.0, 256), 0.0, 0);
    CHECK_THROWS_AS(split_step_evolve(cut, harmonic_grid_potential(), 0.1), BoundaryLeakError);
}

TEST_CASE("propagation grid widens the box for the missing state") {
    const Transform tr(kFig1b);
    const std::vector<double> times{0.0, kPi / 8, kPi / 4};
    const Grid narrow = propagation_grid(tr, StateSpec::psi(1), -8.0, 8.0, 2048, times);
    CHECK(narrow == Grid::periodic(-8.0, 8.0, 2048));
    const Grid wide = propagation_grid(tr, StateSpec::missing(), -8.0, 8.0, 1024, times);
    CHECK(wide.n > 1024);
    CHECK(wide.dx == doctest::Approx(16.0 / 1024));
    CHECK(boundary_ratio(grid_eval(tr, StateSpec::missing(), wide, 0.0)) <= 1e-10);
}

TEST_CASE("report settling by mode") {
    ResidualReport r;
    r.tolerance = 1e-3;
    r.max_rel = 5e-4;
    r.max_abs = 5e-2;
    r.mode = CheckMode::relative;
    r.settle();
    CHECK(r.pass);
    r.mode = CheckMode::absolute;
    r.settle();
    CHECK_FALSE(r.pass);
    r.mode = CheckMode::must_exceed;
    r.settle();
    CHECK_FALSE(r.pass);
    r.max_rel = 2e-3;
    r.settle();
    CHECK(r.pass);
    r.max_rel = std::nan("");
    r.mode = CheckMode::relative;
    r.settle();
    CHECK_FALSE(r.pass);
}

TEST_CASE("tolerance lookup falls back to defaults") {
    Tolerances custom{{"u_equation", 1e-3}};
    CHECK(tolerance_for(custom, "u_equation") == 1e-3);
    CHECK(tolerance_for(custom, "deformed_equation") == 1e-5);
    CHECK(default_tolerances().count("propagation") == 1);
}

TEST_CASE("the static and trivial limits") {
    const Grid g = Grid::closed(-8.0, 8.0, 401);
    const std::vector<double> times{0.0, kPi / 8, kPi / 4};
    CHECK(check_static_limit(kFig1b, g, times, 1e-12).pass);
    CHECK(check_trivial_limit(g, times, 1e-12).pass);
}

TEST_CASE("perturbed gamma is detected, also from the static limit") {
    CHECK(check_perturbed_gamma(kFig1a, 1.01, 1e-3).pass);
    CHECK(check_perturbed_gamma({1.0, 1.0, 0.0, 1.0, 0.0, 0.5}, 1.01, 1e-3).pass);
    CHECK(check_perturbed_gamma({1.0, 10.0, 1.1, 2.0, 5.0, 2.0}, 1.01, 1e-3).pass);
}

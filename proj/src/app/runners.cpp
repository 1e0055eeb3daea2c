#include "dosc/app/runners.hpp"

#include "dosc/errors.hpp"
#include "dosc/oracles/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

namespace dosc::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using oracles::ResidualReport;

constexpr double kPi = std::numbers::pi;

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Grid closed_grid(const GridSpec& g) { return Grid::closed(g.x_min, g.x_max, g.n); }

double tol(const RunConfig& cfg, const std::string& name) {
    return oracles::tolerance_for(cfg.tolerances, name);
}

std::string stem(const RunConfig& cfg, const std::string& kind) { return kind + "_" + cfg.label(); }

json params_json(const TransformParams& p) {
    return {{"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}, {"k_a", p.k_a}, {"k_b", p.k_b}, {"nu", p.nu}};
}

json grid_json(const Grid& g) {
    return {{"x_min", g.x(0)}, {"dx", g.dx}, {"n", g.n}};
}

std::vector<double> sorted_times(std::vector<double> times) {
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

// Five checkpoints spanning the configured times (a quarter period if only one).
std::vector<double> norm_times(const std::vector<double>& times) {
    const auto [lo_it, hi_it] = std::minmax_element(times.begin(), times.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (hi - lo < 1e-12) hi = lo + kPi / 4.0;
    std::vector<double> out;
    for (int k = 0; k < 5; ++k) out.push_back(lo + (hi - lo) * k / 4.0);
    return out;
}

// A check that throws becomes a failing report instead of aborting the battery.
template <class F>
ResidualReport guarded(const std::string& name, double tolerance, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        ResidualReport r;
        r.name = name;
        r.tolerance = tolerance;
        r.max_abs = r.max_rel = std::numeric_limits<double>::quiet_NaN();
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
        return r;
    }
}

Transform battery_transform(const RunConfig& cfg) {
    Transform tr = make_transform(cfg);
    if (cfg.gamma_scale == 1.0) return tr;
    DerivedConstants c = tr.constants();
    c.gamma *= cfg.gamma_scale;
    return Transform::with_constants(cfg.params, c);
}

RunOutcome outcome_of(const std::vector<ResidualReport>& reports) {
    RunOutcome out;
    for (const auto& r : reports) {
        if (!r.pass) {
            out.pass = false;
            out.failures.push_back(r.name);
        }
    }
    return out;
}

}  // namespace

void RunOutcome::absorb(const RunOutcome& other) {
    pass = pass && other.pass;
    files.insert(files.end(), other.files.begin(), other.files.end());
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string json_text(const json& doc) { return doc.dump(2) + "\n"; }

json report_json(const ResidualReport& r) {
    const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    const char* mode = r.mode == oracles::CheckMode::relative   ? "relative"
                       : r.mode == oracles::CheckMode::absolute ? "absolute"
                                                                : "must_exceed";
    return {{"name", r.name},     {"max_abs", num(r.max_abs)}, {"max_rel", num(r.max_rel)},
            {"tolerance", r.tolerance}, {"mode", mode},        {"pass", r.pass},
            {"grid", r.grid_spec}, {"detail", r.detail}};
}

std::string potential_csv(const Transform& tr, const Grid& grid, double t) {
    const RealField v = grid_eval_potential(tr, grid, t, workers());
    std::string out = "x,V1,V1_minus_V0\n";
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        out += format_double(x) + "," + format_double(v.values[j]) + "," +
               format_double(v.values[j] - x * x) + "\n";
    }
    return out;
}

StateColumns state_columns(const Transform& tr, const Grid& grid, double t, int phi_offset) {
    StateColumns cols;
    cols.grid = grid;
    cols.t = t;
    cols.specs = {StateSpec::missing(), StateSpec::intertwined(phi_offset),
                  StateSpec::intertwined(phi_offset + 1)};
    for (const StateSpec& s : cols.specs) cols.fields.push_back(grid_eval(tr, s, grid, t, workers()));
    return cols;
}

std::string states_csv(const StateColumns& cols) {
    std::string out = "x,abs2_psi0_missing,abs2_psi1,abs2_psi2\n";
    for (std::size_t j = 0; j < cols.grid.n; ++j) {
        out += format_double(cols.grid.x(j));
        for (const auto& f : cols.fields) out += "," + format_double(std::norm(f.values[j]));
        out += "\n";
    }
    return out;
}

json census_json(const StateColumns& cols) {
    static const char* names[] = {"abs2_psi0_missing", "abs2_psi1", "abs2_psi2"};
    json curves = json::array();
    for (std::size_t c = 0; c < cols.fields.size(); ++c) {
        const ZeroCensus z = zero_census(cols.fields[c]);
        curves.push_back({{"column", names[c]},
                          {"state", cols.specs[c].label()},
                          {"zeros", z.count},
                          {"zero_locations", z.locations},
                          {"maxima", z.maxima},
                          {"max_abs2", z.max_abs2}});
    }
    return {{"schema_version", "1"}, {"t", cols.t}, {"curves", curves}};
}

Grid wide_closed_grid(const Transform& tr, const Grid& base, const std::vector<double>& times,
                      double edge_limit) {
    Grid g = base;
    for (;;) {
        double worst = 0.0;
        for (double t : times) {
            worst = std::max(worst, boundary_ratio(grid_eval(tr, StateSpec::missing(), g, t, workers())));
        }
        if (worst < edge_limit || g.n > (1u << 16)) return g;
        const double half = 0.5 * g.dx * static_cast<double>(g.n - 1);
        const double centre = g.x0 + half;
        g = Grid::closed(centre - 2.0 * half, centre + 2.0 * half, 2 * (g.n - 1) + 1);
    }
}

std::vector<ResidualReport> validation_battery(const RunConfig& cfg) {
    const Transform tr = battery_transform(cfg);
    const TransformParams& p = cfg.params;
    const Grid grid = closed_grid(cfg.grid);
    const std::vector<double> times = sorted_times(cfg.times);
    const std::vector<StateSpec> states{StateSpec::missing(), StateSpec::intertwined(1),
                                        StateSpec::intertwined(2), StateSpec::intertwined(3)};
    const oracles::ProbeLattice lattice;
    std::vector<ResidualReport> out;
    const auto run = [&](const std::string& name, auto&& f) {
        out.push_back(guarded(name, tol(cfg, name), f));
    };

    run("separation_odes", [&] { return oracles::check_separation(tr, 64, tol(cfg, "separation_odes")); });
    run("u_equation", [&] {
        return oracles::check_u_equation(tr, lattice, oracles::kLatticeSteps, tol(cfg, "u_equation"));
    });
    run("deformed_equation", [&] {
        return oracles::check_deformed_equation(tr, states, lattice, oracles::kLatticeSteps,
                                                tol(cfg, "deformed_equation"));
    });
    run("intertwining", [&] { return oracles::check_intertwining(tr, tol(cfg, "intertwining")); });
    run("v1_cross_form", [&] {
        return oracles::check_v1_cross_form(tr, grid, times, tol(cfg, "v1_cross_form"));
    });
    run("v1_complex_form", [&] {
        return oracles::check_v1_complex_form(tr, grid, times, tol(cfg, "v1_complex_form"));
    });
    run("reality_phase", [&] {
        return oracles::check_reality_phase(tr, grid, times, tol(cfg, "reality_phase"));
    });
    run("ell_integral", [&] { return oracles::check_ell_integral(tr, 16, tol(cfg, "ell_integral")); });
    if (p.nu == 0.5) {
        run("mielnik_form", [&] { return oracles::check_mielnik(tr, grid, times, tol(cfg, "mielnik_form")); });
    }
    run("static_limit", [&] {
        return oracles::check_static_limit(p, grid, times, tol(cfg, "static_limit"));
    });
    run("trivial_limit", [&] { return oracles::check_trivial_limit(grid, times, tol(cfg, "trivial_limit")); });
    run("norm_conservation", [&] {
        const std::vector<double> nt = norm_times(times);
        const Grid wide = wide_closed_grid(tr, grid, nt);
        return oracles::check_norm_conservation(tr, states, grid, wide, nt, tol(cfg, "norm_conservation"));
    });
    run("hyp1f1_oracle", [&] { return oracles::check_hyp1f1_oracle(tol(cfg, "hyp1f1_oracle")); });
    run("wronskian", [&] { return oracles::check_wronskian(tol(cfg, "wronskian")); });
    run("control_perturbed_gamma", [&] {
        return oracles::check_perturbed_gamma(p, 1.01, tol(cfg, "control_perturbed_gamma"));
    });
    run("control_mismatched_intertwining", [&] {
        return oracles::check_mismatched_intertwining(make_transform(cfg),
                                                      tol(cfg, "control_mismatched_intertwining"),
                                                      tol(cfg, "intertwining"));
    });
    return out;
}

RunOutcome run_potential(const RunConfig& cfg, const fs::path& out_dir) {
    const Transform tr = make_transform(cfg);
    const Grid grid = closed_grid(cfg.grid);
    RunOutcome out;
    json files = json::array();
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
        const std::string name = stem(cfg, "potential") + "_t" + std::to_string(k) + ".csv";
        write_atomic(out_dir / name, potential_csv(tr, grid, cfg.times[k]));
        out.files.push_back(out_dir / name);
        files.push_back({{"t", cfg.times[k]}, {"file", name}});
    }
    const json manifest{{"schema_version", "1"}, {"label", cfg.label()}, {"params", params_json(cfg.params)},
                        {"grid", grid_json(grid)}, {"files", files}};
    const fs::path mpath = out_dir / (stem(cfg, "potential") + ".json");
    write_atomic(mpath, json_text(manifest));
    out.files.push_back(mpath);
    return out;
}

RunOutcome run_states(const RunConfig& cfg, const fs::path& out_dir) {
    const Transform tr = make_transform(cfg);
    const Grid grid = closed_grid(cfg.grid);
    RunOutcome out;
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
        const StateColumns cols = state_columns(tr, grid, cfg.times[k], cfg.phi_offset);
        const std::string base = stem(cfg, "states") + "_t" + std::to_string(k);
        write_atomic(out_dir / (base + ".csv"), states_csv(cols));
        json sidecar = census_json(cols);
        sidecar["label"] = cfg.label();
        sidecar["phi_offset"] = cfg.phi_offset;
        sidecar["csv"] = base + ".csv";
        write_atomic(out_dir / (base + ".json"), json_text(sidecar));
        out.files.push_back(out_dir / (base + ".csv"));
        out.files.push_back(out_dir / (base + ".json"));
    }
    return out;
}

RunOutcome run_validate(const RunConfig& cfg, const fs::path& out_dir) {
    const std::vector<ResidualReport> reports = validation_battery(cfg);
    RunOutcome out = outcome_of(reports);
    json checks = json::array();
    for (const auto& r : reports) checks.push_back(report_json(r));
    json doc{{"schema_version", "1"}, {"label", cfg.label()}, {"params", params_json(cfg.params)},
             {"gamma_scale", cfg.gamma_scale}, {"checks", checks}, {"pass", out.pass}};
    const fs::path path = out_dir / ("validation_" + cfg.label() + ".json");
    write_atomic(path, json_text(doc));
    out.files.push_back(path);
    return out;
}

RunOutcome run_propagate(const RunConfig& cfg, const fs::path& out_dir) {
    const Transform tr = make_transform(cfg);
    const std::vector<double> times = sorted_times(cfg.times);
    const double dt = cfg.propagation.dt;
    std::vector<ResidualReport> reports;
    json states = json::array();
    std::optional<Grid> first_grid;
    std::optional<StateSpec> first_state;

    for (const std::string& label : cfg.propagation.states) {
        const StateSpec s = StateSpec::parse(label);
        const std::string name = "propagation_" + s.label();
        json entry{{"state", s.label()}, {"dt", dt}, {"times", times}};
        try {
            if (times.size() < 2) throw DomainError("propagate: need at least two distinct times");
            const Grid g = oracles::propagation_grid(tr, s, cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n, times);
            oracles::PropagationRun run = oracles::check_propagation(tr, s, g, times, dt, tol(cfg, "propagation"));
            run.report.name = name;
            entry["grid"] = grid_json(g);
            entry["errors"] = run.errors;
            entry["norm_drift"] = run.norm_drift;
            entry["pass"] = run.report.pass;
            reports.push_back(run.report);
            if (!first_grid) {
                first_grid = g;
                first_state = s;
            }
        } catch (const std::exception& e) {
            ResidualReport r;
            r.name = name;
            r.tolerance = tol(cfg, "propagation");
            r.max_abs = r.max_rel = std::numeric_limits<double>::quiet_NaN();
            r.detail = std::string("error: ") + e.what();
            reports.push_back(r);
            entry["pass"] = false;
            entry["error"] = e.what();
        }
        states.push_back(entry);
    }

    if (times.size() >= 2) {
        const Grid cg = first_grid.value_or(Grid::periodic(-8.0, 8.0, 2048));
        reports.push_back(guarded("propagation_control", tol(cfg, "propagation_control"), [&] {
            return oracles::check_propagation_control(cg, times.back() - times.front(), dt,
                                                      tol(cfg, "propagation_control"))
                .report;
        }));
        if (cfg.propagation.check_order && first_grid) {
            reports.push_back(guarded("dt_order", tol(cfg, "dt_order"), [&] {
                return oracles::check_dt_order(tr, *first_state, *first_grid, times.back(), dt,
                                               tol(cfg, "dt_order"));
            }));
        }
    }

    RunOutcome out = outcome_of(reports);
    json checks = json::array();
    for (const auto& r : reports) checks.push_back(report_json(r));
    json doc{{"schema_version", "1"}, {"label", cfg.label()}, {"params", params_json(cfg.params)},
             {"states", states}, {"checks", checks}, {"pass", out.pass}};
    const fs::path path = out_dir / ("propagation_" + cfg.label() + ".json");
    write_atomic(path, json_text(doc));
    out.files.push_back(path);
    return out;
}

RunOutcome run_figures(const RunConfig& cfg, const fs::path& out_dir) {
    RunOutcome out = run_potential(cfg, out_dir);
    out.absorb(run_states(cfg, out_dir));
    return out;
}

}  // namespace dosc::app

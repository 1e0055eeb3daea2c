#pragma once

#include "dosc/oracles/checks.hpp"
#include "dosc/transform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dosc::app {

struct GridSpec {
    double x_min = -8.0;
    double x_max = 8.0;
    std::size_t n = 1601;
};

struct PropagationSettings {
    double dt = 1e-4;
    /// State labels as accepted by StateSpec::parse ("Lphi2", "missing", "phi0").
    std::vector<std::string> states{"Lphi2", "missing"};
    /// Also run at 2·dt and report the observed order.
    bool check_order = true;
};

struct RunConfig {
    TransformParams params;
    GridSpec grid;
    std::vector<double> times;
    oracles::Tolerances tolerances;
    std::string outputs = "out";
    std::optional<std::string> figure_preset;
    /// Fig. 2 columns: abs2_psi1 = |Lφ_{offset}|², abs2_psi2 = |Lφ_{offset+1}|².
    int phi_offset = 0;
    PropagationSettings propagation;
    /// γ multiplier for the negative-control run of `validate`; 1 means unperturbed.
    double gamma_scale = 1.0;

    /// "fig1a", "fig2-lower", … or "custom".
    std::string label() const;
};

/// The parameter sets behind the published figures.
/// fig1a / fig2-upper: c0 = 1, c1 = 10, c2 = 0, k_a = 2, k_b = 5, ν = 2.
/// fig1b / fig2-lower: c0 = 1, c1 = 10, c2 = 0, k_a = 1.3√π, k_b = 2, ν = 1/2.
/// Throws ConfigError for unknown names.
TransformParams preset_params(const std::string& name);
std::vector<double> preset_times();
std::vector<std::string> preset_names();

/// Parses and validates a JSON run configuration.
///
/// Schema: {params:{c0,c1,c2,k_a,k_b,nu}, grid:{x_min,x_max,n}, times:[…],
/// tolerances:{name: value}, outputs:"dir", figure_preset:"…", phi_offset:int,
/// propagation:{dt, states:[…], check_order}, controls:{gamma_scale}}.
/// A figure preset overrides params and times. Omitted grid, times and
/// tolerances take defaults. Throws ConfigError naming the offending field,
/// including parameter-domain failures (c1 < c0², a node of w).
RunConfig parse_config(const std::string& json_text);

/// Config for a preset alone, as if given {"figure_preset": name}.
RunConfig preset_config(const std::string& name);

/// Builds the validated transformation; parameter failures become ConfigError.
Transform make_transform(const RunConfig& cfg);

}  // namespace dosc::app

#pragma once

#include "dosc/app/config.hpp"
#include "dosc/grid.hpp"
#include "dosc/oracles/checks.hpp"
#include "dosc/solutions.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace dosc::app {

/// What a verb produced. `pass` drives the exit code; `failures` names the
/// checks that did not pass.
struct RunOutcome {
    bool pass = true;
    std::vector<std::filesystem::path> files;
    std::vector<std::string> failures;

    void absorb(const RunOutcome& other);
};

/// %.17g, the only float format used in outputs.
std::string format_double(double v);

/// Writes to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Dumps with a trailing newline; numbers keep 17 significant digits.
std::string json_text(const nlohmann::json& doc);

nlohmann::json report_json(const oracles::ResidualReport& r);

/// Header "x,V1,V1_minus_V0" and one row per grid point.
std::string potential_csv(const Transform& tr, const Grid& grid, double t);

/// The three curves of the state plots at one time. abs2_psi1 and abs2_psi2
/// are |Lφ_{offset}|² and |Lφ_{offset+1}|².
struct StateColumns {
    Grid grid;
    double t = 0.0;
    std::vector<StateSpec> specs;  // missing, Lφ_{offset}, Lφ_{offset+1}
    std::vector<WaveField> fields;
};

StateColumns state_columns(const Transform& tr, const Grid& grid, double t, int phi_offset);
std::string states_csv(const StateColumns& cols);
/// Census sidecar: per curve, the zero count, locations and maxima.
nlohmann::json census_json(const StateColumns& cols);

/// Every check run by `validate`, in report order.
std::vector<oracles::ResidualReport> validation_battery(const RunConfig& cfg);

/// A closed grid with the spacing of `base`, widened (box and n doubled)
/// until the missing state's boundary ratio is below `edge_limit` at `times`.
Grid wide_closed_grid(const Transform& tr, const Grid& base, const std::vector<double>& times,
                      double edge_limit = 1e-10);

/// Output directory: --out if given, else cfg.outputs.
RunOutcome run_potential(const RunConfig& cfg, const std::filesystem::path& out_dir);
RunOutcome run_states(const RunConfig& cfg, const std::filesystem::path& out_dir);
RunOutcome run_validate(const RunConfig& cfg, const std::filesystem::path& out_dir);
RunOutcome run_propagate(const RunConfig& cfg, const std::filesystem::path& out_dir);
/// potential + states.
RunOutcome run_figures(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace dosc::app

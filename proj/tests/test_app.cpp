#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dosc/app/config.hpp"
#include "dosc/app/runners.hpp"
#include "dosc/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace dosc;
using namespace dosc::app;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("dosc_test_app_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string config_error_field(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

TEST_CASE("presets pin the figure parameters") {
    const RunConfig a = parse_config(R"({"figure_preset":"fig1a"})");
    CHECK(a.params.c0 == 1.0);
    CHECK(a.params.c1 == 10.0);
    CHECK(a.params.c2 == 0.0);
    CHECK(a.params.k_a == 2.0);
    CHECK(a.params.k_b == 5.0);
    CHECK(a.params.nu == 2.0);
    CHECK(a.times == std::vector<double>{0.0, kPi / 8, kPi / 4});
    CHECK(a.label() == "fig1a");

    const RunConfig b = preset_config("fig2-lower");
    CHECK(b.params.k_a == 1.3 * std::sqrt(kPi));
    CHECK(b.params.k_b == 2.0);
    CHECK(b.params.nu == 0.5);
    CHECK(preset_params("fig2-upper").nu == 2.0);
    CHECK(preset_names().size() == 4);
}

TEST_CASE("a preset overrides params and times") {
    const RunConfig c = parse_config(
        R"({"figure_preset":"fig1b","params":{"c0":1,"c1":3,"c2":0,"k_a":1,"k_b":0,"nu":0.5},"times":[0.5]})");
    CHECK(c.params.c1 == 10.0);
    CHECK(c.times.size() == 3);
}

TEST_CASE("defaults for omitted fields") {
    const RunConfig c = parse_config(R"({"params":{"c0":1,"c1":2,"c2":0.3,"k_a":1,"k_b":0.5,"nu":2}})");
    CHECK(c.grid.x_min == -8.0);
    CHECK(c.grid.x_max == 8.0);
    CHECK(c.grid.n == 1601);
    CHECK(c.tolerances.empty());
    CHECK(c.outputs == "out");
    CHECK(c.phi_offset == 0);
    CHECK(c.gamma_scale == 1.0);
    CHECK(c.propagation.dt == 1e-4);
    CHECK(c.label() == "custom");
}

TEST_CASE("configuration errors name the offending field") {
    CHECK(config_error_field(R"({"params":{"c0":1,"c1":0.5,"c2":0,"k_a":1,"k_b":0,"nu":0.5}})") == "params.c1");
    CHECK(config_error_field(R"({"params":{"c0":1,"c1":2,"c2":0,"k_a":1,"k_b":3,"nu":0.5}})") == "params.k_a");
    CHECK(config_error_field(R"({"params":{"c0":1,"c1":2,"c2":0,"k_a":1,"k_b":0}})") == "params.nu");
    CHECK(config_error_field(R"({"params":{"c0":"1","c1":2,"c2":0,"k_a":1,"k_b":0,"nu":1}})") == "params.c0");
    CHECK(config_error_field(R"({"figure_preset":"fig3"})") == "figure_preset");
    CHECK(config_error_field(R"({"figure_preset":"fig1a","grid":{"x_min":1,"x_max":-1}})") == "grid.x_max");
    CHECK(config_error_field(R"({"figure_preset":"fig1a","grid":{"n":2.5}})") == "grid.n");
    CHECK(config_error_field(R"({"figure_preset":"fig1a","tolerances":{"u_equaton":1e-6}})") ==
          "tolerances.u_equaton");
    CHECK(config_error_field(R"({"figure_preset":"fig1a","tolerances":{"u_equation":-1}})") ==
          "tolerances.u_equation");
    CHECK(config_error_field(R"({"params":{"c0":1,"c1":2,"c2":0,"k_a":1,"k_b":0,"nu":1},"times":[]})") == "times");
    CHECK(config_error_field(R"({"params":{"c0":1,"c1":2,"c2":0,"k_a":1,"k_b":0,"nu":1},"times":[0,"x"]})") ==
          "times[1]");
    CHECK(config_error_field(R"({"figure_preset":"fig1a","propagation":{"dt":0.01}})") == "propagation.dt");
    CHECK(config_error_field(R"({"figure_preset":"fig1a","propagation":{"states":["Lphi2","nope"]}})") ==
          "propagation.states[1]");
    CHECK(config_error_field(R"({"figure_preset":"fig1a","controls":{"gamma_scale":0}})") ==
          "controls.gamma_scale");
    CHECK(config_error_field(R"({"figure_preset":"fig1a","phi_offset":-1})") == "phi_offset");
    CHECK(config_error_field(R"({"figure_preset":"fig1a","colour":"red"})") == "colour");
    CHECK(config_error_field(R"({"figure_preset":"fig1a",)") == "<document>");
    CHECK(config_error_field(R"([1,2])") == "<document>");
    CHECK(config_error_field(R"({})") == "params");
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-8.0) == "-8");
    CHECK(std::stod(format_double(kPi)) == kPi);
}

TEST_CASE("potential CSV: header, origin row, row count") {
    const RunConfig cfg = preset_config("fig1b");
    const Transform tr = make_transform(cfg);
    const std::string csv = potential_csv(tr, Grid::closed(-8.0, 8.0, 1601), 0.0);
    std::stringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "x,V1,V1_minus_V0");
    int rows = 0;
    bool saw_origin = false;
    while (std::getline(ss, line)) {
        ++rows;
        const auto cells = split_row(line);
        REQUIRE(cells.size() == 3);
        if (cells[0] == "0") {
            saw_origin = true;
            CHECK(std::stod(cells[1]) == doctest::Approx(-0.02472234311820942).epsilon(1e-12));
            CHECK(std::stod(cells[1]) == doctest::Approx(-0.0247183).epsilon(1e-3));
        }
    }
    CHECK(rows == 1601);
    CHECK(saw_origin);
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("run_potential writes one CSV per time; gamma = 0 gives identical files") {
    const fs::path dir = scratch("potential");
    const RunConfig cfg = parse_config(
        R"({"params":{"c0":1,"c1":1,"c2":0,"k_a":2,"k_b":1,"nu":0.5},"grid":{"x_min":-4,"x_max":4,"n":161}})");
    const RunOutcome out = run_potential(cfg, dir);
    CHECK(out.pass);
    REQUIRE(out.files.size() == 4);
    const std::string t0 = slurp(dir / "potential_custom_t0.csv");
    CHECK(t0 == slurp(dir / "potential_custom_t1.csv"));
    CHECK(t0 == slurp(dir / "potential_custom_t2.csv"));
    const json manifest = json::parse(slurp(dir / "potential_custom.json"));
    CHECK(manifest["schema_version"] == "1");
    CHECK(manifest["files"].size() == 3);
    for (const auto& entry : fs::directory_iterator(dir)) {
        CHECK(entry.path().extension() != ".tmp");
    }
    fs::remove_all(dir);
}

TEST_CASE("outputs are byte-identical across runs") {
    const fs::path d1 = scratch("det1");
    const fs::path d2 = scratch("det2");
    RunConfig cfg = preset_config("fig2-upper");
    cfg.grid = {-6.0, 6.0, 601};
    run_figures(cfg, d1);
    run_figures(cfg, d2);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(d1)) {
        CHECK(slurp(entry.path()) == slurp(d2 / entry.path().filename()));
        ++compared;
    }
    CHECK(compared == 10);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("state curves and the census sidecar") {
    const fs::path dir = scratch("states");
    const RunConfig cfg = preset_config("fig2-upper");
    const RunOutcome out = run_states(cfg, dir);
    CHECK(out.pass);
    const std::vector<std::vector<int>> expected{{0, 1, 2}, {0, 0, 0}, {0, 1, 2}};
    for (int k = 0; k < 3; ++k) {
        const json side = json::parse(slurp(dir / ("states_fig2-upper_t" + std::to_string(k) + ".json")));
        CHECK(side["schema_version"] == "1");
        std::vector<int> counts;
        for (const auto& c : side["curves"]) counts.push_back(c["zeros"].get<int>());
        CHECK(counts == expected[k]);
        CHECK(side["curves"][1]["state"] == "Lphi0");
        CHECK(side["curves"][2]["state"] == "Lphi1");

        std::ifstream csv(dir / ("states_fig2-upper_t" + std::to_string(k) + ".csv"));
        std::string line;
        std::getline(csv, line);
        CHECK(line == "x,abs2_psi0_missing,abs2_psi1,abs2_psi2");
        // Nodeless: never negative, and positive on one contiguous span. Only
        // the far tails may underflow to 0 (e^{-(bx)^2} with b = 4.47 at t = pi/4).
        std::vector<double> col;
        while (std::getline(csv, line)) col.push_back(std::strtod(split_row(line)[1].c_str(), nullptr));
        CHECK(std::all_of(col.begin(), col.end(), [](double v) { return v >= 0.0; }));
        const auto first = std::find_if(col.begin(), col.end(), [](double v) { return v > 0.0; });
        const auto last = std::find_if(col.rbegin(), col.rend(), [](double v) { return v > 0.0; }).base();
        REQUIRE(first < last);
        CHECK(std::all_of(first, last, [](double v) { return v > 0.0; }));
        if (k < 2) CHECK(std::all_of(col.begin(), col.end(), [](double v) { return v > 0.0; }));
    }
    fs::remove_all(dir);
}

TEST_CASE("phi_offset shifts the plotted intertwined states") {
    RunConfig cfg = preset_config("fig2-lower");
    cfg.phi_offset = 1;
    const StateColumns cols = state_columns(make_transform(cfg), Grid::closed(-8, 8, 801), 0.0, cfg.phi_offset);
    CHECK(cols.specs[1].label() == "Lphi1");
    CHECK(cols.specs[2].label() == "Lphi2");
    const json side = census_json(cols);
    CHECK(side["curves"][1]["zeros"] == 2);
    CHECK(side["curves"][2]["zeros"] == 3);
}

TEST_CASE("validation battery on a preset passes and lists every check") {
    const std::vector<oracles::ResidualReport> reports = validation_battery(preset_config("fig1b"));
    std::vector<std::string> names;
    for (const auto& r : reports) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.pass);
        names.push_back(r.name);
    }
    for (const char* n : {"separation_odes", "u_equation", "deformed_equation", "intertwining", "v1_cross_form",
                          "v1_complex_form", "reality_phase", "ell_integral", "mielnik_form", "static_limit",
                          "trivial_limit", "norm_conservation", "hyp1f1_oracle", "wronskian",
                          "control_perturbed_gamma", "control_mismatched_intertwining"}) {
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    }
}

TEST_CASE("validate report: trivial configuration passes, perturbed gamma fails") {
    const fs::path dir = scratch("validate");
    const RunConfig triv = parse_config(R"({"params":{"c0":1,"c1":1,"c2":0,"k_a":1,"k_b":0,"nu":0.5}})");
    const RunOutcome ok = run_validate(triv, dir);
    CHECK(ok.pass);
    const json doc = json::parse(slurp(dir / "validation_custom.json"));
    CHECK(doc["schema_version"] == "1");
    CHECK(doc["pass"] == true);
    for (const auto& c : doc["checks"]) {
        CHECK(c.contains("name"));
        CHECK(c.contains("max_abs"));
        CHECK(c.contains("max_rel"));
        CHECK(c.contains("tolerance"));
        CHECK(c.contains("pass"));
    }

    const RunConfig bad = parse_config(R"({"figure_preset":"fig1a","controls":{"gamma_scale":1.01}})");
    const RunOutcome fail = run_validate(bad, dir);
    CHECK_FALSE(fail.pass);
    CHECK(std::find(fail.failures.begin(), fail.failures.end(), "separation_odes") != fail.failures.end());
    fs::remove_all(dir);
}

TEST_CASE("configured tolerances tighten the checks") {
    RunConfig cfg = preset_config("fig1a");
    cfg.tolerances["u_equation"] = 1e-14;
    const auto reports = validation_battery(cfg);
    const auto it = std::find_if(reports.begin(), reports.end(), [](const auto& r) { return r.name == "u_equation"; });
    REQUIRE(it != reports.end());
    CHECK_FALSE(it->pass);
    CHECK(it->tolerance == 1e-14);
}

TEST_CASE("propagate report on a short run") {
    const fs::path dir = scratch("propagate");
    RunConfig shortrun = parse_config(R"({"params":{"c0":1,"c1":10,"c2":0,"k_a":2.3040988476,"k_b":2,"nu":0.5},
        "grid":{"x_min":-8,"x_max":8,"n":1024},"times":[0.05,0],
        "propagation":{"dt":2e-4,"states":["Lphi2"],"check_order":true}})");
    const RunOutcome out = run_propagate(shortrun, dir);
    CHECK(out.pass);
    const json doc = json::parse(slurp(dir / "propagation_custom.json"));
    CHECK(doc["schema_version"] == "1");
    REQUIRE(doc["states"].size() == 1);
    CHECK(doc["states"][0]["grid"]["n"] == 1024);
    CHECK(doc["states"][0]["errors"][0].get<double>() <= 1e-4);
    std::vector<std::string> names;
    for (const auto& c : doc["checks"]) names.push_back(c["name"]);
    CHECK(names == std::vector<std::string>{"propagation_Lphi2", "propagation_control", "dt_order"});
    fs::remove_all(dir);
}

TEST_CASE("atomic writes replace files whole") {
    const fs::path dir = scratch("atomic");
    write_atomic(dir / "a.txt", "first\n");
    write_atomic(dir / "a.txt", "second\n");
    CHECK(slurp(dir / "a.txt") == "second\n");
    CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
    fs::remove_all(dir);
}

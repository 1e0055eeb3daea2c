// darboux_osc: potentials, states, validation and propagation reports for the
// deformed time-dependent oscillator.
//
// Exit codes: 0 all checks pass, 1 a check failed (or a run error), 2 bad configuration.

#include "dosc/app/config.hpp"
#include "dosc/app/runners.hpp"
#include "dosc/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

namespace fs = std::filesystem;
using namespace dosc;

struct CommonArgs {
    std::string config;
    std::string out;
    std::string preset;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config, "JSON run configuration");
    sub->add_option("--out", args.out, "output directory (overrides the config's outputs)");
    sub->add_option("--preset", args.preset, "fig1a, fig1b, fig2-upper or fig2-lower");
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("--config", "cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

app::RunConfig resolve(const CommonArgs& args) {
    if (args.config.empty() && args.preset.empty()) {
        throw ConfigError("--config", "give --config PATH or --preset NAME");
    }
    if (args.config.empty()) return app::preset_config(args.preset);
    const std::string text = read_file(args.config);
    if (args.preset.empty()) return app::parse_config(text);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");
    doc["figure_preset"] = args.preset;
    return app::parse_config(doc.dump());
}

int report(const std::string& verb, const app::RunOutcome& out) {
    for (const auto& f : out.files) std::cout << f.string() << "\n";
    if (out.pass) {
        std::cerr << verb << ": ok\n";
        return 0;
    }
    std::cerr << verb << ": " << out.failures.size() << " check(s) failed:";
    for (const auto& name : out.failures) std::cerr << " " << name;
    std::cerr << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Deformed time-dependent oscillator: figure data and numerical checks"};
    cli.require_subcommand(1);

    CommonArgs args;
    using Runner = app::RunOutcome (*)(const app::RunConfig&, const fs::path&);
    struct Verb {
        const char* name;
        const char* help;
        Runner run;
    };
    const Verb verbs[] = {
        {"potential", "V1 and V1 - x^2 per time (CSV)", &app::run_potential},
        {"states", "|psi|^2 curves per time (CSV) with zero-census sidecars", &app::run_states},
        {"validate", "residual and oracle battery (JSON report)", &app::run_validate},
        {"propagate", "split-step evolution against the analytic states (JSON report)", &app::run_propagate},
        {"figures", "potential + states", &app::run_figures},
    };
    std::vector<std::pair<CLI::App*, const Verb*>> subs;
    for (const Verb& v : verbs) {
        CLI::App* sub = cli.add_subcommand(v.name, v.help);
        add_common(sub, args);
        subs.emplace_back(sub, &v);
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return 2;
    }

    for (const auto& [sub, verb] : subs) {
        if (!sub->parsed()) continue;
        try {
            const app::RunConfig cfg = resolve(args);
            const fs::path out_dir = args.out.empty() ? fs::path(cfg.outputs) : fs::path(args.out);
            return report(verb->name, verb->run(cfg, out_dir));
        } catch (const ConfigError& e) {
            std::cerr << "configuration error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << verb->name << ": " << e.what() << "\n";
            return 1;
        }
    }
    return 2;
}

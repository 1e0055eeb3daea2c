#include "dosc/app/config.hpp"

#include "dosc/errors.hpp"
#include "dosc/solutions.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <set>

namespace dosc::app {
namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
        }
    }
}

const json& object_at(const json& doc, const std::string& key, const std::string& path) {
    const json& v = doc.at(key);
    if (!v.is_object()) throw ConfigError(path, "expected an object");
    return v;
}

double number_at(const json& obj, const std::string& key, const std::string& path) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
    return d;
}

TransformParams parse_params(const json& obj) {
    only_keys(obj, "params", {"c0", "c1", "c2", "k_a", "k_b", "nu"});
    TransformParams p;
    const auto get = [&](const char* key, double& out) {
        const std::string path = std::string("params.") + key;
        if (!obj.contains(key)) throw ConfigError(path, "missing");
        out = number_at(obj, key, path);
    };
    get("c0", p.c0);
    get("c1", p.c1);
    get("c2", p.c2);
    get("k_a", p.k_a);
    get("k_b", p.k_b);
    get("nu", p.nu);
    return p;
}

GridSpec parse_grid(const json& obj) {
    only_keys(obj, "grid", {"x_min", "x_max", "n"});
    GridSpec g;
    if (obj.contains("x_min")) g.x_min = number_at(obj, "x_min", "grid.x_min");
    if (obj.contains("x_max")) g.x_max = number_at(obj, "x_max", "grid.x_max");
    if (obj.contains("n")) {
        const json& n = obj.at("n");
        if (!n.is_number_integer() || n.get<long long>() < 8) {
            throw ConfigError("grid.n", "expected an integer >= 8");
        }
        g.n = n.get<std::size_t>();
    }
    if (!(g.x_max > g.x_min)) throw ConfigError("grid.x_max", "must exceed grid.x_min");
    return g;
}

std::vector<double> parse_times(const json& v) {
    if (!v.is_array() || v.empty()) throw ConfigError("times", "expected a non-empty array");
    std::vector<double> times;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string path = "times[" + std::to_string(i) + "]";
        if (!v[i].is_number()) throw ConfigError(path, "expected a number");
        const double t = v[i].get<double>();
        if (!std::isfinite(t)) throw ConfigError(path, "must be finite");
        times.push_back(t);
    }
    return times;
}

oracles::Tolerances parse_tolerances(const json& obj) {
    const oracles::Tolerances known = oracles::default_tolerances();
    oracles::Tolerances out;
    for (const auto& [key, value] : obj.items()) {
        const std::string path = "tolerances." + key;
        if (!known.count(key)) throw ConfigError(path, "unknown check name");
        if (!value.is_number() || !(value.get<double>() > 0.0)) {
            throw ConfigError(path, "expected a positive number");
        }
        out[key] = value.get<double>();
    }
    return out;
}

PropagationSettings parse_propagation(const json& obj) {
    only_keys(obj, "propagation", {"dt", "states", "check_order"});
    PropagationSettings s;
    if (obj.contains("dt")) {
        s.dt = number_at(obj, "dt", "propagation.dt");
        if (!(s.dt > 0.0 && s.dt <= 1e-3)) throw ConfigError("propagation.dt", "must be in (0, 1e-3]");
    }
    if (obj.contains("states")) {
        const json& v = obj.at("states");
        if (!v.is_array() || v.empty()) {
            throw ConfigError("propagation.states", "expected a non-empty array of labels");
        }
        s.states.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string path = "propagation.states[" + std::to_string(i) + "]";
            if (!v[i].is_string()) throw ConfigError(path, "expected a state label");
            try {
                StateSpec::parse(v[i].get<std::string>());
            } catch (const DomainError& e) {
                throw ConfigError(path, e.what());
            }
            s.states.push_back(v[i].get<std::string>());
        }
    }
    if (obj.contains("check_order")) {
        if (!obj.at("check_order").is_boolean()) {
            throw ConfigError("propagation.check_order", "expected a boolean");
        }
        s.check_order = obj.at("check_order").get<bool>();
    }
    return s;
}

}  // namespace

std::string RunConfig::label() const { return figure_preset.value_or("custom"); }

std::vector<std::string> preset_names() { return {"fig1a", "fig1b", "fig2-upper", "fig2-lower"}; }

TransformParams preset_params(const std::string& name) {
    if (name == "fig1a" || name == "fig2-upper") return {1.0, 10.0, 0.0, 2.0, 5.0, 2.0};
    if (name == "fig1b" || name == "fig2-lower") {
        return {1.0, 10.0, 0.0, 1.3 * std::sqrt(std::numbers::pi), 2.0, 0.5};
    }
    throw ConfigError("figure_preset", "unknown preset '" + name +
                                           "' (expected fig1a, fig1b, fig2-upper or fig2-lower)");
}

std::vector<double> preset_times() {
    return {0.0, std::numbers::pi / 8.0, std::numbers::pi / 4.0};
}

Transform make_transform(const RunConfig& cfg) {
    try {
        return Transform(cfg.params);
    } catch (const ParameterError& e) {
        throw ConfigError("params." + e.field(), e.what());
    } catch (const NodeError& e) {
        throw ConfigError("params.k_a", e.what());
    }
}

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");
    only_keys(doc, "", {"params", "grid", "times", "tolerances", "outputs", "figure_preset",
                        "phi_offset", "propagation", "controls"});

    RunConfig cfg;
    if (doc.contains("figure_preset")) {
        if (!doc.at("figure_preset").is_string()) throw ConfigError("figure_preset", "expected a string");
        cfg.figure_preset = doc.at("figure_preset").get<std::string>();
        cfg.params = preset_params(*cfg.figure_preset);
        cfg.times = preset_times();
    } else {
        if (!doc.contains("params")) throw ConfigError("params", "missing (or give figure_preset)");
        cfg.params = parse_params(object_at(doc, "params", "params"));
        cfg.times = doc.contains("times") ? parse_times(doc.at("times")) : preset_times();
    }
    if (doc.contains("grid")) cfg.grid = parse_grid(object_at(doc, "grid", "grid"));
    if (doc.contains("tolerances")) {
        cfg.tolerances = parse_tolerances(object_at(doc, "tolerances", "tolerances"));
    }
    if (doc.contains("outputs")) {
        if (!doc.at("outputs").is_string() || doc.at("outputs").get<std::string>().empty()) {
            throw ConfigError("outputs", "expected a directory path");
        }
        cfg.outputs = doc.at("outputs").get<std::string>();
    }
    if (doc.contains("phi_offset")) {
        const json& v = doc.at("phi_offset");
        if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > kMaxOscillatorLevel - 1) {
            throw ConfigError("phi_offset", "expected an integer in [0, 39]");
        }
        cfg.phi_offset = v.get<int>();
    }
    if (doc.contains("propagation")) {
        cfg.propagation = parse_propagation(object_at(doc, "propagation", "propagation"));
    }
    if (doc.contains("controls")) {
        const json& c = object_at(doc, "controls", "controls");
        only_keys(c, "controls", {"gamma_scale"});
        if (c.contains("gamma_scale")) {
            cfg.gamma_scale = number_at(c, "gamma_scale", "controls.gamma_scale");
            if (!(cfg.gamma_scale > 0.0)) throw ConfigError("controls.gamma_scale", "must be positive");
        }
    }
    make_transform(cfg);  // parameter domain and node freedom
    return cfg;
}

RunConfig preset_config(const std::string& name) {
    return parse_config(nlohmann::json{{"figure_preset", name}}.dump());
}

}  // namespace dosc::app

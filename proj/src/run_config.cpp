#include "paracont/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "paracont/errors.hpp"
#include "paracont/registry.hpp"

namespace paracont {

namespace {

using json = nlohmann::json;

[[noreturn]] void field_error(std::string_view origin, std::string_view field, std::string_view what) {
    throw ParseError(std::string(origin) + ": field '" + std::string(field) + "': " + std::string(what));
}

double as_number(const json& v, std::string_view origin, std::string_view field) {
    if (!v.is_number()) field_error(origin, field, "expected a number");
    return v.get<double>();
}

int as_int(const json& v, std::string_view origin, std::string_view field) {
    if (!v.is_number_integer()) field_error(origin, field, "expected an integer");
    return v.get<int>();
}

std::string as_string(const json& v, std::string_view origin, std::string_view field) {
    if (!v.is_string()) field_error(origin, field, "expected a string");
    return v.get<std::string>();
}

bool as_switch(const json& v, std::string_view origin, std::string_view field) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "on") return true;
        if (s == "off") return false;
    }
    field_error(origin, field, "expected true/false or \"on\"/\"off\"");
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

RunConfig parse_config_text(std::string_view text, std::string_view origin) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(origin) + ":" + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(std::string(origin) + ": top level must be a JSON object");

    static const char* const known[] = {"model", "params", "bifurcation_param", "y0", "p0", "dp", "p_min",
                                        "p_max", "max_steps", "max_dy", "corrector", "direction", "output"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw ParseError(std::string(origin) + ": unknown key '" + key + "'");
    }

    if (!doc.contains("model")) field_error(origin, "model", "missing");
    RunConfig cfg;
    cfg.model = as_string(doc["model"], origin, "model");
    const ModelEntry& entry = ModelRegistry::builtin().find(cfg.model);

    cfg.params = entry.defaults;
    if (doc.contains("params")) {
        const json& ps = doc["params"];
        if (!ps.is_object()) field_error(origin, "params", "expected an object");
        for (const auto& [name, value] : ps.items()) {
            if (!cfg.params.contains(name))
                throw UnknownParameter(std::string(origin) + ": model '" + cfg.model + "' has no parameter '" +
                                       name + "'");
            cfg.params.set(name, as_number(value, origin, "params." + name));
        }
    }

    cfg.bifurcation_param = doc.contains("bifurcation_param")
                                ? as_string(doc["bifurcation_param"], origin, "bifurcation_param")
                                : entry.run.bifurcation_param;
    if (!cfg.params.contains(cfg.bifurcation_param))
        throw UnknownParameter(std::string(origin) + ": bifurcation parameter '" + cfg.bifurcation_param +
                               "' is not a parameter of '" + cfg.model + "'");
    const bool default_run = cfg.bifurcation_param == entry.run.bifurcation_param;

    auto number_or = [&](const char* key, std::optional<double> fallback) {
        if (doc.contains(key)) return as_number(doc[key], origin, key);
        if (!fallback) field_error(origin, key, "required when the bifurcation parameter is not the model default");
        return *fallback;
    };

    const std::size_t dim = entry.run.y0.size();
    if (doc.contains("y0")) {
        const json& y = doc["y0"];
        if (!y.is_array()) field_error(origin, "y0", "expected an array");
        if (y.size() != dim)
            field_error(origin, "y0", "expected " + std::to_string(dim) + " components, got " + std::to_string(y.size()));
        cfg.y0 = Vector(dim);
        for (std::size_t i = 0; i < dim; ++i) cfg.y0[i] = as_number(y[i], origin, "y0[" + std::to_string(i) + "]");
    } else {
        cfg.y0 = entry.run.y0;
    }

    const double registry_value = cfg.params.get(cfg.bifurcation_param);
    cfg.p0 = number_or("p0", default_run ? std::optional(entry.run.p0) : std::optional(registry_value));

    auto& cc = cfg.continuation;
    cc.p_min = number_or("p_min", default_run ? std::optional(entry.run.p_min) : std::nullopt);
    cc.p_max = number_or("p_max", default_run ? std::optional(entry.run.p_max) : std::nullopt);
    cc.direction = default_run ? entry.run.direction : 1;
    if (doc.contains("direction")) cc.direction = as_int(doc["direction"], origin, "direction");
    if (doc.contains("dp")) cc.dp = as_number(doc["dp"], origin, "dp");
    if (doc.contains("max_steps")) cc.max_steps = as_int(doc["max_steps"], origin, "max_steps");
    if (doc.contains("max_dy")) cc.max_dy = as_number(doc["max_dy"], origin, "max_dy");
    if (doc.contains("corrector")) cc.corrector = as_switch(doc["corrector"], origin, "corrector");
    try {
        cc.validate();
    } catch (const PreconditionViolation& e) {
        throw ParseError(std::string(origin) + ": " + e.what());
    }

    cfg.output.csv = cfg.model + ".csv";
    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (!o.is_object()) field_error(origin, "output", "expected an object");
        for (const auto& [key, value] : o.items()) {
            if (key == "csv") cfg.output.csv = as_string(value, origin, "output.csv");
            else if (key == "svg") cfg.output.svg = as_string(value, origin, "output.svg");
            else if (key == "profiles") cfg.output.profiles = as_string(value, origin, "output.profiles");
            else if (key == "svg_component") {
                const int c = as_int(value, origin, "output.svg_component");
                if (c < 0 || static_cast<std::size_t>(c) >= dim)
                    field_error(origin, "output.svg_component", "no such state component");
                cfg.output.svg_component = static_cast<std::size_t>(c);
            } else {
                throw ParseError(std::string(origin) + ": unknown key 'output." + key + "'");
            }
        }
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.string());
}

}  // namespace paracont

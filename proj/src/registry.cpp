#include "paracont/registry.hpp"

#include <algorithm>

#include "paracont/cstr.hpp"
#include "paracont/errors.hpp"

namespace paracont {

namespace {

ModelRegistry make_builtin() {
    ModelRegistry reg;

    {
        ModelEntry e;
        e.name = "cstr";
        e.summary = "stirred tank reactor, states (x, theta)";
        e.defaults = cstr::CstrParams{}.to_parameter_set();
        // Low-conversion branch at n = 2, traced toward decreasing n through both folds.
        e.run = {"n", 2.0, 1.0, 2.0, Vector{0.116, cstr::steady_theta(0.116, cstr::CstrParams{})}, -1};
        e.make = [](const ParameterSet& params, std::string_view bif) {
            return cstr::as_model(cstr::CstrParams::from_parameter_set(params), bif);
        };
        reg.add(std::move(e));
    }
    {
        ModelEntry e;
        e.name = "tubular";
        e.summary = "tubular reactor with axial dispersion, state alpha(1)";
        e.defaults = tubular::TubularParams{}.to_parameter_set();
        // Nontrivial branch at Da = 0.5 (alpha(1) ~ 0.396), traced toward decreasing Da.
        e.run = {"Da", 0.5, 0.1, 1.0, Vector{0.396}, 1};
        e.make = [](const ParameterSet& params, std::string_view bif) {
            return tubular::as_model(tubular::TubularParams::from_parameter_set(params), bif);
        };
        e.profile = [](const Vector& y, const ParameterSet& params) {
            return tubular::shoot_backward(y[0], tubular::TubularParams::from_parameter_set(params)).profile;
        };
        reg.add(std::move(e));
    }
    return reg;
}

}  // namespace

const ModelRegistry& ModelRegistry::builtin() {
    static const ModelRegistry reg = make_builtin();
    return reg;
}

void ModelRegistry::add(ModelEntry entry) {
    if (std::any_of(entries_.begin(), entries_.end(), [&](const ModelEntry& e) { return e.name == entry.name; }))
        throw PreconditionViolation("model '" + entry.name + "' registered twice");
    entries_.push_back(std::move(entry));
}

const ModelEntry& ModelRegistry::find(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name) return e;
    throw UnknownModel("unknown model '" + std::string(name) + "'");
}

}  // namespace paracont

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paracont/model.hpp"
#include "paracont/tubular.hpp"

namespace paracont {

/// Seed and range used when a run config leaves them out.
struct RunDefaults {
    std::string bifurcation_param;
    double p0 = 0.0;
    double p_min = 0.0;
    double p_max = 0.0;
    Vector y0;
    int direction = 1;
};

struct ModelEntry {
    std::string name;
    std::string summary;
    ParameterSet defaults;
    RunDefaults run;
    std::function<Model(const ParameterSet& params, std::string_view bifurcation_param)> make;
    /// Axial profile for a branch state; empty for lumped models.
    std::function<tubular::AxialProfile(const Vector& y, const ParameterSet& params)> profile;
};

class ModelRegistry {
public:
    /// "cstr" and "tubular".
    static const ModelRegistry& builtin();

    void add(ModelEntry entry);
    /// Throws UnknownModel.
    const ModelEntry& find(std::string_view name) const;
    const std::vector<ModelEntry>& entries() const noexcept { return entries_; }

private:
    std::vector<ModelEntry> entries_;
};

}  // namespace paracont

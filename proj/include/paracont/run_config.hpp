#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "paracont/continuation.hpp"
#include "paracont/model.hpp"

namespace paracont {

struct OutputPaths {
    std::filesystem::path csv;  // required
    std::optional<std::filesystem::path> svg;
    std::optional<std::filesystem::path> profiles;  // directory
    std::size_t svg_component = 0;  // state component on the vertical axis
};

struct RunConfig {
    std::string model;
    ParameterSet params;  // registry defaults with overrides applied
    std::string bifurcation_param;
    Vector y0;
    double p0 = 0.0;
    ContinuationConfig continuation;
    OutputPaths output;
};

/// Parses a flat JSON config. Unknown keys and parameters are rejected.
/// Throws ParseError (with line or field context), UnknownModel, UnknownParameter.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view text, std::string_view origin = "<config>");

/// Refines the seed, traces, writes the requested files and prints a
/// summary. Returns the process exit status; failures are reported on err.
int run_trace(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace paracont

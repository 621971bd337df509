#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "paracont/continuation.hpp"

namespace paracont {

/// CSV text: header, one row per point, then '#' lines for events and the
/// termination reason. Numbers use 17 significant digits.
std::string format_csv(const Branch& branch);
/// Throws IoError.
void write_csv(const Branch& branch, const std::filesystem::path& path);

struct DiagramRow {
    std::size_t step = 0;
    double p = 0.0;
    Vector y;
    double det_j = 0.0;
    EventKind event = EventKind::none;
    std::optional<std::complex<double>> eig;  // leading eigenvalue, imaginary part >= 0
};

struct Diagram {
    std::vector<DiagramRow> rows;
    std::vector<std::string> sidecar;  // '#' lines without the prefix
};

/// Throws ParseError on malformed text.
Diagram parse_csv(const std::string& text);
/// Throws IoError or ParseError.
Diagram read_csv(const std::filesystem::path& path);

struct SvgAxes {
    std::size_t component = 0;  // state component on the vertical axis
    int width = 640;
    int height = 480;
};

/// Throws PreconditionViolation for an empty branch or bad component.
std::string format_svg(const Branch& branch, const SvgAxes& axes);
void emit_svg(const Branch& branch, const SvgAxes& axes, const std::filesystem::path& path);

}  // namespace paracont

#include "paracont/diagram_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "paracont/errors.hpp"

namespace paracont {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Shorter form for SVG coordinates; still deterministic.
std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed: " + std::strerror(errno));
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    if (s.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

}  // namespace

std::string format_csv(const Branch& branch) {
    if (branch.points.empty()) throw PreconditionViolation("format_csv: empty branch");
    const std::size_t dim = branch.points.front().y.size();
    std::string out = "step,p";
    for (std::size_t i = 0; i < dim; ++i) out += ",y" + std::to_string(i);
    out += ",detJ,event,eig_re,eig_im\n";

    for (std::size_t k = 0; k < branch.points.size(); ++k) {
        const BranchPoint& pt = branch.points[k];
        if (pt.y.size() != dim) throw DimensionMismatch("format_csv: state size changes along the branch");
        out += std::to_string(k);
        out += ',' + num(pt.p);
        for (std::size_t i = 0; i < dim; ++i) out += ',' + num(pt.y[i]);
        out += ',' + num(pt.det_j);
        out += ',';
        out += to_string(pt.event);
        if (pt.eig) {
            out += ',' + num(pt.eig->lambda1.real()) + ',' + num(std::abs(pt.eig->lambda1.imag()));
        } else {
            out += ",,";
        }
        out += '\n';
    }

    for (const EventRecord& ev : branch.events) {
        out += "# ";
        out += to_string(ev.kind);
        out += ", step=" + std::to_string(ev.point_index) + ", p=" + num(ev.p);
        for (std::size_t i = 0; i < ev.y.size(); ++i) out += ", y" + std::to_string(i) + "=" + num(ev.y[i]);
        out += ", detJ=" + num(ev.det_j) + ", indicator=" + num(ev.indicator) + ", residual=" + num(ev.residual);
        out += ev.converged ? ", converged" : ", unconverged";
        out += '\n';
    }
    out += "# termination=";
    out += to_string(branch.termination);
    out += '\n';
    if (!branch.hopf_status.empty()) out += "# hopf=" + branch.hopf_status + '\n';
    return out;
}

void write_csv(const Branch& branch, const std::filesystem::path& path) { write_text(format_csv(branch), path); }

Diagram parse_csv(const std::string& text) {
    Diagram d;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            d.sidecar.push_back(line.size() > 2 ? line.substr(2) : std::string());
            continue;
        }
        const auto fields = split(line, ',');
        if (!header) {
            if (fields.size() < 7 || fields[0] != "step" || fields[1] != "p")
                throw ParseError("line 1: unexpected header");
            dim = fields.size() - 6;
            header = true;
            continue;
        }
        if (fields.size() != dim + 6)
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim + 6) + " fields");
        DiagramRow row;
        row.step = static_cast<std::size_t>(parse_double(fields[0], line_no));
        row.p = parse_double(fields[1], line_no);
        row.y = Vector(dim);
        for (std::size_t i = 0; i < dim; ++i) row.y[i] = parse_double(fields[2 + i], line_no);
        row.det_j = parse_double(fields[2 + dim], line_no);
        row.event = event_from_string(fields[3 + dim]);
        const auto& re = fields[4 + dim];
        const auto& im = fields[5 + dim];
        if (!re.empty() || !im.empty()) row.eig = std::complex<double>(parse_double(re, line_no), parse_double(im, line_no));
        d.rows.push_back(std::move(row));
    }
    if (!header) throw ParseError("missing header");
    return d;
}

Diagram read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

std::string format_svg(const Branch& branch, const SvgAxes& axes) {
    if (branch.points.empty()) throw PreconditionViolation("format_svg: empty branch");
    if (axes.component >= branch.points.front().y.size())
        throw PreconditionViolation("format_svg: state component " + std::to_string(axes.component) + " out of range");
    if (axes.width <= 0 || axes.height <= 0) throw PreconditionViolation("format_svg: viewport must be positive");

    double pmin = branch.points.front().p, pmax = pmin;
    double ymin = branch.points.front().y[axes.component], ymax = ymin;
    for (const auto& pt : branch.points) {
        pmin = std::min(pmin, pt.p);
        pmax = std::max(pmax, pt.p);
        ymin = std::min(ymin, pt.y[axes.component]);
        ymax = std::max(ymax, pt.y[axes.component]);
    }
    // Degenerate ranges (e.g. the trivial tubular branch) get a unit span.
    if (!(pmax > pmin)) { pmin -= 0.5; pmax += 0.5; }
    if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }

    const double margin = 40.0;
    const double w = axes.width - 2 * margin;
    const double h = axes.height - 2 * margin;
    auto sx = [&](double p) { return margin + (p - pmin) / (pmax - pmin) * w; };
    auto sy = [&](double y) { return margin + (ymax - y) / (ymax - ymin) * h; };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(axes.width) + "\" height=\"" +
           std::to_string(axes.height) + "\" viewBox=\"0 0 " + std::to_string(axes.width) + " " +
           std::to_string(axes.height) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(axes.width) + "\" height=\"" +
           std::to_string(axes.height) + "\" fill=\"white\"/>\n";
    out += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    out += "<line x1=\"" + coord(margin) + "\" y1=\"" + coord(margin + h) + "\" x2=\"" + coord(margin + w) +
           "\" y2=\"" + coord(margin + h) + "\"/>\n";
    out += "<line x1=\"" + coord(margin) + "\" y1=\"" + coord(margin) + "\" x2=\"" + coord(margin) + "\" y2=\"" +
           coord(margin + h) + "\"/>\n";
    out += "</g>\n";
    out += "<text x=\"" + coord(margin) + "\" y=\"" + coord(axes.height - 12.0) + "\" font-size=\"11\">" +
           num(pmin) + "</text>\n";
    out += "<text x=\"" + coord(margin + w) + "\" y=\"" + coord(axes.height - 12.0) +
           "\" font-size=\"11\" text-anchor=\"end\">" + num(pmax) + "</text>\n";
    out += "<text x=\"4\" y=\"" + coord(margin + h) + "\" font-size=\"11\">" + num(ymin) + "</text>\n";
    out += "<text x=\"4\" y=\"" + coord(margin - 6.0) + "\" font-size=\"11\">" + num(ymax) + "</text>\n";

    out += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < branch.points.size(); ++k) {
        const auto& pt = branch.points[k];
        if (k) out += ' ';
        out += coord(sx(pt.p)) + ',' + coord(sy(pt.y[axes.component]));
    }
    out += "\"/>\n";

    for (const EventRecord& ev : branch.events) {
        if (ev.y.size() <= axes.component) continue;
        const double cx = sx(ev.p), cy = sy(ev.y[axes.component]);
        if (ev.kind == EventKind::limit_point) {
            out += "<circle class=\"LP\" cx=\"" + coord(cx) + "\" cy=\"" + coord(cy) +
                   "\" r=\"4\" fill=\"none\" stroke=\"crimson\" stroke-width=\"1.5\"/>\n";
        } else if (ev.kind == EventKind::hopf) {
            out += "<rect class=\"HB\" x=\"" + coord(cx - 4.0) + "\" y=\"" + coord(cy - 4.0) +
                   "\" width=\"8\" height=\"8\" fill=\"none\" stroke=\"darkgreen\" stroke-width=\"1.5\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

void emit_svg(const Branch& branch, const SvgAxes& axes, const std::filesystem::path& path) {
    write_text(format_svg(branch, axes), path);
}

}  // namespace paracont

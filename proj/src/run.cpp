#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "paracont/diagram_io.hpp"
#include "paracont/errors.hpp"
#include "paracont/newton.hpp"
#include "paracont/registry.hpp"
#include "paracont/run_config.hpp"

namespace paracont {

namespace {

constexpr std::size_t kProfileSamples = 201;

std::string profile_csv(const tubular::AxialProfile& prof) {
    const std::size_t n = prof.xi.size();
    const std::size_t stride = n > kProfileSamples ? (n - 1 + kProfileSamples - 2) / (kProfileSamples - 1) : 1;
    std::string out = "xi,alpha,u\n";
    char buf[96];
    auto row = [&](std::size_t i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", prof.xi[i], prof.alpha[i], prof.u[i]);
        out += buf;
    };
    for (std::size_t i = 0; i < n; i += stride) row(i);
    if ((n - 1) % stride != 0) row(n - 1);  // always end at xi = 1
    return out;
}

void write_profiles(const Branch& branch, const RunConfig& cfg, const ModelEntry& entry) {
    namespace fs = std::filesystem;
    const fs::path dir = *cfg.output.profiles;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    ParameterSet params = cfg.params;
    for (std::size_t k = 0; k < branch.points.size(); ++k) {
        const BranchPoint& pt = branch.points[k];
        params.set(cfg.bifurcation_param, pt.p);
        char name[32];
        std::snprintf(name, sizeof name, "point_%06zu.csv", k);
        const fs::path path = dir / name;
        std::FILE* f = std::fopen(path.string().c_str(), "wb");
        if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
        const std::string text = profile_csv(entry.profile(pt.y, params));
        const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
        if (std::fclose(f) != 0 || !ok) throw IoError("write to '" + path.string() + "' failed");
    }
}

}  // namespace

int run_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ModelEntry* entry = nullptr;
    try {
        entry = &ModelRegistry::builtin().find(cfg.model);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    if (cfg.output.profiles && !entry->profile) {
        err << "error: model '" << cfg.model << "' has no axial profiles\n";
        return 2;
    }

    Model model = entry->make(cfg.params, cfg.bifurcation_param);
    Vector seed;
    try {
        seed = newton_refine(model, cfg.y0, cfg.p0, cfg.continuation.corrector_tol, cfg.continuation.corrector_max_iter);
    } catch (const Error& e) {
        err << "error: seed did not converge at " << cfg.bifurcation_param << " = " << cfg.p0 << ": " << e.what()
            << '\n';
        return 3;
    }

    Branch branch;
    try {
        branch = trace_branch(model, seed, cfg.p0, cfg.continuation);
    } catch (const Error& e) {
        err << "error: trace failed: " << e.what() << '\n';
        return 3;
    }

    bool ok = true;
    try {
        write_csv(branch, cfg.output.csv);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        ok = false;
    }
    if (cfg.output.svg) {
        try {
            emit_svg(branch, SvgAxes{cfg.output.svg_component}, *cfg.output.svg);
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            ok = false;
        }
    }
    if (cfg.output.profiles) {
        try {
            write_profiles(branch, cfg, *entry);
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            ok = false;
        }
    }

    out << "model " << cfg.model << ", parameter " << cfg.bifurcation_param << '\n';
    out << "points " << branch.points.size() << '\n';
    out << "LP " << branch.count(EventKind::limit_point) << ", HB " << branch.count(EventKind::hopf) << '\n';
    for (const auto& ev : branch.events) {
        char line[128];
        std::snprintf(line, sizeof line, "  %s at %s = %.10g (step %zu, residual %.2e)\n",
                      std::string(to_string(ev.kind)).c_str(), cfg.bifurcation_param.c_str(), ev.p, ev.point_index,
                      ev.residual);
        out << line;
    }
    out << "termination " << to_string(branch.termination) << '\n';
    if (!branch.hopf_status.empty()) out << "hopf " << branch.hopf_status << '\n';
    out << "csv " << cfg.output.csv.string() << '\n';

    if (branch.points.size() < 2) {
        err << "error: branch has fewer than 2 points\n";
        return 1;
    }
    return ok ? 0 : 1;
}

}  // namespace paracont

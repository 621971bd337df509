#include "paracont/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "paracont/errors.hpp"

namespace paracont::sweep {

namespace {

std::optional<Vector> solve_from(const Model& model, double p, const Vector& start, const NewtonOptions& opts) {
    try {
        NewtonReport r = newton_solve(model, start, p, opts);
        if (!model.in_domain(r.y, p)) return std::nullopt;
        return std::move(r.y);
    } catch (const Error&) {
        return std::nullopt;
    }
}

double bisect(const ScalarFn& f, double a, double fa, double b, const BracketOptions& opts) {
    for (int i = 0; i < opts.max_bisections && (b - a) > opts.xtol; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if (!std::isfinite(fm)) break;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double sample_at(double lo, double hi, std::size_t i, std::size_t samples) {
    if (samples == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
}

struct Bracket {
    double a, fa, b;
    bool exact;
};

std::vector<Bracket> find_brackets(std::span<const double> xs, std::span<const double> fs) {
    std::vector<Bracket> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (fs[i] == 0.0) {
            out.push_back({xs[i], 0.0, xs[i], true});
            continue;
        }
        if (i + 1 < xs.size() && std::isfinite(fs[i]) && std::isfinite(fs[i + 1]) && fs[i + 1] != 0.0 &&
            (fs[i] < 0.0) != (fs[i + 1] < 0.0))
            out.push_back({xs[i], fs[i], xs[i + 1], false});
    }
    return out;
}

}  // namespace

std::size_t GridSpec::size() const noexcept {
    std::size_t total = 1;
    for (auto c : counts) total *= c;
    return counts.empty() ? 0 : total;
}

Vector GridSpec::node(std::size_t flat) const {
    Vector v(counts.size());
    for (std::size_t d = counts.size(); d-- > 0;) {
        const std::size_t i = flat % counts[d];
        flat /= counts[d];
        v[d] = counts[d] == 1 ? lo[d] : lo[d] + (hi[d] - lo[d]) * static_cast<double>(i) / (counts[d] - 1);
    }
    return v;
}

void GridSpec::validate(std::size_t dimension) const {
    if (lo.size() != dimension || hi.size() != dimension || counts.size() != dimension)
        throw PreconditionViolation("grid dimension does not match the model");
    for (std::size_t d = 0; d < dimension; ++d)
        if (counts[d] == 0 || !(lo[d] <= hi[d])) throw PreconditionViolation("grid axis is empty or reversed");
}

std::vector<Vector> deduplicate(std::span<const Vector> candidates, double tol) {
    std::vector<Vector> unique;
    for (const auto& c : candidates) {
        const bool seen = std::any_of(unique.begin(), unique.end(),
                                      [&](const Vector& u) { return (u - c).norm_inf() <= tol; });
        if (!seen) unique.push_back(c);
    }
    std::sort(unique.begin(), unique.end(),
              [](const Vector& a, const Vector& b) { return a.values() < b.values(); });
    return unique;
}

std::vector<Vector> grid_newton_roots_serial(const Model& model, double p, const GridSpec& grid,
                                             const RootSetOptions& opts) {
    grid.validate(model.dimension());
    std::vector<Vector> found;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (auto r = solve_from(model, p, grid.node(i), opts.newton)) found.push_back(std::move(*r));
    return deduplicate(found, opts.dedup_tol);
}

std::vector<Vector> grid_newton_roots(const Model& model, double p, const GridSpec& grid,
                                      const RootSetOptions& opts) {
    grid.validate(model.dimension());
    const auto total = static_cast<std::ptrdiff_t>(grid.size());
    // Slot per start keeps the merge order identical to the serial scan.
    std::vector<std::optional<Vector>> slots(grid.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < total; ++i) {
        const auto k = static_cast<std::size_t>(i);
        slots[k] = solve_from(model, p, grid.node(k), opts.newton);
    }
    std::vector<Vector> found;
    for (auto& s : slots)
        if (s) found.push_back(std::move(*s));
    return deduplicate(found, opts.dedup_tol);
}

std::vector<std::vector<Vector>> multiplicity_sweep_serial(const Model& model, std::span<const double> p_values,
                                                           const GridSpec& grid, const RootSetOptions& opts) {
    std::vector<std::vector<Vector>> out;
    out.reserve(p_values.size());
    for (double p : p_values) out.push_back(grid_newton_roots_serial(model, p, grid, opts));
    return out;
}

std::vector<std::vector<Vector>> multiplicity_sweep(const Model& model, std::span<const double> p_values,
                                                    const GridSpec& grid, const RootSetOptions& opts) {
    grid.validate(model.dimension());
    std::vector<std::vector<Vector>> out(p_values.size());
    const auto count = static_cast<std::ptrdiff_t>(p_values.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = grid_newton_roots_serial(model, p_values[k], grid, opts);
    }
    return out;
}

std::vector<double> bracket_roots_serial(const ScalarFn& f, double lo, double hi, const BracketOptions& opts) {
    if (opts.samples < 2 || !(lo < hi)) throw PreconditionViolation("bracket_roots: need samples >= 2 and lo < hi");
    std::vector<double> xs(opts.samples), fs(opts.samples);
    for (std::size_t i = 0; i < opts.samples; ++i) {
        xs[i] = sample_at(lo, hi, i, opts.samples);
        fs[i] = f(xs[i]);
    }
    std::vector<double> roots;
    for (const auto& br : find_brackets(xs, fs))
        roots.push_back(br.exact ? br.a : bisect(f, br.a, br.fa, br.b, opts));
    return roots;
}

std::vector<double> bracket_roots(const ScalarFn& f, double lo, double hi, const BracketOptions& opts) {
    if (opts.samples < 2 || !(lo < hi)) throw PreconditionViolation("bracket_roots: need samples >= 2 and lo < hi");
    std::vector<double> xs(opts.samples), fs(opts.samples);
    const auto samples = static_cast<std::ptrdiff_t>(opts.samples);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < samples; ++i) {
        const auto k = static_cast<std::size_t>(i);
        xs[k] = sample_at(lo, hi, k, opts.samples);
        fs[k] = f(xs[k]);
    }
    const auto brackets = find_brackets(xs, fs);
    std::vector<double> roots(brackets.size());
    const auto nb = static_cast<std::ptrdiff_t>(brackets.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < nb; ++i) {
        const auto& br = brackets[static_cast<std::size_t>(i)];
        roots[static_cast<std::size_t>(i)] = br.exact ? br.a : bisect(f, br.a, br.fa, br.b, opts);
    }
    return roots;
}

}  // namespace paracont::sweep

// Serial reference vs OpenMP for the brute-force sweeps. Each pair must give
// identical results; the timings are best of --reps runs.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include <CLI11.hpp>

#include "paracont/cstr.hpp"
#include "paracont/sweep.hpp"
#include "paracont/tubular.hpp"

using namespace paracont;

namespace {

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

bool row(const char* name, double serial, double parallel, bool same) {
    std::printf("%-28s serial %8.4fs  omp %8.4fs  speedup %5.2fx  %s\n", name, serial, parallel, serial / parallel,
                same ? "identical" : "MISMATCH");
    return same;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sweep kernel benchmark"};
    int reps = 3, grid = 50, nvals = 21;
    app.add_option("--reps", reps, "repetitions per kernel")->check(CLI::PositiveNumber);
    app.add_option("--grid", grid, "grid nodes per axis")->check(CLI::PositiveNumber);
    app.add_option("--nvals", nvals, "parameter values in the multiplicity sweep")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
    const Model m = cstr::as_model(cstr::CstrParams{});
    const auto g = static_cast<std::size_t>(grid);
    const sweep::GridSpec spec{{0.0, -0.1}, {0.95, 1.5}, {g, g}};
    bool ok = true;

    {
        std::vector<Vector> a, b;
        const double ts = best_of(reps, [&] { a = sweep::grid_newton_roots_serial(m, 1.4, spec); });
        const double tp = best_of(reps, [&] { b = sweep::grid_newton_roots(m, 1.4, spec); });
        ok &= row("grid_newton_roots", ts, tp, a == b);
    }
    {
        std::vector<double> ns;
        for (int k = 0; k < nvals; ++k) ns.push_back(1.0 + (nvals > 1 ? static_cast<double>(k) / (nvals - 1) : 0.0));
        std::vector<std::vector<Vector>> a, b;
        const double ts = best_of(reps, [&] { a = sweep::multiplicity_sweep_serial(m, ns, spec); });
        const double tp = best_of(reps, [&] { b = sweep::multiplicity_sweep(m, ns, spec); });
        ok &= row("multiplicity_sweep", ts, tp, a == b);
    }
    {
        tubular::TubularParams p;
        p.Da = 0.3;
        const sweep::ScalarFn f = [p](double s) { return tubular::shooting_residual(s, p); };
        const sweep::BracketOptions opts{.samples = 400};
        std::vector<double> a, b;
        const double ts = best_of(reps, [&] { a = sweep::bracket_roots_serial(f, 0.001, 0.999, opts); });
        const double tp = best_of(reps, [&] { b = sweep::bracket_roots(f, 0.001, 0.999, opts); });
        ok &= row("bracket_roots (tubular)", ts, tp, a == b);
    }
    return ok ? 0 : 1;
}

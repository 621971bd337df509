#pragma once

// Brute-force root sweeps: damped Newton from every node of a state-space
// grid, and sign-change bracketing of scalar functions. Each kernel has an
// OpenMP version and a serial reference; both return identical results.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "paracont/model.hpp"
#include "paracont/newton.hpp"

namespace paracont::sweep {

/// Tensor grid with counts[i] nodes spanning [lo[i], hi[i]] inclusively.
struct GridSpec {
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<std::size_t> counts;

    std::size_t size() const noexcept;
    Vector node(std::size_t flat_index) const;
    /// Throws PreconditionViolation.
    void validate(std::size_t dimension) const;
};

struct RootSetOptions {
    NewtonOptions newton{1e-10, 60};
    double dedup_tol = 1e-5;  // ||.||_inf
};

/// Distinct roots of F(., p) reached from the grid, in lexicographic order.
std::vector<Vector> grid_newton_roots(const Model& model, double p, const GridSpec& grid,
                                      const RootSetOptions& opts = {});
std::vector<Vector> grid_newton_roots_serial(const Model& model, double p, const GridSpec& grid,
                                             const RootSetOptions& opts = {});

/// Root sets for many parameter values; parallel over the parameter values.
std::vector<std::vector<Vector>> multiplicity_sweep(const Model& model, std::span<const double> p_values,
                                                    const GridSpec& grid, const RootSetOptions& opts = {});
std::vector<std::vector<Vector>> multiplicity_sweep_serial(const Model& model, std::span<const double> p_values,
                                                           const GridSpec& grid, const RootSetOptions& opts = {});

using ScalarFn = std::function<double(double)>;

struct BracketOptions {
    std::size_t samples = 1000;  // uniform samples over [lo, hi], inclusive
    double xtol = 1e-13;
    int max_bisections = 200;
};

/// Roots of f located by sign changes between consecutive finite samples
/// and refined by bisection. Non-finite samples split the scan. The function
/// must be safe to call concurrently.
std::vector<double> bracket_roots(const ScalarFn& f, double lo, double hi, const BracketOptions& opts = {});
std::vector<double> bracket_roots_serial(const ScalarFn& f, double lo, double hi,
                                         const BracketOptions& opts = {});

/// Merges roots closer than tol (keeps first occurrence) and sorts.
std::vector<Vector> deduplicate(std::span<const Vector> candidates, double tol);

}  // namespace paracont::sweep

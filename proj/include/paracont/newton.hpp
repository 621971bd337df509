#pragma once

#include <cstddef>

#include "paracont/model.hpp"

namespace paracont {

struct NewtonOptions {
    double tol = 1e-10;  // on ||F||_inf
    int max_iter = 50;
    double min_damping = 0x1p-20;
};

struct NewtonReport {
    Vector y;
    double p = 0.0;
    int iterations = 0;
    double residual_norm = 0.0;
};

/// Damped Newton in y at fixed p. The step length is halved until the
/// residual norm decreases. Throws NoConvergence, SingularMatrix, or
/// DomainViolation (bad starting point).
NewtonReport newton_solve(const Model& model, const Vector& y0, double p,
                          const NewtonOptions& opts = {});

Vector newton_refine(const Model& model, const Vector& y0, double p, double tol = 1e-10,
                     int max_iter = 50);

/// Damped Newton with state component `fixed` frozen at y0[fixed]; the
/// unknowns are the remaining components and p. Stays well posed at a
/// limit point where the fixed-p problem becomes singular.
NewtonReport newton_solve_fixed_component(const Model& model, const Vector& y0, double p0,
                                          std::size_t fixed, const NewtonOptions& opts = {});

}  // namespace paracont

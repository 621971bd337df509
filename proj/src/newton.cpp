#include "paracont/newton.hpp"

#include <string>

#include "paracont/errors.hpp"

namespace paracont {

namespace {

struct Solution {
    Vector z;
    int iterations = 0;
    double residual_norm = 0.0;
};

// label() is only called when an error is reported.
template <class ResidualFn, class JacobianFn, class LabelFn>
Solution damped_newton(ResidualFn&& residual, JacobianFn&& jacobian, Vector z,
                       const NewtonOptions& opts, LabelFn&& label) {
    if (!(opts.tol > 0.0) || opts.max_iter < 1)
        throw PreconditionViolation("newton: tol must be > 0 and max_iter >= 1");

    Vector f = residual(z);
    double norm = f.norm_inf();
    int it = 0;
    while (norm > opts.tol) {
        if (it >= opts.max_iter)
            throw NoConvergence(label() + ": no convergence after " + std::to_string(it) +
                                " iterations (|F| = " + std::to_string(norm) + ")");
        const Vector step = LuFactorization(jacobian(z)).solve(f);

        bool accepted = false;
        for (double lambda = 1.0; lambda >= opts.min_damping; lambda *= 0.5) {
            Vector trial = z - lambda * step;
            Vector ft;
            try {
                ft = residual(trial);
            } catch (const DomainViolation&) {
                continue;
            }
            const double tn = ft.norm_inf();
            if (tn < norm) {
                z = std::move(trial);
                f = std::move(ft);
                norm = tn;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw NoConvergence(label() + ": damping exhausted at |F| = " + std::to_string(norm));
        ++it;
    }
    return {std::move(z), it, norm};
}

}  // namespace

NewtonReport newton_solve(const Model& model, const Vector& y0, double p, const NewtonOptions& opts) {
    auto sol = damped_newton([&](const Vector& y) { return model.residual(y, p); },
                             [&](const Vector& y) { return model.jacobian(y, p); }, y0, opts,
                             [&] { return "newton(" + model.name() + ")"; });
    return {std::move(sol.z), p, sol.iterations, sol.residual_norm};
}

Vector newton_refine(const Model& model, const Vector& y0, double p, double tol, int max_iter) {
    NewtonOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    return newton_solve(model, y0, p, opts).y;
}

NewtonReport newton_solve_fixed_component(const Model& model, const Vector& y0, double p0,
                                          std::size_t fixed, const NewtonOptions& opts) {
    const std::size_t n = model.dimension();
    if (y0.size() != n) throw DimensionMismatch("fixed-component newton: bad state size");
    if (fixed >= n) throw PreconditionViolation("fixed-component newton: index out of range");

    // z = (y without component `fixed`, p)
    auto unpack = [&](const Vector& z) {
        Vector y(n);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i) y[i] = (i == fixed) ? y0[fixed] : z[k++];
        return std::pair{y, z[n - 1]};
    };
    Vector z(n);
    {
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != fixed) z[k++] = y0[i];
        z[n - 1] = p0;
    }

    auto residual = [&](const Vector& zz) {
        auto [y, p] = unpack(zz);
        return model.residual(y, p);
    };
    auto jacobian = [&](const Vector& zz) {
        auto [y, p] = unpack(zz);
        const Matrix j = model.jacobian(y, p);
        const Vector w = model.param_derivative(y, p);
        Matrix a(n);
        for (std::size_t r = 0; r < n; ++r) {
            std::size_t k = 0;
            for (std::size_t c = 0; c < n; ++c)
                if (c != fixed) a(r, k++) = j(r, c);
            a(r, n - 1) = w[r];
        }
        return a;
    };

    auto sol = damped_newton(residual, jacobian, std::move(z), opts,
                             [&] { return "fixed-component newton(" + model.name() + ")"; });
    auto [y, p] = unpack(sol.z);
    return {std::move(y), p, sol.iterations, sol.residual_norm};
}

}  // namespace paracont

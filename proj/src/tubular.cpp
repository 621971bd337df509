#include "paracont/tubular.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "paracont/errors.hpp"

namespace paracont::tubular {

namespace {

void set_named(TubularParams& p, std::string_view name, double value) {
    if (name == "Da") p.Da = value;
    else if (name == "gamma") p.gamma = value;
    else if (name == "beta") p.beta = value;
    else if (name == "n") p.n = value;
    else if (name == "Pe") p.Pe = value;
    else if (name == "N") p.N = static_cast<int>(std::lround(value));
    else throw UnknownParameter("tubular: unknown parameter '" + std::string(name) + "'");
}

double get_named(const TubularParams& p, std::string_view name) {
    if (name == "Da") return p.Da;
    if (name == "gamma") return p.gamma;
    if (name == "beta") return p.beta;
    if (name == "n") return p.n;
    if (name == "Pe") return p.Pe;
    if (name == "N") return p.N;
    throw UnknownParameter("tubular: unknown parameter '" + std::string(name) + "'");
}

ShootState rhs_at(const ShootState& s, const TubularParams& p, double xi) {
    if (!in_domain(s.alpha, p))
        throw DomainViolation("tubular: alpha=" + std::to_string(s.alpha) +
                              " left the domain at xi=" + std::to_string(xi));
    return {s.u, p.Pe * (s.u - p.Da * s.alpha * std::pow(1.0 - s.alpha, p.n) *
                                   std::exp(p.gamma * p.beta * s.alpha / (1.0 + p.beta * s.alpha)))};
}

// Integrates from xi = 1 to xi = 0; `record(i, state)` sees step index i
// counted from the outlet (i = 0 at xi = 1).
template <class Record>
ShootState integrate(double s, const TubularParams& p, Record&& record) {
    p.validate();
    const int steps = p.N;
    const double h = -1.0 / steps;
    ShootState y{s, 0.0};
    record(0, y);
    for (int i = 0; i < steps; ++i) {
        const double xi = 1.0 + i * h;
        const ShootState k1 = rhs_at(y, p, xi);
        const ShootState k2 = rhs_at({y.alpha + 0.5 * h * k1.alpha, y.u + 0.5 * h * k1.u}, p, xi + 0.5 * h);
        const ShootState k3 = rhs_at({y.alpha + 0.5 * h * k2.alpha, y.u + 0.5 * h * k2.u}, p, xi + 0.5 * h);
        const ShootState k4 = rhs_at({y.alpha + h * k3.alpha, y.u + h * k3.u}, p, xi + h);
        y.alpha += h / 6.0 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
        y.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
        if (!(std::fabs(y.alpha) <= kOverflowLimit) || !(std::fabs(y.u) <= kOverflowLimit))
            throw Overflow("tubular: shot overflowed at xi=" + std::to_string(xi + h));
        record(i + 1, y);
    }
    return y;
}

}  // namespace

void TubularParams::validate() const {
    if (!(Da > 0.0)) throw PreconditionViolation("tubular: Da must be positive");
    if (!(Pe > 0.0)) throw PreconditionViolation("tubular: Pe must be positive");
    if (N < 2) throw PreconditionViolation("tubular: N must be at least 2");
}

ParameterSet TubularParams::to_parameter_set() const {
    return {{"Da", Da}, {"gamma", gamma}, {"beta", beta}, {"n", n}, {"Pe", Pe}, {"N", double(N)}};
}

TubularParams TubularParams::from_values(ParamView v) {
    if (v.size() != 6) throw DimensionMismatch("tubular: expected 6 parameter values");
    return {v[0], v[1], v[2], v[3], v[4], static_cast<int>(std::lround(v[5]))};
}

TubularParams TubularParams::from_parameter_set(const ParameterSet& set) {
    TubularParams p;
    for (std::size_t i = 0; i < set.size(); ++i) set_named(p, set.names()[i], set.values()[i]);
    return p;
}

bool in_domain(double alpha, const TubularParams& p) noexcept {
    return std::isfinite(alpha) && alpha < 1.0 && 1.0 + p.beta * alpha > 0.0;
}

double phi_tub(double alpha, const TubularParams& p) {
    if (!in_domain(alpha, p))
        throw DomainViolation("tubular: alpha=" + std::to_string(alpha) + " outside the domain");
    return p.Da * alpha * std::pow(1.0 - alpha, p.n) *
           std::exp(p.gamma * p.beta * alpha / (1.0 + p.beta * alpha));
}

ShootState rhs(const ShootState& s, const TubularParams& p) { return {s.u, p.Pe * (s.u - phi_tub(s.alpha, p))}; }

Shot shoot_backward(double s, const TubularParams& p) {
    const auto count = static_cast<std::size_t>(p.N) + 1;
    AxialProfile prof;
    prof.xi.resize(count);
    prof.alpha.resize(count);
    prof.u.resize(count);
    const ShootState end = integrate(s, p, [&](int i, const ShootState& y) {
        const std::size_t k = count - 1 - static_cast<std::size_t>(i);
        prof.xi[k] = static_cast<double>(k) / p.N;
        prof.alpha[k] = y.alpha;
        prof.u[k] = y.u;
    });
    prof.xi.front() = 0.0;
    prof.xi.back() = 1.0;
    return {end.alpha, end.u, std::move(prof)};
}

ShootState shoot_endpoint(double s, const TubularParams& p) {
    return integrate(s, p, [](int, const ShootState&) {});
}

double shooting_residual(double s, const TubularParams& p) {
    try {
        const ShootState end = shoot_endpoint(s, p);
        return end.alpha - end.u / p.Pe;
    } catch (const DomainViolation&) {
        return std::numeric_limits<double>::infinity();
    } catch (const Overflow&) {
        return std::numeric_limits<double>::infinity();
    }
}

namespace {

double finite_residual(double s, const TubularParams& p) {
    const double v = shooting_residual(s, p);
    if (!std::isfinite(v)) throw DomainViolation("tubular: shot failed at s=" + std::to_string(s));
    return v;
}

double fd_in_s(double s, const TubularParams& p, const FdSettings& fd) {
    const double h = fd.step_for(s);
    return (finite_residual(s + h, p) - finite_residual(s - h, p)) / (2.0 * h);
}

double fd_in_param(double s, const TubularParams& p, std::string_view param, const FdSettings& fd) {
    const double value = get_named(p, param);
    const double h = fd.step_for(value);
    TubularParams plus = p, minus = p;
    set_named(plus, param, value + h);
    set_named(minus, param, value - h);
    // N is an integer count; a perturbation that rounds to the same N gives 0.
    const double spread = get_named(plus, param) - get_named(minus, param);
    if (spread == 0.0) return 0.0;
    return (finite_residual(s, plus) - finite_residual(s, minus)) / spread;
}

}  // namespace

Partials fd_partials(double s, double p_value, const TubularParams& params, std::string_view param,
                     const FdSettings& fd) {
    TubularParams base = params;
    set_named(base, param, p_value);
    return {fd_in_s(s, base, fd), fd_in_param(s, base, param, fd)};
}

Model as_model(const TubularParams& params, std::string_view bifurcation_param) {
    params.validate();
    const std::string bif(bifurcation_param);
    Model m("tubular", 1, params.to_parameter_set(), bif, [](const Vector& y, ParamView v) {
        return Vector{finite_residual(y[0], TubularParams::from_values(v))};
    });
    m.set_jacobian([](const Vector& y, ParamView v) {
        Matrix j(1);
        j(0, 0) = fd_in_s(y[0], TubularParams::from_values(v), FdSettings{});
        return j;
    });
    m.set_param_derivative(bif, [bif](const Vector& y, ParamView v) {
        return Vector{fd_in_param(y[0], TubularParams::from_values(v), bif, FdSettings{})};
    });
    m.set_domain_guard([](const Vector& y, ParamView v) {
        return in_domain(y[0], TubularParams::from_values(v));
    });
    return m;
}

}  // namespace paracont::tubular

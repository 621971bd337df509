#include "paracont/cstr.hpp"

#include <cmath>
#include <string>

#include "paracont/errors.hpp"

namespace paracont::cstr {

namespace {

void check_domain(const CstrState& s, const CstrParams& p) {
    if (!in_domain(s, p))
        throw DomainViolation("cstr: state (x=" + std::to_string(s.x) +
                              ", theta=" + std::to_string(s.theta) + ") outside the domain");
}

double arrhenius(double theta, const CstrParams& p) {
    return std::exp(p.gamma * p.beta * theta / (1.0 + p.beta * theta));
}

}  // namespace

void CstrParams::validate() const {
    if (!(Le > 0.0)) throw PreconditionViolation("cstr: Le must be positive");
    if (!(Da > 0.0)) throw PreconditionViolation("cstr: Da must be positive");
    if (!(delta >= 0.0)) throw PreconditionViolation("cstr: delta must be non-negative");
    if (!(n > 0.0)) throw PreconditionViolation("cstr: n must be positive");
}

ParameterSet CstrParams::to_parameter_set() const {
    return {{"Le", Le}, {"Da", Da}, {"gamma", gamma}, {"beta", beta},
            {"delta", delta}, {"theta_c", theta_c}, {"n", n}};
}

CstrParams CstrParams::from_values(ParamView v) {
    if (v.size() != 7) throw DimensionMismatch("cstr: expected 7 parameter values");
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
}

CstrParams CstrParams::from_parameter_set(const ParameterSet& set) {
    CstrParams p;
    p.Le = set.get("Le");
    p.Da = set.get("Da");
    p.gamma = set.get("gamma");
    p.beta = set.get("beta");
    p.delta = set.get("delta");
    p.theta_c = set.get("theta_c");
    p.n = set.get("n");
    return p;
}

bool in_domain(const CstrState& s, const CstrParams& p) noexcept {
    return std::isfinite(s.x) && std::isfinite(s.theta) && s.x > kMinConversion &&
           s.x < kMaxConversion && 1.0 + p.beta * s.theta >= kMinArrheniusDenominator;
}

double phi(const CstrState& s, const CstrParams& p) {
    check_domain(s, p);
    return p.Da * std::pow(1.0 - s.x, p.n) * arrhenius(s.theta, p);
}

Vector residual(const CstrState& s, const CstrParams& p) {
    const double r = phi(s, p);
    return {-s.x + r, -s.theta + r + p.delta * (p.theta_c - s.theta)};
}

Matrix jacobian(const CstrState& s, const CstrParams& p) {
    check_domain(s, p);
    const double e = arrhenius(s.theta, p);
    const double one_minus_x = 1.0 - s.x;
    const double den = 1.0 + p.beta * s.theta;
    const double d_dx = p.n * p.Da * std::pow(one_minus_x, p.n - 1.0) * e;
    const double d_dtheta = p.Da * std::pow(one_minus_x, p.n) * e * p.gamma * p.beta / (den * den);
    Matrix j(2);
    j(0, 0) = -1.0 - d_dx;
    j(0, 1) = d_dtheta;
    j(1, 0) = -d_dx;
    j(1, 1) = -1.0 + d_dtheta - p.delta;
    return j;
}

Vector w_n(const CstrState& s, const CstrParams& p) {
    const double w = phi(s, p) * std::log(1.0 - s.x);
    return {w, w};
}

Matrix dynamic_jacobian(const CstrState& s, const CstrParams& p) {
    Matrix j = jacobian(s, p);
    j(1, 0) /= p.Le;
    j(1, 1) /= p.Le;
    return j;
}

double steady_theta(double x, const CstrParams& p) noexcept {
    return (x + p.delta * p.theta_c) / (1.0 + p.delta);
}

Model as_model(const CstrParams& params, std::string_view bifurcation_param) {
    params.validate();
    Model m("cstr", 2, params.to_parameter_set(), bifurcation_param,
            [](const Vector& y, ParamView v) {
                return residual(CstrState::from_vector(y), CstrParams::from_values(v));
            });
    m.set_jacobian([](const Vector& y, ParamView v) {
        return jacobian(CstrState::from_vector(y), CstrParams::from_values(v));
    });
    m.set_param_derivative("n", [](const Vector& y, ParamView v) {
        return w_n(CstrState::from_vector(y), CstrParams::from_values(v));
    });
    m.set_dynamic_jacobian([](const Vector& y, ParamView v) {
        return dynamic_jacobian(CstrState::from_vector(y), CstrParams::from_values(v));
    });
    m.set_domain_guard([](const Vector& y, ParamView v) {
        return in_domain(CstrState::from_vector(y), CstrParams::from_values(v));
    });
    return m;
}

}  // namespace paracont::cstr

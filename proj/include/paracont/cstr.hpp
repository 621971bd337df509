#pragma once

// Stirred tank reactor: conversion x and temperature theta with Arrhenius
// kinetics of order n, exchanging heat with a coolant.

#include <string_view>

#include "paracont/model.hpp"
#include "paracont/smallmat.hpp"

namespace paracont::cstr {

struct CstrParams {
    double Le = 1.5;
    double Da = 0.2;
    double gamma = 20.0;
    double beta = 1.0;
    double delta = 2.0;
    double theta_c = -0.08;
    double n = 1.0;

    /// Throws PreconditionViolation on Le <= 0, Da <= 0, delta < 0 or n <= 0.
    void validate() const;
    ParameterSet to_parameter_set() const;
    /// Values in to_parameter_set() order (Le, Da, gamma, beta, delta, theta_c, n).
    static CstrParams from_values(ParamView values);
    static CstrParams from_parameter_set(const ParameterSet& set);
};

struct CstrState {
    double x = 0.0;
    double theta = 0.0;

    Vector to_vector() const { return {x, theta}; }
    static CstrState from_vector(const Vector& y) { return {y[0], y[1]}; }
};

// Guard: x in (-0.05, 1 - 1e-12) and 1 + beta*theta >= 1e-9.
inline constexpr double kMinConversion = -0.05;
inline constexpr double kMaxConversion = 1.0 - 1e-12;
inline constexpr double kMinArrheniusDenominator = 1e-9;

bool in_domain(const CstrState& s, const CstrParams& p) noexcept;

/// Da (1-x)^n exp(gamma beta theta / (1 + beta theta)). Throws DomainViolation.
double phi(const CstrState& s, const CstrParams& p);

/// (-x + phi, -theta + phi + delta (theta_c - theta))
Vector residual(const CstrState& s, const CstrParams& p);
Matrix jacobian(const CstrState& s, const CstrParams& p);
/// dF/dn; both components equal.
Vector w_n(const CstrState& s, const CstrParams& p);
/// Jacobian with the heat-balance row divided by Le.
Matrix dynamic_jacobian(const CstrState& s, const CstrParams& p);

/// Steady-state temperature implied by a conversion: (x + delta theta_c)/(1 + delta).
double steady_theta(double x, const CstrParams& p) noexcept;

/// Analytic Jacobian and dynamic Jacobian always; analytic w only for n.
Model as_model(const CstrParams& params, std::string_view bifurcation_param = "n");

}  // namespace paracont::cstr

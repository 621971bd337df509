#pragma once

// Tubular reactor with axial dispersion, equal mass and heat Peclet numbers
// (so temperature equals conversion). The boundary value problem
//
//   alpha' = u,  u' = Pe (u - phi(alpha)),
//   alpha(0) = u(0)/Pe,  u(1) = 0,
//
// is solved by shooting backward from xi = 1 with alpha(1) = s, which turns
// it into the scalar root problem f(s) = alpha(0) - u(0)/Pe = 0.

#include <string_view>
#include <vector>

#include "paracont/model.hpp"

namespace paracont::tubular {

struct TubularParams {
    double Da = 0.5;
    double gamma = 15.0;
    double beta = 2.0;
    double n = 1.5;
    double Pe = 100.0;
    int N = 2000;  // RK4 steps over [0, 1]

    /// Throws PreconditionViolation unless Da > 0, Pe > 0 and N >= 2.
    void validate() const;
    ParameterSet to_parameter_set() const;
    /// Values in to_parameter_set() order (Da, gamma, beta, n, Pe, N).
    static TubularParams from_values(ParamView values);
    static TubularParams from_parameter_set(const ParameterSet& set);
};

struct ShootState {
    double alpha = 0.0;
    double u = 0.0;
};

struct AxialProfile {
    std::vector<double> xi;  // ascending, xi.front() == 0, xi.back() == 1
    std::vector<double> alpha;
    std::vector<double> u;
};

struct Shot {
    double alpha0 = 0.0;
    double u0 = 0.0;
    AxialProfile profile;
};

inline constexpr double kOverflowLimit = 1e12;

bool in_domain(double alpha, const TubularParams& p) noexcept;

/// Da alpha (1-alpha)^n exp(gamma beta alpha / (1 + beta alpha)).
double phi_tub(double alpha, const TubularParams& p);

/// (alpha', u') = (u, Pe (u - phi(alpha))).
ShootState rhs(const ShootState& s, const TubularParams& p);

/// Fixed-step RK4 from xi = 1, (alpha, u) = (s, 0), down to xi = 0.
/// Throws DomainViolation (with the failing xi) or Overflow.
Shot shoot_backward(double s, const TubularParams& p);
/// Endpoint only; same arithmetic as shoot_backward without the profile.
ShootState shoot_endpoint(double s, const TubularParams& p);

/// alpha(0) - u(0)/Pe, or +infinity when the shot fails.
double shooting_residual(double s, const TubularParams& p);

struct Partials {
    double df_ds = 0.0;
    double df_dp = 0.0;
};

/// Central differences of shooting_residual in s and in the parameter
/// `param` (default Da), evaluated with that parameter set to `p_value`.
/// Throws DomainViolation when a probe shot fails.
Partials fd_partials(double s, double p_value, const TubularParams& params,
                     std::string_view param = "Da", const FdSettings& fd = {});

/// One-dimensional model in y = (alpha(1)), default bifurcation parameter Da.
Model as_model(const TubularParams& params, std::string_view bifurcation_param = "Da");

}  // namespace paracont::tubular

#pragma once

// A parameterized nonlinear system F(y, p) = 0 with optional analytic
// derivatives. Missing derivatives fall back to central finite differences.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "paracont/smallmat.hpp"

namespace paracont {

/// Ordered name -> value registry of model constants.
class ParameterSet {
public:
    ParameterSet() = default;
    ParameterSet(std::initializer_list<std::pair<std::string, double>> entries);

    std::size_t size() const noexcept { return values_.size(); }
    bool contains(std::string_view name) const noexcept;
    /// Throws UnknownParameter.
    std::size_t index_of(std::string_view name) const;

    double get(std::string_view name) const { return values_[index_of(name)]; }
    void set(std::string_view name, double value) { values_[index_of(name)] = value; }
    void add(std::string name, double value);

    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<std::string> names_;
    std::vector<double> values_;
};

struct FdSettings {
    double h_rel = 1e-6;
    double h_abs = 1e-9;

    /// Throws PreconditionViolation unless both steps are positive.
    void validate() const;
    double step_for(double x) const noexcept;
};

/// Evaluators receive the full parameter vector, with the bifurcation
/// parameter already substituted, in ParameterSet order.
using ParamView = std::span<const double>;
using StateFn = std::function<Vector(const Vector& y, ParamView params)>;
using MatrixFn = std::function<Matrix(const Vector& y, ParamView params)>;
using GuardFn = std::function<bool(const Vector& y, ParamView params)>;

class Model {
public:
    Model(std::string name, std::size_t dimension, ParameterSet params,
          std::string_view bifurcation_param, StateFn residual);

    // Configuration; a Model is treated as immutable once handed out.
    Model& set_jacobian(MatrixFn fn);
    /// Analytic dF/dparam, used only while `param` is the bifurcation parameter.
    Model& set_param_derivative(std::string param, StateFn fn);
    Model& set_dynamic_jacobian(MatrixFn fn);
    Model& set_domain_guard(GuardFn fn);
    Model& set_fd_settings(FdSettings fd);

    Model with_bifurcation_parameter(std::string_view name) const;
    Model with_parameter(std::string_view name, double value) const;

    const std::string& name() const noexcept { return name_; }
    std::size_t dimension() const noexcept { return dim_; }
    const ParameterSet& parameters() const noexcept { return params_; }
    const std::string& bifurcation_parameter() const noexcept { return params_.names()[bif_]; }
    /// Registry value of the bifurcation parameter.
    double parameter_value() const noexcept { return params_.values()[bif_]; }
    const FdSettings& fd_settings() const noexcept { return fd_; }

    bool has_analytic_jacobian() const noexcept { return static_cast<bool>(jacobian_); }
    bool has_analytic_param_derivative() const noexcept;
    bool has_dynamic_jacobian() const noexcept { return static_cast<bool>(dynamic_jacobian_); }

    bool in_domain(const Vector& y, double p) const;

    // All of these throw DomainViolation when the guard rejects y and
    // DimensionMismatch on a wrong-sized state.
    Vector residual(const Vector& y, double p) const;
    Matrix jacobian(const Vector& y, double p) const;
    Matrix jacobian_fd(const Vector& y, double p) const;
    Vector param_derivative(const Vector& y, double p) const;
    Vector param_derivative_fd(const Vector& y, double p) const;
    /// Throws Unsupported when no dynamic Jacobian was configured.
    Matrix dynamic_jacobian(const Vector& y, double p) const;

private:
    std::vector<double> values_with(double p) const;
    void check_state(const Vector& y, ParamView params) const;
    Vector eval_residual(const Vector& y, ParamView params) const;

    std::string name_;
    std::size_t dim_;
    ParameterSet params_;
    std::size_t bif_;
    StateFn residual_;
    MatrixFn jacobian_;
    std::vector<std::pair<std::string, StateFn>> param_derivatives_;
    MatrixFn dynamic_jacobian_;
    GuardFn guard_;
    FdSettings fd_;
};

}  // namespace paracont

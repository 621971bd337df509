#include "paracont/model.hpp"

#include <algorithm>
#include <cmath>

#include "paracont/errors.hpp"

namespace paracont {

ParameterSet::ParameterSet(std::initializer_list<std::pair<std::string, double>> entries) {
    for (const auto& [name, value] : entries) add(name, value);
}

bool ParameterSet::contains(std::string_view name) const noexcept {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t ParameterSet::index_of(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw UnknownParameter("unknown parameter '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

void ParameterSet::add(std::string name, double value) {
    if (contains(name)) throw PreconditionViolation("duplicate parameter '" + name + "'");
    names_.push_back(std::move(name));
    values_.push_back(value);
}

void FdSettings::validate() const {
    if (!(h_rel > 0.0) || !(h_abs > 0.0))
        throw PreconditionViolation("finite-difference steps must be positive");
}

double FdSettings::step_for(double x) const noexcept { return std::max(h_abs, h_rel * std::fabs(x)); }

Model::Model(std::string name, std::size_t dimension, ParameterSet params,
             std::string_view bifurcation_param, StateFn residual)
    : name_(std::move(name)),
      dim_(dimension),
      params_(std::move(params)),
      bif_(params_.index_of(bifurcation_param)),
      residual_(std::move(residual)) {
    if (dim_ == 0) throw PreconditionViolation("model dimension must be positive");
    if (!residual_) throw PreconditionViolation("model needs a residual evaluator");
}

Model& Model::set_jacobian(MatrixFn fn) {
    jacobian_ = std::move(fn);
    return *this;
}

Model& Model::set_param_derivative(std::string param, StateFn fn) {
    params_.index_of(param);
    param_derivatives_.emplace_back(std::move(param), std::move(fn));
    return *this;
}

Model& Model::set_dynamic_jacobian(MatrixFn fn) {
    dynamic_jacobian_ = std::move(fn);
    return *this;
}

Model& Model::set_domain_guard(GuardFn fn) {
    guard_ = std::move(fn);
    return *this;
}

Model& Model::set_fd_settings(FdSettings fd) {
    fd.validate();
    fd_ = fd;
    return *this;
}

Model Model::with_bifurcation_parameter(std::string_view name) const {
    Model copy = *this;
    copy.bif_ = params_.index_of(name);
    return copy;
}

Model Model::with_parameter(std::string_view name, double value) const {
    Model copy = *this;
    copy.params_.set(name, value);
    return copy;
}

bool Model::has_analytic_param_derivative() const noexcept {
    const auto& bif = bifurcation_parameter();
    return std::any_of(param_derivatives_.begin(), param_derivatives_.end(),
                       [&](const auto& entry) { return entry.first == bif; });
}

std::vector<double> Model::values_with(double p) const {
    std::vector<double> v = params_.values();
    v[bif_] = p;
    return v;
}

void Model::check_state(const Vector& y, ParamView params) const {
    if (y.size() != dim_)
        throw DimensionMismatch(name_ + ": state of size " + std::to_string(y.size()) +
                                ", expected " + std::to_string(dim_));
    if (!y.all_finite()) throw DomainViolation(name_ + ": non-finite state");
    if (guard_ && !guard_(y, params)) throw DomainViolation(name_ + ": state outside the model domain");
}

Vector Model::eval_residual(const Vector& y, ParamView params) const {
    check_state(y, params);
    Vector f = residual_(y, params);
    if (f.size() != dim_) throw DimensionMismatch(name_ + ": residual has wrong length");
    if (!f.all_finite()) throw DomainViolation(name_ + ": non-finite residual");
    return f;
}

bool Model::in_domain(const Vector& y, double p) const {
    if (y.size() != dim_ || !y.all_finite()) return false;
    if (!guard_) return true;
    const auto v = values_with(p);
    return guard_(y, v);
}

Vector Model::residual(const Vector& y, double p) const {
    const auto v = values_with(p);
    return eval_residual(y, v);
}

Matrix Model::jacobian(const Vector& y, double p) const {
    if (!jacobian_) return jacobian_fd(y, p);
    const auto v = values_with(p);
    check_state(y, v);
    Matrix j = jacobian_(y, v);
    if (j.dim() != dim_) throw DimensionMismatch(name_ + ": Jacobian has wrong dimension");
    return j;
}

Matrix Model::jacobian_fd(const Vector& y, double p) const {
    const auto v = values_with(p);
    check_state(y, v);
    Matrix j(dim_);
    Vector probe = y;
    for (std::size_t col = 0; col < dim_; ++col) {
        const double h = fd_.step_for(y[col]);
        probe[col] = y[col] + h;
        const Vector fp = eval_residual(probe, v);
        probe[col] = y[col] - h;
        const Vector fm = eval_residual(probe, v);
        probe[col] = y[col];
        for (std::size_t row = 0; row < dim_; ++row) j(row, col) = (fp[row] - fm[row]) / (2.0 * h);
    }
    return j;
}

Vector Model::param_derivative(const Vector& y, double p) const {
    const auto& bif = bifurcation_parameter();
    for (const auto& [param, fn] : param_derivatives_) {
        if (param != bif) continue;
        const auto v = values_with(p);
        check_state(y, v);
        Vector w = fn(y, v);
        if (w.size() != dim_) throw DimensionMismatch(name_ + ": parameter derivative has wrong length");
        return w;
    }
    return param_derivative_fd(y, p);
}

Vector Model::param_derivative_fd(const Vector& y, double p) const {
    const double h = fd_.step_for(p);
    const Vector fp = residual(y, p + h);
    const Vector fm = residual(y, p - h);
    Vector w(dim_);
    for (std::size_t i = 0; i < dim_; ++i) w[i] = (fp[i] - fm[i]) / (2.0 * h);
    return w;
}

Matrix Model::dynamic_jacobian(const Vector& y, double p) const {
    if (!dynamic_jacobian_) throw Unsupported(name_ + ": no dynamic Jacobian");
    const auto v = values_with(p);
    check_state(y, v);
    return dynamic_jacobian_(y, v);
}

}  // namespace paracont

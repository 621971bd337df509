#include "oracles.hpp"

#include <cmath>
#include <limits>

namespace oracle {

namespace {

template <class F>
double bisect(F&& f, double a, double b, double fa) {
    for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::fabs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

double reduced(const Cstr& c, double x, double n) { return -x + cstr_rate(c, x, cstr_theta_of_x(c, x), n); }

// d/dx of the reduced equation, by hand.
double reduced_slope(const Cstr& c, double x, double n) {
    const double th = cstr_theta_of_x(c, x);
    const double r = cstr_rate(c, x, th, n);
    const double den = 1.0 + c.beta * th;
    const double dth_dx = 1.0 / (1.0 + c.delta);
    return -1.0 + r * (-n / (1.0 - x) + c.gamma * c.beta / (den * den) * dth_dx);
}

}  // namespace

double cstr_rate(const Cstr& c, double x, double theta, double n) {
    return c.Da * std::pow(1.0 - x, n) * std::exp(c.gamma * c.beta * theta / (1.0 + c.beta * theta));
}

std::array<double, 2> cstr_residual(const Cstr& c, double x, double theta, double n) {
    const double r = cstr_rate(c, x, theta, n);
    return {-x + r, -theta + r - c.delta * (theta - c.theta_c)};
}

std::array<double, 4> cstr_jacobian(const Cstr& c, double x, double theta, double n) {
    const double r = cstr_rate(c, x, theta, n);
    const double den = 1.0 + c.beta * theta;
    const double rx = -n * r / (1.0 - x);
    const double rt = r * c.gamma * c.beta / (den * den);
    return {-1.0 + rx, rt, rx, -1.0 - c.delta + rt};
}

double cstr_theta_of_x(const Cstr& c, double x) { return (x + c.delta * c.theta_c) / (1.0 + c.delta); }

std::vector<std::array<double, 2>> cstr_steady_states(const Cstr& c, double n, double x_lo, double x_hi,
                                                      std::size_t samples) {
    std::vector<std::array<double, 2>> out;
    auto g = [&](double x) { return reduced(c, x, n); };
    double xa = x_lo, ga = g(xa);
    for (std::size_t k = 1; k <= samples; ++k) {
        const double xb = x_lo + (x_hi - x_lo) * static_cast<double>(k) / static_cast<double>(samples);
        const double gb = g(xb);
        if (ga == 0.0) {
            out.push_back({xa, cstr_theta_of_x(c, xa)});
        } else if ((ga < 0) != (gb < 0) && gb != 0.0) {
            const double x = bisect(g, xa, xb, ga);
            out.push_back({x, cstr_theta_of_x(c, x)});
        }
        xa = xb;
        ga = gb;
    }
    return out;
}

std::vector<double> cstr_fold_orders(const Cstr& c, double n_lo, double n_hi, std::size_t samples) {
    // Along the reduced curve g(x, n) = 0 the order is explicit:
    //   n(x) = log(x / (Da e(x))) / log(1 - x),
    // so folds are the interior extrema of n(x).
    auto order_of_x = [&](double x) {
        const double th = cstr_theta_of_x(c, x);
        const double e = std::exp(c.gamma * c.beta * th / (1.0 + c.beta * th));
        return std::log(x / (c.Da * e)) / std::log(1.0 - x);
    };
    auto slope = [&](double x) {
        const double h = 1e-6 * x;
        return (order_of_x(x + h) - order_of_x(x - h)) / (2.0 * h);
    };
    std::vector<double> out;
    const double lo = 1e-3, hi = 0.95;
    double xa = lo, sa = slope(xa);
    for (std::size_t k = 1; k <= samples; ++k) {
        const double xb = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples);
        const double sb = slope(xb);
        if (std::isfinite(sa) && std::isfinite(sb) && (sa < 0) != (sb < 0)) {
            const double x = bisect(slope, xa, xb, sa);
            const double n = order_of_x(x);
            if (n >= n_lo && n <= n_hi && std::fabs(reduced_slope(c, x, n)) < 1e-3) out.push_back(n);
        }
        xa = xb;
        sa = sb;
    }
    return out;
}

double tubular_rate(const Tubular& t, double a) {
    return t.Da * a * std::pow(1.0 - a, t.n) * std::exp(t.gamma * t.beta * a / (1.0 + t.beta * a));
}

double hermite_at(const std::vector<double>& xi, const std::vector<double>& alpha, const std::vector<double>& u,
                  double x) {
    if (x <= xi.front()) return alpha.front();
    if (x >= xi.back()) return alpha.back();
    std::size_t lo = 0, hi = xi.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (xi[mid] <= x ? lo : hi) = mid;
    }
    const double h = xi[hi] - xi[lo];
    const double s = (x - xi[lo]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * alpha[lo] + h10 * h * u[lo] + h01 * alpha[hi] + h11 * h * u[hi];
}

double collocation_residual(const Tubular& t, const std::vector<double>& xi, const std::vector<double>& alpha,
                            const std::vector<double>& u, std::size_t interior) {
    return collocation_residual_fn(t, [&](double x) { return hermite_at(xi, alpha, u, x); }, interior);
}

std::vector<double> collocation_solve(const Tubular& t, std::vector<double> a, std::size_t interior) {
    const std::size_t m = interior + 2;  // nodes 0 .. interior + 1
    if (a.size() != m) return {};
    const double h = 1.0 / static_cast<double>(interior + 1);
    const double c2 = 1.0 / (t.Pe * h * h), c1 = 1.0 / (2.0 * h);
    auto rate_slope = [&](double x) {
        const double d = 1e-7 * std::max(1.0, std::fabs(x));
        return (tubular_rate(t, x + d) - tubular_rate(t, x - d)) / (2 * d);
    };
    std::vector<double> lo(m), di(m), up(m), rhs(m);
    for (int it = 0; it < 50; ++it) {
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            // Ghosts: alpha_{-1} = alpha_1 - 2 h Pe alpha_0, alpha_{m} = alpha_{m-2}.
            const double am = i == 0 ? a[1] - 2.0 * h * t.Pe * a[0] : a[i - 1];
            const double ap = i == m - 1 ? a[m - 2] : a[i + 1];
            const double r = c2 * (ap - 2.0 * a[i] + am) - c1 * (ap - am) + tubular_rate(t, a[i]);
            if (!std::isfinite(r)) return {};
            worst = std::max(worst, std::fabs(r));
            rhs[i] = -r;
            di[i] = -2.0 * c2 + rate_slope(a[i]);
            lo[i] = c2 + c1;
            up[i] = c2 - c1;
            if (i == 0) {
                // d r / d alpha_0 picks up the ghost's dependence on alpha_0.
                di[0] += (c2 + c1) * (-2.0 * h * t.Pe);
                up[0] = (c2 - c1) + (c2 + c1);
                lo[0] = 0.0;
            }
            if (i == m - 1) {
                lo[i] = (c2 + c1) + (c2 - c1);
                up[i] = 0.0;
            }
        }
        if (worst < 1e-12) return a;
        // Thomas algorithm.
        for (std::size_t i = 1; i < m; ++i) {
            const double f = lo[i] / di[i - 1];
            di[i] -= f * up[i - 1];
            rhs[i] -= f * rhs[i - 1];
        }
        std::vector<double> d(m);
        d[m - 1] = rhs[m - 1] / di[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) d[i] = (rhs[i] - up[i] * d[i + 1]) / di[i];
        double change = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            a[i] += d[i];
            change = std::max(change, std::fabs(d[i]));
        }
        if (change < 1e-13) return a;
    }
    return {};
}

double tubular_forward_outlet_slope(const Tubular& t, double a0, int steps) {
    auto f = [&](double a, double v, double& da, double& dv) {
        da = v;
        dv = t.Pe * (v - tubular_rate(t, a));
    };
    double a = a0, v = t.Pe * a0;
    const double h = 1.0 / steps;
    for (int k = 0; k < steps; ++k) {
        double k1a, k1v, k2a, k2v, k3a, k3v, k4a, k4v;
        f(a, v, k1a, k1v);
        f(a + 0.5 * h * k1a, v + 0.5 * h * k1v, k2a, k2v);
        f(a + 0.5 * h * k2a, v + 0.5 * h * k2v, k3a, k3v);
        f(a + h * k3a, v + h * k3v, k4a, k4v);
        a += h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
        v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        if (!std::isfinite(v) || std::fabs(v) > 1e300) return std::numeric_limits<double>::infinity();
    }
    return v;
}

}  // namespace oracle

#include <doctest.h>

#include <cmath>

#include "paracont/continuation.hpp"
#include "paracont/cstr.hpp"
#include "paracont/errors.hpp"
#include "paracont/tubular.hpp"

using namespace paracont;

namespace {

Model scalar(std::string name, StateFn f, double p0 = 0.0) {
    ParameterSet ps;
    ps.add("p", p0);
    return Model(std::move(name), 1, ps, "p", std::move(f));
}

Model parabola() {
    Model m = scalar("parabola", [](const Vector& y, ParamView q) { return Vector{y[0] * y[0] - q[0]}; });
    m.set_jacobian([](const Vector& y, ParamView) { return Matrix::diagonal({2.0 * y[0]}); });
    m.set_param_derivative("p", [](const Vector&, ParamView) { return Vector{-1.0}; });
    return m;
}

int sign(double v) { return (v > 0) - (v < 0); }

}  // namespace

TEST_CASE("predictor step follows the sign of det J") {
    const Model m = parabola();
    const auto up = predictor_step(m, Vector{1.0}, 1.0, 1e-3, +1);
    CHECK(up.dp == doctest::Approx(1e-3));
    CHECK(up.dy[0] == doctest::Approx(0.5e-3));
    CHECK(up.det_j == doctest::Approx(2.0));
    const auto down = predictor_step(m, Vector{-1.0}, 1.0, 1e-3, +1);
    CHECK(down.dp == doctest::Approx(-1e-3));
    CHECK(down.dy[0] == doctest::Approx(0.5e-3));

    // Near the fold the state change is clamped and dp shrinks with it.
    const auto clamped = predictor_step(m, Vector{1e-3}, 1e-6, 1e-3, -1, 0.05);
    CHECK(clamped.clamped);
    CHECK(std::fabs(clamped.dy[0]) == doctest::Approx(0.05));
    CHECK(clamped.dp == doctest::Approx(-1e-4));
}

TEST_CASE("the parabola is traced around its fold") {
    ContinuationConfig cfg;
    cfg.direction = -1;
    cfg.p_min = -0.5;
    cfg.p_max = 1.5;
    const Branch b = trace_branch(parabola(), Vector{1.0}, 1.0, cfg);
    CHECK(b.termination == Termination::p_bound);
    REQUIRE(b.count(EventKind::limit_point) == 1);
    const EventRecord& lp = b.events.front();
    CHECK(std::fabs(lp.y[0]) <= 1e-6);
    CHECK(std::fabs(lp.p) <= 1e-6);
    CHECK(b.points[lp.point_index].event == EventKind::limit_point);
    CHECK(b.points.front().event == EventKind::start);
    CHECK(b.points.back().event == EventKind::terminal);
    CHECK(b.points.back().y[0] < -1.0);
    CHECK(b.points.back().p <= 1.5);
    CHECK(b.hopf_status.rfind("unsupported", 0) == 0);

    for (std::size_t k = 0; k + 1 < b.points.size(); ++k) {
        const auto& a = b.points[k];
        const auto& c = b.points[k + 1];
        if (c.adjusted || a.event == EventKind::limit_point || c.event == EventKind::limit_point) continue;
        CHECK(sign(c.p - a.p) == cfg.direction * sign(a.det_j));
    }
}

TEST_CASE("limit point bisection needs a sign change") {
    const Model m = parabola();
    BranchPoint a{1.0, Vector{1.0}, 2.0};
    BranchPoint b{0.81, Vector{0.9}, 1.8};
    CHECK_THROWS_AS(detect_limit_point(m, a, b, 1e-8), PreconditionViolation);
    BranchPoint c{0.0004, Vector{-0.02}, -0.04};
    BranchPoint d{0.0004, Vector{0.02}, 0.04};
    const Refinement r = detect_limit_point(m, d, c, 1e-10);
    CHECK(r.converged);
    CHECK(std::fabs(r.point.det_j) <= 1e-10);
    CHECK(std::fabs(r.point.p) <= 1e-12);
}

TEST_CASE("a circle closes on itself with the corrector on") {
    Model m = scalar("circle", [](const Vector& y, ParamView q) { return Vector{y[0] * y[0] + q[0] * q[0] - 1.0}; });
    ContinuationConfig cfg;
    cfg.dp = 2e-3;
    cfg.corrector = true;
    const Branch b = trace_branch(m, Vector{1.0}, 0.0, cfg);
    CHECK(b.termination == Termination::closed_curve);
    CHECK(b.count(EventKind::limit_point) == 2);
    for (const auto& ev : b.events) CHECK(std::fabs(std::fabs(ev.p) - 1.0) <= 1e-8);
}

TEST_CASE("termination reasons") {
    Model line = scalar("line", [](const Vector& y, ParamView q) { return Vector{y[0] - q[0]}; });

    ContinuationConfig cfg;
    cfg.max_steps = 10;
    Branch b = trace_branch(line, Vector{0.0}, 0.0, cfg);
    CHECK(b.termination == Termination::max_steps);
    CHECK(b.points.size() == 11);

    cfg = {};
    cfg.p_max = 0.0105;
    b = trace_branch(line, Vector{0.0}, 0.0, cfg);
    CHECK(b.termination == Termination::p_bound);
    CHECK(b.points.back().p <= 0.0105);
    CHECK(b.points.size() == 11);

    Model guarded = line;
    guarded.set_domain_guard([](const Vector& y, ParamView) { return y[0] < 0.0205; });
    cfg = {};
    b = trace_branch(guarded, Vector{0.0}, 0.0, cfg);
    CHECK(b.termination == Termination::domain_exit);
    CHECK(b.points.back().y[0] < 0.0205);
    CHECK(b.points.size() == 21);

    cfg = {};
    cfg.dp = 1e-14;
    b = trace_branch(line, Vector{0.0}, 0.0, cfg);
    CHECK(b.termination == Termination::stalled);
}

TEST_CASE("config validation") {
    ContinuationConfig cfg;
    cfg.dp = 0.0;
    CHECK_THROWS_AS(cfg.validate(), PreconditionViolation);
    cfg = {};
    cfg.direction = 0;
    CHECK_THROWS_AS(cfg.validate(), PreconditionViolation);
    cfg = {};
    cfg.p_min = 2.0;
    cfg.p_max = 1.0;
    CHECK_THROWS_AS(cfg.validate(), PreconditionViolation);
    CHECK(ContinuationConfig{}.effective_closure_tol() == 0.5e-3);
}

TEST_CASE("event tags") {
    for (EventKind k : {EventKind::none, EventKind::limit_point, EventKind::hopf, EventKind::start,
                        EventKind::terminal})
        CHECK(event_from_string(to_string(k)) == k);
    CHECK(to_string(EventKind::limit_point) == "LP");
    CHECK(to_string(EventKind::hopf) == "HB");
    CHECK_THROWS_AS(event_from_string("XX"), ParseError);
}

TEST_CASE("CSTR branch carries eigenvalues and sorted events") {
    const cstr::CstrParams params;
    const Model m = cstr::as_model(params);
    ContinuationConfig cfg;
    cfg.direction = -1;
    cfg.p_min = 1.0;
    cfg.p_max = 2.0;
    cfg.corrector = true;
    const Branch b = trace_branch(m, Vector{0.116, cstr::steady_theta(0.116, params)}, 2.0, cfg);
    CHECK(b.termination == Termination::p_bound);
    CHECK(b.count(EventKind::limit_point) == 2);
    CHECK(b.count(EventKind::hopf) >= 1);
    for (std::size_t k = 1; k < b.events.size(); ++k) CHECK(b.events[k - 1].point_index < b.events[k].point_index);
    for (const auto& ev : b.events) CHECK(b.points[ev.point_index].event == ev.kind);
    for (const auto& pt : b.points) CHECK(pt.eig.has_value());
    CHECK(b.hopf_status.empty());
}

TEST_CASE("Hopf detection needs a dynamic Jacobian") {
    const Model m = tubular::as_model(tubular::TubularParams{});
    Branch b;
    b.points.push_back(BranchPoint{0.5, Vector{0.39}, -0.6});
    CHECK_THROWS_AS(detect_hopf(m, b, 1e-8), Unsupported);
}

TEST_CASE("events on a predictor-only branch are refined onto the true curve") {
    const cstr::CstrParams params;
    const Model m = cstr::as_model(params);
    ContinuationConfig cfg;
    cfg.direction = -1;
    cfg.p_min = 1.0;
    cfg.p_max = 2.0;
    const Branch raw = trace_branch(m, Vector{0.116, cstr::steady_theta(0.116, params)}, 2.0, cfg);
    cfg.corrector = true;
    const Branch fixed = trace_branch(m, Vector{0.116, cstr::steady_theta(0.116, params)}, 2.0, cfg);
    REQUIRE(raw.events.size() == fixed.events.size());
    for (std::size_t k = 0; k < raw.events.size(); ++k) {
        CHECK(raw.events[k].kind == fixed.events[k].kind);
        CHECK(raw.events[k].converged);
        CHECK(raw.events[k].p == doctest::Approx(fixed.events[k].p).epsilon(1e-7));
        CHECK(raw.events[k].residual <= 1e-10);
    }
}

#include "paracont/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paracont/errors.hpp"

namespace paracont {

namespace {

constexpr int kMaxHalvings = 20;
constexpr int kMaxBisections = 60;
constexpr int kBracketSamples = 8;
constexpr int kMaxExtension = 64;

int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

std::optional<EigenPair2> eigen_summary(const Model& model, const Vector& y, double p) {
    if (!model.has_dynamic_jacobian() || model.dimension() != 2) return std::nullopt;
    try {
        return eig2(model.dynamic_jacobian(y, p));
    } catch (const Error&) {
        return std::nullopt;
    }
}

BranchPoint make_point(const Model& model, Vector y, double p, EventKind event, bool adjusted) {
    BranchPoint pt;
    pt.det_j = determinant(model.jacobian(y, p));
    pt.eig = eigen_summary(model, y, p);
    pt.p = p;
    pt.y = std::move(y);
    pt.event = event;
    pt.adjusted = adjusted;
    return pt;
}

std::size_t dominant_component(const Vector& dy) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < dy.size(); ++i)
        if (std::fabs(dy[i]) > std::fabs(dy[best])) best = i;
    return best;
}

double combined_norm(const Vector& dy, double dp) { return std::max(dy.norm_inf(), std::fabs(dp)); }

struct Trial {
    Vector y;
    double p = 0.0;
    double value = 0.0;  // indicator being driven to zero
    double residual = 0.0;
    int iterations = 0;
};

// Finds t in [0, 1] with |indicator(trial(t))| <= tol. Corrected endpoints may
// not bracket when the raw trace has drifted, so a coarse scan locates a sign
// change first.
template <class Eval>
Refinement bisect_indicator(Eval&& eval, double tol, EventKind kind, const Model& model) {
    std::optional<Trial> best;
    int evaluations = 0;
    auto consider = [&](const std::optional<Trial>& t) {
        ++evaluations;
        if (t && (!best || std::fabs(t->value) < std::fabs(best->value))) best = t;
    };

    std::optional<Trial> lo_trial;
    std::optional<Trial> hi_trial;
    double lo = 0.0;
    double hi = 1.0;
    std::optional<Trial> at_start;  // t = 0
    std::optional<Trial> at_end;    // t = 1
    {
        std::optional<Trial> prev;
        double prev_t = 0.0;
        for (int k = 0; k <= kBracketSamples; ++k) {
            const double t = static_cast<double>(k) / kBracketSamples;
            auto cur = eval(t);
            consider(cur);
            if (k == 0) at_start = cur;
            if (k == kBracketSamples) at_end = cur;
            if (cur && std::fabs(cur->value) <= tol) {
                lo_trial = hi_trial = cur;
                break;
            }
            if (cur && prev && sign_of(cur->value) != sign_of(prev->value)) {
                lo_trial = prev;
                hi_trial = cur;
                lo = prev_t;
                hi = t;
                break;
            }
            if (cur) {
                prev = cur;
                prev_t = t;
            }
        }
    }

    // Corrected endpoints of a drifted (predictor-only) step need not
    // bracket the root; march outward along the secant, one step length at a
    // time on each side, until the corrected indicator changes sign.
    if (!lo_trial) {
        struct Edge {
            std::optional<Trial> trial;
            double t;
        };
        Edge left{at_start, 0.0}, right{at_end, 1.0};
        for (int m = 1; m <= kMaxExtension && !lo_trial; ++m) {
            for (int side : {+1, -1}) {
                const double t = side > 0 ? 1.0 + m : -static_cast<double>(m);
                auto cur = eval(t);
                consider(cur);
                if (!cur) continue;
                Edge& edge = side > 0 ? right : left;
                if (std::fabs(cur->value) <= tol) {
                    lo_trial = hi_trial = cur;
                    break;
                }
                if (edge.trial && sign_of(cur->value) != sign_of(edge.trial->value)) {
                    lo_trial = edge.trial;
                    hi_trial = cur;
                    lo = edge.t;
                    hi = t;
                    break;
                }
                edge = Edge{cur, t};
            }
        }
    }

    bool converged = false;
    if (lo_trial && hi_trial) {
        if (std::fabs(lo_trial->value) <= tol) {
            best = lo_trial;
            converged = true;
        }
        for (int it = 0; it < kMaxBisections && !converged; ++it) {
            const double mid = 0.5 * (lo + hi);
            auto cur = eval(mid);
            consider(cur);
            if (!cur) break;
            if (std::fabs(cur->value) <= tol) {
                best = cur;
                converged = true;
                break;
            }
            if (sign_of(cur->value) == sign_of(lo_trial->value)) {
                lo = mid;
                lo_trial = cur;
            } else {
                hi = mid;
                hi_trial = cur;
            }
        }
    }

    Refinement out;
    out.converged = converged;
    out.iterations = evaluations;
    if (best) {
        out.residual = best->residual;
        out.point = make_point(model, best->y, best->p, kind, false);
    }
    return out;
}

}  // namespace

std::string_view to_string(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::none: return "none";
        case EventKind::limit_point: return "LP";
        case EventKind::hopf: return "HB";
        case EventKind::start: return "start";
        case EventKind::terminal: return "terminal";
    }
    return "none";
}

std::string_view to_string(Termination reason) noexcept {
    switch (reason) {
        case Termination::p_bound: return "p_bound";
        case Termination::max_steps: return "max_steps";
        case Termination::closed_curve: return "closed_curve";
        case Termination::domain_exit: return "domain_exit";
        case Termination::stalled: return "stalled";
    }
    return "stalled";
}

EventKind event_from_string(std::string_view tag) {
    for (auto k : {EventKind::none, EventKind::limit_point, EventKind::hopf, EventKind::start,
                   EventKind::terminal})
        if (to_string(k) == tag) return k;
    throw ParseError("unknown event tag '" + std::string(tag) + "'");
}

void ContinuationConfig::validate() const {
    auto fail = [](const std::string& what) { throw PreconditionViolation("continuation config: " + what); };
    if (!(dp > 0.0)) fail("dp must be positive");
    if (!(p_min < p_max)) fail("p_min must be below p_max");
    if (max_steps < 1) fail("max_steps must be at least 1");
    if (!(max_dy > 0.0)) fail("max_dy must be positive");
    if (direction != 1 && direction != -1) fail("direction must be +1 or -1");
    if (!(corrector_tol > 0.0) || !(lp_refine_tol > 0.0) || !(hb_tol > 0.0) || !(stall_tol > 0.0))
        fail("tolerances must be positive");
    if (closure_tol && !(*closure_tol > 0.0)) fail("closure_tol must be positive");
    if (corrector_max_iter < 1) fail("corrector_max_iter must be at least 1");
}

std::size_t Branch::count(EventKind kind) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [&](const EventRecord& e) { return e.kind == kind; }));
}

PredictorResult predictor_step(const Model& model, const Vector& y, double p, double dp, int direction,
                               double max_dy) {
    if (direction != 1 && direction != -1) throw PreconditionViolation("predictor: direction must be +1 or -1");
    const LuFactorization lu(model.jacobian(y, p));
    const double det = lu.determinant();
    const int s = sign_of(det);
    if (s == 0) throw SingularMatrix("predictor: det J is exactly zero");

    double signed_dp = direction * s * dp;
    Vector dy = lu.solve(model.param_derivative(y, p));
    dy *= -signed_dp;

    bool clamped = false;
    const double norm = dy.norm_inf();
    if (norm > max_dy) {
        const double scale = max_dy / norm;
        dy *= scale;
        signed_dp *= scale;
        clamped = true;
    }
    return {y + dy, p + signed_dp, dy, signed_dp, det, clamped};
}

namespace {

struct StepOutcome {
    Vector y;
    double p = 0.0;
    bool adjusted = false;
};

enum class StepFailure { none, domain, stalled };

class Tracer {
public:
    Tracer(const Model& model, const ContinuationConfig& cfg) : model_(model), cfg_(cfg) {
        newton_.tol = cfg.corrector_tol;
        newton_.max_iter = cfg.corrector_max_iter;
    }

    Branch run(const Vector& y0, double p0) {
        cfg_.validate();
        Vector y = newton_solve(model_, y0, p0, newton_).y;
        branch_.points.push_back(make_point(model_, y, p0, EventKind::start, false));
        const Vector y_start = y;
        const double p_start = p0;

        if (p0 < cfg_.p_min || p0 > cfg_.p_max) {
            branch_.termination = Termination::p_bound;
            return finish();
        }

        branch_.termination = Termination::max_steps;
        int stall_count = 0;
        for (int step = 0; step < cfg_.max_steps; ++step) {
            const BranchPoint& cur = branch_.points.back();
            StepFailure failure = StepFailure::none;
            std::optional<StepOutcome> next = advance(cur, failure);
            if (!next) {
                branch_.termination =
                    failure == StepFailure::domain ? Termination::domain_exit : Termination::stalled;
                break;
            }
            if (next->p < cfg_.p_min || next->p > cfg_.p_max) {
                branch_.termination = Termination::p_bound;
                break;
            }

            BranchPoint np;
            try {
                np = make_point(model_, next->y, next->p, EventKind::none, next->adjusted);
            } catch (const DomainViolation&) {
                branch_.termination = Termination::domain_exit;
                break;
            }

            const Vector dy = np.y - cur.y;
            const double dpar = np.p - cur.p;
            if (combined_norm(dy, dpar) > 0.0) {
                const double len = combined_norm(dy, dpar);
                last_tangent_ = Tangent{dy * (1.0 / len), dpar / len, len};
            }

            if (sign_of(cur.det_j) * sign_of(np.det_j) < 0) refine_limit_point(cur, np);

            const Vector prev_y = branch_.points.back().y;
            const double prev_p = branch_.points.back().p;
            branch_.points.push_back(std::move(np));
            tangent_reused_ = false;

            if (dy.norm_inf() + std::fabs(dpar) < cfg_.stall_tol) {
                if (++stall_count >= cfg_.stall_steps) {
                    branch_.termination = Termination::stalled;
                    break;
                }
            } else {
                stall_count = 0;
            }

            if (step + 1 >= cfg_.closure_min_steps &&
                passes_near(prev_y, prev_p, branch_.points.back(), y_start, p_start)) {
                branch_.termination = Termination::closed_curve;
                break;
            }
        }
        return finish();
    }

private:
    struct Tangent {
        Vector dy;
        double dp = 0.0;
        double length = 0.0;
    };

    // Distance from the start point to the segment (prev -> cur) in (y, p).
    bool passes_near(const Vector& prev_y, double prev_p, const BranchPoint& cur, const Vector& y0,
                     double p0) const {
        const std::size_t n = y0.size();
        double seg2 = 0.0, proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = cur.y[i] - prev_y[i];
            seg2 += d * d;
            proj += (y0[i] - prev_y[i]) * d;
        }
        const double dp = cur.p - prev_p;
        seg2 += dp * dp;
        proj += (p0 - prev_p) * dp;
        const double t = seg2 > 0.0 ? std::clamp(proj / seg2, 0.0, 1.0) : 0.0;
        double dist2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = prev_y[i] + t * (cur.y[i] - prev_y[i]) - y0[i];
            dist2 += d * d;
        }
        const double d = prev_p + t * dp - p0;
        dist2 += d * d;
        return std::sqrt(dist2) < cfg_.effective_closure_tol();
    }

    std::optional<StepOutcome> advance(const BranchPoint& cur, StepFailure& failure) {
        if (!cfg_.corrector) return predict_only(cur, failure);

        bool domain_only = true;
        for (int halving = 0; halving <= kMaxHalvings; ++halving) {
            const double scale = std::ldexp(1.0, -halving);
            PredictorResult pred;
            bool from_tangent = false;
            try {
                pred = predictor_step(model_, cur.y, cur.p, cfg_.dp * scale, cfg_.direction, cfg_.max_dy);
            } catch (const SingularMatrix&) {
                auto t = tangent_step(cur, scale);
                if (!t) {
                    domain_only = false;
                    continue;
                }
                pred = *t;
                from_tangent = true;
            } catch (const DomainViolation&) {
                continue;
            }

            const bool rescaled = halving > 0 || pred.clamped || from_tangent;
            try {
                NewtonReport r = newton_solve(model_, pred.y, pred.p, newton_);
                if ((r.y - pred.y).norm_inf() <= cfg_.max_dy) return StepOutcome{std::move(r.y), pred.p, rescaled};
                domain_only = false;
            } catch (const DomainViolation&) {
            } catch (const Error&) {
                domain_only = false;
            }

            // Past a fold the fixed-p problem has no nearby root; hold the
            // fastest-moving state component instead and solve for p.
            try {
                NewtonReport r = newton_solve_fixed_component(model_, pred.y, pred.p,
                                                              dominant_component(pred.dy), newton_);
                if (std::fabs(r.p - cur.p) <= cfg_.dp * (1.0 + 1e-9) &&
                    (r.y - pred.y).norm_inf() <= cfg_.max_dy)
                    return StepOutcome{std::move(r.y), r.p, true};
                domain_only = false;
            } catch (const DomainViolation&) {
            } catch (const Error&) {
                domain_only = false;
            }
        }
        failure = domain_only ? StepFailure::domain : StepFailure::stalled;
        return std::nullopt;
    }

    std::optional<StepOutcome> predict_only(const BranchPoint& cur, StepFailure& failure) {
        PredictorResult pred;
        bool from_tangent = false;
        try {
            pred = predictor_step(model_, cur.y, cur.p, cfg_.dp, cfg_.direction, cfg_.max_dy);
        } catch (const SingularMatrix&) {
            auto t = tangent_step(cur, 1.0);
            if (!t) {
                failure = StepFailure::stalled;
                return std::nullopt;
            }
            pred = *t;
            from_tangent = true;
        } catch (const DomainViolation&) {
            failure = StepFailure::domain;
            return std::nullopt;
        }
        if (!model_.in_domain(pred.y, pred.p)) {
            failure = StepFailure::domain;
            return std::nullopt;
        }
        return StepOutcome{std::move(pred.y), pred.p, pred.clamped || from_tangent};
    }

    // Reuses the previous step direction once when J cannot be factored.
    std::optional<PredictorResult> tangent_step(const BranchPoint& cur, double scale) {
        if (!last_tangent_ || tangent_reused_) return std::nullopt;
        tangent_reused_ = true;
        const double len = last_tangent_->length * scale;
        PredictorResult r;
        r.dy = last_tangent_->dy * len;
        r.dp = last_tangent_->dp * len;
        r.y = cur.y + r.dy;
        r.p = cur.p + r.dp;
        r.det_j = cur.det_j;
        r.clamped = true;
        return r;
    }

    void refine_limit_point(const BranchPoint& a, const BranchPoint& b) {
        Refinement ref = detect_limit_point(model_, a, b, cfg_.lp_refine_tol, refine_newton());
        if (ref.point.y.empty()) return;  // every trial failed; nothing to report
        EventRecord rec;
        rec.kind = EventKind::limit_point;
        rec.p = ref.point.p;
        rec.y = ref.point.y;
        rec.det_j = ref.point.det_j;
        rec.indicator = ref.point.det_j;
        rec.residual = ref.residual;
        rec.converged = ref.converged;
        rec.point_index = branch_.points.size();
        branch_.events.push_back(rec);
        branch_.points.push_back(std::move(ref.point));
    }

    NewtonOptions refine_newton() const {
        NewtonOptions o;
        o.tol = std::min(1e-12, cfg_.corrector_tol);
        o.max_iter = std::max(50, cfg_.corrector_max_iter);
        return o;
    }

    void insert_hopf_points() {
        if (!cfg_.hb_detect) {
            branch_.hopf_status = "disabled";
            return;
        }
        std::vector<Refinement> found;
        try {
            found = detect_hopf(model_, branch_, cfg_.hb_tol, refine_newton());
        } catch (const Unsupported& e) {
            branch_.hopf_status = std::string("unsupported: ") + e.what();
            return;
        }
        std::vector<std::pair<std::size_t, Refinement>> placed;
        for (auto& ref : found) {
            if (!ref.converged) continue;
            const std::size_t seg = ref.segment;
            placed.emplace_back(seg, std::move(ref));
        }
        std::sort(placed.begin(), placed.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
        for (auto& [seg, ref] : placed) {
            const std::size_t at = seg + 1;
            for (auto& e : branch_.events)
                if (e.point_index >= at) ++e.point_index;
            EventRecord rec;
            rec.kind = EventKind::hopf;
            rec.p = ref.point.p;
            rec.y = ref.point.y;
            rec.det_j = ref.point.det_j;
            rec.residual = ref.residual;
            rec.converged = ref.converged;
            rec.point_index = at;
            rec.indicator = ref.point.eig ? 2.0 * ref.point.eig->lambda1.real() : 0.0;
            branch_.events.push_back(rec);
            branch_.points.insert(branch_.points.begin() + static_cast<std::ptrdiff_t>(at), std::move(ref.point));
        }
        std::sort(branch_.events.begin(), branch_.events.end(),
                  [](const EventRecord& l, const EventRecord& r) { return l.point_index < r.point_index; });
    }

    Branch finish() {
        insert_hopf_points();
        auto& last = branch_.points.back();
        if (branch_.points.size() > 1 && last.event == EventKind::none) last.event = EventKind::terminal;
        return std::move(branch_);
    }

    const Model& model_;
    ContinuationConfig cfg_;
    NewtonOptions newton_;
    Branch branch_;
    std::optional<Tangent> last_tangent_;
    bool tangent_reused_ = false;
};

}  // namespace

Branch trace_branch(const Model& model, const Vector& y0, double p0, const ContinuationConfig& config) {
    return Tracer(model, config).run(y0, p0);
}

Refinement detect_limit_point(const Model& model, const BranchPoint& a, const BranchPoint& b, double tol,
                              const NewtonOptions& newton) {
    if (sign_of(a.det_j) * sign_of(b.det_j) >= 0)
        throw PreconditionViolation("detect_limit_point: det J does not change sign across the segment");
    const Vector dy = b.y - a.y;
    const double dpar = b.p - a.p;
    const std::size_t fixed = dominant_component(dy);

    auto eval = [&](double t) -> std::optional<Trial> {
        try {
            NewtonReport r = newton_solve_fixed_component(model, a.y + t * dy, a.p + t * dpar, fixed, newton);
            const double det = determinant(model.jacobian(r.y, r.p));
            return Trial{std::move(r.y), r.p, det, r.residual_norm, r.iterations};
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    return bisect_indicator(eval, tol, EventKind::limit_point, model);
}

std::vector<Refinement> detect_hopf(const Model& model, const Branch& branch, double hb_tol,
                                    const NewtonOptions& newton) {
    if (!model.has_dynamic_jacobian()) throw Unsupported("model '" + model.name() + "' has no dynamic Jacobian");
    if (model.dimension() != 2)
        throw Unsupported("Hopf detection needs a 2-state model, '" + model.name() + "' has " +
                          std::to_string(model.dimension()));

    struct Dyn {
        double tr = 0.0;
        double det = 0.0;
        bool ok = false;
    };
    auto dyn_at = [&](const BranchPoint& pt) {
        try {
            const Matrix j = model.dynamic_jacobian(pt.y, pt.p);
            return Dyn{j.trace(), determinant(j), true};
        } catch (const Error&) {
            return Dyn{};
        }
    };

    std::vector<Refinement> out;
    const auto& pts = branch.points;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const Dyn da = dyn_at(pts[k]);
        const Dyn db = dyn_at(pts[k + 1]);
        if (!da.ok || !db.ok) continue;
        if (sign_of(da.tr) == 0 || sign_of(da.tr) == sign_of(db.tr)) continue;
        if (!(da.det > 0.0) || !(db.det > 0.0)) continue;

        const BranchPoint& a = pts[k];
        const Vector dy = pts[k + 1].y - a.y;
        const double dpar = pts[k + 1].p - a.p;
        const std::size_t fixed = dominant_component(dy);

        auto eval = [&](double t) -> std::optional<Trial> {
            const Vector guess = a.y + t * dy;
            const double pg = a.p + t * dpar;
            std::optional<NewtonReport> r;
            try {
                r = newton_solve(model, guess, pg, newton);
            } catch (const Error&) {
                try {
                    r = newton_solve_fixed_component(model, guess, pg, fixed, newton);
                } catch (const Error&) {
                    return std::nullopt;
                }
            }
            try {
                const double tr = model.dynamic_jacobian(r->y, r->p).trace();
                return Trial{std::move(r->y), r->p, tr, r->residual_norm, r->iterations};
            } catch (const Error&) {
                return std::nullopt;
            }
        };

        Refinement ref = bisect_indicator(eval, hb_tol, EventKind::hopf, model);
        ref.segment = k;
        if (ref.point.y.empty() || !ref.point.eig) continue;
        const Matrix j = model.dynamic_jacobian(ref.point.y, ref.point.p);
        if (!(determinant(j) > 0.0) || !ref.point.eig->is_complex()) continue;
        out.push_back(std::move(ref));
    }
    return out;
}

}  // namespace paracont

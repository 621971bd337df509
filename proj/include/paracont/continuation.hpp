#pragma once

// Natural-parameter continuation with an Euler predictor whose parameter
// direction follows sign(det J):
//
//   p_{k+1} = p_k + direction * sign(det J_k) * dp
//   y_{k+1} = y_k - J_k^{-1} w_k (p_{k+1} - p_k)
//
// Because det J changes sign at a limit point, the parameter direction
// reverses there by itself and the branch is followed around the fold.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paracont/model.hpp"
#include "paracont/newton.hpp"
#include "paracont/smallmat.hpp"

namespace paracont {

enum class EventKind { none, limit_point, hopf, start, terminal };
enum class Termination { p_bound, max_steps, closed_curve, domain_exit, stalled };

std::string_view to_string(EventKind kind) noexcept;
std::string_view to_string(Termination reason) noexcept;
/// Inverse of to_string; throws ParseError.
EventKind event_from_string(std::string_view tag);

struct ContinuationConfig {
    double dp = 1e-3;
    double p_min = -std::numeric_limits<double>::infinity();
    double p_max = std::numeric_limits<double>::infinity();
    int max_steps = 100000;
    double max_dy = 0.05;
    int direction = +1;  // multiplies sign(det J); -1 starts the trace toward decreasing p when det J > 0
    bool corrector = false;
    double corrector_tol = 1e-10;
    int corrector_max_iter = 50;
    double lp_refine_tol = 1e-8;
    bool hb_detect = true;
    double hb_tol = 1e-8;
    std::optional<double> closure_tol;  // defaults to dp / 2
    int closure_min_steps = 10;
    int stall_steps = 5;
    double stall_tol = 1e-12;

    /// Throws PreconditionViolation.
    void validate() const;
    double effective_closure_tol() const noexcept { return closure_tol.value_or(0.5 * dp); }
};

struct BranchPoint {
    double p = 0.0;
    Vector y;
    double det_j = 0.0;
    EventKind event = EventKind::none;
    std::optional<EigenPair2> eig;  // of the dynamic Jacobian, 2-state models only
    // The step into this point was rescaled (state clamp, halving, or a
    // fixed-component correction), so the plain direction rule may not hold.
    bool adjusted = false;
};

struct EventRecord {
    EventKind kind = EventKind::none;
    double p = 0.0;
    Vector y;
    double det_j = 0.0;
    double residual = 0.0;    // ||F||_inf at the refined point
    double indicator = 0.0;   // det J for LP, tr J_dyn for HB
    bool converged = true;
    std::size_t point_index = 0;  // position in Branch::points
};

struct Branch {
    std::vector<BranchPoint> points;
    std::vector<EventRecord> events;
    Termination termination = Termination::max_steps;
    std::string hopf_status;  // empty when detection ran, otherwise why it did not

    std::size_t count(EventKind kind) const noexcept;
};

struct PredictorResult {
    Vector y;
    double p = 0.0;
    Vector dy;
    double dp = 0.0;  // signed, after clamping
    double det_j = 0.0;
    bool clamped = false;
};

/// One Euler step. The parameter increment is direction * sign(det J) * dp;
/// when ||dy||_inf would exceed max_dy both dy and the increment are scaled
/// down. Throws SingularMatrix when J cannot be factored.
PredictorResult predictor_step(const Model& model, const Vector& y, double p, double dp, int direction,
                               double max_dy = std::numeric_limits<double>::infinity());

/// Traces one branch from (y0, p0); y0 is Newton-refined first. Failures
/// after the start end the trace and are reported in Branch::termination.
/// Throws NoConvergence/DomainViolation/SingularMatrix only when the seed
/// cannot be refined.
Branch trace_branch(const Model& model, const Vector& y0, double p0, const ContinuationConfig& config);

struct Refinement {
    BranchPoint point;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    std::size_t segment = 0;  // index of the segment start in the scanned branch
};

/// Bisects the step a -> b for det J = 0. Trial points lie on the secant of
/// the step and are pulled back onto the branch with the state component of
/// largest change held fixed, which stays solvable on both sides of the fold.
/// Throws PreconditionViolation unless det J changes sign across the segment.
Refinement detect_limit_point(const Model& model, const BranchPoint& a, const BranchPoint& b, double tol,
                              const NewtonOptions& newton = {1e-12, 50});

/// Scans a branch for sign changes of tr(J_dyn) with det(J_dyn) > 0 and
/// bisects each to |tr| <= hb_tol. Throws Unsupported for models without a
/// dynamic Jacobian or with n != 2.
std::vector<Refinement> detect_hopf(const Model& model, const Branch& branch, double hb_tol,
                                    const NewtonOptions& newton = {1e-12, 50});

}  // namespace paracont

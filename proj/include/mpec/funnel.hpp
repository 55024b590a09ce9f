#pragma once

#include <functional>
#include <vector>

#include "mpec/config.hpp"
#include "mpec/measures.hpp"
#include "mpec/model.hpp"
#include "mpec/stationarity.hpp"
#include "mpec/steps.hpp"

namespace mpec {

enum class StepKind { F, H, Restoration, Terminal };

const char *to_string(StepKind k);
StepKind step_kind_from_string(const std::string &s);

/// Iterate-level state of the outer loop.
struct FunnelState {
    Vector x;
    Evaluation eval;
    ThetaBreakdown theta;
    double theta_max = 1.0;
    double u_current = 1.0;
    Matrix B;
    int k = 0;
};

/// One row of the iteration trace. Values describe iterate k before the step.
struct TraceRecord {
    int k = 0;
    StepKind kind = StepKind::F;
    double theta_f = 0.0;
    double theta_c = 0.0;
    double theta = 0.0;
    double theta_max = 0.0;
    double f_value = 0.0;
    double alpha = 0.0;
    double u = 0.0;
    double norm_s = 0.0;
    double norm_t = 0.0;
    double gamma = 1.0;
    int qp_iterations = 0;
    double stationarity_residual = 0.0;
};

enum class SolveStatus { SStationaryPoint, MaxIterations, RestorationFailure, Degenerate, NotCertified };

const char *to_string(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::MaxIterations;
    Vector x_final;
    double f_final = 0.0;
    ThetaBreakdown theta_final;
    MpecMultipliers multipliers;
    StationarityClass stationarity;
    std::vector<TraceRecord> trace;
    int iterations = 0;
};

/// Emitted once per accepted F/H step and per restoration call.
struct IterationEvent {
    int k = 0;
    StepKind kind = StepKind::F;
    Vector x;              ///< iterate before the step
    Vector x_next;
    Vector d;              ///< search direction (empty for restoration)
    double alpha = 0.0;
    double theta = 0.0;
    double theta_next = 0.0;
    double theta_max = 0.0;
    double theta_max_next = 0.0;
    const StepOutcome *outcome = nullptr; ///< null when no penalty loop result exists
};

using SolveObserver = std::function<void(const IterationEvent &)>;

/// min{kappa4, kappa5 theta^sigma3}
double alpha_min(double theta, const SolverConfig &cfg);

struct LineSearchResult {
    bool accepted = false;
    double alpha = 0.0;
    int trials = 0;
    PointValues values;   ///< at the accepted point
    ThetaBreakdown theta; ///< at the accepted point
};

/// Backtracking on alpha = 1, 1/2, ... accepting the first alpha with
///   f(x) - f(x + alpha d) >= -alpha rho grad_f'd  and  theta(x + alpha d) <= theta_max.
/// Directions with grad_f'd >= 0 are never accepted. Gives up (restoration
/// needed) once a rejected alpha is below alpha_min or after max_backtracks
/// halvings.
LineSearchResult f_line_search(const MpecProblem &problem, const FunnelState &state, const Vector &d,
                               const SolverConfig &cfg);

/// Backtracking accepting theta(x + alpha d) <= (1 - alpha rho) theta; gives
/// up after max_backtracks halvings.
LineSearchResult h_line_search(const MpecProblem &problem, const FunnelState &state, const Vector &d,
                               const SolverConfig &cfg);

/// F: unchanged; Restoration: kappa7 theta_max;
/// H: max{kappa8 theta_max, kappa9 theta_k + (1 - kappa9) theta_next}.
double update_theta_max(StepKind kind, double theta_k, double theta_next, double theta_max,
                        const SolverConfig &cfg);

/// Identity, or a Powell-damped BFGS update on (x_next - x, grad_f_next - grad_f)
/// with eigenvalues floored at 1e-6. Degenerate pairs leave B unchanged.
Matrix update_B(const FunnelState &state, const Vector &x_next, const Vector &grad_f_next,
                const SolverConfig &cfg);

/// Runs the funnel method from x0. Throws ConfigError / DimensionMismatch on
/// invalid input.
SolveResult solve(const MpecProblem &problem, const Vector &x0, const SolverConfig &cfg = {},
                  const SolveObserver &observer = {});

} // namespace mpec

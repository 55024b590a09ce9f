#pragma once

#include "mpec/config.hpp"
#include "mpec/model.hpp"
#include "mpec/qp.hpp"

namespace mpec {

enum class Branch { FStep, HStep };

const char *to_string(Branch b);

struct ComplementarityStep {
    Vector s;
    bool degenerate = false; ///< ||grad Q|| fell below the guard while Q != 0
};

/// Least-squares step zeroing the linearization of the scalar Q:
/// s = -(Q / ||grad Q||^2) grad Q, or s = 0 when ||grad Q|| <= 1e-12 max(1, |Q|).
ComplementarityStep complementarity_step(const Evaluation &eval);

/// min{u_hat, kappa_u delta^sigma1}
double u_min(double delta, const PenaltyLoopConfig &cfg);

/// FStep: kappa1 min{theta_max, kappa2};  HStep: kappa3 min{theta^(sigma2-1), kappa2} theta.
double delta(Branch branch, double theta, double theta_max, const PenaltyLoopConfig &cfg);

/// FStep iff -grad_f' direction >= kappa_theta * theta (weak inequality).
Branch classify_switch(const Vector &grad_f, const Vector &direction, double theta,
                       const PenaltyLoopConfig &cfg);
Branch classify_switch(const Evaluation &eval, const Vector &s, const Vector &t, double theta,
                       const PenaltyLoopConfig &cfg);

/// Row layout of the tangential QP built by tangential_qp().
/// Equality rows: h. Inequality rows: g, then G, then H.
struct TangentialRows {
    int m = 0, p = 0, q = 0;
    int g_offset() const { return 0; }
    int G_offset() const { return m; }
    int H_offset() const { return m + q; }
};

/// Penalized tangential QP in t:
///   min (grad f + B s)'t + 1/2 t'(B + (1/u) grad Q grad Q')t
///   s.t. g + Jg'(s+t) >= 0, h + Jh'(s+t) = 0, G + JG'(s+t) >= 0, H + JH'(s+t) >= 0.
QpProblem tangential_qp(const Evaluation &eval, const Vector &s, const Matrix &B, double u);

struct StepOutcome {
    Vector s;
    Vector t_raw;              ///< QP solution at the accepted u
    double u = 0.0;
    double gamma = 1.0;
    Vector d;                  ///< s + gamma t_raw
    double delta = 0.0;
    double u_min = 0.0;
    Branch tested_branch = Branch::FStep; ///< switching test on s + t_raw (selects delta)
    Branch branch = Branch::FStep;        ///< switching test on d
    bool scaled = false;       ///< gamma < 1 fallback fired
    double grad_Qt = 0.0;      ///< grad Q' t_raw
    QpSolution qp;             ///< multipliers of the accepted QP
    int qp_solves = 0;
    int qp_iterations = 0;     ///< active-set iterations summed over the search
};

enum class PenaltyLoopStatus { Accepted, Inconsistent, TooLarge };

const char *to_string(PenaltyLoopStatus s);

struct PenaltyLoopInput {
    double theta = 0.0;
    double theta_max = 1.0;
    double u_start = 1.0;
};

struct PenaltyLoopResult {
    PenaltyLoopStatus status = PenaltyLoopStatus::Accepted;
    StepOutcome outcome; ///< populated fully only when Accepted
};

/// Upper bound on QP solves per search, independent of u_min.
inline constexpr int kMaxPenaltySolves = 200;

/// Searches u = u_start, u_start/2, ... until the tangential step satisfies
/// the switching and near-null-space conditions, or u drops below u_min and
/// the step is scaled onto |grad Q' (gamma t)| = delta.
/// Throws NumericalBreakdown when the QP factorization fails.
PenaltyLoopResult penalty_loop(const Evaluation &eval, const Vector &s, const Matrix &B,
                               const PenaltyLoopInput &in, const PenaltyLoopConfig &cfg,
                               ActiveSetQpSolver &solver);

} // namespace mpec

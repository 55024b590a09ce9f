#include "mpec/steps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpec/errors.hpp"

namespace mpec {

const char *to_string(Branch b) { return b == Branch::FStep ? "F" : "H"; }

const char *to_string(PenaltyLoopStatus s) {
    switch (s) {
    case PenaltyLoopStatus::Accepted: return "Accepted";
    case PenaltyLoopStatus::Inconsistent: return "Inconsistent";
    case PenaltyLoopStatus::TooLarge: return "TooLarge";
    }
    return "?";
}

ComplementarityStep complementarity_step(const Evaluation &eval) {
    ComplementarityStep out;
    const double gnorm = eval.grad_Q.norm();
    const double guard = 1e-12 * std::max(1.0, std::abs(eval.Q));
    if (gnorm <= guard) {
        out.s = Vector::Zero(eval.x.size());
        out.degenerate = eval.Q != 0.0;
        return out;
    }
    out.s = -(eval.Q / (gnorm * gnorm)) * eval.grad_Q;
    return out;
}

double u_min(double delta, const PenaltyLoopConfig &cfg) {
    return std::min(cfg.u_hat, cfg.kappa_u * std::pow(delta, cfg.sigma1));
}

double delta(Branch branch, double theta, double theta_max, const PenaltyLoopConfig &cfg) {
    if (branch == Branch::FStep)
        return cfg.kappa1 * std::min(theta_max, cfg.kappa2);
    return cfg.kappa3 * std::min(std::pow(theta, cfg.sigma2 - 1.0), cfg.kappa2) * theta;
}

Branch classify_switch(const Vector &grad_f, const Vector &direction, double theta,
                       const PenaltyLoopConfig &cfg) {
    return -grad_f.dot(direction) >= cfg.kappa_theta * theta ? Branch::FStep : Branch::HStep;
}

Branch classify_switch(const Evaluation &eval, const Vector &s, const Vector &t, double theta,
                       const PenaltyLoopConfig &cfg) {
    return classify_switch(eval.grad_f, s + t, theta, cfg);
}

QpProblem tangential_qp(const Evaluation &e, const Vector &s, const Matrix &B, double u) {
    const Eigen::Index n = e.x.size();
    const Eigen::Index m = e.g.size(), q = e.G.size();
    QpProblem qp;
    qp.H = B + (1.0 / u) * e.grad_Q * e.grad_Q.transpose();
    qp.H = 0.5 * (qp.H + qp.H.transpose());
    qp.c = e.grad_f + B * s;

    // a' (s + t) + v >= 0  <=>  a' t >= -(v + a' s)
    qp.A_eq = e.jac_h.transpose();
    qp.b_eq = -(e.h + e.jac_h.transpose() * s);

    qp.A_in.resize(m + 2 * q, n);
    qp.b_in.resize(m + 2 * q);
    qp.A_in.topRows(m) = e.jac_g.transpose();
    qp.b_in.head(m) = -(e.g + e.jac_g.transpose() * s);
    qp.A_in.middleRows(m, q) = e.jac_G.transpose();
    qp.b_in.segment(m, q) = -(e.G + e.jac_G.transpose() * s);
    qp.A_in.bottomRows(q) = e.jac_H.transpose();
    qp.b_in.tail(q) = -(e.H + e.jac_H.transpose() * s);
    return qp;
}

PenaltyLoopResult penalty_loop(const Evaluation &eval, const Vector &s, const Matrix &B,
                               const PenaltyLoopInput &in, const PenaltyLoopConfig &cfg,
                               ActiveSetQpSolver &solver) {
    PenaltyLoopResult res;
    StepOutcome &out = res.outcome;
    out.s = s;

    const double theta = in.theta;
    const double size_bound =
        std::max(cfg.M_theta, theta > 0.0 ? cfg.kappa6 / std::pow(theta, cfg.sigma4)
                                           : std::numeric_limits<double>::infinity());
    const double s_norm = s.norm();

    double u = in.u_start;
    std::optional<Vector> warm;
    for (int solves = 1;; ++solves) {
        const QpProblem qp = tangential_qp(eval, s, B, u);
        QpSolution sol = solver.solve(qp, warm);
        out.qp_solves = solves;
        out.qp_iterations += sol.iterations + sol.phase1_iterations;
        if (sol.status == QpStatus::Infeasible) {
            res.status = PenaltyLoopStatus::Inconsistent;
            return res;
        }
        if (sol.status != QpStatus::Optimal)
            throw NumericalBreakdown(std::string("tangential QP failed: ") + to_string(sol.status));

        const Vector &t = sol.t;
        if (std::max(s_norm, t.norm()) >= size_bound) {
            out.t_raw = t;
            out.u = u;
            res.status = PenaltyLoopStatus::TooLarge;
            return res;
        }

        const double gQt = eval.grad_Q.dot(t);
        const Branch tested = classify_switch(eval, s, t, theta, cfg);
        const double dk = delta(tested, theta, in.theta_max, cfg);
        const double umin = u_min(dk, cfg);

        const bool accept = std::abs(gQt) <= dk;
        const bool give_up = !accept && (u < umin || solves >= kMaxPenaltySolves);
        if (accept || give_up) {
            out.t_raw = t;
            out.u = u;
            out.delta = dk;
            out.u_min = umin;
            out.tested_branch = tested;
            out.grad_Qt = gQt;
            out.gamma = 1.0;
            if (give_up && std::abs(gQt) > dk) {
                out.gamma = std::min(1.0, dk / std::abs(gQt));
                out.scaled = out.gamma < 1.0;
            }
            out.d = s + out.gamma * t;
            out.branch = classify_switch(eval.grad_f, out.d, theta, cfg);
            out.qp = std::move(sol);
            res.status = PenaltyLoopStatus::Accepted;
            return res;
        }
        warm = t;
        u *= 0.5;
    }
}

} // namespace mpec

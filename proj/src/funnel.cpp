#include "mpec/funnel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpec/errors.hpp"
#include "mpec/restoration.hpp"

namespace mpec {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char *to_string(StepKind k) {
    switch (k) {
    case StepKind::F: return "F";
    case StepKind::H: return "H";
    case StepKind::Restoration: return "R";
    case StepKind::Terminal: return "T";
    }
    return "?";
}

StepKind step_kind_from_string(const std::string &s) {
    if (s == "F")
        return StepKind::F;
    if (s == "H")
        return StepKind::H;
    if (s == "R")
        return StepKind::Restoration;
    if (s == "T")
        return StepKind::Terminal;
    throw ParseError("kind", "unknown step kind '" + s + "'");
}

const char *to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::SStationaryPoint: return "SStationaryPoint";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::RestorationFailure: return "RestorationFailure";
    case SolveStatus::Degenerate: return "Degenerate";
    case SolveStatus::NotCertified: return "NotCertified";
    }
    return "?";
}

double alpha_min(double theta, const SolverConfig &cfg) {
    return std::min(cfg.kappa4, cfg.kappa5 * std::pow(theta, cfg.sigma3));
}

LineSearchResult f_line_search(const MpecProblem &problem, const FunnelState &state, const Vector &d,
                               const SolverConfig &cfg) {
    LineSearchResult r;
    const double slope = state.eval.grad_f.dot(d);
    const double amin = alpha_min(state.theta.theta, cfg);
    double alpha = 1.0;
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt, alpha *= 0.5) {
        r.trials = bt + 1;
        try {
            const PointValues v = evaluate_values(problem, state.x + alpha * d);
            const ThetaBreakdown th = infeasibility(v);
            if (slope < 0.0 && state.eval.f - v.f >= -alpha * cfg.rho * slope && th.theta <= state.theta_max) {
                r.accepted = true;
                r.alpha = alpha;
                r.values = v;
                r.theta = th;
                return r;
            }
        } catch (const NonFiniteValue &) {
        }
        if (alpha < amin)
            break;
    }
    return r;
}

LineSearchResult h_line_search(const MpecProblem &problem, const FunnelState &state, const Vector &d,
                               const SolverConfig &cfg) {
    LineSearchResult r;
    const double theta = state.theta.theta;
    double alpha = 1.0;
    const double floor = 1e-14 * std::max(1.0, state.x.norm());
    for (int bt = 0; bt <= cfg.max_backtracks; ++bt, alpha *= 0.5) {
        if (alpha * d.norm() <= floor)
            break;
        r.trials = bt + 1;
        try {
            const PointValues v = evaluate_values(problem, state.x + alpha * d);
            const ThetaBreakdown th = infeasibility(v);
            if (theta - th.theta >= alpha * cfg.rho * theta) {
                r.accepted = true;
                r.alpha = alpha;
                r.values = v;
                r.theta = th;
                return r;
            }
        } catch (const NonFiniteValue &) {
        }
    }
    return r;
}

double update_theta_max(StepKind kind, double theta_k, double theta_next, double theta_max,
                        const SolverConfig &cfg) {
    switch (kind) {
    case StepKind::Restoration:
        return cfg.kappa7 * theta_max;
    case StepKind::H:
        return std::max(cfg.kappa8 * theta_max, cfg.kappa9 * theta_k + (1.0 - cfg.kappa9) * theta_next);
    default:
        return theta_max;
    }
}

Matrix update_B(const FunnelState &state, const Vector &x_next, const Vector &grad_f_next,
                const SolverConfig &cfg) {
    const Eigen::Index n = state.x.size();
    if (cfg.hessian == HessianMode::Identity)
        return Matrix::Identity(n, n);

    const Matrix &B = state.B;
    const Vector s = x_next - state.x;
    const Vector y = grad_f_next - state.eval.grad_f;
    if (s.norm() <= 1e-14 * std::max(1.0, state.x.norm()) || y.norm() <= 1e-14)
        return B;

    const Vector Bs = B * s;
    const double sBs = s.dot(Bs);
    const double sy = s.dot(y);
    if (!(sBs > 0.0))
        return B;
    // Powell damping keeps s'r >= 0.2 s'Bs.
    const double phi = sy >= 0.2 * sBs ? 1.0 : 0.8 * sBs / (sBs - sy);
    const Vector r = phi * y + (1.0 - phi) * Bs;
    Matrix Bn = B - Bs * Bs.transpose() / sBs + r * r.transpose() / s.dot(r);
    Bn = 0.5 * (Bn + Bn.transpose());

    Eigen::SelfAdjointEigenSolver<Matrix> eig(Bn);
    if (eig.info() != Eigen::Success)
        return B;
    const Vector lam = eig.eigenvalues();
    if (lam.minCoeff() >= 1e-6)
        return Bn;
    const Matrix V = eig.eigenvectors();
    return V * lam.cwiseMax(1e-6).asDiagonal() * V.transpose();
}

namespace {

TraceRecord base_record(const FunnelState &st) {
    TraceRecord rec;
    rec.k = st.k;
    rec.theta_f = st.theta.theta_f;
    rec.theta_c = st.theta.theta_c;
    rec.theta = st.theta.theta;
    rec.theta_max = st.theta_max;
    rec.f_value = st.eval.f;
    rec.alpha = kNaN;
    rec.u = kNaN;
    rec.norm_s = kNaN;
    rec.norm_t = kNaN;
    rec.gamma = kNaN;
    rec.stationarity_residual = kNaN;
    return rec;
}

void fill_step(TraceRecord &rec, const StepOutcome &out) {
    rec.u = out.u;
    rec.norm_s = out.s.norm();
    rec.norm_t = out.t_raw.norm();
    rec.gamma = out.gamma;
    rec.qp_iterations = out.qp_iterations;
}

StationarityTolerances tolerances(const SolverConfig &cfg) {
    StationarityTolerances tol;
    tol.feasibility = cfg.feasibility_tol;
    tol.stationarity = cfg.stationarity_tol;
    tol.sign = cfg.sign_tol;
    tol.complementarity = cfg.complementarity_tol;
    tol.activity = cfg.activity_tol;
    return tol;
}

void finish(SolveResult &res, const FunnelState &st, const SolverConfig &cfg,
            const MpecMultipliers *mult) {
    res.x_final = st.x;
    res.f_final = st.eval.f;
    res.theta_final = st.theta;
    res.iterations = st.k;
    res.multipliers = mult ? *mult : estimate_multipliers(st.eval, cfg.activity_tol);
    res.stationarity = classify(st.eval, res.multipliers, tolerances(cfg));
}

} // namespace

SolveResult solve(const MpecProblem &problem, const Vector &x0, const SolverConfig &cfg,
                  const SolveObserver &observer) {
    cfg.validate();
    problem.validate();
    if (x0.size() != problem.n)
        throw DimensionMismatch("x0 has " + std::to_string(x0.size()) + " entries, expected " +
                                std::to_string(problem.n));

    const Eigen::Index n = problem.n;
    FunnelState st;
    st.x = x0;
    st.eval = evaluate(problem, x0);
    st.theta = infeasibility(st.eval);
    st.theta_max = std::max(1.0, cfg.theta_max_init_factor * st.theta.theta);
    st.u_current = cfg.u_init;
    st.B = Matrix::Identity(n, n);
    st.k = 0;

    ActiveSetQpSolver qp_solver;
    SolveResult res;

    for (;;) {
        if (st.k >= cfg.max_iter) {
            res.status = SolveStatus::MaxIterations;
            finish(res, st, cfg, nullptr);
            return res;
        }

        const ComplementarityStep cs = complementarity_step(st.eval);
        PenaltyLoopInput in;
        in.theta = st.theta.theta;
        in.theta_max = st.theta_max;
        in.u_start = st.k == 0 ? cfg.u_init
                     : cfg.strict_u_carry_over ? st.u_current
                                               : std::min(cfg.u_init, 4.0 * st.u_current);

        TraceRecord rec = base_record(st);
        PenaltyLoopResult pl;
        bool to_restoration = false;
        try {
            pl = penalty_loop(st.eval, cs.s, st.B, in, cfg, qp_solver);
            to_restoration = pl.status != PenaltyLoopStatus::Accepted;
        } catch (const NumericalBreakdown &) {
            to_restoration = true;
        }

        if (!to_restoration) {
            const StepOutcome &out = pl.outcome;
            fill_step(rec, out);
            const MpecMultipliers mult = recover_multipliers(out.qp, out.u, out.t_raw, st.eval);
            rec.stationarity_residual = lagrangian_gradient(st.eval, mult).cwiseAbs().maxCoeff();

            if (st.theta.theta + out.t_raw.norm() <= cfg.epsilon) {
                rec.kind = StepKind::Terminal;
                res.trace.push_back(rec);
                finish(res, st, cfg, &mult);
                res.status = res.stationarity.s ? SolveStatus::SStationaryPoint : SolveStatus::NotCertified;
                return res;
            }
            st.u_current = out.u;

            const StepKind kind = out.branch == Branch::FStep ? StepKind::F : StepKind::H;
            const LineSearchResult ls = kind == StepKind::F ? f_line_search(problem, st, out.d, cfg)
                                                            : h_line_search(problem, st, out.d, cfg);
            if (ls.accepted) {
                const Vector x_next = st.x + ls.alpha * out.d;
                Evaluation e_next;
                bool ok = true;
                try {
                    e_next = evaluate(problem, x_next);
                } catch (const NonFiniteValue &) {
                    ok = false;
                }
                if (ok) {
                    const double theta_max_next =
                        update_theta_max(kind, st.theta.theta, ls.theta.theta, st.theta_max, cfg);
                    rec.kind = kind;
                    rec.alpha = ls.alpha;
                    res.trace.push_back(rec);
                    if (observer) {
                        IterationEvent ev;
                        ev.k = st.k;
                        ev.kind = kind;
                        ev.x = st.x;
                        ev.x_next = x_next;
                        ev.d = out.d;
                        ev.alpha = ls.alpha;
                        ev.theta = st.theta.theta;
                        ev.theta_next = ls.theta.theta;
                        ev.theta_max = st.theta_max;
                        ev.theta_max_next = theta_max_next;
                        ev.outcome = &out;
                        observer(ev);
                    }
                    st.B = update_B(st, x_next, e_next.grad_f, cfg);
                    st.x = x_next;
                    st.eval = std::move(e_next);
                    st.theta = ls.theta;
                    st.theta_max = theta_max_next;
                    ++st.k;
                    continue;
                }
            }
            to_restoration = true;
        }

        // Restoration: shrink the funnel once and drive theta below the new bound.
        const double target = cfg.kappa7 * st.theta_max;
        const RestorationReport rr = restore(problem, st.x, target);
        rec.kind = StepKind::Restoration;
        if (!rr.converged) {
            res.trace.push_back(rec);
            res.status = cs.degenerate ? SolveStatus::Degenerate : SolveStatus::RestorationFailure;
            finish(res, st, cfg, nullptr);
            return res;
        }
        rec.alpha = kNaN;
        res.trace.push_back(rec);
        const double theta_max_next =
            update_theta_max(StepKind::Restoration, st.theta.theta, rr.theta_after, st.theta_max, cfg);
        if (observer) {
            IterationEvent ev;
            ev.k = st.k;
            ev.kind = StepKind::Restoration;
            ev.x = st.x;
            ev.x_next = rr.x_r;
            ev.theta = st.theta.theta;
            ev.theta_next = rr.theta_after;
            ev.theta_max = st.theta_max;
            ev.theta_max_next = theta_max_next;
            ev.outcome = pl.status == PenaltyLoopStatus::Accepted ? &pl.outcome : nullptr;
            observer(ev);
        }
        st.x = rr.x_r;
        st.eval = evaluate(problem, st.x);
        st.theta = infeasibility(st.eval);
        st.theta_max = theta_max_next;
        ++st.k;
    }
}

} // namespace mpec

#include "mpec/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mpec {

const char *to_string(QpStatus s) {
    switch (s) {
    case QpStatus::Optimal: return "Optimal";
    case QpStatus::Infeasible: return "Infeasible";
    case QpStatus::MaxIterations: return "MaxIterations";
    case QpStatus::NumericalBreakdown: return "NumericalBreakdown";
    }
    return "?";
}

namespace {

double inf_norm(const Vector &v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double primal_violation(const QpProblem &qp, const Vector &t) {
    double viol = 0.0;
    if (qp.m_eq())
        viol = std::max(viol, inf_norm(qp.A_eq * t - qp.b_eq));
    if (qp.m_in())
        viol = std::max(viol, (qp.b_in - qp.A_in * t).cwiseMax(0.0).maxCoeff());
    return viol;
}

struct EngineResult {
    QpStatus status = QpStatus::Optimal;
    Vector x;
    Vector lam_eq, lam_in;
    std::vector<int> active;
    int iterations = 0;
    std::vector<double> history;
};

// Rows of A_eq followed by the working inequality rows.
Matrix working_matrix(const QpProblem &qp, const std::vector<int> &working) {
    const int n = qp.n();
    Matrix A(qp.m_eq() + static_cast<int>(working.size()), n);
    if (qp.m_eq())
        A.topRows(qp.m_eq()) = qp.A_eq;
    for (std::size_t k = 0; k < working.size(); ++k)
        A.row(qp.m_eq() + static_cast<Eigen::Index>(k)) = qp.A_in.row(working[k]);
    return A;
}

// Minimizer of 1/2 p'Hp + g'p on the null space of A. Returns false on a
// reduced Hessian that is not numerically positive definite.
bool null_space_step(const Matrix &H, const Vector &g, const Matrix &A, Vector &p) {
    const Eigen::Index n = H.rows();
    Matrix Z;
    if (A.rows() == 0) {
        Z = Matrix::Identity(n, n);
    } else {
        Eigen::ColPivHouseholderQR<Matrix> qr(A.transpose());
        const Eigen::Index r = qr.rank();
        if (r == n) {
            p = Vector::Zero(n);
            return true;
        }
        const Matrix Qfull = qr.householderQ();
        Z = Qfull.rightCols(n - r);
    }
    const Matrix reduced = Z.transpose() * H * Z;
    Eigen::LLT<Matrix> llt(reduced);
    if (llt.info() != Eigen::Success)
        return false;
    p = -Z * llt.solve(Z.transpose() * g);
    return p.allFinite();
}

// Re-solves the KKT system of the final working set with two rounds of
// iterative refinement. Skipped when the working rows are dependent.
void polish(const QpProblem &qp, const Matrix &A_W, const std::vector<int> &working, Vector &x,
            Vector &lam) {
    const Eigen::Index n = qp.n(), k = A_W.rows();
    Matrix K = Matrix::Zero(n + k, n + k);
    K.topLeftCorner(n, n) = qp.H;
    K.topRightCorner(n, k) = -A_W.transpose();
    K.bottomLeftCorner(k, n) = A_W;
    Vector rhs(n + k);
    rhs.head(n) = -qp.c;
    for (Eigen::Index i = 0; i < qp.m_eq(); ++i)
        rhs[n + i] = qp.b_eq[i];
    for (std::size_t j = 0; j < working.size(); ++j)
        rhs[n + qp.m_eq() + static_cast<Eigen::Index>(j)] = qp.b_in[working[j]];
    Eigen::PartialPivLU<Matrix> lu(K);
    Eigen::FullPivLU<Matrix> rank_check(A_W);
    if (k > 0 && rank_check.rank() < k)
        return;
    Vector z(n + k);
    z.head(n) = x;
    z.tail(k) = lam;
    for (int round = 0; round < 2; ++round) {
        const Vector r = rhs - K * z;
        const Vector dz = lu.solve(r);
        if (!dz.allFinite())
            return;
        z += dz;
    }
    x = z.head(n);
    lam = z.tail(k);
}

// Primal active-set iterations from a (nearly) feasible x. The working set
// starts empty of inequalities and only ever receives rows with a'p < 0, so
// working inequality rows stay independent of the rest of the working set.
EngineResult run_active_set(const QpProblem &qp, Vector x, int max_iter, std::vector<int> &working,
                            std::vector<char> &in_working) {
    const int n = qp.n();
    const int me = qp.m_eq();
    const int mi = qp.m_in();
    working.clear();
    in_working.assign(static_cast<std::size_t>(mi), 0);

    EngineResult out;
    out.history.push_back(qp.objective(x));

    const int stall_limit = 3 * (mi + me);
    int stalled = 0;
    bool bland = false;
    bool at_subspace_min = false;
    Vector p(n);

    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        const Vector grad = qp.H * x + qp.c;
        const Matrix A_W = working_matrix(qp, working);

        if (!at_subspace_min) {
            if (!null_space_step(qp.H, grad, A_W, p)) {
                out.status = QpStatus::NumericalBreakdown;
                out.x = x;
                return out;
            }
        }
        const double step_tol = 1e-14 * std::max(1.0, inf_norm(x));
        if (at_subspace_min || inf_norm(p) <= step_tol) {
            Vector lam = Vector::Zero(A_W.rows());
            if (A_W.rows() > 0) {
                Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A_W.transpose());
                lam = cod.solve(grad);
            }
            const double dual_tol = 1e-11 * std::max(1.0, inf_norm(grad));
            int drop = -1;
            double most_negative = -dual_tol;
            for (std::size_t k = 0; k < working.size(); ++k) {
                const double l = lam[me + static_cast<Eigen::Index>(k)];
                if (bland) {
                    if (l < -dual_tol && (drop < 0 || working[k] < working[static_cast<std::size_t>(drop)]))
                        drop = static_cast<int>(k);
                } else if (l < most_negative) {
                    most_negative = l;
                    drop = static_cast<int>(k);
                }
            }
            if (drop < 0) {
                polish(qp, A_W, working, x, lam);
                out.x = x;
                out.lam_eq = lam.head(me);
                out.lam_in = Vector::Zero(mi);
                for (std::size_t k = 0; k < working.size(); ++k)
                    out.lam_in[working[k]] = std::max(0.0, lam[me + static_cast<Eigen::Index>(k)]);
                out.active = working;
                std::sort(out.active.begin(), out.active.end());
                out.status = QpStatus::Optimal;
                return out;
            }
            in_working[static_cast<std::size_t>(working[static_cast<std::size_t>(drop)])] = 0;
            working.erase(working.begin() + drop);
            at_subspace_min = false;
            continue;
        }

        // Ratio test; strict comparison keeps the lowest blocking index on ties.
        double alpha = 1.0;
        int blocking = -1;
        for (int i = 0; i < mi; ++i) {
            if (in_working[static_cast<std::size_t>(i)])
                continue;
            const double ap = qp.A_in.row(i).dot(p);
            if (ap >= -1e-14 * std::max(1.0, qp.A_in.row(i).cwiseAbs().maxCoeff()) * inf_norm(p))
                continue;
            const double ratio = std::max(0.0, (qp.b_in[i] - qp.A_in.row(i).dot(x)) / ap);
            if (ratio < alpha) {
                alpha = ratio;
                blocking = i;
            }
        }
        x += alpha * p;
        out.history.push_back(qp.objective(x));
        if (blocking >= 0) {
            working.push_back(blocking);
            in_working[static_cast<std::size_t>(blocking)] = 1;
            at_subspace_min = false;
        } else {
            at_subspace_min = true;
        }
        if (alpha * inf_norm(p) <= step_tol) {
            if (++stalled > stall_limit)
                bland = true;
        } else {
            stalled = 0;
            bland = false;
        }
    }
    out.status = QpStatus::MaxIterations;
    out.x = x;
    return out;
}

int default_max_iter(const QpOptions &o, int n, int me, int mi) {
    return o.max_iterations > 0 ? o.max_iterations : 50 * (n + me + mi) + 100;
}

double rhs_scale(const Vector &b_eq, const Vector &b_in) {
    return std::max({1.0, inf_norm(b_eq), inf_norm(b_in)});
}

} // namespace

Phase1Result phase1(const Matrix &A_eq, const Vector &b_eq, const Matrix &A_in, const Vector &b_in,
                    const std::optional<Vector> &start, const QpOptions &options) {
    const Eigen::Index n = std::max(A_eq.cols(), A_in.cols());
    const Eigen::Index me = A_eq.rows();
    const Eigen::Index mi = A_in.rows();
    const Eigen::Index nv = mi + 2 * me;
    const Eigen::Index N = n + nv;

    Phase1Result res;
    const Vector t0 = start ? *start : Vector::Zero(n);

    // Elastic problem: A_in t + v >= b_in, A_eq t + v_p - v_m = b_eq, v >= 0.
    QpProblem el;
    el.H = options.phase1_regularization * Matrix::Identity(N, N);
    el.c = Vector::Zero(N);
    el.c.tail(nv).setOnes();
    el.A_eq = Matrix::Zero(me, N);
    el.b_eq = b_eq;
    if (me) {
        el.A_eq.leftCols(n) = A_eq;
        el.A_eq.block(0, n + mi, me, me) = Matrix::Identity(me, me);
        el.A_eq.block(0, n + mi + me, me, me) = -Matrix::Identity(me, me);
    }
    el.A_in = Matrix::Zero(mi + nv, N);
    el.b_in = Vector::Zero(mi + nv);
    if (mi) {
        el.A_in.topLeftCorner(mi, n) = A_in;
        el.A_in.block(0, n, mi, mi) = Matrix::Identity(mi, mi);
        el.b_in.head(mi) = b_in;
    }
    el.A_in.bottomRightCorner(nv, nv) = Matrix::Identity(nv, nv);

    Vector z(N);
    z.head(n) = t0;
    if (mi)
        z.segment(n, mi) = (b_in - A_in * t0).cwiseMax(0.0);
    if (me) {
        const Vector r = b_eq - A_eq * t0;
        z.segment(n + mi, me) = r.cwiseMax(0.0);
        z.segment(n + mi + me, me) = (-r).cwiseMax(0.0);
    }

    std::vector<int> working;
    std::vector<char> in_working;
    const EngineResult er = run_active_set(el, z, default_max_iter(options, int(N), int(me), int(mi + nv)),
                                           working, in_working);
    res.iterations = er.iterations;
    res.t = er.x.head(n);
    res.violation = er.x.tail(nv).cwiseMax(0.0).sum();
    if (er.status != QpStatus::Optimal) {
        res.status = Phase1Status::MaxIterations;
        return res;
    }
    res.status = res.violation > options.infeasibility_tol * rhs_scale(b_eq, b_in)
                     ? Phase1Status::Infeasible
                     : Phase1Status::Feasible;
    return res;
}

QpSolution ActiveSetQpSolver::solve(const QpProblem &qp, const std::optional<Vector> &start) {
    const int n = qp.n();
    QpSolution sol;
    sol.lam_eq = Vector::Zero(qp.m_eq());
    sol.lam_in = Vector::Zero(qp.m_in());

    Vector x0;
    const double feas_tol = 1e-10 * rhs_scale(qp.b_eq, qp.b_in);
    if (start && start->size() == n && primal_violation(qp, *start) <= feas_tol) {
        x0 = *start;
    } else {
        const Phase1Result p1 = phase1(qp.A_eq, qp.b_eq, qp.A_in, qp.b_in, start, options_);
        sol.phase1_iterations = p1.iterations;
        if (p1.status == Phase1Status::Infeasible) {
            sol.status = QpStatus::Infeasible;
            sol.t = p1.t;
            return sol;
        }
        if (p1.status == Phase1Status::MaxIterations) {
            sol.status = QpStatus::MaxIterations;
            sol.t = p1.t;
            return sol;
        }
        x0 = p1.t;
    }

    EngineResult er = run_active_set(qp, x0, default_max_iter(options_, n, qp.m_eq(), qp.m_in()),
                                     working_, in_working_);
    sol.status = er.status;
    sol.t = std::move(er.x);
    sol.iterations = er.iterations;
    sol.objective_history = std::move(er.history);
    if (er.status == QpStatus::Optimal) {
        sol.lam_eq = std::move(er.lam_eq);
        sol.lam_in = std::move(er.lam_in);
        sol.active = std::move(er.active);
    }
    sol.kkt_residual = kkt_residual(qp, sol);
    return sol;
}

QpSolution solve_qp(const QpProblem &qp, const std::optional<Vector> &start) {
    ActiveSetQpSolver solver;
    return solver.solve(qp, start);
}

double kkt_residual(const QpProblem &qp, const QpSolution &sol) {
    const Vector &t = sol.t;
    if (t.size() != qp.n())
        return std::numeric_limits<double>::infinity();
    Vector stat = qp.H * t + qp.c;
    if (qp.m_eq())
        stat -= qp.A_eq.transpose() * sol.lam_eq;
    if (qp.m_in())
        stat -= qp.A_in.transpose() * sol.lam_in;
    double res = std::max(inf_norm(stat), primal_violation(qp, t));
    if (qp.m_in()) {
        const Vector slack = qp.A_in * t - qp.b_in;
        res = std::max(res, (-sol.lam_in).cwiseMax(0.0).maxCoeff());
        res = std::max(res, sol.lam_in.cwiseProduct(slack).cwiseAbs().maxCoeff());
    }
    return res;
}

} // namespace mpec

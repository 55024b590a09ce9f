#pragma once

#include <optional>
#include <vector>

#include "mpec/model.hpp"

namespace mpec {

/// Strictly convex QP
///
///     min 1/2 t'Ht + c't   s.t.  A_eq t = b_eq,  A_in t >= b_in.
///
/// Constraint rows are the rows of A_eq / A_in.
struct QpProblem {
    Matrix H;
    Vector c;
    Matrix A_eq;
    Vector b_eq;
    Matrix A_in;
    Vector b_in;

    int n() const { return static_cast<int>(c.size()); }
    int m_eq() const { return static_cast<int>(A_eq.rows()); }
    int m_in() const { return static_cast<int>(A_in.rows()); }

    double objective(const Vector &t) const { return 0.5 * t.dot(H * t) + c.dot(t); }
};

enum class QpStatus { Optimal, Infeasible, MaxIterations, NumericalBreakdown };

const char *to_string(QpStatus s);

/// Primal-dual pair with H t + c = A_eq' lam_eq + A_in' lam_in, lam_in >= 0.
struct QpSolution {
    QpStatus status = QpStatus::Optimal;
    Vector t;
    Vector lam_eq;
    Vector lam_in;
    std::vector<int> active; ///< working inequalities at exit, ascending
    double kkt_residual = 0.0;
    int iterations = 0;       ///< main-phase active-set iterations
    int phase1_iterations = 0;
    std::vector<double> objective_history; ///< objective after every primal move
};

struct QpOptions {
    int max_iterations = 0;              ///< 0 = 50 (n + m_eq + m_in) + 100
    double phase1_regularization = 1e-10;
    double infeasibility_tol = 1e-8;     ///< relative to max(1, ||b||_inf)
};

/// Dense primal active-set solver. Holds scratch storage; one instance per
/// thread.
class ActiveSetQpSolver {
public:
    explicit ActiveSetQpSolver(QpOptions options = {}) : options_(options) {}

    /// `start` is used when it is feasible, otherwise a phase-1 point is
    /// computed (starting from `start` or the origin).
    QpSolution solve(const QpProblem &qp, const std::optional<Vector> &start = std::nullopt);

    const QpOptions &options() const { return options_; }

private:
    QpOptions options_;
    std::vector<int> working_;
    std::vector<char> in_working_;
};

QpSolution solve_qp(const QpProblem &qp, const std::optional<Vector> &start = std::nullopt);

enum class Phase1Status { Feasible, Infeasible, MaxIterations };

struct Phase1Result {
    Phase1Status status = Phase1Status::Feasible;
    Vector t;
    double violation = 0.0; ///< minimum total elastic violation found
    int iterations = 0;
};

/// Finds a point of {A_eq t = b_eq, A_in t >= b_in} by minimizing the
/// total elastic violation (plus a tiny proximal term) with the same
/// active-set engine, started from the trivially feasible elastic point.
Phase1Result phase1(const Matrix &A_eq, const Vector &b_eq, const Matrix &A_in, const Vector &b_in,
                    const std::optional<Vector> &start = std::nullopt, const QpOptions &options = {});

/// max of ||stationarity||_inf, primal violation, dual negativity and
/// |complementarity products|.
double kkt_residual(const QpProblem &qp, const QpSolution &sol);

} // namespace mpec

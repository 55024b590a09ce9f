#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mpec {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ScalarFn = std::function<double(const Vector &)>;
using VectorFn = std::function<Vector(const Vector &)>;
using MatrixFn = std::function<Matrix(const Vector &)>;

/// Known solution data attached to built-in fixtures.
struct SolutionInfo {
    std::vector<Vector> minimizers; ///< global minimizers (all branches)
    std::optional<double> f_star;
    std::optional<Vector> nu_hat;   ///< multipliers at minimizers.front(), if unique
    std::optional<Vector> xi_hat;
    std::string note;
};

/// Smooth MPEC
///
///     min f(x)  s.t.  g(x) >= 0,  h(x) = 0,  G(x) >= 0,  H(x) >= 0,  G(x)^T H(x) = 0
///
/// described by evaluator callbacks. Jacobians are n-by-(count) with one
/// column per constraint gradient. Evaluators must be reentrant.
struct MpecProblem {
    std::string name;
    int n = 0;
    int m = 0; ///< inequalities g
    int p = 0; ///< equalities h
    int q = 0; ///< complementarity pairs

    ScalarFn f;
    VectorFn g, h, G, H;
    VectorFn grad_f;
    MatrixFn jac_g, jac_h, jac_G, jac_H;

    std::optional<Vector> x0;
    SolutionInfo solution;

    /// Throws DimensionMismatch if counts are inconsistent or an evaluator is missing.
    void validate() const;
};

/// All function and derivative values at one point, plus Q = G^T H and its gradient.
struct Evaluation {
    Vector x;
    double f = 0.0;
    Vector g, h, G, H;
    Vector grad_f;
    Matrix jac_g, jac_h, jac_G, jac_H;
    double Q = 0.0;
    Vector grad_Q;
};

/// Throws NonFiniteValue if any returned entry is NaN/Inf and
/// DimensionMismatch if an evaluator returns the wrong shape.
Evaluation evaluate(const MpecProblem &problem, const Vector &x);

/// f, g, h, G, H only (no derivatives). Used by line searches.
struct PointValues {
    double f = 0.0;
    Vector g, h, G, H;
    double Q = 0.0;
};
PointValues evaluate_values(const MpecProblem &problem, const Vector &x);

struct GradientReport {
    double step = 1e-6;
    double tolerance = 1e-6;
    double err_f = 0.0;
    double err_g = 0.0;
    double err_h = 0.0;
    double err_G = 0.0;
    double err_H = 0.0;
    bool pass = false;

    double worst() const;
};

/// Central-difference check of every analytic derivative. Relative error is
/// |analytic - fd| / max(1, |analytic|), maximized per function block.
GradientReport check_gradients(const MpecProblem &problem, const Vector &x, double step = 1e-6,
                               double tolerance = 1e-6);

} // namespace mpec

#include "mpec/model.hpp"

#include <algorithm>
#include <cmath>

#include "mpec/errors.hpp"

namespace mpec {

namespace {

void require_finite(const Eigen::Ref<const Matrix> &v, const char *what) {
    if (!v.allFinite())
        throw NonFiniteValue(std::string("non-finite value in ") + what);
}

void require_size(const Vector &v, int expected, const char *what) {
    if (v.size() != expected)
        throw DimensionMismatch(std::string(what) + " returned " + std::to_string(v.size()) +
                                " entries, expected " + std::to_string(expected));
}

void require_shape(const Matrix &J, int rows, int cols, const char *what) {
    if (J.rows() != rows || J.cols() != cols)
        throw DimensionMismatch(std::string(what) + " returned " + std::to_string(J.rows()) + "x" +
                                std::to_string(J.cols()) + ", expected " + std::to_string(rows) +
                                "x" + std::to_string(cols));
}

// Relative error with max(1, |a|) in the denominator.
double rel_err(double analytic, double fd) {
    return std::abs(analytic - fd) / std::max(1.0, std::abs(analytic));
}

double jac_error(const VectorFn &fn, const Matrix &J, const Vector &x, double step) {
    double worst = 0.0;
    Vector xp = x, xm = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        xp[j] = x[j] + step;
        xm[j] = x[j] - step;
        const Vector fp = fn(xp);
        const Vector fm = fn(xm);
        require_finite(fp, "finite-difference probe");
        require_finite(fm, "finite-difference probe");
        for (Eigen::Index i = 0; i < J.cols(); ++i)
            worst = std::max(worst, rel_err(J(j, i), (fp[i] - fm[i]) / (2.0 * step)));
        xp[j] = xm[j] = x[j];
    }
    return worst;
}

} // namespace

void MpecProblem::validate() const {
    if (n <= 0)
        throw DimensionMismatch("problem '" + name + "': n must be positive");
    if (m < 0 || p < 0 || q < 0)
        throw DimensionMismatch("problem '" + name + "': negative constraint count");
    if (!f || !grad_f || !g || !h || !G || !H || !jac_g || !jac_h || !jac_G || !jac_H)
        throw DimensionMismatch("problem '" + name + "': missing evaluator");
    if (x0 && x0->size() != n)
        throw DimensionMismatch("problem '" + name + "': x0 has wrong length");
}

Evaluation evaluate(const MpecProblem &problem, const Vector &x) {
    if (x.size() != problem.n)
        throw DimensionMismatch("point has " + std::to_string(x.size()) + " entries, expected " +
                                std::to_string(problem.n));
    Evaluation e;
    e.x = x;
    e.f = problem.f(x);
    if (!std::isfinite(e.f))
        throw NonFiniteValue("non-finite value in f");
    e.g = problem.g(x);
    e.h = problem.h(x);
    e.G = problem.G(x);
    e.H = problem.H(x);
    e.grad_f = problem.grad_f(x);
    e.jac_g = problem.jac_g(x);
    e.jac_h = problem.jac_h(x);
    e.jac_G = problem.jac_G(x);
    e.jac_H = problem.jac_H(x);

    require_size(e.g, problem.m, "g");
    require_size(e.h, problem.p, "h");
    require_size(e.G, problem.q, "G");
    require_size(e.H, problem.q, "H");
    require_size(e.grad_f, problem.n, "grad_f");
    require_shape(e.jac_g, problem.n, problem.m, "jac_g");
    require_shape(e.jac_h, problem.n, problem.p, "jac_h");
    require_shape(e.jac_G, problem.n, problem.q, "jac_G");
    require_shape(e.jac_H, problem.n, problem.q, "jac_H");

    require_finite(e.g, "g");
    require_finite(e.h, "h");
    require_finite(e.G, "G");
    require_finite(e.H, "H");
    require_finite(e.grad_f, "grad_f");
    require_finite(e.jac_g, "jac_g");
    require_finite(e.jac_h, "jac_h");
    require_finite(e.jac_G, "jac_G");
    require_finite(e.jac_H, "jac_H");

    e.Q = e.G.dot(e.H);
    e.grad_Q = e.jac_G * e.H + e.jac_H * e.G;
    if (!std::isfinite(e.Q) || !e.grad_Q.allFinite())
        throw NonFiniteValue("non-finite complementarity measure");
    return e;
}

PointValues evaluate_values(const MpecProblem &problem, const Vector &x) {
    PointValues v;
    v.f = problem.f(x);
    if (!std::isfinite(v.f))
        throw NonFiniteValue("non-finite value in f");
    v.g = problem.g(x);
    v.h = problem.h(x);
    v.G = problem.G(x);
    v.H = problem.H(x);
    require_size(v.g, problem.m, "g");
    require_size(v.h, problem.p, "h");
    require_size(v.G, problem.q, "G");
    require_size(v.H, problem.q, "H");
    require_finite(v.g, "g");
    require_finite(v.h, "h");
    require_finite(v.G, "G");
    require_finite(v.H, "H");
    v.Q = v.G.dot(v.H);
    if (!std::isfinite(v.Q))
        throw NonFiniteValue("non-finite complementarity measure");
    return v;
}

double GradientReport::worst() const {
    return std::max({err_f, err_g, err_h, err_G, err_H});
}

GradientReport check_gradients(const MpecProblem &problem, const Vector &x, double step,
                               double tolerance) {
    if (!(step > 0.0))
        throw std::invalid_argument("finite-difference step must be positive");
    const Evaluation e = evaluate(problem, x);

    GradientReport r;
    r.step = step;
    r.tolerance = tolerance;

    Vector xp = x, xm = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        xp[j] = x[j] + step;
        xm[j] = x[j] - step;
        const double fp = problem.f(xp), fm = problem.f(xm);
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NonFiniteValue("non-finite value in finite-difference probe of f");
        r.err_f = std::max(r.err_f, rel_err(e.grad_f[j], (fp - fm) / (2.0 * step)));
        xp[j] = xm[j] = x[j];
    }
    r.err_g = jac_error(problem.g, e.jac_g, x, step);
    r.err_h = jac_error(problem.h, e.jac_h, x, step);
    r.err_G = jac_error(problem.G, e.jac_G, x, step);
    r.err_H = jac_error(problem.H, e.jac_H, x, step);
    r.pass = r.worst() <= tolerance;
    return r;
}

} // namespace mpec

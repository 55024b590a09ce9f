#include "mpec/restoration.hpp"

#include <algorithm>
#include <cmath>

#include "mpec/errors.hpp"
#include "mpec/measures.hpp"

namespace mpec {

double ElasticProblem::objective() const {
    return weight * (r.sum() + v.sum() + w.sum() + y.sum() + z.sum() + zeta);
}

double ElasticProblem::constraint_violation(const PointValues &val) const {
    double viol = 0.0;
    auto upd = [&](double x) { viol = std::max(viol, x); };
    for (Eigen::Index i = 0; i < val.g.size(); ++i)
        upd(-(val.g[i] + r[i]));
    for (Eigen::Index i = 0; i < val.h.size(); ++i)
        upd(std::abs(val.h[i] - (v[i] - w[i])));
    for (Eigen::Index i = 0; i < val.G.size(); ++i) {
        upd(-(val.G[i] + y[i]));
        upd(-(val.H[i] + z[i]));
    }
    upd(val.Q - zeta);
    for (const Vector *s : {&r, &v, &w, &y, &z})
        if (s->size())
            upd(-s->minCoeff());
    upd(-zeta);
    return viol;
}

ElasticProblem build_elastic(const Evaluation &e) {
    ElasticProblem el;
    el.x = e.x;
    el.r = negative_part(e.g);
    el.v = e.h.cwiseMax(0.0);
    el.w = negative_part(e.h);
    el.y = negative_part(e.G);
    el.z = negative_part(e.H);
    el.zeta = std::max(e.Q, 0.0);
    return el;
}

double restoration_merit(const PointValues &v) {
    return negative_part(v.g).squaredNorm() + v.h.squaredNorm() + negative_part(v.G).squaredNorm() +
           negative_part(v.H).squaredNorm() + v.Q * v.Q;
}

namespace {

// Residual r(x) whose squared norm is the merit, and its Jacobian (rows).
void residual(const Evaluation &e, Vector &res, Matrix &J) {
    const Eigen::Index n = e.x.size();
    const Eigen::Index m = e.g.size(), p = e.h.size(), q = e.G.size();
    res = Vector::Zero(m + p + 2 * q + 1);
    J = Matrix::Zero(m + p + 2 * q + 1, n);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < m; ++i, ++row)
        if (e.g[i] < 0.0) {
            res[row] = e.g[i];
            J.row(row) = e.jac_g.col(i).transpose();
        }
    for (Eigen::Index i = 0; i < p; ++i, ++row) {
        res[row] = e.h[i];
        J.row(row) = e.jac_h.col(i).transpose();
    }
    for (Eigen::Index i = 0; i < q; ++i, ++row)
        if (e.G[i] < 0.0) {
            res[row] = e.G[i];
            J.row(row) = e.jac_G.col(i).transpose();
        }
    for (Eigen::Index i = 0; i < q; ++i, ++row)
        if (e.H[i] < 0.0) {
            res[row] = e.H[i];
            J.row(row) = e.jac_H.col(i).transpose();
        }
    res[row] = e.Q;
    J.row(row) = e.grad_Q.transpose();
}

} // namespace

RestorationReport restore(const MpecProblem &problem, const Vector &x0, double target,
                          const RestorationOptions &opt) {
    if (!(target > 0.0))
        throw std::invalid_argument("restoration target must be positive");

    RestorationReport rep;
    Evaluation e = evaluate(problem, x0);
    double theta = infeasibility(e).theta;
    double phi = restoration_merit(PointValues{e.f, e.g, e.h, e.G, e.H, e.Q});
    rep.theta_before = theta;
    rep.x_r = x0;
    rep.theta_after = theta;
    rep.phi_history.push_back(phi);
    rep.theta_history.push_back(theta);
    if (theta <= target) {
        rep.converged = true;
        return rep;
    }

    Vector res;
    Matrix J;
    for (int it = 0; it < opt.max_inner; ++it) {
        rep.inner_iterations = it + 1;
        residual(e, res, J);
        const Vector grad_phi = 2.0 * J.transpose() * res;
        if (grad_phi.norm() == 0.0)
            break;

        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(J);
        Vector d = -cod.solve(res);
        const double slope_gn = grad_phi.dot(d);
        if (cod.rank() == 0 || !d.allFinite() ||
            !(slope_gn < -1e-14 * grad_phi.norm() * d.norm()))
            d = -grad_phi;
        const double slope = grad_phi.dot(d);

        bool accepted = false;
        double alpha = 1.0;
        for (int bt = 0; bt <= opt.max_backtracks; ++bt, alpha *= 0.5) {
            const Vector xt = e.x + alpha * d;
            PointValues vt;
            try {
                vt = evaluate_values(problem, xt);
            } catch (const NonFiniteValue &) {
                continue;
            }
            const double phi_t = restoration_merit(vt);
            const double theta_t = infeasibility(vt).theta;
            if (phi_t <= phi + opt.armijo * alpha * slope && theta_t <= theta) {
                e = evaluate(problem, xt);
                phi = phi_t;
                theta = theta_t;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;
        rep.phi_history.push_back(phi);
        rep.theta_history.push_back(theta);
        if (theta <= rep.theta_after) {
            rep.theta_after = theta;
            rep.x_r = e.x;
        }
        if (theta <= target) {
            rep.converged = true;
            break;
        }
    }
    return rep;
}

} // namespace mpec

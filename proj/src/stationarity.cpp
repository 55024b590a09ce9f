#include "mpec/stationarity.hpp"

#include <algorithm>
#include <cmath>

#include "mpec/measures.hpp"

namespace mpec {

const char *to_string(StationarityKind k) {
    switch (k) {
    case StationarityKind::NotWeaklyStationary: return "NotWeaklyStationary";
    case StationarityKind::Weak: return "Weak";
    case StationarityKind::CStationary: return "CStationary";
    case StationarityKind::MStationary: return "MStationary";
    case StationarityKind::SStationary: return "SStationary";
    }
    return "?";
}

MpecMultipliers recover_multipliers(const QpSolution &sol, double u, const Vector &t,
                                    const Evaluation &e) {
    const Eigen::Index m = e.g.size(), q = e.G.size();
    MpecMultipliers mu;
    mu.lambda = sol.lam_in.head(m);
    mu.nu = sol.lam_in.segment(m, q);
    mu.xi = sol.lam_in.tail(q);
    // QP stationarity carries -Jh lam_eq; the Lagrangian carries +Jh mu.
    mu.mu = -sol.lam_eq;
    mu.eta = e.grad_Q.dot(t) / u;
    mu.nu_hat = mu.nu - mu.eta * e.H;
    mu.xi_hat = mu.xi - mu.eta * e.G;
    return mu;
}

MpecMultipliers estimate_multipliers(const Evaluation &e, double activity_tol) {
    const ActiveSets act = active_sets(e, activity_tol);
    const Eigen::Index n = e.x.size();
    const Eigen::Index m = e.g.size(), p = e.h.size(), q = e.G.size();
    const Eigen::Index cols =
        Eigen::Index(act.I_g.size()) + p + Eigen::Index(act.I_G.size() + act.I_H.size());
    Matrix A(n, cols);
    Eigen::Index c = 0;
    for (int i : act.I_g)
        A.col(c++) = e.jac_g.col(i);
    for (Eigen::Index j = 0; j < p; ++j)
        A.col(c++) = -e.jac_h.col(j);
    for (int i : act.I_G)
        A.col(c++) = e.jac_G.col(i);
    for (int i : act.I_H)
        A.col(c++) = e.jac_H.col(i);

    Vector coef = Vector::Zero(cols);
    if (cols > 0)
        coef = Eigen::CompleteOrthogonalDecomposition<Matrix>(A).solve(e.grad_f);

    MpecMultipliers mu;
    mu.lambda = Vector::Zero(m);
    mu.mu = Vector::Zero(p);
    mu.nu = Vector::Zero(q);
    mu.xi = Vector::Zero(q);
    c = 0;
    for (int i : act.I_g)
        mu.lambda[i] = coef[c++];
    for (Eigen::Index j = 0; j < p; ++j)
        mu.mu[j] = coef[c++];
    for (int i : act.I_G)
        mu.nu[i] = coef[c++];
    for (int i : act.I_H)
        mu.xi[i] = coef[c++];
    mu.nu_hat = mu.nu;
    mu.xi_hat = mu.xi;
    return mu;
}

Vector lagrangian_gradient(const Evaluation &e, const MpecMultipliers &mu) {
    return e.grad_f - e.jac_g * mu.lambda + e.jac_h * mu.mu - e.jac_G * mu.nu_hat -
           e.jac_H * mu.xi_hat;
}

StationarityClass classify(const Evaluation &e, const MpecMultipliers &mu,
                           const StationarityTolerances &tol) {
    StationarityClass out;
    const Vector grad_L = lagrangian_gradient(e, mu);
    out.kkt_residual = grad_L.size() ? grad_L.cwiseAbs().maxCoeff() : 0.0;
    out.theta = infeasibility(e).theta;

    auto max_abs = [](const Vector &v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; };

    if (out.theta > tol.feasibility) {
        out.reason = "point is not feasible within tolerance";
        return out;
    }
    if (out.kkt_residual > tol.stationarity) {
        out.reason = "Lagrangian gradient exceeds tolerance";
        return out;
    }
    if (mu.lambda.size() && mu.lambda.minCoeff() < -tol.sign) {
        out.reason = "negative inequality multiplier";
        return out;
    }
    const double slack = std::max({max_abs(mu.lambda.cwiseProduct(e.g)),
                                   max_abs(mu.nu_hat.cwiseProduct(e.G)),
                                   max_abs(mu.xi_hat.cwiseProduct(e.H))});
    const double mult_scale = std::max({1.0, max_abs(mu.lambda), max_abs(mu.nu_hat), max_abs(mu.xi_hat)});
    if (slack > tol.complementarity * mult_scale) {
        out.reason = "complementary slackness violated";
        return out;
    }
    out.weak = true;

    const ActiveSets act = active_sets(e, tol.activity);
    bool all_c = true, all_m = true, all_s = true;
    for (int i : act.biactive()) {
        const double a = mu.nu_hat[i], b = mu.xi_hat[i];
        out.biactive_pairs.push_back({i, a, b});
        const bool zero = std::abs(a) <= tol.sign || std::abs(b) <= tol.sign;
        const bool both_nonneg = a >= -tol.sign && b >= -tol.sign;
        const bool both_nonpos = a <= tol.sign && b <= tol.sign;
        all_s = all_s && both_nonneg;
        all_m = all_m && (both_nonneg || zero);
        all_c = all_c && (both_nonneg || both_nonpos || zero);
    }
    out.c = all_c;
    out.m = all_c && all_m;
    out.s = out.m && all_s;
    if (out.s)
        out.kind = StationarityKind::SStationary;
    else if (out.m)
        out.kind = StationarityKind::MStationary;
    else if (out.c)
        out.kind = StationarityKind::CStationary;
    else
        out.kind = StationarityKind::Weak;
    return out;
}

MfcqReport mfcq_diagnostic(const Evaluation &e, double tol, double activity_tol) {
    MfcqReport rep;
    const ActiveSets act = active_sets(e, activity_tol);
    const std::vector<int> bi = act.biactive();
    auto is_bi = [&](int i) { return std::binary_search(bi.begin(), bi.end(), i); };
    const Eigen::Index n = e.x.size();

    std::vector<Vector> eq_rows, strict_rows;
    for (int i : act.I_G)
        if (!is_bi(i))
            eq_rows.push_back(e.jac_G.col(i));
    for (int i : act.I_H)
        if (!is_bi(i))
            eq_rows.push_back(e.jac_H.col(i));
    for (Eigen::Index j = 0; j < e.h.size(); ++j)
        eq_rows.push_back(e.jac_h.col(j));
    for (int i : act.I_g)
        strict_rows.push_back(e.jac_g.col(i));
    for (int i : bi) {
        strict_rows.push_back(e.jac_G.col(i));
        strict_rows.push_back(e.jac_H.col(i));
    }
    rep.equality_rows = static_cast<int>(eq_rows.size());
    rep.strict_rows = static_cast<int>(strict_rows.size());

    Matrix E(rep.equality_rows, n);
    for (int k = 0; k < rep.equality_rows; ++k)
        E.row(k) = eq_rows[std::size_t(k)].transpose();
    if (rep.equality_rows > 0) {
        if (rep.equality_rows > n) {
            rep.min_singular_value = 0.0;
        } else {
            Eigen::JacobiSVD<Matrix> svd(E);
            rep.min_singular_value = svd.singularValues().minCoeff();
        }
    }
    rep.rank_ok = rep.min_singular_value > tol;

    if (rep.strict_rows == 0) {
        rep.tau = std::numeric_limits<double>::infinity();
        rep.d = Vector::Zero(n);
        rep.holds = rep.rank_ok;
        return rep;
    }

    // Variables (d, tau).
    const Eigen::Index N = n + 1;
    QpProblem lp;
    lp.H = 2e-8 * Matrix::Identity(N, N);
    lp.c = Vector::Zero(N);
    lp.c[n] = -1.0;
    lp.A_eq = Matrix::Zero(rep.equality_rows, N);
    lp.A_eq.leftCols(n) = E;
    lp.b_eq = Vector::Zero(rep.equality_rows);
    const Eigen::Index ns = rep.strict_rows;
    lp.A_in = Matrix::Zero(ns + 2 * n, N);
    lp.b_in = Vector::Zero(ns + 2 * n);
    for (Eigen::Index k = 0; k < ns; ++k) {
        lp.A_in.row(k).head(n) = strict_rows[std::size_t(k)].transpose();
        lp.A_in(k, n) = -1.0;
    }
    lp.A_in.block(ns, 0, n, n) = Matrix::Identity(n, n);
    lp.A_in.block(ns + n, 0, n, n) = -Matrix::Identity(n, n);
    lp.b_in.tail(2 * n).setConstant(-1.0);

    const QpSolution sol = solve_qp(lp);
    if (sol.status != QpStatus::Optimal) {
        rep.holds = false;
        return rep;
    }
    rep.d = sol.t.head(n);
    rep.tau = sol.t[n];
    rep.holds = rep.rank_ok && rep.tau > tol;
    return rep;
}

} // namespace mpec

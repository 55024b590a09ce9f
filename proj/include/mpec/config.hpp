#pragma once

#include <string>

namespace mpec {

/// Parameters of the complementarity/tangential step computation and the
/// penalty-parameter search.
struct PenaltyLoopConfig {
    double u_init = 1.0;       ///< starting penalty parameter u > 0
    double u_hat = 1e-2;       ///< cap of u_min, in (0,1)
    double kappa_u = 0.1;      ///< u_min = min{u_hat, kappa_u delta^sigma1}, in (0,1)
    double sigma1 = 2.0;       ///< > 1
    double sigma2 = 1.5;       ///< in (1, sigma1)
    double kappa1 = 0.1;       ///< f-step tangential bound, in (0, 1/5)
    double kappa2 = 1.0;       ///< > 0
    double kappa3 = 0.1;       ///< h-step tangential bound, in (0, 1/5)
    double kappa_theta = 0.1;  ///< switching condition weight, > 0
    double M_theta = 1e4;      ///< too-large-step absolute bound, > 0
    double kappa6 = 1.0;       ///< too-large-step theta-scaled bound, > 0
    double sigma4 = 1.0;       ///< > 0
    bool strict_u_carry_over = true; ///< start each search at u_{k-1} instead of min(u_init, 4 u_{k-1})

    /// Throws ConfigError naming the first out-of-range field.
    void validate() const;
};

enum class HessianMode { Identity, DampedBFGS };

struct SolverConfig : PenaltyLoopConfig {
    double rho = 0.25;      ///< Armijo constant, in (0, min{1 - 5 kappa1, 1 - 5 kappa3})
    double kappa4 = 0.1;    ///< alpha_min = min{kappa4, kappa5 theta^sigma3}
    double kappa5 = 0.1;
    double sigma3 = 2.0;    ///< > 1
    double kappa7 = 0.5;    ///< restoration funnel shrink, in (0,1)
    double kappa8 = 0.9;    ///< h-iteration funnel update, in (0,1)
    double kappa9 = 0.5;    ///< in (0,1)
    double epsilon = 1e-6;  ///< stop when theta + ||t|| <= epsilon
    int max_iter = 500;
    int max_backtracks = 60;
    double theta_max_init_factor = 10.0; ///< theta_0^max = max{1, factor * theta(x0)}
    double activity_tol = 1e-6;
    HessianMode hessian = HessianMode::DampedBFGS;

    // Stationarity certification at termination.
    double feasibility_tol = 1e-6;
    double stationarity_tol = 1e-5;
    double sign_tol = 1e-8;
    double complementarity_tol = 1e-6;

    void validate() const;
};

const char *to_string(HessianMode m);
HessianMode hessian_mode_from_string(const std::string &s);

} // namespace mpec

#include "mpec/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpec/errors.hpp"

namespace mpec {

namespace {

[[noreturn]] void out_of_range(const char *name, double value, const std::string &range) {
    std::ostringstream os;
    os << "parameter " << name << " = " << value << " is out of range " << range;
    throw ConfigError(os.str());
}

void open_interval(const char *name, double v, double lo, double hi) {
    if (!(v > lo && v < hi)) {
        std::ostringstream r;
        r << "(" << lo << ", " << hi << ")";
        out_of_range(name, v, r.str());
    }
}

void positive(const char *name, double v) {
    if (!(v > 0.0) || !std::isfinite(v))
        out_of_range(name, v, "(0, inf)");
}

void greater_than_one(const char *name, double v) {
    if (!(v > 1.0) || !std::isfinite(v))
        out_of_range(name, v, "(1, inf)");
}

} // namespace

void PenaltyLoopConfig::validate() const {
    positive("u_init", u_init);
    open_interval("u_hat", u_hat, 0.0, 1.0);
    open_interval("kappa_u", kappa_u, 0.0, 1.0);
    greater_than_one("sigma1", sigma1);
    open_interval("sigma2", sigma2, 1.0, sigma1);
    open_interval("kappa1", kappa1, 0.0, 0.2);
    positive("kappa2", kappa2);
    open_interval("kappa3", kappa3, 0.0, 0.2);
    positive("kappa_theta", kappa_theta);
    positive("M_theta", M_theta);
    positive("kappa6", kappa6);
    positive("sigma4", sigma4);
}

void SolverConfig::validate() const {
    PenaltyLoopConfig::validate();
    open_interval("rho", rho, 0.0, std::min(1.0 - 5.0 * kappa1, 1.0 - 5.0 * kappa3));
    open_interval("kappa4", kappa4, 0.0, 1.0);
    open_interval("kappa5", kappa5, 0.0, 1.0);
    greater_than_one("sigma3", sigma3);
    open_interval("kappa7", kappa7, 0.0, 1.0);
    open_interval("kappa8", kappa8, 0.0, 1.0);
    open_interval("kappa9", kappa9, 0.0, 1.0);
    positive("epsilon", epsilon);
    if (max_iter <= 0)
        out_of_range("max_iter", max_iter, "[1, inf)");
    if (max_backtracks <= 0)
        out_of_range("max_backtracks", max_backtracks, "[1, inf)");
    positive("theta_max_init_factor", theta_max_init_factor);
    positive("activity_tol", activity_tol);
    positive("feasibility_tol", feasibility_tol);
    positive("stationarity_tol", stationarity_tol);
    positive("sign_tol", sign_tol);
    positive("complementarity_tol", complementarity_tol);
}

const char *to_string(HessianMode m) {
    return m == HessianMode::Identity ? "Identity" : "DampedBFGS";
}

HessianMode hessian_mode_from_string(const std::string &s) {
    if (s == "Identity")
        return HessianMode::Identity;
    if (s == "DampedBFGS")
        return HessianMode::DampedBFGS;
    throw ConfigError("hessian must be Identity or DampedBFGS, got '" + s + "'");
}

} // namespace mpec

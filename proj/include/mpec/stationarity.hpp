#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mpec/model.hpp"
#include "mpec/qp.hpp"

namespace mpec {

/// Multipliers of the MPEC Lagrangian f - lambda'g + mu'h - nu'G - xi'H.
struct MpecMultipliers {
    Vector lambda;
    Vector mu;
    Vector nu;     ///< raw QP multipliers of the G rows
    Vector xi;     ///< raw QP multipliers of the H rows
    Vector nu_hat; ///< nu - eta H
    Vector xi_hat; ///< xi - eta G
    double eta = 0.0;
};

/// Maps the tangential QP multipliers back to the MPEC blocks and folds the
/// penalty term in: eta = grad Q' t / u.
MpecMultipliers recover_multipliers(const QpSolution &qp_sol, double u, const Vector &t,
                                    const Evaluation &eval);

/// Least-squares multipliers of the active constraints at a point
/// (inactive constraints get zero). Used when no QP is available.
MpecMultipliers estimate_multipliers(const Evaluation &eval, double activity_tol = 1e-6);

/// grad f - Jg lambda + Jh mu - JG nu_hat - JH xi_hat
Vector lagrangian_gradient(const Evaluation &eval, const MpecMultipliers &mult);

struct StationarityTolerances {
    double feasibility = 1e-6;
    double stationarity = 1e-5;
    double sign = 1e-8;
    double complementarity = 1e-6;
    double activity = 1e-6;
};

enum class StationarityKind { NotWeaklyStationary, Weak, CStationary, MStationary, SStationary };

const char *to_string(StationarityKind k);

struct BiactivePair {
    int index = 0;
    double nu_hat = 0.0;
    double xi_hat = 0.0;
};

struct StationarityClass {
    StationarityKind kind = StationarityKind::NotWeaklyStationary;
    double kkt_residual = 0.0;     ///< ||lagrangian_gradient||_inf
    double theta = 0.0;
    std::vector<BiactivePair> biactive_pairs;
    bool weak = false, c = false, m = false, s = false;
    std::string reason;            ///< why the weak test failed, if it did
};

/// Weak test (feasibility, stationarity, complementary slackness, lambda
/// sign), then the biactive sign tests. Per pair, with "zero" meaning
/// |v| <= sign tol and "nonneg" meaning v >= -sign tol:
///   S: both nonneg
///   M: both nonneg, or either zero
///   C: both nonneg, both nonpositive, or either zero
StationarityClass classify(const Evaluation &eval, const MpecMultipliers &mult,
                           const StationarityTolerances &tol = {});

struct MfcqReport {
    bool rank_ok = false;
    int equality_rows = 0;  ///< grad G (I_G\I_H), grad H (I_H\I_G), grad h
    int strict_rows = 0;    ///< grad g (I_g), grad G and grad H (biactive)
    double min_singular_value = std::numeric_limits<double>::infinity();
    double tau = 0.0;       ///< optimal margin, +inf when there are no strict rows
    Vector d;               ///< certificate direction (when computed)
    bool holds = false;
};

/// Rank test on the equality rows plus the margin LP
///   max tau  s.t.  E d = 0,  S d >= tau,  ||d||_inf <= 1,
/// solved by the QP solver with a 1e-8 ||(d, tau)||^2 regularization.
MfcqReport mfcq_diagnostic(const Evaluation &eval, double tol = 1e-6, double activity_tol = 1e-6);

} // namespace mpec

#pragma once

#include <vector>

#include "mpec/model.hpp"

namespace mpec {

/// Elastic reformulation at a point:
///   min w_e (e'r + e'(v + w) + e'(y + z) + zeta)
///   s.t. g >= -r, h = v - w, G >= -y, H >= -z, Q <= zeta, all slacks >= 0,
/// with the slacks at their optimal values for the stored x.
struct ElasticProblem {
    Vector x;
    Vector r, v, w, y, z;
    double zeta = 0.0;
    double weight = 1.0;

    double objective() const;

    /// Largest violation of the elastic constraints (including slack signs)
    /// for the given point values.
    double constraint_violation(const PointValues &values) const;
};

ElasticProblem build_elastic(const Evaluation &eval);

struct RestorationOptions {
    int max_inner = 200;
    double armijo = 1e-4;
    int max_backtracks = 60;
};

struct RestorationReport {
    Vector x_r;
    double theta_before = 0.0;
    double theta_after = 0.0;
    int inner_iterations = 0;
    bool converged = false;
    std::vector<double> phi_history;   ///< merit at every accepted inner iterate, starting point first
    std::vector<double> theta_history; ///< theta at the same points
};

/// Squared-violation merit ||g^-||^2 + ||h||^2 + ||G^-||^2 + ||H^-||^2 + Q^2.
double restoration_merit(const PointValues &values);

/// Gauss-Newton with Armijo backtracking on the merit until theta <= target.
/// A trial point is accepted only if the merit satisfies Armijo and theta
/// does not increase. Returns the lowest-theta point visited.
RestorationReport restore(const MpecProblem &problem, const Vector &x, double target,
                          const RestorationOptions &options = {});

} // namespace mpec

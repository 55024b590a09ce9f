#pragma once

#include <vector>

#include "mpec/model.hpp"

namespace mpec {

/// Infeasibility split into general constraints and complementarity.
struct ThetaBreakdown {
    double theta_f = 0.0; ///< ||g^-|| + ||h|| + ||G^-|| + ||H^-||
    double theta_c = 0.0; ///< |G'H|
    double theta = 0.0;   ///< theta_f + theta_c
};

ThetaBreakdown infeasibility(const Vector &g, const Vector &h, const Vector &G, const Vector &H,
                             double Q);
ThetaBreakdown infeasibility(const Evaluation &eval);
ThetaBreakdown infeasibility(const PointValues &values);

/// Componentwise negative part, max(0, -v_i).
Vector negative_part(const Vector &v);

/// 0-based index sets of (approximately) active constraints. Index i is in a
/// set iff |value_i| <= tol * max(1, ||block||_inf).
struct ActiveSets {
    std::vector<int> I_g;
    std::vector<int> I_G;
    std::vector<int> I_H;
    double tol = 1e-6;

    /// I_G intersected with I_H.
    std::vector<int> biactive() const;
};

ActiveSets active_sets(const Evaluation &eval, double tol = 1e-6);

} // namespace mpec

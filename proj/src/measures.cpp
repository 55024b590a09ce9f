#include "mpec/measures.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace mpec {

Vector negative_part(const Vector &v) {
    return (-v).cwiseMax(0.0);
}

ThetaBreakdown infeasibility(const Vector &g, const Vector &h, const Vector &G, const Vector &H,
                             double Q) {
    ThetaBreakdown t;
    t.theta_f = negative_part(g).norm() + h.norm() + negative_part(G).norm() +
                negative_part(H).norm();
    t.theta_c = std::abs(Q);
    t.theta = t.theta_f + t.theta_c;
    return t;
}

ThetaBreakdown infeasibility(const Evaluation &e) {
    return infeasibility(e.g, e.h, e.G, e.H, e.Q);
}

ThetaBreakdown infeasibility(const PointValues &v) {
    return infeasibility(v.g, v.h, v.G, v.H, v.Q);
}

namespace {

std::vector<int> near_zero(const Vector &v, double tol) {
    std::vector<int> idx;
    if (v.size() == 0)
        return idx;
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) <= tol * scale)
            idx.push_back(static_cast<int>(i));
    return idx;
}

} // namespace

std::vector<int> ActiveSets::biactive() const {
    std::vector<int> out;
    std::set_intersection(I_G.begin(), I_G.end(), I_H.begin(), I_H.end(), std::back_inserter(out));
    return out;
}

ActiveSets active_sets(const Evaluation &e, double tol) {
    ActiveSets a;
    a.tol = tol;
    a.I_g = near_zero(e.g, tol);
    a.I_G = near_zero(e.G, tol);
    a.I_H = near_zero(e.H, tol);
    return a;
}

} // namespace mpec

#include "mpec/registry.hpp"

#include <cmath>

#include "mpec/errors.hpp"

namespace mpec {

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
        out[i++] = x;
    return out;
}

// Callbacks for an empty constraint block.
void set_empty_g(MpecProblem &P) {
    const int n = P.n;
    P.m = 0;
    P.g = [](const Vector &) { return Vector(0); };
    P.jac_g = [n](const Vector &) { return Matrix(n, 0); };
}

void set_empty_h(MpecProblem &P) {
    const int n = P.n;
    P.p = 0;
    P.h = [](const Vector &) { return Vector(0); };
    P.jac_h = [n](const Vector &) { return Matrix(n, 0); };
}

// G = x1, H = x2 (one complementarity pair on the first two coordinates).
void set_coordinate_pair(MpecProblem &P) {
    const int n = P.n;
    P.q = 1;
    P.G = [](const Vector &x) { return vec({x[0]}); };
    P.H = [](const Vector &x) { return vec({x[1]}); };
    P.jac_G = [n](const Vector &) {
        Matrix J = Matrix::Zero(n, 1);
        J(0, 0) = 1.0;
        return J;
    };
    P.jac_H = [n](const Vector &) {
        Matrix J = Matrix::Zero(n, 1);
        J(1, 0) = 1.0;
        return J;
    };
}

MpecProblem lin_biactive() {
    MpecProblem P;
    P.name = "lin_biactive";
    P.n = 2;
    P.f = [](const Vector &x) { return x[0] + x[1]; };
    P.grad_f = [](const Vector &) { return vec({1.0, 1.0}); };
    set_empty_g(P);
    set_empty_h(P);
    set_coordinate_pair(P);
    P.x0 = vec({1.0, 1.0});
    P.solution.minimizers = {vec({0.0, 0.0})};
    P.solution.f_star = 0.0;
    P.solution.nu_hat = vec({1.0});
    P.solution.xi_hat = vec({1.0});
    P.solution.note = "biactive origin; grad f = (1,1) = nu*e1 + xi*e2 with nu = xi = 1";
    return P;
}

MpecProblem quad_branch() {
    MpecProblem P;
    P.name = "quad_branch";
    P.n = 2;
    P.f = [](const Vector &x) { return (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - 1.0) * (x[1] - 1.0); };
    P.grad_f = [](const Vector &x) { return vec({2.0 * (x[0] - 1.0), 2.0 * (x[1] - 1.0)}); };
    set_empty_g(P);
    set_empty_h(P);
    set_coordinate_pair(P);
    P.x0 = vec({2.0, 0.1});
    P.solution.minimizers = {vec({1.0, 0.0}), vec({0.0, 1.0})};
    P.solution.f_star = 1.0;
    P.solution.nu_hat = vec({0.0});
    P.solution.xi_hat = vec({-2.0});
    P.solution.note = "branch minima (1,0), (0,1); origin is C- but not M-stationary";
    return P;
}

MpecProblem mixed_eq() {
    MpecProblem P;
    P.name = "mixed_eq";
    P.n = 2;
    P.f = [](const Vector &x) { return (x[0] - 2.0) * (x[0] - 2.0) + (x[1] - 1.0) * (x[1] - 1.0); };
    P.grad_f = [](const Vector &x) { return vec({2.0 * (x[0] - 2.0), 2.0 * (x[1] - 1.0)}); };
    set_empty_g(P);
    P.p = 1;
    P.h = [](const Vector &x) { return vec({x[0] + x[1] - 1.0}); };
    P.jac_h = [](const Vector &) {
        Matrix J(2, 1);
        J << 1.0, 1.0;
        return J;
    };
    set_coordinate_pair(P);
    P.x0 = vec({1.2, 0.6});
    P.solution.minimizers = {vec({1.0, 0.0})};
    P.solution.f_star = 2.0;
    P.solution.nu_hat = vec({0.0});
    P.solution.xi_hat = vec({0.0});
    P.solution.note = "feasible set {(1,0), (0,1)}; f = 2 and 4";
    return P;
}

MpecProblem cstat_fixture() {
    MpecProblem P;
    P.name = "cstat_fixture";
    P.n = 3;
    P.f = [](const Vector &x) { return (x.array() - 1.0).square().sum(); };
    P.grad_f = [](const Vector &x) { return Vector(2.0 * (x.array() - 1.0)); };
    P.m = 1;
    P.g = [](const Vector &x) { return vec({0.5 - x[2]}); };
    P.jac_g = [](const Vector &) {
        Matrix J = Matrix::Zero(3, 1);
        J(2, 0) = -1.0;
        return J;
    };
    set_empty_h(P);
    set_coordinate_pair(P);
    P.x0 = vec({2.0, 0.1, 0.0});
    P.solution.minimizers = {vec({1.0, 0.0, 0.5}), vec({0.0, 1.0, 0.5})};
    P.solution.f_star = 1.25;
    P.solution.nu_hat = vec({0.0});
    P.solution.xi_hat = vec({-2.0});
    P.solution.note = "(0,0,0.5) is C-stationary with nu = xi = -2, lambda = 1";
    return P;
}

MpecProblem nl_quad_branch() {
    MpecProblem P;
    P.name = "nl_quad_branch";
    P.n = 2;
    P.f = [](const Vector &x) { return (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - 1.0) * (x[1] - 1.0); };
    P.grad_f = [](const Vector &x) { return vec({2.0 * (x[0] - 1.0), 2.0 * (x[1] - 1.0)}); };
    P.m = 1;
    P.g = [](const Vector &x) { return vec({4.0 - x.squaredNorm()}); };
    P.jac_g = [](const Vector &x) {
        Matrix J(2, 1);
        J << -2.0 * x[0], -2.0 * x[1];
        return J;
    };
    set_empty_h(P);
    P.q = 1;
    P.G = [](const Vector &x) { return vec({std::expm1(x[0])}); };
    P.H = [](const Vector &x) { return vec({x[1] + x[1] * x[1] * x[1]}); };
    P.jac_G = [](const Vector &x) {
        Matrix J(2, 1);
        J << std::exp(x[0]), 0.0;
        return J;
    };
    P.jac_H = [](const Vector &x) {
        Matrix J(2, 1);
        J << 0.0, 1.0 + 3.0 * x[1] * x[1];
        return J;
    };
    P.x0 = vec({1.5, 0.2});
    P.solution.minimizers = {vec({1.0, 0.0}), vec({0.0, 1.0})};
    P.solution.f_star = 1.0;
    P.solution.note = "same feasible set as quad_branch, nonlinear G, H and an inactive g";
    return P;
}

MpecProblem infeasible_cc() {
    MpecProblem P;
    P.name = "infeasible_cc";
    P.n = 2;
    P.f = [](const Vector &x) { return 0.5 * x.squaredNorm(); };
    P.grad_f = [](const Vector &x) { return x; };
    P.m = 1;
    P.g = [](const Vector &x) { return vec({-1.0 - x[0] - x[1]}); };
    P.jac_g = [](const Vector &) {
        Matrix J(2, 1);
        J << -1.0, -1.0;
        return J;
    };
    set_empty_h(P);
    set_coordinate_pair(P);
    P.x0 = vec({0.5, 0.5});
    P.solution.note = "G >= 0, H >= 0, G + H <= -1: empty feasible set";
    return P;
}

} // namespace

std::vector<std::string> registry_names() {
    return {"lin_biactive", "quad_branch", "mixed_eq", "cstat_fixture", "nl_quad_branch",
            "infeasible_cc"};
}

MpecProblem registry_get(const std::string &name) {
    MpecProblem P;
    if (name == "lin_biactive")
        P = lin_biactive();
    else if (name == "quad_branch")
        P = quad_branch();
    else if (name == "mixed_eq")
        P = mixed_eq();
    else if (name == "cstat_fixture")
        P = cstat_fixture();
    else if (name == "nl_quad_branch")
        P = nl_quad_branch();
    else if (name == "infeasible_cc")
        P = infeasible_cc();
    else
        throw UnknownProblem("unknown problem '" + name + "'");
    P.validate();
    return P;
}

} // namespace mpec

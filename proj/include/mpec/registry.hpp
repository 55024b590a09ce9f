#pragma once

#include <string>
#include <vector>

#include "mpec/model.hpp"

namespace mpec {

/// Built-in fixtures with analytic solution metadata:
///   lin_biactive    min x1+x2,                 0 <= x1 _|_ x2 >= 0
///   quad_branch     min (x1-1)^2+(x2-1)^2,     0 <= x1 _|_ x2 >= 0
///   mixed_eq        min (x1-2)^2+(x2-1)^2,     x1+x2 = 1, 0 <= x1 _|_ x2 >= 0
///   cstat_fixture   quad_branch lifted to R^3 with x3 <= 1/2
///   nl_quad_branch  quad_branch feasible set written with nonlinear G, H, g
///
/// Throws UnknownProblem for any other name.
MpecProblem registry_get(const std::string &name);

std::vector<std::string> registry_names();

} // namespace mpec

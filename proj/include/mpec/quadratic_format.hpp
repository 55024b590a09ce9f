#pragma once

#include <string>

#include "mpec/model.hpp"

namespace mpec {

/// Data of an MPEC with quadratic objective and affine maps:
///   f = 1/2 x'Px + c'x,  g = A_g x + b_g >= 0,  h = A_h x + b_h = 0,
///   G = A_G x + b_G,     H = A_H x + b_H.
struct QuadraticMpecData {
    std::string name = "quadratic";
    int n = 0;
    Matrix P;
    Vector c;
    Matrix A_g, A_h, A_G, A_H; // rows are constraint normals
    Vector b_g, b_h, b_G, b_H;
    std::optional<Vector> x0;
    bool symmetrized = false; ///< set when P was replaced by (P+P')/2
};

/// Parses the JSON document. Missing `g`/`h` blocks mean m = 0 / p = 0;
/// `G` and `H` are required and must have at least one row.
/// Throws ParseError (with field or line:column locus) and DimensionMismatch.
QuadraticMpecData parse_quadratic_mpec(const std::string &document);

MpecProblem make_quadratic_mpec(const QuadraticMpecData &data);

/// parse_quadratic_mpec followed by make_quadratic_mpec. `symmetrized`, when
/// non-null, receives the warning flag.
MpecProblem load_quadratic_mpec(const std::string &document, bool *symmetrized = nullptr);

MpecProblem load_quadratic_mpec_file(const std::string &path, bool *symmetrized = nullptr);

} // namespace mpec

#include "mpec/quadratic_format.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mpec/errors.hpp"

namespace mpec {

namespace {

using json = nlohmann::json;

std::string line_col(const std::string &doc, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < doc.size(); ++i) {
        if (doc[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

double number_at(const json &j, const std::string &locus) {
    if (!j.is_number())
        throw ParseError(locus, "expected a number");
    return j.get<double>();
}

Vector vector_at(const json &j, const std::string &locus) {
    if (!j.is_array())
        throw ParseError(locus, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = number_at(j[i], locus + "/" + std::to_string(i));
    return v;
}

// Nested list of rows. An empty list yields a 0 x cols matrix.
Matrix matrix_at(const json &j, Eigen::Index cols, const std::string &locus) {
    if (!j.is_array())
        throw ParseError(locus, "expected a nested list (array of rows)");
    Matrix M(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string row_locus = locus + "/" + std::to_string(r);
        const Vector row = vector_at(j[r], row_locus);
        if (row.size() != cols)
            throw DimensionMismatch(row_locus + ": row has " + std::to_string(row.size()) +
                                    " entries, expected " + std::to_string(cols));
        M.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return M;
}

void affine_block(const json &doc, const char *key, int n, bool required, Matrix &A, Vector &b) {
    const std::string locus = std::string("/") + key;
    if (!doc.contains(key)) {
        if (required)
            throw ParseError(locus, "missing required block");
        A.resize(0, n);
        b.resize(0);
        return;
    }
    const json &blk = doc.at(key);
    if (!blk.is_object())
        throw ParseError(locus, "expected an object with fields A and b");
    if (!blk.contains("A"))
        throw ParseError(locus + "/A", "missing field");
    if (!blk.contains("b"))
        throw ParseError(locus + "/b", "missing field");
    A = matrix_at(blk.at("A"), n, locus + "/A");
    b = vector_at(blk.at("b"), locus + "/b");
    if (b.size() != A.rows())
        throw DimensionMismatch(locus + ": A has " + std::to_string(A.rows()) + " rows but b has " +
                                std::to_string(b.size()) + " entries");
}

} // namespace

QuadraticMpecData parse_quadratic_mpec(const std::string &document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error &e) {
        throw ParseError(line_col(document, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    if (!doc.is_object())
        throw ParseError("/", "document must be a single object");

    QuadraticMpecData d;
    if (doc.contains("name")) {
        if (!doc["name"].is_string())
            throw ParseError("/name", "expected a string");
        d.name = doc["name"].get<std::string>();
    }
    if (!doc.contains("n"))
        throw ParseError("/n", "missing required field");
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() <= 0)
        throw ParseError("/n", "expected a positive integer");
    d.n = doc["n"].get<int>();

    if (!doc.contains("objective"))
        throw ParseError("/objective", "missing required block");
    const json &obj = doc["objective"];
    if (!obj.is_object())
        throw ParseError("/objective", "expected an object with fields P and c");
    if (!obj.contains("P"))
        throw ParseError("/objective/P", "missing field");
    if (!obj.contains("c"))
        throw ParseError("/objective/c", "missing field");
    d.P = matrix_at(obj["P"], d.n, "/objective/P");
    if (d.P.rows() != d.n)
        throw DimensionMismatch("/objective/P: expected " + std::to_string(d.n) + " rows");
    d.c = vector_at(obj["c"], "/objective/c");
    if (d.c.size() != d.n)
        throw DimensionMismatch("/objective/c: expected " + std::to_string(d.n) + " entries");
    if (d.P != d.P.transpose()) {
        d.P = (0.5 * (d.P + d.P.transpose())).eval();
        d.symmetrized = true;
    }

    affine_block(doc, "g", d.n, false, d.A_g, d.b_g);
    affine_block(doc, "h", d.n, false, d.A_h, d.b_h);
    affine_block(doc, "G", d.n, true, d.A_G, d.b_G);
    affine_block(doc, "H", d.n, true, d.A_H, d.b_H);
    if (d.A_G.rows() == 0)
        throw ParseError("/G", "complementarity block is empty (an MPEC needs q >= 1)");
    if (d.A_H.rows() != d.A_G.rows())
        throw DimensionMismatch("/H: has " + std::to_string(d.A_H.rows()) + " rows, G has " +
                                std::to_string(d.A_G.rows()));

    if (doc.contains("x0")) {
        d.x0 = vector_at(doc["x0"], "/x0");
        if (d.x0->size() != d.n)
            throw DimensionMismatch("/x0: expected " + std::to_string(d.n) + " entries");
    }
    return d;
}

MpecProblem make_quadratic_mpec(const QuadraticMpecData &d) {
    MpecProblem P;
    P.name = d.name;
    P.n = d.n;
    P.m = static_cast<int>(d.A_g.rows());
    P.p = static_cast<int>(d.A_h.rows());
    P.q = static_cast<int>(d.A_G.rows());

    const Matrix Pm = d.P;
    const Vector c = d.c;
    P.f = [Pm, c](const Vector &x) { return 0.5 * x.dot(Pm * x) + c.dot(x); };
    P.grad_f = [Pm, c](const Vector &x) { return Vector(Pm * x + c); };

    auto affine = [](const Matrix &A, const Vector &b) {
        return VectorFn([A, b](const Vector &x) { return Vector(A * x + b); });
    };
    auto jac = [](const Matrix &A) {
        const Matrix At = A.transpose();
        return MatrixFn([At](const Vector &) { return At; });
    };
    P.g = affine(d.A_g, d.b_g);
    P.h = affine(d.A_h, d.b_h);
    P.G = affine(d.A_G, d.b_G);
    P.H = affine(d.A_H, d.b_H);
    P.jac_g = jac(d.A_g);
    P.jac_h = jac(d.A_h);
    P.jac_G = jac(d.A_G);
    P.jac_H = jac(d.A_H);
    P.x0 = d.x0;
    P.validate();
    return P;
}

MpecProblem load_quadratic_mpec(const std::string &document, bool *symmetrized) {
    const QuadraticMpecData d = parse_quadratic_mpec(document);
    if (symmetrized)
        *symmetrized = d.symmetrized;
    return make_quadratic_mpec(d);
}

MpecProblem load_quadratic_mpec_file(const std::string &path, bool *symmetrized) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_quadratic_mpec(ss.str(), symmetrized);
}

} // namespace mpec

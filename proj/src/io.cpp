#include "mpec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>
#include <variant>

#include <json.hpp>

#include "mpec/errors.hpp"

namespace mpec {

namespace {

using json = nlohmann::json;

void append_real(std::string &out, double v) {
    if (std::isnan(v)) {
        out += "nan";
        return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

double parse_real(const std::string &field, const std::string &locus) {
    if (field == "nan")
        return std::nan("");
    char *end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || *end != '\0')
        throw ParseError(locus, "expected a number, got '" + field + "'");
    return v;
}

int parse_int(const std::string &field, const std::string &locus) {
    char *end = nullptr;
    const long v = std::strtol(field.c_str(), &end, 10);
    if (field.empty() || *end != '\0')
        throw ParseError(locus, "expected an integer, got '" + field + "'");
    return static_cast<int>(v);
}

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Vector &v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(real_or_null(v[i]));
    return a;
}

json parse_document(const std::string &document, const char *what) {
    try {
        return json::parse(document);
    } catch (const json::parse_error &e) {
        throw ParseError("byte " + std::to_string(e.byte), std::string("malformed ") + what);
    }
}

using ConfigField = std::variant<double SolverConfig::*, int SolverConfig::*, bool SolverConfig::*,
                                 HessianMode SolverConfig::*>;

const std::vector<std::pair<const char *, ConfigField>> &config_fields() {
    static const std::vector<std::pair<const char *, ConfigField>> fields = {
        {"u_init", &SolverConfig::u_init},
        {"u_hat", &SolverConfig::u_hat},
        {"kappa_u", &SolverConfig::kappa_u},
        {"sigma1", &SolverConfig::sigma1},
        {"sigma2", &SolverConfig::sigma2},
        {"kappa1", &SolverConfig::kappa1},
        {"kappa2", &SolverConfig::kappa2},
        {"kappa3", &SolverConfig::kappa3},
        {"kappa_theta", &SolverConfig::kappa_theta},
        {"M_theta", &SolverConfig::M_theta},
        {"kappa6", &SolverConfig::kappa6},
        {"sigma4", &SolverConfig::sigma4},
        {"strict_u_carry_over", &SolverConfig::strict_u_carry_over},
        {"rho", &SolverConfig::rho},
        {"kappa4", &SolverConfig::kappa4},
        {"kappa5", &SolverConfig::kappa5},
        {"sigma3", &SolverConfig::sigma3},
        {"kappa7", &SolverConfig::kappa7},
        {"kappa8", &SolverConfig::kappa8},
        {"kappa9", &SolverConfig::kappa9},
        {"epsilon", &SolverConfig::epsilon},
        {"max_iter", &SolverConfig::max_iter},
        {"max_backtracks", &SolverConfig::max_backtracks},
        {"theta_max_init_factor", &SolverConfig::theta_max_init_factor},
        {"activity_tol", &SolverConfig::activity_tol},
        {"hessian", &SolverConfig::hessian},
        {"feasibility_tol", &SolverConfig::feasibility_tol},
        {"stationarity_tol", &SolverConfig::stationarity_tol},
        {"sign_tol", &SolverConfig::sign_tol},
        {"complementarity_tol", &SolverConfig::complementarity_tol},
    };
    return fields;
}

struct FieldAssign {
    SolverConfig &cfg;
    const json &value;
    const std::string &key;

    void operator()(double SolverConfig::*m) const {
        if (!value.is_number())
            throw ConfigError("parameter " + key + " must be a number");
        cfg.*m = value.get<double>();
    }
    void operator()(int SolverConfig::*m) const {
        if (!value.is_number_integer())
            throw ConfigError("parameter " + key + " must be an integer");
        cfg.*m = value.get<int>();
    }
    void operator()(bool SolverConfig::*m) const {
        if (!value.is_boolean())
            throw ConfigError("parameter " + key + " must be true or false");
        cfg.*m = value.get<bool>();
    }
    void operator()(HessianMode SolverConfig::*m) const {
        if (!value.is_string())
            throw ConfigError("parameter " + key + " must be \"Identity\" or \"DampedBFGS\"");
        cfg.*m = hessian_mode_from_string(value.get<std::string>());
    }
};

Vector multiplier_block(const json &doc, const char *key, int expected) {
    if (!doc.contains(key))
        return Vector::Zero(expected);
    const json &a = doc.at(key);
    const std::string locus = std::string("/") + key;
    if (!a.is_array())
        throw ParseError(locus, "expected an array of numbers");
    if (static_cast<int>(a.size()) != expected)
        throw DimensionMismatch(locus + ": has " + std::to_string(a.size()) + " entries, expected " +
                                std::to_string(expected));
    Vector v(expected);
    for (int i = 0; i < expected; ++i) {
        if (!a[static_cast<std::size_t>(i)].is_number())
            throw ParseError(locus + "/" + std::to_string(i), "expected a number");
        v[i] = a[static_cast<std::size_t>(i)].get<double>();
    }
    return v;
}

} // namespace

std::string format_trace(const std::vector<TraceRecord> &records) {
    std::string out = kTraceHeader;
    out += '\n';
    for (const TraceRecord &r : records) {
        out += std::to_string(r.k);
        out += ',';
        out += to_string(r.kind);
        for (double v : {r.theta_f, r.theta_c, r.theta, r.theta_max, r.f_value, r.alpha, r.u, r.norm_s,
                         r.norm_t, r.gamma}) {
            out += ',';
            append_real(out, v);
        }
        out += ',';
        out += std::to_string(r.qp_iterations);
        out += ',';
        append_real(out, r.stationarity_residual);
        out += '\n';
    }
    return out;
}

void emit_trace(const std::vector<TraceRecord> &records, const std::string &path) {
    write_text_file(path, format_trace(records));
}

std::vector<TraceRecord> parse_trace(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw ParseError("1:1", "missing or unexpected trace header");
    std::vector<TraceRecord> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::vector<std::size_t> col;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            col.push_back(start + 1);
            f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        const std::string where = std::to_string(lineno) + ":";
        if (f.size() != 14)
            throw ParseError(where + "1", "expected 14 fields, got " + std::to_string(f.size()));
        auto loc = [&](int i) { return where + std::to_string(col[static_cast<std::size_t>(i)]); };
        TraceRecord r;
        r.k = parse_int(f[0], loc(0));
        try {
            r.kind = step_kind_from_string(f[1]);
        } catch (const ParseError &) {
            throw ParseError(loc(1), "unknown step kind '" + f[1] + "'");
        }
        double *reals[] = {&r.theta_f, &r.theta_c, &r.theta, &r.theta_max, &r.f_value,
                           &r.alpha,   &r.u,       &r.norm_s, &r.norm_t,   &r.gamma};
        for (int i = 0; i < 10; ++i)
            *reals[i] = parse_real(f[static_cast<std::size_t>(i + 2)], loc(i + 2));
        r.qp_iterations = parse_int(f[12], loc(12));
        r.stationarity_residual = parse_real(f[13], loc(13));
        out.push_back(r);
    }
    return out;
}

std::vector<TraceRecord> read_trace(const std::string &path) { return parse_trace(read_text_file(path)); }

std::string format_result(const std::string &problem_name, const SolveResult &result,
                          double wall_time_s) {
    const MpecMultipliers &m = result.multipliers;
    json j;
    j["problem"] = problem_name;
    j["status"] = to_string(result.status);
    j["iterations"] = result.iterations;
    j["x"] = vector_json(result.x_final);
    j["f"] = real_or_null(result.f_final);
    j["theta"] = {{"theta_f", real_or_null(result.theta_final.theta_f)},
                  {"theta_c", real_or_null(result.theta_final.theta_c)},
                  {"theta", real_or_null(result.theta_final.theta)}};
    j["multipliers"] = {{"lambda", vector_json(m.lambda)}, {"mu", vector_json(m.mu)},
                        {"nu_hat", vector_json(m.nu_hat)}, {"xi_hat", vector_json(m.xi_hat)},
                        {"eta", real_or_null(m.eta)}};
    json pairs = json::array();
    for (const BiactivePair &p : result.stationarity.biactive_pairs)
        pairs.push_back({{"index", p.index}, {"nu_hat", p.nu_hat}, {"xi_hat", p.xi_hat}});
    j["class"] = to_string(result.stationarity.kind);
    j["stationarity"] = {{"kkt_residual", real_or_null(result.stationarity.kkt_residual)},
                         {"biactive", pairs},
                         {"reason", result.stationarity.reason}};
    j["wall_time_s"] = wall_time_s;
    return j.dump(2) + "\n";
}

void write_result(const std::string &path, const std::string &problem_name,
                  const SolveResult &result, double wall_time_s) {
    write_text_file(path, format_result(problem_name, result, wall_time_s));
}

SolverConfig parse_config(const std::string &document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error &e) {
        throw ConfigError("malformed config at byte " + std::to_string(e.byte));
    }
    if (!doc.is_object())
        throw ConfigError("config must be a single object");
    SolverConfig cfg;
    for (const auto &[key, value] : doc.items()) {
        const auto &fields = config_fields();
        auto it = std::find_if(fields.begin(), fields.end(),
                               [&](const auto &f) { return key == f.first; });
        if (it == fields.end())
            throw ConfigError("unknown parameter " + key);
        std::visit(FieldAssign{cfg, value, key}, it->second);
    }
    cfg.validate();
    return cfg;
}

SolverConfig load_config_file(const std::string &path) { return parse_config(read_text_file(path)); }

MpecMultipliers parse_multipliers(const std::string &document, const MpecProblem &problem) {
    const json doc = parse_document(document, "multipliers file");
    if (!doc.is_object())
        throw ParseError("/", "multipliers file must be a single object");
    for (const auto &[key, value] : doc.items())
        if (key != "lambda" && key != "mu" && key != "nu_hat" && key != "xi_hat")
            throw ParseError("/" + key, "unknown field");
    MpecMultipliers m;
    m.lambda = multiplier_block(doc, "lambda", problem.m);
    m.mu = multiplier_block(doc, "mu", problem.p);
    m.nu_hat = multiplier_block(doc, "nu_hat", problem.q);
    m.xi_hat = multiplier_block(doc, "xi_hat", problem.q);
    m.nu = m.nu_hat;
    m.xi = m.xi_hat;
    return m;
}

MpecMultipliers load_multipliers_file(const std::string &path, const MpecProblem &problem) {
    return parse_multipliers(read_text_file(path), problem);
}

Vector parse_vector(const std::string &text) {
    std::vector<double> vals;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = text.find(',', start);
        std::string tok = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto first = tok.find_first_not_of(" \t");
        const auto last = tok.find_last_not_of(" \t");
        tok = first == std::string::npos ? "" : tok.substr(first, last - first + 1);
        char *end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || *end != '\0' || !std::isfinite(v))
            throw ParseError("1:" + std::to_string(start + 1), "expected a finite number, got '" + tok + "'");
        vals.push_back(v);
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path);
    out << text;
    if (!out)
        throw Error("failed writing " + path);
}

} // namespace mpec

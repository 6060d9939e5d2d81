#include "morita_cli/json_io.hpp"

#include <regex>

namespace morita::cli {

namespace {

[[noreturn]] void syntax(const Context& ctx, const std::string& what) {
    throw Error(ErrorKind::SyntaxError, (ctx.path.empty() ? "/" : ctx.path) + ": " + what);
}

[[noreturn]] void malformed(const Context& ctx, const std::string& what) {
    throw Error(ErrorKind::MalformedScalar, (ctx.path.empty() ? "/" : ctx.path) + ": " + what);
}

const json& require_array(const json& j, const Context& ctx) {
    if (!j.is_array()) syntax(ctx, "expected an array");
    return j;
}

}  // namespace

json to_json(const Rational& r) { return r.get_str(); }

json to_json(const BaseElement& x) {
    if (x.is_constant()) return to_json(x.constant_term());
    json out = json::array();
    for (const auto& c : x.coefficients()) out.push_back(to_json(c));
    return out;
}

json to_json(const Scalar& z) {
    if (z.is_real()) return to_json(z.re());
    return {{"re", to_json(z.re())}, {"im", to_json(z.im())}};
}

json to_json(const FracScalar& z) {
    if (z.in_ring()) return to_json(try_demote(z));
    return {{"num", to_json(z.numerator())}, {"den", to_json(z.denominator())}};
}

json to_json(const Vector& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(to_json(z));
    return out;
}

json to_json(const Matrix& m) {
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(to_json(m.row(r)));
    return out;
}

json to_json(const Report& r) {
    json out = json::array();
    for (const auto& c : r.checks) {
        json e = {{"name", c.name}, {"passed", c.passed}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        out.push_back(std::move(e));
    }
    return out;
}

json to_json(const PsdCertificate& c) {
    json out;
    out["verdict"] = c.positive() ? "positive" : "not-positive";
    json basis = json::array();
    for (const auto& v : c.congruence.basis) basis.push_back(to_json(v));
    out["basis"] = std::move(basis);
    out["diagonal"] = to_json(c.congruence.diagonal);
    if (c.witness) out["witness"] = to_json(*c.witness);
    if (c.witness_value) out["witness_value"] = to_json(*c.witness_value);
    return out;
}

json to_json(const StarAlgebra& a) {
    json mul = json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(to_json(to_dense(a.product(i, j), a.dim())));
        mul.push_back(std::move(row));
    }
    json star = json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) star.push_back(to_json(to_dense(a.star_of(i), a.dim())));
    return {{"dim", a.dim()}, {"mul", std::move(mul)}, {"star", std::move(star)}, {"labels", a.labels()}};
}

json to_json(const Bimodule& x) {
    auto mats = [](const std::vector<Matrix>& ms) {
        json out = json::array();
        for (const auto& m : ms) out.push_back(to_json(m));
        return out;
    };
    auto table = [](const InnerTable& t) {
        json out = json::array();
        for (const auto& row : t) {
            json r = json::array();
            for (const auto& v : row) r.push_back(to_json(v));
            out.push_back(std::move(r));
        }
        return out;
    };
    auto structure = [](const CyclicStructure& s) {
        json out = json::array();
        for (const auto& piece : s.pieces) {
            json b = json::array(), v = json::array();
            for (const auto& e : piece.basis) b.push_back(to_json(e));
            for (const auto& e : piece.vectors) v.push_back(to_json(e));
            out.push_back({{"basis", std::move(b)}, {"vectors", std::move(v)}});
        }
        return out;
    };
    json out = {{"dim", x.dim}, {"left", mats(x.left)}, {"right", mats(x.right)}, {"innerA", table(x.inner_a)}};
    if (x.inner_b) out["innerB"] = table(*x.inner_b);
    if (x.p_structure || x.q_structure) {
        json c = json::object();
        if (x.p_structure) c["P"] = structure(*x.p_structure);
        if (x.q_structure) c["Q"] = structure(*x.q_structure);
        out["cyclic"] = std::move(c);
    }
    return out;
}

Rational parse_rational(const json& j, const Context& ctx) {
    if (j.is_number_integer()) return Rational(j.dump());
    if (!j.is_string()) malformed(ctx, "expected a rational string \"p/q\"");
    static const std::regex pattern(R"(^([+-]?[0-9]+)(/([0-9]+))?$)");
    const std::string s = j.get<std::string>();
    std::smatch m;
    if (!std::regex_match(s, m, pattern)) malformed(ctx, "\"" + s + "\" is not a rational");
    mpz_class num(m[1].str()[0] == '+' ? m[1].str().substr(1) : m[1].str(), 10);
    mpz_class den(1);
    if (m[3].matched) den = mpz_class(m[3].str(), 10);
    if (den == 0) malformed(ctx, "\"" + s + "\" has a zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

BaseElement parse_base(const json& j, const Context& ctx) {
    if (!j.is_array()) return BaseElement(parse_rational(j, ctx));
    std::vector<Rational> c;
    for (std::size_t k = 0; k < j.size(); ++k) c.push_back(parse_rational(j[k], ctx.at(k)));
    BaseElement x(c);
    if (!ctx.deformation && !x.is_constant()) malformed(ctx, "lambda terms need the deformation base ring");
    return x;
}

FracScalar parse_scalar(const json& j, const Context& ctx) {
    if (j.is_object() && j.contains("num")) {
        const FracScalar num = parse_scalar(j["num"], ctx.at("num"));
        if (!j.contains("den")) syntax(ctx, "fraction without \"den\"");
        const BaseElement den = parse_base(j["den"], ctx.at("den"));
        if (den.is_zero()) malformed(ctx, "zero denominator");
        if (den.constant_term() == 0)
            throw Error(ErrorKind::DenominatorVanishesAtZero, ctx.path + ": denominator vanishes at lambda = 0");
        return num / FracScalar(den);
    }
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            if (it.key() != "re" && it.key() != "im") syntax(ctx, "unexpected key \"" + it.key() + "\" in a scalar");
        const BaseElement re = j.contains("re") ? parse_base(j["re"], ctx.at("re")) : BaseElement();
        const BaseElement im = j.contains("im") ? parse_base(j["im"], ctx.at("im")) : BaseElement();
        return FracScalar(Scalar(re, im));
    }
    return FracScalar(parse_base(j, ctx));
}

Vector parse_vector(const json& j, const Context& ctx, std::size_t expected_size) {
    require_array(j, ctx);
    if (j.size() != expected_size)
        syntax(ctx, "expected " + std::to_string(expected_size) + " entries, found " + std::to_string(j.size()));
    Vector v;
    for (std::size_t k = 0; k < j.size(); ++k) v.push_back(parse_scalar(j[k], ctx.at(k)));
    return v;
}

Matrix parse_matrix(const json& j, const Context& ctx, std::size_t rows, std::size_t cols) {
    require_array(j, ctx);
    if (j.size() != rows) syntax(ctx, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const Vector row = parse_vector(j[r], ctx.at(r), cols);
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
    }
    return m;
}

Matrix parse_square_matrix(const json& j, const Context& ctx) {
    require_array(j, ctx);
    return parse_matrix(j, ctx, j.size(), j.size());
}

PsdCertificate parse_certificate(const json& j, const Context& ctx, std::size_t n) {
    PsdCertificate c;
    const std::string verdict = parse_name(field(j, "verdict", ctx), ctx.at("verdict"));
    if (verdict != "positive" && verdict != "not-positive") syntax(ctx.at("verdict"), "unknown verdict");
    c.verdict = verdict == "positive" ? PsdVerdict::Positive : PsdVerdict::NotPositive;
    const json& basis = require_array(field(j, "basis", ctx), ctx.at("basis"));
    for (std::size_t k = 0; k < basis.size(); ++k) c.congruence.basis.push_back(parse_vector(basis[k], ctx.at("basis").at(k), n));
    c.congruence.diagonal = parse_vector(field(j, "diagonal", ctx), ctx.at("diagonal"), basis.size());
    if (j.contains("witness")) c.witness = parse_vector(j["witness"], ctx.at("witness"), n);
    if (j.contains("witness_value")) c.witness_value = parse_scalar(j["witness_value"], ctx.at("witness_value"));
    return c;
}

StarAlgebra parse_algebra_tables(const json& j, const Context& ctx) {
    const std::size_t n = parse_size(field(j, "dim", ctx), ctx.at("dim"));
    const json& mul = require_array(field(j, "mul", ctx), ctx.at("mul"));
    const json& star = require_array(field(j, "star", ctx), ctx.at("star"));
    if (mul.size() != n) syntax(ctx.at("mul"), "expected " + std::to_string(n) + " rows");
    std::vector<std::vector<SparseVector>> m(n, std::vector<SparseVector>(n));
    std::vector<SparseVector> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        require_array(mul[i], ctx.at("mul").at(i));
        if (mul[i].size() != n) syntax(ctx.at("mul").at(i), "expected " + std::to_string(n) + " products");
        for (std::size_t k = 0; k < n; ++k) m[i][k] = to_sparse(parse_vector(mul[i][k], ctx.at("mul").at(i).at(k), n));
    }
    if (star.size() != n) syntax(ctx.at("star"), "expected " + std::to_string(n) + " entries");
    for (std::size_t i = 0; i < n; ++i) s[i] = to_sparse(parse_vector(star[i], ctx.at("star").at(i), n));
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        const json& l = require_array(j["labels"], ctx.at("labels"));
        if (l.size() != n) syntax(ctx.at("labels"), "expected " + std::to_string(n) + " labels");
        for (std::size_t k = 0; k < n; ++k) labels.push_back(parse_name(l[k], ctx.at("labels").at(k)));
    }
    return StarAlgebra(std::move(m), std::move(s), std::move(labels));
}

const json& field(const json& j, const std::string& key, const Context& ctx) {
    if (!j.is_object()) syntax(ctx, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) syntax(ctx, "missing field \"" + key + "\"");
    return *it;
}

std::size_t parse_size(const json& j, const Context& ctx) {
    if (!j.is_number_unsigned()) syntax(ctx, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::string parse_name(const json& j, const Context& ctx) {
    if (!j.is_string()) syntax(ctx, "expected a string");
    return j.get<std::string>();
}

}  // namespace morita::cli

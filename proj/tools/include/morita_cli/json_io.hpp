#pragma once

// Exact JSON encodings. Rationals are strings "p/q" (or "p"), elements of
// Q[lambda] are arrays of rationals indexed by degree, complex values are
// {"re": ..., "im": ...} and fractions {"num": ..., "den": ...}. Vectors are
// arrays and matrices row-major nested arrays.

#include <string>

#include <json.hpp>

#include "morita/bimodule.hpp"

namespace morita::cli {

using json = nlohmann::json;

/// Parsing context: the field path used in error messages and whether
/// lambda may appear.
struct Context {
    std::string path;
    bool deformation = false;

    Context at(const std::string& key) const { return {path + "/" + key, deformation}; }
    Context at(std::size_t index) const { return {path + "/" + std::to_string(index), deformation}; }
};

json to_json(const Rational& r);
json to_json(const BaseElement& x);
json to_json(const Scalar& z);
json to_json(const FracScalar& z);
json to_json(const Vector& v);
json to_json(const Matrix& m);
json to_json(const Report& r);
json to_json(const PsdCertificate& c);
json to_json(const StarAlgebra& a);
json to_json(const Bimodule& x);  // explicit tables, algebras omitted

// All parsers throw MalformedScalar for bad numbers and SyntaxError for
// structural problems, naming ctx.path.
Rational parse_rational(const json& j, const Context& ctx);
BaseElement parse_base(const json& j, const Context& ctx);
FracScalar parse_scalar(const json& j, const Context& ctx);
Vector parse_vector(const json& j, const Context& ctx, std::size_t expected_size);
/// rows x cols, every row holding exactly `cols` entries.
Matrix parse_matrix(const json& j, const Context& ctx, std::size_t rows, std::size_t cols);
Matrix parse_square_matrix(const json& j, const Context& ctx);
PsdCertificate parse_certificate(const json& j, const Context& ctx, std::size_t n);
/// {"dim", "mul", "star", "labels"?}; throws ShapeMismatch on inconsistent tables.
StarAlgebra parse_algebra_tables(const json& j, const Context& ctx);

const json& field(const json& j, const std::string& key, const Context& ctx);
std::size_t parse_size(const json& j, const Context& ctx);
std::string parse_name(const json& j, const Context& ctx);

}  // namespace morita::cli

#pragma once

// Input documents: named algebras, functionals, modules, representations,
// bimodules and matrices.
//
//   {
//     "ring": {"base": "rational" | "deformation"},
//     "algebras": {"M2": {"kind": "matrix", "n": 2}, "T": {"dim": .., "mul": .., "star": ..}},
//     "functionals": {"omega": [scalars]},
//     "modules": {"H": {"dim": 2, "gram": matrix}},
//     "representations": {"pi": {"algebra": "M2", "module": "H", "ops": [matrix]},
//                         "def": {"kind": "defining", "algebra": "M2"},
//                         "g": {"kind": "gns", "algebra": "M2", "functional": "omega"}},
//     "bimodules": {"X": {"algB": .., "algA": .., "dim": .., "left": .., "right": ..,
//                         "innerA": .., "innerB": .., "cyclic": {"P": [..], "Q": [..]}},
//                   "F": {"kind": "free", "algebra": "C", "n": 3},
//                   "H": {"kind": "homomorphism", "algB": .., "algA": .., "phi": matrix},
//                   "K": {"kind": "corner", "q": matrix}},
//     "matrices": {"G": matrix}
//   }
//
// Algebra kinds: scalars, matrix (n), grassmann (n), null-square.

#include <map>
#include <string>

#include "morita_cli/json_io.hpp"

namespace morita::cli {

template <typename T>
struct Entry {
    json spec;  // canonical form, re-emitted by serialize_document
    T value;
};

struct Document {
    bool deformation = false;
    std::map<std::string, Entry<AlgebraRef>> algebras;
    std::map<std::string, Entry<LinearFunctional>> functionals;
    std::map<std::string, Entry<InnerProductModule>> modules;
    std::map<std::string, Entry<Representation>> representations;
    std::map<std::string, Entry<Bimodule>> bimodules;
    std::map<std::string, Entry<Matrix>> matrices;

    const AlgebraRef& algebra(const std::string& name) const;
    const LinearFunctional& functional(const std::string& name) const;
    const Representation& representation(const std::string& name) const;
    const Bimodule& bimodule(const std::string& name) const;
    const Matrix& matrix(const std::string& name) const;
};

/// Throws SyntaxError (with line and column for malformed JSON, otherwise
/// the field path), UnresolvedReference and MalformedScalar.
Document parse_document(const std::string& text);
Document parse_document(const json& j);
inline Document parse_document(const char* text) { return parse_document(std::string(text)); }
json serialize_document(const Document& doc);

/// Equality of the canonical forms.
bool operator==(const Document& a, const Document& b);

/// Every declared object against its validator: algebras by the algebra
/// axioms, modules by positivity of the Gram matrix, representations by the
/// representation checks and bimodules by table shapes and the module
/// structure of both actions. Check names are "<section>/<name>".
Report validate_document(const Document& doc);

/// Reads a file, or standard input for "-". Throws BadParams.
std::string read_text(const std::string& path);

}  // namespace morita::cli

#include "morita_cli/document.hpp"

#include "morita/rieffel.hpp"

#include <fstream>
#include <iterator>
#include <iostream>
#include <set>
#include <sstream>

namespace morita::cli {

namespace {

[[noreturn]] void syntax(const Context& ctx, const std::string& what) {
    throw Error(ErrorKind::SyntaxError, ctx.path + ": " + what);
}

template <typename T>
const T& lookup(const std::map<std::string, Entry<T>>& m, const std::string& name, const char* section) {
    const auto it = m.find(name);
    if (it == m.end()) throw Error(ErrorKind::UnresolvedReference, std::string(section) + " \"" + name + "\" is not declared");
    return it->second.value;
}

std::string reference(const Document& doc, const json& j, const Context& ctx) {
    const std::string name = parse_name(j, ctx);
    if (!doc.algebras.count(name))
        throw Error(ErrorKind::UnresolvedReference, ctx.path + ": algebra \"" + name + "\" is not declared");
    return name;
}

Entry<AlgebraRef> parse_algebra(const json& j, const Context& ctx) {
    if (!j.is_object()) syntax(ctx, "expected an object");
    if (j.contains("kind") && !j.contains("mul")) {
        const std::string kind = parse_name(j["kind"], ctx.at("kind"));
        if (kind == "scalars") return {{{"kind", kind}}, share(scalars_algebra())};
        if (kind == "null-square") return {{{"kind", kind}}, share(null_square_algebra())};
        const std::size_t n = parse_size(field(j, "n", ctx), ctx.at("n"));
        if (kind == "matrix") {
            if (n == 0) syntax(ctx.at("n"), "matrix algebras need n >= 1");
            return {{{"kind", kind}, {"n", n}}, share(matrix_algebra(n))};
        }
        if (kind == "grassmann") return {{{"kind", kind}, {"n", n}}, share(grassmann_algebra(n))};
        syntax(ctx.at("kind"), "unknown algebra kind \"" + kind + "\"");
    }
    StarAlgebra a = parse_algebra_tables(j, ctx);
    json spec = to_json(a);
    return {std::move(spec), share(std::move(a))};
}

std::vector<Matrix> parse_matrices(const json& j, const Context& ctx, std::size_t count, std::size_t dim) {
    if (!j.is_array() || j.size() != count) syntax(ctx, "expected an array of " + std::to_string(count) + " matrices");
    std::vector<Matrix> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back(parse_matrix(j[k], ctx.at(k), dim, dim));
    return out;
}

InnerTable parse_table(const json& j, const Context& ctx, std::size_t m, std::size_t d) {
    if (!j.is_array() || j.size() != m) syntax(ctx, "expected " + std::to_string(m) + " rows");
    InnerTable t(m);
    for (std::size_t p = 0; p < m; ++p) {
        if (!j[p].is_array() || j[p].size() != m) syntax(ctx.at(p), "expected " + std::to_string(m) + " entries");
        for (std::size_t q = 0; q < m; ++q) t[p].push_back(parse_vector(j[p][q], ctx.at(p).at(q), d));
    }
    return t;
}

std::vector<Vector> parse_vectors(const json& j, const Context& ctx, std::size_t n) {
    if (!j.is_array()) syntax(ctx, "expected an array of vectors");
    std::vector<Vector> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_vector(j[k], ctx.at(k), n));
    return out;
}

CyclicStructure parse_structure(const json& j, const Context& ctx, std::size_t n) {
    if (!j.is_array()) syntax(ctx, "expected an array of pieces");
    CyclicStructure s;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const Context c = ctx.at(k);
        s.pieces.push_back({parse_vectors(field(j[k], "basis", c), c.at("basis"), n),
                            parse_vectors(field(j[k], "vectors", c), c.at("vectors"), n)});
    }
    return s;
}

Entry<InnerProductModule> parse_module(const json& j, const Context& ctx) {
    const Matrix g = parse_square_matrix(field(j, "gram", ctx), ctx.at("gram"));
    if (j.contains("dim") && parse_size(j["dim"], ctx.at("dim")) != g.rows()) syntax(ctx.at("dim"), "does not match the Gram matrix");
    return {{{"dim", g.rows()}, {"gram", to_json(g)}}, InnerProductModule{g}};
}

Entry<Representation> parse_representation(const Document& doc, const json& j, const Context& ctx) {
    const std::string alg = reference(doc, field(j, "algebra", ctx), ctx.at("algebra"));
    const AlgebraRef& a = doc.algebra(alg);
    const std::string kind = j.contains("kind") ? parse_name(j["kind"], ctx.at("kind")) : "explicit";
    if (kind == "defining") return {{{"kind", kind}, {"algebra", alg}}, defining_representation(a)};
    if (kind == "gns") {
        const std::string f = parse_name(field(j, "functional", ctx), ctx.at("functional"));
        const LinearFunctional& w = doc.functional(f);
        if (w.values.size() != a->dim()) syntax(ctx.at("functional"), "functional does not match the algebra");
        return {{{"kind", kind}, {"algebra", alg}, {"functional", f}}, gns(a, w).rep};
    }
    if (kind != "explicit") syntax(ctx.at("kind"), "unknown representation kind \"" + kind + "\"");
    Entry<Representation> out;
    out.value.algebra = a;
    out.spec["algebra"] = alg;
    const json& m = field(j, "module", ctx);
    if (m.is_string()) {
        const std::string name = m.get<std::string>();
        out.value.module = lookup(doc.modules, name, "module");
        out.spec["module"] = name;
    } else {
        Entry<InnerProductModule> inline_module = parse_module(m, ctx.at("module"));
        out.value.module = inline_module.value;
        out.spec["module"] = inline_module.spec;
    }
    out.value.ops = parse_matrices(field(j, "ops", ctx), ctx.at("ops"), a->dim(), out.value.dim());
    out.spec["ops"] = json::array();
    for (const auto& op : out.value.ops) out.spec["ops"].push_back(to_json(op));
    if (j.contains("cyclic")) {
        out.value.cyclic = parse_vectors(j["cyclic"], ctx.at("cyclic"), out.value.dim());
        out.spec["cyclic"] = json::array();
        for (const auto& v : out.value.cyclic) out.spec["cyclic"].push_back(to_json(v));
    }
    return out;
}

Entry<Bimodule> parse_bimodule(const Document& doc, const json& j, const Context& ctx) {
    if (!j.is_object()) syntax(ctx, "expected an object");
    const std::string kind = j.contains("kind") ? parse_name(j["kind"], ctx.at("kind")) : "explicit";
    if (kind == "free") {
        const std::string alg = reference(doc, field(j, "algebra", ctx), ctx.at("algebra"));
        const std::size_t n = parse_size(field(j, "n", ctx), ctx.at("n"));
        return {{{"kind", kind}, {"algebra", alg}, {"n", n}}, free_module_bimodule(doc.algebra(alg), n)};
    }
    if (kind == "homomorphism") {
        const std::string b = reference(doc, field(j, "algB", ctx), ctx.at("algB"));
        const std::string a = reference(doc, field(j, "algA", ctx), ctx.at("algA"));
        const Matrix phi = parse_matrix(field(j, "phi", ctx), ctx.at("phi"), doc.algebra(a)->dim(), doc.algebra(b)->dim());
        return {{{"kind", kind}, {"algB", b}, {"algA", a}, {"phi", to_json(phi)}},
                homomorphism_bimodule(doc.algebra(b), doc.algebra(a), phi)};
    }
    if (kind == "corner") {
        const Matrix q = parse_square_matrix(field(j, "q", ctx), ctx.at("q"));
        return {{{"kind", kind}, {"q", to_json(q)}}, corner_bimodule(q).bimodule};
    }
    if (kind == "functional") {
        const std::string alg = reference(doc, field(j, "algebra", ctx), ctx.at("algebra"));
        const std::string f = parse_name(field(j, "functional", ctx), ctx.at("functional"));
        const LinearFunctional& w = doc.functional(f);
        if (w.values.size() != doc.algebra(alg)->dim()) syntax(ctx.at("functional"), "functional does not match the algebra");
        return {{{"kind", kind}, {"algebra", alg}, {"functional", f}}, functional_bimodule(doc.algebra(alg), w)};
    }
    if (kind != "explicit") syntax(ctx.at("kind"), "unknown bimodule kind \"" + kind + "\"");

    Entry<Bimodule> out;
    Bimodule& x = out.value;
    const std::string b = reference(doc, field(j, "algB", ctx), ctx.at("algB"));
    const std::string a = reference(doc, field(j, "algA", ctx), ctx.at("algA"));
    x.algebra_b = doc.algebra(b);
    x.algebra_a = doc.algebra(a);
    x.dim = parse_size(field(j, "dim", ctx), ctx.at("dim"));
    x.left = parse_matrices(field(j, "left", ctx), ctx.at("left"), x.algebra_b->dim(), x.dim);
    x.right = parse_matrices(field(j, "right", ctx), ctx.at("right"), x.algebra_a->dim(), x.dim);
    x.inner_a = parse_table(field(j, "innerA", ctx), ctx.at("innerA"), x.dim, x.algebra_a->dim());
    if (j.contains("innerB")) x.inner_b = parse_table(j["innerB"], ctx.at("innerB"), x.dim, x.algebra_b->dim());
    if (j.contains("cyclic")) {
        const json& c = j["cyclic"];
        if (c.contains("P")) x.p_structure = parse_structure(c["P"], ctx.at("cyclic").at("P"), x.dim);
        if (c.contains("Q")) x.q_structure = parse_structure(c["Q"], ctx.at("cyclic").at("Q"), x.dim);
    }
    out.spec = to_json(x);
    out.spec["algB"] = b;
    out.spec["algA"] = a;
    return out;
}

template <typename F>
void each(const json& root, const char* section, const Context& ctx, F&& f) {
    if (!root.contains(section)) return;
    const json& s = root[section];
    if (!s.is_object()) syntax(ctx.at(section), "expected an object of named entries");
    for (auto it = s.begin(); it != s.end(); ++it) f(it.key(), it.value(), ctx.at(section).at(it.key()));
}

}  // namespace

const AlgebraRef& Document::algebra(const std::string& name) const { return lookup(algebras, name, "algebra"); }
const LinearFunctional& Document::functional(const std::string& name) const {
    return lookup(functionals, name, "functional");
}
const Representation& Document::representation(const std::string& name) const {
    return lookup(representations, name, "representation");
}
const Bimodule& Document::bimodule(const std::string& name) const { return lookup(bimodules, name, "bimodule"); }
const Matrix& Document::matrix(const std::string& name) const { return lookup(matrices, name, "matrix"); }

Document parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                                ": malformed JSON");
    }
    return parse_document(j);
}

Document parse_document(const json& j) {
    Context ctx;
    if (!j.is_object()) syntax(ctx, "a document is a JSON object");
    static const std::set<std::string> sections = {"ring",    "algebras",        "functionals", "modules",
                                                   "matrices", "representations", "bimodules"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!sections.count(it.key())) syntax(ctx, "unknown section \"" + it.key() + "\"");

    Document doc;
    if (j.contains("ring")) {
        const std::string base = parse_name(field(j["ring"], "base", ctx.at("ring")), ctx.at("ring").at("base"));
        if (base != "rational" && base != "deformation") syntax(ctx.at("ring").at("base"), "expected rational or deformation");
        doc.deformation = base == "deformation";
    }
    ctx.deformation = doc.deformation;

    each(j, "algebras", ctx, [&](const std::string& name, const json& v, const Context& c) {
        doc.algebras.emplace(name, parse_algebra(v, c));
    });
    each(j, "functionals", ctx, [&](const std::string& name, const json& v, const Context& c) {
        if (!v.is_array()) syntax(c, "a functional is an array of scalars");
        LinearFunctional w{parse_vector(v, c, v.size())};
        doc.functionals.emplace(name, Entry<LinearFunctional>{to_json(w.values), std::move(w)});
    });
    each(j, "modules", ctx, [&](const std::string& name, const json& v, const Context& c) {
        doc.modules.emplace(name, parse_module(v, c));
    });
    each(j, "matrices", ctx, [&](const std::string& name, const json& v, const Context& c) {
        if (!v.is_array()) syntax(c, "a matrix is an array of rows");
        const std::size_t cols = v.empty() || !v[0].is_array() ? 0 : v[0].size();
        Matrix m = parse_matrix(v, c, v.size(), cols);
        doc.matrices.emplace(name, Entry<Matrix>{to_json(m), std::move(m)});
    });
    each(j, "representations", ctx, [&](const std::string& name, const json& v, const Context& c) {
        doc.representations.emplace(name, parse_representation(doc, v, c));
    });
    each(j, "bimodules", ctx, [&](const std::string& name, const json& v, const Context& c) {
        doc.bimodules.emplace(name, parse_bimodule(doc, v, c));
    });
    return doc;
}

json serialize_document(const Document& doc) {
    json out;
    out["ring"] = {{"base", doc.deformation ? "deformation" : "rational"}};
    auto section = [&](const char* key, const auto& entries) {
        if (entries.empty()) return;
        json s = json::object();
        for (const auto& [name, e] : entries) s[name] = e.spec;
        out[key] = std::move(s);
    };
    section("algebras", doc.algebras);
    section("functionals", doc.functionals);
    section("modules", doc.modules);
    section("matrices", doc.matrices);
    section("representations", doc.representations);
    section("bimodules", doc.bimodules);
    return out;
}

bool operator==(const Document& a, const Document& b) { return serialize_document(a) == serialize_document(b); }

Report validate_document(const Document& doc) {
    Report r;
    for (const auto& [name, e] : doc.algebras) {
        const Report a = validate_algebra(*e.value);
        const Check* f = a.first_failure();
        r.add("algebras/" + name, f == nullptr, f ? f->name + ": " + f->detail : "");
    }
    for (const auto& [name, e] : doc.modules) {
        std::string detail;
        if (!e.value.gram.is_hermitian()) detail = "Gram matrix is not Hermitian";
        else if (!psd_decide(e.value.gram).positive()) detail = "Gram matrix is not positive semi-definite";
        r.add("modules/" + name, detail.empty(), detail);
    }
    for (const auto& [name, e] : doc.representations) {
        const RepresentationReport v = validate_representation(e.value);
        const Check* f = v.checks.first_failure();
        r.add("representations/" + name, f == nullptr, f ? f->name + ": " + f->detail : "");
    }
    static const std::set<std::string> structural = {"shape",       "algebra-B",    "algebra-A",
                                                     "left-module", "right-module", "commuting-actions"};
    for (const auto& [name, e] : doc.bimodules) {
        ValidationOptions opts;
        opts.search_cyclic = false;
        const Report v = validate_bimodule(e.value, ValidationLevel::Rigged, opts);
        std::string detail;
        for (const auto& c : v.checks)
            if (structural.count(c.name) && !c.passed) {
                detail = c.name + ": " + c.detail;
                break;
            }
        r.add("bimodules/" + name, detail.empty(), detail);
    }
    return r;
}

std::string read_text(const std::string& path) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::BadParams, "cannot read \"" + path + "\"");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace morita::cli

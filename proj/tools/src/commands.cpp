#include "morita_cli/commands.hpp"

#include <functional>
#include <map>
#include <random>
#include <set>

#include "morita/classical_limit.hpp"

namespace morita::cli {

namespace {

struct Outcome {
    int exit_code = 0;
    std::string summary;
    json result = json::object();
    std::optional<json> certificate;
    std::string failure;  // stable name of the failed property, for exit code 1
};

Outcome verdict(bool ok, std::string summary, json result, std::string failure = {}) {
    Outcome o;
    o.exit_code = ok ? 0 : 1;
    o.summary = std::move(summary);
    o.result = std::move(result);
    if (!ok) o.failure = std::move(failure);
    return o;
}

json matrices(const std::vector<Matrix>& ms) {
    json out = json::array();
    for (const auto& m : ms) out.push_back(to_json(m));
    return out;
}

json vectors(const std::vector<Vector>& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back(to_json(v));
    return out;
}

json psd_certificate(const Matrix& m, const PsdCertificate& c) {
    return {{"type", "psd"}, {"matrix", to_json(m)}, {"certificate", to_json(c)}};
}

json limit_map(const LimitMap& m) {
    return {{"projection", to_json(m.map.projection)}, {"section", to_json(m.map.section)}, {"radical", vectors(m.map.subspace)}};
}

json representation_json(const Representation& r) {
    return {{"dim", r.dim()}, {"gram", to_json(r.module.gram)}, {"ops", matrices(r.ops)}};
}

std::string first_failure(const Report& r) {
    const Check* f = r.first_failure();
    return f ? f->name : "";
}

std::size_t pass_count(const Report& r) {
    std::size_t n = 0;
    for (const auto& c : r.checks) n += c.passed ? 1 : 0;
    return n;
}

std::string tally(const Report& r) {
    return std::to_string(pass_count(r)) + "/" + std::to_string(r.checks.size()) + " checks passed";
}

const Document& need(const std::optional<Document>& doc, const std::string& command) {
    if (!doc) throw Error(ErrorKind::BadParams, command + " needs a document (--doc)");
    return *doc;
}

void arity(const std::vector<std::string>& args, std::size_t n, const std::string& usage) {
    if (args.size() != n) throw Error(ErrorKind::BadParams, "usage: " + usage);
}

Matrix resolve_matrix(const std::optional<Document>& doc, const std::string& arg) {
    if (!arg.empty() && arg.front() == '[') {
        json j;
        try {
            j = json::parse(arg);
        } catch (const json::parse_error&) {
            throw Error(ErrorKind::SyntaxError, "inline matrix is not valid JSON");
        }
        return parse_square_matrix(j, Context{"/matrix", doc ? doc->deformation : true});
    }
    return need(doc, "psd").matrix(arg);
}

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_validate(const Document& doc) {
    const Report r = validate_document(doc);
    return verdict(r.ok(), tally(r), {{"checks", to_json(r)}}, first_failure(r));
}

Outcome cmd_psd(const std::optional<Document>& doc, const std::vector<std::string>& args, const CommandOptions& opt) {
    arity(args, 1, "psd <matrix>");
    const Matrix m = resolve_matrix(doc, args[0]);
    const PsdCertificate c = psd_decide(m);
    json result = {{"dim", m.rows()}, {"verdict", c.positive() ? "positive" : "not-positive"},
                   {"certificate", to_json(c)}, {"replayed", replay(c, m)}};
    if (c.positive() && opt.samples > 0) {
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<long> coef(-5, 5);
        std::size_t negative = 0;
        for (std::size_t t = 0; t < opt.samples; ++t) {
            Vector v(m.rows());
            for (auto& z : v) z = FracScalar(Scalar(BaseElement(coef(rng)), BaseElement(coef(rng))));
            if (inner(v, m, v).real_part().sign() < 0) ++negative;
        }
        result["samples"] = opt.samples;
        result["sampled_negative"] = negative;
    }
    Outcome o = verdict(c.positive(), c.positive() ? "positive semi-definite" : "not positive semi-definite, witness found",
                        std::move(result), "not-positive");
    if (!c.positive()) o.certificate = psd_certificate(m, c);
    return o;
}

Outcome cmd_gns(const Document& doc, const std::vector<std::string>& args) {
    arity(args, 2, "gns <algebra> <functional>");
    const AlgebraRef& a = doc.algebra(args[0]);
    const LinearFunctional& w = doc.functional(args[1]);
    if (w.values.size() != a->dim()) throw Error(ErrorKind::BadParams, "functional does not match the algebra");
    const PsdCertificate pos = functional_positivity(*a, w);
    if (!pos.positive()) {
        Outcome o = verdict(false, "functional is not positive", {{"positivity", to_json(pos)}}, "NotPositiveFunctional");
        o.certificate = psd_certificate(functional_gram(*a, w), pos);
        return o;
    }
    const GnsResult g = gns(a, w);
    json result = representation_json(g.rep);
    result["gelfand"] = vectors(g.gelfand);
    result["class_map"] = to_json(g.class_map);
    if (g.vacuum) result["vacuum"] = to_json(*g.vacuum);
    return verdict(true, "GNS space of dimension " + std::to_string(g.rep.dim()), std::move(result));
}

Outcome cmd_induce(const Document& doc, const std::vector<std::string>& args) {
    arity(args, 2, "induce <bimodule> <representation>");
    const InductionResult ind = induce(doc.bimodule(args[0]), doc.representation(args[1]));
    json result = representation_json(ind.rep);
    result["tensor_dim"] = ind.tensor_dim;
    result["balanced_dim"] = ind.balanced.dim();
    result["positivity"] = to_json(ind.certificate);
    result["validation"] = to_json(ind.validation.checks);
    result["strongly_non_degenerate"] = ind.validation.strongly_non_degenerate;
    return verdict(true,
                   "induced representation of dimension " + std::to_string(ind.rep.dim()) + " (tensor " +
                       std::to_string(ind.tensor_dim) + ", balanced " + std::to_string(ind.balanced.dim()) + ")",
                   std::move(result));
}

Outcome cmd_verify(const Document& doc, const std::vector<std::string>& args, const CommandOptions& opt) {
    arity(args, 1, "verify-bimodule <bimodule> [--level rigged|equivalence]");
    if (opt.level != "rigged" && opt.level != "equivalence")
        throw Error(ErrorKind::BadParams, "level must be rigged or equivalence");
    const ValidationLevel level = opt.level == "rigged" ? ValidationLevel::Rigged : ValidationLevel::Equivalence;
    const Report r = validate_bimodule(doc.bimodule(args[0]), level);
    return verdict(r.ok(), std::string(to_string(level)) + " validation: " + tally(r),
                   {{"level", to_string(level)}, {"checks", to_json(r)}}, first_failure(r));
}

Outcome cmd_roundtrip(const Document& doc, const std::vector<std::string>& args) {
    arity(args, 2, "roundtrip <bimodule> <representation>");
    const RoundTrip rt = roundtrip_unitary(doc.bimodule(args[0]), doc.representation(args[1]));
    json result = {{"first_dim", rt.first.rep.dim()},
                   {"second_dim", rt.second.rep.dim()},
                   {"map", to_json(rt.unitary.map)},
                   {"isometric", rt.unitary.isometric},
                   {"unitary", rt.unitary.unitary}};
    return verdict(rt.unitary.unitary, rt.unitary.unitary ? "round trip is unitarily equivalent" : "round trip map is not unitary",
                   std::move(result), "not-unitary");
}

Outcome cmd_context(const Document& doc, const std::vector<std::string>& args) {
    arity(args, 1, "context <bimodule>");
    const Bimodule& x = doc.bimodule(args[0]);
    const Report r = morita_context_check(x);
    json result = {{"checks", to_json(r)}};
    if (!r.ok()) return verdict(false, "Morita context: " + tally(r), std::move(result), first_failure(r));
    const CenterIsomorphism z = center_isomorphism(x);
    result["center"] = {{"dim_a", z.center_a.size()},
                        {"dim_b", z.center_b.size()},
                        {"basis_a", vectors(z.center_a)},
                        {"phi", to_json(z.phi)},
                        {"checks", to_json(z.checks)}};
    return verdict(z.checks.ok(), "Morita context verified, centers of dimension " + std::to_string(z.center_a.size()),
                   std::move(result), first_failure(z.checks));
}

Outcome cmd_classical_limit(const Document& doc, const std::vector<std::string>& args) {
    arity(args, 1, "classical-limit <object>");
    const std::string& name = args[0];
    if (doc.bimodules.count(name)) {
        const ClassicalBimodule c = cl_bimodule(doc.bimodule(name));
        json limit = to_json(c.bimodule);
        json result = {{"kind", "bimodule"},
                       {"limit", std::move(limit)},
                       {"limit_map", {{"projection", to_json(c.map.projection)}, {"section", to_json(c.map.section)}, {"radical", vectors(c.radical_a)}}},
                       {"validation", to_json(c.validation)}};
        if (c.radicals_agree) {
            result["radical_b"] = vectors(c.radical_b);
            result["radicals_agree"] = *c.radicals_agree;
        }
        return verdict(c.validation.ok(), "classical limit of dimension " + std::to_string(c.bimodule.dim) + ", " + tally(c.validation),
                       std::move(result), first_failure(c.validation));
    }
    if (doc.representations.count(name)) {
        const ClassicalRepresentation c = cl_representation(doc.representation(name));
        json result = {{"kind", "representation"},
                       {"limit", representation_json(c.rep)},
                       {"limit_map", limit_map(c.limit)},
                       {"validation", to_json(c.validation.checks)},
                       {"strongly_non_degenerate", c.validation.strongly_non_degenerate}};
        return verdict(c.validation.checks.ok(), "classical limit of dimension " + std::to_string(c.rep.dim()),
                       std::move(result), first_failure(c.validation.checks));
    }
    if (doc.modules.count(name)) {
        const LimitMap m = cl_prehilbert(doc.modules.at(name).value);
        return verdict(true, "classical limit of dimension " + std::to_string(m.dim()),
                       {{"kind", "module"}, {"limit", {{"dim", m.dim()}, {"gram", to_json(m.target.gram)}}}, {"limit_map", limit_map(m)}});
    }
    if (doc.algebras.count(name)) {
        const StarAlgebra a = classical_limit_algebra(*doc.algebra(name));
        const Report r = validate_algebra(a);
        return verdict(r.ok(), "classical limit algebra of dimension " + std::to_string(a.dim()),
                       {{"kind", "algebra"}, {"limit", to_json(a)}, {"validation", to_json(r)}}, first_failure(r));
    }
    if (doc.functionals.count(name))
        return verdict(true, "classical limit functional",
                       {{"kind", "functional"}, {"limit", to_json(classical_limit_functional(doc.functional(name)).values)}});
    throw Error(ErrorKind::UnresolvedReference, "no object named \"" + name + "\"");
}

Outcome cmd_naturality(const Document& doc, const std::vector<std::string>& args) {
    arity(args, 2, "naturality <bimodule> <representation>");
    const Naturality n = naturality_check(doc.bimodule(args[0]), doc.representation(args[1]));
    const bool ok = n.well_defined && n.intertwines && n.unitary.unitary;
    json result = {{"deformed_dim", n.deformed.rep.dim()},
                   {"limit_dim", n.induced_limit.rep.dim()},
                   {"classical_dim", n.classical.rep.dim()},
                   {"map", to_json(n.map)},
                   {"well_defined", n.well_defined},
                   {"intertwines", n.intertwines},
                   {"unitary", n.unitary.unitary}};
    return verdict(ok, ok ? "induction commutes with the classical limit" : "naturality map not certified",
                   std::move(result), "not-natural");
}

// ---------------------------------------------------------------------------
// Demos

Outcome demo_cn_mn(const CommandOptions& opt) {
    const std::size_t n = opt.n.value_or(2);
    const Bimodule x = free_module_bimodule(share(scalars_algebra()), n);
    const Report r = validate_bimodule(x, ValidationLevel::Equivalence);
    return verdict(r.ok(), "C and M_" + std::to_string(n) + " via C^" + std::to_string(n) + ": " + tally(r),
                   {{"n", n}, {"checks", to_json(r)}}, first_failure(r));
}

Outcome demo_amplification(const CommandOptions& opt) {
    const std::size_t n = opt.n.value_or(2);
    const Bimodule x = free_module_bimodule(share(matrix_algebra(2)), n);
    const Report r = validate_bimodule(x, ValidationLevel::Equivalence);
    return verdict(r.ok(), "M_2 and M_" + std::to_string(n) + "(M_2): " + tally(r),
                   {{"n", n}, {"module_dim", x.dim}, {"checks", to_json(r)}}, first_failure(r));
}

Outcome demo_grassmann(const CommandOptions& opt) {
    const std::size_t n = opt.n.value_or(1);
    const StarAlgebra g = grassmann_algebra(n);
    const auto cert = nilpotent_normal_scan(g);
    json result = {{"n", n}, {"dim", g.dim()}};
    if (n == 1) {
        json cands = json::array();
        for (const auto& x : grassmann_candidates()) {
            const Report r = validate_bimodule(x, ValidationLevel::Equivalence);
            cands.push_back({{"passes", r.ok()}, {"first_failure", first_failure(r)}});
        }
        result["candidates"] = std::move(cands);
    }
    if (!cert) return verdict(true, "no normal nilpotent element found", std::move(result));
    result["nilpotent"] = {{"element", to_json(cert->element)}, {"exponent", cert->exponent}};
    Outcome o = verdict(false,
                        "refused: grassmann(" + std::to_string(n) + ") contains a normal nilpotent with h^" +
                            std::to_string(cert->exponent) + " = 0",
                        std::move(result), "nilpotent");
    o.certificate = json{{"type", "nilpotent"}, {"algebra", to_json(g)}, {"element", to_json(cert->element)},
                         {"exponent", cert->exponent}};
    return o;
}

Outcome demo_corner(const CommandOptions& opt) {
    const std::size_t n = opt.n.value_or(3), k = opt.k.value_or(2);
    if (k == 0 || k > n) throw Error(ErrorKind::BadParams, "corner demo needs 1 <= k <= n");
    Vector d(n);
    for (std::size_t i = 0; i < k; ++i) d[i] = FracScalar(1);
    const CornerBimodule c = corner_bimodule(Matrix::diagonal(d));
    const Report r = validate_bimodule(c.bimodule, ValidationLevel::Equivalence);
    const bool ok = r.ok() && same_structure(*c.corner, matrix_algebra(k));
    return verdict(ok, "M_" + std::to_string(k) + " and M_" + std::to_string(n) + " via a full corner: " + tally(r),
                   {{"n", n}, {"k", k}, {"corner_dim", c.corner->dim()}, {"module_dim", c.bimodule.dim},
                    {"fullness_rank", c.fullness_rank}, {"checks", to_json(r)}},
                   first_failure(r));
}

Outcome demo_gns_rank(const CommandOptions& opt) {
    const std::size_t n = opt.n.value_or(2), k = opt.k.value_or(1);
    if (k > n) throw Error(ErrorKind::BadParams, "gns-rank demo needs k <= n");
    auto a = share(matrix_algebra(n));
    Vector d(n);
    for (std::size_t i = 0; i < k; ++i) d[i] = FracScalar(1);
    const GnsResult g = gns(a, density_functional(*a, Matrix::diagonal(d)));
    const std::vector<Representation> copies(k, defining_representation(a));
    const Representation sum = k == 0 ? zero_representation(a) : direct_sum(copies);
    const IntertwinerSpace s = intertwiners(g.rep, sum, opt.seed);
    const bool ok = g.rep.dim() == n * k && s.status == UnitaryStatus::Found;
    json result = {{"n", n}, {"k", k}, {"dim", g.rep.dim()}, {"expected_dim", n * k}, {"unitary_search", to_string(s.status)}};
    if (s.unitary) result["unitary"] = to_json(s.unitary->map);
    return verdict(ok, "GNS space of dimension " + std::to_string(g.rep.dim()) + ", unitary search " + std::string(to_string(s.status)),
                   std::move(result), "gns-dimension");
}

Outcome demo_cayley(const CommandOptions&) {
    auto m2 = share(matrix_algebra(2));
    const DeformedHomomorphism h = deformed_homomorphism_bimodule(m2, m2, conjugation_map(cayley_rotation()));
    const Naturality n = naturality_check(h.deformed, defining_representation(m2));
    const bool ok = h.comparison.ok() && n.well_defined && n.intertwines && n.unitary.unitary;
    return verdict(ok, ok ? "deformed rotation bimodule: limit comparison and naturality certified" : "naturality not certified",
                   {{"phi", to_json(conjugation_map(cayley_rotation()))},
                    {"comparison", to_json(h.comparison)},
                    {"map", to_json(n.map)},
                    {"unitary", n.unitary.unitary}},
                   "not-natural");
}

Outcome demo_lift(const CommandOptions&) {
    // e e = -lambda: omega(1) = 1, omega(e) = 0 is positive once lambda = 0,
    // but omega(e^* e) = -lambda < 0 for the constant lift.
    const StarAlgebra a = square_root_algebra(-FracScalar::lambda());
    const LinearFunctional w{{FracScalar(1), FracScalar(0)}};
    const PositiveLift lift = positive_lift_check(a, w);
    json result = {{"algebra", to_json(a)}, {"functional", to_json(w.values)}, {"status", to_string(lift.status)}};
    Outcome o = verdict(lift.status == LiftStatus::Lifted, "constant lift: " + std::string(to_string(lift.status)),
                        std::move(result), std::string(to_string(lift.status)));
    if (lift.status == LiftStatus::PreconditionFailed)
        o.certificate = psd_certificate(functional_gram(classical_limit_algebra(a), w), lift.classical);
    else if (lift.status == LiftStatus::ConstantLiftFails)
        o.certificate = psd_certificate(functional_gram(a, w), *lift.deformed);
    return o;
}

const std::map<std::string, std::function<Outcome(const CommandOptions&)>>& demos() {
    static const std::map<std::string, std::function<Outcome(const CommandOptions&)>> table = {
        {"cn-mn", demo_cn_mn},           {"amplification", demo_amplification}, {"grassmann-refusal", demo_grassmann},
        {"corner", demo_corner},         {"gns-rank", demo_gns_rank},           {"cayley-naturality", demo_cayley},
        {"lift-counterexample", demo_lift}};
    return table;
}

Outcome cmd_demo(const std::vector<std::string>& args, const CommandOptions& opt) {
    arity(args, 1, "demo <name>");
    const auto it = demos().find(args[0]);
    if (it == demos().end()) throw Error(ErrorKind::BadParams, "unknown demo \"" + args[0] + "\"");
    return it->second(opt);
}

bool property_failure(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotPsd:
        case ErrorKind::NotPositiveFunctional:
        case ErrorKind::PositivityViolated:
        case ErrorKind::NotStronglyNonDegenerate:
        case ErrorKind::NotFull:
        case ErrorKind::NotProjection:
        case ErrorKind::NotStarHomomorphism:
        case ErrorKind::ContextConditionFailed:
        case ErrorKind::NotUnital:
        case ErrorKind::NoIdentityStructure:
        case ErrorKind::DegenerateRiggedModule:
        case ErrorKind::MissingCyclicWitness:
        case ErrorKind::NotIntertwiner:
        case ErrorKind::NotInCommutant:
        case ErrorKind::NotAdjointable:
        case ErrorKind::InvalidBimodule:
        case ErrorKind::DegenerateModule:
        case ErrorKind::InvalidWitness:
            return true;
        default:
            return false;
    }
}

Outcome dispatch(const std::optional<Document>& doc, const std::string& command, const std::vector<std::string>& args,
                 const CommandOptions& opt) {
    if (command == "validate") {
        arity(args, 0, "validate");
        return cmd_validate(need(doc, command));
    }
    if (command == "psd") return cmd_psd(doc, args, opt);
    if (command == "demo") return cmd_demo(args, opt);
    if (command == "gns" || command == "induce" || command == "verify-bimodule" || command == "roundtrip" ||
        command == "context" || command == "classical-limit" || command == "naturality") {
        const Document& d = need(doc, command);
        const Report v = validate_document(d);
        if (!v.ok()) {
            const Check* f = v.first_failure();
            Outcome o;
            o.exit_code = 2;
            o.summary = "document object " + f->name + " is invalid: " + f->detail;
            o.result = {{"validation", to_json(v)}};
            return o;
        }
        if (command == "gns") return cmd_gns(d, args);
        if (command == "induce") return cmd_induce(d, args);
        if (command == "verify-bimodule") return cmd_verify(d, args, opt);
        if (command == "roundtrip") return cmd_roundtrip(d, args);
        if (command == "context") return cmd_context(d, args);
        if (command == "classical-limit") return cmd_classical_limit(d, args);
        return cmd_naturality(d, args);
    }
    throw Error(ErrorKind::UnknownCommand, "unknown command \"" + command + "\"");
}

json recheck(const std::optional<Document>& doc, const std::string& command, const std::vector<std::string>& args,
             const CommandOptions& opt, const std::string& failure) {
    json options = {{"seed", opt.seed}, {"level", opt.level}, {"samples", opt.samples}};
    if (opt.n) options["n"] = *opt.n;
    if (opt.k) options["k"] = *opt.k;
    return {{"type", "recheck"},
            {"command", command},
            {"args", args},
            {"options", std::move(options)},
            {"document", doc ? serialize_document(*doc) : json()},
            {"failure", failure}};
}

}  // namespace

std::vector<Bimodule> grassmann_candidates() {
    auto c = share(scalars_algebra());
    auto g1 = share(grassmann_algebra(1));
    const FracScalar one(1), zero;
    std::vector<Bimodule> out;

    // C with e acting by zero and <1,1> = 1: not full.
    Bimodule a;
    a.algebra_b = c;
    a.algebra_a = g1;
    a.dim = 1;
    a.left = {Matrix::identity(1)};
    a.right = {Matrix::identity(1), Matrix(1, 1)};
    a.inner_a = {{{one, zero}}};
    a.inner_b = InnerTable{{{one}}};
    out.push_back(a);

    Bimodule b = a;
    b.inner_a = {{{one, one}}};
    out.push_back(b);

    // The algebra itself with <x,y> = x^* y.
    Bimodule d;
    d.algebra_b = c;
    d.algebra_a = g1;
    d.dim = 2;
    d.left = {Matrix::identity(2)};
    for (std::size_t k = 0; k < 2; ++k) d.right.push_back(g1->right_multiplication(g1->basis(k)));
    d.inner_a.assign(2, std::vector<Vector>(2));
    for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t q = 0; q < 2; ++q) d.inner_a[p][q] = g1->multiply(g1->star(g1->basis(p)), g1->basis(q));
    d.inner_b = InnerTable{{{one}, {zero}}, {{zero}, {one}}};
    out.push_back(d);

    Bimodule e = d;
    e.inner_b = InnerTable{{{one}, {zero}}, {{zero}, {zero}}};
    out.push_back(e);
    return out;
}

CommandOutput run_command(const std::optional<Document>& doc, const std::string& command,
                          const std::vector<std::string>& args, const CommandOptions& options) {
    json report = {{"command", command}, {"args", args}, {"seed", options.seed}};
    Outcome o;
    try {
        o = dispatch(doc, command, args, options);
        if (o.exit_code == 1 && !o.certificate) o.certificate = recheck(doc, command, args, options, o.failure);
    } catch (const Error& e) {
        const std::string kind(to_string(e.kind()));
        report["error"] = {{"kind", kind}, {"message", e.what()}};
        if (property_failure(e.kind())) {
            o.exit_code = 1;
            o.failure = kind;
            o.summary = e.what();
            o.certificate = recheck(doc, command, args, options, kind);
        } else {
            o.exit_code = 2;
            o.summary = e.what();
        }
    }
    report["exit_code"] = o.exit_code;
    report["status"] = o.exit_code == 0 ? "verified" : o.exit_code == 1 ? "failed" : "input-error";
    report["summary"] = o.summary;
    if (!o.result.empty()) report["result"] = std::move(o.result);
    if (o.exit_code == 1) {
        report["failure"] = o.failure;
        report["certificate"] = *o.certificate;
    }
    return {o.exit_code, std::move(report)};
}

CommandOutput check_certificate(const json& input) {
    json report = {{"command", "check-certificate"}};
    auto finish = [&](int code, const std::string& summary) {
        report["exit_code"] = code;
        report["status"] = code == 0 ? "verified" : code == 1 ? "failed" : "input-error";
        report["summary"] = summary;
        return CommandOutput{code, report};
    };
    try {
        const json& cert = input.contains("certificate") ? input["certificate"] : input;
        const Context ctx{"/certificate", true};
        const std::string type = parse_name(field(cert, "type", ctx), ctx.at("type"));
        report["type"] = type;
        if (type == "psd") {
            const Matrix m = parse_square_matrix(field(cert, "matrix", ctx), ctx.at("matrix"));
            const PsdCertificate c = parse_certificate(field(cert, "certificate", ctx), ctx.at("certificate"), m.rows());
            const bool ok = replay(c, m);
            return finish(ok ? 0 : 1, ok ? std::string("certificate replays: ") + (c.positive() ? "positive" : "not positive")
                                         : "certificate does not replay");
        }
        if (type == "nilpotent") {
            const StarAlgebra a = parse_algebra_tables(field(cert, "algebra", ctx), ctx.at("algebra"));
            NilpotentCertificate c;
            c.element = parse_vector(field(cert, "element", ctx), ctx.at("element"), a.dim());
            c.exponent = parse_size(field(cert, "exponent", ctx), ctx.at("exponent"));
            const bool ok = verify_nilpotent(a, c);
            return finish(ok ? 0 : 1, ok ? "normal nilpotent verified" : "element is not a normal nilpotent of that exponent");
        }
        if (type == "recheck") {
            std::optional<Document> doc;
            if (!field(cert, "document", ctx).is_null()) doc = parse_document(cert["document"]);
            const json& o = field(cert, "options", ctx);
            CommandOptions opt;
            opt.seed = o.value("seed", std::uint64_t{0});
            opt.level = o.value("level", std::string("equivalence"));
            opt.samples = o.value("samples", std::size_t{0});
            if (o.contains("n")) opt.n = o["n"].get<std::size_t>();
            if (o.contains("k")) opt.k = o["k"].get<std::size_t>();
            const std::string command = parse_name(field(cert, "command", ctx), ctx.at("command"));
            const std::vector<std::string> args = field(cert, "args", ctx).get<std::vector<std::string>>();
            const std::string failure = parse_name(field(cert, "failure", ctx), ctx.at("failure"));
            const CommandOutput rerun = run_command(doc, command, args, opt);
            const bool ok = rerun.exit_code == 1 && rerun.report.value("failure", std::string()) == failure;
            return finish(ok ? 0 : 1, ok ? "rerun reproduces the failure " + failure : "rerun does not reproduce the failure");
        }
        return finish(2, "unknown certificate type \"" + type + "\"");
    } catch (const Error& e) {
        report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        return finish(2, e.what());
    } catch (const json::exception& e) {
        report["error"] = {{"kind", "SyntaxError"}, {"message", e.what()}};
        return finish(2, e.what());
    }
}

std::string summary_text(const json& report) {
    return report.value("command", std::string("?")) + ": " + report.value("status", std::string("?")) + ": " +
           report.value("summary", std::string());
}

std::vector<std::string> command_names() {
    return {"validate", "psd",        "gns",        "induce", "verify-bimodule", "roundtrip",
            "context",  "classical-limit", "naturality", "demo",   "check-certificate"};
}

std::vector<std::string> demo_names() {
    std::vector<std::string> out;
    for (const auto& [name, f] : demos()) out.push_back(name);
    return out;
}

}  // namespace morita::cli

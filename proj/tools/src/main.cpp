#include <iostream>

#include <CLI11.hpp>

#include "morita_cli/commands.hpp"

using namespace morita;
using namespace morita::cli;

namespace {

int emit(const CommandOutput& out, bool summary_only, bool quiet) {
    if (summary_only) {
        std::cout << summary_text(out.report) << "\n";
    } else {
        std::cout << out.report.dump(2) << "\n";
        if (!quiet) std::cerr << summary_text(out.report) << "\n";
    }
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification of Morita equivalence data for finite-dimensional *-algebras"};
    std::string doc_path, command;
    std::vector<std::string> args;
    CommandOptions opt;
    bool summary_only = false, quiet = false;
    std::size_t n = 0, k = 0;

    app.add_option("-d,--doc", doc_path, "Input document (JSON), - for standard input");
    app.add_option("--seed", opt.seed, "Seed for randomized searches and sampling")->default_val(0);
    app.add_option("--level", opt.level, "verify-bimodule level: rigged or equivalence")->default_val("equivalence");
    auto* n_opt = app.add_option("--n", n, "Size parameter for demos");
    auto* k_opt = app.add_option("--k", k, "Rank parameter for demos");
    app.add_option("--samples", opt.samples, "psd: random vectors tried against a positive verdict");
    app.add_flag("--summary", summary_only, "Print only the one-line summary");
    app.add_flag("-q,--quiet", quiet, "Do not echo the summary on standard error");
    std::string commands;
    for (const auto& c : command_names()) commands += (commands.empty() ? "" : ", ") + c;
    app.add_option("command", command, "One of: " + commands + "; command arguments follow it")->required();
    app.allow_extras();
    std::string demos;
    for (const auto& d : demo_names()) demos += (demos.empty() ? "" : ", ") + d;
    app.footer("Demos: " + demos + "\nExit codes: 0 verified, 1 property failed (report carries a certificate), 2 input error.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    args = app.remaining();
    if (n_opt->count() > 0) opt.n = n;
    if (k_opt->count() > 0) opt.k = k;

    json failure = {{"command", command}, {"args", args}, {"seed", opt.seed}, {"exit_code", 2}, {"status", "input-error"}};
    try {
        if (command == "check-certificate") {
            if (args.size() != 1) throw Error(ErrorKind::BadParams, "usage: check-certificate <file>");
            json input;
            try {
                input = json::parse(read_text(args[0]));
            } catch (const json::parse_error&) {
                throw Error(ErrorKind::SyntaxError, "certificate file is not valid JSON");
            }
            return emit(check_certificate(input), summary_only, quiet);
        }
        std::optional<Document> doc;
        if (!doc_path.empty()) doc = parse_document(read_text(doc_path));
        return emit(run_command(doc, command, args, opt), summary_only, quiet);
    } catch (const Error& e) {
        failure["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        failure["summary"] = e.what();
        return emit({2, failure}, summary_only, quiet);
    }
}

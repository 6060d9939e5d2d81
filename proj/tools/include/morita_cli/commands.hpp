#pragma once

// Command dispatch. Every command produces a JSON report
//
//   {"command", "args", "seed", "status": "verified" | "failed" | "input-error",
//    "exit_code", "summary", "result"?, "certificate"?, "error"?}
//
// with exit code 0 when the property holds or the object was constructed,
// 1 when a property fails (the report then carries a certificate that
// `check-certificate` replays) and 2 for input errors.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morita_cli/document.hpp"

namespace morita::cli {

struct CommandOptions {
    std::uint64_t seed = 0;
    std::string level = "equivalence";  // verify-bimodule
    std::optional<std::size_t> n;       // demos; each demo has its own default
    std::optional<std::size_t> k;
    std::size_t samples = 0;            // psd: random vectors to try against a positive verdict
};

struct CommandOutput {
    int exit_code = 0;
    json report;
};

/// Never throws for library or input errors; those become exit code 2 (or 1
/// for failed properties) with an "error" field.
CommandOutput run_command(const std::optional<Document>& doc, const std::string& command,
                          const std::vector<std::string>& args, const CommandOptions& options = {});

/// Replays a certificate, or the certificate inside a report.
CommandOutput check_certificate(const json& input);

/// One line per report for terminals.
std::string summary_text(const json& report);

std::vector<std::string> command_names();
std::vector<std::string> demo_names();

/// (scalars - grassmann(1)) bimodules tried as equivalence bimodules; none
/// of them validates.
std::vector<Bimodule> grassmann_candidates();

}  // namespace morita::cli

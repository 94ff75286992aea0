#pragma once

#include "qhj/catalog.hpp"
#include "qhj/pencil.hpp"
#include "qhj/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qhj::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { exit_ok = 0, exit_invalid = 1, exit_no_assignment = 2, exit_verify_failed = 3 };

enum class Format { text, json, csv };

// One command invocation after merging the config file with the flags.
struct RunConfig {
    std::string command;
    std::string model;
    // Parameter text as given, parsed exactly by Exact::parse.
    std::map<std::string, std::string> params;
    int levels = 4;
    double tol = 0.0;
    int points = 0;
    Format format = Format::text;
    std::string out;
    long long state = 0;
    int samples = 200;
};

// Runs one command; args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses flags and the optional --config file into a RunConfig. Throws Error(schema) on bad input.
RunConfig parse_config(const std::vector<std::string>& args);

ParamMap parse_params(const std::map<std::string, std::string>& text);

Json list_document(const std::vector<ModelId>& ids);
Json solve_document(const PotentialModel& model, const Spectrum& spectrum);
Json assignments_document(const PotentialModel& model, const std::vector<ResidueAssignment>& assignments);
Json verify_document(const VerifyReport& report);
Json wavefunction_document(const PotentialModel& model, const BandEdgeSolution& state, const std::vector<double>& xs,
                           const std::vector<cplx>& values);

// Problems found when checking a solve document against its output schema; empty when valid.
std::vector<std::string> validate_solve_document(const Json& doc);

// Compact JSON with keys in insertion order and every float printed with 17 significant digits.
std::string dump(const Json& doc);

// Sample positions: samples points from lo to hi inclusive; a single sample sits at lo.
std::vector<double> sample_grid(double lo, double hi, int samples);

}  // namespace qhj::cli

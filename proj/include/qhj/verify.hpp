#pragma once

#include "qhj/oracle.hpp"
#include "qhj/pencil.hpp"

#include <string>
#include <vector>

namespace qhj {

enum class OracleKind { bound, band_edges, frobenius_branches, pt };

const char* to_string(OracleKind k);

// Grid and tolerance used to check one model against the finite-difference oracle.
struct OracleSetup {
    OracleKind kind = OracleKind::bound;
    // Coarse grid; the oracle also solves on grid.refined().
    GridSpec grid;
    double tol = 1e-4;
};

OracleSetup default_oracle_setup(const PotentialModel& model);

struct VerifyOptions {
    // Energy tolerance; 0 selects the model default.
    double tol = 0.0;
    int levels = 4;
    // Coarse grid points; 0 selects the model default.
    int points = 0;
};

struct VerifyRow {
    int set_label = 0;
    long long n = 0;
    cplx analytic;
    cplx oracle;
    double delta = 0.0;
    double error_estimate = 0.0;
    // Oracle boundary condition of the matched state.
    GridBc bc = GridBc::dirichlet;
    bool has_overlap = false;
    double overlap = 0.0;
    bool has_modulus = false;
    double modulus_difference = 0.0;
    bool has_nodes = false;
    int analytic_nodes = 0;
    int oracle_nodes = 0;
    bool pass = false;
    std::string note;
};

struct VerifyReport {
    std::string model;
    OracleSetup setup;
    std::vector<VerifyRow> rows;
    // Node counts of the oracle states never decrease with energy (Hermitian oracles).
    bool nodes_monotone = true;
    bool conjugate_closed = true;
    bool all_pass() const;
};

// Solves the model analytically and checks every emitted state against the oracle.
VerifyReport verify_model(const PotentialModel& model, const VerifyOptions& options = {});
VerifyReport verify_spectrum(const PotentialModel& model, const Spectrum& spectrum, const VerifyOptions& options = {});

}  // namespace qhj

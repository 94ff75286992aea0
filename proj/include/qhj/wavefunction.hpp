#pragma once

#include "qhj/catalog.hpp"
#include "qhj/oracle.hpp"

#include <vector>

namespace qhj {

enum class Normalization { sup_norm_one, l2_one };

const char* to_string(Normalization n);

struct SampledWavefunction {
    std::vector<double> xs;
    std::vector<cplx> values;
    Normalization normalization = Normalization::sup_norm_one;
    // Sign changes of the real profile, or modulus minima below 1e-8 max|psi| for complex profiles.
    std::vector<double> zero_locations;
    // True when the profile is real up to one global phase.
    bool real_profile = true;
};

// psi(x) from the recipe, unnormalized. Throws Error(singular_sample) at a zero of a base with negative exponent.
cplx evaluate(const WavefunctionRecipe& recipe, double x);

SampledWavefunction assemble(const WavefunctionRecipe& recipe, const std::vector<double>& xs,
                             Normalization norm = Normalization::sup_norm_one);

// Zeros counted structurally: real zeros of the prefactors in one cell plus every zero of P_n.
struct ZeroCount {
    int prefactor_zeros = 0;
    int polynomial_zeros = 0;
    int total() const { return prefactor_zeros + polynomial_zeros; }
};

ZeroCount zero_count(const WavefunctionRecipe& recipe);

struct MatchReport {
    // |<psi, Q psi>| / ||psi||^2 with Q the projector on the oracle states; 1 means psi lies in their span.
    double overlap = 0.0;
    // max | |psi|/max|psi| - |phi|/max|phi| | against the first oracle state.
    double modulus_difference = 0.0;
    int analytic_nodes = 0;
    int oracle_nodes = 0;
    bool nodes_match = false;
};

// Compares sampled psi with oracle states sampled on the same grid.
MatchReport verify_against_oracle(const SampledWavefunction& sampled, const std::vector<std::vector<cplx>>& oracle_states);

}  // namespace qhj

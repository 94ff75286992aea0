#pragma once

#include "qhj/exact.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace qhj {

// Finite fixed pole of G, a double pole with coefficient g2(E).
struct FixedPole {
    std::string label;
    cplx location;
    std::function<Exact(const Exact& E)> g2;
    bool energy_dependent = false;
};

// Leading large-y coefficients of G: G0 + G1/y + G2/y^2 + ...
struct InfinityExpansion {
    Exact G0;
    Exact G1;
    Exact G2;
};

enum class BranchOrigin { finite_pole, infinity_a0_nonzero, infinity_a0_zero };

const char* to_string(BranchOrigin o);

struct ResidueBranch {
    std::array<Exact, 2> values;
    BranchOrigin origin = BranchOrigin::finite_pole;
};

struct InfinityBranch {
    Exact a0;
    Exact lambda1;
    BranchOrigin origin = BranchOrigin::infinity_a0_zero;
};

// Roots of b^2 - b + g2 = 0, larger real part first.
ResidueBranch finite_pole_residues(const Exact& g2);
ResidueBranch finite_pole_residues(const FixedPole& pole, const Exact& E);

// Residue at infinity: both (a0, lambda1) branches for the given expansion.
std::vector<InfinityBranch> infinity_residues(const InfinityExpansion& exp);

// Residue of chi at a moving pole (always 1), and its value in the p = -i d ln(psi)/dx convention.
Exact moving_pole_residue();
cplx moving_pole_residue_p_form();

}  // namespace qhj

#pragma once

#include "qhj/exact.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qhj {

// One step of the admissibility pipeline.
struct FilterVerdict {
    std::string stage;
    bool passed = true;
    std::string detail;
};

// One choice of residue branch at every fixed pole and at infinity.
struct ResidueAssignment {
    std::vector<int> pole_branch;
    std::vector<Exact> residues;
    int lambda_branch = 0;
    Exact a0;
    Exact lambda1;
    // lambda1 minus the sum of finite residues; equals n for admissible assignments.
    Exact n_value;
    long long n = -1;
    // Present for models whose residues depend on E.
    std::optional<Exact> energy;
    int set_label = 0;
    bool admissible = false;
    std::string verdict;
    std::vector<FilterVerdict> trace;

    Exact residue_sum() const {
        Exact s(0);
        for (const Exact& r : residues) s += r;
        return s;
    }
};

}  // namespace qhj

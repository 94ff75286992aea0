#include "qhj/residues.hpp"

#include "qhj/errors.hpp"

#include <algorithm>

namespace qhj {

const char* to_string(BranchOrigin o) {
    switch (o) {
        case BranchOrigin::finite_pole: return "finite_pole";
        case BranchOrigin::infinity_a0_nonzero: return "infinity_a0_nonzero";
        default: return "infinity_a0_zero";
    }
}

namespace {

std::array<Exact, 2> unit_sum_roots(const Exact& c) {
    // b = (1 +- sqrt(1 - 4c)) / 2; the second root is taken as 1 - b so the sum is exactly 1.
    Exact d = sqrt(Exact(1) - Exact(4) * c);
    Exact r1 = (Exact(1) + d) / Exact(2);
    Exact r2 = Exact(1) - r1;
    if (branch_before(r2, r1)) std::swap(r1, r2);
    return {r1, r2};
}

}  // namespace

ResidueBranch finite_pole_residues(const Exact& g2) {
    return {unit_sum_roots(g2), BranchOrigin::finite_pole};
}

ResidueBranch finite_pole_residues(const FixedPole& pole, const Exact& E) {
    return finite_pole_residues(pole.g2(E));
}

std::vector<InfinityBranch> infinity_residues(const InfinityExpansion& exp) {
    std::vector<InfinityBranch> out;
    if (!exp.G0.is_zero(1e-14)) {
        // a0^2 + G0 = 0 and 2 a0 lambda1 + G1 = 0.
        Exact s = sqrt(exp.G0);
        Exact i1(Rational(0), Rational(1));
        for (Exact a0 : {i1 * s, -(i1 * s)}) {
            Exact lambda = -exp.G1 / (Exact(2) * a0);
            out.push_back({a0, lambda, BranchOrigin::infinity_a0_nonzero});
        }
        return out;
    }
    if (!exp.G1.is_zero(1e-14))
        throw Error(ErrorKind::unsupported_expansion, "G0 = 0 with G1 != 0 has no power-law residue at infinity");
    for (const Exact& l : unit_sum_roots(exp.G2)) out.push_back({Exact(0), l, BranchOrigin::infinity_a0_zero});
    return out;
}

Exact moving_pole_residue() { return Exact(1); }

cplx moving_pole_residue_p_form() { return cplx(0.0, -1.0); }

}  // namespace qhj

#pragma once

#include "qhj/catalog.hpp"
#include "qhj/quantization.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qhj {

// (M0 + E M1) c = 0 for the coefficients c of P_n on the retained monomials.
struct PencilSystem {
    Eigen::MatrixXcd M0;
    Eigen::MatrixXcd M1;
    // Retained monomial degrees, ascending; row r and column r both refer to basis[r].
    std::vector<int> basis;
    int n = 0;
    // Set when E enters the residues: the system is then M0 alone, built at this energy.
    std::optional<cplx> fixed_energy;
    // Largest entry of a discarded row, relative to the largest entry kept.
    double overflow_residual = 0.0;
    // Size of the terms that cancel in M0 + E M1; singular values are judged against it.
    double scale = 1.0;
};

struct PencilRoot {
    cplx energy;
    // Algebraic multiplicity among the finite generalized eigenvalues.
    int multiplicity = 1;
    // Kernel basis of M0 + E M1; full-degree vectors come first with leading coefficient 1.
    std::vector<Eigen::VectorXcd> kernel;
    std::vector<bool> full_degree;
    // Kernel dimension differs from the multiplicity.
    bool defective = false;
};

// Clears denominators of P'' + 2 S' P' + (S'' + S'^2 + G) P = 0 and collects the retained monomials.
// Throws Error(overflow_row) if a discarded row is nonzero and Error(nonlinear_in_energy) if E enters the residues
// of a model that is not marked for a fixed-energy solve.
PencilSystem build_pencil(const PotentialModel& model, const ResidueAssignment& assignment);

// Finite generalized eigenvalues of (M0, -M1), clustered at 1e-8 relative, with their kernels.
std::vector<PencilRoot> solve_pencil(const PencilSystem& system);

// Known orthogonal-polynomial form of P_n in the model's variable y.
struct ClosedForm {
    std::string family;
    cplx alpha;
    cplx beta;
    std::function<cplx(cplx)> evaluate;
};

// Jacobi or Laguerre form for hydrogen, Scarf I, periodic Scarf and complex Scarf; empty otherwise.
std::optional<ClosedForm> closed_form_check(const PotentialModel& model, const ResidueAssignment& assignment);

// max |f - s p| / max |f| over 20 points y(x) in the sample interval, s the least-squares scale.
double closed_form_difference(const PotentialModel& model, const ClosedForm& form, const PolynomialOnT& p);

struct BandEdgeSolution {
    cplx energy;
    // Present when the residues fixed E exactly.
    std::optional<Exact> exact_energy;
    PolynomialOnT polynomial;
    ResidueAssignment assignment;
    WavefunctionRecipe recipe;
    // Number of independent solutions sharing this energy.
    int degeneracy = 1;
    bool defective = false;
};

struct Spectrum {
    QuantizationOutcome outcome;
    // Sorted by real then imaginary part of E; one entry per independent solution.
    std::vector<BandEdgeSolution> solutions;
};

// All (E, P_n) pairs of one admissible assignment.
std::vector<BandEdgeSolution> solve_assignment(const PotentialModel& model, const ResidueAssignment& assignment);

// Quantize, solve every admissible assignment, then merge equal energies by the rank of their wavefunctions.
Spectrum solve_spectrum(const PotentialModel& model, int levels = 4);

// max |-psi'' + V psi - E psi| / max (|psi''| + |V psi| + |E psi|) on interior points of the sample interval,
// psi'' by eighth-order differences with step h.
double ode_residual(const PotentialModel& model, const BandEdgeSolution& solution, int points = 200, double h = 0.01);

}  // namespace qhj

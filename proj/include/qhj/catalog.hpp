#pragma once

#include "qhj/assignment.hpp"
#include "qhj/exact.hpp"
#include "qhj/poly.hpp"
#include "qhj/residues.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qhj {

enum class ModelId { hydrogen, scarf1, scarf_periodic, lame, assoc_lame_es, assoc_lame_qes, khare_mandal, complex_scarf };
enum class SpectrumClass { es, qes, band, pt };
enum class BoundaryTag { dirichlet, periodic_union, decaying, pt_symmetric };
enum class FilterStage { lambda_branch, finiteness, square_integrability, phase };

const char* to_string(ModelId id);
const char* to_string(SpectrumClass c);
const char* to_string(BoundaryTag b);
const char* to_string(FilterStage s);
std::optional<ModelId> model_id_from_string(const std::string& name);
std::vector<ModelId> all_models();

using ParamMap = std::map<std::string, Exact>;

struct ParamSpec {
    std::string name;
    std::string doc;
};

struct ModelInfo {
    ModelId id;
    std::string name;
    SpectrumClass spectrum;
    std::string variable_map;
    std::vector<ParamSpec> params;
};

const ModelInfo& model_info(ModelId id);

struct Domain {
    double lo = 0.0;
    double hi = 0.0;
    BoundaryTag bc = BoundaryTag::dirichlet;
    // Lattice period for periodic potentials, 0 otherwise.
    double period = 0.0;
};

// Rejection rule; returns a reason when the assignment is not admissible.
struct AdmissibilityRule {
    FilterStage stage;
    std::string tag;
    std::function<std::optional<std::string>(const ResidueAssignment&)> reject;
};

struct Prefactor {
    std::string label;
    std::function<cplx(double)> base;
    Exact exponent;
    // Zeros of the base inside one cell of the domain (used for zero bookkeeping).
    int base_zeros = 0;
};

struct WavefunctionRecipe {
    std::vector<Prefactor> prefactors;
    std::string polynomial_variable_label;
    std::function<cplx(double)> polynomial_variable;
    PolynomialOnT polynomial;
    // psi carries exp(C * exponential_argument(x)) when C != 0.
    Exact exp_coefficient;
    std::function<cplx(double)> exponential_argument;
    std::string exponential_label;

    std::string form() const;
};

// Result of inverting the residue sum for a model whose residues depend on E.
struct LevelEnergy {
    std::optional<Exact> energy;
    std::string reason;
};

struct PotentialModel {
    ModelId id;
    std::string name;
    ParamMap params;
    SpectrumClass spectrum;
    std::string variable_map;

    std::function<cplx(cplx)> y_of_x;
    std::function<cplx(cplx)> dy_dx;
    // Independent closed form of V(x), throws singular_sample at poles of V.
    std::function<cplx(cplx)> potential;

    // Phi = F^2 and V = Vn/Vd as polynomials in y.
    Poly phi;
    Poly vn;
    Poly vd;
    // Transformed coefficient G(y, E) = (N0 + E N1) / D, D = prod (y - y_i)^2.
    Poly N0;
    Poly N1;
    Poly D;

    std::vector<FixedPole> poles;
    std::function<InfinityExpansion(const Exact&)> infinity;

    // Pairs of pole indices whose residues must coincide.
    std::vector<std::pair<int, int>> parity_pairs;
    bool parity_basis = false;

    // True when some residue (finite or lambda1) depends on E; levels then come from energy_of_level.
    bool residues_depend_on_energy = false;
    // True when a pole residue or a0 depends on E; the pencil is then solved at fixed E.
    bool fixed_energy_pencil = false;
    std::function<LevelEnergy(const std::vector<int>& pole_branch, int lambda_branch, long long n)> energy_of_level;

    std::vector<AdmissibilityRule> rules;
    std::function<int(const ResidueAssignment&)> set_label;
    std::function<std::string(const ResidueAssignment&)> qes_relation;
    std::string energy_formula;

    Domain domain;
    std::pair<double, double> sample_interval;

    std::function<WavefunctionRecipe(const ResidueAssignment&)> recipe;

    double param(const std::string& key) const;
    const Exact& exact_param(const std::string& key) const;

    // G evaluated from the stored polynomials.
    cplx G(cplx y, cplx E) const;
    // (3 Phi'^2 - 4 Phi Phi'') / (16 Phi^2)
    cplx W(cplx y) const;
    // g2 and expansion at infinity recomputed from N0, N1, D.
    cplx derived_g2(std::size_t pole, cplx E) const;
    std::array<cplx, 3> derived_infinity(cplx E) const;
};

struct ConsistencyReport {
    double max_potential_error = 0.0;
    double max_jacobian_error = 0.0;
    double max_pole_error = 0.0;
    double max_infinity_error = 0.0;
    double max_sampled_infinity_error = 0.0;
    bool ok() const;
};

// Checks Phi(y) (G - W) = E - V(x), Phi(y) = (dy/dx)^2 and the declared residue data against the polynomials.
ConsistencyReport check_consistency(const PotentialModel& model, int samples = 20, unsigned seed = 7);

// Builds the entry without running the consistency check.
PotentialModel build_model(ModelId id, const ParamMap& params);
// Builds the entry and rejects it unless check_consistency passes.
PotentialModel get_model(ModelId id, const ParamMap& params);
PotentialModel get_model(const std::string& name, const ParamMap& params);

cplx evaluate_potential(const PotentialModel& model, cplx x);

WavefunctionRecipe prefactor_exponents(const PotentialModel& model, const ResidueAssignment& assignment);

}  // namespace qhj

#pragma once

#include "qhj/assignment.hpp"
#include "qhj/catalog.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qhj {

enum class OutcomeKind { es_spectrum, qes_condition, band_edge_group, pt_group };

const char* to_string(OutcomeKind k);

struct QuantizationOutcome {
    OutcomeKind kind;
    // Admissible assignments, in enumeration order.
    std::vector<ResidueAssignment> assignments;
    // Every enumerated assignment with its verdict.
    std::vector<ResidueAssignment> enumerated;
    std::optional<std::string> energy_formula;
    // Set label -> QES relation, for models that carry one.
    std::map<int, std::string> qes_relations;
};

// All combinations of pole branches and lambda1 branches, each with its admissibility verdict.
// When residues depend on E and no E is supplied, every combination is tried for n = 0 .. levels-1.
std::vector<ResidueAssignment> enumerate_assignments(const PotentialModel& model, std::optional<Exact> E = std::nullopt,
                                                     int levels = 4);

// Throws Error(no_admissible_assignment) when nothing survives the filters.
QuantizationOutcome quantize(const PotentialModel& model, int levels = 4);

struct QesFamilyMember {
    int set_label;
    std::string relation;
    Exact b;
};

struct QesFamily {
    std::vector<QesFamilyMember> members;
    // Distinct b values up to b -> -b-1, represented by the larger member of each class.
    std::vector<Exact> classes;
    // Distinct (a(a+1), b(b+1)) pairs.
    std::vector<std::pair<Exact, Exact>> pq;

    std::vector<Exact> b_values() const;
};

// b values solving each QES relation of the associated Lame family for fixed a and n.
QesFamily qes_family(ModelId model_class, long long n, const Exact& a);

}  // namespace qhj

#include "qhj/quantization.hpp"

#include "qhj/errors.hpp"
#include "qhj/residues.hpp"

#include <algorithm>

namespace qhj {

namespace {

constexpr double kMatchTol = 1e-9;

struct Pipeline {
    ResidueAssignment& a;
    bool open = true;

    void step(const std::string& stage, bool passed, const std::string& detail = "") {
        if (!open) return;
        a.trace.push_back({stage, passed, detail});
        if (!passed) {
            open = false;
            a.verdict = stage + (detail.empty() ? "" : ": " + detail);
        }
    }
};

std::vector<int> branches_of(std::size_t index, std::size_t poles) {
    std::vector<int> b(poles);
    for (std::size_t i = 0; i < poles; ++i) b[i] = static_cast<int>((index >> (poles - 1 - i)) & 1U);
    return b;
}

void fill_residues(const PotentialModel& m, ResidueAssignment& a, const Exact& E) {
    a.residues.clear();
    for (std::size_t i = 0; i < m.poles.size(); ++i)
        a.residues.push_back(finite_pole_residues(m.poles[i], E).values[a.pole_branch[i]]);
    auto inf = infinity_residues(m.infinity(E));
    a.a0 = inf[a.lambda_branch].a0;
    a.lambda1 = inf[a.lambda_branch].lambda1;
    a.n_value = a.lambda1 - a.residue_sum();
}

void parity_by_index(const PotentialModel& m, Pipeline& p) {
    for (auto [i, k] : m.parity_pairs) {
        if (p.a.pole_branch[i] != p.a.pole_branch[k]) {
            p.step("parity", false, "residues at " + m.poles[i].label + " and " + m.poles[k].label + " differ");
            return;
        }
    }
}

void parity_by_value(const PotentialModel& m, Pipeline& p) {
    for (auto [i, k] : m.parity_pairs) {
        if (!same_value(p.a.residues[i], p.a.residues[k], kMatchTol)) {
            p.step("parity", false, "residues at " + m.poles[i].label + " and " + m.poles[k].label + " differ");
            return;
        }
    }
    p.step("parity", true);
}

void run_rules(const PotentialModel& m, Pipeline& p, FilterStage stage) {
    for (const auto& rule : m.rules) {
        if (rule.stage != stage || !p.open) continue;
        auto why = rule.reject(p.a);
        p.step(rule.tag, !why, why.value_or(""));
    }
}

void integer_n(Pipeline& p) {
    auto k = p.a.n_value.as_integer(kMatchTol);
    if (!k || !p.a.n_value.is_real(kMatchTol)) {
        p.step("n_integer", false, "n = " + p.a.n_value.str() + " is not an integer");
        return;
    }
    p.a.n = *k;
    p.step("n_integer", true);
    p.step("n_nonnegative", *k >= 0, *k >= 0 ? "" : "n = " + std::to_string(*k));
}

void finish(const PotentialModel& m, Pipeline& p) {
    run_rules(m, p, FilterStage::finiteness);
    run_rules(m, p, FilterStage::square_integrability);
    run_rules(m, p, FilterStage::phase);
    if (p.open) {
        p.a.admissible = true;
        p.a.verdict = "admissible";
    }
}

bool lambda_depends_on_energy(const PotentialModel& m) {
    auto a = infinity_residues(m.infinity(Exact(-1)));
    auto b = infinity_residues(m.infinity(Exact(-2)));
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!same_value(a[k].lambda1, b[k].lambda1, 1e-14) || !same_value(a[k].a0, b[k].a0, 1e-14)) return true;
    return false;
}

void label(const PotentialModel& m, ResidueAssignment& a) {
    if (m.set_label) a.set_label = m.set_label(a);
}

// Residues evaluated at a known E; n follows from the residue sum.
ResidueAssignment at_energy(const PotentialModel& m, const std::vector<int>& pb, int lb, const Exact& E,
                            bool record_energy) {
    ResidueAssignment a;
    a.pole_branch = pb;
    a.lambda_branch = lb;
    fill_residues(m, a, E);
    if (record_energy) a.energy = E;
    label(m, a);
    Pipeline p{a};
    parity_by_value(m, p);
    run_rules(m, p, FilterStage::lambda_branch);
    if (p.open) integer_n(p);
    finish(m, p);
    return a;
}

// Energy from the residue sum at fixed n, then every residue re-evaluated at that energy.
ResidueAssignment at_level(const PotentialModel& m, const std::vector<int>& pb, int lb, long long n, bool lambda_moves) {
    ResidueAssignment a;
    a.pole_branch = pb;
    a.lambda_branch = lb;
    a.n = n;
    fill_residues(m, a, Exact(0));
    Pipeline p{a};
    parity_by_index(m, p);
    if (!lambda_moves) run_rules(m, p, FilterStage::lambda_branch);
    LevelEnergy level;
    if (p.open) {
        level = m.energy_of_level(pb, lb, n);
        p.step("energy", level.energy.has_value(), level.reason);
    }
    if (!p.open) {
        a.n_value = Exact(n);
        label(m, a);
        return a;
    }
    const Exact E = *level.energy;
    fill_residues(m, a, E);
    a.energy = E;
    label(m, a);
    bool consistent = same_value(a.n_value, Exact(n), kMatchTol);
    p.step("branch_match", consistent,
           consistent ? "" : "lambda1 - sum(b) = " + a.n_value.str() + " at E = " + E.str());
    parity_by_value(m, p);
    if (lambda_moves) run_rules(m, p, FilterStage::lambda_branch);
    if (p.open) integer_n(p);
    finish(m, p);
    return a;
}

}  // namespace

const char* to_string(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::es_spectrum: return "es_spectrum";
        case OutcomeKind::qes_condition: return "qes_condition";
        case OutcomeKind::band_edge_group: return "band_edge_group";
        default: return "pt_group";
    }
}

std::vector<ResidueAssignment> enumerate_assignments(const PotentialModel& m, std::optional<Exact> E, int levels) {
    std::vector<ResidueAssignment> out;
    const std::size_t P = m.poles.size();
    const std::size_t combos = std::size_t{1} << P;
    const std::size_t L = infinity_residues(m.infinity(E.value_or(Exact(0)))).size();
    const bool by_level = m.residues_depend_on_energy && !E;
    const bool lambda_moves = by_level && lambda_depends_on_energy(m);
    for (std::size_t c = 0; c < combos; ++c) {
        auto pb = branches_of(c, P);
        for (std::size_t lb = 0; lb < L; ++lb) {
            if (!by_level) {
                out.push_back(at_energy(m, pb, static_cast<int>(lb), E.value_or(Exact(0)),
                                        E.has_value() && m.residues_depend_on_energy));
                continue;
            }
            for (long long n = 0; n < levels; ++n) out.push_back(at_level(m, pb, static_cast<int>(lb), n, lambda_moves));
        }
    }
    return out;
}

QuantizationOutcome quantize(const PotentialModel& m, int levels) {
    QuantizationOutcome q;
    switch (m.spectrum) {
        case SpectrumClass::es: q.kind = OutcomeKind::es_spectrum; break;
        case SpectrumClass::qes: q.kind = OutcomeKind::qes_condition; break;
        case SpectrumClass::band: q.kind = OutcomeKind::band_edge_group; break;
        default: q.kind = OutcomeKind::pt_group; break;
    }
    q.enumerated = enumerate_assignments(m, std::nullopt, levels);
    for (const auto& a : q.enumerated) {
        if (a.admissible) q.assignments.push_back(a);
        if (m.qes_relation && a.set_label > 0) {
            std::string rel = m.qes_relation(a);
            if (!rel.empty()) q.qes_relations.emplace(a.set_label, rel);
        }
    }
    if (m.residues_depend_on_energy) q.energy_formula = m.energy_formula;
    if (q.assignments.empty())
        throw Error(ErrorKind::no_admissible_assignment, m.name + ": no residue assignment survives the filters");
    return q;
}

std::vector<Exact> QesFamily::b_values() const {
    std::vector<Exact> v;
    for (const auto& m : members) v.push_back(m.b);
    return v;
}

QesFamily qes_family(ModelId model_class, long long n, const Exact& a) {
    QesFamily f;
    if (model_class != ModelId::assoc_lame_qes || n < 0) return f;
    const Exact N(n), one(1), two(2);
    f.members = {
        {1, "b-a = -n-2", a - N - two},
        {2, "a+b+1 = n+2", N + one - a},
        {3, "b-a = -n-1", a - N - one},
        {4, "a+b = n", N - a},
    };
    auto has = [](const std::vector<Exact>& v, const Exact& x) {
        return std::any_of(v.begin(), v.end(), [&](const Exact& y) { return same_value(x, y, 1e-12); });
    };
    const Exact p = a * (a + one);
    for (const auto& mem : f.members) {
        Exact image = -mem.b - one;
        Exact rep = branch_before(image, mem.b) ? image : mem.b;
        if (!has(f.classes, rep)) f.classes.push_back(rep);
        Exact q = mem.b * (mem.b + one);
        bool seen = std::any_of(f.pq.begin(), f.pq.end(), [&](const auto& pr) { return same_value(pr.second, q, 1e-12); });
        if (!seen) f.pq.emplace_back(p, q);
    }
    return f;
}

}  // namespace qhj

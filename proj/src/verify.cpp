#include "qhj/verify.hpp"

#include "qhj/errors.hpp"
#include "qhj/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace qhj {

namespace {

constexpr double kOverlapTol = 1e-6;
constexpr double kModulusTol = 1e-3;

bool monotone(const std::vector<int>& nodes) { return std::is_sorted(nodes.begin(), nodes.end()); }

// Nearest oracle eigenvalue not yet taken.
std::size_t take_nearest(const std::vector<cplx>& values, std::vector<bool>& used, cplx target) {
    std::size_t best = values.size();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (used[i]) continue;
        if (best == values.size() || std::abs(values[i] - target) < std::abs(values[best] - target)) best = i;
    }
    if (best == values.size()) throw Error(ErrorKind::invalid_state, "oracle returned fewer states than needed");
    used[best] = true;
    return best;
}

// The deg oracle states closest to E, for projecting a degenerate analytic state.
std::vector<std::vector<cplx>> cluster_states(const OracleSpectrum& o, cplx E, int deg, std::size_t matched) {
    if (deg <= 1) return {o.eigenvectors[matched]};
    std::vector<std::size_t> idx(o.eigenvalues.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(o.eigenvalues[a] - E) < std::abs(o.eigenvalues[b] - E);
    });
    std::vector<std::vector<cplx>> out;
    for (int i = 0; i < deg && i < static_cast<int>(idx.size()); ++i) out.push_back(o.eigenvectors[idx[i]]);
    return out;
}

void compare_states(VerifyRow& row, const BandEdgeSolution& s, const OracleSpectrum& o, std::size_t matched,
                    const std::vector<cplx>& analytic, bool real_model) {
    SampledWavefunction w;
    w.xs = o.xs;
    w.values = analytic;
    auto rep = verify_against_oracle(w, cluster_states(o, s.energy, s.degeneracy, matched));
    if (real_model) {
        row.has_overlap = true;
        row.overlap = rep.overlap;
        if (s.degeneracy == 1) {
            row.has_nodes = true;
            row.analytic_nodes = rep.analytic_nodes;
            row.oracle_nodes = rep.oracle_nodes;
        }
    } else {
        row.has_modulus = true;
        row.modulus_difference = rep.modulus_difference;
    }
}

std::vector<cplx> sample(const WavefunctionRecipe& r, const std::vector<double>& xs) {
    std::vector<cplx> v;
    v.reserve(xs.size());
    for (double x : xs) v.push_back(evaluate(r, x));
    return v;
}

void finish_row(VerifyRow& row, double tol) {
    row.delta = std::abs(row.analytic - row.oracle);
    bool ok = row.delta <= tol;
    if (row.has_overlap) ok = ok && row.overlap >= 1.0 - kOverlapTol;
    if (row.has_modulus) ok = ok && row.modulus_difference <= kModulusTol;
    if (row.has_nodes) ok = ok && row.analytic_nodes == row.oracle_nodes;
    row.pass = ok && row.note.find("mismatch") == std::string::npos;
}

VerifyRow base_row(const BandEdgeSolution& s) {
    VerifyRow row;
    row.set_label = s.assignment.set_label;
    row.n = s.assignment.n;
    row.analytic = s.energy;
    return row;
}

void check_bound(const PotentialModel& m, const Spectrum& sp, VerifyReport& rep) {
    const int k = static_cast<int>(sp.solutions.size()) + 2;
    OracleSpectrum o = solve_bound(m, rep.setup.grid, k);
    rep.nodes_monotone = monotone(o.node_counts);
    std::vector<bool> used(o.eigenvalues.size(), false);
    for (const auto& s : sp.solutions) {
        VerifyRow row = base_row(s);
        std::size_t i = take_nearest(o.eigenvalues, used, s.energy);
        row.oracle = o.eigenvalues[i];
        row.error_estimate = o.error_estimates[i];
        row.bc = o.bc[i];
        compare_states(row, s, o, i, sample(s.recipe, o.xs), true);
        finish_row(row, rep.setup.tol);
        rep.rows.push_back(row);
    }
}

void check_band_edges(const PotentialModel& m, const Spectrum& sp, VerifyReport& rep) {
    const int k = static_cast<int>(sp.solutions.size()) + 4;
    OracleSpectrum o = solve_band_edges(m, rep.setup.grid, k);
    rep.nodes_monotone = monotone(o.node_counts);
    const double period = m.domain.period;
    std::vector<bool> used(o.eigenvalues.size(), false);
    for (const auto& s : sp.solutions) {
        VerifyRow row = base_row(s);
        std::size_t i = take_nearest(o.eigenvalues, used, s.energy);
        row.oracle = o.eigenvalues[i];
        row.error_estimate = o.error_estimates[i];
        row.bc = o.bc[i];
        std::vector<cplx> psi = sample(s.recipe, o.xs);
        compare_states(row, s, o, i, psi, true);
        // Period class of the analytic state: psi(x + period) = +-psi(x).
        std::size_t top = 0;
        for (std::size_t t = 1; t < psi.size(); ++t)
            if (std::abs(psi[t]) > std::abs(psi[top])) top = t;
        double ratio = (evaluate(s.recipe, o.xs[top] + period) / psi[top]).real();
        GridBc cls = ratio > 0.0 ? GridBc::periodic : GridBc::antiperiodic;
        if (s.degeneracy == 1 && cls != row.bc) row.note = "period class mismatch";
        finish_row(row, rep.setup.tol);
        rep.rows.push_back(row);
    }
}

void check_branches(const PotentialModel&, const Spectrum& sp, VerifyReport& rep) {
    // psi = sin^nu u on each Frobenius branch nu, with -(w u')' + nu^2 w u = E w u and w = sin^(2 nu).
    std::map<long long, OracleSpectrum> cache;
    rep.nodes_monotone = true;
    for (const auto& s : sp.solutions) {
        VerifyRow row = base_row(s);
        const Exact nu_exact = Exact(2) * s.recipe.prefactors.at(0).exponent - Exact(s.assignment.n);
        const double nu = nu_exact.real();
        const long long key = std::llround(nu * 1e9);
        long long max_n = 0;
        for (const auto& t : sp.solutions) max_n = std::max(max_n, t.assignment.n);
        if (!cache.count(key)) {
            SturmLiouville p{[nu](double) { return nu * nu; }, [nu](double x) { return std::pow(std::sin(x), 2.0 * nu); }};
            GridSpec g = rep.setup.grid;
            g.bc = GridBc::cell_natural;
            cache[key] = solve_sturm_liouville(p, g, static_cast<int>(max_n) + 3);
            OracleSpectrum& o = cache[key];
            for (std::size_t i = 0; i < o.eigenvectors.size(); ++i)
                for (std::size_t t = 0; t < o.xs.size(); ++t) o.eigenvectors[i][t] *= std::pow(std::sin(o.xs[t]), nu);
            rep.nodes_monotone = rep.nodes_monotone && monotone(o.node_counts);
        }
        const OracleSpectrum& o = cache[key];
        const std::size_t i = static_cast<std::size_t>(s.assignment.n);
        row.oracle = o.eigenvalues.at(i);
        row.error_estimate = o.error_estimates[i];
        row.bc = o.bc[i];
        row.note = "branch nu = " + format_double(nu);
        compare_states(row, s, o, i, sample(s.recipe, o.xs), true);
        finish_row(row, rep.setup.tol);
        rep.rows.push_back(row);
    }
}

void check_pt(const PotentialModel& m, const Spectrum& sp, VerifyReport& rep) {
    std::vector<cplx> predictions;
    for (const auto& s : sp.solutions) predictions.push_back(s.energy);
    const Contour contour = default_contour(m);
    const bool tilted = m.id == ModelId::khare_mandal;
    OracleSpectrum o = solve_pt(m, rep.setup.grid, static_cast<int>(predictions.size()), predictions, contour);
    rep.conjugate_closed = o.conjugate_closed;
    rep.nodes_monotone = true;
    for (std::size_t j = 0; j < sp.solutions.size(); ++j) {
        const auto& s = sp.solutions[j];
        VerifyRow row = base_row(s);
        row.oracle = o.eigenvalues[j];
        row.error_estimate = o.error_estimates[j];
        if (o.max_residual > 1e-6) row.note = "oracle residual mismatch";
        if (tilted) {
            row.note = row.note.empty() ? "energy only: states live on a complex contour" : row.note;
        } else {
            compare_states(row, s, o, j, sample(s.recipe, o.xs), false);
        }
        finish_row(row, rep.setup.tol);
        rep.rows.push_back(row);
    }
}

}  // namespace

const char* to_string(OracleKind k) {
    switch (k) {
        case OracleKind::bound: return "bound";
        case OracleKind::band_edges: return "band_edges";
        case OracleKind::frobenius_branches: return "frobenius_branches";
        default: return "pt";
    }
}

OracleSetup default_oracle_setup(const PotentialModel& m) {
    OracleSetup s;
    const double pi = std::numbers::pi;
    switch (m.id) {
        case ModelId::hydrogen: s = {OracleKind::bound, {0.0, 120.0, 4000, GridBc::dirichlet}, 2e-4}; break;
        case ModelId::scarf1: s = {OracleKind::bound, {m.domain.lo, m.domain.hi, 2000, GridBc::dirichlet}, 2e-4}; break;
        case ModelId::scarf_periodic:
            if (m.domain.bc == BoundaryTag::dirichlet)
                s = {OracleKind::bound, {0.0, pi, 2000, GridBc::dirichlet}, 5e-4};
            else
                s = {OracleKind::frobenius_branches, {0.0, pi, 1000, GridBc::cell_natural}, 5e-4};
            break;
        case ModelId::lame:
        case ModelId::assoc_lame_es:
        case ModelId::assoc_lame_qes:
            s = {OracleKind::band_edges, {0.0, m.domain.period, 512, GridBc::periodic}, 5e-4};
            break;
        case ModelId::khare_mandal: s = {OracleKind::pt, {-4.0, 4.0, 399, GridBc::dirichlet}, 1e-3}; break;
        case ModelId::complex_scarf: s = {OracleKind::pt, {-30.0, 30.0, 399, GridBc::dirichlet}, 1e-3}; break;
    }
    return s;
}

bool VerifyReport::all_pass() const {
    if (rows.empty() || !nodes_monotone) return false;
    return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.pass; });
}

VerifyReport verify_spectrum(const PotentialModel& m, const Spectrum& sp, const VerifyOptions& opt) {
    VerifyReport rep;
    rep.model = m.name;
    rep.setup = default_oracle_setup(m);
    if (opt.tol > 0.0) rep.setup.tol = opt.tol;
    if (opt.points > 0) rep.setup.grid.points = opt.points;
    switch (rep.setup.kind) {
        case OracleKind::bound: check_bound(m, sp, rep); break;
        case OracleKind::band_edges: check_band_edges(m, sp, rep); break;
        case OracleKind::frobenius_branches: check_branches(m, sp, rep); break;
        case OracleKind::pt: check_pt(m, sp, rep); break;
    }
    return rep;
}

VerifyReport verify_model(const PotentialModel& m, const VerifyOptions& opt) {
    return verify_spectrum(m, solve_spectrum(m, opt.levels), opt);
}

}  // namespace qhj

#include "qhj/oracle.hpp"

#include "qhj/errors.hpp"

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numeric>
#include <numbers>
#include <thread>

namespace qhj {

namespace {

using namespace std::complex_literals;

struct RawSpectrum {
    std::vector<cplx> values;
    std::vector<std::vector<cplx>> vectors;
    double max_residual = 0.0;
};

// Runs both solves, concurrently when allowed.
template <class F>
std::pair<RawSpectrum, RawSpectrum> run_pair(F&& solve, const GridSpec& coarse, const GridSpec& fine) {
    if (max_threads() < 2) return {solve(coarse), solve(fine)};
    auto f = std::async(std::launch::async, [&] { return solve(fine); });
    RawSpectrum c = solve(coarse);
    return {std::move(c), f.get()};
}

void fix_sign(std::vector<cplx>& v) {
    auto it = std::max_element(v.begin(), v.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    if (it == v.end() || std::abs(*it) == 0.0) return;
    cplx phase = std::abs(*it) / *it;
    for (auto& x : v) x *= phase;
}

// Sign changes around the cell, including the wrap from the last node back to the first.
int cyclic_nodes(const std::vector<cplx>& v, GridBc bc) {
    double peak = 0.0;
    for (const auto& x : v) peak = std::max(peak, std::abs(x.real()));
    std::vector<int> signs;
    for (const auto& x : v)
        if (std::abs(x.real()) > 1e-10 * peak) signs.push_back(x.real() > 0.0 ? 1 : -1);
    if (signs.empty()) return 0;
    int nodes = 0;
    for (std::size_t i = 1; i < signs.size(); ++i) nodes += signs[i] != signs[i - 1];
    const int wrap = bc == GridBc::antiperiodic ? -signs.front() : signs.front();
    return nodes + (signs.back() != wrap);
}

// Lowest k pairs of K v = E W v with K symmetric tridiagonal (diagonal d, off-diagonal e) and W = diag(w).
RawSpectrum tridiagonal_pairs(std::vector<double> d, std::vector<double> e, const std::vector<double>& w, int k) {
    const int n = static_cast<int>(d.size());
    k = std::min(k, n);
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = 1.0 / std::sqrt(w[i]);
    for (int i = 0; i < n; ++i) d[i] *= s[i] * s[i];
    e.resize(std::max(n, 1), 0.0);
    for (int i = 0; i + 1 < n; ++i) e[i] *= s[i] * s[i + 1];
    std::vector<double> vals(n), z(static_cast<std::size_t>(n) * k);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, k, 0.0, &found,
                                     vals.data(), z.data(), n, support.data());
    if (info != 0 || found < k) throw Error(ErrorKind::eigensolver_failure, "tridiagonal eigensolver failed");
    RawSpectrum out;
    for (int j = 0; j < k; ++j) {
        out.values.emplace_back(vals[j], 0.0);
        std::vector<cplx> v(n);
        for (int i = 0; i < n; ++i) v[i] = z[static_cast<std::size_t>(j) * n + i] * s[i];
        out.vectors.push_back(std::move(v));
    }
    return out;
}

struct Discrete {
    std::vector<double> diag;  // K_ii
    std::vector<double> face;  // f_{i+1/2} / h^2, coupling i and i+1 (cyclically for periodic grids)
    std::vector<double> w;
};

Discrete discretize(const SturmLiouville& p, const GridSpec& g) {
    const int n = g.points;
    const double h = g.spacing();
    const std::vector<double> x = g.nodes();
    auto w = [&](double t) { return p.w ? p.w(t) : 1.0; };
    Discrete D{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    std::vector<double> lo(n);
    for (int i = 0; i < n; ++i) {
        D.w[i] = w(x[i]);
        lo[i] = w(x[i] - 0.5 * h) / (h * h);
        D.face[i] = w(x[i] + 0.5 * h) / (h * h);
    }
    if (g.bc == GridBc::cell_natural) {
        lo[0] = 0.0;
        D.face[n - 1] = 0.0;
    }
    for (int i = 0; i < n; ++i) D.diag[i] = lo[i] + D.face[i] + p.q(x[i]) * D.w[i];
    return D;
}

// Periodic or antiperiodic grid whose coefficients are mirror symmetric about x = lo.
bool mirror_symmetric(const Discrete& D) {
    const int n = static_cast<int>(D.diag.size());
    if (n % 2 != 0) return false;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max({scale, std::abs(D.diag[i]), std::abs(D.face[i])});
    for (int i = 1; i < n; ++i) {
        if (std::abs(D.diag[i] - D.diag[n - i]) > 1e-11 * scale) return false;
        if (std::abs(D.w[i] - D.w[n - i]) > 1e-11 * std::max(1.0, std::abs(D.w[i]))) return false;
    }
    for (int i = 0; i < n; ++i)
        if (std::abs(D.face[i] - D.face[(2 * n - i - 2) % n]) > 1e-11 * scale) return false;
    return true;
}

// States even (+1) or odd (-1) about lo and about the half cell, from a tridiagonal problem on [lo, lo + P/2].
RawSpectrum half_cell(const Discrete& D, int at_lo, int at_half, int k) {
    const int n = static_cast<int>(D.diag.size()), M = n / 2;
    const int a = at_lo > 0 ? 0 : 1, b = at_half > 0 ? M : M - 1;
    if (b < a) return {};
    std::vector<double> d, e, w;
    for (int i = a; i <= b; ++i) {
        double c = (i == 0 && at_lo > 0) || (i == M && at_half > 0) ? 0.5 : 1.0;
        d.push_back(c * D.diag[i]);
        w.push_back(c * D.w[i]);
        if (i < b) e.push_back(-D.face[i]);
    }
    RawSpectrum r = tridiagonal_pairs(d, e, w, k);
    for (auto& v : r.vectors) {
        std::vector<cplx> full(n, 0.0);
        for (int i = a; i <= b; ++i) full[i] = v[i - a];
        for (int i = M + 1; i < n; ++i) full[i] = static_cast<double>(at_half) * full[2 * M - i];
        v = std::move(full);
    }
    return r;
}

RawSpectrum merge_lowest(std::vector<RawSpectrum> parts, int k) {
    std::vector<std::pair<double, std::vector<cplx>>> all;
    for (auto& p : parts)
        for (std::size_t j = 0; j < p.values.size(); ++j) all.emplace_back(p.values[j].real(), std::move(p.vectors[j]));
    std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    RawSpectrum out;
    for (int j = 0; j < k && j < static_cast<int>(all.size()); ++j) {
        out.values.emplace_back(all[j].first, 0.0);
        out.vectors.push_back(std::move(all[j].second));
    }
    return out;
}

// Dense fallback for periodic coefficients without mirror symmetry.
RawSpectrum dense_pairs(const Discrete& D, bool anti, int k) {
    const int n = static_cast<int>(D.diag.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s(i) = 1.0 / std::sqrt(D.w[i]);
    for (int i = 0; i < n; ++i) {
        K(i, i) += D.diag[i];
        int j = (i + 1) % n;
        double c = -D.face[i] * (anti && j == 0 ? -1.0 : 1.0);
        K(i, j) += c;
        K(j, i) += c;
    }
    K = s.asDiagonal() * K * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::eigensolver_failure, "dense symmetric eigensolver failed");
    RawSpectrum out;
    for (int j = 0; j < std::min(k, n); ++j) {
        out.values.emplace_back(es.eigenvalues()(j), 0.0);
        std::vector<cplx> v(n);
        for (int i = 0; i < n; ++i) v[i] = es.eigenvectors()(i, j) * s(i);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

// Symmetric real problem K u = E W u on one grid; lowest k pairs.
RawSpectrum solve_real(const SturmLiouville& p, const GridSpec& g, int k) {
    const Discrete D = discretize(p, g);
    const int n = g.points;
    RawSpectrum r;
    if (g.bc == GridBc::dirichlet || g.bc == GridBc::cell_natural) {
        std::vector<double> e(D.face.begin(), D.face.end() - 1);
        for (auto& x : e) x = -x;
        r = tridiagonal_pairs(D.diag, e, D.w, k);
    } else if (mirror_symmetric(D)) {
        const int sign = g.bc == GridBc::periodic ? 1 : -1;
        r = merge_lowest({half_cell(D, 1, sign, k), half_cell(D, -1, -sign, k)}, std::min(k, n));
    } else {
        r = dense_pairs(D, g.bc == GridBc::antiperiodic, k);
    }
    for (auto& v : r.vectors) fix_sign(v);
    return r;
}

OracleSpectrum extrapolate_real(const RawSpectrum& c, const RawSpectrum& f, const GridSpec& fine, GridBc bc, double tol) {
    OracleSpectrum o;
    o.xs = fine.nodes();
    for (std::size_t j = 0; j < f.values.size(); ++j) {
        double e = richardson(c.values[j].real(), f.values[j].real());
        double err = std::abs(e - f.values[j].real());
        if (err > tol)
            throw Error(ErrorKind::grid_too_coarse, "extrapolated error " + format_double(err) + " exceeds tolerance");
        o.eigenvalues.emplace_back(e, 0.0);
        o.error_estimates.push_back(err);
        o.eigenvectors.push_back(f.vectors[j]);
        o.node_counts.push_back(bc == GridBc::periodic || bc == GridBc::antiperiodic ? cyclic_nodes(f.vectors[j], bc)
                                                                                       : count_nodes(f.vectors[j]));
        o.bc.push_back(bc);
    }
    o.hermitian = true;
    o.conjugate_closed = true;
    return o;
}

// Dense non-Hermitian operator -(1/x') d/du (1/x' d/du) + V(x(u)) with Dirichlet walls.
RawSpectrum solve_complex(const PotentialModel& model, const Contour& ct, const GridSpec& g) {
    const int n = g.points;
    const double h = g.spacing();
    const std::vector<double> u = g.nodes();
    std::vector<cplx> a(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int r, int c) -> cplx& { return a[static_cast<std::size_t>(c) * n + r]; };
    for (int i = 0; i < n; ++i) {
        cplx di = 1.0 / ct.dx(u[i]);
        cplx lo = 1.0 / ct.dx(u[i] - 0.5 * h), hi = 1.0 / ct.dx(u[i] + 0.5 * h);
        at(i, i) = di * (lo + hi) / (h * h) + model.potential(ct.x(u[i]));
        if (i > 0) at(i, i - 1) = -di * lo / (h * h);
        if (i + 1 < n) at(i, i + 1) = -di * hi / (h * h);
    }
    const std::vector<cplx> op = a;
    std::vector<cplx> w(n), vr(static_cast<std::size_t>(n) * n);
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, reinterpret_cast<lapack_complex_double*>(a.data()), n,
                                    reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
                                    reinterpret_cast<lapack_complex_double*>(vr.data()), n);
    if (info != 0) throw Error(ErrorKind::eigensolver_failure, "dense non-Hermitian eigensolver did not converge");
    RawSpectrum out;
    out.values = w;
    for (int j = 0; j < n; ++j) {
        std::vector<cplx> v(vr.begin() + static_cast<std::ptrdiff_t>(j) * n, vr.begin() + static_cast<std::ptrdiff_t>(j + 1) * n);
        double norm = 0.0, res = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx hv = -w[j] * v[i];
            for (int c = std::max(0, i - 1); c <= std::min(n - 1, i + 1); ++c) hv += op[static_cast<std::size_t>(c) * n + i] * v[c];
            res += std::norm(hv);
            norm += std::norm(v[i]);
        }
        out.max_residual = std::max(out.max_residual, std::sqrt(res / norm));
        fix_sign(v);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

std::size_t nearest(const std::vector<cplx>& values, cplx target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (std::abs(values[i] - target) < std::abs(values[best] - target)) best = i;
    return best;
}

bool conjugate_closed(const std::vector<cplx>& ev) {
    for (cplx e : ev) {
        double tol = 1e-8 * std::max(1.0, std::abs(e));
        if (std::abs(e.imag()) <= tol) continue;
        bool found = std::any_of(ev.begin(), ev.end(), [&](cplx f) { return std::abs(f - std::conj(e)) <= tol; });
        if (!found) return false;
    }
    return true;
}

}  // namespace

const char* to_string(GridBc bc) {
    switch (bc) {
        case GridBc::dirichlet: return "dirichlet";
        case GridBc::periodic: return "periodic";
        case GridBc::antiperiodic: return "antiperiodic";
        default: return "cell_natural";
    }
}

double GridSpec::spacing() const {
    const double len = hi - lo;
    return bc == GridBc::dirichlet ? len / (points + 1) : len / points;
}

std::vector<double> GridSpec::nodes() const {
    std::vector<double> x(points);
    const double h = spacing();
    for (int i = 0; i < points; ++i) {
        switch (bc) {
            case GridBc::dirichlet: x[i] = lo + (i + 1) * h; break;
            case GridBc::cell_natural: x[i] = lo + (i + 0.5) * h; break;
            default: x[i] = lo + i * h; break;
        }
    }
    return x;
}

GridSpec GridSpec::refined() const {
    GridSpec g = *this;
    g.points = bc == GridBc::dirichlet ? 2 * points + 1 : 2 * points;
    return g;
}

double richardson(double coarse, double fine, int order) { return fine + (fine - coarse) / (std::pow(2.0, order) - 1.0); }

cplx richardson(cplx coarse, cplx fine, int order) { return fine + (fine - coarse) / (std::pow(2.0, order) - 1.0); }

unsigned max_threads() {
    unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("QHJ_NUM_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(std::min<long>(v, hw));
    }
    return hw;
}

int count_nodes(const std::vector<double>& v) {
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    const double floor = 1e-10 * peak;
    int nodes = 0, last = 0;
    for (double x : v) {
        if (std::abs(x) <= floor) continue;
        int s = x > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++nodes;
        last = s;
    }
    return nodes;
}

int count_nodes(const std::vector<cplx>& v) {
    std::vector<double> r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(x.real());
    return count_nodes(r);
}

OracleSpectrum solve_sturm_liouville(const SturmLiouville& problem, const GridSpec& grid, int k, double tol) {
    if (grid.points < 64) throw Error(ErrorKind::grid_too_coarse, "grids need at least 64 points");
    if (k > grid.points / 10) throw Error(ErrorKind::grid_too_coarse, "too many states requested for this grid");
    const GridSpec fine = grid.refined();
    auto [c, f] = run_pair([&](const GridSpec& g) { return solve_real(problem, g, k); }, grid, fine);
    return extrapolate_real(c, f, fine, grid.bc, tol);
}

OracleSpectrum solve_bound(const PotentialModel& model, const GridSpec& grid, int k, double tol) {
    if (model.domain.bc != BoundaryTag::dirichlet && model.domain.bc != BoundaryTag::decaying)
        throw Error(ErrorKind::invalid_state, model.name + ": bound-state oracle needs a dirichlet or decaying model");
    GridSpec g = grid;
    g.bc = GridBc::dirichlet;
    SturmLiouville p{[&model](double x) { return model.potential(x).real(); }, nullptr};
    return solve_sturm_liouville(p, g, k, tol);
}

OracleSpectrum solve_band_edges(const PotentialModel& model, const GridSpec& grid, int k, double tol) {
    if (model.domain.period <= 0.0) throw Error(ErrorKind::invalid_state, model.name + ": band-edge oracle needs a periodic model");
    SturmLiouville p{[&model](double x) { return model.potential(x).real(); }, nullptr};
    OracleSpectrum all;
    std::vector<std::size_t> order;
    for (GridBc bc : {GridBc::periodic, GridBc::antiperiodic}) {
        GridSpec g = grid;
        g.bc = bc;
        OracleSpectrum part = solve_sturm_liouville(p, g, k, tol);
        all.xs = part.xs;
        for (std::size_t j = 0; j < part.eigenvalues.size(); ++j) {
            all.eigenvalues.push_back(part.eigenvalues[j]);
            all.error_estimates.push_back(part.error_estimates[j]);
            all.eigenvectors.push_back(std::move(part.eigenvectors[j]));
            all.node_counts.push_back(part.node_counts[j]);
            all.bc.push_back(bc);
        }
    }
    std::vector<std::size_t> idx(all.eigenvalues.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return all.eigenvalues[a].real() < all.eigenvalues[b].real(); });
    OracleSpectrum out;
    out.xs = all.xs;
    for (std::size_t i : idx) {
        out.eigenvalues.push_back(all.eigenvalues[i]);
        out.error_estimates.push_back(all.error_estimates[i]);
        out.eigenvectors.push_back(std::move(all.eigenvectors[i]));
        out.node_counts.push_back(all.node_counts[i]);
        out.bc.push_back(all.bc[i]);
    }
    out.hermitian = true;
    out.conjugate_closed = true;
    return out;
}

Contour real_line() {
    return Contour{[](double u) { return cplx(u); }, [](double) { return cplx(1.0); }};
}

Contour default_contour(const PotentialModel& model) {
    if (model.id == ModelId::khare_mandal) {
        // Tends to Re x +- i pi/4, where cosh 2x is imaginary and -V grows like sinh^2.
        const double tilt = std::numbers::pi / 4.0;
        return Contour{[tilt](double u) { return cplx(u, tilt * std::tanh(u)); },
                       [tilt](double u) {
                           double c = std::cosh(u);
                           return cplx(1.0, tilt / (c * c));
                       }};
    }
    return real_line();
}

OracleSpectrum solve_pt(const PotentialModel& model, const GridSpec& grid, int k, const std::vector<cplx>& predictions,
                        const Contour& contour) {
    GridSpec g = grid;
    g.bc = GridBc::dirichlet;
    const GridSpec fine = g.refined();
    if (fine.points > 800) throw Error(ErrorKind::invalid_state, "dense PT solves are capped at 800 points");
    if (g.points < 64) throw Error(ErrorKind::grid_too_coarse, "grids need at least 64 points");
    const Contour ct = contour.x ? contour : default_contour(model);
    auto [c, f] = run_pair([&](const GridSpec& s) { return solve_complex(model, ct, s); }, g, fine);

    std::vector<std::size_t> pick;
    if (!predictions.empty()) {
        for (cplx p : predictions) pick.push_back(nearest(f.values, p));
    } else {
        std::vector<std::size_t> idx(f.values.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return f.values[a].real() < f.values[b].real();
        });
        idx.resize(std::min<std::size_t>(static_cast<std::size_t>(k), idx.size()));
        pick = idx;
    }
    OracleSpectrum o;
    o.xs = fine.nodes();
    o.hermitian = false;
    o.max_residual = f.max_residual;
    for (std::size_t i : pick) {
        cplx ef = f.values[i];
        cplx ec = c.values[nearest(c.values, ef)];
        cplx e = richardson(ec, ef);
        o.eigenvalues.push_back(e);
        o.error_estimates.push_back(std::abs(e - ef));
        o.eigenvectors.push_back(f.vectors[i]);
        o.bc.push_back(GridBc::dirichlet);
    }
    o.conjugate_closed = conjugate_closed(o.eigenvalues);
    return o;
}

}  // namespace qhj

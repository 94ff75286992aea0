#include "qhj/pencil.hpp"

#include "qhj/errors.hpp"
#include "qhj/special_functions.hpp"
#include "qhj/wavefunction.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace qhj {

namespace {

using namespace std::complex_literals;

constexpr double kOverflowTol = 1e-10;
constexpr double kClusterTol = 1e-8;
constexpr double kKernelTol = 1e-7;

double rel_gap(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

// Quotient of num by den, which must divide it.
Poly exact_quotient(const Poly& num, const Poly& den, const std::string& what) {
    auto [q, r] = num.divmod(den);
    double scale = std::max(1.0, num.max_abs());
    if (r.max_abs() > 1e-10 * scale)
        throw Error(ErrorKind::invalid_state, what + ": residues do not cancel the double poles of G");
    return q;
}

bool energy_enters_residues(const PotentialModel& m) {
    for (const auto& p : m.poles)
        if (p.energy_dependent) return true;
    InfinityExpansion a = m.infinity(Exact(-1)), b = m.infinity(Exact(-2));
    return !same_value(a.G0, b.G0, 1e-14);
}

cplx clean(cplx z, double scale) {
    const double tol = 1e-12 * std::max(1.0, scale);
    return {std::abs(z.real()) <= tol ? 0.0 : z.real(), std::abs(z.imag()) <= tol ? 0.0 : z.imag()};
}

// Interior sample points of the model's sample interval.
std::vector<double> interior(const PotentialModel& m, int points) {
    std::vector<double> x(points);
    const double lo = m.sample_interval.first, hi = m.sample_interval.second;
    for (int k = 0; k < points; ++k) x[k] = lo + (hi - lo) * (k + 1) / (points + 1);
    return x;
}

// Number of independent columns among unit-normalized samples.
std::vector<std::size_t> independent(const std::vector<std::vector<cplx>>& cols) {
    std::vector<std::vector<cplx>> basis;
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        std::vector<cplx> v = cols[c];
        double n0 = 0.0;
        for (const auto& x : v) n0 += std::norm(x);
        if (n0 == 0.0) continue;
        for (auto& x : v) x /= std::sqrt(n0);
        for (const auto& b : basis) {
            cplx dot = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(b[i]) * v[i];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * b[i];
        }
        double n1 = 0.0;
        for (const auto& x : v) n1 += std::norm(x);
        if (std::sqrt(n1) <= 1e-6) continue;
        for (auto& x : v) x /= std::sqrt(n1);
        basis.push_back(std::move(v));
        kept.push_back(c);
    }
    return kept;
}

}  // namespace

PencilSystem build_pencil(const PotentialModel& m, const ResidueAssignment& a) {
    if (!a.admissible || a.n < 0) throw Error(ErrorKind::invalid_state, m.name + ": pencil needs an admissible assignment");
    const bool fixed = m.fixed_energy_pencil;
    if (!fixed && energy_enters_residues(m))
        throw Error(ErrorKind::nonlinear_in_energy, m.name + ": E enters the residues, so the system is not linear in E");
    if (fixed && !a.energy) throw Error(ErrorKind::invalid_state, m.name + ": fixed-energy system needs the level energy");

    std::vector<cplx> ys;
    for (const auto& p : m.poles) ys.push_back(p.location);
    const Poly D1 = Poly::from_roots(ys);
    Poly A = a.a0.value() * D1;
    Poly DS;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        std::vector<cplx> others;
        for (std::size_t j = 0; j < ys.size(); ++j)
            if (j != i) others.push_back(ys[j]);
        Poly L = Poly::from_roots(others);
        const cplx b = a.residues[i].value();
        A += b * L;
        DS -= b * (L * L);
    }
    const Poly Q0 = A * A + DS + m.N0;
    Poly R0, R1;
    PencilSystem sys;
    sys.n = static_cast<int>(a.n);
    const double e_size = a.energy ? std::abs(a.energy->value()) : 1.0;
    sys.scale = std::max({1.0, (A * A).max_abs(), DS.max_abs(), m.N0.max_abs(), e_size * m.N1.max_abs(),
                          sys.n * (A.max_abs() + sys.n * D1.max_abs())});
    if (fixed) {
        const cplx E = a.energy->value();
        R0 = exact_quotient(Q0 + E * m.N1, D1, m.name);
        sys.fixed_energy = E;
    } else {
        R0 = exact_quotient(Q0, D1, m.name);
        R1 = exact_quotient(m.N1, D1, m.name);
    }

    for (int d = 0; d <= sys.n; ++d)
        if (!m.parity_basis || (d - sys.n) % 2 == 0) sys.basis.push_back(d);
    const int k = static_cast<int>(sys.basis.size());

    std::vector<Poly> img0, img1;
    int top = 0;
    for (int d : sys.basis) {
        Poly p0 = R0 * Poly::monomial(d);
        if (d >= 1) p0 += (2.0 * d) * (A * Poly::monomial(d - 1));
        if (d >= 2) p0 += static_cast<double>(d * (d - 1)) * (D1 * Poly::monomial(d - 2));
        Poly p1 = R1 * Poly::monomial(d);
        top = std::max({top, static_cast<int>(p0.coeffs().size()), static_cast<int>(p1.coeffs().size())});
        img0.push_back(std::move(p0));
        img1.push_back(std::move(p1));
    }
    sys.M0 = Eigen::MatrixXcd::Zero(k, k);
    sys.M1 = Eigen::MatrixXcd::Zero(k, k);
    double kept = 0.0, dropped = 0.0;
    for (int c = 0; c < k; ++c) {
        for (int deg = 0; deg < top; ++deg) {
            auto row = std::find(sys.basis.begin(), sys.basis.end(), deg);
            cplx v0 = img0[c].coeff(deg), v1 = img1[c].coeff(deg);
            if (row == sys.basis.end()) {
                dropped = std::max({dropped, std::abs(v0), std::abs(v1)});
                continue;
            }
            const int r = static_cast<int>(row - sys.basis.begin());
            sys.M0(r, c) = v0;
            sys.M1(r, c) = v1;
            kept = std::max({kept, std::abs(v0), std::abs(v1)});
        }
    }
    sys.overflow_residual = dropped / std::max(1.0, kept);
    if (sys.overflow_residual > kOverflowTol)
        throw Error(ErrorKind::overflow_row, m.name + ": coefficient rows beyond the basis do not vanish (" +
                                                 format_double(sys.overflow_residual) + ")");
    return sys;
}

std::vector<PencilRoot> solve_pencil(const PencilSystem& sys) {
    const int k = static_cast<int>(sys.basis.size());
    std::vector<cplx> eig;
    if (sys.fixed_energy) {
        eig.push_back(*sys.fixed_energy);
    } else {
        Eigen::MatrixXcd a = sys.M0, b = -sys.M1;
        std::vector<cplx> alpha(k), beta(k);
        lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', k, reinterpret_cast<lapack_complex_double*>(a.data()), k,
                                        reinterpret_cast<lapack_complex_double*>(b.data()), k,
                                        reinterpret_cast<lapack_complex_double*>(alpha.data()),
                                        reinterpret_cast<lapack_complex_double*>(beta.data()), nullptr, 1, nullptr, 1);
        if (info != 0) throw Error(ErrorKind::eigensolver_failure, "generalized eigensolver failed");
        for (int i = 0; i < k; ++i) {
            if (std::abs(beta[i]) <= 1e-11 * std::max(std::abs(alpha[i]), std::abs(beta[i]))) continue;
            eig.push_back(alpha[i] / beta[i]);
        }
        if (eig.empty() && k > 0) throw Error(ErrorKind::singular_pencil, "pencil has no finite eigenvalue");
    }

    struct Cluster {
        cplx sum;
        int count;
        cplx mean() const { return sum / static_cast<double>(count); }
    };
    std::vector<Cluster> clusters;
    for (cplx e : eig) {
        auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& c) { return rel_gap(c.mean(), e) <= kClusterTol; });
        if (it == clusters.end())
            clusters.push_back({e, 1});
        else {
            it->sum += e;
            ++it->count;
        }
    }

    std::vector<PencilRoot> roots;
    for (const auto& c : clusters) {
        PencilRoot root;
        root.energy = c.mean();
        root.multiplicity = c.count;
        Eigen::MatrixXcd M = sys.M0 + root.energy * sys.M1;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        const double smax = std::max(s.size() ? s(0) : 0.0, sys.scale);
        int dim = 0;
        for (int i = k - 1; i >= 0; --i)
            if (s(i) <= kKernelTol * smax) ++dim;
        if (sys.fixed_energy && k > 0 && s(k - 1) > kKernelTol * smax)
            throw Error(ErrorKind::singular_pencil, "system at the level energy has no kernel (smallest singular value " +
                                                        format_double(s(k - 1) / smax) + ")");
        dim = std::max(dim, k > 0 ? 1 : 0);
        std::vector<Eigen::VectorXcd> vecs;
        for (int i = 0; i < dim; ++i) vecs.push_back(svd.matrixV().col(k - 1 - i));
        // Put the vector with the largest leading coefficient first and clear the leading entry of the rest.
        std::stable_sort(vecs.begin(), vecs.end(), [k](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
            return std::abs(x(k - 1)) > std::abs(y(k - 1));
        });
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            auto& v = vecs[i];
            if (i == 0) {
                if (std::abs(v(k - 1)) > 1e-10 * v.norm()) {
                    v /= v(k - 1);
                    root.full_degree.push_back(true);
                } else {
                    v /= v.norm();
                    root.full_degree.push_back(false);
                }
            } else {
                if (root.full_degree[0]) v -= v(k - 1) * vecs[0];
                v /= v.norm();
                root.full_degree.push_back(false);
            }
        }
        root.kernel = std::move(vecs);
        root.defective = dim != (sys.fixed_energy ? 1 : root.multiplicity);
        roots.push_back(std::move(root));
    }
    return roots;
}

std::optional<ClosedForm> closed_form_check(const PotentialModel& m, const ResidueAssignment& a) {
    const int n = static_cast<int>(a.n);
    if (n < 0) return std::nullopt;
    switch (m.id) {
        case ModelId::scarf1:
        case ModelId::complex_scarf: {
            cplx al = 2.0 * a.residues[0].value() - 1.0, be = 2.0 * a.residues[1].value() - 1.0;
            return ClosedForm{"jacobi", al, be, [=](cplx y) { return jacobi_polynomial(n, al, be, y); }};
        }
        case ModelId::scarf_periodic: {
            cplx nu = 2.0 * a.residues[0].value() - 1.0;
            return ClosedForm{"jacobi", nu, nu, [=](cplx y) { return jacobi_polynomial(n, nu, nu, -1i * y); }};
        }
        case ModelId::hydrogen: {
            cplx k = 2.0 * a.residues[0].value() - 1.0, c = a.a0.value();
            return ClosedForm{"laguerre", k, 0.0, [=](cplx y) { return laguerre(n, k, -2.0 * c * y); }};
        }
        default: return std::nullopt;
    }
}

double closed_form_difference(const PotentialModel& m, const ClosedForm& form, const PolynomialOnT& p) {
    std::vector<cplx> f, q;
    for (double x : interior(m, 20)) {
        cplx y = m.y_of_x(x);
        f.push_back(form.evaluate(y));
        q.push_back(p(y));
    }
    cplx num = 0.0;
    double den = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        num += std::conj(q[i]) * f[i];
        den += std::norm(q[i]);
        peak = std::max(peak, std::abs(f[i]));
    }
    if (den == 0.0 || peak == 0.0) return INFINITY;
    cplx s = num / den;
    double diff = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) diff = std::max(diff, std::abs(f[i] - s * q[i]));
    return diff / peak;
}

std::vector<BandEdgeSolution> solve_assignment(const PotentialModel& m, const ResidueAssignment& a) {
    const PencilSystem sys = build_pencil(m, a);
    std::vector<BandEdgeSolution> out;
    for (const auto& root : solve_pencil(sys)) {
        for (std::size_t i = 0; i < root.kernel.size(); ++i) {
            if (!root.full_degree[i]) continue;
            if (a.energy && rel_gap(root.energy, a.energy->value()) > kClusterTol) continue;
            BandEdgeSolution s;
            s.energy = clean(root.energy, std::abs(root.energy));
            s.exact_energy = a.energy;
            s.assignment = a;
            s.defective = root.defective;
            s.polynomial.coeffs.assign(static_cast<std::size_t>(sys.n) + 1, 0.0);
            double scale = root.kernel[i].cwiseAbs().maxCoeff();
            for (std::size_t r = 0; r < sys.basis.size(); ++r)
                s.polynomial.coeffs[sys.basis[r]] = clean(root.kernel[i](static_cast<int>(r)), scale);
            s.recipe = m.recipe(a);
            s.polynomial.parity = s.recipe.polynomial.parity;
            s.recipe.polynomial = s.polynomial;
            out.push_back(std::move(s));
        }
    }
    if (a.energy && out.empty())
        throw Error(ErrorKind::invalid_state, m.name + ": pencil does not reproduce the level energy " + a.energy->str());
    return out;
}

Spectrum solve_spectrum(const PotentialModel& m, int levels) {
    Spectrum sp;
    sp.outcome = quantize(m, levels);
    std::vector<BandEdgeSolution> all;
    for (const auto& a : sp.outcome.assignments)
        for (auto& s : solve_assignment(m, a)) all.push_back(std::move(s));
    std::stable_sort(all.begin(), all.end(), [](const BandEdgeSolution& x, const BandEdgeSolution& y) {
        if (rel_gap(x.energy, y.energy) <= kClusterTol) return false;
        if (x.energy.real() != y.energy.real()) return x.energy.real() < y.energy.real();
        return x.energy.imag() < y.energy.imag();
    });

    const std::vector<double> xs = interior(m, 41);
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i + 1;
        while (j < all.size() && rel_gap(all[j].energy, all[i].energy) <= kClusterTol) ++j;
        std::vector<std::vector<cplx>> cols;
        for (std::size_t t = i; t < j; ++t) {
            std::vector<cplx> col;
            for (double x : xs) col.push_back(evaluate(all[t].recipe, x));
            cols.push_back(std::move(col));
        }
        auto keep = independent(cols);
        for (std::size_t idx : keep) {
            BandEdgeSolution s = all[i + idx];
            s.degeneracy = static_cast<int>(keep.size());
            sp.solutions.push_back(std::move(s));
        }
        i = j;
    }
    return sp;
}

double ode_residual(const PotentialModel& m, const BandEdgeSolution& s, int points, double h) {
    static constexpr double w[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
    double worst = 0.0, scale = 0.0;
    for (double x : interior(m, points)) {
        cplx psi = evaluate(s.recipe, x);
        cplx d2 = w[0] * psi;
        for (int k = 1; k <= 4; ++k) d2 += w[k] * (evaluate(s.recipe, x + k * h) + evaluate(s.recipe, x - k * h));
        d2 /= h * h;
        cplx v = m.potential(x);
        worst = std::max(worst, std::abs(-d2 + v * psi - s.energy * psi));
        scale = std::max(scale, std::abs(d2) + std::abs(v * psi) + std::abs(s.energy * psi));
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace qhj

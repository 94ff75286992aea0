#include "qhj/catalog.hpp"

#include "qhj/errors.hpp"
#include "qhj/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qhj {

namespace {

using namespace std::complex_literals;

constexpr double pi = std::numbers::pi;

Exact frac(long long p, long long q) { return Exact(Rational(p, q)); }

bool eq(const Exact& a, const Exact& b) { return same_value(a, b, 1e-12); }

[[noreturn]] void domain_error(const std::string& what) { throw Error(ErrorKind::parameter_domain, what); }

double real_arg(cplx x, const char* model) {
    if (std::abs(x.imag()) > 0.0) domain_error(std::string(model) + ": elliptic models accept real x only");
    return x.real();
}

long long positive_integer(const Exact& v, const char* name) {
    auto k = v.as_integer(0.0);
    if (!v.is_real() || !k || *k < 1) domain_error(std::string(name) + " must be a positive integer");
    return *k;
}

void check_modulus(double m) {
    if (!(m > 0.0 && m < 1.0)) domain_error("m must satisfy 0 < m < 1");
}

const std::vector<ModelInfo>& info_table() {
    static const std::vector<ModelInfo> table = {
        {ModelId::hydrogen, "hydrogen", SpectrumClass::es, "y = r",
         {{"e2", "Coulomb coupling e^2 > 0"}, {"l", "angular momentum, integer >= 0"}}},
        {ModelId::scarf1, "scarf1", SpectrumClass::es, "y = sin(alpha x)",
         {{"A", "well strength, A - B != 0"}, {"B", "asymmetry, A + B != 0"}, {"alpha", "inverse width > 0"}}},
        {ModelId::scarf_periodic, "scarf_periodic", SpectrumClass::band, "y = cot x",
         {{"s", "s > 0, s != 1/2; s < 1/2 band phase, s > 1/2 bound phase"}}},
        {ModelId::lame, "lame", SpectrumClass::band, "y = sn(x|m)",
         {{"j", "integer >= 1"}, {"m", "elliptic parameter, 0 < m < 1"}}},
        {ModelId::assoc_lame_es, "assoc_lame_es", SpectrumClass::band, "y = sn(x|m)",
         {{"j", "integer >= 1 (a = b = j)"}, {"m", "elliptic parameter, 0 < m < 1"}}},
        {ModelId::assoc_lame_qes, "assoc_lame_qes", SpectrumClass::qes, "y = sn(x|m)",
         {{"a", "sn^2 strength index"}, {"b", "cn^2/dn^2 strength index"}, {"m", "elliptic parameter, 0 < m < 1"}}},
        {ModelId::khare_mandal, "khare_mandal", SpectrumClass::pt, "y = cosh 2x",
         {{"zeta", "zeta > 0"}, {"M", "integer >= 1"}}},
        {ModelId::complex_scarf, "complex_scarf", SpectrumClass::pt, "y = i sinh x",
         {{"A", "A > 0"}, {"B", "real"}}},
    };
    return table;
}

// Fills N0, N1, D from phi, vn, vd and the pole locations.
void finalize(PotentialModel& m) {
    const Poly& phi = m.phi;
    Poly d1 = phi.derivative(), d2 = d1.derivative();
    Poly w_num = 3.0 * d1 * d1 - 4.0 * phi * d2;
    Poly num0 = -16.0 * phi * m.vn + m.vd * w_num;
    Poly num1 = 16.0 * phi * m.vd;
    Poly den = 16.0 * m.vd * phi * phi;
    std::vector<cplx> roots;
    for (const auto& p : m.poles) {
        roots.push_back(p.location);
        roots.push_back(p.location);
    }
    m.D = Poly::from_roots(roots);
    auto divide = [&](const Poly& num) {
        auto [q, r] = (num * m.D).divmod(den);
        double scale = std::max(1.0, (num * m.D).max_abs() / std::max(1e-300, den.max_abs()));
        if (r.max_abs() > 1e-9 * scale * std::max(1.0, den.max_abs()))
            throw Error(ErrorKind::invalid_state, m.name + ": fixed-pole list does not clear the denominator of G");
        return q.trimmed(1e-15);
    };
    m.N0 = divide(num0);
    m.N1 = divide(num1);
}

Prefactor factor(std::string label, std::function<cplx(double)> base, Exact exponent, int zeros) {
    return Prefactor{std::move(label), std::move(base), std::move(exponent), zeros};
}

// Larger-real-part residue at a pole where g2 does not depend on E.
Exact fixed_residue(const FixedPole& p, int branch) { return finite_pole_residues(p, Exact(0)).values[branch]; }

// ---------------------------------------------------------------- hydrogen

PotentialModel make_hydrogen(const ParamMap& p) {
    PotentialModel m;
    const Exact e2 = p.at("e2"), lq = p.at("l");
    if (!e2.is_real() || e2.real() <= 0.0) domain_error("hydrogen: e2 must be > 0");
    auto li = lq.as_integer(0.0);
    if (!lq.is_real() || !li || *li < 0) domain_error("hydrogen: l must be an integer >= 0");
    const Exact ll1 = lq * (lq + Exact(1));
    const Exact c = e2 * e2 / (Exact(4) * (lq + Exact(1)) * (lq + Exact(1)));
    const double e2d = e2.real(), ld = ll1.real(), cd = c.real();

    m.y_of_x = [](cplx x) { return x; };
    m.dy_dx = [](cplx) { return cplx(1.0); };
    m.potential = [=](cplx r) {
        if (std::abs(r) == 0.0) throw Error(ErrorKind::singular_sample, "hydrogen: V is singular at r = 0");
        return cd - e2d / r + ld / (r * r);
    };
    m.phi = Poly{1.0};
    m.vn = Poly{ld, -e2d, cd};
    m.vd = Poly{0.0, 0.0, 1.0};
    m.poles.push_back({"r=0", 0.0, [ll1](const Exact&) { return -ll1; }, false});
    m.infinity = [=](const Exact& E) { return InfinityExpansion{E - c, e2, -ll1}; };
    m.residues_depend_on_energy = true;
    m.fixed_energy_pencil = true;
    const FixedPole pole0 = m.poles[0];
    m.energy_of_level = [=](const std::vector<int>& pb, int, long long n) {
        Exact lambda = fixed_residue(pole0, pb[0]) + Exact(n);
        if (lambda.is_zero(1e-14)) return LevelEnergy{std::nullopt, "lambda1 = 0 admits no finite energy"};
        return LevelEnergy{c - e2 * e2 / (Exact(4) * lambda * lambda), ""};
    };
    m.rules.push_back({FilterStage::finiteness, "dirichlet_origin", [](const ResidueAssignment& a) -> std::optional<std::string> {
                           if (a.residues[0].real() > 0.0) return std::nullopt;
                           return "psi ~ r^b1 does not vanish at r = 0 (b1 = " + a.residues[0].str() + ")";
                       }});
    m.rules.push_back({FilterStage::square_integrability, "decay_at_infinity",
                       [](const ResidueAssignment& a) -> std::optional<std::string> {
                           if (a.a0.real() < 0.0) return std::nullopt;
                           return "exp(a0 r) does not decay (a0 = " + a.a0.str() + ")";
                       }});
    m.set_label = [](const ResidueAssignment& a) { return 1 + a.pole_branch[0] + 2 * a.lambda_branch; };
    m.energy_formula = "E_n = e2^2/(4(l+1)^2) - e2^2/(4(n+l+1)^2)";
    m.domain = {0.0, INFINITY, BoundaryTag::decaying, 0.0};
    m.sample_interval = {0.3, 15.0};
    m.recipe = [](const ResidueAssignment& a) {
        WavefunctionRecipe r;
        r.prefactors.push_back(factor("r", [](double x) { return cplx(x); }, a.residues[0], 0));
        r.polynomial_variable_label = "r";
        r.polynomial_variable = [](double x) { return cplx(x); };
        r.polynomial.coeffs.assign(static_cast<std::size_t>(std::max(0LL, a.n)) + 1, 0.0);
        r.polynomial.coeffs.back() = 1.0;
        r.exp_coefficient = a.a0;
        r.exponential_argument = [](double x) { return cplx(x); };
        r.exponential_label = "r";
        return r;
    };
    return m;
}

// ---------------------------------------------------------------- Scarf I

PotentialModel make_scarf1(const ParamMap& p) {
    PotentialModel m;
    const Exact A = p.at("A"), B = p.at("B"), al = p.at("alpha");
    if (!A.is_real() || !B.is_real() || !al.is_real()) domain_error("scarf1: parameters must be real");
    if (al.real() <= 0.0) domain_error("scarf1: alpha must be > 0");
    if ((A - B).is_zero(1e-14) || (A + B).is_zero(1e-14)) domain_error("scarf1: A - B and A + B must be nonzero");
    const double a = A.real(), b = B.real(), alpha = al.real();
    const Exact u = (A - B) / al, up = (A + B) / al;

    m.y_of_x = [alpha](cplx x) { return std::sin(alpha * x); };
    m.dy_dx = [alpha](cplx x) { return alpha * std::cos(alpha * x); };
    m.potential = [=](cplx x) {
        cplx c = std::cos(alpha * x);
        if (std::abs(c) < 1e-300) throw Error(ErrorKind::singular_sample, "scarf1: V is singular at the walls");
        return -a * a + (a * a + b * b - a * alpha) / (c * c) - b * (2.0 * a - alpha) * std::sin(alpha * x) / (c * c);
    };
    m.phi = Poly{alpha * alpha, 0.0, -alpha * alpha};
    m.vn = Poly{b * b - a * alpha, -b * (2.0 * a - alpha), a * a};
    m.vd = Poly{1.0, 0.0, -1.0};
    auto g2_of = [](Exact v) { return frac(3, 16) - (v * v - v) / Exact(4); };
    const Exact g_plus = g2_of(u), g_minus = g2_of(up);
    m.poles.push_back({"y=1", 1.0, [g_plus](const Exact&) { return g_plus; }, false});
    m.poles.push_back({"y=-1", -1.0, [g_minus](const Exact&) { return g_minus; }, false});
    m.infinity = [=](const Exact& E) {
        return InfinityExpansion{Exact(0), Exact(0), frac(1, 4) - (E + A * A) / (al * al)};
    };
    m.residues_depend_on_energy = true;
    const auto poles = m.poles;
    m.energy_of_level = [=](const std::vector<int>& pb, int, long long n) {
        Exact lambda = fixed_residue(poles[0], pb[0]) + fixed_residue(poles[1], pb[1]) + Exact(n);
        Exact h = lambda - frac(1, 2);
        return LevelEnergy{al * al * h * h - A * A, ""};
    };
    // b1 = u/2 + 1/4 keeps psi ~ cos^u vanishing when u > 0; b1 = 3/4 - u/2 when u < 0.
    auto phase_rule = [](int pole, Exact uu, const char* where) {
        return [=](const ResidueAssignment& a) -> std::optional<std::string> {
            const Exact& b1 = a.residues[pole];
            bool growing = eq(b1, uu / Exact(2) + frac(1, 4));
            bool ok = growing ? uu.real() > 0.0 : uu.real() < 0.0;
            if (ok) return std::nullopt;
            return std::string("residue ") + b1.str() + " at " + where + " gives a non-vanishing psi for this phase";
        };
    };
    m.rules.push_back({FilterStage::phase, "phase_y_plus", phase_rule(0, u, "y=1")});
    m.rules.push_back({FilterStage::phase, "phase_y_minus", phase_rule(1, up, "y=-1")});
    m.set_label = [=](const ResidueAssignment& a) {
        int bit0 = eq(a.residues[0], u / Exact(2) + frac(1, 4)) ? 0 : 1;
        int bit1 = eq(a.residues[1], up / Exact(2) + frac(1, 4)) ? 0 : 1;
        return 1 + bit0 + 2 * bit1;
    };
    m.energy_formula = "E_n = alpha^2 (b1 + b1' + n - 1/2)^2 - A^2";
    double wall = pi / (2.0 * alpha);
    m.domain = {-wall, wall, BoundaryTag::dirichlet, 0.0};
    m.sample_interval = {-0.9 * wall, 0.9 * wall};
    m.recipe = [alpha, y = m.y_of_x](const ResidueAssignment& a) {
        WavefunctionRecipe r;
        r.prefactors.push_back(factor("1 - sin(alpha x)", [alpha](double x) { return cplx(1.0 - std::sin(alpha * x)); },
                                      a.residues[0] - frac(1, 4), 0));
        r.prefactors.push_back(factor("1 + sin(alpha x)", [alpha](double x) { return cplx(1.0 + std::sin(alpha * x)); },
                                      a.residues[1] - frac(1, 4), 0));
        r.polynomial_variable_label = "sin(alpha x)";
        r.polynomial_variable = [y](double x) { return y(cplx(x)); };
        r.polynomial.coeffs.assign(static_cast<std::size_t>(std::max(0LL, a.n)) + 1, 0.0);
        r.polynomial.coeffs.back() = 1.0;
        r.exp_coefficient = Exact(0);
        return r;
    };
    return m;
}

// ---------------------------------------------------------------- periodic Scarf

PotentialModel make_scarf_periodic(const ParamMap& p) {
    PotentialModel m;
    const Exact s = p.at("s");
    if (!s.is_real() || s.real() <= 0.0) domain_error("scarf_periodic: s must be > 0");
    if (eq(s, frac(1, 2))) domain_error("scarf_periodic: s = 1/2 is the free limit");
    const double sd = s.real();
    const Exact c = s * s - frac(1, 4);
    const double cd = c.real();

    m.y_of_x = [](cplx x) { return std::cos(x) / std::sin(x); };
    m.dy_dx = [](cplx x) { return -1.0 / (std::sin(x) * std::sin(x)); };
    m.potential = [cd](cplx x) {
        cplx sn = std::sin(x);
        if (std::abs(sn) < 1e-300) throw Error(ErrorKind::singular_sample, "scarf_periodic: V is singular at x = k pi");
        return cd / (sn * sn);
    };
    m.phi = Poly{1.0, 0.0, 2.0, 0.0, 1.0};
    m.vn = Poly{cd, 0.0, cd};
    m.vd = Poly{1.0};
    auto g2 = [](const Exact& E) { return (Exact(1) - E) / Exact(4); };
    m.poles.push_back({"y=i", 1i, g2, true});
    m.poles.push_back({"y=-i", -1i, g2, true});
    m.infinity = [s](const Exact&) { return InfinityExpansion{Exact(0), Exact(0), frac(1, 4) - s * s}; };
    m.parity_pairs = {{0, 1}};
    m.parity_basis = true;
    m.residues_depend_on_energy = true;
    m.fixed_energy_pencil = true;
    auto lambda_of = [s](int branch) {
        return infinity_residues({Exact(0), Exact(0), frac(1, 4) - s * s})[branch].lambda1;
    };
    m.energy_of_level = [=](const std::vector<int>& pb, int lb, long long n) {
        if (pb[0] != pb[1]) return LevelEnergy{std::nullopt, "parity: b1 != b1'"};
        Exact b = (lambda_of(lb) - Exact(n)) / Exact(2);
        Exact kappa = Exact(1) - Exact(2) * b;  // sqrt(E) for the smaller root b = (1 - sqrt E)/2
        if (pb[0] == 0) {
            if (kappa.real() > 0.0)
                return LevelEnergy{std::nullopt, "n_negative: n = d1 - 1 - sqrt(E) < 0 for sqrt(E) > 0"};
        } else if (kappa.real() <= 0.0) {
            return LevelEnergy{std::nullopt, "sqrt(E) = 1 - 2 b1 must be > 0"};
        }
        return LevelEnergy{kappa * kappa, ""};
    };
    m.rules.push_back({FilterStage::lambda_branch, "finiteness_at_infinity",
                       [](const ResidueAssignment& a) -> std::optional<std::string> {
                           if ((Exact(1) - a.lambda1).real() > 0.0) return std::nullopt;
                           return "psi ~ y^(d1 - 1) diverges at the cell walls (d1 = " + a.lambda1.str() + ")";
                       }});
    const Exact d_low = frac(1, 2) - s;
    m.set_label = [d_low](const ResidueAssignment& a) {
        bool low = eq(a.lambda1, d_low);
        if (a.pole_branch[0] == 1) return low ? 1 : 2;
        return low ? 3 : 4;
    };
    m.energy_formula = "E = (1 - 2 b1)^2 with 2 b1 + n = d1";
    m.domain = {0.0, pi, sd < 0.5 ? BoundaryTag::periodic_union : BoundaryTag::dirichlet, pi};
    m.sample_interval = {0.2, pi - 0.2};
    m.recipe = [y = m.y_of_x](const ResidueAssignment& a) {
        WavefunctionRecipe r;
        r.prefactors.push_back(factor("sin(x)^2", [](double x) { return cplx(std::sin(x) * std::sin(x)); },
                                      frac(1, 2) - a.residues[0], 1));
        r.polynomial_variable_label = "cot x";
        r.polynomial_variable = [y](double x) { return y(cplx(x)); };
        r.polynomial.coeffs.assign(static_cast<std::size_t>(std::max(0LL, a.n)) + 1, 0.0);
        r.polynomial.coeffs.back() = 1.0;
        r.polynomial.parity = a.n % 2 == 0 ? Parity::even : Parity::odd;
        r.exp_coefficient = Exact(0);
        return r;
    };
    return m;
}

// ---------------------------------------------------------------- elliptic family

struct EllipticSpec {
    Exact a;       // sn^2 index
    Exact b;       // cn^2/dn^2 index, 0 for plain Lame
    double shift;  // additive constant in V
    bool associated;
};

PotentialModel make_elliptic(const EllipticSpec& e, double m_param) {
    PotentialModel m;
    const double md = m_param;
    const double A = (e.a * (e.a + Exact(1))).real();
    const double Bc = (e.b * (e.b + Exact(1))).real();
    const double shift = e.shift;
    const bool assoc = e.associated;

    m.y_of_x = [md](cplx x) { return cplx(jacobi_elliptic(real_arg(x, "elliptic"), md).sn); };
    m.dy_dx = [md](cplx x) {
        auto t = jacobi_elliptic(real_arg(x, "elliptic"), md);
        return cplx(t.cn * t.dn);
    };
    m.potential = [=](cplx x) {
        auto t = jacobi_elliptic(real_arg(x, "elliptic"), md);
        double v = A * md * t.sn * t.sn + shift;
        if (assoc) v += Bc * md * t.cn * t.cn / (t.dn * t.dn);
        return cplx(v);
    };
    m.phi = Poly{1.0, 0.0, -(1.0 + md), 0.0, md};
    if (assoc) {
        // A m y^2 (1 - m y^2) + B m (1 - y^2) + shift (1 - m y^2) over 1 - m y^2
        m.vn = Poly{Bc * md + shift, 0.0, A * md - Bc * md - shift * md, 0.0, -A * md * md};
        m.vd = Poly{1.0, 0.0, -md};
    } else {
        m.vn = Poly{shift, 0.0, A * md};
        m.vd = Poly{1.0};
    }
    const double rm = 1.0 / std::sqrt(md);
    const Exact g_t = frac(3, 16);
    const Exact g_d = frac(3, 16) - e.b * (e.b + Exact(1)) / Exact(4);
    m.poles.push_back({"t=1", 1.0, [g_t](const Exact&) { return g_t; }, false});
    m.poles.push_back({"t=-1", -1.0, [g_t](const Exact&) { return g_t; }, false});
    m.poles.push_back({"t=1/sqrt(m)", rm, [g_d](const Exact&) { return g_d; }, false});
    m.poles.push_back({"t=-1/sqrt(m)", -rm, [g_d](const Exact&) { return g_d; }, false});
    const Exact g_inf = -(e.a * (e.a + Exact(1)));
    m.infinity = [g_inf](const Exact&) { return InfinityExpansion{Exact(0), Exact(0), g_inf}; };
    m.parity_pairs = {{0, 1}, {2, 3}};
    m.parity_basis = true;
    const double K = elliptic_K(md);
    m.domain = {0.0, 2.0 * K, BoundaryTag::periodic_union, 2.0 * K};
    m.sample_interval = {-2.0 * K, 2.0 * K};
    m.recipe = [md, y = m.y_of_x](const ResidueAssignment& a) {
        WavefunctionRecipe r;
        r.prefactors.push_back(factor("cn x", [md](double x) { return cplx(jacobi_elliptic(x, md).cn); },
                                      Exact(2) * a.residues[0] - frac(1, 2), 1));
        r.prefactors.push_back(factor("dn x", [md](double x) { return cplx(jacobi_elliptic(x, md).dn); },
                                      Exact(2) * a.residues[2] - frac(1, 2), 0));
        r.polynomial_variable_label = "sn x";
        r.polynomial_variable = [y](double x) { return y(cplx(x)); };
        r.polynomial.coeffs.assign(static_cast<std::size_t>(std::max(0LL, a.n)) + 1, 0.0);
        r.polynomial.coeffs.back() = 1.0;
        r.polynomial.parity = a.n % 2 == 0 ? Parity::even : Parity::odd;
        r.exp_coefficient = Exact(0);
        return r;
    };
    return m;
}

int table_label(const ResidueAssignment& a, const std::array<std::pair<Exact, Exact>, 4>& rows) {
    for (int k = 0; k < 4; ++k)
        if (eq(a.residues[0], rows[k].first) && eq(a.residues[2], rows[k].second)) return k + 1;
    return 0;
}

PotentialModel make_lame(const ParamMap& p) {
    const long long j = positive_integer(p.at("j"), "lame: j");
    const double md = p.at("m").real();
    if (!p.at("m").is_real()) domain_error("lame: m must be real");
    check_modulus(md);
    double shift = 0.0;
    if (j == 1) shift = -md;
    if (j == 2) shift = 2.0 * std::sqrt(1.0 - md + md * md) - 2.0 * md - 2.0;
    PotentialModel m = make_elliptic({Exact(j), Exact(0), shift, false}, md);
    const Exact q1 = frac(1, 4), q3 = frac(3, 4);
    m.set_label = [=](const ResidueAssignment& a) {
        return table_label(a, {{{q1, q1}, {q3, q1}, {q1, q3}, {q3, q3}}});
    };
    m.energy_formula = "eigenvalues of the coefficient pencil";
    return m;
}

PotentialModel make_assoc_es(const ParamMap& p) {
    const long long j = positive_integer(p.at("j"), "assoc_lame_es: j");
    const double md = p.at("m").real();
    if (!p.at("m").is_real()) domain_error("assoc_lame_es: m must be real");
    check_modulus(md);
    double shift = j == 1 ? -2.0 - md + 2.0 * std::sqrt(1.0 - md) : 0.0;
    PotentialModel m = make_elliptic({Exact(j), Exact(j), shift, true}, md);
    const Exact q1 = frac(1, 4), q3 = frac(3, 4);
    const Exact dl = Exact(Rational(1 - 2 * j, 4)), dh = Exact(Rational(3 + 2 * j, 4));
    m.set_label = [=](const ResidueAssignment& a) {
        return table_label(a, {{{q1, dl}, {q3, dl}, {q1, dh}, {q3, dh}}});
    };
    m.energy_formula = "eigenvalues of the coefficient pencil";
    return m;
}

PotentialModel make_assoc_qes(const ParamMap& p) {
    const Exact a = p.at("a"), b = p.at("b");
    if (!a.is_real() || !b.is_real() || !p.at("m").is_real()) domain_error("assoc_lame_qes: parameters must be real");
    const double md = p.at("m").real();
    check_modulus(md);
    double shift = 0.0;
    if (eq(a, Exact(2)) && eq(b, Exact(1))) shift = -4.0 * md;
    if (eq(a, frac(7, 2)) && eq(b, frac(1, 2)))
        shift = -2.0 - 29.0 * md / 4.0 + std::sqrt(4.0 - 4.0 * md + 25.0 * md * md);
    PotentialModel m = make_elliptic({a, b, shift, true}, md);
    const Exact q1 = frac(1, 4), q3 = frac(3, 4);
    const Exact dh = q3 + b / Exact(2), dl = q1 - b / Exact(2);
    const Exact keep = a + Exact(1);
    m.rules.push_back({FilterStage::lambda_branch, "mirror_branch",
                       [keep](const ResidueAssignment& x) -> std::optional<std::string> {
                           if (eq(x.lambda1, keep)) return std::nullopt;
                           return "lambda1 = -a is the image of lambda1 = a+1 under a -> -a-1";
                       }});
    m.set_label = [=](const ResidueAssignment& x) {
        return table_label(x, {{{q3, dh}, {q3, dl}, {q1, dh}, {q1, dl}}});
    };
    m.qes_relation = [](const ResidueAssignment& x) -> std::string {
        switch (x.set_label) {
            case 1: return "b-a = -n-2";
            case 2: return "a+b+1 = n+2";
            case 3: return "b-a = -n-1";
            case 4: return "a+b = n";
            default: return "";
        }
    };
    m.energy_formula = "eigenvalues of the coefficient pencil";
    return m;
}

// ---------------------------------------------------------------- Khare-Mandal

PotentialModel make_khare_mandal(const ParamMap& p) {
    PotentialModel m;
    const Exact z = p.at("zeta");
    if (!z.is_real() || z.real() <= 0.0) domain_error("khare_mandal: zeta must be > 0");
    const long long Mi = positive_integer(p.at("M"), "khare_mandal: M");
    const Exact M(Mi);
    const double zd = z.real(), Md = static_cast<double>(Mi);

    m.y_of_x = [](cplx x) { return std::cosh(2.0 * x); };
    m.dy_dx = [](cplx x) { return 2.0 * std::sinh(2.0 * x); };
    m.potential = [=](cplx x) {
        cplx t = zd * std::cosh(2.0 * x) - 1i * Md;
        return -t * t;
    };
    m.phi = Poly{-4.0, 0.0, 4.0};
    m.vn = Poly{Md * Md, 2i * Md * zd, -zd * zd};
    m.vd = Poly{1.0};
    const Exact g = frac(3, 16);
    m.poles.push_back({"t=1", 1.0, [g](const Exact&) { return g; }, false});
    m.poles.push_back({"t=-1", -1.0, [g](const Exact&) { return g; }, false});
    const Exact I(Rational(0), Rational(1));
    m.infinity = [=](const Exact& E) {
        return InfinityExpansion{z * z / Exact(4), -(I * M * z) / Exact(2), (E - M * M + z * z + Exact(1)) / Exact(4)};
    };
    const Exact q1 = frac(1, 4), q3 = frac(3, 4);
    m.set_label = [=](const ResidueAssignment& a) {
        const std::array<std::pair<Exact, Exact>, 4> rows = {{{q1, q1}, {q3, q3}, {q3, q1}, {q1, q3}}};
        for (int k = 0; k < 4; ++k)
            if (eq(a.residues[0], rows[k].first) && eq(a.residues[1], rows[k].second)) return k + 1;
        return 0;
    };
    m.qes_relation = [](const ResidueAssignment& a) -> std::string {
        switch (a.set_label) {
            case 1: return "M = 2n+1";
            case 2: return "M = 2n+3";
            case 3:
            case 4: return "M = 2n+2";
            default: return "";
        }
    };
    m.energy_formula = "eigenvalues of the coefficient pencil";
    m.domain = {-INFINITY, INFINITY, BoundaryTag::pt_symmetric, 0.0};
    m.sample_interval = {-1.5, 1.5};
    m.recipe = [y = m.y_of_x](const ResidueAssignment& a) {
        WavefunctionRecipe r;
        r.prefactors.push_back(factor("sinh x", [](double x) { return cplx(std::sinh(x)); },
                                      Exact(2) * a.residues[0] - frac(1, 2), 1));
        r.prefactors.push_back(factor("cosh x", [](double x) { return cplx(std::cosh(x)); },
                                      Exact(2) * a.residues[1] - frac(1, 2), 0));
        r.polynomial_variable_label = "cosh 2x";
        r.polynomial_variable = [y](double x) { return y(cplx(x)); };
        r.polynomial.coeffs.assign(static_cast<std::size_t>(std::max(0LL, a.n)) + 1, 0.0);
        r.polynomial.coeffs.back() = 1.0;
        r.exp_coefficient = a.a0;
        r.exponential_argument = [y](double x) { return y(cplx(x)); };
        r.exponential_label = "cosh 2x";
        return r;
    };
    return m;
}

// ---------------------------------------------------------------- complex Scarf II

PotentialModel make_complex_scarf(const ParamMap& p) {
    PotentialModel m;
    const Exact A = p.at("A"), B = p.at("B");
    if (!A.is_real() || !B.is_real()) domain_error("complex_scarf: A and B must be real");
    if (A.real() <= 0.0) domain_error("complex_scarf: A must be > 0");
    const double a = A.real(), b = B.real();

    m.y_of_x = [](cplx x) { return 1i * std::sinh(x); };
    m.dy_dx = [](cplx x) { return 1i * std::cosh(x); };
    m.potential = [=](cplx x) {
        cplx c = std::cosh(x);
        if (std::abs(c) < 1e-300) throw Error(ErrorKind::singular_sample, "complex_scarf: V is singular");
        return -a / (c * c) - 1i * b * std::tanh(x) / c;
    };
    m.phi = Poly{-1.0, 0.0, 1.0};
    m.vn = Poly{-a, -b};
    m.vd = Poly{1.0, 0.0, -1.0};
    const Exact gp = frac(3, 16) - (A + B) / Exact(4), gm = frac(3, 16) - (A - B) / Exact(4);
    m.poles.push_back({"y=1", 1.0, [gp](const Exact&) { return gp; }, false});
    m.poles.push_back({"y=-1", -1.0, [gm](const Exact&) { return gm; }, false});
    m.infinity = [](const Exact& E) { return InfinityExpansion{Exact(0), Exact(0), E + frac(1, 4)}; };
    m.residues_depend_on_energy = true;
    const auto poles = m.poles;
    m.energy_of_level = [=](const std::vector<int>& pb, int, long long n) {
        Exact h = fixed_residue(poles[0], pb[0]) + fixed_residue(poles[1], pb[1]) + Exact(n) - frac(1, 2);
        return LevelEnergy{-(h * h), ""};
    };
    m.rules.push_back({FilterStage::square_integrability, "square_integrability",
                       [](const ResidueAssignment& x) -> std::optional<std::string> {
                           double g = (x.lambda1 - frac(1, 2)).real();
                           if (g < 0.0) return std::nullopt;
                           return "|psi| ~ exp(" + format_double(g) + " |x|) is not square integrable";
                       }});
    m.set_label = [](const ResidueAssignment& x) {
        int i = x.pole_branch[0], k = x.pole_branch[1];
        if (i == 1 && k == 1) return 1;
        if (i == 1 && k == 0) return 2;
        if (i == 0 && k == 1) return 3;
        return 4;
    };
    m.energy_formula = "E = -(b1 + b1' + n - 1/2)^2";
    m.domain = {-INFINITY, INFINITY, BoundaryTag::pt_symmetric, 0.0};
    m.sample_interval = {-3.0, 3.0};
    m.recipe = [y = m.y_of_x](const ResidueAssignment& x) {
        WavefunctionRecipe r;
        r.prefactors.push_back(factor("1 - i sinh x", [](double t) { return cplx(1.0, -std::sinh(t)); },
                                      x.residues[0] - frac(1, 4), 0));
        r.prefactors.push_back(factor("1 + i sinh x", [](double t) { return cplx(1.0, std::sinh(t)); },
                                      x.residues[1] - frac(1, 4), 0));
        r.polynomial_variable_label = "i sinh x";
        r.polynomial_variable = [y](double t) { return y(cplx(t)); };
        r.polynomial.coeffs.assign(static_cast<std::size_t>(std::max(0LL, x.n)) + 1, 0.0);
        r.polynomial.coeffs.back() = 1.0;
        r.exp_coefficient = Exact(0);
        return r;
    };
    return m;
}

std::string exponent_text(const Exact& e) {
    std::string s = e.str();
    if (s.find_first_of("+-/ ") != std::string::npos && s.front() != '(') return "(" + s + ")";
    return s;
}

}  // namespace

const char* to_string(ModelId id) {
    switch (id) {
        case ModelId::hydrogen: return "hydrogen";
        case ModelId::scarf1: return "scarf1";
        case ModelId::scarf_periodic: return "scarf_periodic";
        case ModelId::lame: return "lame";
        case ModelId::assoc_lame_es: return "assoc_lame_es";
        case ModelId::assoc_lame_qes: return "assoc_lame_qes";
        case ModelId::khare_mandal: return "khare_mandal";
        default: return "complex_scarf";
    }
}

const char* to_string(SpectrumClass c) {
    switch (c) {
        case SpectrumClass::es: return "ES";
        case SpectrumClass::qes: return "QES";
        case SpectrumClass::band: return "band";
        default: return "PT";
    }
}

const char* to_string(BoundaryTag b) {
    switch (b) {
        case BoundaryTag::dirichlet: return "dirichlet";
        case BoundaryTag::periodic_union: return "periodic_union";
        case BoundaryTag::decaying: return "decaying";
        default: return "pt_symmetric";
    }
}

const char* to_string(FilterStage s) {
    switch (s) {
        case FilterStage::lambda_branch: return "lambda_branch";
        case FilterStage::finiteness: return "finiteness";
        case FilterStage::square_integrability: return "square_integrability";
        default: return "phase";
    }
}

std::optional<ModelId> model_id_from_string(const std::string& name) {
    for (const auto& info : info_table())
        if (info.name == name) return info.id;
    return std::nullopt;
}

std::vector<ModelId> all_models() {
    std::vector<ModelId> ids;
    for (const auto& info : info_table()) ids.push_back(info.id);
    return ids;
}

const ModelInfo& model_info(ModelId id) {
    for (const auto& info : info_table())
        if (info.id == id) return info;
    throw Error(ErrorKind::unknown_model, "unknown model id");
}

std::string WavefunctionRecipe::form() const {
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first) os << " ";
        first = false;
    };
    for (const auto& f : prefactors) {
        if (f.exponent.is_zero(1e-14)) continue;
        sep();
        if (same_value(f.exponent, Exact(1), 1e-14))
            os << "(" << f.label << ")";
        else
            os << "(" << f.label << ")^" << exponent_text(f.exponent);
    }
    if (!exp_coefficient.is_zero(1e-14)) {
        sep();
        os << "exp(" << exponent_text(exp_coefficient) << " " << exponential_label << ")";
    }
    sep();
    os << "P_" << std::max(0, polynomial.degree()) << "(" << polynomial_variable_label << ")";
    return os.str();
}

double PotentialModel::param(const std::string& key) const { return exact_param(key).real(); }

const Exact& PotentialModel::exact_param(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw Error(ErrorKind::schema, name + ": no parameter " + key);
    return it->second;
}

cplx PotentialModel::G(cplx y, cplx E) const { return (N0(y) + E * N1(y)) / D(y); }

cplx PotentialModel::W(cplx y) const {
    Poly d1 = phi.derivative(), d2 = d1.derivative();
    cplx f = phi(y), f1 = d1(y), f2 = d2(y);
    return (3.0 * f1 * f1 - 4.0 * f * f2) / (16.0 * f * f);
}

cplx PotentialModel::derived_g2(std::size_t pole, cplx E) const {
    cplx y0 = poles.at(pole).location;
    cplx den = 1.0;
    for (std::size_t j = 0; j < poles.size(); ++j)
        if (j != pole) den *= (y0 - poles[j].location) * (y0 - poles[j].location);
    return (N0(y0) + E * N1(y0)) / den;
}

std::array<cplx, 3> PotentialModel::derived_infinity(cplx E) const {
    Poly N = N0 + E * N1;
    int d = D.degree();
    if (N.trimmed(1e-13).degree() > d) throw Error(ErrorKind::unsupported_expansion, name + ": G grows at infinity");
    std::array<cplx, 3> g{};
    for (int k = 0; k < 3; ++k) {
        cplx acc = N.coeff(d - k);
        for (int i = 1; i <= k; ++i) acc -= D.coeff(d - i) * g[k - i];
        g[k] = acc / D.coeff(d);
    }
    return g;
}

bool ConsistencyReport::ok() const {
    return max_potential_error <= 1e-9 && max_jacobian_error <= 1e-9 && max_pole_error <= 1e-9 &&
           max_infinity_error <= 1e-9 && max_sampled_infinity_error <= 1e-6;
}

ConsistencyReport check_consistency(const PotentialModel& m, int samples, unsigned seed) {
    ConsistencyReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(m.sample_interval.first, m.sample_interval.second);
    std::uniform_real_distribution<double> ue(-2.0, 5.0);
    auto near_pole = [&](cplx y) {
        return std::any_of(m.poles.begin(), m.poles.end(),
                           [&](const FixedPole& p) { return std::abs(y - p.location) < 0.05; });
    };
    for (int k = 0; k < samples; ++k) {
        // Samples next to a fixed pole only measure rounding in y(x), so they are redrawn.
        double x = ux(rng);
        for (int tries = 0; tries < 1000 && near_pole(m.y_of_x(x)); ++tries) x = ux(rng);
        cplx E(ue(rng), 0.0);
        cplx y = m.y_of_x(x);
        cplx f = m.phi(y);
        cplx lhs = f * (m.G(y, E) - m.W(y));
        cplx rhs = E - m.potential(x);
        // Phi G and Phi W cancel near the fixed poles; scale by the larger of the two.
        double scale = std::max({1.0, std::abs(rhs), std::abs(E), std::abs(f * m.G(y, E)), std::abs(f * m.W(y))});
        rep.max_potential_error = std::max(rep.max_potential_error, std::abs(lhs - rhs) / scale);
        cplx dy = m.dy_dx(x);
        rep.max_jacobian_error =
            std::max(rep.max_jacobian_error, std::abs(f - dy * dy) / std::max(1.0, std::abs(f)));
    }
    for (double e : {0.0, 1.3, -0.7}) {
        Exact E = Exact::from_double(e);
        for (std::size_t i = 0; i < m.poles.size(); ++i) {
            cplx want = m.poles[i].g2(E).value(), got = m.derived_g2(i, e);
            rep.max_pole_error = std::max(rep.max_pole_error, std::abs(want - got) / std::max(1.0, std::abs(want)));
        }
        InfinityExpansion inf = m.infinity(E);
        auto der = m.derived_infinity(e);
        std::array<cplx, 3> decl = {inf.G0.value(), inf.G1.value(), inf.G2.value()};
        for (int k = 0; k < 3; ++k)
            rep.max_infinity_error =
                std::max(rep.max_infinity_error, std::abs(decl[k] - der[k]) / std::max(1.0, std::abs(decl[k])));
        for (double r : {1e3, 1e4}) {
            for (cplx y : {cplx(r), cplx(0.0, r), cplx(-r, 0.0)}) {
                cplx g = m.G(y, e);
                cplx approx = decl[0] + decl[1] / y + decl[2] / (y * y);
                rep.max_sampled_infinity_error =
                    std::max(rep.max_sampled_infinity_error, std::abs(g - approx) / std::max(1.0, std::abs(g)));
            }
        }
    }
    return rep;
}

PotentialModel build_model(ModelId id, const ParamMap& params) {
    const ModelInfo& info = model_info(id);
    for (const auto& [key, value] : params) {
        bool known = std::any_of(info.params.begin(), info.params.end(), [&](const ParamSpec& s) { return s.name == key; });
        if (!known) throw Error(ErrorKind::schema, info.name + ": unknown parameter '" + key + "'");
    }
    for (const auto& spec : info.params)
        if (!params.count(spec.name)) throw Error(ErrorKind::schema, info.name + ": missing parameter '" + spec.name + "'");

    PotentialModel m;
    switch (id) {
        case ModelId::hydrogen: m = make_hydrogen(params); break;
        case ModelId::scarf1: m = make_scarf1(params); break;
        case ModelId::scarf_periodic: m = make_scarf_periodic(params); break;
        case ModelId::lame: m = make_lame(params); break;
        case ModelId::assoc_lame_es: m = make_assoc_es(params); break;
        case ModelId::assoc_lame_qes: m = make_assoc_qes(params); break;
        case ModelId::khare_mandal: m = make_khare_mandal(params); break;
        case ModelId::complex_scarf: m = make_complex_scarf(params); break;
    }
    m.id = id;
    m.name = info.name;
    m.params = params;
    m.spectrum = info.spectrum;
    m.variable_map = info.variable_map;
    if (id == ModelId::scarf_periodic && m.domain.bc == BoundaryTag::dirichlet) m.spectrum = SpectrumClass::es;
    finalize(m);
    return m;
}

PotentialModel get_model(ModelId id, const ParamMap& params) {
    PotentialModel m = build_model(id, params);
    ConsistencyReport rep = check_consistency(m);
    if (!rep.ok()) {
        std::ostringstream os;
        os << m.name << ": catalog entry fails its consistency check (potential " << rep.max_potential_error
           << ", jacobian " << rep.max_jacobian_error << ", poles " << rep.max_pole_error << ", infinity "
           << rep.max_infinity_error << ", sampled " << rep.max_sampled_infinity_error << ")";
        throw Error(ErrorKind::invalid_state, os.str());
    }
    return m;
}

PotentialModel get_model(const std::string& name, const ParamMap& params) {
    auto id = model_id_from_string(name);
    if (!id) throw Error(ErrorKind::unknown_model, "unknown model '" + name + "'");
    return get_model(*id, params);
}

cplx evaluate_potential(const PotentialModel& model, cplx x) { return model.potential(x); }

WavefunctionRecipe prefactor_exponents(const PotentialModel& model, const ResidueAssignment& assignment) {
    return model.recipe(assignment);
}

}  // namespace qhj

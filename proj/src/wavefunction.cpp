#include "qhj/wavefunction.hpp"

#include "qhj/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qhj {

namespace {

cplx power(cplx base, const Exact& exponent) {
    if (exponent.is_zero()) return 1.0;
    if (std::abs(base) == 0.0) {
        if (exponent.real() < 0.0) throw Error(ErrorKind::singular_sample, "prefactor with negative exponent at a zero of its base");
        return 0.0;
    }
    if (auto k = exponent.as_integer(0.0); k && exponent.is_real()) return std::pow(base, static_cast<int>(*k));
    if (base.imag() == 0.0 && base.real() > 0.0 && exponent.is_real()) return std::pow(base.real(), exponent.real());
    return std::pow(base, exponent.value());
}

double peak(const std::vector<cplx>& v) {
    double p = 0.0;
    for (const auto& x : v) p = std::max(p, std::abs(x));
    return p;
}

std::vector<double> real_zeros(const std::vector<double>& xs, const std::vector<cplx>& v) {
    std::vector<double> z;
    const double floor = 1e-10 * peak(v);
    int last = 0;
    std::size_t last_i = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double r = v[i].real();
        if (std::abs(r) <= floor) continue;
        int s = r > 0.0 ? 1 : -1;
        if (last != 0 && s != last) {
            if (i == last_i + 1) {
                double a = v[last_i].real();
                z.push_back(xs[last_i] + (xs[i] - xs[last_i]) * a / (a - r));
            } else {
                z.push_back(0.5 * (xs[last_i + 1] + xs[i - 1]));
            }
        }
        last = s;
        last_i = i;
    }
    return z;
}

std::vector<double> modulus_minima(const std::vector<double>& xs, const std::vector<cplx>& v) {
    std::vector<double> z;
    const double floor = 1e-8 * peak(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
        double m = std::abs(v[i]);
        if (m > floor) continue;
        bool left = i == 0 || std::abs(v[i - 1]) >= m;
        bool right = i + 1 == v.size() || std::abs(v[i + 1]) > m;
        if (left && right) z.push_back(xs[i]);
    }
    return z;
}

}  // namespace

const char* to_string(Normalization n) { return n == Normalization::sup_norm_one ? "sup_norm_one" : "l2_one"; }

cplx evaluate(const WavefunctionRecipe& recipe, double x) {
    cplx v = 1.0;
    for (const auto& f : recipe.prefactors) v *= power(f.base(x), f.exponent);
    if (!recipe.exp_coefficient.is_zero()) v *= std::exp(recipe.exp_coefficient.value() * recipe.exponential_argument(x));
    return v * recipe.polynomial(recipe.polynomial_variable(x));
}

SampledWavefunction assemble(const WavefunctionRecipe& recipe, const std::vector<double>& xs, Normalization norm) {
    SampledWavefunction s;
    s.xs = xs;
    s.normalization = norm;
    s.values.reserve(xs.size());
    for (double x : xs) {
        cplx v = evaluate(recipe, x);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::singular_sample, "wavefunction is not finite at x = " + format_double(x));
        s.values.push_back(v);
    }
    if (s.values.empty()) return s;
    auto top = std::max_element(s.values.begin(), s.values.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    if (std::abs(*top) == 0.0) throw Error(ErrorKind::singular_sample, "wavefunction vanishes on the whole grid");
    cplx scale = 1.0 / *top;
    if (norm == Normalization::l2_one && xs.size() > 1) {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            sum += 0.5 * (std::norm(s.values[i]) + std::norm(s.values[i + 1])) * (xs[i + 1] - xs[i]);
        scale = (std::abs(*top) / *top) / std::sqrt(sum);
    }
    for (auto& v : s.values) v *= scale;
    double imag = 0.0;
    for (const auto& v : s.values) imag = std::max(imag, std::abs(v.imag()));
    s.real_profile = imag <= 1e-10 * peak(s.values);
    s.zero_locations = s.real_profile ? real_zeros(xs, s.values) : modulus_minima(xs, s.values);
    return s;
}

ZeroCount zero_count(const WavefunctionRecipe& recipe) {
    ZeroCount z;
    for (const auto& f : recipe.prefactors)
        if (f.exponent.is_real() && f.exponent.real() > 0.0) z.prefactor_zeros += f.base_zeros;
    z.polynomial_zeros = std::max(0, recipe.polynomial.degree());
    return z;
}

MatchReport verify_against_oracle(const SampledWavefunction& sampled, const std::vector<std::vector<cplx>>& oracle_states) {
    MatchReport r;
    if (oracle_states.empty()) return r;
    const std::size_t n = sampled.values.size();
    for (const auto& s : oracle_states)
        if (s.size() != n) throw Error(ErrorKind::invalid_state, "analytic and oracle samples are on different grids");
    // Orthonormal basis of the oracle span.
    std::vector<std::vector<cplx>> basis;
    for (const auto& s : oracle_states) {
        std::vector<cplx> v = s;
        for (const auto& b : basis) {
            cplx dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += std::conj(b[i]) * v[i];
            for (std::size_t i = 0; i < n; ++i) v[i] -= dot * b[i];
        }
        double nn = 0.0;
        for (const auto& x : v) nn += std::norm(x);
        if (nn <= 1e-24) continue;
        for (auto& x : v) x /= std::sqrt(nn);
        basis.push_back(std::move(v));
    }
    double psi2 = 0.0, proj2 = 0.0;
    for (const auto& x : sampled.values) psi2 += std::norm(x);
    for (const auto& b : basis) {
        cplx dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(b[i]) * sampled.values[i];
        proj2 += std::norm(dot);
    }
    r.overlap = psi2 > 0.0 ? std::sqrt(proj2 / psi2) : 0.0;

    const auto& first = oracle_states.front();
    const double pa = peak(sampled.values), pb = peak(first);
    for (std::size_t i = 0; i < n; ++i)
        r.modulus_difference = std::max(r.modulus_difference, std::abs(std::abs(sampled.values[i]) / pa - std::abs(first[i]) / pb));
    r.analytic_nodes = count_nodes(sampled.values);
    r.oracle_nodes = count_nodes(first);
    r.nodes_match = r.analytic_nodes == r.oracle_nodes;
    return r;
}

}  // namespace qhj

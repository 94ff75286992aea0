#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhj/errors.hpp"
#include "qhj/special_functions.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_ellint.h>
#include <gsl/gsl_sf_elljac.h>
#include <gsl/gsl_sf_laguerre.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using qhj::ErrorKind;
using cd = std::complex<double>;

namespace {

// K(m) = int_0^{pi/2} d theta / sqrt(1 - m sin^2 theta) by adaptive quadrature.
double quadrature_K(double m) {
    gsl_integration_workspace* w = gsl_integration_workspace_alloc(1000);
    gsl_function f;
    f.function = [](double t, void* p) {
        const double mm = *static_cast<double*>(p);
        return 1.0 / std::sqrt(1.0 - mm * std::sin(t) * std::sin(t));
    };
    f.params = &m;
    double result = 0.0, error = 0.0;
    gsl_set_error_handler_off();
    gsl_integration_qags(&f, 0.0, std::numbers::pi / 2, 0.0, 1e-13, 1000, w, &result, &error);
    gsl_integration_workspace_free(w);
    return result;
}

// Terminating hypergeometric series: P_n^{(a,b)}(t) = (a+1)_n / n! 2F1(-n, n+a+b+1; a+1; (1-t)/2).
cd series_jacobi(int n, cd a, cd b, cd t) {
    cd pref = 1.0;
    for (int k = 1; k <= n; ++k) pref *= (a + static_cast<double>(k)) / static_cast<double>(k);
    cd term = 1.0, sum = 1.0, z = (1.0 - t) / 2.0;
    for (int k = 0; k < n; ++k) {
        term *= (static_cast<double>(k - n)) * (static_cast<double>(n + k + 1) + a + b) /
                ((a + static_cast<double>(k + 1)) * static_cast<double>(k + 1)) * z;
        sum += term;
    }
    return pref * sum;
}

// Nine-point central differences; exact up to rounding for polynomials of degree <= 8.
template <class F>
std::pair<double, double> derivatives(F&& f, double t, double h) {
    static constexpr double d1w[] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
    static constexpr double d2w[] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
    double d1 = 0.0, d2 = 0.0;
    for (int k = -4; k <= 4; ++k) {
        double v = f(t + k * h);
        d1 += d1w[k + 4] * v;
        d2 += d2w[k + 4] * v;
    }
    return {d1 / h, d2 / (h * h)};
}

// Sum of the magnitudes of the series terms: the rounding scale of series_jacobi.
double series_scale(int n, cd a, cd b, cd t) {
    cd pref = 1.0;
    for (int k = 1; k <= n; ++k) pref *= (a + static_cast<double>(k)) / static_cast<double>(k);
    cd term = 1.0, z = (1.0 - t) / 2.0;
    double sum = 1.0;
    for (int k = 0; k < n; ++k) {
        term *= (static_cast<double>(k - n)) * (static_cast<double>(n + k + 1) + a + b) /
                ((a + static_cast<double>(k + 1)) * static_cast<double>(k + 1)) * z;
        sum += std::abs(term);
    }
    return std::abs(pref) * sum;
}

bool throws_kind(auto&& f, ErrorKind k) {
    try {
        f();
    } catch (const qhj::Error& e) {
        return e.kind() == k;
    }
    return false;
}

}  // namespace

TEST_CASE("elliptic_K reference values") {
    CHECK(qhj::elliptic_K(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(std::abs(qhj::elliptic_K(0.5) - 1.854074677) < 1e-9);
    for (double m : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
        CHECK(std::abs(qhj::elliptic_K(m) / quadrature_K(m) - 1.0) < 1e-12);
        CHECK(std::abs(qhj::elliptic_K(m) / gsl_sf_ellint_Kcomp(std::sqrt(m), GSL_PREC_DOUBLE) - 1.0) < 1e-12);
    }
    CHECK(qhj::elliptic_K(0.999) > qhj::elliptic_K(0.5));
}

TEST_CASE("elliptic_K is increasing in m") {
    double last = qhj::elliptic_K(0.0);
    for (int i = 1; i < 200; ++i) {
        double k = qhj::elliptic_K(i / 200.0);
        CHECK(k > last);
        last = k;
    }
}

TEST_CASE("elliptic_K rejects m outside [0, 1)") {
    CHECK(throws_kind([] { qhj::elliptic_K(-0.1); }, ErrorKind::parameter_domain));
    CHECK(throws_kind([] { qhj::elliptic_K(1.0); }, ErrorKind::parameter_domain));
    CHECK(throws_kind([] { qhj::jacobi_elliptic(0.3, 1.5); }, ErrorKind::parameter_domain));
}

TEST_CASE("jacobi_elliptic special values") {
    for (double m : {0.0, 0.3, 0.9}) {
        auto j = qhj::jacobi_elliptic(0.0, m);
        CHECK(j.sn == 0.0);
        CHECK(j.cn == 1.0);
        CHECK(j.dn == 1.0);
    }
    const double x = std::numbers::pi / 3;
    auto t = qhj::jacobi_elliptic(x, 0.0);
    CHECK(std::abs(t.sn - std::sin(x)) < 1e-15);
    CHECK(std::abs(t.cn - std::cos(x)) < 1e-15);
    CHECK(std::abs(t.dn - 1.0) < 1e-15);

    // Quarter period, against GSL's descending Landen implementation.
    const double K = qhj::elliptic_K(0.5);
    auto q = qhj::jacobi_elliptic(K, 0.5);
    double sn = 0, cn = 0, dn = 0;
    gsl_sf_elljac_e(K, 0.5, &sn, &cn, &dn);
    CHECK(std::abs(q.sn - 1.0) < 1e-12);
    CHECK(std::abs(q.cn) < 1e-12);
    CHECK(std::abs(q.dn - std::sqrt(0.5)) < 1e-12);
    CHECK(std::abs(q.dn - dn) < 1e-12);
}

TEST_CASE("jacobi_elliptic agrees with GSL on random arguments") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ux(-20.0, 20.0), um(0.0, 0.999);
    for (int i = 0; i < 500; ++i) {
        double x = ux(rng), m = um(rng);
        auto j = qhj::jacobi_elliptic(x, m);
        double sn = 0, cn = 0, dn = 0;
        gsl_sf_elljac_e(x, m, &sn, &cn, &dn);
        CHECK(std::abs(j.sn - sn) < 1e-11);
        CHECK(std::abs(j.cn - cn) < 1e-11);
        CHECK(std::abs(j.dn - dn) < 1e-11);
    }
}

TEST_CASE("property: Pythagorean identities, bounds, parity and 4K period") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ux(-30.0, 30.0), um(0.0, 0.999);
    for (int i = 0; i < 2000; ++i) {
        double x = ux(rng), m = um(rng);
        auto j = qhj::jacobi_elliptic(x, m);
        CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) < 1e-12);
        CHECK(std::abs(j.dn * j.dn + m * j.sn * j.sn - 1.0) < 1e-12);
        CHECK(std::abs(j.sn) <= 1.0 + 1e-15);
        CHECK(j.dn >= std::sqrt(1.0 - m) - 1e-12);
        CHECK(j.dn <= 1.0 + 1e-15);
        auto r = qhj::jacobi_elliptic(-x, m);
        CHECK(std::abs(r.sn + j.sn) < 1e-12);
        CHECK(std::abs(r.cn - j.cn) < 1e-12);
        CHECK(std::abs(r.dn - j.dn) < 1e-12);
        auto p = qhj::jacobi_elliptic(x + 4.0 * qhj::elliptic_K(m), m);
        CHECK(std::abs(p.sn - j.sn) < 1e-10);
    }
}

TEST_CASE("jacobi_polynomial low orders") {
    CHECK(qhj::jacobi_polynomial(0, 0.3, -0.7, 0.2) == 1.0);
    for (double a : {-0.5, 0.0, 1.5, 3.0}) CHECK(qhj::jacobi_polynomial(1, a, 0.8, 1.0) == doctest::Approx(a + 1.0));
    CHECK(std::abs(qhj::jacobi_polynomial(2, 0.0, 0.0, 0.0) + 0.5) < 1e-15);
    CHECK_THROWS_AS(qhj::jacobi_polynomial(-1, 0.0, 0.0, 0.0), qhj::Error);
}

TEST_CASE("jacobi_polynomial matches the hypergeometric series, real and complex") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0), ab(-0.9, 4.0);
    for (int i = 0; i < 300; ++i) {
        int n = static_cast<int>(rng() % 9);
        double a = ab(rng), b = ab(rng), t = u(rng);
        double ref = series_jacobi(n, a, b, t).real();
        CHECK(std::abs(qhj::jacobi_polynomial(n, a, b, t) - ref) <= 1e-11 * std::max(1.0, series_scale(n, a, b, t)));
        cd ac(a, u(rng)), bc(b, u(rng)), tc(u(rng), 2.0 * u(rng));
        cd refc = series_jacobi(n, ac, bc, tc);
        CHECK(std::abs(qhj::jacobi_polynomial(n, ac, bc, tc) - refc) <= 1e-11 * std::max(1.0, series_scale(n, ac, bc, tc)));
    }
}

TEST_CASE("jacobi_polynomial with alpha + beta a negative integer") {
    // Recurrence denominators vanish here; the series is the reference.
    for (int n = 1; n <= 5; ++n) {
        cd a = -0.5, b = -0.5 - static_cast<double>(n) + 0.0;
        cd v = qhj::jacobi_polynomial(n, a, b, 0.37);
        cd r = series_jacobi(n, a, b, 0.37);
        CHECK(std::abs(v - r) <= 1e-11 * std::max(1.0, std::abs(r)));
    }
}

TEST_CASE("property: jacobi_polynomial solves the Jacobi equation") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-0.9, 0.9), ab(-0.5, 3.0);
    const double h = 0.05;
    for (int i = 0; i < 200; ++i) {
        int n = 1 + static_cast<int>(rng() % 7);
        double a = ab(rng), b = ab(rng), t = u(rng);
        auto P = [&](double s) { return qhj::jacobi_polynomial(n, a, b, s); };
        auto [d1, d2] = derivatives(P, t, h);
        double res = (1 - t * t) * d2 + (b - a - (a + b + 2) * t) * d1 + n * (n + a + b + 1) * P(t);
        double scale = std::abs(n * (n + a + b + 1) * P(t)) + std::abs((1 - t * t) * d2) + 1.0;
        CHECK(std::abs(res) / scale < 1e-9);
    }
}

TEST_CASE("laguerre reference values and GSL agreement") {
    CHECK(qhj::laguerre(0, 2.5, 7.0) == 1.0);
    CHECK(qhj::laguerre(1, 1.0, 0.0) == doctest::Approx(2.0));
    CHECK(std::abs(qhj::laguerre(2, 0.0, 2.0) + 1.0) < 1e-15);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> uy(0.0, 30.0), uk(0.0, 9.0);
    for (int i = 0; i < 300; ++i) {
        int n = static_cast<int>(rng() % 12);
        double k = uk(rng), y = uy(rng);
        double ref = gsl_sf_laguerre_n(n, k, y);
        CHECK(std::abs(qhj::laguerre(n, k, y) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("property: laguerre solves the associated Laguerre equation") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uy(0.1, 10.0), uk(0.0, 5.0);
    const double h = 0.05;
    for (int i = 0; i < 200; ++i) {
        int n = 1 + static_cast<int>(rng() % 8);
        double k = uk(rng), y = uy(rng);
        auto L = [&](double s) { return qhj::laguerre(n, k, s); };
        auto [d1, d2] = derivatives(L, y, h);
        double res = y * d2 + (k + 1 - y) * d1 + n * L(y);
        double scale = std::abs(y * d2) + std::abs((k + 1 - y) * d1) + std::abs(n * L(y)) + 1.0;
        CHECK(std::abs(res) / scale < 1e-9);
    }
}

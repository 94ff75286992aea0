#include "qhj/special_functions.hpp"

#include "qhj/errors.hpp"

#include <boost/math/special_functions/ellint_1.hpp>

#include <array>
#include <cmath>
#include <numbers>

namespace qhj {

namespace {

using cd = std::complex<double>;

void check_modulus(double m) {
    if (!(m >= 0.0 && m < 1.0)) throw Error(ErrorKind::parameter_domain, "elliptic parameter m must satisfy 0 <= m < 1");
}

cd binomial(cd z, int k) {
    cd r = 1.0;
    for (int i = 0; i < k; ++i) r *= (z - static_cast<double>(i)) / static_cast<double>(i + 1);
    return r;
}

cd jacobi_sum(int n, cd a, cd b, cd t) {
    cd lo = (t - 1.0) / 2.0, hi = (t + 1.0) / 2.0, sum = 0.0;
    for (int s = 0; s <= n; ++s)
        sum += binomial(static_cast<double>(n) + a, n - s) * binomial(static_cast<double>(n) + b, s) *
               std::pow(lo, s) * std::pow(hi, n - s);
    return sum;
}

}  // namespace

double elliptic_K(double m) {
    check_modulus(m);
    return boost::math::ellint_1(std::sqrt(m));
}

// Descending Landen (arithmetic-geometric mean) scheme on x reduced modulo 4K.
JacobiTriple jacobi_elliptic(double x, double m) {
    check_modulus(m);
    if (!std::isfinite(x)) throw Error(ErrorKind::parameter_domain, "jacobi_elliptic needs finite x");
    if (m == 0.0) return {std::sin(x), std::cos(x), 1.0};
    const double period = 4.0 * elliptic_K(m);
    x = std::remainder(x, period);
    std::array<double, 32> a{}, c{};
    a[0] = 1.0;
    double b = std::sqrt(1.0 - m);
    c[0] = std::sqrt(m);
    int n = 0;
    while (std::abs(c[n]) > 1e-17 * a[n] && n + 1 < static_cast<int>(a.size())) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    double phi = std::ldexp(a[n] * x, n);
    for (int k = n; k > 0; --k) phi = 0.5 * (phi + std::asin(c[k] / a[k] * std::sin(phi)));
    const double sn = std::sin(phi), cn = std::cos(phi);
    // dn^2 = 1 - m + m cn^2 has no cancellation, unlike 1 - m sn^2 or cn / cos(phi_1 - phi_0) near cn = 0.
    return {sn, cn, std::sqrt((1.0 - m) + m * cn * cn)};
}

cd jacobi_polynomial(int n, cd alpha, cd beta, cd t) {
    if (n < 0) throw Error(ErrorKind::parameter_domain, "polynomial degree must be >= 0");
    if (n == 0) return 1.0;
    cd p0 = 1.0;
    cd p1 = (alpha + 1.0) + (alpha + beta + 2.0) * (t - 1.0) / 2.0;
    const cd ab = alpha + beta;
    for (int k = 2; k <= n; ++k) {
        const double kk = k;
        cd a = 2.0 * kk * (kk + ab) * (2.0 * kk + ab - 2.0);
        if (std::abs(a) < 1e-300 || std::abs(2.0 * kk + ab - 2.0) < 1e-12) return jacobi_sum(n, alpha, beta, t);
        cd b = (2.0 * kk + ab - 1.0) * ((2.0 * kk + ab) * (2.0 * kk + ab - 2.0) * t + alpha * alpha - beta * beta);
        cd c = 2.0 * (kk + alpha - 1.0) * (kk + beta - 1.0) * (2.0 * kk + ab);
        cd p2 = (b * p1 - c * p0) / a;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double jacobi_polynomial(int n, double alpha, double beta, double t) {
    return jacobi_polynomial(n, cd(alpha), cd(beta), cd(t)).real();
}

cd laguerre(int n, cd k, cd y) {
    if (n < 0) throw Error(ErrorKind::parameter_domain, "polynomial degree must be >= 0");
    if (n == 0) return 1.0;
    cd l0 = 1.0, l1 = 1.0 + k - y;
    for (int j = 1; j < n; ++j) {
        const double jj = j;
        cd l2 = ((2.0 * jj + 1.0 + k - y) * l1 - (jj + k) * l0) / (jj + 1.0);
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

double laguerre(int n, double k, double y) { return laguerre(n, cd(k), cd(y)).real(); }

}  // namespace qhj

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhj/errors.hpp"
#include "qhj/residues.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>

#include <cmath>
#include <random>
#include <vector>

using qhj::Exact;
using qhj::Rational;

namespace {

Exact q(long long p, long long r = 1) { return Exact(Rational(p, r)); }

bool exact_eq(const Exact& a, const Exact& b) { return a.is_exact() && b.is_exact() && qhj::same_value(a, b); }

}  // namespace

TEST_CASE("finite pole residues: tabulated cases") {
    auto lame = qhj::finite_pole_residues(q(3, 16));
    CHECK(exact_eq(lame.values[0], q(3, 4)));
    CHECK(exact_eq(lame.values[1], q(1, 4)));
    CHECK(lame.origin == qhj::BranchOrigin::finite_pole);

    auto zero = qhj::finite_pole_residues(q(0));
    CHECK(exact_eq(zero.values[0], q(1)));
    CHECK(exact_eq(zero.values[1], q(0)));

    // g2 = (1 - lambda^2)/4 at lambda = 2.
    auto scarf = qhj::finite_pole_residues(q(-3, 4));
    CHECK(exact_eq(scarf.values[0], q(3, 2)));
    CHECK(exact_eq(scarf.values[1], q(-1, 2)));
}

TEST_CASE("finite pole residues accept an energy-dependent pole") {
    qhj::FixedPole pole{"y=1", 1.0, [](const Exact& E) { return (Exact(1) - E * E) / Exact(4); }, true};
    auto r = qhj::finite_pole_residues(pole, q(2));
    CHECK(exact_eq(r.values[0], q(3, 2)));
    CHECK(exact_eq(r.values[1], q(-1, 2)));
}

TEST_CASE("property: residue branches sum to exactly 1 and solve b^2 - b + g2 = 0") {
    std::mt19937 rng(21);
    for (int i = 0; i < 400; ++i) {
        // g2 = (1 - k^2)/4 with k rational keeps the roots rational.
        long long p = static_cast<long long>(rng() % 41) - 20, r = 1 + static_cast<long long>(rng() % 12);
        Exact k = q(p, r);
        Exact g2 = (Exact(1) - k * k) / Exact(4);
        auto br = qhj::finite_pole_residues(g2);
        CHECK(br.values[0].is_exact());
        CHECK(exact_eq(br.values[0] + br.values[1], q(1)));
        for (const Exact& b : br.values) CHECK(exact_eq(b * b - b + g2, q(0)));
        CHECK((qhj::branch_before(br.values[0], br.values[1]) || qhj::same_value(br.values[0], br.values[1])));
    }
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 400; ++i) {
        Exact g2 = Exact::numeric({u(rng), u(rng)});
        auto br = qhj::finite_pole_residues(g2);
        for (const Exact& b : br.values) CHECK(std::abs((b * b - b + g2).value()) < 1e-12);
        CHECK(std::abs((br.values[0] + br.values[1]).value() - 1.0) < 1e-12);
    }
}

TEST_CASE("finite pole residues: complex roots are ordered by real then imaginary part") {
    // g2 = 1/2 gives b = 1/2 +- i/2.
    auto br = qhj::finite_pole_residues(q(1, 2));
    CHECK(exact_eq(br.values[0], Exact(Rational(1, 2), Rational(1, 2))));
    CHECK(exact_eq(br.values[1], Exact(Rational(1, 2), Rational(-1, 2))));
}

TEST_CASE("infinity residues with a0 = 0") {
    auto lame = qhj::infinity_residues({q(0), q(0), q(-6)});
    REQUIRE(lame.size() == 2);
    CHECK(exact_eq(lame[0].lambda1, q(3)));
    CHECK(exact_eq(lame[1].lambda1, q(-2)));
    for (const auto& b : lame) {
        CHECK(exact_eq(b.a0, q(0)));
        CHECK(b.origin == qhj::BranchOrigin::infinity_a0_zero);
    }
    CHECK(exact_eq(lame[0].lambda1 + lame[1].lambda1, q(1)));

    const Exact s = q(3, 10);
    auto scarf = qhj::infinity_residues({q(0), q(0), q(1, 4) - s * s});
    CHECK(exact_eq(scarf[0].lambda1, (Exact(1) + Exact(2) * s) / Exact(2)));
    CHECK(exact_eq(scarf[1].lambda1, (Exact(1) - Exact(2) * s) / Exact(2)));
}

TEST_CASE("infinity residues with a0 != 0 give lambda1 = M/2 and -M/2") {
    const Exact I(Rational(0), Rational(1));
    for (long long M = 1; M <= 5; ++M) {
        for (const Exact& zeta : {q(1, 10), q(1, 4), q(2)}) {
            auto br = qhj::infinity_residues({zeta * zeta / Exact(4), -(I * Exact(M) * zeta) / Exact(2), q(7)});
            REQUIRE(br.size() == 2);
            std::vector<Exact> l = {br[0].lambda1, br[1].lambda1};
            bool plus = exact_eq(l[0], q(M, 2)) || exact_eq(l[1], q(M, 2));
            bool minus = exact_eq(l[0], q(-M, 2)) || exact_eq(l[1], q(-M, 2));
            CHECK(plus);
            CHECK(minus);
            for (const auto& b : br) {
                CHECK(b.origin == qhj::BranchOrigin::infinity_a0_nonzero);
                CHECK(exact_eq(b.a0 * b.a0, -(zeta * zeta) / Exact(4)));
            }
        }
    }
}

TEST_CASE("infinity residues reject G0 = 0 with G1 != 0") {
    try {
        qhj::infinity_residues({q(0), q(1), q(0)});
        FAIL("expected an error");
    } catch (const qhj::Error& e) {
        CHECK(e.kind() == qhj::ErrorKind::unsupported_expansion);
    }
}

TEST_CASE("moving pole residue") {
    CHECK(exact_eq(qhj::moving_pole_residue(), q(1)));
    CHECK(qhj::moving_pole_residue_p_form() == qhj::cplx(0.0, -1.0));
}

TEST_CASE("moving pole residue from a numerically integrated chi") {
    // chi = psi'/psi obeys chi' = V - E - chi^2. For V = x^2, E = 3 the state x exp(-x^2/2) has a node at 0.
    gsl_set_error_handler_off();
    gsl_odeiv2_system sys{[](double x, const double y[], double f[], void*) -> int {
                              f[0] = x * x - 3.0 - y[0] * y[0];
                              return GSL_SUCCESS;
                          },
                          nullptr, 1, nullptr};
    gsl_odeiv2_driver* d = gsl_odeiv2_driver_alloc_y_new(&sys, gsl_odeiv2_step_rk8pd, 1e-6, 1e-14, 1e-14);
    double x = -2.0, y[1] = {1.0 / x - x};
    std::vector<double> xs, inv;
    for (int i = 1; i <= 40; ++i) {
        double target = -2e-4 + 1.9e-4 * (i - 1) / 39.0;
        REQUIRE(gsl_odeiv2_driver_apply(d, &x, target, y) == GSL_SUCCESS);
        xs.push_back(x);
        inv.push_back(1.0 / y[0]);
    }
    gsl_odeiv2_driver_free(d);
    // Near a simple pole 1/chi = (x - x0)/r + O((x - x0)^3), so a line fitted close to the pole has slope 1/r.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += inv[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * inv[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    const double x0 = -intercept / slope;
    CHECK(std::abs(x0) < 1e-6);
    CHECK(std::abs(1.0 / slope - qhj::moving_pole_residue().real()) < 1e-6);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhj/errors.hpp"
#include "qhj/oracle.hpp"
#include "qhj/pencil.hpp"
#include "qhj/special_functions.hpp"
#include "qhj/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace qhj;

namespace {

Exact q(long long p, long long r = 1) { return Exact(Rational(p, r)); }

ErrorKind error_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::invalid_state;
}

PotentialModel lame(const Exact& m) { return get_model(ModelId::lame, {{"j", Exact(2)}, {"m", m}}); }

std::vector<double> real_parts(const OracleSpectrum& s) {
    std::vector<double> r;
    for (const cplx& e : s.eigenvalues) r.push_back(e.real());
    return r;
}

// Index of the oracle eigenvalue nearest to target.
std::size_t nearest(const OracleSpectrum& s, cplx target) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i)
        if (std::abs(s.eigenvalues[i] - target) < std::abs(s.eigenvalues[best] - target)) best = i;
    return best;
}

void check_hermitian_invariants(const OracleSpectrum& s) {
    CHECK(s.hermitian);
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        CHECK(s.eigenvalues[i].imag() == 0.0);
        if (i > 0) CHECK(s.eigenvalues[i].real() > s.eigenvalues[i - 1].real());
    }
}

}  // namespace

TEST_CASE("particle in a box: E_n = n^2 within 1e-4") {
    SturmLiouville free{[](double) { return 0.0; }, nullptr};
    auto s = solve_sturm_liouville(free, {0.0, std::numbers::pi, 512, GridBc::dirichlet}, 3, 1e-4);
    REQUIRE(s.eigenvalues.size() == 3);
    for (int n = 1; n <= 3; ++n) {
        CHECK(std::abs(s.eigenvalues[n - 1].real() - n * n) < 1e-4);
        CHECK(s.node_counts[n - 1] == n - 1);
    }
    check_hermitian_invariants(s);
}

TEST_CASE("hydrogen e2=2, l=0: {0, 3/4, 8/9} within 2e-4") {
    auto h = get_model(ModelId::hydrogen, {{"e2", Exact(2)}, {"l", Exact(0)}});
    auto setup = default_oracle_setup(h);
    auto s = solve_bound(h, setup.grid, 3, 2e-4);
    const std::vector<double> ref = {0.0, 0.75, 8.0 / 9.0};
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(s.eigenvalues[i].real() - ref[i]) < 2e-4);
        CHECK(s.node_counts[i] == i);
    }
    check_hermitian_invariants(s);
}

TEST_CASE("Scarf I exact phase (2, 1/2, 1): E1 = 5 within 2e-4") {
    auto m = get_model(ModelId::scarf1, {{"A", Exact(2)}, {"B", q(1, 2)}, {"alpha", Exact(1)}});
    auto s = solve_bound(m, default_oracle_setup(m).grid, 3, 2e-4);
    CHECK(std::abs(s.eigenvalues[0].real()) < 2e-4);
    CHECK(std::abs(s.eigenvalues[1].real() - 5.0) < 2e-4);
    CHECK(std::abs(s.eigenvalues[2].real() - 12.0) < 2e-4);
}

TEST_CASE("Lame j=2, m=1/2: lowest five band edges with their boundary conditions") {
    auto m = lame(q(1, 2));
    auto s = solve_band_edges(m, default_oracle_setup(m).grid, 3, 5e-4);
    const double d = std::sqrt(0.75);
    // Period 2K edges are periodic on one cell; period 4K edges are antiperiodic.
    const std::vector<std::pair<double, GridBc>> ref = {{0.0, GridBc::periodic},
                                                        {2 * d - 1.5, GridBc::antiperiodic},
                                                        {2 * d, GridBc::antiperiodic},
                                                        {2 * d + 1.5, GridBc::periodic},
                                                        {4 * d, GridBc::periodic}};
    REQUIRE(s.eigenvalues.size() >= 5);
    for (int i = 0; i < 5; ++i) {
        CAPTURE(i);
        CHECK(std::abs(s.eigenvalues[i].real() - ref[i].first) < 5e-4);
        CHECK(s.bc[i] == ref[i].second);
    }
    check_hermitian_invariants(s);
    // The cn sn edge vanishes at 0 and K: two zeros per cell.
    CHECK(s.node_counts[3] == 2);
}

TEST_CASE("associated Lame a=2, b=1, m=1/2 band edges within 5e-4") {
    const double md = 0.5;
    auto m = get_model(ModelId::assoc_lame_qes, {{"a", Exact(2)}, {"b", Exact(1)}, {"m", q(1, 2)}});
    auto s = solve_band_edges(m, default_oracle_setup(m).grid, 4, 5e-4);
    const double r1 = 2 * std::sqrt(4 - 3 * md), r2 = 2 * std::sqrt(md * md - 5 * md + 4);
    for (double e : {0.0, 5 - 3 * md - r1, 5 - 3 * md + r1, 5 - 2 * md - r2, 5 - 2 * md + r2}) {
        CAPTURE(e);
        CHECK(std::abs(s.eigenvalues[nearest(s, e)].real() - e) < 5e-4);
    }
}

TEST_CASE("Lame j=2 as m -> 0: the potential flattens and the gaps close") {
    double last_gap = 1e9;
    for (const Exact& m : {q(1, 10), q(1, 100), q(1, 1000)}) {
        auto s = solve_band_edges(lame(m), {0.0, 2.0 * elliptic_K(m.real()), 512, GridBc::periodic}, 3, 5e-4);
        auto e = real_parts(s);
        // Free-particle edges on a cell of length pi: 0, 1, 1, 4, 4.
        const double gap = std::max(e[2] - e[1], e[4] - e[3]);
        CHECK(gap < last_gap);
        CHECK(gap < 3.5 * m.real() + 1e-3);
        last_gap = gap;
        CHECK(std::abs(e[1] - 1.0) < 10 * m.real());
        CHECK(std::abs(e[3] - 4.0) < 10 * m.real());
    }
    CHECK(last_gap < 5e-3);
}

TEST_CASE("Khare-Mandal zeta=1/4: real pair for M=3, conjugate pair for M=2 within 1e-3") {
    auto m3 = get_model(ModelId::khare_mandal, {{"zeta", q(1, 4)}, {"M", Exact(3)}});
    const std::vector<cplx> p3 = {5.2054491924311228, 8.6695508075688772};
    auto s3 = solve_pt(m3, default_oracle_setup(m3).grid, 2, p3, default_contour(m3));
    REQUIRE(s3.eigenvalues.size() == 2);
    CHECK(!s3.hermitian);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(s3.eigenvalues[i] - p3[i]) < 1e-3);
    CHECK(s3.max_residual <= 1e-6);

    auto m2 = get_model(ModelId::khare_mandal, {{"zeta", q(1, 4)}, {"M", Exact(2)}});
    const std::vector<cplx> p2 = {cplx(2.9375, -0.5), cplx(2.9375, 0.5)};
    auto s2 = solve_pt(m2, default_oracle_setup(m2).grid, 2, p2, default_contour(m2));
    REQUIRE(s2.eigenvalues.size() == 2);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(s2.eigenvalues[i] - p2[i]) < 1e-3);
    CHECK(s2.conjugate_closed);
    CHECK(s2.max_residual <= 1e-6);
}

TEST_CASE("complex Scarf A=1, B=1/2: real spectrum within 1e-3") {
    auto m = get_model(ModelId::complex_scarf, {{"A", Exact(1)}, {"B", q(1, 2)}});
    std::vector<cplx> predictions;
    for (const auto& sol : solve_spectrum(m).solutions) {
        CHECK(std::abs(sol.energy.imag()) < 1e-12);
        predictions.push_back(sol.energy);
    }
    REQUIRE(!predictions.empty());
    auto s = solve_pt(m, default_oracle_setup(m).grid, static_cast<int>(predictions.size()), predictions, default_contour(m));
    for (std::size_t i = 0; i < predictions.size(); ++i) CHECK(std::abs(s.eigenvalues[i] - predictions[i]) < 1e-3);
    CHECK(s.conjugate_closed);
}

TEST_CASE("count_nodes") {
    CHECK(count_nodes(std::vector<double>{1, 2, 3}) == 0);
    CHECK(count_nodes(std::vector<double>{1, -1, 1}) == 2);
    CHECK(count_nodes(std::vector<double>{0, 1, 0, -1, 0}) == 1);
    // Samples below 1e-10 of the peak are ignored.
    CHECK(count_nodes(std::vector<double>{1, -1e-12, 1}) == 0);
    CHECK(count_nodes(std::vector<double>{}) == 0);
    CHECK(count_nodes(std::vector<cplx>{cplx(1, 5), cplx(-1, 5), cplx(2, -5)}) == 2);

    // Hydrogen n=2 radial state has two interior nodes.
    auto h = get_model(ModelId::hydrogen, {{"e2", Exact(2)}, {"l", Exact(0)}});
    auto s = solve_bound(h, default_oracle_setup(h).grid, 3);
    CHECK(count_nodes(s.eigenvectors[2]) == 2);
    CHECK(count_nodes(s.eigenvectors[0]) == 0);
}

TEST_CASE("richardson") {
    CHECK(richardson(1.0, 2.0) == doctest::Approx(2.0 + 1.0 / 3.0));
    CHECK(richardson(1.0, 2.0, 4) == doctest::Approx(2.0 + 1.0 / 15.0));
    CHECK(std::abs(richardson(cplx(1, 1), cplx(2, 2)) - cplx(7.0 / 3, 7.0 / 3)) < 1e-15);
}

TEST_CASE("property: Hermitian oracles give strictly increasing energies and monotone node counts") {
    std::vector<std::pair<PotentialModel, int>> bound = {
        {get_model(ModelId::hydrogen, {{"e2", q(3, 2)}, {"l", Exact(1)}}), 4},
        {get_model(ModelId::scarf1, {{"A", Exact(2)}, {"B", Exact(-3)}, {"alpha", Exact(1)}}), 5},
        {get_model(ModelId::scarf_periodic, {{"s", q(3, 2)}}), 5},
    };
    for (const auto& [m, k] : bound) {
        CAPTURE(m.name);
        auto s = solve_bound(m, default_oracle_setup(m).grid, k);
        check_hermitian_invariants(s);
        for (int i = 0; i < k; ++i) CHECK(s.node_counts[i] == i);
    }
    for (const Exact& mm : {q(1, 10), q(1, 2), q(9, 10)}) {
        auto m = get_model(ModelId::lame, {{"j", Exact(3)}, {"m", mm}});
        auto s = solve_band_edges(m, default_oracle_setup(m).grid, 5);
        check_hermitian_invariants(s);
        for (std::size_t i = 1; i < s.node_counts.size(); ++i) CHECK(s.node_counts[i] >= s.node_counts[i - 1]);
    }
}

TEST_CASE("property: band edges are invariant under translation of the cell and shift with a constant") {
    // A translated cell is not mirror symmetric, so this exercises the general dense path.
    auto m = lame(q(1, 2));
    const double P = m.domain.period;
    SturmLiouville base{[&](double x) { return evaluate_potential(m, x).real(); }, nullptr};
    SturmLiouville moved{[&](double x) { return evaluate_potential(m, x + 0.37).real(); }, nullptr};
    SturmLiouville lifted{[&](double x) { return evaluate_potential(m, x).real() + 1.25; }, nullptr};
    for (GridBc bc : {GridBc::periodic, GridBc::antiperiodic}) {
        GridSpec g{0.0, P, 256, bc};
        auto a = solve_sturm_liouville(base, g, 5), b = solve_sturm_liouville(moved, g, 5),
             c = solve_sturm_liouville(lifted, g, 5);
        for (int i = 0; i < 5; ++i) {
            CHECK(std::abs(a.eigenvalues[i] - b.eigenvalues[i]) < 5e-4);
            CHECK(std::abs(c.eigenvalues[i] - a.eigenvalues[i] - 1.25) < 1e-9);
        }
    }
}

TEST_CASE("oracle errors") {
    auto h = get_model(ModelId::hydrogen, {{"e2", Exact(2)}, {"l", Exact(0)}});
    CHECK(error_of([&] { solve_bound(h, {0.0, 120.0, 63, GridBc::dirichlet}, 3); }) == ErrorKind::grid_too_coarse);
    CHECK(error_of([&] { solve_bound(h, {0.0, 120.0, 100, GridBc::dirichlet}, 11); }) == ErrorKind::grid_too_coarse);
    // A coarse grid cannot meet a tight tolerance.
    CHECK(error_of([&] { solve_bound(h, {0.0, 120.0, 200, GridBc::dirichlet}, 3, 1e-8); }) == ErrorKind::grid_too_coarse);
    auto km = get_model(ModelId::khare_mandal, {{"zeta", q(1, 4)}, {"M", Exact(3)}});
    CHECK(error_of([&] { solve_pt(km, {-4.0, 4.0, 500, GridBc::dirichlet}, 2); }) == ErrorKind::invalid_state);
    CHECK(error_of([&] { solve_band_edges(h, {0.0, 1.0, 128, GridBc::periodic}, 2); }) == ErrorKind::invalid_state);
}

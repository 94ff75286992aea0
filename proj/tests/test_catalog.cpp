#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhj/catalog.hpp"
#include "qhj/errors.hpp"
#include "qhj/quantization.hpp"
#include "qhj/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace qhj;

namespace {

Exact q(long long p, long long r = 1) { return Exact(Rational(p, r)); }

bool exact_eq(const Exact& a, const Exact& b) { return a.is_exact() && b.is_exact() && same_value(a, b); }

ErrorKind error_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::invalid_state;
}

// Random rational in [lo, hi] with denominator den.
Exact draw(std::mt19937& rng, double lo, double hi, long long den) {
    std::uniform_int_distribution<long long> d(static_cast<long long>(std::ceil(lo * den)),
                                               static_cast<long long>(std::floor(hi * den)));
    return q(d(rng), den);
}

ParamMap random_params(ModelId id, std::mt19937& rng) {
    std::uniform_int_distribution<int> small(0, 4), pos(1, 6);
    switch (id) {
        case ModelId::hydrogen: return {{"e2", draw(rng, 0.2, 6.0, 20)}, {"l", Exact(small(rng))}};
        case ModelId::scarf1: {
            Exact A = draw(rng, 0.5, 5.0, 8), B = draw(rng, -6.0, 6.0, 8);
            while (same_value(A, B) || same_value(A, -B)) B = draw(rng, -6.0, 6.0, 8);
            return {{"A", A}, {"B", B}, {"alpha", draw(rng, 0.3, 3.0, 10)}};
        }
        case ModelId::scarf_periodic: {
            Exact s = draw(rng, 0.05, 3.0, 20);
            while (same_value(s, q(1, 2))) s = draw(rng, 0.05, 3.0, 20);
            return {{"s", s}};
        }
        case ModelId::lame: return {{"j", Exact(pos(rng))}, {"m", draw(rng, 0.02, 0.98, 50)}};
        case ModelId::assoc_lame_es: return {{"j", Exact(pos(rng))}, {"m", draw(rng, 0.02, 0.98, 50)}};
        case ModelId::assoc_lame_qes:
            return {{"a", draw(rng, 0.5, 5.0, 2)}, {"b", draw(rng, -4.0, 4.0, 2)}, {"m", draw(rng, 0.02, 0.98, 50)}};
        case ModelId::khare_mandal: return {{"zeta", draw(rng, 0.05, 2.0, 20)}, {"M", Exact(pos(rng))}};
        case ModelId::complex_scarf: return {{"A", draw(rng, 0.2, 3.0, 10)}, {"B", draw(rng, -4.0, 4.0, 10)}};
    }
    return {};
}

PotentialModel lame(long long j, const Exact& m) { return get_model(ModelId::lame, {{"j", Exact(j)}, {"m", m}}); }

}  // namespace

TEST_CASE("catalog lists eight models with parameter schemas") {
    const auto ids = all_models();
    REQUIRE(ids.size() == 8);
    const std::vector<std::string> names = {"hydrogen",      "scarf1",         "scarf_periodic", "lame",
                                            "assoc_lame_es", "assoc_lame_qes", "khare_mandal",   "complex_scarf"};
    for (std::size_t i = 0; i < ids.size(); ++i) {
        CHECK(model_info(ids[i]).name == names[i]);
        CHECK(model_id_from_string(names[i]) == ids[i]);
        CHECK(!model_info(ids[i]).params.empty());
    }
    CHECK(!model_id_from_string("harmonic").has_value());
    const auto& l = model_info(ModelId::lame);
    REQUIRE(l.params.size() == 2);
    CHECK(l.params[0].name == "j");
    CHECK(l.params[1].name == "m");
    CHECK(model_info(ModelId::khare_mandal).spectrum == SpectrumClass::pt);
    CHECK(model_info(ModelId::assoc_lame_qes).spectrum == SpectrumClass::qes);
}

TEST_CASE("Lame j=2, m=1/2: poles at +-1 and +-sqrt 2 with g2 = 3/16 at +-1") {
    auto m = lame(2, q(1, 2));
    REQUIRE(m.poles.size() == 4);
    std::set<double> locations;
    for (const auto& p : m.poles) {
        CHECK(std::abs(p.location.imag()) == 0.0);
        locations.insert(std::round(p.location.real() * 1e12) / 1e12);
    }
    CHECK(locations == std::set<double>{-std::round(std::sqrt(2.0) * 1e12) / 1e12, -1.0, 1.0,
                                        std::round(std::sqrt(2.0) * 1e12) / 1e12});
    for (const auto& p : m.poles)
        if (std::abs(std::abs(p.location) - 1.0) < 1e-12) CHECK(exact_eq(p.g2(Exact(0)), q(3, 16)));
    const auto inf = m.infinity(Exact(0));
    CHECK(exact_eq(inf.G0, q(0)));
    CHECK(exact_eq(inf.G1, q(0)));
    CHECK(exact_eq(inf.G2, q(-6)));
    CHECK(m.parity_basis);
}

TEST_CASE("periodic Scarf s=3/10: poles at +-i and infinity expansion (0, 0, 1/4 - s^2)") {
    auto m = get_model(ModelId::scarf_periodic, {{"s", q(3, 10)}});
    REQUIRE(m.poles.size() == 2);
    CHECK(std::abs(m.poles[0].location - cplx(0, 1)) < 1e-15);
    CHECK(std::abs(m.poles[1].location - cplx(0, -1)) < 1e-15);
    const auto inf = m.infinity(Exact(0));
    CHECK(exact_eq(inf.G0, q(0)));
    CHECK(exact_eq(inf.G1, q(0)));
    CHECK(exact_eq(inf.G2, q(1, 4) - q(9, 100)));
}

TEST_CASE("Khare-Mandal zeta=1/10, M=3: poles at +-1 and G0 = zeta^2/4") {
    auto m = get_model(ModelId::khare_mandal, {{"zeta", q(1, 10)}, {"M", Exact(3)}});
    REQUIRE(m.poles.size() == 2);
    CHECK(std::abs(m.poles[0].location - cplx(1)) < 1e-15);
    CHECK(std::abs(m.poles[1].location - cplx(-1)) < 1e-15);
    CHECK(exact_eq(m.infinity(Exact(0)).G0, q(1, 400)));
}

TEST_CASE("evaluate_potential reference points") {
    auto l = lame(2, q(1, 2));
    CHECK(std::abs(evaluate_potential(l, 0.0) - cplx(-3.0 + std::sqrt(3.0))) < 1e-14);

    auto h = get_model(ModelId::hydrogen, {{"e2", Exact(2)}, {"l", Exact(0)}});
    CHECK(std::abs(evaluate_potential(h, 1e9) - cplx(1.0)) < 1e-8);

    auto cs = get_model(ModelId::complex_scarf, {{"A", Exact(1)}, {"B", q(1, 2)}});
    CHECK(std::abs(evaluate_potential(cs, 0.0) - cplx(-1.0)) < 1e-15);
}

TEST_CASE("evaluate_potential raises singular_sample at a pole of V") {
    auto ps = get_model(ModelId::scarf_periodic, {{"s", q(3, 10)}});
    CHECK(error_of([&] { evaluate_potential(ps, 0.0); }) == ErrorKind::singular_sample);
    auto h = get_model(ModelId::hydrogen, {{"e2", Exact(2)}, {"l", Exact(1)}});
    CHECK(error_of([&] { evaluate_potential(h, 0.0); }) == ErrorKind::singular_sample);
}

TEST_CASE("prefactor exponents") {
    auto l = lame(2, q(1, 2));
    for (const auto& a : quantize(l).assignments) {
        auto r = prefactor_exponents(l, a);
        REQUIRE(r.prefactors.size() == 2);
        // cn x carries (4 b1 - 1)/2, dn x carries (4 d1 - 1)/2.
        CHECK(exact_eq(r.prefactors[0].exponent, (Exact(4) * a.residues[0] - Exact(1)) / Exact(2)));
        CHECK(exact_eq(r.prefactors[1].exponent, (Exact(4) * a.residues[2] - Exact(1)) / Exact(2)));
        if (exact_eq(a.residues[0], q(3, 4)) && exact_eq(a.residues[2], q(1, 4))) {
            CHECK(exact_eq(r.prefactors[0].exponent, q(1)));
            CHECK(exact_eq(r.prefactors[1].exponent, q(0)));
        }
        if (exact_eq(a.residues[0], q(1, 4)) && exact_eq(a.residues[2], q(1, 4))) {
            CHECK(exact_eq(r.prefactors[0].exponent, q(0)));
            CHECK(exact_eq(r.prefactors[1].exponent, q(0)));
        }
    }

    // Complex Scarf: each prefactor exponent is its residue minus 1/4.
    for (const Exact& B : {q(1, 2), q(2)}) {
        auto cs = get_model(ModelId::complex_scarf, {{"A", Exact(1)}, {"B", B}});
        for (const auto& a : quantize(cs).assignments) {
            auto r = prefactor_exponents(cs, a);
            REQUIRE(r.prefactors.size() == 2);
            CHECK(same_value(r.prefactors[0].exponent, a.residues[0] - q(1, 4), 1e-14));
            CHECK(same_value(r.prefactors[1].exponent, a.residues[1] - q(1, 4), 1e-14));
        }
    }
}

TEST_CASE("property: every catalog entry is consistent over 50 random parameter draws") {
    std::mt19937 rng(2024);
    for (ModelId id : all_models()) {
        CAPTURE(to_string(id));
        for (int draw_index = 0; draw_index < 50; ++draw_index) {
            ParamMap p = random_params(id, rng);
            PotentialModel m = build_model(id, p);
            auto rep = check_consistency(m, 20, static_cast<unsigned>(draw_index));
            CAPTURE(rep.max_potential_error);
            CAPTURE(rep.max_jacobian_error);
            CAPTURE(rep.max_pole_error);
            CAPTURE(rep.max_infinity_error);
            CAPTURE(rep.max_sampled_infinity_error);
            CHECK(rep.ok());
            CHECK(rep.max_potential_error <= 1e-9);
        }
    }
}

TEST_CASE("property: associated Lame potential depends on a and b only through a(a+1) and b(b+1)") {
    // The two tabulated (a, b) pairs carry an additive ground-state shift, so images may differ by a constant.
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> ux(-4.0, 4.0);
    for (int i = 0; i < 30; ++i) {
        Exact a = draw(rng, 0.5, 5.0, 4), b = draw(rng, -3.0, 3.0, 4), m = draw(rng, 0.05, 0.95, 20);
        auto base = build_model(ModelId::assoc_lame_qes, {{"a", a}, {"b", b}, {"m", m}});
        auto fb = build_model(ModelId::assoc_lame_qes, {{"a", a}, {"b", -b - Exact(1)}, {"m", m}});
        auto fa = build_model(ModelId::assoc_lame_qes, {{"a", -a - Exact(1)}, {"b", b}, {"m", m}});
        const cplx cb = evaluate_potential(fb, 0.0) - evaluate_potential(base, 0.0);
        const cplx ca = evaluate_potential(fa, 0.0) - evaluate_potential(base, 0.0);
        for (int k = 0; k < 10; ++k) {
            double x = ux(rng);
            cplx v = evaluate_potential(base, x);
            const double tol = 1e-12 * std::max(1.0, std::abs(v));
            CHECK(std::abs(evaluate_potential(fb, x) - v - cb) <= tol);
            CHECK(std::abs(evaluate_potential(fa, x) - v - ca) <= tol);
        }
    }
    // Away from the tabulated pairs there is no shift at all.
    auto base = build_model(ModelId::assoc_lame_qes, {{"a", q(3, 2)}, {"b", q(3, 4)}, {"m", q(2, 5)}});
    auto fb = build_model(ModelId::assoc_lame_qes, {{"a", q(3, 2)}, {"b", q(-7, 4)}, {"m", q(2, 5)}});
    auto fa = build_model(ModelId::assoc_lame_qes, {{"a", q(-5, 2)}, {"b", q(3, 4)}, {"m", q(2, 5)}});
    for (double x : {-1.7, 0.0, 0.4, 2.2}) {
        CHECK(std::abs(evaluate_potential(fb, x) - evaluate_potential(base, x)) < 1e-12);
        CHECK(std::abs(evaluate_potential(fa, x) - evaluate_potential(base, x)) < 1e-12);
    }
}

TEST_CASE("property: parity-flagged potentials are even about the cell centre") {
    std::mt19937 rng(10);
    std::uniform_real_distribution<double> u(0.05, 1.4);
    std::vector<std::pair<PotentialModel, double>> models = {
        {lame(3, q(3, 10)), 0.0},
        {get_model(ModelId::assoc_lame_es, {{"j", Exact(2)}, {"m", q(7, 10)}}), 0.0},
        {get_model(ModelId::assoc_lame_qes, {{"a", q(7, 2)}, {"b", q(1, 2)}, {"m", q(1, 4)}}), 0.0},
        {get_model(ModelId::scarf_periodic, {{"s", q(3, 10)}}), std::numbers::pi / 2},
    };
    for (const auto& [m, centre] : models) {
        CHECK(m.parity_basis);
        for (int i = 0; i < 40; ++i) {
            double d = u(rng);
            cplx a = evaluate_potential(m, centre + d), b = evaluate_potential(m, centre - d);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("property: elliptic potentials have period 2K") {
    auto m = lame(2, q(1, 2));
    const double P = 2.0 * elliptic_K(0.5);
    CHECK(std::abs(m.domain.period - P) < 1e-14);
    for (double x : {0.1, 0.7, 1.3, 2.9}) CHECK(std::abs(evaluate_potential(m, x + P) - evaluate_potential(m, x)) < 1e-12);
}

TEST_CASE("get_model rejects unknown ids, bad schemas and out-of-range parameters") {
    CHECK(error_of([] { get_model("harmonic", {}); }) == ErrorKind::unknown_model);
    CHECK(error_of([] { get_model("lame", {{"j", Exact(2)}}); }) == ErrorKind::schema);
    CHECK(error_of([] { get_model("lame", {{"j", Exact(2)}, {"m", q(1, 2)}, {"k", Exact(1)}}); }) == ErrorKind::schema);
    CHECK(error_of([] { lame(0, q(1, 2)); }) == ErrorKind::parameter_domain);
    CHECK(error_of([] { get_model("lame", {{"j", q(5, 2)}, {"m", q(1, 2)}}); }) == ErrorKind::parameter_domain);
    CHECK(error_of([] { lame(2, Exact(1)); }) == ErrorKind::parameter_domain);
    CHECK(error_of([] { lame(2, Exact(0)); }) == ErrorKind::parameter_domain);
    CHECK(error_of([] { get_model("complex_scarf", {{"A", Exact(0)}, {"B", Exact(1)}}); }) == ErrorKind::parameter_domain);
    CHECK(error_of([] { get_model("hydrogen", {{"e2", Exact(-1)}, {"l", Exact(0)}}); }) == ErrorKind::parameter_domain);
    CHECK(error_of([] { get_model("scarf1", {{"A", Exact(2)}, {"B", Exact(2)}, {"alpha", Exact(1)}}); }) ==
          ErrorKind::parameter_domain);
    CHECK(error_of([] { get_model("scarf_periodic", {{"s", q(1, 2)}}); }) == ErrorKind::parameter_domain);
    CHECK(error_of([] { get_model("khare_mandal", {{"zeta", q(1, 4)}, {"M", Exact(0)}}); }) == ErrorKind::parameter_domain);
}

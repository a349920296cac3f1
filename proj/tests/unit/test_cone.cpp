#include <cmath>

#include "doctest.h"
#include "rt/errors.hpp"
#include "rt/random.hpp"

using namespace rt;

namespace {

const Backend S = Group::scalar();

EquivariantMap num(double x) { return EquivariantMap(S, 1, 1, {AlgebraElement::unit(S, x)}); }

CochainComplex point() { return CochainComplex({{S, 1}}, {}); }

Morphism scale(double c) { return Morphism(point(), point(), {num(c)}); }

}  // namespace

TEST_CASE("morphisms must intertwine") {
    const CochainComplex a({{S, 1}, {S, 1}}, {num(1)});
    CHECK_THROWS_AS(Morphism(a, a, {num(1), num(2)}), ValidationError);
    CHECK_NOTHROW(Morphism(a, a, {num(2), num(2)}));
}

TEST_CASE("cone examples") {
    const CochainComplex c = cone(scale(3));
    REQUIRE(c.size() == 2);
    CHECK(std::abs(std::abs(c.differential(0).entry(0, 0)[0]) - 3.0) < 1e-14);
    CHECK(cone_torsion(scale(2.5)) == doctest::Approx(std::log(2.5)));

    Rng rng(10);
    const CochainComplex a = random_acyclic(Group::cyclic(3), 4, 3, rng, true);
    CHECK(std::abs(cone_torsion(Morphism::identity(a))) < 1e-10);

    // Zero morphism: the cone is suspension(target) + source.
    const CochainComplex b = random_acyclic(Group::cyclic(3), 4, 2, rng, true);
    std::vector<EquivariantMap> zero;
    for (int i = 0; i < 4; ++i) zero.emplace_back(a.backend(), b.module(i).rank, a.module(i).rank);
    const Morphism z(a, b, zero);
    CHECK(cone_torsion(z) == doctest::Approx(torsion(a) - torsion(b)).epsilon(1e-10));
    for (int i = 0; i <= 4; ++i) CHECK(cone_laplacian_check(z, i) < 1e-10);
}

TEST_CASE("cone of an isomorphism is the alternating log volume") {
    const CochainComplex two({{S, 1}, {S, 1}}, {num(0)});
    const Morphism f(two, two, {num(2), num(3)});
    CHECK(morphism_log_vol_sum(f) == doctest::Approx(std::log(2.0) - std::log(3.0)));
    CHECK(cone_torsion(f) == doctest::Approx(std::log(2.0) - std::log(3.0)));

    Rng rng(11);
    for (const Backend& g : {Group::scalar(), Group::cyclic(5), Group::symmetric3()})
        for (int k = 0; k < 4; ++k) {
            const CochainComplex c = random_acyclic(g, 4, 3, rng, true);
            const Morphism iso = random_isomorphism(c, rng, true);
            CHECK(cone_torsion(iso) == doctest::Approx(morphism_log_vol_sum(iso)).epsilon(1e-9));
            CHECK(cone_torsion(-iso) == doctest::Approx(cone_torsion(iso)).epsilon(1e-10));
            for (int i = 0; i <= c.size(); ++i) CHECK(cone_laplacian_check(iso, i) < 1e-10);
        }
    CHECK_THROWS(morphism_log_vol_sum(Morphism(two, two, {num(0), num(0)})));
}

TEST_CASE("cone torsion rejects non quasi-isomorphisms") {
    const CochainComplex p = point();
    CHECK_THROWS_AS(cone_torsion(Morphism(p, p, {num(0)})), NumericalError);
}

TEST_CASE("Milnor identity") {
    Rng rng(12);
    for (const Backend& g : {Group::scalar(), Group::cyclic(4)}) {
        const CochainComplex a = random_acyclic(g, 4, 3, rng, true), b = random_acyclic(g, 4, 3, rng, true);
        const MilnorResult split = milnor_identity(random_extension(a, b, rng, false));
        CHECK(split.residual() < 1e-8);
        const CochainComplex n1 = random_complex(g, {1, 0, 1}, {1, 1}, rng, true);
        const CochainComplex n3 = random_complex(g, {0, 1, 1}, {2, 0}, rng, true);
        CHECK(milnor_identity(random_extension(n1, n3, rng, true)).residual() < 1e-8);
    }
}

TEST_CASE("extension additivity and its deformation") {
    Rng rng(13);
    const CochainComplex a = random_acyclic(Group::cyclic(3), 4, 3, rng, true), b = random_acyclic(Group::cyclic(3), 4, 3, rng, true);
    const ShortExactSequence s = random_extension(a, b, rng, true);
    const CmmResult r = cmm_additivity(s);
    CHECK(r.residual() < 1e-8);
    CHECK(r.sum == doctest::Approx(torsion(a) + torsion(b)).epsilon(1e-10));
    ShortExactSequence base = s;
    base.middle_metric.clear();
    for (double t : {0.0, 0.5, 1.0}) CHECK(torsion(base.scaled(t).middle()) == doctest::Approx(r.direct).epsilon(1e-8));
    const DeformationProbe p = cmm_deformation_probe(s, {0.25, 0.5, 0.75});
    CHECK(p.max_derivative < 1e-6);
    CHECK(p.max_a41 < 1e-10);
    CHECK(p.max_epsilon < 1e-10);
    CHECK(p.max_gamma_residual < 1e-8);
    CHECK(p.max_trace_sum < 1e-8);
}

TEST_CASE("composition rule and isometry absorption") {
    CHECK(composition_rule(scale(2), scale(5)).lhs == doctest::Approx(std::log(10.0)));
    CHECK(composition_rule(scale(2), scale(5)).residual() < 1e-14);
    Rng rng(14);
    const Backend g = Group::quaternion8();
    const CochainComplex c = random_acyclic(g, 4, 2, rng, true);
    const Morphism q1 = random_quasi_isomorphism(c, rng, true);
    const Morphism q2 = random_quasi_isomorphism(q1.target(), rng, true);
    CHECK(composition_rule(q1, q2).residual() < 1e-8);
    CHECK(composition_rule(Morphism::identity(c), q1).lhs == doctest::Approx(cone_torsion(q1)).epsilon(1e-10));

    const CochainComplex plain = random_acyclic(g, 4, 2, rng, false);
    std::vector<EquivariantMap> u;
    for (int i = 0; i < plain.size(); ++i) u.push_back(random_unitary(g, plain.module(i).rank, rng));
    const Morphism iso(plain, unitary_transform(plain, u), u);
    CHECK(isometry_defect(iso) < 1e-10);
    const Morphism q = random_quasi_isomorphism(iso.target(), rng, true);
    CHECK(isometry_absorption(iso, q, IsometricFactor::First).residual() < 1e-10);
    CHECK(isometry_absorption(q, Morphism::identity(q.target()), IsometricFactor::Second).residual() < 1e-12);
    CHECK_THROWS_AS(isometry_absorption(q, q, IsometricFactor::First), ValidationError);
}

TEST_CASE("cones of quasi-isomorphisms are acyclic") {
    Rng rng(15);
    for (int k = 0; k < 5; ++k) {
        const CochainComplex c = random_complex(Group::cyclic(2), {1, 1, 0}, {1, 2}, rng, true);
        const Morphism q = random_quasi_isomorphism(c, rng, true);
        for (double d : cohomology_dims(cone(q))) CHECK(d < 1e-9);
    }
}

#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "rt/errors.hpp"
#include "rt/random.hpp"

using namespace rt;

namespace {

const Backend S = Group::scalar();

EquivariantMap num(double x) { return EquivariantMap(S, 1, 1, {AlgebraElement::unit(S, x)}); }

CochainComplex line(double x) { return CochainComplex({{S, 1}, {S, 1}}, {num(x)}); }

CochainComplex circle_complex(int m) {
    const Backend g = Group::cyclic(m);
    return CochainComplex({{g, 1}, {g, 1}},
                          {EquivariantMap(g, 1, 1, {AlgebraElement::unit(g) - AlgebraElement::basis(g, 1)})});
}

}  // namespace

TEST_CASE("construction rejects d^2 != 0 and bad metrics") {
    CHECK_THROWS_AS(CochainComplex({{S, 1}, {S, 1}, {S, 1}}, {num(1), num(1)}), ValidationError);
    CHECK_THROWS_AS(CochainComplex({{S, 1}, {S, 1}}, {num(1)}, {num(-1), std::nullopt}), ValidationError);
    CHECK_NOTHROW(CochainComplex({{S, 1}, {S, 1}, {S, 1}}, {num(1), num(0)}));
}

TEST_CASE("Laplacians of small complexes") {
    const CochainComplex c = line(2);
    CHECK(std::abs(laplacian(c, 0).entry(0, 0)[0] - 4.0) < 1e-14);
    CHECK(std::abs(laplacian(c, 1).entry(0, 0)[0] - 4.0) < 1e-14);
    CHECK(laplacian(line(0), 0).norm() < 1e-15);
    for (int m = 2; m <= 6; ++m) {
        const SpectralData s = laplacian_spectrum(circle_complex(m), 0);
        for (int k = 0; k < m; ++k) {
            const double ev = std::norm(1.0 - std::polar(1.0, 2 * std::numbers::pi * k / m));
            bool found = false;
            for (const auto& p : s.pairs) found = found || std::abs(p.value - ev) < 1e-10;
            CHECK(found);
        }
    }
    CHECK_THROWS_AS(laplacian(c, 2), ValidationError);
}

TEST_CASE("Hodge decomposition") {
    const CochainComplex proj({{S, 2}, {S, 1}}, {EquivariantMap(S, 1, 2, {AlgebraElement::unit(S), AlgebraElement::zero(S)})});
    const HodgeDecomposition h = hodge(proj);
    CHECK(std::abs(h.harmonic[0].entry(1, 1)[0] - 1.0) < 1e-12);
    CHECK(std::abs(h.harmonic[0].entry(0, 0)[0]) < 1e-12);
    CHECK(std::abs(h.minus[0].entry(0, 0)[0] - 1.0) < 1e-12);
    CHECK(std::abs(h.plus[1].entry(0, 0)[0] - 1.0) < 1e-12);

    Rng rng(4);
    const CochainComplex c = random_complex(Group::cyclic(3), {1, 0, 1}, {2, 1}, rng, true);
    const HodgeDecomposition r = hodge(c);
    for (int i = 0; i < c.size(); ++i) {
        const int n = c.module(i).rank;
        CHECK((r.harmonic[i] + r.plus[i] + r.minus[i] - EquivariantMap::identity(c.backend(), n)).norm() < 1e-10);
        CHECK((r.harmonic[i] * r.plus[i]).norm() < 1e-10);
        CHECK((r.plus[i] * r.minus[i]).norm() < 1e-10);
    }
    const HodgeDecomposition z = hodge(random_acyclic(Group::cyclic(2), 4, 3, rng, true));
    for (const auto& p : z.harmonic) CHECK(p.norm() < 1e-10);
}

TEST_CASE("cohomology dimensions") {
    const CochainComplex id({{S, 2}, {S, 2}}, {EquivariantMap::identity(S, 2)});
    CHECK(cohomology_dims(id) == std::vector<double>{0.0, 0.0});
    const auto zero = cohomology_dims(line(0));
    CHECK(zero[0] == doctest::Approx(1.0));
    for (int m = 2; m <= 7; ++m) {
        const auto d = cohomology_dims(circle_complex(m));
        CHECK(d[0] == doctest::Approx(1.0 / m));
        CHECK(d[1] == doctest::Approx(1.0 / m));
    }
}

TEST_CASE("torsion values") {
    CHECK(torsion(line(2)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(std::abs(torsion(CochainComplex({{S, 3}, {S, 3}}, {EquivariantMap::identity(S, 3)}))) < 1e-14);
    for (int m = 2; m <= 8; ++m) {
        CHECK_THROWS_AS(torsion(circle_complex(m)), NumericalError);
        CHECK(torsion(circle_complex(m), TorsionMode::Lenient) == doctest::Approx(oracle::cyclotomic_log_vol(m)).epsilon(1e-12));
    }
}

TEST_CASE("determinant class value") {
    CHECK(det_class_value(line(2)) == 0.0);
    CHECK(det_class_value(line(std::exp(-1.5))) == doctest::Approx(-6.0));
    for (int m = 3; m <= 7; ++m) {
        double expect = 0;
        for (int k = 1; k < m; ++k) {
            const double ev = std::norm(1.0 - std::polar(1.0, 2 * std::numbers::pi * k / m));
            if (ev <= 1) expect += 2 * std::log(ev) / m;
        }
        CHECK(det_class_value(circle_complex(m)) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("suspension, duality, direct sums and unitary invariance") {
    Rng rng(5);
    for (const Backend& g : {Group::scalar(), Group::cyclic(4), Group::symmetric3()}) {
        const CochainComplex a = random_acyclic(g, 4, 3, rng, true), b = random_acyclic(g, 5, 2, rng, true);
        const double ta = torsion(a), tb = torsion(b);
        CHECK(torsion(suspension(a)) == doctest::Approx(-ta).epsilon(1e-10));
        CHECK(torsion(dual(a)) == doctest::Approx(ta).epsilon(1e-10));
        const int n = std::max(a.size(), b.size());
        CHECK(torsion(direct_sum(pad(a, n), pad(b, n))) == doctest::Approx(ta + tb).epsilon(1e-10));
        const CochainComplex plain = random_acyclic(g, 4, 3, rng, false);
        std::vector<EquivariantMap> u;
        for (int i = 0; i < plain.size(); ++i) u.push_back(random_unitary(g, plain.module(i).rank, rng));
        CHECK(torsion(unitary_transform(plain, u)) == doctest::Approx(torsion(plain)).epsilon(1e-10));
    }
    const CochainComplex zero({{S, 0}}, {});
    CHECK(suspension(zero).size() >= 1);
}

TEST_CASE("isospectral half Laplacians and the counting identity") {
    Rng rng(6);
    const CochainComplex c = random_acyclic(Group::cyclic(3), 4, 3, rng, true);
    for (int q = 0; q + 1 < c.size(); ++q) {
        // d* d on C_q^- and d d* on C_{q+1}^+ share their positive spectrum.
        const SpectralData a = differential_spectrum(c, q);
        const SpectralData l0 = laplacian_spectrum(c, q), l1 = laplacian_spectrum(c, q + 1);
        for (const auto& p : a.pairs) {
            if (p.value <= 0) continue;
            const double ev = p.value * p.value;
            CHECK(F(l0, ev * 1.0000001) - F(l0, ev * 0.9999999) >= p.multiplicity - 1e-9);
            CHECK(F(l1, ev * 1.0000001) - F(l1, ev * 0.9999999) >= p.multiplicity - 1e-9);
        }
    }
}

TEST_CASE("acyclic deformation") {
    const CochainComplex c = acyclic_deformation(line(0.1), 1.0);
    CHECK(std::abs(c.differential(0).entry(0, 0)[0] - 1.1) < 1e-12);
    CHECK_THROWS_AS(acyclic_deformation(line(1), 0.0), NumericalError);
    Rng rng(7);
    const CochainComplex r = random_complex(Group::cyclic(2), {1, 1, 0}, {2, 1}, rng, true);
    CHECK_NOTHROW(acyclic_deformation(r, 0.5));
}

TEST_CASE("unit shift identity") {
    Rng rng(8);
    for (int k = 0; k < 5; ++k) {
        const UnitShift s = unit_shift_identity(random_acyclic(Group::cyclic(3), 4, 3, rng, true), -0.5);
        CHECK(std::abs(s.plain) < 1e-9);
        CHECK(std::abs(s.power) < 1e-9);
    }
    const UnitShift c = unit_shift_identity(circle_complex(5), -0.3);
    CHECK(std::abs(c.plain) < 1e-9);
    CHECK(std::abs(c.power) < 1e-9);
    const UnitShift z = unit_shift_identity(line(0), -0.5);
    CHECK(std::abs(z.plain) < 1e-12);
    CHECK_THROWS(unit_shift_identity(line(1), 0.5));
}

TEST_CASE("torsion formulas agree on random complexes") {
    Rng rng(9);
    for (const Backend& g : {Group::scalar(), Group::cyclic(6), Group::quaternion8()})
        for (int k = 0; k < 6; ++k) {
            const TorsionReport r = torsion_report(random_acyclic(g, 5, 3, rng, k % 2 == 0));
            CHECK(r.consistent);
            CHECK(r.formulas.discrepancy() < 1e-9);
        }
}

#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "rt/errors.hpp"
#include "rt/random.hpp"
#include "rt/spectral.hpp"

using namespace rt;

namespace {

EquivariantMap one_by_one(const Backend& g, const AlgebraElement& a) { return EquivariantMap(g, 1, 1, {a}); }

EquivariantMap scalar_diag(std::vector<double> v) {
    std::vector<AlgebraElement> e;
    for (double x : v) e.push_back(AlgebraElement::unit(Group::scalar(), x));
    return EquivariantMap::diagonal(e);
}

// -d/ds sum m lambda^{-s} at s = 0 by a complex step.
double complex_step_log_det(const SpectralData& s) {
    const double h = 1e-20;
    std::complex<double> z = 0;
    for (const auto& p : s.pairs)
        if (p.value > 0) z += p.multiplicity * std::exp(-std::complex<double>(0, h) * std::log(p.value));
    return -z.imag() / h;
}

}  // namespace

TEST_CASE("group tables are validated") {
    CHECK_THROWS_AS(Group("bad", {"e", "a"}, {{0, 1}, {1, 1}}, 0), ValidationError);
    CHECK_THROWS_AS(Group("bad", {"e", "a", "b"}, {{0, 1, 2}, {1, 2, 0}, {2, 1, 0}}, 0), ValidationError);
    for (const Backend& g : {Group::cyclic(6), Group::symmetric3(), Group::quaternion8()})
        for (int a = 0; a < g->order(); ++a) CHECK(g->mul(a, g->inv(a)) == g->identity());
    const Backend p = Group::product(*Group::cyclic(2), *Group::cyclic(3));
    CHECK(p->order() == 6);
}

TEST_CASE("expansion of small entries") {
    const Backend z2 = Group::cyclic(2);
    const Matrix s = expand(*z2, AlgebraElement::basis(z2, 1));
    CHECK(std::abs(s(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(s(1, 0) - 1.0) < 1e-15);
    CHECK(std::abs(s(0, 0)) < 1e-15);

    // Right translation: the first column of e + g is (1, 1, 0) and the matrix commutes with
    // every left translation.
    const Backend z3 = Group::cyclic(3);
    const Matrix m = expand(*z3, AlgebraElement::unit(z3) + AlgebraElement::basis(z3, 1));
    CHECK(std::abs(m(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(m(1, 0) - 1.0) < 1e-15);
    CHECK(std::abs(m(2, 0)) < 1e-15);
    Matrix left = Matrix::Zero(3, 3);
    for (int h = 0; h < 3; ++h) left(z3->mul(1, h), h) = 1.0;
    CHECK((left * m - m * left).norm() < 1e-15);
}

TEST_CASE("expansion is a *-homomorphism") {
    Rng rng(1);
    for (const Backend& g : {Group::cyclic(4), Group::symmetric3(), Group::quaternion8()}) {
        const EquivariantMap a = random_map(g, 2, 3, rng), b = random_map(g, 3, 2, rng);
        CHECK(((a * b).expanded() - a.expanded() * b.expanded()).norm() < 1e-12);
        CHECK((a.adjoint().expanded() - a.expanded().adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("von Neumann trace") {
    const Backend z2 = Group::cyclic(2);
    CHECK(std::abs(vn_trace(one_by_one(z2, AlgebraElement::unit(z2, 5.0) + AlgebraElement::basis(z2, 1, 7.0))) - 5.0) < 1e-14);
    CHECK(std::abs(vn_trace(scalar_diag({1, 2})) - 3.0) < 1e-14);
    CHECK(std::abs(vn_trace(EquivariantMap::identity(Group::symmetric3(), 1)) - 1.0) < 1e-14);
}

TEST_CASE("adjoint examples") {
    const Backend z2 = Group::cyclic(2);
    const EquivariantMap s = one_by_one(z2, AlgebraElement::basis(z2, 1));
    CHECK((s.adjoint().expanded() - s.expanded()).norm() < 1e-15);
    const EquivariantMap i = one_by_one(Group::scalar(), AlgebraElement::unit(Group::scalar(), cplx(0, 1)));
    CHECK(std::abs(i.adjoint().entry(0, 0)[0] - cplx(0, -1)) < 1e-15);
}

TEST_CASE("spectral data and counting functions") {
    const SpectralData zero = spectral_data(EquivariantMap(Group::scalar(), 2, 2));
    REQUIRE(zero.pairs.size() == 1);
    CHECK(zero.pairs[0].value == 0.0);
    CHECK(zero.pairs[0].multiplicity == doctest::Approx(2.0));

    const SpectralData d = spectral_data(scalar_diag({3, 4}));
    REQUIRE(d.pairs.size() == 2);
    CHECK(d.pairs[0].value == doctest::Approx(3.0));
    CHECK(d.pairs[1].value == doctest::Approx(4.0));

    const Backend z4 = Group::cyclic(4);
    const SpectralData c = spectral_data(one_by_one(z4, AlgebraElement::unit(z4) - AlgebraElement::basis(z4, 1)));
    CHECK(F_plus(c, 1.5) == doctest::Approx(0.5));
    CHECK(F(c, 1.5) == doctest::Approx(0.75));
    CHECK(c.kernel_dim() == doctest::Approx(0.25));

    const SpectralData e = make_spectrum({0.0, 2.0}, 1.0);
    CHECK(F_plus(e, 1.0) == 0.0);
    CHECK(F(e, 1.0) == doctest::Approx(1.0));
    CHECK(F_plus(make_spectrum({1.0, 2.0}, 1.0), 3.0) == doctest::Approx(2.0));
}

TEST_CASE("heat trace") {
    CHECK(heat_trace(make_spectrum({1.0}, 1.0), 1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(heat_trace(make_spectrum({0, 0, 0, 0, 0}, 1.0), 2.0) == 0.0);
    CHECK(heat_trace(make_spectrum({1, 2, 2, 2}, 1.0), 0.5) == doctest::Approx(std::exp(-0.5) + 3 * std::exp(-1.0)));
    CHECK_THROWS_AS(heat_trace(make_spectrum({1.0}, 1.0), 0.0), NumericalError);
}

TEST_CASE("zeta functions") {
    const SpectralData one = make_spectrum({1.0}, 1.0);
    for (double s : {-1.0, 0.0, 2.5}) CHECK(std::abs(zeta(one, s) - 1.0) < 1e-14);
    CHECK(std::abs(zeta(make_spectrum({2.0, 3.0}, 1.0), 1.0) - (0.5 + 1.0 / 3.0)) < 1e-14);
    const SpectralData four = make_spectrum({4.0, 4.0}, 1.0);
    CHECK(-zeta_derivative(four, 0.0).real() == doctest::Approx(2 * std::log(4.0)).epsilon(1e-13));
    CHECK_THROWS(zeta(make_spectrum({0.0}, 1.0), 1.0));
}

TEST_CASE("zeta split and log volume on random maps") {
    Rng rng(2);
    for (int k = 0; k < 30; ++k) {
        const Backend g = k % 2 ? Group::cyclic(3) : Group::symmetric3();
        const EquivariantMap phi = random_map(g, 3, 2, rng);
        const SpectralData s = spectral_data(phi);
        CHECK(std::abs(zeta_II(s, 0.0)) < 1e-12);
        for (cplx z : {cplx(0.4), cplx(-1.3), cplx(0.2, 0.9)})
            CHECK(std::abs(zeta_I(s, z) + zeta_II(s, z) - zeta(s, z)) < 1e-12 * std::max(1.0, std::abs(zeta(s, z))));
        CHECK(log_vol(phi) == doctest::Approx(complex_step_log_det(s)).epsilon(1e-12));
        CHECK(std::abs(log_vol(phi) + zeta_derivative(s, 0.0).real()) < 1e-10);
    }
}

TEST_CASE("log volume examples") {
    CHECK(std::abs(log_vol(EquivariantMap::identity(Group::cyclic(5), 2))) < 1e-14);
    CHECK(log_vol(scalar_diag({2, 3})) == doctest::Approx(std::log(6.0)));
    for (int m = 2; m <= 9; ++m) {
        const Backend g = Group::cyclic(m);
        const double lv = log_vol(one_by_one(g, AlgebraElement::unit(g) - AlgebraElement::basis(g, 1)));
        CHECK(lv == doctest::Approx(oracle::cyclotomic_log_vol(m)).epsilon(1e-12));
        CHECK(lv == doctest::Approx(std::log(double(m)) / m).epsilon(1e-12));
    }
    CHECK(log_vol(EquivariantMap(Group::scalar(), 2, 2)) == 0.0);
}

TEST_CASE("variational characterisation on diagonal maps") {
    // F_plus(lambda) is the largest dimension of a subspace orthogonal to the kernel where
    // |phi x| < lambda |x|; for diagonal maps the extremal subspaces are coordinate ones.
    const std::vector<double> v = {0.0, 0.3, 1.2, 1.2, 2.5};
    const SpectralData s = spectral_data(scalar_diag(v));
    for (double lambda : {0.1, 0.5, 1.3, 3.0}) {
        int best = 0;
        for (int mask = 0; mask < (1 << v.size()); ++mask) {
            bool ok = true;
            int dim = 0;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (mask >> i & 1) {
                    ok = ok && v[i] > 0 && v[i] < lambda;
                    ++dim;
                }
            if (ok) best = std::max(best, dim);
        }
        CHECK(F_plus(s, lambda) == doctest::Approx(best));
    }
}

TEST_CASE("trace norm bound") {
    Rng rng(3);
    for (int k = 0; k < 20; ++k) {
        const Backend g = Group::cyclic(4);
        const EquivariantMap v = random_map(g, 3, 3, rng), u = random_map(g, 3, 3, rng);
        CHECK(trace_norm(v * u) <= operator_norm(v) * trace_norm(u) + 1e-10);
        double sq = 0;
        for (const auto& p : spectral_data(u).pairs) sq += p.multiplicity * p.value * p.value;
        CHECK(vn_trace(u.adjoint() * u).real() == doctest::Approx(sq).epsilon(1e-10));
    }
}

TEST_CASE("spectral shift") {
    const EquivariantMap big = scalar_diag({2.0, 3.0});
    CHECK(spectral_shift(big, 1.0, 2.0).norm() < 1e-14);
    const SpectralData after = self_adjoint_spectrum(scalar_diag({0.0, 5.0}) + spectral_shift(scalar_diag({0.0, 5.0}), 1.0, 2.0));
    REQUIRE(after.pairs.size() == 2);
    CHECK(after.pairs[0].value == doctest::Approx(1.0));
    CHECK(after.pairs[1].value == doctest::Approx(5.0));
    CHECK_THROWS(spectral_shift(big, 2.0, 1.0));
    CHECK_THROWS_AS(spectral_shift(one_by_one(Group::scalar(), AlgebraElement::unit(Group::scalar(), -1.0)), 1.0, 2.0),
                    ValidationError);
    CHECK(shift_profile(0.2, 1.0, 2.0) == doctest::Approx(1.0));
    CHECK(shift_profile(2.5, 1.0, 2.0) == doctest::Approx(2.5));
    double prev = 1.0;
    for (double x = 1.0; x <= 2.0; x += 0.05) {
        const double g = shift_profile(x, 1.0, 2.0);
        CHECK(g <= x + 1e-15);
        CHECK(g >= prev - 1e-15);
        prev = g;
    }
}

TEST_CASE("Mellin free term") {
    const auto zero = [](double) { return 0.0; };
    CHECK(mellin_free_term({{}, 4.0, zero, 1.0}) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(mellin_free_term({{{-0.5, 1.0}}, 3.0, zero, 1.0}) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(mellin_free_term({{}, 5.0, [](double t) { return 2 * t; }, 1.0}) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK_THROWS(mellin_free_term({{}, 1.0, [](double) { return 1.0; }, 1.0}));
    // The transform of a constant c is c t^s / (s Gamma(s)) = c / Gamma(s + 1).
    CHECK(mellin_transform({{}, 2.0, zero, 1.0}, 0.5) == doctest::Approx(2.0 / std::tgamma(1.5)).epsilon(1e-10));
}

TEST_CASE("zeta difference at zero reports both sides") {
    const ZetaDifference a = zeta_difference_at_zero(scalar_diag({0, 1}), scalar_diag({1, 0}));
    CHECK(a.value == doctest::Approx(-1.0));
    CHECK(a.kernel_difference == doctest::Approx(1.0));
    const ZetaDifference b = zeta_difference_at_zero(scalar_diag({2, 3}), scalar_diag({1, 1}));
    CHECK(b.value == doctest::Approx(0.0));
    const ZetaDifference c = zeta_difference_at_zero(scalar_diag({0, 2}), EquivariantMap(Group::scalar(), 2, 2));
    CHECK(c.value == doctest::Approx(0.0));
}

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "rt/detclass.hpp"
#include "rt/errors.hpp"

using namespace rt;

TEST_CASE("sampling") {
    const GridFunction f = sample({"circle_symbol", 1.0}, 8);
    REQUIRE(f.n() == 8);
    CHECK(f.x[0] == doctest::Approx(1.0 / 16));
    for (int j = 0; j < 8; ++j) CHECK(f.log_abs[j] == doctest::Approx(std::log(std::abs(f.values[j]))));
    const GridFunction r = sample({"roots", 1.0}, 5);
    CHECK(r.x[0] == 0.0);
    CHECK(std::isinf(r.log_abs[0]));
    CHECK_THROWS_AS(sample({"nonsense", 1.0}, 4), ParseError);
}

TEST_CASE("constant symbols") {
    const GridFunction f = sample({"constant", std::exp(-1.0)}, 16);
    CHECK(partial_logdet(f) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(circle_torsion(f) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(distribution(f, 0.3) == 0.0);
    CHECK(distribution(f, 0.5) == doctest::Approx(1.0));
    CHECK(partial_logdet(sample({"constant", 2.0}, 16)) == 0.0);
}

TEST_CASE("circle symbol") {
    // The midpoint product of |e^{2 pi i x} - 1| is exactly 2.
    for (int n : {8, 64, 4096}) {
        const GridFunction f = sample({"circle_symbol", 1.0}, n);
        CHECK(circle_torsion(f) == doctest::Approx(std::log(2.0) / n).epsilon(1e-10));
        CHECK(std::abs(circle_torsion(f) - oracle::mahler_measure_z_minus_1()) <= std::log(2.0) / n + 1e-12);
    }
    const GridFunction f = sample({"circle_symbol", 1.0}, 1 << 16);
    CHECK(partial_logdet(f) == doctest::Approx(oracle::partial_symbol_integral()).epsilon(1e-4));
}

TEST_CASE("torsion of the multiplication complex") {
    for (const Family& fam : {Family{"circle_symbol", 1.0}, Family{"constant", 0.5}}) {
        const GridFunction f = sample(fam, 32);
        CHECK(torsion(circle_complex(f), TorsionMode::Strict) == doctest::Approx(f.n() * circle_torsion(f)).epsilon(1e-12));
    }
}

TEST_CASE("flat symbol distribution") {
    // |exp(-1/x^2)| <= lambda exactly when x <= (-log lambda)^{-1/2}.
    const GridFunction f = sample({"flat", 1.0}, 20000);
    for (double lambda : {1e-40, 1e-6, 0.1, 0.5}) {
        const double expected = std::min(1.0, std::pow(-std::log(lambda), -0.5));
        CHECK(distribution(f, lambda) == doctest::Approx(expected).epsilon(1e-3));
    }
    const SpectralData sp = mult_spectrum(sample({"flat", 1.0}, 64));
    double total = 0;
    for (const SpectralPair& p : sp.pairs) total += p.multiplicity;
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("zeros") {
    for (int m : {3, 5, 8}) {
        const GridFunction f = sample({"roots", 1.0}, m);
        CHECK_THROWS_AS(circle_torsion(f), NumericalError);
        CHECK(circle_torsion(f, ZeroPolicy::OffKernel) == doctest::Approx(std::log(double(m)) / m).epsilon(1e-12));
    }
}

TEST_CASE("divergence probe") {
    CHECK(divergence_probe({"flat", 1.0}, {64, 128, 256, 512}).verdict == Verdict::Divergent);
    CHECK(divergence_probe({"circle_symbol", 1.0}, {1024, 2048, 4096}, 0.02).verdict == Verdict::Convergent);
    CHECK_THROWS_AS(divergence_probe({"flat", 1.0}, {64, 128}), ValidationError);
    CHECK(to_string(Verdict::Inconclusive) == "INCONCLUSIVE");

    const auto one = detclass_sweep({"circle_symbol", 1.0}, {16, 32, 64}, 1);
    const auto three = detclass_sweep({"circle_symbol", 1.0}, {16, 32, 64}, 3);
    REQUIRE(one.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(one[i].n == three[i].n);
        CHECK(one[i].partial_logdet == three[i].partial_logdet);
    }
}

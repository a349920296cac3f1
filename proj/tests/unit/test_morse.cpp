#include <cmath>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "rt/errors.hpp"
#include "rt/fixtures.hpp"

using namespace rt;

namespace {

double total_abs(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

}  // namespace

TEST_CASE("words") {
    const std::vector<std::string> gens = {"a", "b"};
    CHECK(parse_word("a b^-1 a^2", gens) == Word{1, -2, 1, 1});
    CHECK(parse_word("a*b", gens) == Word{1, 2});
    CHECK(parse_word("1", gens).empty());
    CHECK(parse_word("", gens).empty());
    CHECK_THROWS_AS(parse_word("c", gens), ParseError);
    CHECK_THROWS_AS(parse_word("a^x", gens), ParseError);
    CHECK(inverse(Word{1, -2}) == Word{2, -1});
    CHECK(parse_word(format_word(Word{1, -2, -2}, gens), gens) == Word{1, -2, -2});
}

TEST_CASE("representations check relators") {
    const Backend z3 = Group::cyclic(3);
    const Word cube = {1, 1, 1};
    const Representation good(z3, 1, {"g"}, {AlgebraElement::basis(z3, 1)});
    CHECK_NOTHROW(good.check_relators({cube}));
    const Backend z4 = Group::cyclic(4);
    const Representation bad(z4, 1, {"g"}, {AlgebraElement::basis(z4, 1)});
    CHECK_THROWS_AS(bad.check_relators({cube}), ValidationError);
    CHECK(good.unimodularity_defect() < 1e-12);
}

TEST_CASE("circle complex over cyclic groups") {
    for (int m = 1; m <= 8; ++m) {
        const Representation rho = circle_representation(m);
        const CochainComplex c = build_complex(circle(), rho);
        const EquivariantMap d0 = c.differential(0);
        const AlgebraElement& d = d0.entry(0, 0);
        CHECK(std::abs(d[0] - (m > 1 ? 1.0 : 0.0)) < 1e-15);
        CHECK(combinatorial_torsion(circle(), rho) == doctest::Approx(oracle::cyclotomic_log_vol(m)).epsilon(1e-12));
        const auto dims = cohomology_dims(c);
        CHECK(dims[0] == doctest::Approx(1.0 / m));
    }
}

TEST_CASE("sphere-like data with no incidences") {
    MorseData m;
    m.cells = {{"p"}, {}, {"q"}};
    const CochainComplex c = build_complex(m, trivial_representation(Group::cyclic(3), 2, {}));
    CHECK(c.size() == 3);
    CHECK(c.differential(0).norm() == 0.0);
    CHECK(c.differential(1).norm() == 0.0);
}

TEST_CASE("torus cohomology matches the covering grid") {
    for (int m : {1, 2, 3}) {
        const auto dims = cohomology_dims(build_complex(torus(), torus_representation(m)));
        const auto expect = oracle::grid_torus_betti(m);
        REQUIRE(dims.size() == 3);
        for (int q = 0; q < 3; ++q) CHECK(dims[static_cast<std::size_t>(q)] == doctest::Approx(expect[static_cast<std::size_t>(q)]).epsilon(1e-9));
    }
}

TEST_CASE("genus two surface") {
    const CochainComplex c = build_complex(genus2(), genus2_representation());
    const auto dims = cohomology_dims(c);
    CHECK(dims[0] - dims[1] + dims[2] == doctest::Approx(-2.0));
    CHECK(std::isfinite(combinatorial_torsion(genus2(), genus2_representation())));
}

TEST_CASE("inconsistent incidence data is rejected") {
    MorseData m = circle();
    m.cells.push_back({"s"});
    m.incidences.push_back({"s", "q", {{1, {}}}});
    CHECK_THROWS_AS(build_complex(m, circle_representation(3)), ValidationError);
}

TEST_CASE("torsion does not depend on cell orientations") {
    const Representation rho = torus_representation(2);
    const double t = combinatorial_torsion(torus(), rho);
    for (const auto& cells : torus().cells)
        for (const auto& cell : cells) CHECK(combinatorial_torsion(reorient(torus(), cell), rho) == doctest::Approx(t).epsilon(1e-10));
}

TEST_CASE("Hermitian structures must be positive") {
    const Representation rho = circle_representation(3);
    HermitianStructure mu;
    mu.set("p", AlgebraElement::unit(rho.backend(), -1.0));
    CHECK_THROWS_AS(build_complex(circle(), rho, mu), ValidationError);
}

TEST_CASE("subdivision maps") {
    const Representation rho = circle_representation(3);
    const Backend& g = rho.backend();
    const SubdivisionData trivial = circle_subdivision(3, {0, 1, 2});
    CHECK(std::abs(cone_torsion(subdivision_map(trivial, rho, {}))) < 1e-12);

    const SubdivisionData s = circle_subdivision(2, {0});
    CHECK(std::abs(cone_torsion(subdivision_map(s, rho, {}))) < 1e-9);
    CHECK(std::abs(subdivision_weight(s, rho, {})) < 1e-12);

    HermitianStructure mu;
    mu.set("v1", AlgebraElement::unit(g, 1.8));
    const double w = subdivision_weight(s, rho, mu);
    CHECK(w == doctest::Approx(-std::log(1.8)).epsilon(1e-12));
    CHECK(cone_torsion(subdivision_map(s, rho, mu)) == doctest::Approx(w).epsilon(1e-9));
    CHECK(relative_torsion(subdivision_map(s, rho, mu)) == doctest::Approx(w).epsilon(1e-9));
    CHECK(std::abs(relative_torsion(Morphism::identity(build_complex(circle(), rho))) ) < 1e-12);
}

TEST_CASE("subdivision weights form a cocycle") {
    const Representation rho = circle_representation(3);
    const Backend& g = rho.backend();
    const MorseData fine = circle_triangulation(4);
    HermitianStructure mu;
    for (int k = 0; k < 4; ++k) {
        mu.set("v" + std::to_string(k), AlgebraElement::unit(g, 1.0 + 0.3 * k));
        mu.set("e" + std::to_string(k), AlgebraElement::unit(g, 2.0 - 0.2 * k) + AlgebraElement::basis(g, 1, 0.1) +
                                            AlgebraElement::basis(g, 2, 0.1));
    }
    const CarrierMap t0 = identity_carriers(fine);
    const CarrierMap t1 = circle_carriers(4, {0, 2});
    const CarrierMap t2 = circle_carriers(4, {0});
    CHECK(std::abs(subdivision_weight(fine, t1, t1, rho, mu)) < 1e-14);
    const double w01 = subdivision_weight(fine, t0, t1, rho, mu);
    const double w12 = subdivision_weight(fine, t1, t2, rho, mu);
    const double w02 = subdivision_weight(fine, t0, t2, rho, mu);
    CHECK(w01 + w12 == doctest::Approx(w02).epsilon(1e-12));
    CHECK(subdivision_weight(fine, t1, t0, rho, mu) == doctest::Approx(-w01).epsilon(1e-12));
}

TEST_CASE("V and theta") {
    const Representation rho = circle_representation(3);
    const Backend& g = rho.backend();
    const TransportGraph graph = circle_transport_graph(4);
    HermitianStructure mu;
    for (const auto& [x, v] : V_function(rho, mu, mu, graph.points)) CHECK(v == 0.0);
    for (double th : theta_cochain(rho, mu, graph)) CHECK(std::abs(th) < 1e-14);

    HermitianStructure bumpy;
    for (std::size_t k = 0; k < graph.points.size(); ++k)
        bumpy.set(graph.points[k], AlgebraElement::unit(g, 1.0 + 0.4 * double(k)) + AlgebraElement::basis(g, 1, 0.1) +
                                       AlgebraElement::basis(g, 2, 0.1));
    CHECK(total_abs(theta_loop_sums(rho, bumpy, graph)) < 1e-10);
    CHECK(total_abs(theta_loop_sums(torus_representation(2), {}, torus_transport_graph(2, 2))) < 1e-10);
    const HermitianStructure flat = unimodular_normalize(rho, bumpy, graph);
    CHECK(total_abs(theta_cochain(rho, flat, graph)) < 1e-10);

    const Backend s = Group::scalar();
    const Representation doubling(s, 1, {"g"}, {AlgebraElement::unit(s, 2.0)});
    CHECK_THROWS(unimodular_normalize(doubling, {}, graph));
}

TEST_CASE("Hermitian anomaly") {
    const Representation rho = circle_representation(3);
    const Backend& g = rho.backend();
    const SubdivisionData s = circle_subdivision(4, {0});
    HermitianStructure mu1;
    mu1.set("v1", AlgebraElement::unit(g, 1.3));
    const AnomalyResult same = hermitian_anomaly(s, rho, mu1, mu1);
    CHECK(std::abs(same.lhs) < 1e-12);
    CHECK(same.residual() < 1e-12);

    const HermitianStructure mu2 = mu1.scaled("v2", 2.0, g);
    const AnomalyResult r = hermitian_anomaly(s, rho, mu1, mu2);
    CHECK(r.residual() < 1e-9);
    CHECK(std::abs(r.critical_term) < 1e-14);
    CHECK(std::abs(r.lhs) > 1e-6);

    CHECK_THROWS_AS(hermitian_anomaly(s, rho, mu1, mu1.scaled("v0", 2.0, g)), ValidationError);
    CHECK(hermitian_anomaly(s, rho, mu1, mu1.scaled("v0", 2.0, g), false).residual() < 1e-9);
}

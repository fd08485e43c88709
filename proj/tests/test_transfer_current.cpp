#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "currents/graph.hpp"
#include "currents/transfer_current.hpp"

using namespace currents;

namespace {

WeightedMultigraph triangle() {
    return build_graph({{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}, 3);
}

WeightedMultigraph cycle(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    return build_graph(std::move(edges), n);
}

WeightedMultigraph star(int n) {
    std::vector<Edge> edges;
    for (int i = 1; i < n; ++i) edges.push_back({0, i, 1.0});
    return build_graph(std::move(edges), n);
}

}  // namespace

TEST_CASE("triangle transfer currents match the closed form") {
    const ElectricalSystem es = analyze(triangle());
    const Eigen::MatrixXd& k = es.currents.k;
    REQUIRE(k.rows() == 3);

    // Unit injection across edge 0 keeps 2/3 on edge 0 and routes 1/3 along
    // the two-edge detour, with the sign set by each edge's orientation.
    CHECK(k(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(k(1, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
    CHECK(k(2, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));

    // Unit conductances make K, Pi, and the green matrix coincide.
    CHECK((k - es.currents.pi).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((k - es.green).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((es.currents.kbar - k.cwiseAbs()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((es.currents.pibar - es.currents.pi.cwiseAbs()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("four-cycle row and norms") {
    const ElectricalSystem es = analyze(cycle(4));
    const Eigen::MatrixXd& k = es.currents.k;
    CHECK(k(0, 0) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(k(1, 0) == doctest::Approx(-0.25).epsilon(1e-13));
    CHECK(k(2, 0) == doctest::Approx(-0.25).epsilon(1e-13));
    CHECK(k(3, 0) == doctest::Approx(-0.25).epsilon(1e-13));
    CHECK(average_l1_flow(es.currents.kbar) == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("average_l1_flow on the triangle") {
    const ElectricalSystem es = analyze(triangle());
    CHECK(average_l1_flow(es.currents.kbar) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("trees route each injection through its own edge only") {
    for (const WeightedMultigraph& g : {star(5), build_graph({{0, 1, 1.0}, {1, 2, 1.0}}, 3)}) {
        const ElectricalSystem es = analyze(g);
        const int m = g.edge_count();
        CHECK((es.currents.k - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(average_l1_flow(es.currents.kbar) == doctest::Approx(1.0).epsilon(1e-12));
        for (int e = 0; e < m; ++e) {
            CHECK(effective_resistance(es.green, e) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("effective resistance on the triangle") {
    const ElectricalSystem es = analyze(triangle());
    for (int e = 0; e < 3; ++e) {
        CHECK(effective_resistance(es.green, e) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("K is symmetric exactly when conductances are unit") {
    const ElectricalSystem unit = analyze(cycle(5));
    CHECK((unit.currents.k - unit.currents.k.transpose()).cwiseAbs().maxCoeff() < 1e-13);

    const WeightedMultigraph g = build_graph({{0, 1, 2.0}, {1, 2, 1.0}, {0, 2, 4.0}}, 3);
    const ElectricalSystem weighted = analyze(g);
    CHECK((weighted.currents.k - weighted.currents.k.transpose()).cwiseAbs().maxCoeff() > 1e-3);

    // The conductance-rescaled form C^{-1} K is always symmetric.
    const Eigen::VectorXd inv_c = weighted.sys.conductance.cwiseInverse();
    const Eigen::MatrixXd scaled = inv_c.asDiagonal() * weighted.currents.k;
    CHECK((scaled - scaled.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Pi is an orthogonal projection of rank n - 1") {
    const WeightedMultigraph g = build_graph(
        {{0, 1, 2.0}, {1, 2, 0.5}, {2, 3, 3.0}, {3, 0, 1.0}, {0, 2, 5.0}}, 4);
    const ElectricalSystem es = analyze(g);
    const ProjectionResiduals res = projection_residuals(es.currents.pi);
    CHECK(res.idempotency < 1e-12);
    CHECK(res.symmetry < 1e-13);
    CHECK(res.trace == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("unit_injection_currents agrees with the matching K column") {
    const WeightedMultigraph g = build_graph(
        {{0, 1, 2.0}, {1, 2, 0.5}, {2, 3, 3.0}, {3, 0, 1.0}, {0, 2, 5.0}}, 4);
    const ElectricalSystem es = analyze(g);
    for (int e = 0; e < g.edge_count(); ++e) {
        const Eigen::VectorXd direct =
            unit_injection_currents(es.sys, g.edge(e).head, g.edge(e).tail);
        CHECK((direct - es.currents.k.col(e)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("unit_injection_currents validates endpoints") {
    const IncidenceSystem sys = incidence_system(triangle());
    CHECK_THROWS_AS(unit_injection_currents(sys, 0, 0), linalg_error);
    CHECK_THROWS_AS(unit_injection_currents(sys, 0, 7), linalg_error);
    CHECK_THROWS_AS(unit_injection_currents(sys, -1, 1), linalg_error);
}

TEST_CASE("flipping an edge conjugates K by a sign flip") {
    const WeightedMultigraph g = build_graph({{0, 1, 2.0}, {1, 2, 1.0}, {0, 2, 4.0}}, 3);
    const Eigen::MatrixXd k = analyze(g).currents.k;
    const Eigen::MatrixXd flipped = analyze(g.with_flipped_edge(1)).currents.k;

    Eigen::VectorXd signs = Eigen::VectorXd::Ones(3);
    signs(1) = -1.0;
    const Eigen::MatrixXd conjugated = signs.asDiagonal() * k * signs.asDiagonal();
    CHECK((flipped - conjugated).cwiseAbs().maxCoeff() < 1e-13);

    // The absolute matrices ignore orientation entirely.
    CHECK((analyze(g.with_flipped_edge(1)).currents.kbar - analyze(g).currents.kbar)
              .cwiseAbs()
              .maxCoeff() < 1e-13);
}

TEST_CASE("K is invariant under global conductance rescaling") {
    const WeightedMultigraph g = build_graph({{0, 1, 2.0}, {1, 2, 1.0}, {0, 2, 4.0}}, 3);
    const ElectricalSystem base = analyze(g);
    const ElectricalSystem scaled = analyze(g.with_scaled_conductance(10.0));
    CHECK((base.currents.k - scaled.currents.k).cwiseAbs().maxCoeff() < 1e-12);
    // The green matrix picks up the inverse factor.
    CHECK((10.0 * scaled.green - base.green).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("parallel edges share current by conductance") {
    const WeightedMultigraph g = build_graph({{0, 1, 1.0}, {0, 1, 3.0}}, 2);
    const ElectricalSystem es = analyze(g);
    // Injection across edge 0: 1/4 through edge 0, 3/4 through edge 1.
    CHECK(es.currents.k(0, 0) == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(es.currents.k(1, 0) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(effective_resistance(es.green, 0) == doctest::Approx(0.25).epsilon(1e-13));
}

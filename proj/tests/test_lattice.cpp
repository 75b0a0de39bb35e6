#include "qecforge/errors.hpp"
#include "qecforge/lattice.hpp"

#include <doctest.h>

#include <set>

using namespace qecforge;

TEST_CASE("3x3 torus grid has the root code's shape") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    CHECK(root.vertex_count() == 9);
    CHECK(root.face_count() == 9);
    CHECK(root.edge_count() == 18);
    CHECK(root.initial_qubits() == 18);
    CHECK(root.vertex_count() - root.edge_count() + root.face_count() == 0);
    for (int v = 0; v < 9; ++v) CHECK(root.vertex_degree(v) == 4);
    for (int f = 0; f < 9; ++f) CHECK(root.face_degree(f) == 4);
}

TEST_CASE("4x4 torus grid") {
    const CodeLattice lat = CodeLattice::torus_grid(4, 4);
    CHECK(lat.vertex_count() == 16);
    CHECK(lat.edge_count() == 32);
    CHECK(lat.face_count() == 16);
    for (int v = 0; v < 16; ++v) CHECK(lat.vertex_degree(v) == 4);
    for (int f = 0; f < 16; ++f) CHECK(lat.face_degree(f) == 4);
}

TEST_CASE("grids with a wrap of width two are rejected") {
    CHECK_THROWS_AS(CodeLattice::torus_grid(2, 3), InvariantViolation);
    CHECK_THROWS_AS(CodeLattice::torus_grid(3, 2), InvariantViolation);
    CHECK_THROWS_AS(CodeLattice::torus_grid(1, 5), InvariantViolation);
}

TEST_CASE("dual view swaps vertices and faces, keeps edges, and is involutive") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    const CodeLattice dual = root.dual();
    dual.validate();
    CHECK(dual.vertex_count() == 9);
    CHECK(dual.face_count() == 9);
    CHECK(dual.edge_count() == root.edge_count());
    // the square torus grid is self-dual: the dual is again a 4-regular
    // 9-vertex, 9-face torus grid
    for (int v = 0; v < 9; ++v) CHECK(dual.vertex_degree(v) == 4);
    for (int f = 0; f < 9; ++f) CHECK(dual.face_degree(f) == 4);
    CHECK(dual.dual() == root);
    CHECK(dual.dual().percept().bytes == root.percept().bytes);
}

TEST_CASE("root admits exactly 36 actions, 18 per kind") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    const std::vector<Action> actions = root.enumerate_actions();
    CHECK(actions.size() == 36);
    int primal_vertex_splits = 0;
    for (const Action& a : actions) {
        if (a.d == 0) primal_vertex_splits++;
        CHECK(a.p1 < a.p2);
    }
    CHECK(primal_vertex_splits == 18);
    CHECK(std::is_sorted(actions.begin(), actions.end()));
}

TEST_CASE("depth-2 census sums to 1440") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    const auto counts = census_counts(root, 2);
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 36);
    CHECK(counts[2] == 1440);
}

TEST_CASE("every enumerated action applies cleanly and grows by one qubit") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    for (const Action& a : root.enumerate_actions()) {
        const CodeLattice child = root.apply(a); // apply() re-validates
        CHECK(child.edge_count() == 19);
        if (a.d == 0) {
            CHECK(child.vertex_count() == 10);
            CHECK(child.face_count() == 9);
        } else {
            CHECK(child.vertex_count() == 9);
            CHECK(child.face_count() == 10);
        }
        CHECK(child.initial_qubits() == 18);
    }
}

TEST_CASE("split bookkeeping: retained label, new label, face degrees") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    Action a;
    for (const Action& cand : root.enumerate_actions())
        if (cand.d == 0) {
            a = cand;
            break;
        }
    const CodeLattice child = root.apply(a);
    // split vertex keeps its label, the new vertex takes the next one
    CHECK(child.vertex_degree(a.v) == 3);
    CHECK(child.vertex_degree(9) == 3);
    CHECK(child.face_degree(a.p1) == 5);
    CHECK(child.face_degree(a.p2) == 5);
    // the new edge joins the two offspring and separates p1 from p2
    auto [u, v] = child.edge_vertices(18);
    CHECK(std::min(u, v) == std::min<int>(a.v, 9));
    CHECK(std::max(u, v) == std::max<int>(a.v, 9));
    auto [f1, f2] = child.edge_faces(18);
    CHECK(std::min(f1, f2) == a.p1);
    CHECK(std::max(f1, f2) == a.p2);
}

TEST_CASE("illegal actions are rejected with a named invariant") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    // adjacent faces: would double an edge on the dual
    CHECK_THROWS_WITH_AS(root.apply(Action{0, 0, 0, 1}), doctest::Contains("adjacent"),
                         InvariantViolation);
    // same face on both sides
    CHECK_THROWS_AS(root.apply(Action{0, 0, 4, 4}), InvariantViolation);
    // unknown labels
    CHECK_THROWS_AS(root.apply(Action{0, 42, 0, 4}), InvariantViolation);
    CHECK_THROWS_AS(root.apply(Action{1, 3, 2, 99}), InvariantViolation);
}

TEST_CASE("no action ever splits a vertex that would leave degree-2 offspring") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    Action first_d0;
    for (const Action& a : root.enumerate_actions())
        if (a.d == 0) {
            first_d0 = a;
            break;
        }
    const CodeLattice child = root.apply(first_d0);
    // the two degree-3 offspring of the split are not splittable again
    for (const Action& a : child.enumerate_actions()) {
        if (a.d != 0) continue;
        CHECK(a.v != first_d0.v);
        CHECK(a.v != 9);
    }
}

TEST_CASE("percept encoding is deterministic and label-sensitive") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    CHECK(root.percept().bytes == root.percept().bytes);
    CHECK(root.percept().digest == root.percept().digest);

    const std::vector<Action> actions = root.enumerate_actions();
    const CodeLattice child = root.apply(actions[0]);
    CHECK(child.percept().bytes != root.percept().bytes);

    // two translates of the same move give isomorphic codes with different
    // labels; the encoding keeps them distinct
    Action at_v0, at_v1;
    bool have0 = false, have1 = false;
    for (const Action& a : actions) {
        if (a.d != 0) continue;
        if (!have0 && a.v == 0) {
            at_v0 = a;
            have0 = true;
        }
        if (!have1 && a.v == 1) {
            at_v1 = a;
            have1 = true;
        }
    }
    REQUIRE(have0);
    REQUIRE(have1);
    CHECK(root.apply(at_v0).percept().bytes != root.apply(at_v1).percept().bytes);
}

TEST_CASE("apply accepts exactly the enumerated tuples") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    const std::vector<Action> legal = root.enumerate_actions();
    const std::set<Action> legal_set(legal.begin(), legal.end());
    for (std::uint8_t d : {0, 1}) {
        for (int v = 0; v < 9; ++v) {
            for (int p1 = 0; p1 < 9; ++p1) {
                for (int p2 = p1 + 1; p2 < 9; ++p2) {
                    const Action a{d, v, p1, p2};
                    if (legal_set.count(a)) {
                        root.apply(a);
                    } else {
                        CHECK_THROWS_AS(root.apply(a), InvariantViolation);
                    }
                }
            }
        }
    }
}

TEST_CASE("action enumeration is repeatable and depth-2 applications stay valid") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    std::set<std::string> seen;
    for (const Action& a : root.enumerate_actions()) {
        const CodeLattice child = root.apply(a);
        const std::vector<Action> grand = child.enumerate_actions();
        CHECK(grand == child.enumerate_actions());
        // each grandchild apply validates internally
        child.apply(grand[grand.size() / 2]);
        seen.insert(child.percept().bytes);
    }
    CHECK(seen.size() == 36); // all 36 children are distinct as labeled codes
}

#include "qecforge/decode.hpp"
#include "qecforge/homology.hpp"
#include "qecforge/rng.hpp"

#include <doctest.h>

using namespace qecforge;

namespace {

void check_reps_valid(const CodeLattice& lat) {
    const LogicalReps reps = logical_representatives(lat);
    // cycles: zero syndrome on their own graph
    for (const EdgeBits* c : {&reps.z1, &reps.z2}) {
        const auto list = c->to_list();
        CHECK(syndrome(lat, {list.data(), list.size()}, Sector::Z).defects.empty());
    }
    for (const EdgeBits* c : {&reps.x1, &reps.x2}) {
        const auto list = c->to_list();
        CHECK(syndrome(lat, {list.data(), list.size()}, Sector::X).defects.empty());
    }
    // symplectic pairing: identity matrix after ordering
    CHECK(odd_overlap(reps.z1, reps.x1));
    CHECK(!odd_overlap(reps.z1, reps.x2));
    CHECK(!odd_overlap(reps.z2, reps.x1));
    CHECK(odd_overlap(reps.z2, reps.x2));
}

} // namespace

TEST_CASE("root representatives are weight-3 cycles pairing as the identity") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    const LogicalReps reps = logical_representatives(root);
    CHECK(reps.z1.count() == 3);
    CHECK(reps.z2.count() == 3);
    CHECK(reps.x1.count() == 3);
    CHECK(reps.x2.count() == 3);
    check_reps_valid(root);
}

TEST_CASE("code distance of the root is 3 in both sectors") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    CHECK(code_distance(root, Sector::Z) == 3);
    CHECK(code_distance(root, Sector::X) == 3);
}

TEST_CASE("code distance of the 4x4 grid is 4") {
    const CodeLattice lat = CodeLattice::torus_grid(4, 4);
    CHECK(code_distance(lat, Sector::Z) == 4);
    CHECK(code_distance(lat, Sector::X) == 4);
}

TEST_CASE("representatives stay valid along random deformation paths") {
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    PhiloxStream rng(99, 0);
    for (int walk = 0; walk < 12; ++walk) {
        CodeLattice lat = root;
        const int depth = 1 + static_cast<int>(rng.next_u32() % 6);
        for (int d = 0; d < depth; ++d) {
            const std::vector<Action> actions = lat.enumerate_actions();
            lat = lat.apply(actions[rng.next_u32() % actions.size()]);
        }
        check_reps_valid(lat);
        // growing a lattice never drops the distance below 2 and the root
        // family keeps at least its girth
        CHECK(code_distance(lat, Sector::Z) >= 3);
    }
}

TEST_CASE("four vertex splits can raise the Z distance to 4") {
    // lexicographically-first depth-4 witness from the exhaustive search
    const std::vector<Action> seq{
        Action{0, 0, 0, 8}, Action{0, 1, 0, 7}, Action{0, 3, 0, 5}, Action{0, 8, 4, 8}};
    CodeLattice lat = CodeLattice::torus_grid(3, 3);
    for (const Action& a : seq) lat = lat.apply(a);
    CHECK(lat.edge_count() == 22);
    CHECK(code_distance(lat, Sector::Z) == 4);
    CHECK(code_distance(lat, Sector::X) == 3);
}

TEST_CASE("children of the root keep distance at least 3") {
    // no double edges means every cycle has length >= 3, so the distance of
    // any valid lattice is bounded below by 3; spot-check all 36 children
    const CodeLattice root = CodeLattice::torus_grid(3, 3);
    for (const Action& a : root.enumerate_actions()) {
        const int dz = code_distance(root.apply(a), Sector::Z);
        CHECK(dz >= 3);
    }
}

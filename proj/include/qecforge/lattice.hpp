#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qecforge {

using Dart = std::int32_t;

// One code deformation. d selects the lattice the split happens on:
// 0 splits a vertex of the primal lattice (one more X-stabilizer),
// 1 splits a vertex of the dual lattice, i.e. a plaquette (one more
// Z-stabilizer). v is the vertex label on that lattice; p1 < p2 are the two
// faces of that lattice separated by the new edge.
struct Action {
    std::uint8_t d = 0;
    std::int32_t v = -1;
    std::int32_t p1 = -1;
    std::int32_t p2 = -1;

    friend auto operator<=>(const Action&, const Action&) = default;
};

// Canonical description of a labeled lattice: the ordered incidence lists of
// the primal and dual graphs with edge ids renumbered by first appearance.
// Lattices that differ only by the history that produced identical labels
// encode to identical bytes; relabelings of isomorphic lattices do not.
struct Percept {
    std::string bytes;
    std::uint64_t digest = 0;
};

// A surface code on the torus, stored as a dart-based combinatorial map.
// Each edge carries one data qubit and contributes two darts; `opposite`
// pairs the darts of an edge and `next_around_vertex` is the cyclic rotation
// at the dart's vertex. Face orbits follow from the two permutations, so the
// embedding is fully determined. Vertex and face labels are persistent
// across deformations; edge ids are assigned in creation order.
//
// Instances are immutable after construction: `apply` returns a new value.
class CodeLattice {
public:
    CodeLattice() = default;

    // Square grid on the torus; requires rows >= 3 and cols >= 3 (smaller
    // wraps create double edges).
    static CodeLattice torus_grid(int rows, int cols);

    // Same darts and edge ids with vertices and faces exchanged. Involutive:
    // dual().dual() is identical, not merely isomorphic.
    CodeLattice dual() const;

    int vertex_count() const { return n_vertices_; }
    int face_count() const { return n_faces_; }
    int edge_count() const { return n_edges_; }
    int dart_count() const { return static_cast<int>(opposite_.size()); }
    int initial_qubits() const { return n_initial_; }

    Dart opposite(Dart d) const { return opposite_[d]; }
    Dart next_around_vertex(Dart d) const { return next_[d]; }
    Dart face_next(Dart d) const { return next_[opposite_[d]]; }
    int vertex_of(Dart d) const { return vertex_[d]; }
    int face_of(Dart d) const { return face_[d]; }
    int edge_of(Dart d) const { return edge_[d]; }

    Dart dart_of_vertex(int v) const { return vertex_dart_[v]; }
    Dart dart_of_face(int f) const { return face_dart_[f]; }

    int vertex_degree(int v) const;
    int face_degree(int f) const;

    // Endpoints (vertex labels) of an edge, and its two incident faces.
    std::pair<int, int> edge_vertices(int e) const;
    std::pair<int, int> edge_faces(int e) const;

    // The rotation at v as a dart list, starting from the incident dart with
    // the smallest edge id. This is the canonical orientation used by the
    // percept encoding and by the split surgery.
    std::vector<Dart> rotation(int v) const;

    // Every legal deformation, ordered by (d, v, p1, p2).
    std::vector<Action> enumerate_actions() const;

    // Applies one deformation, returning the grown lattice. Throws
    // InvariantViolation naming the violated constraint if `a` is illegal.
    CodeLattice apply(const Action& a) const;

    // Checks every structural invariant (permutation consistency, Euler
    // characteristic, degree bounds, double edges, connectivity); throws
    // InvariantViolation on the first failure.
    void validate() const;

    Percept percept() const;

    bool operator==(const CodeLattice&) const = default;

    // Raw access for serialization.
    std::span<const Dart> raw_opposite() const { return opposite_; }
    std::span<const Dart> raw_next() const { return next_; }
    std::span<const std::int32_t> raw_vertex() const { return vertex_; }
    std::span<const std::int32_t> raw_face() const { return face_; }
    std::span<const std::int32_t> raw_edge() const { return edge_; }

    static CodeLattice from_raw(std::vector<Dart> opposite, std::vector<Dart> next,
                                std::vector<std::int32_t> vertex, std::vector<std::int32_t> face,
                                std::vector<std::int32_t> edge, int n_initial);

private:
    friend class LatticeSurgeon;

    void rebuild_counts_and_anchors();

    std::vector<Dart> opposite_;
    std::vector<Dart> next_;
    std::vector<std::int32_t> vertex_;
    std::vector<std::int32_t> face_;
    std::vector<std::int32_t> edge_;
    std::vector<Dart> vertex_dart_; // one dart per vertex label
    std::vector<Dart> face_dart_;   // one dart per face label
    std::int32_t n_vertices_ = 0;
    std::int32_t n_faces_ = 0;
    std::int32_t n_edges_ = 0;
    std::int32_t n_initial_ = 0;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Exact breadth-first counts of action sequences from `root`: counts[r] is
// the number of length-r sequences, duplicates kept distinct.
std::vector<std::uint64_t> census_counts(const CodeLattice& root, int depth);

} // namespace qecforge

#pragma once

#include "qecforge/homology.hpp"
#include "qecforge/lattice.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qecforge {

// Defect locations: vertex labels of the decoding graph (primal vertices for
// the Z sector, faces for the X sector). Always even-sized on a closed
// surface.
struct Syndrome {
    std::vector<std::int32_t> defects;
};

struct Correction {
    std::vector<std::int32_t> edges;
    Sector sector = Sector::Z;
};

// Decoding view of one sector: the relevant graph with CSR adjacency plus
// each edge's intersection parities against the two opposite-sector logical
// representatives (bit 0 / bit 1). A residual edge set is a logical failure
// iff the XOR of its sig bytes is nonzero.
struct SectorView {
    Sector sector = Sector::Z;
    GraphEdges g;
    std::vector<std::uint8_t> sig;
    std::vector<int> adj_off, adj_to, adj_eid;

    int n_vertices() const { return g.n_vertices; }
    int n_edges() const { return g.n_edges(); }
};

SectorView make_sector_view(const CodeLattice& lat, Sector sector, const LogicalReps& reps);

// Reusable decoder state; all arrays are epoch-stamped so clearing between
// Monte Carlo trials costs O(touched).
class DecodeScratch {
public:
    void attach(const SectorView& view);

    // peeling / union-find working set
    std::vector<std::uint32_t> stamp_v, stamp_e;
    std::vector<std::int32_t> uf_parent, uf_size;
    std::vector<std::uint8_t> uf_par;
    std::vector<std::uint8_t> defect, edge_state;
    std::vector<std::int32_t> deg;
    std::vector<std::int32_t> slot_head, slot_next, slot_edge, slot_to;
    std::vector<std::int32_t> touched, forest, stack;
    std::uint32_t epoch = 0;
    int n_slots = 0;

    void begin_trial() { ++epoch; touched.clear(); forest.clear(); n_slots = 0; }
    bool fresh_v(int v) {
        if (stamp_v[v] == epoch) return false;
        stamp_v[v] = epoch;
        return true;
    }
    bool fresh_e(int e) {
        if (stamp_e[e] == epoch) return false;
        stamp_e[e] = epoch;
        return true;
    }
};

// Defects of an error pattern: odd-incidence vertices of the sector graph.
Syndrome syndrome(const SectorView& view, std::span<const std::int32_t> error_edges);
Syndrome syndrome(const CodeLattice& lat, std::span<const std::int32_t> error_edges, Sector sector);

// Erasure decoder: spanning forest of the erased subgraph, leaves peeled
// outward, each assigned to the correction iff its pendant vertex is
// defective. Returns a correction inside the erasure matching the syndrome;
// throws InvariantViolation if the syndrome is not supported by it.
// Linear in |erased|.
Correction peel_decode(const SectorView& view, std::span<const std::int32_t> erased,
                       const Syndrome& syn, DecodeScratch& scratch);

// Rank (0..2) of the erased subgraph's cycle space image in the torus
// homology, via parities against the opposite-sector representatives. With
// `early_exit` the walk stops at the first nontrivial cycle (rank >= 1),
// which is all a failure test needs.
int homology_rank(const SectorView& view, std::span<const std::int32_t> erased,
                  DecodeScratch& scratch, bool early_exit = false);
int homology_rank(const CodeLattice& lat, std::span<const std::int32_t> erased, Sector sector);

// Pauli-noise decoder: clusters grow from defects by half edges (smallest
// odd cluster first, ties to the smaller root label), merge via weighted
// union with path compression until all parities are even, then the grown
// support is peeled.
Correction union_find_decode(const SectorView& view, const Syndrome& syn, DecodeScratch& scratch);

// True iff the residual (a cycle) is homologically nontrivial. Throws if the
// residual has a nonempty syndrome.
bool is_logical_failure(const SectorView& view, std::span<const std::int32_t> residual);
bool is_logical_failure(const CodeLattice& lat, std::span<const std::int32_t> residual, Sector sector);

} // namespace qecforge

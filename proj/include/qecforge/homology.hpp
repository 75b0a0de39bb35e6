#pragma once

#include "qecforge/edge_bits.hpp"
#include "qecforge/lattice.hpp"

namespace qecforge {

enum class Sector : std::uint8_t { Z, X };

// One representative per homology direction and error type. z1/z2 live on the
// primal graph (paths a logical Z string can take), x1/x2 on the dual. Each is
// a cycle-space element (every vertex of its graph has even incidence) and the
// intersection-parity matrix between (z1, z2) and (x1, x2) is the identity.
// Representatives are weight-minimal within their homology class, so on the
// 3x3 root each has exactly 3 edges.
struct LogicalReps {
    EdgeBits z1, z2;
    EdgeBits x1, x2;
};

LogicalReps logical_representatives(const CodeLattice& lat);

// Minimum weight of a homologically nontrivial cycle on the primal graph
// (Sector::Z) or dual graph (Sector::X). Exact; meant for verification and
// the explorer, not the reward loop.
int code_distance(const CodeLattice& lat, Sector sector);

// Simple endpoint view of the primal or dual graph: per edge id, the two
// incident labels of the relevant graph.
struct GraphEdges {
    int n_vertices = 0;
    std::vector<std::int32_t> u, v; // indexed by edge id

    int n_edges() const { return static_cast<int>(u.size()); }
};

GraphEdges graph_edges(const CodeLattice& lat, Sector sector);

} // namespace qecforge

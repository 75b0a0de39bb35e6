#include "qecforge/homology.hpp"

#include "qecforge/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace qecforge {

GraphEdges graph_edges(const CodeLattice& lat, Sector sector) {
    GraphEdges g;
    const int E = lat.edge_count();
    g.u.resize(E);
    g.v.resize(E);
    if (sector == Sector::Z) {
        g.n_vertices = lat.vertex_count();
        for (int e = 0; e < E; ++e) {
            auto [a, b] = lat.edge_vertices(e);
            g.u[e] = a;
            g.v[e] = b;
        }
    } else {
        g.n_vertices = lat.face_count();
        for (int e = 0; e < E; ++e) {
            auto [a, b] = lat.edge_faces(e);
            g.u[e] = a;
            g.v[e] = b;
        }
    }
    return g;
}

namespace {

struct Csr {
    std::vector<int> off;
    std::vector<int> to;
    std::vector<int> eid;
};

Csr build_csr(const GraphEdges& g) {
    Csr c;
    const int V = g.n_vertices;
    const int E = g.n_edges();
    std::vector<int> deg(V, 0);
    for (int e = 0; e < E; ++e) {
        deg[g.u[e]]++;
        deg[g.v[e]]++;
    }
    c.off.assign(V + 1, 0);
    for (int v = 0; v < V; ++v) c.off[v + 1] = c.off[v] + deg[v];
    c.to.resize(2 * E);
    c.eid.resize(2 * E);
    std::vector<int> at(c.off.begin(), c.off.end() - 1);
    for (int e = 0; e < E; ++e) {
        c.to[at[g.u[e]]] = g.v[e];
        c.eid[at[g.u[e]]++] = e;
        c.to[at[g.v[e]]] = g.u[e];
        c.eid[at[g.v[e]]++] = e;
    }
    return c;
}

// Cycle space basis from a BFS spanning tree rooted at vertex 0.
std::vector<EdgeBits> fundamental_cycles(const GraphEdges& g) {
    const int V = g.n_vertices;
    const int E = g.n_edges();
    const Csr c = build_csr(g);
    std::vector<EdgeBits> path(V, EdgeBits(E));
    std::vector<char> visited(V, 0);
    std::vector<char> tree_edge(E, 0);
    std::deque<int> queue{0};
    visited[0] = 1;
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        for (int i = c.off[x]; i < c.off[x + 1]; ++i) {
            const int w = c.to[i];
            if (visited[w]) continue;
            visited[w] = 1;
            tree_edge[c.eid[i]] = 1;
            path[w] = path[x];
            path[w].flip(c.eid[i]);
            queue.push_back(w);
        }
    }
    std::vector<EdgeBits> cycles;
    for (int e = 0; e < E; ++e) {
        if (tree_edge[e]) continue;
        EdgeBits cyc = path[g.u[e]] ^ path[g.v[e]];
        cyc.flip(e);
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

// Minimum-weight cycle-space element whose intersection parities with
// (ref1, ref2) equal `target` (1, 2 or 3, bit0 for ref1). Found as the
// shortest closed walk in the four-sheet cover that switches sheets on
// reference edges, xor-reduced to an edge set.
EdgeBits min_cycle_with_signature(const GraphEdges& g, const EdgeBits& ref1, const EdgeBits& ref2,
                                  int target, int* weight_out = nullptr) {
    const int V = g.n_vertices;
    const int E = g.n_edges();
    const Csr c = build_csr(g);
    std::vector<std::uint8_t> sig(E, 0);
    for (int e = 0; e < E; ++e)
        sig[e] = static_cast<std::uint8_t>((ref1.test(e) ? 1 : 0) | (ref2.test(e) ? 2 : 0));

    // Any cycle with the requested signature contains an edge whose
    // signature meets the target, so those endpoints suffice as BFS starts.
    std::vector<int> starts;
    {
        std::vector<char> mark(V, 0);
        for (int e = 0; e < E; ++e) {
            if ((sig[e] & target) == 0) continue;
            for (int w : {g.u[e], g.v[e]})
                if (!mark[w]) {
                    mark[w] = 1;
                    starts.push_back(w);
                }
        }
    }

    int best = std::numeric_limits<int>::max();
    std::vector<int> best_walk; // edge ids along the best closed walk
    std::vector<int> dist(4 * V);
    std::vector<int> par_edge(4 * V), par_state(4 * V);
    for (int s0 : starts) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<int> queue;
        const int start_state = 4 * s0 + 0;
        dist[start_state] = 0;
        queue.push_back(start_state);
        const int goal = 4 * s0 + target;
        while (!queue.empty()) {
            const int st = queue.front();
            queue.pop_front();
            if (st == goal) break;
            if (dist[st] + 1 >= best) continue;
            const int x = st / 4, sheet = st % 4;
            for (int i = c.off[x]; i < c.off[x + 1]; ++i) {
                const int nst = 4 * c.to[i] + (sheet ^ sig[c.eid[i]]);
                if (dist[nst] >= 0) continue;
                dist[nst] = dist[st] + 1;
                par_edge[nst] = c.eid[i];
                par_state[nst] = st;
                queue.push_back(nst);
            }
        }
        if (dist[goal] >= 0 && dist[goal] < best) {
            best = dist[goal];
            best_walk.clear();
            for (int st = goal; st != start_state; st = par_state[st]) best_walk.push_back(par_edge[st]);
        }
    }
    if (best == std::numeric_limits<int>::max())
        throw InvariantViolation("no cycle with the requested homology signature exists");
    if (weight_out) *weight_out = best;
    EdgeBits out(E);
    for (int e : best_walk) out.flip(e);
    return out;
}

} // namespace

LogicalReps logical_representatives(const CodeLattice& lat) {
    const GraphEdges gp = graph_edges(lat, Sector::Z);
    const GraphEdges gd = graph_edges(lat, Sector::X);
    std::vector<EdgeBits> prim = fundamental_cycles(gp);
    std::vector<EdgeBits> dua = fundamental_cycles(gd);

    // Symplectic pairs out of the two cycle bases by GF(2) elimination.
    int i1 = -1, j1 = -1;
    for (std::size_t i = 0; i < prim.size() && i1 < 0; ++i)
        for (std::size_t j = 0; j < dua.size(); ++j)
            if (odd_overlap(prim[i], dua[j])) {
                i1 = static_cast<int>(i);
                j1 = static_cast<int>(j);
                break;
            }
    if (i1 < 0) throw InvariantViolation("intersection pairing is degenerate (rank 0)");
    const EdgeBits z1 = prim[i1];
    const EdgeBits x1 = dua[j1];
    for (auto& u : prim)
        if (odd_overlap(u, x1)) u ^= z1;
    for (auto& w : dua)
        if (odd_overlap(z1, w)) w ^= x1;
    int i2 = -1, j2 = -1;
    for (std::size_t i = 0; i < prim.size() && i2 < 0; ++i)
        for (std::size_t j = 0; j < dua.size(); ++j)
            if (odd_overlap(prim[i], dua[j])) {
                i2 = static_cast<int>(i);
                j2 = static_cast<int>(j);
                break;
            }
    if (i2 < 0) throw InvariantViolation("intersection pairing is degenerate (rank 1)");

    LogicalReps reps;
    reps.z1 = min_cycle_with_signature(gp, x1, dua[j2], 1);
    reps.z2 = min_cycle_with_signature(gp, x1, dua[j2], 2);
    reps.x1 = min_cycle_with_signature(gd, reps.z1, reps.z2, 1);
    reps.x2 = min_cycle_with_signature(gd, reps.z1, reps.z2, 2);
    return reps;
}

int code_distance(const CodeLattice& lat, Sector sector) {
    const LogicalReps reps = logical_representatives(lat);
    const GraphEdges g = graph_edges(lat, sector);
    const EdgeBits& r1 = (sector == Sector::Z) ? reps.x1 : reps.z1;
    const EdgeBits& r2 = (sector == Sector::Z) ? reps.x2 : reps.z2;
    int best = std::numeric_limits<int>::max();
    for (int target : {1, 2, 3}) {
        int w = 0;
        min_cycle_with_signature(g, r1, r2, target, &w);
        best = std::min(best, w);
    }
    return best;
}

} // namespace qecforge

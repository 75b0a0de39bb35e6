#include "qecforge/decode.hpp"

#include "qecforge/errors.hpp"

#include <algorithm>
#include <numeric>

namespace qecforge {

SectorView make_sector_view(const CodeLattice& lat, Sector sector, const LogicalReps& reps) {
    SectorView v;
    v.sector = sector;
    v.g = graph_edges(lat, sector);
    const EdgeBits& r1 = (sector == Sector::Z) ? reps.x1 : reps.z1;
    const EdgeBits& r2 = (sector == Sector::Z) ? reps.x2 : reps.z2;
    const int E = v.n_edges();
    v.sig.resize(E);
    for (int e = 0; e < E; ++e)
        v.sig[e] = static_cast<std::uint8_t>((r1.test(e) ? 1 : 0) | (r2.test(e) ? 2 : 0));

    const int V = v.n_vertices();
    std::vector<int> deg(V, 0);
    for (int e = 0; e < E; ++e) {
        deg[v.g.u[e]]++;
        deg[v.g.v[e]]++;
    }
    v.adj_off.assign(V + 1, 0);
    for (int x = 0; x < V; ++x) v.adj_off[x + 1] = v.adj_off[x] + deg[x];
    v.adj_to.resize(2 * E);
    v.adj_eid.resize(2 * E);
    std::vector<int> at(v.adj_off.begin(), v.adj_off.end() - 1);
    for (int e = 0; e < E; ++e) {
        v.adj_to[at[v.g.u[e]]] = v.g.v[e];
        v.adj_eid[at[v.g.u[e]]++] = e;
        v.adj_to[at[v.g.v[e]]] = v.g.u[e];
        v.adj_eid[at[v.g.v[e]]++] = e;
    }
    return v;
}

void DecodeScratch::attach(const SectorView& view) {
    const std::size_t V = view.n_vertices();
    const std::size_t E = view.n_edges();
    if (stamp_v.size() < V) {
        stamp_v.resize(V, 0);
        uf_parent.resize(V);
        uf_size.resize(V);
        uf_par.resize(V);
        defect.resize(V);
        deg.resize(V);
        slot_head.resize(V);
    }
    if (stamp_e.size() < E) {
        stamp_e.resize(E, 0);
        edge_state.resize(E);
    }
    if (slot_next.size() < 2 * E) {
        slot_next.resize(2 * E);
        slot_edge.resize(2 * E);
        slot_to.resize(2 * E);
    }
}

namespace {

// Union-find with lazily stamped entries. Parity tracking is used by the
// homology-rank walk; the peeling forest pass ignores it.
struct Dsu {
    DecodeScratch& s;

    void ensure(int v) {
        if (s.fresh_v(v)) {
            s.uf_parent[v] = v;
            s.uf_size[v] = 1;
            s.uf_par[v] = 0;
            s.defect[v] = 0;
            s.deg[v] = 0;
            s.slot_head[v] = -1;
            s.touched.push_back(v);
        }
    }

    std::pair<int, std::uint8_t> find(int v) {
        std::uint8_t par = 0;
        int r = v;
        while (s.uf_parent[r] != r) {
            par ^= s.uf_par[r];
            r = s.uf_parent[r];
        }
        // compress
        int x = v;
        std::uint8_t px = par;
        while (s.uf_parent[x] != r) {
            const int nx = s.uf_parent[x];
            const std::uint8_t pn = s.uf_par[x];
            s.uf_parent[x] = r;
            s.uf_par[x] = px;
            px ^= pn;
            x = nx;
        }
        return {r, par};
    }

    // Returns false if already joined. `par` is the parity the new relation
    // imposes between a and b.
    bool unite(int a, int b, std::uint8_t par) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return false;
        if (s.uf_size[ra] < s.uf_size[rb]) {
            std::swap(ra, rb);
            std::swap(pa, pb);
        }
        s.uf_parent[rb] = ra;
        s.uf_par[rb] = static_cast<std::uint8_t>(pa ^ pb ^ par);
        s.uf_size[ra] += s.uf_size[rb];
        return true;
    }
};

} // namespace

Syndrome syndrome(const SectorView& view, std::span<const std::int32_t> error_edges) {
    std::vector<std::int32_t> count(view.n_vertices(), 0);
    for (int e : error_edges) {
        count[view.g.u[e]] ^= 1;
        count[view.g.v[e]] ^= 1;
    }
    Syndrome syn;
    for (int v = 0; v < view.n_vertices(); ++v)
        if (count[v]) syn.defects.push_back(v);
    return syn;
}

Syndrome syndrome(const CodeLattice& lat, std::span<const std::int32_t> error_edges, Sector sector) {
    SectorView view;
    view.sector = sector;
    view.g = graph_edges(lat, sector);
    return syndrome(view, error_edges);
}

Correction peel_decode(const SectorView& view, std::span<const std::int32_t> erased,
                       const Syndrome& syn, DecodeScratch& s) {
    s.attach(view);
    s.begin_trial();
    Dsu dsu{s};

    for (int v : syn.defects) {
        dsu.ensure(v);
        s.defect[v] = 1;
    }
    // Spanning forest of the erased subgraph, edges taken in ascending id
    // order; non-forest erased edges never enter the correction.
    for (int e : erased) {
        const int u = view.g.u[e], v = view.g.v[e];
        dsu.ensure(u);
        dsu.ensure(v);
        if (!dsu.unite(u, v, 0)) continue;
        s.forest.push_back(e);
        s.slot_next[s.n_slots] = s.slot_head[u];
        s.slot_edge[s.n_slots] = e;
        s.slot_to[s.n_slots] = v;
        s.slot_head[u] = s.n_slots++;
        s.slot_next[s.n_slots] = s.slot_head[v];
        s.slot_edge[s.n_slots] = e;
        s.slot_to[s.n_slots] = u;
        s.slot_head[v] = s.n_slots++;
        s.deg[u]++;
        s.deg[v]++;
        s.fresh_e(e);
        s.edge_state[e] = 0;
    }

    Correction corr;
    corr.sector = view.sector;
    s.stack.clear();
    std::vector<std::int32_t> leaves;
    for (int v : s.touched)
        if (s.deg[v] == 1) leaves.push_back(v);
    std::sort(leaves.rbegin(), leaves.rend());
    s.stack = leaves;

    while (!s.stack.empty()) {
        const int v = s.stack.back();
        s.stack.pop_back();
        if (s.deg[v] != 1) continue;
        int e = -1, u = -1;
        for (int slot = s.slot_head[v]; slot >= 0; slot = s.slot_next[slot]) {
            if (s.edge_state[s.slot_edge[slot]] == 0) {
                e = s.slot_edge[slot];
                u = s.slot_to[slot];
                break;
            }
        }
        s.edge_state[e] = 1;
        s.deg[v]--;
        s.deg[u]--;
        if (s.defect[v]) {
            corr.edges.push_back(e);
            s.defect[v] = 0;
            s.defect[u] ^= 1;
        }
        if (s.deg[u] == 1) s.stack.push_back(u);
    }

    for (int v : s.touched)
        if (s.defect[v])
            throw InvariantViolation("peeling: syndrome is not supported by the erased subgraph");
    std::sort(corr.edges.begin(), corr.edges.end());
    return corr;
}

int homology_rank(const SectorView& view, std::span<const std::int32_t> erased, DecodeScratch& s,
                  bool early_exit) {
    s.attach(view);
    s.begin_trial();
    Dsu dsu{s};
    std::uint8_t basis = 0;
    for (int e : erased) {
        const int u = view.g.u[e], v = view.g.v[e];
        dsu.ensure(u);
        dsu.ensure(v);
        const auto [ru, pu] = dsu.find(u);
        const auto [rv, pv] = dsu.find(v);
        if (ru != rv) {
            dsu.unite(ru, rv, static_cast<std::uint8_t>(pu ^ pv ^ view.sig[e]));
            continue;
        }
        const std::uint8_t c = pu ^ pv ^ view.sig[e];
        if (c == 0) continue;
        if (early_exit) return 1;
        if (basis == 0) basis = c;
        else if (basis != c) return 2; // two distinct nonzero classes span everything
    }
    return basis ? 1 : 0;
}

int homology_rank(const CodeLattice& lat, std::span<const std::int32_t> erased, Sector sector) {
    const SectorView view = make_sector_view(lat, sector, logical_representatives(lat));
    DecodeScratch scratch;
    return homology_rank(view, erased, scratch);
}

Correction union_find_decode(const SectorView& view, const Syndrome& syn, DecodeScratch& s) {
    s.attach(view);
    if (syn.defects.empty()) return Correction{{}, view.sector};
    if (syn.defects.size() % 2 != 0)
        throw InvariantViolation("union-find: odd number of defects on a closed surface");

    const int E = view.n_edges();
    std::vector<std::uint8_t> grow(E, 0);
    std::vector<std::int32_t> parent(view.n_vertices()), size1(view.n_vertices());
    std::vector<std::uint8_t> parity(view.n_vertices(), 0);
    std::vector<std::vector<std::int32_t>> members(view.n_vertices());
    std::iota(parent.begin(), parent.end(), 0);
    std::fill(size1.begin(), size1.end(), 1);
    for (int v = 0; v < view.n_vertices(); ++v) members[v] = {v};
    for (int v : syn.defects) parity[v] = 1;

    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    std::vector<std::int32_t> support;
    auto complete_edge = [&](int e) {
        support.push_back(e);
        const int ra = find(view.g.u[e]), rb = find(view.g.v[e]);
        if (ra == rb) return;
        int big = ra, small = rb;
        if (size1[big] < size1[small] || (size1[big] == size1[small] && big > small)) std::swap(big, small);
        parent[small] = big;
        size1[big] += size1[small];
        parity[big] ^= parity[small];
        auto& mb = members[big];
        mb.insert(mb.end(), members[small].begin(), members[small].end());
        members[small].clear();
        members[small].shrink_to_fit();
    };

    while (true) {
        // smallest odd cluster, ties to the smaller root label
        int pick = -1;
        for (int v = 0; v < view.n_vertices(); ++v) {
            if (find(v) != v || !parity[v]) continue;
            if (pick < 0 || size1[v] < size1[pick] || (size1[v] == size1[pick] && v < pick)) pick = v;
        }
        if (pick < 0) break;
        std::vector<std::int32_t> completed;
        for (int m : members[pick]) {
            for (int i = view.adj_off[m]; i < view.adj_off[m + 1]; ++i) {
                const int e = view.adj_eid[i];
                if (grow[e] >= 2) continue;
                if (find(view.adj_to[i]) == pick) continue; // internal edge
                if (++grow[e] == 2) completed.push_back(e);
            }
        }
        std::sort(completed.begin(), completed.end());
        completed.erase(std::unique(completed.begin(), completed.end()), completed.end());
        for (int e : completed) complete_edge(e);
    }

    std::sort(support.begin(), support.end());
    Correction corr = peel_decode(view, support, syn, s);
    corr.sector = view.sector;
    return corr;
}

bool is_logical_failure(const SectorView& view, std::span<const std::int32_t> residual) {
    std::vector<std::int32_t> count(view.n_vertices(), 0);
    std::uint8_t cls = 0;
    for (int e : residual) {
        count[view.g.u[e]] ^= 1;
        count[view.g.v[e]] ^= 1;
        cls ^= view.sig[e];
    }
    for (int v = 0; v < view.n_vertices(); ++v)
        if (count[v]) throw InvariantViolation("residual has a nonempty syndrome, not a cycle");
    return cls != 0;
}

bool is_logical_failure(const CodeLattice& lat, std::span<const std::int32_t> residual, Sector sector) {
    const SectorView view = make_sector_view(lat, sector, logical_representatives(lat));
    return is_logical_failure(view, residual);
}

} // namespace qecforge
